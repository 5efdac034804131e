//! Minimal Nelder-Mead simplex minimizer.
//!
//! Uses the dimension-adaptive coefficients of Gao and Han, which behave far
//! better than the classic constants once the parameter count grows past a
//! handful. The caller drives restarts and re-initializations; this module
//! only runs a single simplex to convergence.

pub struct NelderMead {
    pub max_iters: usize,
    /// Stop once the value spread across the simplex falls below this.
    pub spread_tol: f64,
    /// Optional early stop: quit as soon as the best value is at or below
    /// this target.
    pub target_value: Option<f64>,
}

pub struct SimplexResult {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

impl NelderMead {
    /// Minimizes `f` starting from a simplex spanned by `origin` plus
    /// `scale`-sized steps along each coordinate.
    pub fn minimize<F: FnMut(&[f64]) -> f64>(
        &self,
        mut f: F,
        origin: &[f64],
        scale: f64,
    ) -> SimplexResult {
        let n = origin.len();
        if n == 0 {
            let value = f(origin);
            return SimplexResult {
                best_point: origin.to_vec(),
                best_value: value,
                iterations: 0,
                evaluations: 1,
            };
        }
        let nf = n as f64;
        let alpha = 1.0;
        let beta = 1.0 + 2.0 / nf;
        let gamma = 0.75 - 1.0 / (2.0 * nf);
        let delta = 1.0 - 1.0 / nf;

        let mut points: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        points.push(origin.to_vec());
        for i in 0..n {
            let mut p = origin.to_vec();
            p[i] += scale;
            points.push(p);
        }
        let mut values: Vec<f64> = points.iter().map(|p| f(p)).collect();
        let mut evaluations = n + 1;
        let mut iterations = 0;

        while iterations < self.max_iters {
            iterations += 1;
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            let best = order[0];
            let worst = order[n];
            let second_worst = order[n - 1];

            if let Some(target) = self.target_value {
                if values[best] <= target {
                    break;
                }
            }
            if values[worst] - values[best] < self.spread_tol {
                break;
            }

            // Centroid of all but the worst vertex.
            let mut centroid = vec![0.0; n];
            for (idx, p) in points.iter().enumerate() {
                if idx == worst {
                    continue;
                }
                for (c, x) in centroid.iter_mut().zip(p) {
                    *c += x;
                }
            }
            for c in &mut centroid {
                *c /= nf;
            }

            let blend = |from: &[f64], towards: &[f64], t: f64| -> Vec<f64> {
                from.iter().zip(towards).map(|(a, b)| a + t * (b - a)).collect()
            };
            // Reflection of the worst vertex through the centroid.
            let reflected = blend(&centroid, &points[worst], -alpha);
            let f_reflected = f(&reflected);
            evaluations += 1;

            if f_reflected < values[order[0]] {
                let expanded = blend(&centroid, &points[worst], -alpha * beta);
                let f_expanded = f(&expanded);
                evaluations += 1;
                if f_expanded < f_reflected {
                    points[worst] = expanded;
                    values[worst] = f_expanded;
                } else {
                    points[worst] = reflected;
                    values[worst] = f_reflected;
                }
            } else if f_reflected < values[second_worst] {
                points[worst] = reflected;
                values[worst] = f_reflected;
            } else {
                let (contracted, reference) = if f_reflected < values[worst] {
                    (blend(&centroid, &reflected, gamma), f_reflected)
                } else {
                    (blend(&centroid, &points[worst], gamma), values[worst])
                };
                let f_contracted = f(&contracted);
                evaluations += 1;
                if f_contracted < reference {
                    points[worst] = contracted;
                    values[worst] = f_contracted;
                } else {
                    // Shrink everything towards the best vertex.
                    let anchor = points[best].clone();
                    for idx in 0..=n {
                        if idx == best {
                            continue;
                        }
                        points[idx] = blend(&anchor, &points[idx], delta);
                        values[idx] = f(&points[idx]);
                        evaluations += 1;
                    }
                }
            }
        }

        let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
        SimplexResult {
            best_point: points[best].clone(),
            best_value: values[best],
            iterations,
            evaluations,
        }
    }
}
