//! Coherence measures on pure states.
//!
//! A pure-state coherence measure is a symmetric concave function `f` on the
//! probability simplex with `f(e_1) = 0`, evaluated on the coherence vector
//! (the squared moduli of the amplitudes). The registry carries the measures
//! used throughout: relative entropy, l1, fidelity, the qubit power family,
//! and convex mixes. Arbitrary functions can be wrapped for testing; a
//! randomized checker probes the defining conditions.

use crate::exec;
use crate::qmat::DensityMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("state is not normalized: |psi|^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("not a probability vector: {reason}")]
    BadProbabilityVector { reason: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("bad measure parameters: {reason}")]
    BadParams { reason: String },
    #[error("unknown measure spec {spec:?}")]
    BadSpec { spec: String },
}

/// Normalized complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, MeasureError> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(MeasureError::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes and wraps; fails only on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self, MeasureError> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(MeasureError::NotNormalized { norm_sqr });
        }
        let norm = norm_sqr.sqrt();
        Ok(Self { amplitudes: amplitudes.into_iter().map(|a| a / norm).collect() })
    }

    /// Basis vector |i>.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[i] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Squared moduli of the amplitudes; insensitive to per-component phases.
    pub fn coherence_vector(&self) -> CoherenceVector {
        CoherenceVector { probs: self.amplitudes.iter().map(|a| a.norm_sqr()).collect() }
    }
}

/// Probability vector of squared amplitude moduli.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceVector {
    probs: Vec<f64>,
}

impl CoherenceVector {
    pub fn new(probs: Vec<f64>) -> Result<Self, MeasureError> {
        if let Some(&bad) = probs.iter().find(|&&p| p < -1e-12) {
            return Err(MeasureError::BadProbabilityVector {
                reason: format!("negative entry {bad}"),
            });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(MeasureError::BadProbabilityVector {
                reason: format!("sum {sum} is not 1"),
            });
        }
        Ok(Self { probs: probs.into_iter().map(|p| p.max(0.0)).collect() })
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

type MeasureFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A pure-state coherence measure: a named symmetric concave function of the
/// coherence vector, possibly restricted to a fixed dimension.
#[derive(Clone)]
pub struct CoherenceMeasure {
    name: String,
    required_dim: Option<usize>,
    f: MeasureFn,
}

impl fmt::Debug for CoherenceMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoherenceMeasure").field("name", &self.name).finish()
    }
}

impl CoherenceMeasure {
    /// Shannon entropy of the coherence vector, in bits. The maximally
    /// coherent qubit state scores exactly 1.
    pub fn entropy() -> Self {
        Self {
            name: "entropy".into(),
            required_dim: None,
            f: Arc::new(|x| {
                -exec::stable_sum(
                    &x.iter().map(|&p| if p > 0.0 { p * p.log2() } else { 0.0 }).collect::<Vec<_>>(),
                )
            }),
        }
    }

    /// Sum of sqrt(x_i x_j) over i != j, computed as (sum_i sqrt(x_i))^2 - 1
    /// which is exactly symmetric and cheaper.
    pub fn l1() -> Self {
        Self {
            name: "l1".into(),
            required_dim: None,
            f: Arc::new(|x| {
                let s: f64 = exec::stable_sum(&x.iter().map(|&p| p.max(0.0).sqrt()).collect::<Vec<_>>());
                (s * s - 1.0).max(0.0)
            }),
        }
    }

    /// sqrt(1 - max_i x_i).
    pub fn fidelity() -> Self {
        Self {
            name: "fidelity".into(),
            required_dim: None,
            f: Arc::new(|x| {
                let max = x.iter().fold(0.0_f64, |m, &p| m.max(p));
                (1.0 - max).max(0.0).sqrt()
            }),
        }
    }

    /// Qubit-only family `1 - (2 (x_max - 1/2))^{2k}`; flat around the
    /// uniform vector for large `k`.
    pub fn power(k: u32) -> Result<Self, MeasureError> {
        if k < 1 {
            return Err(MeasureError::BadParams { reason: format!("power exponent k={k} < 1") });
        }
        Ok(Self {
            name: format!("power:k={k}"),
            required_dim: Some(2),
            f: Arc::new(move |x| {
                let max = x[0].max(x[1]);
                1.0 - (2.0 * (max - 0.5)).powi(2 * k as i32)
            }),
        })
    }

    /// Convex combination of measures. Weights must be nonnegative and sum
    /// to 1 within 1e-9.
    pub fn mix(parts: Vec<(f64, CoherenceMeasure)>) -> Result<Self, MeasureError> {
        if parts.is_empty() {
            return Err(MeasureError::BadParams { reason: "empty mix".into() });
        }
        if parts.iter().any(|(w, _)| *w < 0.0) {
            return Err(MeasureError::BadParams { reason: "negative mix weight".into() });
        }
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(MeasureError::BadParams {
                reason: format!("mix weights sum to {total}, not 1"),
            });
        }
        let mut required_dim = None;
        for (_, m) in &parts {
            match (required_dim, m.required_dim) {
                (None, d) => required_dim = d,
                (Some(a), Some(b)) if a != b => {
                    return Err(MeasureError::BadParams {
                        reason: format!("mix components require dimensions {a} and {b}"),
                    })
                }
                _ => {}
            }
        }
        let name = format!(
            "mix:{}",
            parts
                .iter()
                .map(|(w, m)| format!("{w}*{}", m.name))
                .collect::<Vec<_>>()
                .join("+")
        );
        let parts: Vec<(f64, MeasureFn)> = parts.into_iter().map(|(w, m)| (w, m.f)).collect();
        Ok(Self {
            name,
            required_dim,
            f: Arc::new(move |x| parts.iter().map(|(w, f)| w * f(x)).sum()),
        })
    }

    /// Wraps an arbitrary function, e.g. a deliberately broken one for
    /// negative-control tests. No conditions are checked.
    pub fn custom(name: &str, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), required_dim: None, f: Arc::new(f) }
    }

    /// Parses a measure spec string:
    /// `entropy`, `l1`, `fidelity`, `power:k=<int>`,
    /// `mix:<w1>*<m1>+<w2>*<m2>[+...]`.
    pub fn parse(spec: &str) -> Result<Self, MeasureError> {
        let spec = spec.trim();
        match spec {
            "entropy" => return Ok(Self::entropy()),
            "l1" => return Ok(Self::l1()),
            "fidelity" => return Ok(Self::fidelity()),
            _ => {}
        }
        if let Some(rest) = spec.strip_prefix("power:k=") {
            let k: i64 = rest
                .parse()
                .map_err(|_| MeasureError::BadSpec { spec: spec.to_string() })?;
            if k < 1 {
                return Err(MeasureError::BadParams { reason: format!("power exponent k={k} < 1") });
            }
            return Self::power(k as u32);
        }
        if let Some(rest) = spec.strip_prefix("mix:") {
            let mut parts = Vec::new();
            for term in rest.split('+') {
                let (w, name) = term
                    .split_once('*')
                    .ok_or_else(|| MeasureError::BadSpec { spec: spec.to_string() })?;
                let weight: f64 = w
                    .trim()
                    .parse()
                    .map_err(|_| MeasureError::BadSpec { spec: spec.to_string() })?;
                parts.push((weight, Self::parse(name)?));
            }
            return Self::mix(parts);
        }
        Err(MeasureError::BadSpec { spec: spec.to_string() })
    }

    /// The measures defined in every dimension: entropy, l1, fidelity.
    pub fn registry() -> Vec<CoherenceMeasure> {
        vec![Self::entropy(), Self::l1(), Self::fidelity()]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn required_dim(&self) -> Option<usize> {
        self.required_dim
    }

    /// Evaluates `f` on a coherence vector.
    pub fn eval(&self, v: &CoherenceVector) -> Result<f64, MeasureError> {
        if let Some(d) = self.required_dim {
            if v.dim() != d {
                return Err(MeasureError::DimensionMismatch { expected: d, got: v.dim() });
            }
        }
        Ok((self.f)(v.probs()))
    }

    /// Coherence of a pure state: `f` applied to its coherence vector.
    pub fn pure_coherence(&self, psi: &PureState) -> Result<f64, MeasureError> {
        self.eval(&psi.coherence_vector())
    }

    fn eval_raw(&self, probs: &[f64]) -> f64 {
        (self.f)(probs)
    }
}

/// Sum of the off-diagonal moduli of a density matrix. For the states of
/// the two-parameter family `[[1/2, x], [x, 1/2]]` this is the floor that
/// the average l1 coherence plateaus at.
pub fn l1_of_density(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += rho.entry(i, j).norm();
            }
        }
    }
    sum
}

/// Majorization test: true iff `x ≺ y`, i.e. after sorting both descending
/// every prefix sum of `x` stays at or below that of `y` (tolerance 1e-12).
pub fn majorizes(y: &CoherenceVector, x: &CoherenceVector) -> Result<bool, MeasureError> {
    if x.dim() != y.dim() {
        return Err(MeasureError::DimensionMismatch { expected: y.dim(), got: x.dim() });
    }
    let mut xs = x.probs().to_vec();
    let mut ys = y.probs().to_vec();
    xs.sort_by(|a, b| b.total_cmp(a));
    ys.sort_by(|a, b| b.total_cmp(a));
    let mut px = 0.0;
    let mut py = 0.0;
    for (a, b) in xs.iter().zip(&ys) {
        px += a;
        py += b;
        if px > py + 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the randomized verification of the measure conditions:
/// vanishing on the basis state, permutation symmetry, concavity.
#[derive(Debug, Clone)]
pub struct MeasureCheckReport {
    pub trials: u32,
    pub dim: usize,
    /// |f(e_1)|; condition (i) requires 0.
    pub base_point_violation: f64,
    /// Worst |f(x) - f(Px)| over random permutations.
    pub worst_symmetry_violation: f64,
    /// Worst positive part of `lambda f(x) + (1-lambda) f(y) - f(mid)`.
    pub worst_concavity_violation: f64,
}

impl MeasureCheckReport {
    /// True when all three conditions hold at the library tolerances
    /// (1e-12 for the base point and symmetry, 1e-10 for concavity).
    pub fn is_clean(&self) -> bool {
        self.base_point_violation <= 1e-12
            && self.worst_symmetry_violation <= 1e-12
            && self.worst_concavity_violation <= 1e-10
    }
}

/// Randomized spot-check of the measure conditions. Deterministic for a
/// given seed; trials use independently derived streams so they can run in
/// parallel. If the measure is dimension-restricted, the check runs at that
/// dimension regardless of `dim`.
pub fn check_measure(
    measure: &CoherenceMeasure,
    dim: usize,
    trials: u32,
    seed: u64,
) -> MeasureCheckReport {
    let dim = measure.required_dim().unwrap_or(dim).max(2);
    let mut basis = vec![0.0; dim];
    basis[0] = 1.0;
    let base_point_violation = measure.eval_raw(&basis).abs();
    let worst = exec::map_indexed(trials as usize, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(exec::derive_seed(seed, t as u64));
        let x = random_simplex(dim, &mut rng);
        let y = random_simplex(dim, &mut rng);
        // Symmetry against a random permutation of x.
        let mut perm: Vec<usize> = (0..dim).collect();
        for i in (1..dim).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let permuted: Vec<f64> = perm.iter().map(|&i| x[i]).collect();
        let sym = (measure.eval_raw(&x) - measure.eval_raw(&permuted)).abs();
        // Concavity along a random chord.
        let lambda: f64 = rng.gen_range(0.0..=1.0);
        let mid: Vec<f64> = x
            .iter()
            .zip(&y)
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        let conc = lambda * measure.eval_raw(&x) + (1.0 - lambda) * measure.eval_raw(&y)
            - measure.eval_raw(&mid);
        (sym, conc.max(0.0))
    });
    let worst_symmetry_violation = worst.iter().map(|w| w.0).fold(0.0, f64::max);
    let worst_concavity_violation = worst.iter().map(|w| w.1).fold(0.0, f64::max);
    MeasureCheckReport {
        trials,
        dim,
        base_point_violation,
        worst_symmetry_violation,
        worst_concavity_violation,
    }
}

/// Uniform (Dirichlet(1,..,1)) sample from the probability simplex.
pub fn random_simplex<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            -u.ln()
        })
        .collect();
    let sum: f64 = v.iter().sum();
    for x in &mut v {
        *x /= sum;
    }
    v
}
