//! The diagonal upper bound on average coherence and its saturation.
//!
//! For any decomposition of `rho` and any symmetric concave `f`, the average
//! coherence is at most `f` applied to the diagonal of `rho` — a quantity
//! measurable with projective measurements alone. The bound is tight in
//! dimensions two and three. This module provides the bound, the equality
//! condition, the closed-form optimal decompositions for qubits and for
//! incoherent states, and a derivative-free maximizer that searches the
//! isometry freedom directly and reports how close it gets.

use crate::ensembles::{build_from_columns, Ensemble, EnsembleError};
use crate::exec;
use crate::measures::{CoherenceMeasure, CoherenceVector, MeasureError, PureState};
use crate::qmat::{DensityMatrix, QmatError, SUPPORT_TOL};
use crate::simplex::NelderMead;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("ensemble does not decompose the state: residual {residual:.3e} > {tol:.3e}")]
    NotADecomposition { residual: f64, tol: f64 },
    #[error("state must be a qubit, got dimension {dim}")]
    NotAQubit { dim: usize },
    #[error("not a probability vector: {reason}")]
    BadProbabilityVector { reason: String },
    #[error("need at least {rank} components for a rank-{rank} state, got {m}")]
    TooFewComponents { m: usize, rank: usize },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Matrix(#[from] QmatError),
}

/// Outcome of a maximization run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    /// `f` applied to the diagonal of the input state.
    pub bound: f64,
    /// Best average coherence found.
    pub achieved: f64,
    /// `bound - achieved`; nonnegative up to solver tolerance.
    pub gap: f64,
    /// Whether every witness component dephases to the input diagonal at the
    /// resolution the search achieved. A value gap of `g` only pins the
    /// coherence vectors to O(sqrt(g)) for a strictly concave measure, so the
    /// check runs at `max(1e-6, 50 sqrt(g))`.
    pub equality_condition_met: bool,
    /// The decomposition achieving `achieved`.
    pub witness: Ensemble,
}

/// `f(rho_11, ..., rho_dd)`: needs only the diagonal of the state.
pub fn upper_bound(f: &CoherenceMeasure, rho: &DensityMatrix) -> Result<f64, BoundError> {
    let diag = CoherenceVector::new(rho.diagonal())?;
    Ok(f.eval(&diag)?)
}

/// True iff `ensemble` decomposes `rho` within `tol` and every component's
/// coherence vector matches the diagonal of `rho` entrywise within `tol`.
pub fn equality_condition(
    ensemble: &Ensemble,
    rho: &DensityMatrix,
    tol: f64,
) -> Result<bool, BoundError> {
    let residual = ensemble.reconstruct().matrix().max_abs_diff(rho.matrix());
    if residual > tol {
        return Err(BoundError::NotADecomposition { residual, tol });
    }
    let diag = rho.diagonal();
    for (_, psi) in ensemble.components() {
        let v = psi.coherence_vector();
        for (p, d) in v.probs().iter().zip(&diag) {
            if (p - d).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Closed-form optimal decomposition of a qubit state: two components
/// `sqrt(rho00)|0> ± e^{-i arg(rho01)} sqrt(rho11)|1>` with weights
/// `(1 ± |rho01|/sqrt(rho00 rho11))/2`. Both components share the state's
/// diagonal as coherence vector, so the average coherence meets the bound
/// for every measure. A state with an empty diagonal entry is already a
/// basis projector and comes back as a single-component ensemble.
pub fn optimal_qubit(rho: &DensityMatrix) -> Result<Ensemble, BoundError> {
    if rho.dim() != 2 {
        return Err(BoundError::NotAQubit { dim: rho.dim() });
    }
    let a = rho.entry(0, 0).re;
    let b = rho.entry(1, 1).re;
    if a <= SUPPORT_TOL {
        return Ok(Ensemble::pure(PureState::basis(2, 1)));
    }
    if b <= SUPPORT_TOL {
        return Ok(Ensemble::pure(PureState::basis(2, 0)));
    }
    let off = rho.entry(0, 1);
    // arg(0) taken as 0 so the fully incoherent case stays deterministic.
    let phase = if off.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        (off / off.norm()).conj()
    };
    let ratio = (off.norm() / (a * b).sqrt()).min(1.0);
    let amp0 = Complex64::new(a.sqrt(), 0.0);
    let amp1 = phase * b.sqrt();
    let mut components = Vec::new();
    for (sign, weight) in [(1.0, (1.0 + ratio) / 2.0), (-1.0, (1.0 - ratio) / 2.0)] {
        if weight <= 1e-14 {
            continue;
        }
        components.push((weight, PureState::new(vec![amp0, sign * amp1])?));
    }
    Ok(Ensemble::new(components)?)
}

/// Optimal decomposition of an incoherent state given its diagonal: `d`
/// equal-weight components with Fourier phases,
/// `|psi_k> = sum_j e^{2 pi i k j / d} sqrt(p_j) |j>`. Every component's
/// coherence vector is the diagonal itself.
pub fn optimal_incoherent(diag: &[f64]) -> Result<Ensemble, BoundError> {
    if diag.iter().any(|&p| p < -1e-12) {
        return Err(BoundError::BadProbabilityVector { reason: "negative entry".into() });
    }
    let sum: f64 = diag.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(BoundError::BadProbabilityVector {
            reason: format!("sum {sum} is not 1"),
        });
    }
    let d = diag.len();
    let roots: Vec<f64> = diag.iter().map(|&p| (p.max(0.0) / sum).sqrt()).collect();
    let mut components = Vec::with_capacity(d);
    for k in 0..d {
        let amps: Vec<Complex64> = roots
            .iter()
            .enumerate()
            .map(|(j, &r)| {
                Complex64::from_polar(r, std::f64::consts::TAU * (k * j) as f64 / d as f64)
            })
            .collect();
        components.push((1.0 / d as f64, PureState::new(amps)?));
    }
    Ok(Ensemble::new(components)?)
}

/// Tuning knobs for [`maximize_average_with`].
#[derive(Debug, Clone)]
pub struct MaximizeOptions {
    /// Number of ensemble components; defaults to `dim^2` which is safely
    /// above the component count needed in dimensions two and three.
    pub components: Option<usize>,
    /// Independent random starts.
    pub restarts: u32,
    pub seed: u64,
    /// Stop a restart once `bound - value` falls to this.
    pub target_gap: f64,
    /// Simplex re-initializations within one restart.
    pub max_stages: u32,
    pub nm_max_iters: usize,
    pub nm_spread_tol: f64,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            components: None,
            restarts: 8,
            seed: 0,
            target_gap: 1e-8,
            max_stages: 30,
            nm_max_iters: 5000,
            nm_spread_tol: 1e-10,
        }
    }
}

/// Searches the isometry freedom for the decomposition with the largest
/// average coherence. See [`maximize_average_with`] for the mechanics.
pub fn maximize_average(
    f: &CoherenceMeasure,
    rho: &DensityMatrix,
    m: usize,
    restarts: u32,
    seed: u64,
) -> Result<BoundReport, BoundError> {
    maximize_average_with(
        f,
        rho,
        &MaximizeOptions {
            components: Some(m),
            restarts: restarts.max(1),
            seed,
            ..MaximizeOptions::default()
        },
    )
}

/// Derivative-free maximization of the average coherence over `m`-component
/// decompositions.
///
/// The isometry is parameterized by a chain of Givens rotations with phases
/// (two parameters per plane), which reaches every isometry up to physically
/// irrelevant per-component phases. Each restart runs Nelder-Mead from a
/// random start and re-initializes the simplex around the incumbent with a
/// shrinking radius until the target gap or the stage cap is hit. Restarts
/// are independent, derive their seeds from (seed, index), and reduce by
/// best value with index tie-breaking, so the result is deterministic
/// regardless of scheduling.
pub fn maximize_average_with(
    f: &CoherenceMeasure,
    rho: &DensityMatrix,
    options: &MaximizeOptions,
) -> Result<BoundReport, BoundError> {
    let bound = upper_bound(f, rho)?;
    let eig = rho.eigh()?;
    let rank = eig.eigenvalues.iter().filter(|&&l| l > 1e-12).count();
    let m = options.components.unwrap_or(rho.dim() * rho.dim()).max(1);
    if m < rank {
        return Err(BoundError::TooFewComponents { m, rank });
    }
    let eigenvalues = eig.eigenvalues[..rank].to_vec();
    let eigenvectors = eig.eigenvectors[..rank].to_vec();

    let plan = GivensPlan::new(m, rank);
    let restarts = options.restarts.max(1) as usize;
    let runs = exec::map_indexed(restarts, |r| {
        let mut rng =
            ChaCha8Rng::seed_from_u64(exec::derive_seed(options.seed, r as u64));
        run_restart(f, &eigenvalues, &eigenvectors, &plan, bound, options, &mut rng)
    });
    let best = runs
        .into_iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.1.total_cmp(&b.1).then(ib.cmp(ia)))
        .map(|(_, run)| run)
        .expect("at least one restart");

    let witness = plan.ensemble(&eigenvalues, &eigenvectors, &best.0)?;
    let achieved = witness.average_coherence(f)?;
    let equality_condition_met = equality_condition(&witness, rho, 1e-6).unwrap_or(false);
    Ok(BoundReport { bound, achieved, gap: bound - achieved, equality_condition_met, witness })
}

fn run_restart(
    f: &CoherenceMeasure,
    eigenvalues: &[f64],
    eigenvectors: &[Vec<Complex64>],
    plan: &GivensPlan,
    bound: f64,
    options: &MaximizeOptions,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, f64) {
    let mut point: Vec<f64> =
        (0..plan.param_count()).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    let scratch = RefCell::new(plan.scratch());
    let objective = |params: &[f64]| {
        let mut ws = scratch.borrow_mut();
        -plan.average_coherence(f, eigenvalues, eigenvectors, params, &mut ws)
    };
    let mut value = -objective(&point);
    if plan.param_count() == 0 {
        return (point, value);
    }
    let mut scale = 0.8;
    for _ in 0..options.max_stages {
        if bound - value <= options.target_gap {
            break;
        }
        let nm = NelderMead {
            max_iters: options.nm_max_iters,
            spread_tol: options.nm_spread_tol,
            target_value: Some(-(bound - options.target_gap)),
        };
        let result = nm.minimize(&objective, &point, scale);
        if -result.best_value > value {
            value = -result.best_value;
            point = result.best_point;
        }
        scale = (scale * 0.35).max(1e-6);
    }
    (point, value)
}

/// Chain of Givens rotations acting on the first `cols` columns of an
/// `m x m` unitary. `2 * m(m-1)/2` real parameters.
struct GivensPlan {
    rows: usize,
    cols: usize,
    pairs: Vec<(usize, usize)>,
}

struct GivensScratch {
    // rows x cols isometry, row-major
    v: Vec<Complex64>,
    probs: Vec<f64>,
    terms: Vec<f64>,
    amps: Vec<Complex64>,
}

impl GivensPlan {
    fn new(rows: usize, cols: usize) -> Self {
        let mut pairs = Vec::new();
        for p in 0..rows.saturating_sub(1) {
            for q in p + 1..rows {
                pairs.push((p, q));
            }
        }
        Self { rows, cols, pairs }
    }

    fn param_count(&self) -> usize {
        2 * self.pairs.len()
    }

    fn scratch(&self) -> GivensScratch {
        GivensScratch {
            v: vec![Complex64::new(0.0, 0.0); self.rows * self.cols],
            probs: vec![0.0; self.cols.max(1)],
            terms: Vec::with_capacity(self.rows),
            amps: Vec::new(),
        }
    }

    /// Applies the rotation chain to the truncated identity, leaving the
    /// resulting isometry in `ws.v`.
    fn build(&self, params: &[f64], ws: &mut GivensScratch) {
        let (rows, cols) = (self.rows, self.cols);
        ws.v.fill(Complex64::new(0.0, 0.0));
        for i in 0..cols {
            ws.v[i * cols + i] = Complex64::new(1.0, 0.0);
        }
        for (idx, &(p, q)) in self.pairs.iter().enumerate().rev() {
            let theta = params[2 * idx];
            let phi = params[2 * idx + 1];
            let (s, c) = theta.sin_cos();
            let phase = Complex64::from_polar(1.0, phi);
            let sp = s * phase;
            let spc = s * phase.conj();
            debug_assert!(p < rows && q < rows);
            for j in 0..cols {
                let vp = ws.v[p * cols + j];
                let vq = ws.v[q * cols + j];
                ws.v[p * cols + j] = c * vp + sp * vq;
                ws.v[q * cols + j] = -spc * vp + c * vq;
            }
        }
    }

    /// Objective: average coherence of the ensemble generated by the
    /// isometry at `params`. Allocation-free on the hot path.
    fn average_coherence(
        &self,
        f: &CoherenceMeasure,
        eigenvalues: &[f64],
        eigenvectors: &[Vec<Complex64>],
        params: &[f64],
        ws: &mut GivensScratch,
    ) -> f64 {
        self.build(params, ws);
        let dim = eigenvectors.first().map_or(0, Vec::len);
        ws.terms.clear();
        if ws.amps.len() != dim {
            ws.amps.resize(dim, Complex64::new(0.0, 0.0));
        }
        for k in 0..self.rows {
            ws.amps.fill(Complex64::new(0.0, 0.0));
            for i in 0..self.cols {
                let coeff = ws.v[k * self.cols + i] * eigenvalues[i].max(0.0).sqrt();
                for (a, e) in ws.amps.iter_mut().zip(&eigenvectors[i]) {
                    *a += coeff * e;
                }
            }
            let weight: f64 = ws.amps.iter().map(|a| a.norm_sqr()).sum();
            if weight <= crate::ensembles::WEIGHT_TOL {
                continue;
            }
            if ws.probs.len() != dim {
                ws.probs.resize(dim, 0.0);
            }
            for (p, a) in ws.probs.iter_mut().zip(&ws.amps) {
                *p = a.norm_sqr() / weight;
            }
            let cv = CoherenceVector::new(normalize_probs(&mut ws.probs))
                .expect("squared moduli form a probability vector");
            let c = f.eval(&cv).unwrap_or(f64::NEG_INFINITY);
            ws.terms.push(weight * c);
        }
        exec::stable_sum(&ws.terms)
    }

    /// Same isometry, but through the validated public constructor so the
    /// witness carries the full guarantees.
    fn ensemble(
        &self,
        eigenvalues: &[f64],
        eigenvectors: &[Vec<Complex64>],
        params: &[f64],
    ) -> Result<Ensemble, EnsembleError> {
        let mut ws = self.scratch();
        self.build(params, &mut ws);
        build_from_columns(eigenvalues, eigenvectors, self.rows, |k, i| {
            ws.v[k * self.cols + i]
        })
    }
}

fn normalize_probs(probs: &mut [f64]) -> Vec<f64> {
    let sum: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    probs.iter().map(|p| p.max(0.0) / sum).collect()
}
