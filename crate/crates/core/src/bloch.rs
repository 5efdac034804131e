//! Qubit decompositions on the Bloch sphere.
//!
//! A qubit state is a point `(n, theta, phi)` in the Bloch ball. Four
//! canonical two-component decompositions are built here: the one reaching
//! the maximal average coherence, the spectral one, a mirror pair sharing a
//! meridian, and a pole-anchored pair with one incoherent component. Their
//! average coherences obey order relations that hold for every symmetric
//! concave measure; [`order_check`] evaluates them at a point.
//!
//! The constructions are written for the first octant (`theta <= pi/2`).
//! Southern inputs are handled by conjugating with the basis swap, which
//! permutes coherence vectors and therefore changes no coherence value.

use crate::bounds::{equality_condition, BoundError};
use crate::ensembles::{Ensemble, EnsembleError};
use crate::measures::{CoherenceMeasure, MeasureError, PureState};
use crate::qmat::{ComplexMatrix, DensityMatrix, QmatError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BlochError {
    #[error("invalid Bloch vector: {reason}")]
    BadBloch { reason: String },
    #[error("state must be a qubit, got dimension {dim}")]
    NotAQubit { dim: usize },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Matrix(#[from] QmatError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Polar form of a qubit state: length `n` in [0,1], polar angle `theta`
/// in [0,pi] against the sigma_3 axis, azimuth `phi` in [0,2pi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub n: f64,
    pub theta: f64,
    pub phi: f64,
}

impl BlochVector {
    pub fn new(n: f64, theta: f64, phi: f64) -> Result<Self, BlochError> {
        if !(-1e-12..=1.0 + 1e-12).contains(&n) {
            return Err(BlochError::BadBloch { reason: format!("length n = {n} outside [0, 1]") });
        }
        if !(-1e-12..=PI + 1e-12).contains(&theta) {
            return Err(BlochError::BadBloch {
                reason: format!("polar angle theta = {theta} outside [0, pi]"),
            });
        }
        if !theta.is_finite() || !phi.is_finite() {
            return Err(BlochError::BadBloch { reason: "non-finite angle".into() });
        }
        Ok(Self {
            n: n.clamp(0.0, 1.0),
            theta: theta.clamp(0.0, PI),
            phi: phi.rem_euclid(TAU),
        })
    }
}

/// Pauli expectation values of a qubit state, in polar form. The center of
/// the ball maps to `theta = 0`, `phi = 0`.
pub fn bloch_from_density(rho: &DensityMatrix) -> Result<BlochVector, BlochError> {
    if rho.dim() != 2 {
        return Err(BlochError::NotAQubit { dim: rho.dim() });
    }
    let off = rho.entry(0, 1);
    let x = 2.0 * off.re;
    let y = -2.0 * off.im;
    let z = rho.entry(0, 0).re - rho.entry(1, 1).re;
    let n = (x * x + y * y + z * z).sqrt();
    if n > 1.0 + 1e-12 {
        return Err(BlochError::BadBloch { reason: format!("length n = {n} exceeds 1") });
    }
    if n < 1e-15 {
        return BlochVector::new(0.0, 0.0, 0.0);
    }
    let theta = (z / n).clamp(-1.0, 1.0).acos();
    let phi = if x == 0.0 && y == 0.0 { 0.0 } else { y.atan2(x).rem_euclid(TAU) };
    BlochVector::new(n.min(1.0), theta, phi)
}

/// `(I + n_vec . sigma_vec) / 2`.
pub fn density_from_bloch(b: &BlochVector) -> DensityMatrix {
    let nz = b.n * b.theta.cos();
    let nx = b.n * b.theta.sin() * b.phi.cos();
    let ny = b.n * b.theta.sin() * b.phi.sin();
    let mut m = ComplexMatrix::zeros(2);
    m.set(0, 0, Complex64::new((1.0 + nz) / 2.0, 0.0));
    m.set(1, 1, Complex64::new((1.0 - nz) / 2.0, 0.0));
    m.set(0, 1, Complex64::new(nx / 2.0, -ny / 2.0));
    m.set(1, 0, Complex64::new(nx / 2.0, ny / 2.0));
    DensityMatrix::validate(&m, 1e-9).expect("a Bloch ball point is a valid density matrix")
}

/// A constructed decomposition, flagged when a boundary case collapsed it
/// to fewer components than the generic construction yields.
#[derive(Debug, Clone)]
pub struct Decomposed {
    pub ensemble: Ensemble,
    pub degenerate: bool,
}

/// Surface state at polar angle `theta`, azimuth `phi`:
/// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
fn surface_state(theta: f64, phi: f64) -> PureState {
    let (s, c) = (theta / 2.0).sin_cos();
    surface_state_half(c, s, phi)
}

/// Surface state from half-angle cosine and sine given directly. The
/// constructors below prefer closed forms for these over `acos` followed by
/// half-angle identities, which loses O(sqrt(eps)) near the poles.
fn surface_state_half(cos_half: f64, sin_half: f64, phi: f64) -> PureState {
    PureState::new(vec![Complex64::new(cos_half, 0.0), Complex64::from_polar(sin_half, phi)])
        .expect("surface amplitudes are normalized")
}

/// Swaps |0> and |1> in every component. Conjugation by the basis swap,
/// used to fold southern-hemisphere inputs into the first octant.
fn swap_components(ensemble: Ensemble) -> Ensemble {
    let swapped = ensemble
        .components()
        .iter()
        .map(|(w, psi)| {
            let a = psi.amplitudes();
            (*w, PureState::new(vec![a[1], a[0]]).expect("swap preserves the norm"))
        })
        .collect();
    Ensemble::new(swapped).expect("swap preserves weights")
}

/// Returns the octant-reduced vector and whether a basis swap is pending.
fn reduce_to_octant(b: &BlochVector) -> (BlochVector, bool) {
    if b.theta > FRAC_PI_2 {
        (
            BlochVector {
                n: b.n,
                theta: PI - b.theta,
                phi: (TAU - b.phi).rem_euclid(TAU),
            },
            true,
        )
    } else {
        (*b, false)
    }
}

fn finish(ensemble: Ensemble, swap: bool, degenerate: bool) -> Decomposed {
    let ensemble = if swap { swap_components(ensemble) } else { ensemble };
    Decomposed { ensemble, degenerate }
}

/// Drops zero-weight components; keeps construction totals honest.
fn two_components(
    w1: f64,
    psi1: PureState,
    w2: f64,
    psi2: PureState,
) -> Ensemble {
    let mut parts = Vec::new();
    if w1 > 1e-14 {
        parts.push((w1, psi1.clone()));
    }
    if w2 > 1e-14 {
        parts.push((w2, psi2));
    }
    if parts.is_empty() {
        parts.push((1.0, psi1));
    } else {
        // Absorb the rounding of a dropped partner so weights still sum to 1.
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        for (w, _) in &mut parts {
            *w /= total;
        }
    }
    Ensemble::new(parts).expect("two-component construction is valid")
}

/// Decomposition reaching the maximal average coherence: both components sit
/// at the opening angle `theta_o = arccos(n cos theta)` on opposite
/// meridians, so both dephase to the state's diagonal.
pub fn decomposition_max_coherence(b: &BlochVector) -> Decomposed {
    let (r, swap) = reduce_to_octant(b);
    let cos_o = (r.n * r.theta.cos()).clamp(-1.0, 1.0);
    let sin_o = (1.0 - cos_o * cos_o).max(0.0).sqrt();
    if sin_o <= 1e-9 {
        // Pure basis state at a pole.
        let psi = if cos_o >= 0.0 { PureState::basis(2, 0) } else { PureState::basis(2, 1) };
        return finish(Ensemble::pure(psi), swap, true);
    }
    let ratio = (r.n * r.theta.sin() / sin_o).clamp(0.0, 1.0);
    let cos_half = ((1.0 + cos_o) / 2.0).sqrt();
    let sin_half = ((1.0 - cos_o) / 2.0).sqrt();
    let psi1 = surface_state_half(cos_half, sin_half, r.phi);
    let psi2 = surface_state_half(cos_half, sin_half, (r.phi + PI).rem_euclid(TAU));
    finish(
        two_components((1.0 + ratio) / 2.0, psi1, (1.0 - ratio) / 2.0, psi2),
        swap,
        false,
    )
}

/// Spectral decomposition: antipodal eigenstates with weights `(1 ± n)/2`.
/// At the center any orthonormal pair works; the input angles pick it.
pub fn decomposition_spectral(b: &BlochVector) -> Decomposed {
    let (r, swap) = reduce_to_octant(b);
    let psi1 = surface_state(r.theta, r.phi);
    let (s, c) = (r.theta / 2.0).sin_cos();
    let psi2 = PureState::new(vec![Complex64::new(s, 0.0), Complex64::from_polar(c, r.phi + PI)])
        .expect("antipodal state is normalized");
    finish(two_components((1.0 + r.n) / 2.0, psi1, (1.0 - r.n) / 2.0, psi2), swap, false)
}

/// Mirror-pair decomposition: components at `theta_3` and `pi - theta_3` on
/// the same meridian, `theta_3 = arccos sqrt(1 - n^2 sin^2 theta)`. Collapses
/// to a single component on pure equatorial states, where the stated weights
/// become 0/0; the analytic limit is the state itself.
pub fn decomposition_mirror(b: &BlochVector) -> Decomposed {
    let (r, swap) = reduce_to_octant(b);
    let ns = r.n * r.theta.sin();
    let c3 = (1.0 - ns * ns).max(0.0).sqrt();
    if c3 <= 1e-9 {
        return finish(Ensemble::pure(surface_state(FRAC_PI_2, r.phi)), swap, true);
    }
    let bias = (r.n * r.theta.cos() / c3).clamp(-1.0, 1.0);
    let cos_half = ((1.0 + c3) / 2.0).sqrt();
    let sin_half = ((1.0 - c3) / 2.0).sqrt();
    let psi1 = surface_state_half(cos_half, sin_half, r.phi);
    // Partner at the mirror latitude pi - theta_3, same meridian.
    let psi2 = surface_state_half(sin_half, cos_half, r.phi);
    finish(
        two_components((1.0 + bias) / 2.0, psi1, (1.0 - bias) / 2.0, psi2),
        swap,
        false,
    )
}

/// Pole-anchored decomposition: an incoherent |1> component plus one surface
/// state at `theta_4`. Degenerates to |1> alone at the south pole.
pub fn decomposition_pole_anchored(b: &BlochVector) -> Decomposed {
    let (r, swap) = reduce_to_octant(b);
    let ncos = r.n * r.theta.cos();
    let denom = 1.0 + ncos;
    if denom <= 1e-14 {
        return finish(Ensemble::pure(PureState::basis(2, 1)), swap, true);
    }
    let b_norm = 1.0 + r.n * r.n + 2.0 * ncos;
    let w_pole = (1.0 - r.n * r.n) / (2.0 * denom);
    let w_surface = b_norm / (2.0 * denom);
    // Half angles in closed form: cos(theta_4/2) = (1 + n cos) / sqrt(B),
    // sin(theta_4/2) = n sin / sqrt(B). Going through arccos instead would
    // smear a pole-adjacent theta_4 by O(sqrt(eps)).
    let root = b_norm.sqrt();
    let cos_half = (denom / root).clamp(0.0, 1.0);
    let sin_half = (r.n * r.theta.sin() / root).clamp(0.0, 1.0);
    finish(
        two_components(
            w_pole,
            PureState::basis(2, 1),
            w_surface,
            surface_state_half(cos_half, sin_half, r.phi),
        ),
        swap,
        false,
    )
}

/// Average coherences of the four decompositions at one Bloch point, with
/// the two order-relation checks. The second chain's strict link is
/// reported as a margin instead of a boolean because boundary states turn
/// it into an equality.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderingRecord {
    pub values: OrderingValues,
    pub relations_8_ok: bool,
    pub relations_9_ok: bool,
    /// `C(s) - C(m2)`; positive where the strict form of the second chain
    /// holds.
    pub m2_strict_margin: f64,
}

/// Average coherence per decomposition label.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderingValues {
    #[serde(rename = "M")]
    pub max_coherence: f64,
    #[serde(rename = "s")]
    pub spectral: f64,
    #[serde(rename = "m1")]
    pub mirror: f64,
    #[serde(rename = "m2")]
    pub pole_anchored: f64,
}

const ORDER_TOL: f64 = 1e-10;

/// Evaluates all four decompositions under `f` and checks the two chains
/// `C(m1) <= C(s) <= C(M)` and `C(m2) <= C(s) <= C(M)` at tolerance 1e-10.
pub fn order_check(f: &CoherenceMeasure, b: &BlochVector) -> Result<OrderingRecord, BlochError> {
    let max_coherence = decomposition_max_coherence(b).ensemble.average_coherence(f)?;
    let spectral = decomposition_spectral(b).ensemble.average_coherence(f)?;
    let mirror = decomposition_mirror(b).ensemble.average_coherence(f)?;
    let pole_anchored = decomposition_pole_anchored(b).ensemble.average_coherence(f)?;
    let relations_8_ok = mirror <= spectral + ORDER_TOL && spectral <= max_coherence + ORDER_TOL;
    let relations_9_ok =
        pole_anchored <= spectral + ORDER_TOL && spectral <= max_coherence + ORDER_TOL;
    Ok(OrderingRecord {
        values: OrderingValues { max_coherence, spectral, mirror, pole_anchored },
        relations_8_ok,
        relations_9_ok,
        m2_strict_margin: spectral - pole_anchored,
    })
}

/// True when the maximal decomposition satisfies the dephasing equality
/// condition against the state it decomposes. Holds analytically; exposed
/// for verification sweeps.
pub fn max_decomposition_saturates(b: &BlochVector, tol: f64) -> Result<bool, BlochError> {
    let rho = density_from_bloch(b);
    Ok(equality_condition(&decomposition_max_coherence(b).ensemble, &rho, tol)?)
}
