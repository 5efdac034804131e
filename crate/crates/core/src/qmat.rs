//! Dense complex linear algebra for small quantum states.
//!
//! Everything here works on matrices of dimension ≲ 10: validated density
//! matrices, a cyclic Jacobi eigensolver for Hermitian matrices, the
//! dephasing map, and correlation matrices. Values are immutable after
//! construction and safe to share across threads.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Hermiticity / trace tolerance of the `DensityMatrix` invariants.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues are accepted down to this (negative) floor.
pub const PSD_TOL: f64 = 1e-10;
/// Diagonal entries at or below this count as zero support.
pub const SUPPORT_TOL: f64 = 1e-14;
/// Jacobi sweep cap.
const JACOBI_MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius norm threshold for Jacobi convergence.
const JACOBI_OFF_TOL: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum QmatError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.6e}")]
    NotPsd { eigenvalue: f64 },
    #[error("trace {trace:.12} is not within {tol:.3e} of 1")]
    BadTrace { trace: f64, tol: f64 },
    #[error("diagonal entry {index} is zero; restrict to the support first")]
    ZeroDiagonal { index: usize },
    #[error("Jacobi iteration did not converge: off-diagonal norm {off_diagonal:.3e}")]
    ConvergenceFailure { off_diagonal: f64 },
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix from rows; fails unless the shape is square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, QmatError> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(QmatError::NotSquare { rows: dim, cols: row.len() });
            }
        }
        let data = rows.iter().flatten().copied().collect();
        Ok(Self { dim, data })
    }

    /// Real matrix entered row by row.
    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self, QmatError> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..self.dim {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus of the difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Certifies `m` against the density-matrix invariants at tolerance `tol`.
    ///
    /// The stored matrix is hermitized (averaged with its adjoint) and the
    /// trace is renormalized, but only when the input was already within
    /// `tol` of compliant; otherwise the violated invariant is reported with
    /// its measured residual.
    pub fn validate(m: &ComplexMatrix, tol: f64) -> Result<Self, QmatError> {
        let residual = m.hermitian_residual();
        if residual > tol {
            return Err(QmatError::NotHermitian { residual, tol });
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
            return Err(QmatError::BadTrace { trace: trace.re, tol });
        }
        let dim = m.dim();
        let mut mat = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let sym = (m.get(i, j) + m.get(j, i).conj()) / 2.0;
                mat.set(i, j, sym / trace.re);
            }
        }
        for i in 0..dim {
            let d = mat.get(i, i);
            mat.set(i, i, Complex64::new(d.re, 0.0));
        }
        let (eigenvalues, _) = jacobi_hermitian(&mat)?;
        let psd_floor = PSD_TOL.max(tol);
        if let Some(&min) = eigenvalues.iter().min_by(|a, b| a.total_cmp(b)) {
            if min < -psd_floor {
                return Err(QmatError::NotPsd { eigenvalue: min });
            }
        }
        Ok(Self { mat })
    }

    /// Validation at the canonical tolerances of the type invariants.
    pub fn new(m: &ComplexMatrix) -> Result<Self, QmatError> {
        Self::validate(m, HERMITIAN_TOL)
    }

    /// Pure state projector |psi><psi| from normalized amplitudes.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self, QmatError> {
        let dim = amplitudes.len();
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, amplitudes[i] * amplitudes[j].conj());
            }
        }
        Self::new(&m)
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat.get(i, j)
    }

    /// Diagonal as a real vector. Entries are clamped at zero; PSD validation
    /// already bounds how negative they can be.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entry(i, i).re.max(0.0)).collect()
    }

    /// The dephasing map: keeps the diagonal, kills all off-diagonal entries.
    pub fn dephase(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(self.entry(i, i).re, 0.0));
        }
        DensityMatrix { mat: m }
    }

    /// Eigendecomposition with descending eigenvalues and a deterministic
    /// basis: degenerate subspaces are re-spanned by Gram-Schmidt over the
    /// computational basis in index order, and each vector is phased so its
    /// largest-modulus component is real positive.
    pub fn eigh(&self) -> Result<EigenSystem, QmatError> {
        let (eigenvalues, vectors) = jacobi_hermitian(&self.mat)?;
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
        let mut eigenvectors: Vec<Vec<Complex64>> =
            order.iter().map(|&i| column(&vectors, i)).collect();
        canonicalize_degenerate(&eigenvalues, &mut eigenvectors);
        for v in &mut eigenvectors {
            fix_phase(v);
        }
        Ok(EigenSystem { eigenvalues, eigenvectors })
    }

    /// Number of eigenvalues above 1e-12.
    pub fn rank(&self) -> Result<usize, QmatError> {
        let eig = self.eigh()?;
        Ok(eig.eigenvalues.iter().filter(|&&l| l > 1e-12).count())
    }

    /// Correlation matrix `CM_ij = rho_ij / sqrt(rho_ii rho_jj)`.
    ///
    /// Refuses on zero diagonal entries: the map presumes the dephased state
    /// is invertible. Use [`DensityMatrix::restrict_to_support`] first when a
    /// basis state carries no population.
    pub fn correlation_matrix(&self) -> Result<CorrelationMatrix, QmatError> {
        let dim = self.dim();
        let diag = self.diagonal();
        for (i, &d) in diag.iter().enumerate() {
            if d <= SUPPORT_TOL {
                return Err(QmatError::ZeroDiagonal { index: i });
            }
        }
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    m.set(i, i, Complex64::new(1.0, 0.0));
                } else {
                    m.set(i, j, self.entry(i, j) / (diag[i] * diag[j]).sqrt());
                }
            }
        }
        Ok(CorrelationMatrix { mat: m })
    }

    /// Restriction of the state to the basis indices with nonzero diagonal.
    ///
    /// Returns the compressed state and the retained indices. A PSD matrix
    /// has zero rows and columns wherever its diagonal vanishes, so the
    /// restriction keeps trace 1.
    pub fn restrict_to_support(&self) -> (DensityMatrix, Vec<usize>) {
        let support: Vec<usize> = (0..self.dim())
            .filter(|&i| self.entry(i, i).re > SUPPORT_TOL)
            .collect();
        let mut m = ComplexMatrix::zeros(support.len());
        for (a, &i) in support.iter().enumerate() {
            for (b, &j) in support.iter().enumerate() {
                m.set(a, b, self.entry(i, j));
            }
        }
        let restricted = DensityMatrix::validate(&m, 1e-9)
            .expect("support restriction of a valid density matrix stays valid");
        (restricted, support)
    }
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a density matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl EigenSystem {
    /// Rebuilds `sum_i lambda_i |e_i><e_i|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.eigenvalues.len();
        let mut m = ComplexMatrix::zeros(dim);
        for (lambda, vec) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..dim {
                for j in 0..dim {
                    let v = m.get(i, j) + lambda * vec[i] * vec[j].conj();
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Largest deviation of the eigenvector Gram matrix from the identity.
    pub fn gram_residual(&self) -> f64 {
        let dim = self.eigenvectors.len();
        let mut worst: f64 = 0.0;
        for a in 0..dim {
            for b in 0..dim {
                let dot: Complex64 = self.eigenvectors[a]
                    .iter()
                    .zip(&self.eigenvectors[b])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

/// Hermitian PSD matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    mat: ComplexMatrix,
}

impl CorrelationMatrix {
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat.get(i, j)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Undoes the normalization: `sqrt(D) CM sqrt(D)` for a diagonal `D`.
    pub fn rescale(&self, diag: &[f64]) -> ComplexMatrix {
        let dim = self.dim();
        assert_eq!(diag.len(), dim);
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, self.entry(i, j) * (diag[i] * diag[j]).sqrt());
            }
        }
        m
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Returns unsorted eigenvalues and the accumulated unitary whose columns
/// are the eigenvectors. Fails if the off-diagonal norm is still above the
/// threshold after the sweep cap.
fn jacobi_hermitian(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix), QmatError> {
    let dim = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(dim);
    if dim <= 1 {
        let vals = (0..dim).map(|i| a.get(i, i).re).collect();
        return Ok((vals, v));
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_OFF_TOL {
            break;
        }
        for p in 0..dim - 1 {
            for q in p + 1..dim {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Rotate rows/columns p and q of A = J^H A J with
                // J restricted to the (p, q) plane:
                //   J_pp = c, J_pq = s e^{i phi}, J_qp = -s e^{-i phi}, J_qq = c
                for k in 0..dim {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    let new_kp = c * akp - s * phase.conj() * akq;
                    let new_kq = s * phase * akp + c * akq;
                    a.set(k, p, new_kp);
                    a.set(p, k, new_kp.conj());
                    a.set(k, q, new_kq);
                    a.set(q, k, new_kq.conj());
                }
                let new_pp = c * c * app - 2.0 * c * s * r + s * s * aqq;
                let new_qq = s * s * app + 2.0 * c * s * r + c * c * aqq;
                a.set(p, p, Complex64::new(new_pp, 0.0));
                a.set(q, q, Complex64::new(new_qq, 0.0));
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                for k in 0..dim {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * phase.conj() * vkq);
                    v.set(k, q, s * phase * vkp + c * vkq);
                }
            }
        }
    }
    let off = off_diagonal_norm(&a);
    if off >= JACOBI_OFF_TOL {
        return Err(QmatError::ConvergenceFailure { off_diagonal: off });
    }
    let vals = (0..dim).map(|i| a.get(i, i).re).collect();
    Ok((vals, v))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let dim = a.dim();
    let mut sum = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn column(m: &ComplexMatrix, j: usize) -> Vec<Complex64> {
    (0..m.dim()).map(|i| m.get(i, j)).collect()
}

/// Eigenvalue spacing below which two eigenvalues count as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

/// Replaces the basis of each degenerate cluster with the Gram-Schmidt
/// orthonormalization of the projected computational basis, taken in index
/// order. Leaves the spanned subspace (hence the reconstruction) unchanged
/// while making the output independent of the rotation history.
fn canonicalize_degenerate(eigenvalues: &[f64], eigenvectors: &mut [Vec<Complex64>]) {
    let dim = eigenvalues.len();
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim && (eigenvalues[end - 1] - eigenvalues[end]).abs() <= DEGENERACY_TOL {
            end += 1;
        }
        if end - start > 1 {
            let cluster: Vec<Vec<Complex64>> = eigenvectors[start..end].to_vec();
            let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(end - start);
            for j in 0..dim {
                if basis.len() == end - start {
                    break;
                }
                // Project e_j onto the cluster subspace.
                let mut w = vec![Complex64::new(0.0, 0.0); dim];
                for v in &cluster {
                    let coeff = v[j].conj();
                    for (wi, vi) in w.iter_mut().zip(v) {
                        *wi += coeff * vi;
                    }
                }
                for b in &basis {
                    let overlap: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= overlap * bi;
                    }
                }
                let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                if norm > 1e-6 {
                    for wi in &mut w {
                        *wi /= norm;
                    }
                    basis.push(w);
                }
            }
            if basis.len() == end - start {
                eigenvectors[start..end].clone_from_slice(&basis);
            }
        }
        start = end;
    }
}

/// Rotates a vector so its largest-modulus component is real positive. Ties
/// go to the lowest index.
fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_norm = 0.0;
    for (i, x) in v.iter().enumerate() {
        let n = x.norm();
        if n > best_norm + 1e-12 {
            best = i;
            best_norm = n;
        }
    }
    if best_norm > 0.0 {
        let phase = v[best].conj() / best_norm;
        for x in v.iter_mut() {
            *x *= phase;
        }
        v[best] = Complex64::new(v[best].re, 0.0);
    }
}

/// Haar-distributed random unitary: complex Ginibre sample orthonormalized
/// with modified Gram-Schmidt. Enforcing a positive real diagonal on the
/// triangular factor makes the distribution exactly Haar.
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    for j in 0..dim {
        for i in 0..j {
            let proj: Complex64 =
                cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
            for k in 0..dim {
                let adj = proj * cols[i][k];
                cols[j][k] -= adj;
            }
        }
        let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut cols[j] {
            *x /= norm;
        }
    }
    let mut m = ComplexMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    m
}

/// Seeded random full-rank density matrix: `G G^H / tr(G G^H)` with `G`
/// complex Ginibre (Hilbert-Schmidt measure).
pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_rng(dim, &mut rng)
}

/// Like [`random_density`] but drawing from a caller-supplied generator.
pub fn random_density_rng<R: Rng>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let dot: Complex64 = (0..dim).map(|k| g[i][k] * g[j][k].conj()).sum();
            m.set(i, j, dot);
        }
    }
    let trace = m.trace().re;
    for i in 0..dim {
        for j in 0..dim {
            let v = m.get(i, j) / trace;
            m.set(i, j, v);
        }
    }
    DensityMatrix::validate(&m, 1e-9).expect("Ginibre construction is a valid density matrix")
}

#[derive(Serialize, Deserialize)]
struct DensityJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let dim = self.dim();
        let re = (0..dim)
            .map(|i| (0..dim).map(|j| self.entry(i, j).re).collect())
            .collect();
        let im = (0..dim)
            .map(|i| (0..dim).map(|j| self.entry(i, j).im).collect())
            .collect();
        DensityJson { dim, re, im }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = DensityJson::deserialize(deserializer)?;
        if raw.re.len() != raw.dim
            || raw.im.len() != raw.dim
            || raw.re.iter().any(|r| r.len() != raw.dim)
            || raw.im.iter().any(|r| r.len() != raw.dim)
        {
            return Err(D::Error::custom(format!(
                "entries must form a {0}x{0} matrix",
                raw.dim
            )));
        }
        let mut m = ComplexMatrix::zeros(raw.dim);
        for i in 0..raw.dim {
            for j in 0..raw.dim {
                m.set(i, j, Complex64::new(raw.re[i][j], raw.im[i][j]));
            }
        }
        DensityMatrix::validate(&m, 1e-9).map_err(D::Error::custom)
    }
}
