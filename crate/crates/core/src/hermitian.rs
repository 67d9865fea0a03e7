//! Dense complex Hermitian linear algebra.
//!
//! Everything downstream (logarithms, square roots, fractional and
//! pseudo-inverse powers of density matrices) goes through
//! [`eig_hermitian`], a cyclic complex Jacobi eigensolver. Matrices here
//! are small (dim ≤ 64), row-major and dense.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative off-diagonal Frobenius norm at which the Jacobi sweeps stop.
pub const JACOBI_TOLERANCE: f64 = 1e-14;
/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as roundoff and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A dense square complex matrix, row-major. Used for unitaries and
/// products that are not Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != dim * dim {
            return Err(Error::Shape {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self { dim: n, data }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: matmul_raw(self.dim, &self.data, &other.data),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        max_abs_diff_raw(&self.data, &other.data)
    }
}

/// A dense complex matrix with enforced Hermitian symmetry.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HermitianMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl HermitianMatrix {
    /// Builds a Hermitian matrix from row-major entries. The input is
    /// replaced by `(M + M†) / 2`, so small asymmetries are removed.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        let raw = ComplexMatrix::new(dim, data)?;
        if raw.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self::symmetrize(raw))
    }

    /// Like [`HermitianMatrix::new`], but rejects inputs whose asymmetry
    /// `max |M_ij - conj(M_ji)|` exceeds `tolerance`.
    pub fn new_checked(dim: usize, data: Vec<Complex64>, tolerance: f64) -> Result<Self> {
        let raw = ComplexMatrix::new(dim, data)?;
        let asym = hermitian_defect(&raw);
        if !asym.is_finite() {
            return Err(Error::NonFinite);
        }
        if asym > tolerance {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::symmetrize(raw))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::new(dim, data)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let data = rows
            .iter()
            .flatten()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        Self::new(dim, data)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = vec![ZERO; n * n];
        for (i, &v) in values.iter().enumerate() {
            data[i * n + i] = Complex64::new(v, 0.0);
        }
        Self::new(n, data)
    }

    pub fn identity(dim: usize) -> Self {
        let ComplexMatrix { dim, data } = ComplexMatrix::identity(dim);
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    fn symmetrize(raw: ComplexMatrix) -> Self {
        let n = raw.dim;
        let mut data = raw.data;
        for i in 0..n {
            data[i * n + i] = Complex64::new(data[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let avg = (data[i * n + j] + data[j * n + i].conj()) * 0.5;
                data[i * n + j] = avg;
                data[j * n + i] = avg.conj();
            }
        }
        Self { dim: n, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.clone(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// `Tr(A B)`, real for Hermitian `A` and `B`.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "trace_product dimension mismatch");
        // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij)
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    /// `self · inner · self`.
    pub fn sandwich(&self, inner: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim, inner.dim, "sandwich dimension mismatch");
        let n = self.dim;
        let left = matmul_raw(n, &self.data, &inner.data);
        Self::symmetrize(ComplexMatrix {
            dim: n,
            data: matmul_raw(n, &left, &self.data),
        })
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> HermitianMatrix {
        assert_eq!(self.dim, unitary.dim, "conjugate_by dimension mismatch");
        let n = self.dim;
        let left = matmul_raw(n, &unitary.data, &self.data);
        let adj = unitary.adjoint();
        Self::symmetrize(ComplexMatrix {
            dim: n,
            data: matmul_raw(n, &left, &adj.data),
        })
    }

    pub fn scale(&self, factor: f64) -> HermitianMatrix {
        HermitianMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        max_abs_diff_raw(&self.data, &other.data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        HermitianMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        HermitianMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

/// Eigenvalues with `|λ| ≤ zero_threshold` are treated as exactly zero
/// when applying matrix functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportPolicy {
    zero_threshold: f64,
}

impl SupportPolicy {
    pub const DEFAULT_THRESHOLD: f64 = 1e-12;

    pub fn new(zero_threshold: f64) -> Result<Self> {
        if !(zero_threshold >= 0.0) || !zero_threshold.is_finite() {
            return Err(Error::Domain(format!(
                "support threshold must be finite and nonnegative, got {zero_threshold}"
            )));
        }
        Ok(Self { zero_threshold })
    }

    pub fn zero_threshold(&self) -> f64 {
        self.zero_threshold
    }

    #[inline]
    pub fn is_zero(&self, eigenvalue: f64) -> bool {
        eigenvalue.abs() <= self.zero_threshold
    }
}

impl Default for SupportPolicy {
    fn default() -> Self {
        Self {
            zero_threshold: Self::DEFAULT_THRESHOLD,
        }
    }
}

/// Spectral decomposition `H = V diag(λ) V†` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(g(λ)) V†` for an arbitrary list of new eigenvalues.
    pub fn with_eigenvalues(&self, values: &[f64]) -> HermitianMatrix {
        let n = self.dim();
        assert_eq!(values.len(), n);
        let v = &self.eigenvectors.data;
        let mut data = vec![ZERO; n * n];
        for (k, &lam) in values.iter().enumerate() {
            if lam == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[i * n + k] * lam;
                for j in 0..n {
                    data[i * n + j] += vik * v[j * n + k].conj();
                }
            }
        }
        HermitianMatrix::symmetrize(ComplexMatrix { dim: n, data })
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.with_eigenvalues(&self.eigenvalues)
    }

    /// Projector onto the span of eigenvectors whose eigenvalue survives `policy`.
    pub fn support_projector(&self, policy: SupportPolicy) -> HermitianMatrix {
        let mask: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| if policy.is_zero(l) { 0.0 } else { 1.0 })
            .collect();
        self.with_eigenvalues(&mask)
    }
}

/// Diagonalises a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Sweeps stop once the off-diagonal Frobenius norm drops below
/// [`JACOBI_TOLERANCE`] times the matrix norm, or after
/// [`JACOBI_MAX_SWEEPS`]. Eigenvalues are sorted ascending with a stable
/// sort, so the output is deterministic for identical input.
pub fn eig_hermitian(h: &HermitianMatrix) -> EigenDecomposition {
    eig_hermitian_with_tolerance(h, JACOBI_TOLERANCE)
}

/// [`eig_hermitian`] with a caller-chosen relative stopping tolerance.
pub fn eig_hermitian_with_tolerance(h: &HermitianMatrix, tolerance: f64) -> EigenDecomposition {
    let n = h.dim;
    let mut a = h.data.clone();
    let mut v = ComplexMatrix::identity(n).data;
    let scale = h.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(n, &a) <= tolerance * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(n, &mut a, &mut v, p, q);
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let mut vecs = vec![ZERO; n * n];
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vecs[i * n + dst] = v[i * n + src];
        }
    }
    EigenDecomposition {
        eigenvalues,
        eigenvectors: ComplexMatrix { dim: n, data: vecs },
    }
}

// One Jacobi rotation zeroing a[p][q]. With apq = |apq| e^{iφ} the unitary
// acting on (p, q) is [[c, s e^{iφ}], [-s e^{-iφ}, c]].
fn rotate(n: usize, a: &mut [Complex64], v: &mut [Complex64], p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau.is_infinite() {
        0.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    if t == 0.0 {
        return;
    }
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_e = phase * s;
    let s_ec = phase.conj() * s;

    // A <- A J
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * s_ec;
        a[k * n + q] = akp * s_e + akq * c;
    }
    // A <- J† A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * s_e;
        a[q * n + k] = apk * s_ec + aqk * c;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
    // V <- V J
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c - vkq * s_ec;
        v[k * n + q] = vkp * s_e + vkq * c;
    }
}

fn off_diagonal_norm(n: usize, a: &[Complex64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Applies `f` to the spectrum of `h`. Eigenvalues that the support policy
/// treats as zero map to zero regardless of `f`.
pub fn matrix_function<F>(h: &HermitianMatrix, f: F, policy: SupportPolicy) -> Result<HermitianMatrix>
where
    F: Fn(f64) -> f64,
{
    let eig = eig_hermitian(h);
    spectral_apply(&eig, f, policy)
}

/// [`matrix_function`] on an existing decomposition.
pub fn spectral_apply<F>(eig: &EigenDecomposition, f: F, policy: SupportPolicy) -> Result<HermitianMatrix>
where
    F: Fn(f64) -> f64,
{
    let mut values = Vec::with_capacity(eig.dim());
    for &lam in &eig.eigenvalues {
        if policy.is_zero(lam) {
            values.push(0.0);
            continue;
        }
        let y = f(lam);
        if !y.is_finite() {
            return Err(Error::Domain(format!(
                "matrix function undefined at eigenvalue {lam:e}"
            )));
        }
        values.push(y);
    }
    Ok(eig.with_eigenvalues(&values))
}

/// Clamps eigenvalues in `[-PSD_CLAMP, 0)` to zero; fails on anything
/// more negative.
pub fn clamp_psd(eig: &mut EigenDecomposition) -> Result<()> {
    for lam in eig.eigenvalues.iter_mut() {
        if *lam < 0.0 {
            if *lam < -PSD_CLAMP {
                return Err(Error::NotPositive(*lam));
            }
            *lam = 0.0;
        }
    }
    Ok(())
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(h: &HermitianMatrix) -> f64 {
    eig_hermitian(h).eigenvalues.iter().map(|l| l.abs()).sum()
}

/// Standard Kronecker product: `(A ⊗ B)[(i,k),(j,l)] = A[i,j] B[k,l]`.
pub fn kron(a: &HermitianMatrix, b: &HermitianMatrix) -> HermitianMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut data = vec![ZERO; n * n];
    for i in 0..na {
        for j in 0..na {
            let aij = a.get(i, j);
            if aij == ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    data[(i * nb + k) * n + (j * nb + l)] = aij * b.get(k, l);
                }
            }
        }
    }
    HermitianMatrix { dim: n, data }
}

fn hermitian_defect(m: &ComplexMatrix) -> f64 {
    let n = m.dim;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let d = (m.get(i, j) - m.get(j, i).conj()).norm();
            if d.is_nan() {
                return f64::NAN;
            }
            worst = worst.max(d);
        }
    }
    worst
}

fn matmul_raw(n: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == ZERO {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn max_abs_diff_raw(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(dim: usize, seed: u64) -> HermitianMatrix {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let data = (0..dim * dim)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        HermitianMatrix::new(dim, data).unwrap()
    }

    #[test]
    fn construction_symmetrizes() {
        let h = HermitianMatrix::new(2, vec![c(1.0, 0.3), c(0.0, 2.0), c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(h.get(0, 0), c(1.0, 0.0));
        assert_eq!(h.get(0, 1), c(0.0, 1.0));
        assert_eq!(h.get(1, 0), c(0.0, -1.0));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(HermitianMatrix::new(0, vec![]), Err(Error::EmptyMatrix));
        assert!(matches!(
            HermitianMatrix::new(2, vec![ONE; 3]),
            Err(Error::Shape { expected: 4, got: 3 })
        ));
        assert_eq!(
            HermitianMatrix::new(1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
        assert!(matches!(
            HermitianMatrix::new_checked(2, vec![ONE, ONE, ZERO, ONE], 1e-10),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn eig_of_diagonal_sorts_ascending() {
        let d = eig_hermitian(&HermitianMatrix::diagonal(&[2.0, 1.0]).unwrap());
        assert_eq!(d.eigenvalues, vec![1.0, 2.0]);
        assert!(d.reconstruct().max_abs_diff(&HermitianMatrix::diagonal(&[2.0, 1.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn eig_of_pauli_x() {
        let sx = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let d = eig_hermitian(&sx);
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eig_of_pauli_y_is_complex_safe() {
        let sy = HermitianMatrix::from_rows(&[vec![ZERO, c(0.0, -1.0)], vec![c(0.0, 1.0), ZERO]]).unwrap();
        let d = eig_hermitian(&sy);
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert!(d.reconstruct().max_abs_diff(&sy) < 1e-14);
    }

    #[test]
    fn eig_reconstruction_and_unitarity() {
        for (dim, seed) in [(1, 1), (2, 2), (4, 3), (7, 4), (16, 5), (64, 6)] {
            let h = random_hermitian(dim, seed);
            let d = eig_hermitian(&h);
            assert!(d.reconstruct().max_abs_diff(&h) < 1e-10, "dim {dim}");
            let vhv = d.eigenvectors.adjoint().matmul(&d.eigenvectors);
            assert!(vhv.max_abs_diff(&ComplexMatrix::identity(dim)) < 1e-10, "dim {dim}");
            assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eig_is_deterministic() {
        let h = random_hermitian(5, 9);
        let a = eig_hermitian(&h);
        let b = eig_hermitian(&h);
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn eig_handles_degenerate_spectrum() {
        let h = HermitianMatrix::identity(4).scale(0.25);
        let d = eig_hermitian(&h);
        assert!(d.eigenvalues.iter().all(|&l| (l - 0.25).abs() < 1e-16));
        assert_eq!(eig_hermitian(&HermitianMatrix::zeros(3)).eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn matrix_function_examples() {
        let policy = SupportPolicy::default();
        let root = matrix_function(&HermitianMatrix::diagonal(&[4.0, 9.0]).unwrap(), f64::sqrt, policy).unwrap();
        assert!(root.max_abs_diff(&HermitianMatrix::diagonal(&[2.0, 3.0]).unwrap()) < 1e-15);

        let log_i = matrix_function(&HermitianMatrix::identity(2), f64::ln, policy).unwrap();
        assert!(log_i.max_abs_diff(&HermitianMatrix::zeros(2)) < 1e-15);

        let log_sing =
            matrix_function(&HermitianMatrix::diagonal(&[0.5, 0.5, 0.0]).unwrap(), f64::ln, policy).unwrap();
        let want = HermitianMatrix::diagonal(&[0.5f64.ln(), 0.5f64.ln(), 0.0]).unwrap();
        assert!(log_sing.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn matrix_function_domain_error() {
        let h = HermitianMatrix::diagonal(&[-0.5, 1.0]).unwrap();
        assert!(matches!(
            matrix_function(&h, f64::ln, SupportPolicy::default()),
            Err(Error::Domain(_))
        ));
        // below threshold counts as zero, so no error
        let h = HermitianMatrix::diagonal(&[-1e-13, 1.0]).unwrap();
        assert!(matrix_function(&h, f64::ln, SupportPolicy::default()).is_ok());
    }

    #[test]
    fn support_policy_validation() {
        assert!(SupportPolicy::new(-1.0).is_err());
        assert!(SupportPolicy::new(f64::NAN).is_err());
        assert_eq!(SupportPolicy::default().zero_threshold(), 1e-12);
    }

    #[test]
    fn clamp_psd_behaviour() {
        let mut eig = eig_hermitian(&HermitianMatrix::diagonal(&[-5e-11, 1.0]).unwrap());
        clamp_psd(&mut eig).unwrap();
        assert_eq!(eig.eigenvalues[0], 0.0);
        let mut eig = eig_hermitian(&HermitianMatrix::diagonal(&[-1e-6, 1.0]).unwrap());
        assert!(matches!(clamp_psd(&mut eig), Err(Error::NotPositive(_))));
    }

    #[test]
    fn trace_norm_examples() {
        assert_eq!(trace_norm(&HermitianMatrix::diagonal(&[1.0, -1.0]).unwrap()), 2.0);
        assert_eq!(trace_norm(&HermitianMatrix::zeros(3)), 0.0);
        let up = HermitianMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let down = HermitianMatrix::diagonal(&[0.0, 1.0]).unwrap();
        assert_eq!(trace_norm(&(&up - &down)), 2.0);
    }

    #[test]
    fn kron_examples() {
        let i4 = kron(&HermitianMatrix::identity(2), &HermitianMatrix::identity(2));
        assert_eq!(i4, HermitianMatrix::identity(4));
        let k = kron(
            &HermitianMatrix::diagonal(&[2.0, 3.0]).unwrap(),
            &HermitianMatrix::diagonal(&[5.0, 7.0]).unwrap(),
        );
        assert_eq!(k, HermitianMatrix::diagonal(&[10.0, 14.0, 15.0, 21.0]).unwrap());
    }

    #[test]
    fn kron_off_diagonal_layout() {
        let a = HermitianMatrix::from_rows(&[vec![ONE, c(0.0, 1.0)], vec![c(0.0, -1.0), ONE]]).unwrap();
        let b = HermitianMatrix::diagonal(&[1.0, 2.0]).unwrap();
        let k = kron(&a, &b);
        assert_eq!(k.get(0, 2), c(0.0, 1.0));
        assert_eq!(k.get(1, 3), c(0.0, 2.0));
        assert_eq!(k.get(3, 1), c(0.0, -2.0));
        assert_eq!(k.get(0, 1), ZERO);
    }

    #[test]
    fn trace_product_matches_matmul() {
        let a = random_hermitian(4, 11);
        let b = random_hermitian(4, 12);
        let direct = a.to_complex().matmul(&b.to_complex()).trace();
        assert!((a.trace_product(&b) - direct.re).abs() < 1e-13);
        assert!(direct.im.abs() < 1e-13);
    }
}
