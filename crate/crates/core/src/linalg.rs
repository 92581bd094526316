//! Dense complex linear algebra for small Hermitian problems.
//!
//! Everything here is sized for density matrices of dimension at most
//! [`MAX_DIM`]: storage is dense row-major, products are the naive
//! triple loop, and the eigensolver is a cyclic Jacobi sweep chosen for
//! determinism rather than speed.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest matrix dimension the eigensolver accepts.
pub const MAX_DIM: usize = 64;

/// Hermiticity tolerance checked at [`HermitianMatrix`] construction.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Jacobi convergence threshold on the largest off-diagonal magnitude.
pub const JACOBI_OFF_TOL: f64 = 1e-12;

/// Sweep cap for the Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues in `[PSD_EIG_FLOOR, 0)` are treated as exact zeros by the
/// positive-semidefinite matrix functions; anything smaller is an error.
pub const PSD_EIG_FLOOR: f64 = -1e-10;

/// Eigenvalues below this are rounding residue of exact zero modes (the
/// matrices here have unit-scale spectra). The square root zeroes them:
/// sqrt would amplify noise at 1e-17 into entry errors at 1e-8, which is
/// what rank-deficient states produce for their null space.
pub const PSD_ZERO_FLOOR: f64 = 1e-14;

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for j in 0..dim {
            m.set(j, j, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: ncols,
                });
            }
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data: rows.concat(),
        })
    }

    /// Convenience constructor from real entries (tests and fixed states).
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let lifted: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&lifted)
    }

    /// Rank-1 projector |psi><psi| of an arbitrary (not necessarily unit) vector.
    pub fn outer(psi: &[Complex64]) -> Self {
        let d = psi.len();
        let mut m = Self::zeros(d, d);
        for j in 0..d {
            for k in 0..d {
                m.set(j, k, psi[j] * psi[k].conj());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: Complex64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Matrix product; dimensions must already agree.
    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|j| self.get(j, j)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Tr(A B) without forming the product: sum_{j,k} A[j,k] B[k,j].
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.cols(), b.rows());
    assert_eq!(a.rows(), b.cols());
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..a.rows() {
        for k in 0..a.cols() {
            acc += a.get(j, k) * b.get(k, j);
        }
    }
    acc
}

/// Square complex matrix verified to equal its conjugate transpose
/// within [`HERMITICITY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let mut residual: f64 = 0.0;
        for j in 0..matrix.rows() {
            for k in j..matrix.cols() {
                residual = residual.max((matrix.get(j, k) - matrix.get(k, j).conj()).norm());
            }
        }
        if residual > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                residual,
                tol: HERMITICITY_TOL,
            });
        }
        Ok(Self { inner: matrix })
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = ComplexMatrix::zeros(diag.len(), diag.len());
        for (j, &x) in diag.iter().enumerate() {
            m.set(j, j, Complex64::new(x, 0.0));
        }
        Self { inner: m }
    }

    /// Projector |j><j| onto basis state `j`.
    pub fn projector(dim: usize, j: usize) -> Result<Self> {
        if j >= dim {
            return Err(Error::IndexOutOfRange { index: j, dim });
        }
        let mut diag = vec![0.0; dim];
        diag[j] = 1.0;
        Ok(Self::from_diag(&diag))
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.inner.get(j, k)
    }

    /// Real part of a diagonal entry (the imaginary part is bounded by the
    /// hermiticity tolerance).
    pub fn diag(&self, j: usize) -> f64 {
        self.inner.get(j, j).re
    }

    pub fn trace_real(&self) -> f64 {
        self.inner.trace().re
    }

    /// A + c*I, preserving hermiticity exactly for real c.
    pub fn shift(&self, c: f64) -> HermitianMatrix {
        let mut m = self.inner.clone();
        for j in 0..m.rows() {
            let v = m.get(j, j) + Complex64::new(c, 0.0);
            m.set(j, j, v);
        }
        HermitianMatrix { inner: m }
    }

    /// Used by constructions that are Hermitian by algebra (sums of
    /// conjugate pairs); skips the tolerance scan.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { inner: matrix }
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues
/// paired with the columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose column k pairs with eigenvalue k.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// V f(L) V^dagger, hermitized exactly by symmetric averaging.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let d = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for k in 0..d {
            let fk = Complex64::new(f(self.eigenvalues[k]), 0.0);
            for r in 0..d {
                scaled.set(r, k, v.get(r, k) * fk);
            }
        }
        let raw = scaled.matmul(&v.adjoint());
        // (M + M^dagger)/2 is Hermitian exactly in floating point.
        let herm = raw.add(&raw.adjoint()).scale(Complex64::new(0.5, 0.0));
        HermitianMatrix::new_unchecked(herm)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| x).into_matrix()
    }

    pub fn reconstruction_residual(&self, h: &HermitianMatrix) -> f64 {
        self.reconstruct().max_abs_diff(h.matrix())
    }

    pub fn unitarity_residual(&self) -> f64 {
        let v = &self.eigenvectors;
        let gram = v.adjoint().matmul(v);
        gram.max_abs_diff(&ComplexMatrix::identity(v.rows()))
    }
}

fn max_offdiag(a: &ComplexMatrix) -> f64 {
    let d = a.rows();
    let mut worst: f64 = 0.0;
    for p in 0..d {
        for q in 0..d {
            if p != q {
                worst = worst.max(a.get(p, q).norm());
            }
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The sweep order (p ascending, q ascending) is fixed, so identical inputs
/// produce bit-identical output. Each rotation zeroes the (p, q) entry by a
/// phase twist that makes it real followed by the classic symmetric
/// rotation. Converges when the largest off-diagonal magnitude drops below
/// [`JACOBI_OFF_TOL`]; gives up after [`JACOBI_MAX_SWEEPS`] sweeps.
pub fn hermitian_eig(h: &HermitianMatrix) -> Result<EigenSystem> {
    let d = h.dim();
    if d > MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: d,
            max: MAX_DIM,
        });
    }
    let mut a = h.matrix().clone();
    let mut v = ComplexMatrix::identity(d);

    let mut converged = d < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if max_offdiag(&a) < JACOBI_OFF_TOL {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a.get(p, q);
                if apq.norm() == 0.0 {
                    continue;
                }
                // Phase beta makes the pivot real; theta is the symmetric
                // Jacobi angle for the resulting 2x2 block.
                let beta = apq.arg();
                let phase = Complex64::from_polar(1.0, beta);
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let theta = 0.5 * (2.0 * apq.norm()).atan2(app - aqq);
                let c = theta.cos();
                let s = theta.sin();

                // Column rotation: A <- A * J with J embedding
                // [[e^{i beta} c, -e^{i beta} s], [s, c]] at (p, q).
                for i in 0..d {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, phase * c * aip + s * aiq);
                    a.set(i, q, -phase * s * aip + c * aiq);
                }
                // Row rotation: A <- J^dagger * A.
                for j in 0..d {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, phase.conj() * c * apj + s * aqj);
                    a.set(q, j, -phase.conj() * s * apj + c * aqj);
                }
                // Accumulate eigenvectors: V <- V * J.
                for i in 0..d {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, phase * c * vip + s * viq);
                    v.set(i, q, -phase * s * vip + c * viq);
                }
            }
        }
    }
    if !converged && max_offdiag(&a) >= JACOBI_OFF_TOL {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            residual: max_offdiag(&a),
        });
    }

    // Sort ascending; ties broken by original index for determinism.
    let raw: Vec<f64> = (0..d).map(|j| a.get(j, j).re).collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| raw[i].partial_cmp(&raw[j]).unwrap().then(i.cmp(&j)));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(d, d);
    for (new_col, &old_col) in order.iter().enumerate() {
        // Canonical phase: largest-magnitude component real and positive.
        let mut best = 0usize;
        let mut best_norm = 0.0f64;
        for r in 0..d {
            let n = v.get(r, old_col).norm();
            if n > best_norm {
                best_norm = n;
                best = r;
            }
        }
        let pivot = v.get(best, old_col);
        let phase = if best_norm > 0.0 {
            pivot.conj() / best_norm
        } else {
            Complex64::new(1.0, 0.0)
        };
        for r in 0..d {
            eigenvectors.set(r, new_col, v.get(r, old_col) * phase);
        }
    }

    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
///
/// Eigenvalues in `[PSD_EIG_FLOOR, PSD_ZERO_FLOOR)` are clamped to 0
/// before the square root; anything below the floor fails with the
/// offending eigenvalue.
pub fn psd_sqrt(rho: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = hermitian_eig(rho)?;
    psd_sqrt_from_eig(&eig)
}

/// Same as [`psd_sqrt`] but reuses an existing eigendecomposition.
pub fn psd_sqrt_from_eig(eig: &EigenSystem) -> Result<HermitianMatrix> {
    let min = eig.min_eigenvalue();
    if min < PSD_EIG_FLOOR {
        return Err(Error::NotPsd { eigenvalue: min });
    }
    Ok(eig.apply(|x| if x < PSD_ZERO_FLOOR { 0.0 } else { x.sqrt() }))
}

/// Tensor (Kronecker) product; block (j, k) equals A[j,k] * B.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ja in 0..a.rows() {
        for ka in 0..a.cols() {
            let f = a.get(ja, ka);
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for jb in 0..b.rows() {
                for kb in 0..b.cols() {
                    out.set(ja * b.rows() + jb, ka * b.cols() + kb, f * b.get(jb, kb));
                }
            }
        }
    }
    out
}

/// Which tensor factor [`partial_trace`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of a Hermitian operator on a dim_a x dim_b tensor product.
///
/// The result is Hermitian exactly (entries are sums of conjugate pairs)
/// and has the same trace as the input.
pub fn partial_trace(
    rho: &HermitianMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<HermitianMatrix> {
    if rho.dim() != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: dim_a * dim_b,
        });
    }
    let idx = |i: usize, b: usize| i * dim_b + b;
    let out = match keep {
        Subsystem::A => {
            let mut m = ComplexMatrix::zeros(dim_a, dim_a);
            for i in 0..dim_a {
                for ip in 0..dim_a {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..dim_b {
                        acc += rho.get(idx(i, b), idx(ip, b));
                    }
                    m.set(i, ip, acc);
                }
            }
            m
        }
        Subsystem::B => {
            let mut m = ComplexMatrix::zeros(dim_b, dim_b);
            for b in 0..dim_b {
                for bp in 0..dim_b {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..dim_a {
                        acc += rho.get(idx(i, b), idx(i, bp));
                    }
                    m.set(b, bp, acc);
                }
            }
            m
        }
    };
    Ok(HermitianMatrix::new_unchecked(out))
}

/// AB - BA.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            left: a.rows(),
            right: b.rows(),
        });
    }
    Ok(a.matmul(b).sub(&b.matmul(a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn pauli_x() -> HermitianMatrix {
        HermitianMatrix::new(
            ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
        )
        .unwrap()
    }

    pub(crate) fn pauli_y() -> HermitianMatrix {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ])
        .unwrap();
        HermitianMatrix::new(m).unwrap()
    }

    pub(crate) fn pauli_z() -> HermitianMatrix {
        HermitianMatrix::from_diag(&[1.0, -1.0])
    }

    fn fig1_rho_half() -> HermitianMatrix {
        HermitianMatrix::new(
            ComplexMatrix::from_real_rows(&[vec![0.75, 0.25], vec![0.25, 0.25]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn eig_diagonal_sigma_z() {
        let eig = hermitian_eig(&pauli_z()).unwrap();
        assert_eq!(eig.eigenvalues(), &[-1.0, 1.0]);
    }

    #[test]
    fn eig_sigma_x_spectrum_and_vectors() {
        let eig = hermitian_eig(&pauli_x()).unwrap();
        assert!((eig.eigenvalues()[0] + 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues()[1] - 1.0).abs() < 1e-12);
        let inv = 1.0 / 2.0_f64.sqrt();
        let v = eig.eigenvectors();
        // (|0> -+ |1>)/sqrt(2), up to the canonical phase: check unit
        // overlap with the textbook vectors.
        let minus = [Complex64::new(inv, 0.0), Complex64::new(-inv, 0.0)];
        let plus = [Complex64::new(inv, 0.0), Complex64::new(inv, 0.0)];
        let overlap = |col: usize, target: &[Complex64; 2]| -> f64 {
            (0..2)
                .map(|r| target[r].conj() * v.get(r, col))
                .sum::<Complex64>()
                .norm()
        };
        assert!((overlap(0, &minus) - 1.0).abs() < 1e-10);
        assert!((overlap(1, &plus) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eig_two_by_two_against_characteristic_roots() {
        // Characteristic quadratic of [[3/4,1/4],[1/4,1/4]]:
        // trace 1, det 1/8, roots (2 -+ sqrt(2))/4.
        let eig = hermitian_eig(&fig1_rho_half()).unwrap();
        let lo = (2.0 - 2.0_f64.sqrt()) / 4.0;
        let hi = (2.0 + 2.0_f64.sqrt()) / 4.0;
        assert!((eig.eigenvalues()[0] - lo).abs() < 1e-12);
        assert!((eig.eigenvalues()[1] - hi).abs() < 1e-12);
    }

    #[test]
    fn eig_is_deterministic() {
        let h = fig1_rho_half();
        let a = hermitian_eig(&h).unwrap();
        let b = hermitian_eig(&h).unwrap();
        assert_eq!(a.eigenvalues(), b.eigenvalues());
        assert_eq!(a.eigenvectors(), b.eigenvectors());
    }

    #[test]
    fn psd_sqrt_scalar_matrix() {
        let half = HermitianMatrix::from_diag(&[0.5, 0.5]);
        let r = psd_sqrt(&half).unwrap();
        let expected = 0.5_f64.sqrt();
        for j in 0..2 {
            assert!((r.diag(j) - expected).abs() < 1e-12);
        }
        assert!(r.get(0, 1).norm() < 1e-12);
    }

    #[test]
    fn psd_sqrt_of_projector_is_itself() {
        let proj = HermitianMatrix::new(
            ComplexMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap(),
        )
        .unwrap();
        let r = psd_sqrt(&proj).unwrap();
        assert!(r.matrix().max_abs_diff(proj.matrix()) < 1e-10);
    }

    #[test]
    fn psd_sqrt_diagonal_case() {
        let gamma = 0.3;
        let rho = HermitianMatrix::from_diag(&[(1.0 + gamma) / 2.0, (1.0 - gamma) / 2.0]);
        let r = psd_sqrt(&rho).unwrap();
        assert!((r.diag(0) - ((1.0 + gamma) / 2.0).sqrt()).abs() < 1e-12);
        assert!((r.diag(1) - ((1.0 - gamma) / 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn psd_sqrt_rejects_negative_spectrum() {
        let h = HermitianMatrix::from_diag(&[1.5, -0.5]);
        match psd_sqrt(&h) {
            Err(Error::NotPsd { eigenvalue }) => assert!((eigenvalue + 0.5).abs() < 1e-12),
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));

        let p0 = HermitianMatrix::projector(2, 0).unwrap();
        let p1 = HermitianMatrix::projector(2, 1).unwrap();
        let k = kron(p0.matrix(), p1.matrix());
        let expected = HermitianMatrix::from_diag(&[0.0, 1.0, 0.0, 0.0]);
        assert!(k.max_abs_diff(expected.matrix()) < 1e-15);
    }

    #[test]
    fn kron_flips_both_qubits() {
        let xx = kron(pauli_x().matrix(), pauli_x().matrix());
        let zero_zero = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let out = xx.mul_vec(&zero_zero);
        assert!((out[3] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(out[0].norm() + out[1].norm() + out[2].norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let phi = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let chi = [
            Complex64::new(0.5, 0.5),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.0, 0.0),
        ];
        let mut joint = Vec::new();
        for a in &phi {
            for b in &chi {
                joint.push(a * b);
            }
        }
        let rho = HermitianMatrix::new(ComplexMatrix::outer(&joint)).unwrap();
        let reduced = partial_trace(&rho, 2, 4, Subsystem::A).unwrap();
        let expected = ComplexMatrix::outer(&phi);
        assert!(reduced.matrix().max_abs_diff(&expected) < 1e-12);
        assert!((reduced.trace_real() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_balanced_two_qubit() {
        let inv = 1.0 / 2.0_f64.sqrt();
        // x|01> + sqrt(1-x^2)|10> at x = 1/sqrt(2).
        let psi = [
            Complex64::new(0.0, 0.0),
            Complex64::new(inv, 0.0),
            Complex64::new(inv, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let rho = HermitianMatrix::new(ComplexMatrix::outer(&psi)).unwrap();
        let ra = partial_trace(&rho, 2, 2, Subsystem::A).unwrap();
        assert!(
            ra.matrix()
                .max_abs_diff(HermitianMatrix::from_diag(&[0.5, 0.5]).matrix())
                < 1e-12
        );
    }

    #[test]
    fn partial_trace_dimension_check() {
        let rho = HermitianMatrix::from_diag(&[0.5, 0.5]);
        assert!(matches!(
            partial_trace(&rho, 2, 2, Subsystem::A),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn commutator_pauli_algebra() {
        let c = commutator(pauli_x().matrix(), pauli_y().matrix()).unwrap();
        let two_i_sigma_z = pauli_z().matrix().scale(Complex64::new(0.0, 2.0));
        assert!(c.max_abs_diff(&two_i_sigma_z) < 1e-15);

        let self_comm = commutator(pauli_x().matrix(), pauli_x().matrix()).unwrap();
        assert!(self_comm.max_abs() < 1e-15);
    }

    #[test]
    fn commutator_diagonal_with_sigma_x() {
        // [diag(a,b), sigma_x] = (a-b) * i*sigma_y, expanded by hand.
        let (a, b) = (1.7, -0.4);
        let c = commutator(
            HermitianMatrix::from_diag(&[a, b]).matrix(),
            pauli_x().matrix(),
        )
        .unwrap();
        let i_sigma_y = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(c.max_abs_diff(&i_sigma_y.scale(Complex64::new(a - b, 0.0))) < 1e-15);
    }

    #[test]
    fn sqrt_squares_back_over_random_density_sweep() {
        for trial in 0..1000u64 {
            let d = 2 + (trial as usize) % 7;
            let rank = 1 + (trial as usize) % d;
            let rho = crate::states::random_density(d, rank, 5000 + trial).unwrap();
            let s = rho.sqrt();
            assert!(s.matrix().matmul(s.matrix()).max_abs_diff(rho.matrix()) <= 1e-9);
        }
    }

    #[test]
    fn hermitian_rejects_asymmetric() {
        let m = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eig_residuals_over_random_hermitian_sweep() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..1000 {
            let d = 2 + trial % 7;
            let mut m = ComplexMatrix::zeros(d, d);
            for j in 0..d {
                m.set(j, j, Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, 0.0));
                for k in (j + 1)..d {
                    let z =
                        Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
                    m.set(j, k, z);
                    m.set(k, j, z.conj());
                }
            }
            let h = HermitianMatrix::new(m).unwrap();
            let eig = hermitian_eig(&h).unwrap();
            assert!(eig.reconstruction_residual(&h) <= 1e-10);
            assert!(eig.unitarity_residual() <= 1e-10);
            let mut sorted = eig.eigenvalues().to_vec();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(sorted, eig.eigenvalues());
        }
    }
}
