//! Generalized Gell-Mann operator basis, Bloch decomposition, and the
//! variance-sum identities over that basis.
//!
//! For dimension d the basis has d^2 - 1 traceless Hermitian matrices:
//! d - 1 diagonal ones
//! `G^d_m = sqrt(2/(m(m+1))) (sum_{l=1}^{m} |l><l| - m |m+1><m+1|)`,
//! plus symmetric `|j><k| + |k><j|` and antisymmetric
//! `-i(|j><k| - |k><j|)` pairs for 1 <= j < k <= d (textbook 1-based
//! labels; storage is 0-based). Together with the identity they are
//! orthogonal under the Hilbert-Schmidt inner product with
//! `Tr(G_a G_b) = 2 delta_ab`. For d = 2 they reduce to the Pauli triple
//! (sigma_z, sigma_x, sigma_y).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::states::DensityMatrix;
use crate::uncertainty::variance;

/// Slack for the sum uncertainty bound and the d = 2 trade-off identity.
pub const BOUND_SLACK: f64 = 1e-10;

/// The generalized Gell-Mann basis for one dimension.
#[derive(Debug, Clone)]
pub struct GmmBasis {
    dim: usize,
    diagonal: Vec<HermitianMatrix>,
    symmetric: Vec<HermitianMatrix>,
    antisymmetric: Vec<HermitianMatrix>,
    /// 1-based (j, k) labels shared by the symmetric and antisymmetric sets.
    pair_labels: Vec<(usize, usize)>,
}

impl GmmBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Diagonal matrices; index m - 1 holds the label-m matrix.
    pub fn diagonal(&self) -> &[HermitianMatrix] {
        &self.diagonal
    }

    pub fn symmetric(&self) -> &[HermitianMatrix] {
        &self.symmetric
    }

    pub fn antisymmetric(&self) -> &[HermitianMatrix] {
        &self.antisymmetric
    }

    /// 1-based diagonal label for a storage index.
    pub fn diagonal_label(&self, index: usize) -> usize {
        index + 1
    }

    /// 1-based (j, k) labels, lexicographic, shared by both off-diagonal sets.
    pub fn pair_labels(&self) -> &[(usize, usize)] {
        &self.pair_labels
    }

    pub fn len(&self) -> usize {
        self.diagonal.len() + self.symmetric.len() + self.antisymmetric.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All basis matrices: diagonal, then symmetric, then antisymmetric.
    pub fn iter(&self) -> impl Iterator<Item = &HermitianMatrix> {
        self.diagonal
            .iter()
            .chain(self.symmetric.iter())
            .chain(self.antisymmetric.iter())
    }
}

/// Construct the generalized Gell-Mann basis for dimension d >= 2.
pub fn gmm_basis(d: usize) -> Result<GmmBasis> {
    if d < 2 {
        return Err(Error::DimensionTooLarge { dim: d, max: 2 });
    }
    let mut diagonal = Vec::with_capacity(d - 1);
    for m in 1..d {
        let scale = (2.0 / (m as f64 * (m + 1) as f64)).sqrt();
        let mut diag = vec![0.0; d];
        for entry in diag.iter_mut().take(m) {
            *entry = scale;
        }
        diag[m] = -(m as f64) * scale;
        diagonal.push(HermitianMatrix::from_diag(&diag));
    }

    let mut symmetric = Vec::with_capacity(d * (d - 1) / 2);
    let mut antisymmetric = Vec::with_capacity(d * (d - 1) / 2);
    let mut pair_labels = Vec::with_capacity(d * (d - 1) / 2);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut s = ComplexMatrix::zeros(d, d);
            s.set(j, k, Complex64::new(1.0, 0.0));
            s.set(k, j, Complex64::new(1.0, 0.0));
            symmetric.push(HermitianMatrix::new(s)?);

            let mut a = ComplexMatrix::zeros(d, d);
            a.set(j, k, Complex64::new(0.0, -1.0));
            a.set(k, j, Complex64::new(0.0, 1.0));
            antisymmetric.push(HermitianMatrix::new(a)?);

            pair_labels.push((j + 1, k + 1));
        }
    }

    Ok(GmmBasis {
        dim: d,
        diagonal,
        symmetric,
        antisymmetric,
        pair_labels,
    })
}

/// Expansion coefficients of a state over the basis:
/// rho = Tr(rho)/d * I + 1/2 sum_m c^d_m G^d_m + 1/2 sum c^s G^s + 1/2 sum c^a G^a
/// with every coefficient Tr(G rho), real for Hermitian input.
#[derive(Debug, Clone)]
pub struct BlochCoefficients {
    pub dim: usize,
    /// Tr(rho); 1 for a density matrix.
    pub identity: f64,
    pub diagonal: Vec<f64>,
    pub symmetric: Vec<f64>,
    pub antisymmetric: Vec<f64>,
}

impl BlochCoefficients {
    /// Rebuild the matrix from the coefficients.
    pub fn reconstruct(&self, basis: &GmmBasis) -> ComplexMatrix {
        let d = self.dim;
        let mut out =
            ComplexMatrix::identity(d).scale(Complex64::new(self.identity / d as f64, 0.0));
        let half = |c: f64| Complex64::new(0.5 * c, 0.0);
        for (c, g) in self.diagonal.iter().zip(basis.diagonal()) {
            out = out.add(&g.matrix().scale(half(*c)));
        }
        for (c, g) in self.symmetric.iter().zip(basis.symmetric()) {
            out = out.add(&g.matrix().scale(half(*c)));
        }
        for (c, g) in self.antisymmetric.iter().zip(basis.antisymmetric()) {
            out = out.add(&g.matrix().scale(half(*c)));
        }
        out
    }
}

fn check_dim(rho: &DensityMatrix, basis: &GmmBasis) -> Result<()> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: basis.dim(),
        });
    }
    Ok(())
}

/// Decompose a state over the basis.
pub fn bloch_decompose(rho: &DensityMatrix, basis: &GmmBasis) -> Result<BlochCoefficients> {
    check_dim(rho, basis)?;
    let coeffs = |set: &[HermitianMatrix]| -> Result<Vec<f64>> {
        set.iter().map(|g| rho.expectation(g)).collect()
    };
    Ok(BlochCoefficients {
        dim: basis.dim(),
        identity: rho.hermitian().trace_real(),
        diagonal: coeffs(basis.diagonal())?,
        symmetric: coeffs(basis.symmetric())?,
        antisymmetric: coeffs(basis.antisymmetric())?,
    })
}

/// Sums of squared expectation values over the diagonal and off-diagonal
/// subsets. Closed forms: diagonal sum = 2 P_l, off-diagonal sum = 2 C_hs.
pub fn gmm_expectation_sums(rho: &DensityMatrix, basis: &GmmBasis) -> Result<(f64, f64)> {
    check_dim(rho, basis)?;
    let mut diag_sq = 0.0;
    for g in basis.diagonal() {
        diag_sq += rho.expectation(g)?.powi(2);
    }
    let mut off_sq = 0.0;
    for g in basis.symmetric().iter().chain(basis.antisymmetric()) {
        off_sq += rho.expectation(g)?.powi(2);
    }
    Ok((diag_sq, off_sq))
}

/// Variance sums over the basis, by direct per-matrix evaluation and by
/// the closed forms. Both routes are kept: the closed forms are the claim
/// under test, not a shortcut.
#[derive(Debug, Clone, Copy)]
pub struct GmmVarianceSums {
    /// sum_m V(rho, G^d_m) summed matrix by matrix.
    pub diag_direct: f64,
    /// Closed form 2(d-1)/d - 2 P_l(rho).
    pub diag_closed: f64,
    /// sum_{j<k} (V(rho, G^s) + V(rho, G^a)) summed matrix by matrix.
    pub offdiag_direct: f64,
    /// Closed form 2(d-1) - 2 C_hs(rho).
    pub offdiag_closed: f64,
}

impl GmmVarianceSums {
    pub fn diag_residual(&self) -> f64 {
        (self.diag_direct - self.diag_closed).abs()
    }

    pub fn offdiag_residual(&self) -> f64 {
        (self.offdiag_direct - self.offdiag_closed).abs()
    }

    pub fn total_direct(&self) -> f64 {
        self.diag_direct + self.offdiag_direct
    }
}

pub fn gmm_variance_sums(rho: &DensityMatrix, basis: &GmmBasis) -> Result<GmmVarianceSums> {
    check_dim(rho, basis)?;
    let d = basis.dim() as f64;
    let mut diag_direct = 0.0;
    for g in basis.diagonal() {
        diag_direct += variance(rho, g)?;
    }
    let mut offdiag_direct = 0.0;
    for g in basis.symmetric().iter().chain(basis.antisymmetric()) {
        offdiag_direct += variance(rho, g)?;
    }
    let p_l = crate::complementarity::predictability_l(rho)?;
    let c_hs = crate::complementarity::coherence_hs(rho)?;
    Ok(GmmVarianceSums {
        diag_direct,
        diag_closed: 2.0 * (d - 1.0) / d - 2.0 * p_l,
        offdiag_direct,
        offdiag_closed: 2.0 * (d - 1.0) - 2.0 * c_hs,
    })
}

/// Classical uncertainty over the basis:
/// C(rho, G) = 1/2 sum_m V(rho, G^d_m) + 1/2 sum_{j<k} (V^s + V^a) - (d - 1),
/// which equals the linear entropy S_l(rho).
pub fn gmm_classical_uncertainty(rho: &DensityMatrix, basis: &GmmBasis) -> Result<f64> {
    let sums = gmm_variance_sums(rho, basis)?;
    Ok(0.5 * sums.diag_direct + 0.5 * sums.offdiag_direct - (basis.dim() as f64 - 1.0))
}

/// Outcome of the sum uncertainty relation over the full basis:
/// total variance sum >= 2(d - 1).
#[derive(Debug, Clone, Copy)]
pub struct SumUncertaintyCheck {
    pub lhs: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn sum_uncertainty_check(rho: &DensityMatrix, basis: &GmmBasis) -> Result<SumUncertaintyCheck> {
    let sums = gmm_variance_sums(rho, basis)?;
    let lhs = sums.total_direct();
    let bound = 2.0 * (basis.dim() as f64 - 1.0);
    Ok(SumUncertaintyCheck {
        lhs,
        bound,
        holds: lhs >= bound - BOUND_SLACK,
    })
}
