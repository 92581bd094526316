//! Splitting the variance of an observable into quantum and classical
//! parts, and the per-path uncertainty quantities of a d-path interferometer.
//!
//! The quantum part is the Wigner-Yanase skew information
//! Q(rho, A) = -1/2 Tr([sqrt(rho), A0]^2); the classical part is the
//! remainder C(rho, A) = V - Q = Tr(sqrt(rho) A0 sqrt(rho) A0), with
//! A0 = A - Tr(rho A). For the path projectors these collapse to closed
//! forms in the entries of rho and sqrt(rho).

use crate::error::{clamp_nonneg, Error, Result};
use crate::linalg::{trace_of_product, HermitianMatrix};
use crate::states::DensityMatrix;

/// Quantities below this are rounding noise; anything more negative is an
/// inconsistency (see [`crate::error::Error::NegativeQuantity`]).
const NEG_FLOOR: f64 = -1e-12;

/// Agreement required between the two algebraic routes to the classical
/// uncertainty.
const ROUTE_TOL: f64 = 1e-9;

/// Slack used by [`robertson_check`].
const ROBERTSON_SLACK: f64 = 1e-10;

fn check_dims(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<()> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: a.dim(),
        });
    }
    Ok(())
}

fn check_path(rho: &DensityMatrix, j: usize) -> Result<()> {
    if j >= rho.dim() {
        return Err(Error::IndexOutOfRange {
            index: j,
            dim: rho.dim(),
        });
    }
    Ok(())
}

/// Centered observable A0 = A - Tr(rho A) * I.
pub fn centered(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(rho, a)?;
    Ok(a.shift(-rho.expectation(a)?))
}

/// Variance V(rho, A) = Tr(rho A^2) - (Tr(rho A))^2.
pub fn variance(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<f64> {
    check_dims(rho, a)?;
    let mean = rho.expectation(a)?;
    let a_sq = a.matrix().matmul(a.matrix());
    let second = trace_of_product(rho.matrix(), &a_sq).re;
    clamp_nonneg(second - mean * mean, NEG_FLOOR, "variance")
}

/// Wigner-Yanase skew information Q(rho, A) = -1/2 Tr([sqrt(rho), A0]^2),
/// the quantum part of the variance.
pub fn skew_information(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<f64> {
    check_dims(rho, a)?;
    let a0 = centered(rho, a)?;
    // [sqrt(rho), A0] = N - N^dagger with N = sqrt(rho) * A0.
    let n = rho.sqrt().matrix().matmul(a0.matrix());
    let k = n.sub(&n.adjoint());
    let q = -0.5 * trace_of_product(&k, &k).re;
    clamp_nonneg(q, NEG_FLOOR, "skew information")
}

/// Classical uncertainty C(rho, A) = V - Q = Tr(sqrt(rho) A0 sqrt(rho) A0).
///
/// Both routes are evaluated and must agree within 1e-9; the trace form is
/// returned.
pub fn classical_uncertainty(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<f64> {
    check_dims(rho, a)?;
    let a0 = centered(rho, a)?;
    let n = rho.sqrt().matrix().matmul(a0.matrix());
    let trace_form = trace_of_product(&n, &n).re;
    let difference_form = variance(rho, a)? - skew_information(rho, a)?;
    let residual = (trace_form - difference_form).abs();
    if residual > ROUTE_TOL {
        return Err(Error::Inconsistent {
            what: "classical uncertainty (trace form vs variance - skew)",
            residual,
        });
    }
    clamp_nonneg(trace_form, NEG_FLOOR, "classical uncertainty")
}

/// Variance of an observable split into its quantum and classical parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintySplit {
    pub variance: f64,
    pub quantum: f64,
    pub classical: f64,
}

impl UncertaintySplit {
    /// Tolerance on variance = quantum + classical.
    pub const SPLIT_TOL: f64 = 1e-10;

    pub fn evaluate(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<Self> {
        let variance = variance(rho, a)?;
        let quantum = skew_information(rho, a)?;
        let classical = classical_uncertainty(rho, a)?;
        let residual = (variance - quantum - classical).abs();
        if residual > Self::SPLIT_TOL {
            return Err(Error::Inconsistent {
                what: "variance decomposition",
                residual,
            });
        }
        Ok(Self {
            variance,
            quantum,
            classical,
        })
    }
}

/// Quantum uncertainty of path j: rho_jj - (sqrt(rho)_jj)^2.
pub fn path_quantum_uncertainty(rho: &DensityMatrix, j: usize) -> Result<f64> {
    check_path(rho, j)?;
    let s = rho.sqrt().diag(j);
    clamp_nonneg(
        rho.hermitian().diag(j) - s * s,
        NEG_FLOOR,
        "path quantum uncertainty",
    )
}

/// Classical uncertainty of path j: (sqrt(rho)_jj)^2 - rho_jj^2.
pub fn path_classical_uncertainty(rho: &DensityMatrix, j: usize) -> Result<f64> {
    check_path(rho, j)?;
    let s = rho.sqrt().diag(j);
    let p = rho.hermitian().diag(j);
    clamp_nonneg(s * s - p * p, NEG_FLOOR, "path classical uncertainty")
}

/// Quantum uncertainty of all d paths: U_q = sum_j Q(rho, |j><j|).
///
/// Summed from the per-path closed form; equals the Wigner-Yanase
/// coherence sum_{j != k} |sqrt(rho)_jk|^2, which
/// [`crate::complementarity::coherence_wy`] computes independently.
pub fn total_quantum_uncertainty(rho: &DensityMatrix) -> Result<f64> {
    let mut sum = 0.0;
    for j in 0..rho.dim() {
        sum += path_quantum_uncertainty(rho, j)?;
    }
    Ok(sum)
}

/// Classical uncertainty of all d paths: U_c = sum_j C(rho, |j><j|).
pub fn total_classical_uncertainty(rho: &DensityMatrix) -> Result<f64> {
    let mut sum = 0.0;
    for j in 0..rho.dim() {
        sum += path_classical_uncertainty(rho, j)?;
    }
    Ok(sum)
}

/// Outcome of the Robertson uncertainty-relation check
/// V(rho, A) V(rho, B) >= 1/4 |Tr(rho [A, B])|^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobertsonCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn robertson_check(
    rho: &DensityMatrix,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<RobertsonCheck> {
    check_dims(rho, a)?;
    check_dims(rho, b)?;
    let lhs = variance(rho, a)? * variance(rho, b)?;
    let comm = crate::linalg::commutator(a.matrix(), b.matrix())?;
    let rhs = 0.25 * trace_of_product(rho.matrix(), &comm).norm_sqr();
    Ok(RobertsonCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - ROBERTSON_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::states::{density_from_ket, fig1_states, random_density, DensityMatrix};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_z() -> HermitianMatrix {
        HermitianMatrix::from_diag(&[1.0, -1.0])
    }

    fn sigma_x() -> HermitianMatrix {
        HermitianMatrix::new(
            ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
        )
        .unwrap()
    }

    fn sigma_y() -> HermitianMatrix {
        HermitianMatrix::new(
            ComplexMatrix::from_rows(&[
                vec![c(0.0, 0.0), c(0.0, -1.0)],
                vec![c(0.0, 1.0), c(0.0, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap()
    }

    fn maximally_mixed(d: usize) -> DensityMatrix {
        DensityMatrix::from_hermitian(HermitianMatrix::from_diag(&vec![1.0 / d as f64; d])).unwrap()
    }

    fn plus_state() -> DensityMatrix {
        let inv = 1.0 / 2.0_f64.sqrt();
        density_from_ket(&[c(inv, 0.0), c(inv, 0.0)]).unwrap()
    }

    #[test]
    fn variance_examples() {
        // Eigenstate of the observable.
        let zplus = density_from_ket(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(variance(&zplus, &sigma_z()).unwrap() < 1e-12);

        assert!((variance(&maximally_mixed(2), &sigma_z()).unwrap() - 1.0).abs() < 1e-12);

        // Diagonal rho and a path projector: rho_jj - rho_jj^2.
        let rho = DensityMatrix::from_hermitian(HermitianMatrix::from_diag(&[0.7, 0.3])).unwrap();
        let pi0 = HermitianMatrix::projector(2, 0).unwrap();
        assert!((variance(&rho, &pi0).unwrap() - (0.7 - 0.49)).abs() < 1e-12);
    }

    #[test]
    fn skew_information_examples() {
        // Commuting case: all uncertainty is classical.
        let rho = DensityMatrix::from_hermitian(HermitianMatrix::from_diag(&[0.7, 0.3])).unwrap();
        assert!(skew_information(&rho, &sigma_z()).unwrap() < 1e-12);

        // Pure case: all uncertainty is quantum.
        let plus = plus_state();
        let v = variance(&plus, &sigma_z()).unwrap();
        let q = skew_information(&plus, &sigma_z()).unwrap();
        assert!((v - q).abs() < 1e-12);

        // Maximal quantum uncertainty (d-1)/d^2 at d = 2.
        let pi0 = HermitianMatrix::projector(2, 0).unwrap();
        assert!((skew_information(&plus, &pi0).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn classical_uncertainty_examples() {
        let plus = plus_state();
        let pi0 = HermitianMatrix::projector(2, 0).unwrap();
        assert!(classical_uncertainty(&plus, &pi0).unwrap() < 1e-12);

        assert!((classical_uncertainty(&maximally_mixed(2), &pi0).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn classical_uncertainty_cross_checked_by_hand_eigendecomposition() {
        // rho = [[3/4,1/4],[1/4,1/4]]: eigenvalues (2 -+ sqrt(2))/4 with
        // unnormalized eigenvectors (1/4, lambda - 3/4). Build sqrt(rho)
        // by hand and evaluate Tr(sqrt(rho) A0 sqrt(rho) A0) directly.
        let (rho, _) = fig1_states(0.5).unwrap();
        let a = sigma_z();

        let s2 = 2.0_f64.sqrt();
        let lambdas = [(2.0 - s2) / 4.0, (2.0 + s2) / 4.0];
        let mut sqrt_rho = [[0.0f64; 2]; 2];
        for lam in lambdas {
            let v = [0.25, lam - 0.75];
            let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
            let v = [v[0] / n, v[1] / n];
            for j in 0..2 {
                for k in 0..2 {
                    sqrt_rho[j][k] += lam.sqrt() * v[j] * v[k];
                }
            }
        }
        // A0 = sigma_z - (3/4 - 1/4) I = diag(1/2, -3/2).
        let a0 = [[0.5, 0.0], [0.0, -1.5]];
        let mut m = [[0.0f64; 2]; 2];
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[j][k] += sqrt_rho[j][l] * a0[l][k];
                }
            }
        }
        let mut expected = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                expected += m[j][k] * m[k][j];
            }
        }

        let c_trace = classical_uncertainty(&rho, &a).unwrap();
        assert!((c_trace - expected).abs() < 1e-12);
        let v = variance(&rho, &a).unwrap();
        let q = skew_information(&rho, &a).unwrap();
        assert!((v - q - c_trace).abs() < 1e-12);
    }

    #[test]
    fn path_quantum_uncertainty_examples() {
        let rho = DensityMatrix::from_hermitian(HermitianMatrix::from_diag(&[0.7, 0.3])).unwrap();
        for j in 0..2 {
            assert!(path_quantum_uncertainty(&rho, j).unwrap() < 1e-12);
        }

        // Pure balanced state: (d-1)/d^2 per path.
        let plus = plus_state();
        for j in 0..2 {
            assert!((path_quantum_uncertainty(&plus, j).unwrap() - 0.25).abs() < 1e-12);
        }

        // Known path: zero for every j, even j = k.
        let known = density_from_ket(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        for j in 0..2 {
            assert!(path_quantum_uncertainty(&known, j).unwrap() < 1e-12);
        }

        assert!(matches!(
            path_quantum_uncertainty(&plus, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn path_classical_uncertainty_detector_closed_form() {
        let inv = 1.0 / 2.0_f64.sqrt();
        for gamma in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let model =
                crate::states::DetectorModel::two_path([c(inv, 0.0), c(inv, 0.0)], gamma).unwrap();
            let rho = crate::states::detector_reduced_state(&model).unwrap();
            // 2x2 eigendecomposition by hand gives sqrt(1 - gamma^2)/4.
            let expected = (1.0 - gamma * gamma).sqrt() / 4.0;
            assert!((path_classical_uncertainty(&rho, 0).unwrap() - expected).abs() < 1e-12);
        }

        let plus = plus_state();
        for j in 0..2 {
            assert!(path_classical_uncertainty(&plus, j).unwrap() < 1e-12);
        }
    }

    #[test]
    fn total_uncertainties_examples() {
        let rho = DensityMatrix::from_hermitian(HermitianMatrix::from_diag(&[0.6, 0.4])).unwrap();
        assert!(total_quantum_uncertainty(&rho).unwrap() < 1e-12);

        // sqrt of the plus projector is itself: U_q = 2 * (1/2)^2 = 1/2.
        assert!((total_quantum_uncertainty(&plus_state()).unwrap() - 0.5).abs() < 1e-12);

        let inv = 1.0 / 2.0_f64.sqrt();
        for gamma in [0.0, 0.3, 0.5, 1.0] {
            let model =
                crate::states::DetectorModel::two_path([c(inv, 0.0), c(inv, 0.0)], gamma).unwrap();
            let rho = crate::states::detector_reduced_state(&model).unwrap();
            let expected = (1.0 - (1.0 - gamma * gamma).sqrt()) / 2.0;
            assert!((total_quantum_uncertainty(&rho).unwrap() - expected).abs() < 1e-12);
        }

        assert!(total_classical_uncertainty(&plus_state()).unwrap() < 1e-12);
        assert!((total_classical_uncertainty(&maximally_mixed(2)).unwrap() - 0.5).abs() < 1e-12);

        // x-state reduced: U_c = 2 x^2 (1 - x^2).
        let x = 0.6;
        let rho_a = crate::states::x_family_state(x)
            .unwrap()
            .reduced_a()
            .unwrap();
        let expected = 2.0 * x * x * (1.0 - x * x);
        assert!((total_classical_uncertainty(&rho_a).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn robertson_examples() {
        // Commuting observables: rhs = 0.
        let rho = maximally_mixed(2);
        let check = robertson_check(&rho, &sigma_z(), &sigma_z()).unwrap();
        assert!(check.rhs < 1e-15 && check.holds);

        // Saturation: |z+>, sigma_x, sigma_y.
        let zplus = density_from_ket(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let check = robertson_check(&zplus, &sigma_x(), &sigma_y()).unwrap();
        assert!((check.lhs - 1.0).abs() < 1e-12);
        assert!((check.rhs - 1.0).abs() < 1e-12);
        assert!(check.holds);
    }

    #[test]
    fn robertson_holds_on_random_states() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for trial in 0..1000 {
            let d = 2 + trial % 3;
            let rho = random_density(d, 1 + trial % d, 1000 + trial as u64).unwrap();
            let mut random_obs = || {
                let mut m = ComplexMatrix::zeros(d, d);
                for j in 0..d {
                    m.set(j, j, c(rng.gen::<f64>() * 2.0 - 1.0, 0.0));
                    for k in (j + 1)..d {
                        let z = c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
                        m.set(j, k, z);
                        m.set(k, j, z.conj());
                    }
                }
                HermitianMatrix::new(m).unwrap()
            };
            let a = random_obs();
            let b = random_obs();
            assert!(robertson_check(&rho, &a, &b).unwrap().holds);
        }
    }

    #[test]
    fn decomposition_and_unc_identity_on_random_states() {
        for trial in 0..100u64 {
            let d = 2 + (trial % 4) as usize;
            let rho = random_density(d, 1 + (trial as usize) % d, 3000 + trial).unwrap();

            // V = Q + C for the path projectors.
            for j in 0..d {
                let pi = HermitianMatrix::projector(d, j).unwrap();
                let split = UncertaintySplit::evaluate(&rho, &pi).unwrap();
                assert!((split.variance - split.quantum - split.classical).abs() < 1e-10);
                // Closed forms agree with generic skew/classical evaluation.
                assert!((path_quantum_uncertainty(&rho, j).unwrap() - split.quantum).abs() < 1e-9);
                assert!(
                    (path_classical_uncertainty(&rho, j).unwrap() - split.classical).abs() < 1e-9
                );
            }

            // U_q + U_c = 1 - sum_j rho_jj^2 and the per-path variance sum.
            let uq = total_quantum_uncertainty(&rho).unwrap();
            let uc = total_classical_uncertainty(&rho).unwrap();
            let diag_purity: f64 = (0..d).map(|j| rho.prob(j).powi(2)).sum();
            assert!((uq + uc - (1.0 - diag_purity)).abs() < 1e-9);

            let path_var_sum: f64 = (0..d)
                .map(|j| variance(&rho, &HermitianMatrix::projector(d, j).unwrap()).unwrap())
                .sum();
            assert!((path_var_sum - (uq + uc)).abs() < 1e-9);

            // Complementarity bound.
            let d_f = d as f64;
            assert!(uq + uc <= (d_f - 1.0) / d_f + 1e-10);
        }
    }
}
