//! Quantum state construction and validation.
//!
//! [`DensityMatrix`] is the validated workhorse: Hermitian, unit trace,
//! positive semidefinite, with its eigendecomposition and square root
//! cached at construction. The module also provides the named example
//! families used throughout the test and sweep machinery, the
//! detector-coupling model, Ginibre sampling of random states, and the
//! JSON state-file format.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermitian_eig, partial_trace, psd_sqrt_from_eig, ComplexMatrix, EigenSystem,
    HermitianMatrix, Subsystem,
};

/// Tolerance on |trace - 1| at density-matrix construction.
pub const TRACE_TOL: f64 = 1e-10;

/// Tolerance on the norm of state vectors.
pub const NORM_TOL: f64 = 1e-10;

/// Slack on diagonal entries of a density matrix: real, in [-1e-12, 1+1e-12].
pub const DIAG_TOL: f64 = 1e-12;

/// Validated quantum state: Hermitian, positive semidefinite, unit trace.
///
/// The eigendecomposition and the principal square root are computed once
/// at construction; the value is immutable afterwards, so reads are safe
/// to share across threads.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    eigen: EigenSystem,
    sqrt: HermitianMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::from_hermitian(HermitianMatrix::new(matrix)?)
    }

    pub fn from_hermitian(matrix: HermitianMatrix) -> Result<Self> {
        let d = matrix.dim();
        for j in 0..d {
            let p = matrix.diag(j);
            if !(-DIAG_TOL..=1.0 + DIAG_TOL).contains(&p) {
                return Err(Error::DiagonalOutOfRange { index: j, value: p });
            }
        }
        let trace_residual = (matrix.trace_real() - 1.0).abs();
        if trace_residual > TRACE_TOL {
            return Err(Error::TraceNotOne {
                residual: trace_residual,
            });
        }
        let eigen = hermitian_eig(&matrix)?;
        let min = eigen.min_eigenvalue();
        if min < linalg::PSD_EIG_FLOOR {
            return Err(Error::NotPsd { eigenvalue: min });
        }
        let sqrt = psd_sqrt_from_eig(&eigen)?;
        Ok(Self {
            matrix,
            eigen,
            sqrt,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.matrix.get(j, k)
    }

    /// Diagonal entry (path probability), clamped into [0, 1].
    pub fn prob(&self, j: usize) -> f64 {
        self.matrix.diag(j).clamp(0.0, 1.0)
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eigen
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.eigen.eigenvalues()
    }

    /// Cached principal square root of the state.
    pub fn sqrt(&self) -> &HermitianMatrix {
        &self.sqrt
    }

    /// Tr rho^2, evaluated entrywise (exact for Hermitian input).
    pub fn purity(&self) -> f64 {
        self.matrix
            .matrix()
            .entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Tr(rho A); real up to hermiticity tolerance.
    pub fn expectation(&self, a: &HermitianMatrix) -> Result<f64> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: a.dim(),
            });
        }
        Ok(linalg::trace_of_product(self.matrix(), a.matrix()).re)
    }

    /// U rho U^dagger for a unitary U (not verified to be unitary).
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: u.rows(),
            });
        }
        let raw = u.matmul(self.matrix()).matmul(&u.adjoint());
        // Hermitize exactly; conjugation only adds rounding noise.
        let herm = raw.add(&raw.adjoint()).scale(Complex64::new(0.5, 0.0));
        DensityMatrix::new(herm)
    }

    /// Simultaneous row/column relabeling: out[perm[j], perm[k]] = rho[j, k].
    pub fn permuted(&self, perm: &[usize]) -> Result<DensityMatrix> {
        let d = self.dim();
        if perm.len() != d {
            return Err(Error::DimensionMismatch {
                left: perm.len(),
                right: d,
            });
        }
        let mut m = ComplexMatrix::zeros(d, d);
        for j in 0..d {
            for k in 0..d {
                m.set(perm[j], perm[k], self.get(j, k));
            }
        }
        DensityMatrix::new(m)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.matrix().max_abs_diff(other.matrix())
    }
}

/// Rank-1 projector |psi><psi| of a unit vector.
pub fn density_from_ket(psi: &[Complex64]) -> Result<DensityMatrix> {
    let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let residual = (norm_sq.sqrt() - 1.0).abs();
    if residual > NORM_TOL {
        return Err(Error::NotNormalized { residual });
    }
    DensityMatrix::new(ComplexMatrix::outer(psi))
}

/// Projection onto the diagonal in the path basis. Idempotent.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let diag: Vec<f64> = (0..rho.dim()).map(|j| rho.hermitian().diag(j)).collect();
    DensityMatrix::from_hermitian(HermitianMatrix::from_diag(&diag))
        .expect("diagonal of a valid density matrix is a valid density matrix")
}

/// Pure state of a dA x dB tensor product, stored as amplitudes in
/// lexicographic order (index = a * dB + b).
#[derive(Debug, Clone)]
pub struct BipartitePureState {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<Complex64>,
}

impl BipartitePureState {
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dim_a * dim_b || dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: dim_a * dim_b,
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let residual = (norm_sq - 1.0).abs();
        if residual > NORM_TOL {
            return Err(Error::NotNormalized { residual });
        }
        Ok(Self {
            dim_a,
            dim_b,
            amplitudes,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitude(&self, a: usize, b: usize) -> Complex64 {
        self.amplitudes[a * self.dim_b + b]
    }

    /// |Psi><Psi| on the full tensor-product space.
    pub fn projector(&self) -> HermitianMatrix {
        HermitianMatrix::new(ComplexMatrix::outer(&self.amplitudes))
            .expect("outer product of a vector is Hermitian")
    }

    pub fn reduced(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let traced = partial_trace(&self.projector(), self.dim_a, self.dim_b, keep)?;
        DensityMatrix::from_hermitian(traced)
    }

    pub fn reduced_a(&self) -> Result<DensityMatrix> {
        self.reduced(Subsystem::A)
    }

    pub fn reduced_b(&self) -> Result<DensityMatrix> {
        self.reduced(Subsystem::B)
    }
}

/// Schmidt coefficients of a bipartite pure state, descending.
///
/// These are the eigenvalues of the reduced state of the smaller factor,
/// clamped to [0, 1]; they sum to 1 within the norm tolerance.
pub fn schmidt_coefficients(psi: &BipartitePureState) -> Result<Vec<f64>> {
    let keep = if psi.dim_a() <= psi.dim_b() {
        Subsystem::A
    } else {
        Subsystem::B
    };
    let reduced = psi.reduced(keep)?;
    let mut lambdas: Vec<f64> = reduced
        .eigenvalues()
        .iter()
        .map(|&x| x.clamp(0.0, 1.0))
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(lambdas)
}

/// Path-detector coupling specified by its Gram matrix.
///
/// The quanton takes path j with amplitude `amplitudes[j]`; the detector
/// states are normalized but not necessarily orthogonal, and only their
/// overlaps G[k, j] = <d_k | d_j> enter the reduced state. Physicality is
/// exactly positive semidefiniteness of G.
#[derive(Debug, Clone)]
pub struct DetectorModel {
    amplitudes: Vec<Complex64>,
    gram: HermitianMatrix,
}

impl DetectorModel {
    pub fn new(amplitudes: Vec<Complex64>, gram: HermitianMatrix) -> Result<Self> {
        let d = amplitudes.len();
        if gram.dim() != d {
            return Err(Error::DimensionMismatch {
                left: gram.dim(),
                right: d,
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let residual = (norm_sq - 1.0).abs();
        if residual > NORM_TOL {
            return Err(Error::NotNormalized { residual });
        }
        for j in 0..d {
            let dev = (gram.get(j, j) - Complex64::new(1.0, 0.0)).norm();
            if dev > NORM_TOL {
                return Err(Error::GramDiagonalNotUnit {
                    index: j,
                    residual: dev,
                });
            }
        }
        let eig = hermitian_eig(&gram)?;
        let min = eig.min_eigenvalue();
        if min < linalg::PSD_EIG_FLOOR {
            return Err(Error::UnphysicalDetector { eigenvalue: min });
        }
        Ok(Self { amplitudes, gram })
    }

    /// Symmetric two-path model with a real overlap gamma in [0, 1].
    pub fn two_path(amplitudes: [Complex64; 2], gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::ParameterOutOfRange {
                name: "gamma",
                value: gamma,
                min: 0.0,
                max: 1.0,
            });
        }
        let gram = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[
            vec![1.0, gamma],
            vec![gamma, 1.0],
        ])?)?;
        Self::new(amplitudes.to_vec(), gram)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn gram(&self) -> &HermitianMatrix {
        &self.gram
    }
}

/// Reduced state of the quanton after coupling to the detector:
/// entry (j, k) is a_j * conj(a_k) * G[k, j].
pub fn detector_reduced_state(model: &DetectorModel) -> Result<DensityMatrix> {
    let d = model.dim();
    let a = model.amplitudes();
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        for k in 0..d {
            m.set(j, k, a[j] * a[k].conj() * model.gram().get(k, j));
        }
    }
    DensityMatrix::new(m)
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            min: 0.0,
            max: 1.0,
        })
    }
}

/// Three-qubit family
/// sqrt(p*eps)|000> + sqrt(p(1-eps))|111> + sqrt((1-p)/2)(|110> + |101>).
///
/// Returns the global pure state split as A|(BC) together with the reduced
/// state of the middle qubit, built from its closed-form entries:
/// rho_00 = p*eps + (1-p)/2, rho_11 = p(1-eps) + (1-p)/2,
/// rho_01 = sqrt(p(1-eps)(1-p)/2). The closed form is cross-checked
/// against the partial trace of the 8-dimensional ket within 1e-12.
/// The reduced state of qubit A is diagonal for every (p, eps).
pub fn three_qubit_phi(p: f64, eps: f64) -> Result<(BipartitePureState, DensityMatrix)> {
    check_unit_interval("p", p)?;
    check_unit_interval("eps", eps)?;

    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    // Index = 4a + 2b + c for qubits (A, B, C).
    amps[0] = Complex64::new((p * eps).sqrt(), 0.0);
    amps[7] = Complex64::new((p * (1.0 - eps)).sqrt(), 0.0);
    amps[6] = Complex64::new(((1.0 - p) / 2.0).sqrt(), 0.0);
    amps[5] = Complex64::new(((1.0 - p) / 2.0).sqrt(), 0.0);
    let global = BipartitePureState::new(2, 4, amps)?;

    let off = (p * (1.0 - eps) * (1.0 - p) / 2.0).sqrt();
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, Complex64::new(p * eps + (1.0 - p) / 2.0, 0.0));
    m.set(1, 1, Complex64::new(p * (1.0 - eps) + (1.0 - p) / 2.0, 0.0));
    m.set(0, 1, Complex64::new(off, 0.0));
    m.set(1, 0, Complex64::new(off, 0.0));
    let rho_b = DensityMatrix::new(m)?;

    // Tr_A then Tr_C of the explicit ket.
    let bc = partial_trace(&global.projector(), 2, 4, Subsystem::B)?;
    let traced = partial_trace(&bc, 2, 2, Subsystem::A)?;
    let residual = rho_b.matrix().max_abs_diff(traced.matrix());
    if residual > 1e-12 {
        return Err(Error::Inconsistent {
            what: "three-qubit reduced state (closed form vs partial trace)",
            residual,
        });
    }

    Ok((global, rho_b))
}

/// Two-qubit family x|01> + sqrt(1-x^2)|10>; both reduced states are
/// diagonal with spectrum {x^2, 1-x^2}.
pub fn x_family_state(x: f64) -> Result<BipartitePureState> {
    check_unit_interval("x", x)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    amps[1] = Complex64::new(x, 0.0);
    amps[2] = Complex64::new((1.0 - x * x).sqrt(), 0.0);
    BipartitePureState::new(2, 2, amps)
}

/// Qubit pair contrasting quantum and classical mixing of the same weights:
/// rho = p1|z+><z+| + p2|x+><x+| and sigma = p1|z+><z+| + p2|z-><z-|,
/// with p2 = 1 - p1.
pub fn fig1_states(p1: f64) -> Result<(DensityMatrix, DensityMatrix)> {
    check_unit_interval("p1", p1)?;
    let p2 = 1.0 - p1;
    let rho = DensityMatrix::new(ComplexMatrix::from_real_rows(&[
        vec![p1 + p2 / 2.0, p2 / 2.0],
        vec![p2 / 2.0, p2 / 2.0],
    ])?)?;
    let sigma = DensityMatrix::from_hermitian(HermitianMatrix::from_diag(&[p1, p2]))?;
    Ok((rho, sigma))
}

fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Ginibre-sampled density matrix: rho = G G^dagger / Tr(G G^dagger) with
/// G a d x rank matrix of independent complex Gaussians drawn from `rng`.
pub fn random_density_from(d: usize, rank: usize, rng: &mut impl Rng) -> Result<DensityMatrix> {
    if rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, dim: d });
    }
    let mut g = ComplexMatrix::zeros(d, rank);
    for j in 0..d {
        for k in 0..rank {
            g.set(j, k, complex_gaussian(rng));
        }
    }
    let gg = g.matmul(&g.adjoint());
    let trace = gg.trace().re;
    let m = gg.scale(Complex64::new(1.0 / trace, 0.0));
    // G G^dagger is Hermitian exactly up to the product rounding; hermitize.
    let herm = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0));
    DensityMatrix::new(herm)
}

/// Seeded variant of [`random_density_from`]; identical seeds give
/// bit-identical states.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_from(d, rank, &mut rng)
}

/// Random unit vector with complex Gaussian components.
pub fn random_ket(d: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.iter().map(|z| z / norm).collect();
        }
    }
}

/// Random bipartite pure state with Gaussian amplitudes.
pub fn random_bipartite_pure(
    dim_a: usize,
    dim_b: usize,
    rng: &mut impl Rng,
) -> Result<BipartitePureState> {
    BipartitePureState::new(dim_a, dim_b, random_ket(dim_a * dim_b, rng))
}

/// Haar-random unitary via modified Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        for q in &cols {
            let overlap: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= overlap * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // numerically dependent draw; redraw this column
        }
        for vi in &mut v {
            *vi /= norm;
        }
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(d, d);
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            u.set(r, c, z);
        }
    }
    u
}

// ---------------------------------------------------------------------------
// State file format
// ---------------------------------------------------------------------------

/// Wire form of a density matrix:
/// `{"dim": d, "matrix": [[[re, im], ...], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
struct DensityMatrixFile {
    dim: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

/// Wire form of a bipartite ket:
/// `{"dims": [dA, dB], "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
struct BipartiteKetFile {
    dims: [usize; 2],
    amplitudes: Vec<[f64; 2]>,
}

/// A parsed state file: either a density matrix or a bipartite pure state.
#[derive(Debug, Clone)]
pub enum StateFile {
    Density(DensityMatrix),
    Ket(BipartitePureState),
}

/// Parse and validate a JSON state document.
///
/// The document kind is dispatched on its fields: `dim`/`matrix` for a
/// density matrix, `dims`/`amplitudes` for a bipartite ket. Errors name
/// the offending field or the violated invariant with its residual.
pub fn parse_state_json(text: &str) -> Result<StateFile> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("top-level value must be a JSON object".into()))?;

    if obj.contains_key("matrix") || obj.contains_key("dim") {
        let file: DensityMatrixFile = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("density matrix document: {e}")))?;
        if file.matrix.len() != file.dim {
            return Err(Error::Parse(format!(
                "field 'matrix' has {} rows, expected dim = {}",
                file.matrix.len(),
                file.dim
            )));
        }
        let mut m = ComplexMatrix::zeros(file.dim, file.dim);
        for (j, row) in file.matrix.iter().enumerate() {
            if row.len() != file.dim {
                return Err(Error::Parse(format!(
                    "field 'matrix' row {j} has {} entries, expected dim = {}",
                    row.len(),
                    file.dim
                )));
            }
            for (k, &[re, im]) in row.iter().enumerate() {
                m.set(j, k, Complex64::new(re, im));
            }
        }
        Ok(StateFile::Density(DensityMatrix::new(m)?))
    } else if obj.contains_key("amplitudes") || obj.contains_key("dims") {
        let file: BipartiteKetFile = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("bipartite ket document: {e}")))?;
        let amps: Vec<Complex64> = file
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Ok(StateFile::Ket(BipartitePureState::new(
            file.dims[0],
            file.dims[1],
            amps,
        )?))
    } else {
        Err(Error::Parse(
            "state document must contain 'matrix'/'dim' (density matrix) \
             or 'amplitudes'/'dims' (bipartite ket)"
                .into(),
        ))
    }
}

/// Serialize a density matrix to the state-file JSON format.
pub fn density_to_json(rho: &DensityMatrix) -> String {
    let d = rho.dim();
    let matrix: Vec<Vec<[f64; 2]>> = (0..d)
        .map(|j| {
            (0..d)
                .map(|k| {
                    let z = rho.get(j, k);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect();
    serde_json::to_string_pretty(&DensityMatrixFile { dim: d, matrix }).expect("serializable")
}

/// Serialize a bipartite ket to the state-file JSON format.
pub fn ket_to_json(psi: &BipartitePureState) -> String {
    let amplitudes: Vec<[f64; 2]> = psi.amplitudes().iter().map(|z| [z.re, z.im]).collect();
    serde_json::to_string_pretty(&BipartiteKetFile {
        dims: [psi.dim_a(), psi.dim_b()],
        amplitudes,
    })
    .expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn density_from_ket_basis_state() {
        let rho = density_from_ket(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(
            rho.max_abs_diff(
                &DensityMatrix::from_hermitian(HermitianMatrix::from_diag(&[1.0, 0.0])).unwrap()
            ) < 1e-15
        );
    }

    #[test]
    fn density_from_ket_plus_state() {
        let inv = 1.0 / 2.0_f64.sqrt();
        let rho = density_from_ket(&[c(inv, 0.0), c(inv, 0.0)]).unwrap();
        for j in 0..2 {
            for k in 0..2 {
                assert!((rho.get(j, k) - c(0.5, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn density_from_ket_rejects_unnormalized() {
        assert!(matches!(
            density_from_ket(&[c(1.0, 0.0), c(0.5, 0.0)]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn x_state_ket_projector_at_balance() {
        let psi = x_family_state(1.0 / 2.0_f64.sqrt()).unwrap();
        let rho = density_from_ket(psi.amplitudes()).unwrap();
        // Projector onto (|01> + |10>)/sqrt(2).
        for (j, k, expect) in [
            (1, 1, 0.5),
            (2, 2, 0.5),
            (1, 2, 0.5),
            (2, 1, 0.5),
            (0, 0, 0.0),
            (3, 3, 0.0),
        ] {
            assert!((rho.get(j, k) - c(expect, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn dephase_kills_offdiagonals_and_is_idempotent() {
        let rho = fig1_states(0.5).unwrap().0;
        let diag = dephase(&rho);
        assert!((diag.prob(0) - 0.75).abs() < 1e-15);
        assert!((diag.prob(1) - 0.25).abs() < 1e-15);
        assert!(diag.get(0, 1).norm() < 1e-15);
        assert!(dephase(&diag).max_abs_diff(&diag) < 1e-15);

        let plus = density_from_ket(&[c(1.0 / 2.0_f64.sqrt(), 0.0), c(1.0 / 2.0_f64.sqrt(), 0.0)])
            .unwrap();
        let half = dephase(&plus);
        assert!((half.prob(0) - 0.5).abs() < 1e-12);
        assert!(half.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn detector_orthogonal_gram_gives_incoherent_state() {
        let amps = vec![c(0.6, 0.0), c(0.0, 0.8)];
        let gram = HermitianMatrix::from_diag(&[1.0, 1.0]);
        let model = DetectorModel::new(amps, gram).unwrap();
        let rho = detector_reduced_state(&model).unwrap();
        assert!((rho.prob(0) - 0.36).abs() < 1e-12);
        assert!((rho.prob(1) - 0.64).abs() < 1e-12);
        assert!(rho.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn detector_uncoupled_gram_keeps_quanton_pure() {
        let inv = 1.0 / 2.0_f64.sqrt();
        let gram = HermitianMatrix::new(
            ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap(),
        )
        .unwrap();
        let model = DetectorModel::new(vec![c(inv, 0.0), c(inv, 0.0)], gram).unwrap();
        let rho = detector_reduced_state(&model).unwrap();
        for j in 0..2 {
            for k in 0..2 {
                assert!((rho.get(j, k) - c(0.5, 0.0)).norm() < 1e-12);
            }
        }
        assert!((rho.purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn detector_half_overlap_reduced_state() {
        let inv = 1.0 / 2.0_f64.sqrt();
        let model = DetectorModel::two_path([c(inv, 0.0), c(inv, 0.0)], 0.5).unwrap();
        let rho = detector_reduced_state(&model).unwrap();
        assert!((rho.get(0, 0) - c(0.5, 0.0)).norm() < 1e-12);
        assert!((rho.get(0, 1) - c(0.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn detector_rejects_non_psd_gram() {
        let inv = 1.0 / 2.0_f64.sqrt();
        let gram = HermitianMatrix::new(
            ComplexMatrix::from_real_rows(&[vec![1.0, 1.5], vec![1.5, 1.0]]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            DetectorModel::new(vec![c(inv, 0.0), c(inv, 0.0)], gram),
            Err(Error::UnphysicalDetector { .. })
        ));
    }

    #[test]
    fn three_qubit_closed_form_extremes() {
        let (_, rho_b) = three_qubit_phi(1.0, 1.0).unwrap();
        assert!((rho_b.prob(0) - 1.0).abs() < 1e-12);
        assert!(rho_b.get(0, 1).norm() < 1e-15);

        let (_, rho_b) = three_qubit_phi(1.0, 0.5).unwrap();
        assert!((rho_b.prob(0) - 0.5).abs() < 1e-12);
        assert!((rho_b.prob(1) - 0.5).abs() < 1e-12);
        assert!(rho_b.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn three_qubit_matches_partial_trace_on_grid() {
        for pi in 0..=20 {
            for ei in 0..=20 {
                let p = pi as f64 / 20.0;
                let eps = ei as f64 / 20.0;
                let (global, rho_b) = three_qubit_phi(p, eps).unwrap();
                // Tr_A then Tr_C of the 8-dimensional projector.
                let bc = partial_trace(&global.projector(), 2, 4, Subsystem::B).unwrap();
                let from_trace = partial_trace(&bc, 2, 2, Subsystem::A).unwrap();
                assert!(rho_b.matrix().max_abs_diff(from_trace.matrix()) < 1e-12);
                // Reduced state of qubit A is incoherent everywhere.
                let rho_a = global.reduced_a().unwrap();
                assert!(rho_a.get(0, 1).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn x_family_examples() {
        let product = x_family_state(0.0).unwrap();
        assert!((product.amplitude(1, 0) - c(1.0, 0.0)).norm() < 1e-15);

        let balanced = x_family_state(1.0 / 2.0_f64.sqrt()).unwrap();
        let ra = balanced.reduced_a().unwrap();
        assert!((ra.prob(0) - 0.5).abs() < 1e-12);
        assert!(ra.get(0, 1).norm() < 1e-12);

        let quarter = x_family_state(0.5).unwrap();
        let ra = quarter.reduced_a().unwrap();
        assert!((ra.prob(0) - 0.25).abs() < 1e-12);
        assert!((ra.prob(1) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn fig1_state_examples() {
        let (rho, sigma) = fig1_states(1.0).unwrap();
        assert!(rho.max_abs_diff(&sigma) < 1e-15);
        assert!((rho.prob(0) - 1.0).abs() < 1e-15);

        let (rho, sigma) = fig1_states(0.0).unwrap();
        assert!((rho.get(0, 1) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((sigma.prob(1) - 1.0).abs() < 1e-15);

        let (rho, _) = fig1_states(0.5).unwrap();
        assert!((rho.get(0, 0) - c(0.75, 0.0)).norm() < 1e-15);
        assert!((rho.get(0, 1) - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn schmidt_examples() {
        let mut amps = vec![c(0.0, 0.0); 4];
        amps[0] = c(1.0, 0.0); // |00> product state
        let product = BipartitePureState::new(2, 2, amps).unwrap();
        let lambdas = schmidt_coefficients(&product).unwrap();
        assert!((lambdas[0] - 1.0).abs() < 1e-12 && lambdas[1].abs() < 1e-12);

        let balanced = x_family_state(1.0 / 2.0_f64.sqrt()).unwrap();
        let lambdas = schmidt_coefficients(&balanced).unwrap();
        assert!((lambdas[0] - 0.5).abs() < 1e-12 && (lambdas[1] - 0.5).abs() < 1e-12);

        let x = 0.37;
        let lambdas = schmidt_coefficients(&x_family_state(x).unwrap()).unwrap();
        let hi = (1.0 - x * x).max(x * x);
        assert!((lambdas[0] - hi).abs() < 1e-12);
        assert!((lambdas.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn random_density_rank_and_determinism() {
        let pure = random_density(3, 1, 11).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);

        let a = random_density(2, 2, 42).unwrap();
        let b = random_density(2, 2, 42).unwrap();
        assert_eq!(a.matrix().entries(), b.matrix().entries());

        assert!(matches!(
            random_density(2, 3, 1),
            Err(Error::InvalidRank { .. })
        ));
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 2..=4 {
            let u = random_unitary(d, &mut rng);
            let gram = u.adjoint().matmul(&u);
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
        }
    }

    #[test]
    fn state_file_roundtrip_density() {
        let rho = random_density(3, 2, 9).unwrap();
        let json = density_to_json(&rho);
        match parse_state_json(&json).unwrap() {
            StateFile::Density(back) => assert!(back.max_abs_diff(&rho) < 1e-15),
            _ => panic!("expected density"),
        }
    }

    #[test]
    fn state_file_roundtrip_ket() {
        let psi = x_family_state(0.3).unwrap();
        let json = ket_to_json(&psi);
        match parse_state_json(&json).unwrap() {
            StateFile::Ket(back) => {
                assert_eq!(back.dim_a(), 2);
                for (a, b) in back.amplitudes().iter().zip(psi.amplitudes()) {
                    assert!((a - b).norm() < 1e-15);
                }
            }
            _ => panic!("expected ket"),
        }
    }

    #[test]
    fn state_file_errors_name_field_and_invariant() {
        let err = parse_state_json("{\"dim\": 2}").unwrap_err();
        assert!(err.to_string().contains("matrix"), "{err}");

        let err =
            parse_state_json("{\"dim\": 2, \"matrix\": [[[1.0, 0.0]], [[0.0,0.0]]]}").unwrap_err();
        assert!(err.to_string().contains("row 0"), "{err}");

        // Trace violation carries the residual.
        let err = parse_state_json(
            "{\"dim\": 2, \"matrix\": [[[0.9,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0]]]}",
        )
        .unwrap_err();
        assert!(err.to_string().contains("trace"), "{err}");

        let err = parse_state_json("{\"what\": 1}").unwrap_err();
        assert!(err.to_string().contains("must contain"), "{err}");
    }
}
