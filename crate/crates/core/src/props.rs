//! Sampling harness for the axioms and exact identities: convexity and
//! concavity of the quantifiers under classical mixing, the entanglement
//! monotone conditions on the total classical uncertainty, the
//! detector-coupling transfer of quantum into classical uncertainty, and
//! per-state identity sweeps over random density matrices.
//!
//! Every check is a refutation test, not a proof: it samples states from a
//! seeded generator and records the worst violation seen. Each trial
//! derives its own generator stream from (seed, trial index), so results
//! do not depend on evaluation order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complementarity::{
    ccr_report, coherence_hs, coherence_l1, coherence_re, linear_entropy, predictability_l,
    predictability_l1, predictability_vn, vn_entropy, w_l1,
};
use crate::error::{Error, Result};
use crate::gellmann::{bloch_decompose, gmm_basis, gmm_expectation_sums, gmm_variance_sums};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::states::{
    detector_reduced_state, random_bipartite_pure, random_density_from, random_unitary,
    BipartitePureState, DensityMatrix, DetectorModel,
};
use crate::uncertainty::{
    classical_uncertainty, path_classical_uncertainty, path_quantum_uncertainty, skew_information,
    total_classical_uncertainty, total_quantum_uncertainty, variance, UncertaintySplit,
};

/// Slack for exact-arithmetic claims (convexity, concavity, constancy).
pub const EXACT_SLACK: f64 = 1e-10;

/// Slack for identity residuals accumulated through eigendecompositions.
pub const IDENTITY_SLACK: f64 = 1e-9;

/// Slack for finite-difference derivative claims.
pub const FD_SLACK: f64 = 1e-8;

/// Finite-difference step on Schmidt weights, renormalized onto the simplex.
const FD_STEP: f64 = 1e-6;

/// The directional derivative check needs both leading Schmidt weights
/// bounded away from zero; below this floor the sqrt derivatives drown the
/// finite difference in noise and the trial skips that sub-check.
const SCHMIDT_FLOOR: f64 = 1e-3;

/// Outcome of one sampled property check.
///
/// `pass` holds exactly when `worst_violation <= slack`. Reproducible:
/// rerunning with the same seed gives a bit-identical worst violation.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyVerdict {
    pub property: String,
    pub trials: u64,
    pub worst_violation: f64,
    pub slack: f64,
    pub pass: bool,
    pub seed: u64,
}

impl PropertyVerdict {
    fn new(property: String, trials: u64, worst_violation: f64, slack: f64, seed: u64) -> Self {
        // Normalize -0.0 so tables and JSON read cleanly.
        let worst_violation = worst_violation + 0.0;
        Self {
            property,
            trials,
            worst_violation,
            slack,
            pass: worst_violation <= slack,
            seed,
        }
    }
}

/// Deterministic per-trial generator: one stream per (seed, index).
fn sub_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_simplex_weights(k: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

fn random_observable(d: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        m.set(j, j, Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, 0.0));
        for k in (j + 1)..d {
            let z = Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            m.set(j, k, z);
            m.set(k, j, z.conj());
        }
    }
    HermitianMatrix::new(m).expect("constructed Hermitian")
}

fn mix_states(states: &[DensityMatrix], weights: &[f64]) -> Result<DensityMatrix> {
    let d = states[0].dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for (rho, &w) in states.iter().zip(weights) {
        m = m.add(&rho.matrix().scale(Complex64::new(w, 0.0)));
    }
    DensityMatrix::new(m)
}

/// Quantifiers the theory requires to be convex under classical mixing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexMeasure {
    PathSkew,
    TotalQuantum,
    CoherenceL1,
    CoherenceHs,
    CoherenceRe,
    PredictabilityL,
    PredictabilityVn,
    PredictabilityL1,
}

impl ConvexMeasure {
    pub const ALL: [ConvexMeasure; 8] = [
        ConvexMeasure::PathSkew,
        ConvexMeasure::TotalQuantum,
        ConvexMeasure::CoherenceL1,
        ConvexMeasure::CoherenceHs,
        ConvexMeasure::CoherenceRe,
        ConvexMeasure::PredictabilityL,
        ConvexMeasure::PredictabilityVn,
        ConvexMeasure::PredictabilityL1,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ConvexMeasure::PathSkew => "skew_information-per-path",
            ConvexMeasure::TotalQuantum => "U_q",
            ConvexMeasure::CoherenceL1 => "C_l1",
            ConvexMeasure::CoherenceHs => "C_hs",
            ConvexMeasure::CoherenceRe => "C_re",
            ConvexMeasure::PredictabilityL => "P_l",
            ConvexMeasure::PredictabilityVn => "P_vn",
            ConvexMeasure::PredictabilityL1 => "P_l1",
        }
    }
}

impl fmt::Display for ConvexMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ConvexMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConvexMeasure::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| Error::UnknownQuantifier(s.to_string()))
    }
}

/// Quantifiers the theory requires to be concave under classical mixing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcaveMeasure {
    PathClassical,
    TotalClassical,
    WL1,
    LinearEntropy,
    VnEntropy,
}

impl ConcaveMeasure {
    pub const ALL: [ConcaveMeasure; 5] = [
        ConcaveMeasure::PathClassical,
        ConcaveMeasure::TotalClassical,
        ConcaveMeasure::WL1,
        ConcaveMeasure::LinearEntropy,
        ConcaveMeasure::VnEntropy,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ConcaveMeasure::PathClassical => "classical_uncertainty-per-path",
            ConcaveMeasure::TotalClassical => "U_c",
            ConcaveMeasure::WL1 => "W_l1",
            ConcaveMeasure::LinearEntropy => "S_l",
            ConcaveMeasure::VnEntropy => "S_vn",
        }
    }
}

impl fmt::Display for ConcaveMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ConcaveMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConcaveMeasure::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| Error::UnknownQuantifier(s.to_string()))
    }
}

type MeasureFn = Box<dyn Fn(&DensityMatrix) -> Result<f64>>;

fn convex_components(measure: ConvexMeasure, d: usize) -> Vec<MeasureFn> {
    match measure {
        ConvexMeasure::PathSkew => (0..d)
            .map(|j| -> MeasureFn { Box::new(move |rho| path_quantum_uncertainty(rho, j)) })
            .collect(),
        ConvexMeasure::TotalQuantum => vec![Box::new(total_quantum_uncertainty)],
        ConvexMeasure::CoherenceL1 => vec![Box::new(coherence_l1)],
        ConvexMeasure::CoherenceHs => vec![Box::new(coherence_hs)],
        ConvexMeasure::CoherenceRe => vec![Box::new(coherence_re)],
        ConvexMeasure::PredictabilityL => vec![Box::new(predictability_l)],
        ConvexMeasure::PredictabilityVn => vec![Box::new(predictability_vn)],
        ConvexMeasure::PredictabilityL1 => vec![Box::new(predictability_l1)],
    }
}

fn concave_components(measure: ConcaveMeasure, d: usize) -> Vec<MeasureFn> {
    match measure {
        ConcaveMeasure::PathClassical => (0..d)
            .map(|j| -> MeasureFn { Box::new(move |rho| path_classical_uncertainty(rho, j)) })
            .collect(),
        ConcaveMeasure::TotalClassical => vec![Box::new(total_classical_uncertainty)],
        ConcaveMeasure::WL1 => vec![Box::new(w_l1)],
        ConcaveMeasure::LinearEntropy => vec![Box::new(linear_entropy)],
        ConcaveMeasure::VnEntropy => vec![Box::new(vn_entropy)],
    }
}

#[derive(Debug, Clone, Copy)]
enum MixtureDirection {
    /// measure(mix) <= sum_i w_i measure(rho_i)
    Convex,
    /// measure(mix) >= sum_i w_i measure(rho_i)
    Concave,
}

/// Shared mixture harness; also the test hook for deliberately corrupted
/// measures (feeding a concave quantity through the convex direction must
/// surface a failing verdict).
fn mixture_check(
    property: String,
    components: &[MeasureFn],
    direction: MixtureDirection,
    d: usize,
    trials: usize,
    seed: u64,
    slack: f64,
) -> Result<PropertyVerdict> {
    let mut worst = f64::NEG_INFINITY;
    for trial in 0..trials {
        let mut rng = sub_rng(seed, trial as u64);
        let k = rng.gen_range(2..=4usize);
        let mut states = Vec::with_capacity(k);
        for _ in 0..k {
            let rank = rng.gen_range(1..=d);
            states.push(random_density_from(d, rank, &mut rng)?);
        }
        let weights = random_simplex_weights(k, &mut rng);
        let mix = mix_states(&states, &weights)?;
        for f in components {
            let mixed = f(&mix)?;
            let averaged: f64 = states
                .iter()
                .zip(&weights)
                .map(|(rho, &w)| f(rho).map(|v| w * v))
                .sum::<Result<f64>>()?;
            let violation = match direction {
                MixtureDirection::Convex => mixed - averaged,
                MixtureDirection::Concave => averaged - mixed,
            };
            worst = worst.max(violation);
        }
    }
    if worst == f64::NEG_INFINITY {
        worst = 0.0;
    }
    Ok(PropertyVerdict::new(
        property,
        trials as u64,
        worst,
        slack,
        seed,
    ))
}

/// Convexity of `measure` under random classical mixtures of 2 to 4
/// states of dimension `d`.
pub fn check_convexity(
    measure: ConvexMeasure,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<PropertyVerdict> {
    mixture_check(
        format!("convexity[{measure}] d={d}"),
        &convex_components(measure, d),
        MixtureDirection::Convex,
        d,
        trials,
        seed,
        EXACT_SLACK,
    )
}

/// Concavity counterpart of [`check_convexity`].
pub fn check_concavity(
    measure: ConcaveMeasure,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<PropertyVerdict> {
    mixture_check(
        format!("concavity[{measure}] d={d}"),
        &concave_components(measure, d),
        MixtureDirection::Concave,
        d,
        trials,
        seed,
        EXACT_SLACK,
    )
}

/// Extremal axioms: pure states carry no classical uncertainty parts, and
/// path-basis-commuting (diagonal) states carry no quantum parts.
pub fn check_extremal_cases(d: usize, trials: usize, seed: u64) -> Result<Vec<PropertyVerdict>> {
    let mut worst_pure = f64::NEG_INFINITY;
    let mut worst_commuting = f64::NEG_INFINITY;
    for trial in 0..trials {
        let mut rng = sub_rng(seed, trial as u64);

        // Pure state: every classical part vanishes.
        let pure = random_density_from(d, 1, &mut rng)?;
        let a = random_observable(d, &mut rng);
        let mut v = total_classical_uncertainty(&pure)?;
        v = v.max(classical_uncertainty(&pure, &a)?);
        for j in 0..d {
            v = v.max(path_classical_uncertainty(&pure, j)?);
        }
        v = v.max(w_l1(&pure)?);
        v = v.max(linear_entropy(&pure)?);
        v = v.max(vn_entropy(&pure)?);
        worst_pure = worst_pure.max(v);

        // Diagonal state commutes with every path projector and any
        // diagonal observable: every quantum part vanishes.
        let diag = crate::states::dephase(&random_density_from(d, rng.gen_range(1..=d), &mut rng)?);
        let diag_obs = HermitianMatrix::from_diag(
            &(0..d)
                .map(|_| rng.gen::<f64>() * 2.0 - 1.0)
                .collect::<Vec<_>>(),
        );
        let mut v = total_quantum_uncertainty(&diag)?;
        v = v.max(skew_information(&diag, &diag_obs)?);
        for j in 0..d {
            v = v.max(path_quantum_uncertainty(&diag, j)?);
        }
        v = v.max(coherence_l1(&diag)?);
        v = v.max(coherence_hs(&diag)?);
        v = v.max(crate::complementarity::coherence_wy(&diag)?);
        v = v.max(coherence_re(&diag)?);
        worst_commuting = worst_commuting.max(v);
    }
    Ok(vec![
        PropertyVerdict::new(
            format!("extremal[pure => classical parts vanish] d={d}"),
            trials as u64,
            worst_pure,
            IDENTITY_SLACK,
            seed,
        ),
        PropertyVerdict::new(
            format!("extremal[commuting => quantum parts vanish] d={d}"),
            trials as u64,
            worst_commuting,
            IDENTITY_SLACK,
            seed,
        ),
    ])
}

/// rho = V diag(values) V^dagger for an explicit spectrum over given
/// (orthonormal) columns.
fn state_from_spectrum(values: &[f64], vectors: &ComplexMatrix) -> Result<DensityMatrix> {
    let d = values.len();
    let mut scaled = vectors.clone();
    for (k, &value) in values.iter().enumerate() {
        let f = Complex64::new(value, 0.0);
        for r in 0..d {
            scaled.set(r, k, vectors.get(r, k) * f);
        }
    }
    let raw = scaled.matmul(&vectors.adjoint());
    let herm = raw.add(&raw.adjoint()).scale(Complex64::new(0.5, 0.0));
    DensityMatrix::new(herm)
}

fn random_product_state(
    dim_a: usize,
    dim_b: usize,
    rng: &mut impl Rng,
) -> Result<BipartitePureState> {
    let phi = crate::states::random_ket(dim_a, rng);
    let chi = crate::states::random_ket(dim_b, rng);
    let mut amps = Vec::with_capacity(dim_a * dim_b);
    for a in &phi {
        for b in &chi {
            amps.push(a * b);
        }
    }
    BipartitePureState::new(dim_a, dim_b, amps)
}

/// Entanglement-monotone conditions on U_c over random bipartite pure
/// states with factors of dimension 2 to 4 (every tenth trial is an exact
/// product state to exercise the separable branch).
///
/// One verdict per sub-check: nonnegativity, U_c = 0 iff the reduced state
/// is pure, invariance under a local unitary with the matching path-basis
/// rotation, and the Schmidt directional inequality by central finite
/// differences.
pub fn check_monotone_uc(trials: usize, seed: u64) -> Result<Vec<PropertyVerdict>> {
    let mut worst_nonneg = f64::NEG_INFINITY;
    let mut worst_zero_iff = f64::NEG_INFINITY;
    let mut worst_unitary = f64::NEG_INFINITY;
    let mut worst_directional = f64::NEG_INFINITY;

    for trial in 0..trials {
        let mut rng = sub_rng(seed, trial as u64);
        let dim_a = rng.gen_range(2..=4usize);
        let dim_b = rng.gen_range(2..=4usize);
        let psi = if trial % 10 == 0 {
            random_product_state(dim_a, dim_b, &mut rng)?
        } else {
            random_bipartite_pure(dim_a, dim_b, &mut rng)?
        };
        let rho_a = psi.reduced_a()?;
        let d = rho_a.dim();
        let u_c = total_classical_uncertainty(&rho_a)?;

        // (a) nonnegativity
        worst_nonneg = worst_nonneg.max(-u_c);

        // (b) U_c = 0 iff rho_A is pure, at 1e-9 / 1e-8 resolution.
        let purity = rho_a.purity();
        let separable_flag = u_c < 1e-9;
        let pure_flag = purity > 1.0 - 1e-8;
        let violation = match (separable_flag, pure_flag) {
            (true, false) => (1.0 - 1e-8) - purity,
            (false, true) => u_c - 1e-9,
            _ => 0.0,
        };
        worst_zero_iff = worst_zero_iff.max(violation);

        // (c) invariance under U rho U^dagger with the rotated path basis
        // {U |j><j| U^dagger}, evaluated through the generic machinery.
        let u = random_unitary(d, &mut rng);
        let rotated = rho_a.conjugate_by(&u)?;
        let mut rotated_sum = 0.0;
        for j in 0..d {
            let col: Vec<Complex64> = (0..d).map(|r| u.get(r, j)).collect();
            let projector = HermitianMatrix::new(ComplexMatrix::outer(&col))?;
            rotated_sum += classical_uncertainty(&rotated, &projector)?;
        }
        worst_unitary = worst_unitary.max((rotated_sum - u_c).abs());

        // (d) (l1 - l2)(dU_c/dl1 - dU_c/dl2) <= 0 by central differences
        // along the simplex, for the two largest Schmidt weights.
        let evals = rho_a.eigenvalues();
        let vectors = rho_a.eigen().eigenvectors().clone();
        let top = evals[d - 1];
        let second = evals[d - 2];
        if second >= SCHMIDT_FLOOR {
            let directional = |index: usize| -> Result<f64> {
                let shifted = |h: f64| -> Result<f64> {
                    let mut vals: Vec<f64> = evals.to_vec();
                    vals[index] += h;
                    let total: f64 = vals.iter().sum();
                    let vals: Vec<f64> = vals.iter().map(|v| (v / total).max(0.0)).collect();
                    total_classical_uncertainty(&state_from_spectrum(&vals, &vectors)?)
                };
                Ok((shifted(FD_STEP)? - shifted(-FD_STEP)?) / (2.0 * FD_STEP))
            };
            let g_top = directional(d - 1)?;
            let g_second = directional(d - 2)?;
            worst_directional = worst_directional.max((top - second) * (g_top - g_second));
        }
    }

    let finish = |w: f64| if w == f64::NEG_INFINITY { 0.0 } else { w };
    Ok(vec![
        PropertyVerdict::new(
            "monotone[U_c nonnegative]".into(),
            trials as u64,
            finish(worst_nonneg),
            1e-12,
            seed,
        ),
        PropertyVerdict::new(
            "monotone[U_c zero iff reduced state pure]".into(),
            trials as u64,
            finish(worst_zero_iff),
            0.0,
            seed,
        ),
        PropertyVerdict::new(
            "monotone[U_c local-unitary invariant]".into(),
            trials as u64,
            finish(worst_unitary),
            IDENTITY_SLACK,
            seed,
        ),
        PropertyVerdict::new(
            "monotone[U_c Schmidt directional inequality]".into(),
            trials as u64,
            finish(worst_directional),
            FD_SLACK,
            seed,
        ),
    ])
}

/// Transfer of quantum into classical uncertainty along a detector-overlap
/// grid gamma in [0, 1] for a two-path model.
///
/// Checks: U_q + U_c + P_l constant, P_l constant, U_q non-decreasing, and
/// the endpoint values U_q(0) = 0, U_q(1) = S_l(rho_diag).
pub fn check_detector_transfer(
    amplitudes: &[Complex64],
    steps: usize,
) -> Result<Vec<PropertyVerdict>> {
    if amplitudes.len() != 2 {
        return Err(Error::DimensionMismatch {
            left: amplitudes.len(),
            right: 2,
        });
    }
    if steps < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "steps",
            value: steps as f64,
            min: 2.0,
            max: f64::INFINITY,
        });
    }
    let amps = [amplitudes[0], amplitudes[1]];

    let mut sums = Vec::with_capacity(steps);
    let mut predictabilities = Vec::with_capacity(steps);
    let mut quantum = Vec::with_capacity(steps);
    let mut diag_linear_entropy = 0.0;
    for i in 0..steps {
        let gamma = i as f64 / (steps - 1) as f64;
        let rho = detector_reduced_state(&DetectorModel::two_path(amps, gamma)?)?;
        let u_q = total_quantum_uncertainty(&rho)?;
        let u_c = total_classical_uncertainty(&rho)?;
        let p_l = predictability_l(&rho)?;
        sums.push(u_q + u_c + p_l);
        predictabilities.push(p_l);
        quantum.push(u_q);
        if i == 0 {
            diag_linear_entropy = crate::complementarity::linear_entropy_diag(&rho)?;
        }
    }

    let spread = |xs: &[f64]| {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &x in xs {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        hi - lo
    };
    let monotone_violation = quantum
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::NEG_INFINITY, f64::max);
    let endpoint_violation = quantum[0]
        .abs()
        .max((quantum[steps - 1] - diag_linear_entropy).abs());

    Ok(vec![
        PropertyVerdict::new(
            "detector[U_q + U_c + P_l constant]".into(),
            steps as u64,
            spread(&sums),
            EXACT_SLACK,
            0,
        ),
        PropertyVerdict::new(
            "detector[P_l constant]".into(),
            steps as u64,
            spread(&predictabilities),
            EXACT_SLACK,
            0,
        ),
        PropertyVerdict::new(
            "detector[U_q non-decreasing]".into(),
            steps as u64,
            monotone_violation,
            1e-12,
            0,
        ),
        PropertyVerdict::new(
            "detector[endpoints 0 and S_l(rho_diag)]".into(),
            steps as u64,
            endpoint_violation,
            EXACT_SLACK,
            0,
        ),
    ])
}

struct WorstTracker {
    name: &'static str,
    slack: f64,
    worst: f64,
}

impl WorstTracker {
    fn new(name: &'static str, slack: f64) -> Self {
        Self {
            name,
            slack,
            worst: f64::NEG_INFINITY,
        }
    }

    fn update(&mut self, violation: f64) {
        if violation > self.worst {
            self.worst = violation;
        }
    }

    fn into_verdict(self, d: usize, trials: u64, seed: u64) -> PropertyVerdict {
        let worst = if self.worst == f64::NEG_INFINITY {
            0.0
        } else {
            self.worst
        };
        PropertyVerdict::new(
            format!("{} d={d}", self.name),
            trials,
            worst,
            self.slack,
            seed,
        )
    }
}

/// Identity sweep: `trials` Ginibre states at every rank 1..=d, checking
/// the complete complementarity residuals, the equality of the two routes
/// to the Wigner-Yanase quantity, the Gell-Mann expectation/variance
/// identities and bound, the variance decomposition, path closed forms,
/// permutation invariance, and the eigensolver/sqrt residuals.
pub fn check_identities(d: usize, trials: usize, seed: u64) -> Result<Vec<PropertyVerdict>> {
    let basis = gmm_basis(d)?;
    let d_f = d as f64;
    let s_l_max = (d_f - 1.0) / d_f;

    let mut ccr_linear = WorstTracker::new("identity[U_q + U_c + P_l = (d-1)/d]", IDENTITY_SLACK);
    let mut ccr_entropic = WorstTracker::new("identity[C_re + S_vn + P_vn = ln d]", IDENTITY_SLACK);
    let mut ccr_l1 = WorstTracker::new("identity[C_l1 + W_l1 + P_l1 = d-1]", IDENTITY_SLACK);
    let mut ccr_bz = WorstTracker::new("identity[I_BZ = P_l + C_hs]", IDENTITY_SLACK);
    let mut ccr_gmm =
        WorstTracker::new("identity[P_l + C_hs + C(rho,G) = (d-1)/d]", IDENTITY_SLACK);
    let mut uq_cwy = WorstTracker::new("identity[U_q = C_wy]", EXACT_SLACK);
    let mut unc_sum = WorstTracker::new("identity[U_q + U_c = S_l(rho_diag)]", IDENTITY_SLACK);
    let mut path_var_sum =
        WorstTracker::new("identity[sum_j V(rho,Pi_j) = U_q + U_c]", IDENTITY_SLACK);
    let mut unc_bound = WorstTracker::new("bound[U_q + U_c <= (d-1)/d]", EXACT_SLACK);
    let mut decomposition = WorstTracker::new("identity[V = Q + C]", IDENTITY_SLACK);
    let mut path_forms = WorstTracker::new("identity[path closed forms]", IDENTITY_SLACK);
    let mut gmm_exp_diag = WorstTracker::new("identity[sum <G^d>^2 = 2 P_l]", IDENTITY_SLACK);
    let mut gmm_exp_off = WorstTracker::new("identity[sum <G^off>^2 = 2 C_hs]", IDENTITY_SLACK);
    let mut gmm_var_diag =
        WorstTracker::new("identity[sum V(G^d) = 2(d-1)/d - 2 P_l]", IDENTITY_SLACK);
    let mut gmm_var_off =
        WorstTracker::new("identity[sum V(G^off) = 2(d-1) - 2 C_hs]", IDENTITY_SLACK);
    let mut gmm_bound = WorstTracker::new("bound[sum V(G) >= 2(d-1)]", EXACT_SLACK);
    let mut gmm_tradeoff =
        WorstTracker::new("identity[d=2: sum V = 3 - 2(C_hs + P_l)]", EXACT_SLACK);
    let mut bloch = WorstTracker::new("identity[Bloch reconstruction]", EXACT_SLACK);
    let mut bound_entropic = WorstTracker::new("bound[C_re + P_vn <= ln d]", EXACT_SLACK);
    let mut bound_l1 = WorstTracker::new("bound[C_l1 + P_l1 <= d-1]", EXACT_SLACK);
    let mut bound_hs = WorstTracker::new("bound[P_l + C_hs <= (d-1)/d]", EXACT_SLACK);
    let mut permutation = WorstTracker::new("invariance[path permutation]", 1e-12);
    let mut eig_recon = WorstTracker::new("linalg[eig reconstruction]", EXACT_SLACK);
    let mut eig_unitary = WorstTracker::new("linalg[eig unitarity]", EXACT_SLACK);
    let mut sqrt_recon = WorstTracker::new("linalg[sqrt(rho)^2 = rho]", IDENTITY_SLACK);

    for rank in 1..=d {
        for trial in 0..trials {
            let mut rng = sub_rng(seed, ((rank - 1) * trials + trial) as u64);
            let rho = random_density_from(d, rank, &mut rng)?;

            eig_recon.update(rho.eigen().reconstruction_residual(rho.hermitian()));
            eig_unitary.update(rho.eigen().unitarity_residual());
            let s = rho.sqrt();
            sqrt_recon.update(s.matrix().matmul(s.matrix()).max_abs_diff(rho.matrix()));

            let report = ccr_report(&rho, None)?;
            ccr_linear.update(report.r_linear.abs());
            ccr_entropic.update(report.r_entropic.abs());
            ccr_l1.update(report.r_l1.abs());
            ccr_bz.update(report.r_bz.abs());
            uq_cwy.update((report.u_q - report.c_wy).abs());
            unc_sum.update((report.u_q + report.u_c - report.s_l_diag).abs());
            unc_bound.update(report.u_q + report.u_c - s_l_max);
            bound_entropic.update(report.c_re + report.p_vn - d_f.ln());
            bound_l1.update(report.c_l1 + report.p_l1 - (d_f - 1.0));
            bound_hs.update(report.p_l + report.c_hs - s_l_max);

            let mut var_sum = 0.0;
            let mut worst_path = 0.0f64;
            for j in 0..d {
                let pi = HermitianMatrix::projector(d, j)?;
                var_sum += variance(&rho, &pi)?;
                let split = UncertaintySplit::evaluate(&rho, &pi)?;
                worst_path = worst_path
                    .max((path_quantum_uncertainty(&rho, j)? - split.quantum).abs())
                    .max((path_classical_uncertainty(&rho, j)? - split.classical).abs());
            }
            path_var_sum.update((var_sum - (report.u_q + report.u_c)).abs());
            path_forms.update(worst_path);

            let a = random_observable(d, &mut rng);
            let split = UncertaintySplit::evaluate(&rho, &a)?;
            decomposition.update((split.variance - split.quantum - split.classical).abs());

            let (diag_sq, off_sq) = gmm_expectation_sums(&rho, &basis)?;
            gmm_exp_diag.update((diag_sq - 2.0 * report.p_l).abs());
            gmm_exp_off.update((off_sq - 2.0 * report.c_hs).abs());
            let sums = gmm_variance_sums(&rho, &basis)?;
            gmm_var_diag.update(sums.diag_residual());
            gmm_var_off.update(sums.offdiag_residual());
            let total = sums.total_direct();
            gmm_bound.update(2.0 * (d_f - 1.0) - total);
            if d == 2 {
                gmm_tradeoff.update((total - (3.0 - 2.0 * (report.c_hs + report.p_l))).abs());
            }
            let gamma_classical = 0.5 * total - (d_f - 1.0);
            ccr_gmm.update((report.p_l + report.c_hs + gamma_classical - s_l_max).abs());

            let coeffs = bloch_decompose(&rho, &basis)?;
            bloch.update(coeffs.reconstruct(&basis).max_abs_diff(rho.matrix()));

            // Random relabeling of the path indices (Fisher-Yates).
            let mut perm: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                let j = rng.gen_range(0..=i);
                perm.swap(i, j);
            }
            let permuted_report = ccr_report(&rho.permuted(&perm)?, None)?;
            let mut worst_perm = 0.0f64;
            for (x, y) in [
                (report.s_l, permuted_report.s_l),
                (report.s_vn, permuted_report.s_vn),
                (report.p_l, permuted_report.p_l),
                (report.p_vn, permuted_report.p_vn),
                (report.p_l1, permuted_report.p_l1),
                (report.c_l1, permuted_report.c_l1),
                (report.c_hs, permuted_report.c_hs),
                (report.c_wy, permuted_report.c_wy),
                (report.c_re, permuted_report.c_re),
                (report.w_l1, permuted_report.w_l1),
                (report.i_bz, permuted_report.i_bz),
                (report.u_q, permuted_report.u_q),
                (report.u_c, permuted_report.u_c),
            ] {
                worst_perm = worst_perm.max((x - y).abs());
            }
            permutation.update(worst_perm);
        }
    }

    let total_trials = (d * trials) as u64;
    let mut verdicts = vec![
        ccr_linear.into_verdict(d, total_trials, seed),
        ccr_entropic.into_verdict(d, total_trials, seed),
        ccr_l1.into_verdict(d, total_trials, seed),
        ccr_bz.into_verdict(d, total_trials, seed),
        ccr_gmm.into_verdict(d, total_trials, seed),
        uq_cwy.into_verdict(d, total_trials, seed),
        unc_sum.into_verdict(d, total_trials, seed),
        path_var_sum.into_verdict(d, total_trials, seed),
        unc_bound.into_verdict(d, total_trials, seed),
        decomposition.into_verdict(d, total_trials, seed),
        path_forms.into_verdict(d, total_trials, seed),
        gmm_exp_diag.into_verdict(d, total_trials, seed),
        gmm_exp_off.into_verdict(d, total_trials, seed),
        gmm_var_diag.into_verdict(d, total_trials, seed),
        gmm_var_off.into_verdict(d, total_trials, seed),
        gmm_bound.into_verdict(d, total_trials, seed),
        bloch.into_verdict(d, total_trials, seed),
        bound_entropic.into_verdict(d, total_trials, seed),
        bound_l1.into_verdict(d, total_trials, seed),
        bound_hs.into_verdict(d, total_trials, seed),
        permutation.into_verdict(d, total_trials, seed),
        eig_recon.into_verdict(d, total_trials, seed),
        eig_unitary.into_verdict(d, total_trials, seed),
        sqrt_recon.into_verdict(d, total_trials, seed),
    ];
    if d == 2 {
        verdicts.push(gmm_tradeoff.into_verdict(d, total_trials, seed));
    }
    Ok(verdicts)
}

/// Everything `verify` runs: identity sweeps and axiom checks for each
/// dimension, plus the monotone and detector-transfer suites.
pub fn run_verification(dims: &[usize], trials: usize, seed: u64) -> Result<Vec<PropertyVerdict>> {
    let mut verdicts = Vec::new();
    for &d in dims {
        verdicts.extend(check_identities(d, trials, seed)?);
        for measure in ConvexMeasure::ALL {
            verdicts.push(check_convexity(measure, d, trials, seed)?);
        }
        for measure in ConcaveMeasure::ALL {
            verdicts.push(check_concavity(measure, d, trials, seed)?);
        }
        verdicts.extend(check_extremal_cases(d, trials, seed)?);
    }
    verdicts.extend(check_monotone_uc(trials, seed)?);
    let inv = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    verdicts.extend(check_detector_transfer(&[inv, inv], 101)?);
    Ok(verdicts)
}
