//! Quantifiers of quantum/classical uncertainty, coherence, predictability
//! and their complete complementarity relations for finite-dimensional
//! quantum states.
//!
//! The crate is organized around a small dense linear-algebra layer
//! ([`linalg`]), validated state constructions ([`states`]), the variance
//! split into quantum and classical parts ([`uncertainty`]), coherence and
//! predictability measures with their exact trade-off identities
//! ([`complementarity`]), the generalized Gell-Mann operator basis
//! ([`gellmann`]), and a sampling harness that stress-tests the axioms and
//! identities ([`props`]).
//!
//! All basis-dependent measures refer to the fixed computational (path)
//! basis; express a basis change by conjugating the state first.

pub mod complementarity;
pub mod error;
pub mod gellmann;
pub mod linalg;
pub mod props;
pub mod states;
pub mod uncertainty;

pub use complementarity::QuantifierReport;
pub use error::{Error, Result};
pub use gellmann::GmmBasis;
pub use linalg::{ComplexMatrix, EigenSystem, HermitianMatrix, Subsystem};
pub use props::PropertyVerdict;
pub use states::{BipartitePureState, DensityMatrix, DetectorModel, StateFile};
pub use uncertainty::UncertaintySplit;
