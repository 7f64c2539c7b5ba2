//! Bounded-coefficient approximation by generalized Dirichlet polynomials:
//! frequency systems, convergence criteria, Gram systems, the
//! disc-constrained minimization, smoothing windows and zeta scans.

pub mod arith;
pub mod criterion;
pub mod error;
pub mod frequency;
pub mod gram;
mod interior;
pub mod quad;
pub mod solver;
pub mod table;
pub mod window;
pub mod zeta;

pub use criterion::{CriterionMethod, CriterionVerdict, OmegaCurve, Verdict};
pub use error::{Error, Result};
pub use frequency::{
    BoundProfile, CoeffSystem, FrequencyKind, FrequencySystem, Normalization, RegularityProfile,
};
pub use gram::{GramSystem, GramView, Target};
pub use num_complex::Complex64;
pub use solver::{ConstraintMode, SolveOptions, SolveResult, SweepCurve, SweepPoint};
pub use window::{DecayTarget, Window};
pub use zeta::{ScanRecord, SigmaSource, ZetaEval};
