//! Linear complexity of Sidel'nikov-Lempel-Cohn-Eastman (SLCE) sequences over
//! GF(2), together with the character-sum criteria that predict which
//! cyclotomic factors divide `gcd(x^(q-1)+1, S_q(x))`.
//!
//! Layering, bottom to top: [`gf2poly`] and [`field`] provide exact
//! arithmetic, [`charsums`] the quadratic character and Jacobsthal sums,
//! [`sequence`] the sequences and their linear complexity, [`theorems`] the
//! criteria, and [`report`] the per-q analysis records used by the CLI.

pub mod arith;
pub mod charsums;
pub mod error;
pub mod field;
pub mod gf2poly;
pub mod report;
pub mod sequence;
pub mod theorems;

pub use charsums::{CyclotomicContext, JacobsthalTable, QuadraticCharacter, UnitGroup};
pub use error::{Error, Result};
pub use field::{FieldElement, PrimePowerField, DEFAULT_MAX_Q};
pub use gf2poly::{FactorizationResult, Gf2Poly};
pub use report::AnalysisReport;
pub use sequence::{LinearComplexityResult, SlceSequence};
pub use theorems::{ApplicabilityProfile, ProperRepresentation, TheoremVerdict, TriState};
