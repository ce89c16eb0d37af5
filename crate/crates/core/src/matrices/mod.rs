//! Matrix representations in the exact and floating backends.

mod complex;
mod dephase;
mod exact;
mod monomial;
mod overlap;
pub(crate) mod phase;
mod set;

pub use complex::ComplexMatrix;
pub use dephase::dephase;
pub use exact::{scaled_eq, ExactMatrix, ExactVector};
pub use monomial::{monomial_apply, MonomialMatrix, MonomialPhases, Side};
pub use overlap::{
    audit_pair, audit_set, hadamard_check, is_hadamard, is_orthonormal, mu_overlap, Backend, HadamardViolation,
    Overlap, OverlapKind, PairAudit, SetAudit,
};
pub use phase::PhaseMatrix;
pub use set::{Basis, MuBasisSet, Vector};
