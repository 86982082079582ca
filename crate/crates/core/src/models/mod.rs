//! Concrete base monads and their sigma-operations.

pub mod monads;
pub mod ops;

pub use monads::{base, Params, BASE_MONADS};
pub use ops::{
    algebraicity_check, as_algebraic, op, sigma_operation, AlgebraicOp, AlgebraicityEvidence, SigmaOp, Verdict,
    OPS,
};
