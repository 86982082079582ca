//! Executable law checking for monads, monad transformers and
//! sigma-operations over small finite carriers.
//!
//! Every equation is a property: quantified over the finite universe of
//! carriers, enumerated exhaustively where the budget allows and sampled
//! with a seeded generator otherwise.

pub mod catalog;
pub mod codensity;
pub mod config;
pub mod error;
pub mod examples;
pub mod hierarchy;
pub mod kernel;
pub mod lifting;
pub mod models;
pub mod transformers;
pub mod observe;
pub mod report;
pub mod runner;
pub mod ty;
pub mod value;

pub use config::{Budget, Config, Mutant};
pub use error::{ConstructionError, HarnessError, KernelError};
pub use kernel::{Functor, Monad, MonadDef, MonadRef, NatTrans};
pub use observe::Gen;
pub use catalog::{catalog, LawEntry};
pub use report::{Expect, LawCtx, LawReport, Mode, Outcome, Witness};
pub use runner::{replay, run_selected, select, Report, WitnessFile};
pub use ty::{FiniteType, Ty, Universe};
pub use value::{Func, Poly, Value};
