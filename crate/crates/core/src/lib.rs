//! Singular-value analysis of lossy evolution operators.
//!
//! A lossy operator `K` (with `K†K ≠ I`) can map non-orthogonal inputs to
//! orthogonal outputs, which is what unambiguous state discrimination and
//! local entanglement distillation both need. Its singular values fix how
//! close two discriminable inputs can be, and its singular vectors generate
//! the families of state sets it handles.

pub mod cli;
pub mod distill;
pub mod error;
pub mod families;
pub mod io;
pub mod numkernel;
pub mod simulate;
pub mod usd;

pub use error::{Error, Result};
pub use numkernel::{ComplexMatrix, SvdResult, C64};
pub use usd::{LossyOperator, StateSet};
