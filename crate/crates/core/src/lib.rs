//! Exact construction and verification of a family of nonadditive
//! distance-2 quantum codes `((4k+2l+3, M, 2))`.
//!
//! Codewords pair each classical string of weight `l, l+2, …, 2k+l` with its
//! complement (or, for qudits, with its whole `X^{⊗n}` orbit). The crate
//! builds these codes, checks the error-detection conditions exactly, and
//! evaluates the counting, projector and automorphism statements about them.

pub mod automorph;
pub mod bounds;
pub mod classical;
pub mod cli;
pub mod combinat;
pub mod cycint;
pub mod dense;
pub mod erasure;
pub mod error;
pub mod lift;
pub mod linalg;
pub mod projector;
pub mod verifier;

pub use classical::{BitString, ClassicalCode, CodeParams};
pub use cycint::CycInt;
pub use error::{Error, Result};
pub use lift::{QuantumCodeBasis, SparseKet, WeylOp};
