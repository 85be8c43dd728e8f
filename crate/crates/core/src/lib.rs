//! Finite algebras of partial functions with composition, intersection and
//! antidomain, and decision procedures for their (complete) representability.

pub mod algebra;
pub mod catalog;
pub mod corpus;
pub mod ef_game;
pub mod format;
pub mod laws;
pub mod ninfty;
pub mod pfun;
pub mod representation;

pub use algebra::{AlgebraError, Elem, FiniteAlgebra, Law, LawFailure, ValidationReport};
pub use ef_game::{CellB, CellBPrime, DuplicatorStrategy, GameError, GameState, Size, Winner};
pub use format::{FormatError, NamedFunctions};
pub use laws::{DistLaw, DistViolation};
pub use pfun::{ConcreteAlgebra, Op, PartialFunction, PfunError, Representation, Signature};
pub use representation::{
    build_theta, decide_complete_representability, Refutation, ThetaOutcome, Verdict,
};
