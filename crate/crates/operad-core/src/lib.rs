//! Arity-truncated operads over the integers: partial compositions, axiom
//! checking, built-in examples, coendomorphism operads, free operads on
//! generators, operadic ideals and quotients, generalized compositions, and
//! split diagonals.

mod builtins;
mod coend;
mod diagonal;
mod element;
mod free;
mod gamma;
mod ideal;
mod operad;

pub use builtins::{com, s0, tensor_operads};
pub use coend::{coend_operad, interval_coend, staircase_path, CoendOperad, IntervalCoend};
pub use diagonal::{diagonal_triangle_commutes, sigma_diagonal, DiagonalSource, SigmaDiagonal};
pub use element::OperadElement;
pub use free::{free_operad, FreeOperad, GeneratorSymbol, OperadTree};
pub use gamma::{generalized_composition, Slot};
pub use ideal::{ideal_and_quotient, IdealQuotient, OperadIdeal};
pub use operad::{
    check_operad_axioms, check_operad_morphism, AxiomReport, AxiomViolation, OperadMorphism,
    TruncatedOperad,
};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("composition needs arity {needed}, beyond the bound {max}")]
    TruncationOverflow { needed: usize, max: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("no component in arity {0}")]
    MissingComponent(usize),
    #[error("no composition table for ({0}, {1}, {2})")]
    MissingComposition(usize, usize, usize),
    #[error("slot {slot} out of range for arity {arity}")]
    BadSlot { slot: usize, arity: usize },
    #[error("operation requires a unital operad")]
    NotUnital,
    #[error("ideal closure reaches the arity-1 component")]
    UnitTouched,
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("chain error: {0}")]
    Chain(String),
}

impl From<chain_core::Error> for Error {
    fn from(e: chain_core::Error) -> Self {
        Error::Chain(e.to_string())
    }
}

impl From<setf_sym::Error> for Error {
    fn from(e: setf_sym::Error) -> Self {
        Error::Chain(e.to_string())
    }
}

impl From<exact_linear::Error> for Error {
    fn from(e: exact_linear::Error) -> Self {
        Error::Chain(e.to_string())
    }
}
