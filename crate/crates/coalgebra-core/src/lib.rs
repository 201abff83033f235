//! Coalgebras over arity-truncated operads: structure validation, the
//! truncated cofree coalgebra with its classifying maps, induced and
//! pullback morphisms, group-like elements and coideals, ideal-kernel
//! coalgebras, cylinder coalgebras, and homotopy lifts.

mod classify;
mod coalgebra;
mod cofree;
mod cylinder;
mod kernel;
mod points;

pub use classify::{
    classifying_is_unique, classifying_map, induced_map, pullback_map,
};
pub use coalgebra::{
    check_coalgebra_morphism, validate_coalgebra, CoalgebraMorphism, CoalgebraReport,
    CoalgebraViolation, OperadCoalgebra,
};
pub use cofree::{cofree_coalgebra, truncated_cofree, CofreeVariant, TruncatedCofree};
pub use cylinder::{
    cofree_homotopy_lift, cylinder_coalgebra, cylinder_restricts_to_ends, CylinderCoalgebra,
    HomotopyLift,
};
pub use kernel::{ideal_kernel, IdealKernel};
pub use points::{group_like_elements, is_coideal};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("component at arity {0} is not a free module: {1}")]
    NotFree(usize, String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("no integer solution: {0}")]
    Solve(String),
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error("bounded search rejected: {0} candidates")]
    SearchTooLarge(u128),
    #[error("chain error: {0}")]
    Chain(String),
    #[error("operad error: {0}")]
    Operad(String),
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

impl From<operad_core::Error> for Error {
    fn from(e: operad_core::Error) -> Self {
        Error::Operad(e.to_string())
    }
}
