//! Chain complexes over the integers with named bases, graded maps,
//! tensor and hom constructions, cones, and sub/quotient machinery.
//! All signs flow through the `sign` module.

pub mod cone;
pub mod hom;
pub mod interval;
pub mod sign;
pub mod sub_quotient;
pub mod tensor;

mod complex;
mod map;

pub use complex::ChainComplex;
pub use map::{ChainMap, Homotopy};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("differential does not square to zero near degree {0}")]
    NotAComplex(i64),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("lattice at degree {0} is not saturated")]
    NotSaturated(i64),
    #[error(transparent)]
    Linear(#[from] exact_linear::Error),
}
