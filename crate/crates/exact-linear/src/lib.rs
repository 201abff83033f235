//! Exact integer linear algebra: arbitrary-precision matrices, Smith normal
//! form with tracked unimodular transforms, lattice arithmetic, and homology
//! of a pair of composable integer matrices.

mod homology;
mod matrix;
mod snf;

pub use homology::{homology_group, HomologyGroup};
pub use matrix::IntegerMatrix;
pub use snf::{
    column_hermite_form, kernel_basis, lattice_contains, lattices_equal, rank, saturate_lattice,
    smith_normal_form, solve, SmithDecomposition,
};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("not a complex: d_out * d_in != 0")]
    NotAComplex,
    #[error("no integer solution")]
    NoSolution,
}
