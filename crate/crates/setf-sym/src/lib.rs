//! Finite label sets with grafting, symmetric-group actions on tensor
//! powers, group-ring modules, and the exact equivariant hom solver.

mod finite_set;
mod module;
mod perm;
mod symmetric;

pub use finite_set::FiniteSetObj;
pub use module::{equivariant_hom, EquivariantHom, GroupRingModule};
pub use perm::Perm;
pub use symmetric::{
    signed_permutation_action, tensor_power_symmetric, unordered_tensor, SymmetricComplex,
    UnorderedTensor,
};

pub(crate) use chain_core::sign as chain_sign;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("duplicate label")]
    DuplicateLabel,
    #[error("label {0} not present")]
    MissingLabel(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("action relation violated: {0}")]
    ActionRelation(String),
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error("module is not free on the claimed basis: {0}")]
    NotFree(String),
    #[error("presentation map is not idempotent")]
    NotIdempotent,
    #[error("arity mismatch: module {0} vs target {1}")]
    ArityMismatch(usize, usize),
    #[error("chain error: {0}")]
    Chain(String),
}

impl From<chain_core::Error> for Error {
    fn from(e: chain_core::Error) -> Self {
        Error::Chain(e.to_string())
    }
}
