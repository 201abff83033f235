//! Experiment harness: builds seeded homology equivalences, runs the
//! homology-invariance experiments over cofree coalgebra carriers and their
//! equivariant hom factors, reproduces the non-projective counterexample,
//! checks colimit commutation and the splitting identity, and serializes
//! complexes, operads, and reports deterministically.

pub mod cli;
pub mod cxf;
pub mod experiment;
pub mod opfile;
pub mod random;
pub mod report;

pub use cli::cli_main;
pub use cxf::{complex_to_value, parse_complex};
pub use experiment::{
    colimit_commutation_check, com_counterexample, invariance_experiment, splitting_check,
    ComplexSpec, ExperimentSpec, OperadSpec,
};
pub use opfile::{operad_to_value, parse_operad};
pub use random::{
    make_homology_equivalence, random_chain_map, random_complex, random_filtration,
};
pub use report::{HomologyComparison, HomologySummary, Report};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Chain(#[from] chain_core::Error),
    #[error(transparent)]
    Linear(#[from] exact_linear::Error),
    #[error(transparent)]
    Sym(#[from] setf_sym::Error),
    #[error(transparent)]
    Operad(#[from] operad_core::Error),
    #[error(transparent)]
    Coalgebra(#[from] coalgebra_core::Error),
}
