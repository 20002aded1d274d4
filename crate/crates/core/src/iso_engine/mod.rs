//! Isomorphisms between complements of hypersurfaces: construction from
//! Danielewski-type data, homogenization, certification and stabilization.

mod certify;
mod data;
mod eval;
mod families;
mod ga;
mod lemma;
mod mutation;

pub use certify::{certify_projective_iso, stabilize, CertifyFailure, CertifyOptions, Route, DEFAULT_TERM_CEILING};
pub use data::{CheckResult, DanielewskiData, IsoCertificate, MapFile, PolynomialMap};
pub use eval::{evaluation_consistency, EvaluationReport};
pub use families::{
    family_cone, family_line, involution_deg8, involution_deg8_cubic, open_question_instance, Family,
    OpenQuestionReport,
};
pub use ga::{ga_examples, verify_ga_action, GaAction, GaReport, Invariant};
pub use lemma::{
    build_lemma_iso_maps, check_lemma_iso_hypotheses, homogenize_map, polynomialize_components, run_pipeline,
    verify_inverse_pair, HypothesisReport, LaurentMap, PipelineReport, Polynomialized,
};
pub use mutation::{mutation_pool, run_mutations, Mutation, MutationOutcome, MutationTarget};

use thiserror::Error;

use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("{0}")]
    Poly(#[from] PolyError),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("characteristic {p} divides d = {d}")]
    CharacteristicDividesDegree { p: u64, d: u32 },
    #[error("the leading z-coefficient of {0} is not a unit constant")]
    NonUnitLeading(&'static str),
    #[error("hypotheses not verified: {0}")]
    HypothesesFailed(String),
    #[error("polynomialization failed for component {component}: {reason}")]
    Polynomialization { component: usize, reason: String },
    #[error("components have mixed degree residues {0:?} modulo d")]
    MixedResidues(Vec<u32>),
    #[error("map is malformed: {0}")]
    Malformed(String),
    #[error("identity failed: {0}")]
    CheckFailed(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
}
