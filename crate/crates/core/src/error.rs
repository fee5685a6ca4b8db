use thiserror::Error;

use crate::poset::PairElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ground set: n = {0} (need n >= 4)")]
    InvalidGroundSet(usize),

    #[error("element {0} is not in F3({1})")]
    NotInPoset(PairElement, usize),

    #[error("generators {0} and {1} are comparable")]
    NotAnAntichain(PairElement, PairElement),

    #[error("no generator reaches vertex {0}")]
    GroundMismatch(usize),

    #[error("empty generator list")]
    EmptyIdeal,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("placement failed: {0}")]
    PlacementFailure(String),

    #[error("no admissible epsilon after {0} halvings")]
    EpsilonSearchExhausted(usize),

    #[error("viewpoint lies on the hyperplane of facet {0:?}")]
    DegenerateViewpoint(Vec<usize>),

    #[error("visible facets differ from the squeezed ball: {0}")]
    VisibilityMismatch(String),

    #[error("facet {0:?} has affinely dependent vertices")]
    DegenerateFacet(Vec<usize>),

    #[error("invalid certificate at facet {facet:?}: {reason}")]
    InvalidCertificate { facet: Vec<usize>, reason: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("circuit construction failed in step {step}: {detail}")]
    CircuitConstruction { step: &'static str, detail: String },
}

impl Error {
    pub(crate) fn at(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
