use thiserror::Error;

use crate::critical_loop::CriticalLoop;
use crate::logic::ModelSet;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown sentence `{0}`")]
    UnknownSentenceId(String),

    #[error("no conjunction available for sentences {0} and {1}")]
    ConjunctionUnavailable(u32, u32),

    #[error("base family has {bases} bases, more than the enumeration cap allows ({cap})")]
    EnumerationCapExceeded { bases: u128, cap: u128 },

    #[error("minimum {0} is not the model set of any base")]
    MinSetInexpressible(ModelSet),

    #[error("operator undefined for K={k:?}, gamma={gamma:?}")]
    OperatorUndefined { k: Vec<u32>, gamma: Vec<u32> },

    #[error("prerequisite failed: {0}")]
    PostulatePrerequisiteFailed(String),

    #[error("no base has model set {{{0}, {1}}}")]
    FormInexpressible(usize, usize),

    #[error("invalid critical loop: {0}")]
    InvalidLoop(String),

    #[error("relation is not a preorder")]
    NotAPreorder,

    #[error("logic has a critical loop")]
    CriticalLoopPresent(Box<CriticalLoop>),

    #[error("{0} interpretations exceed the weak-order search limit of 7")]
    OmegaTooLarge(usize),

    #[error("unknown gallery entry `{0}`")]
    UnknownGalleryName(String),

    #[error("gallery entry `{0}` has infinitely many interpretations")]
    OutOfScopeInfinite(String),

    #[error("invalid logic: {0}")]
    InvalidLogic(String),

    #[error("invalid base {base:?}: {reason}")]
    InvalidBase { base: Vec<u32>, reason: String },

    #[error("assignment has no relation for base {0:?}")]
    MissingAssignmentEntry(Vec<u32>),

    #[error("relation over {found} interpretations used with a logic of {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{path}: {msg}")]
    Format { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
