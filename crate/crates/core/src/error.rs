use thiserror::Error;

use crate::cos::ObjectId;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("malformed cross-reference table: {0}")]
    MalformedXref(String),

    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),

    #[error("dangling reference to object {0}")]
    DanglingReference(ObjectId),

    #[error("reference cycle through object {0}")]
    ReferenceCycle(ObjectId),

    #[error("unexpected object type for {what}: expected {expected}")]
    TypeMismatch { what: String, expected: &'static str },

    #[error("unterminated string")]
    UnterminatedString,

    #[error("unpaired UTF-16 surrogate at byte {0}")]
    UnpairedSurrogate(usize),

    #[error("bad #xx escape in name at byte {0}")]
    BadHexEscape(usize),

    #[error("unbalanced BT/ET text block at operator {0}")]
    UnbalancedTextBlock(usize),

    #[error("unbalanced marked content (depth {depth}) at operator {offset}")]
    UnbalancedMarkedContent { depth: usize, offset: usize },

    #[error("content is not well formed: {0}")]
    WellFormedness(String),

    #[error("MCID {0} occurs more than once on the page")]
    DuplicateMcid(i64),

    #[error("document has no /StructTreeRoot")]
    MissingStructTreeRoot,

    #[error("structure tree revisits element {0}")]
    CycleDetected(ObjectId),

    #[error("structure element {elem} has /P {found:?}, expected {expected}")]
    OrphanElem {
        elem: ObjectId,
        expected: ObjectId,
        found: Option<ObjectId>,
    },

    #[error("structure element {elem} refers to MCID {mcid}, which is not on its page")]
    DanglingMcid { elem: ObjectId, mcid: i64 },

    #[error("MCID {0} is already claimed by a structure element")]
    McidAlreadyClaimed(i64),

    #[error("object {0} is not a /Filespec dictionary")]
    NotAFilespec(ObjectId),

    #[error("an embedded file named {0:?} already exists")]
    DuplicateName(String),

    #[error("unknown association target: {0}")]
    UnknownTarget(String),

    #[error("unsupported association method: {0}")]
    UnsupportedMethod(String),

    #[error("no embedded file named {0:?}")]
    NameNotFound(String),

    #[error("embedded file integrity mismatch: {0}")]
    IntegrityMismatch(String),

    #[error("malformed access-tag delimiters: {0}")]
    MalformedDelimiters(String),

    #[error("target not found: {0}")]
    TargetNotFound(String),

    #[error("formula content crosses a page boundary")]
    CrossesPageBoundary,

    #[error("formula already carries access-tags")]
    AlreadyTagged,

    #[error("unbalanced <latex>/<content> delimiters on page {page}")]
    UnbalancedDelimiters { page: usize },

    #[error("missing resource: {0}")]
    MissingResource(String),
}

impl Error {
    pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn type_mismatch(what: impl Into<String>, expected: &'static str) -> Self {
        Error::TypeMismatch {
            what: what.into(),
            expected,
        }
    }
}
