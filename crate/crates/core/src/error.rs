//! Error types shared across the data model, module library, and engine.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // --- data model ---
    #[error("time index is not strictly increasing at position {position}")]
    NonIncreasingTime { position: usize },
    #[error("time indices have no timestamps in common")]
    EmptyIntersection,
    #[error("timestamp {timestamp} appears in more than one part")]
    OverlappingIndices { timestamp: i64 },
    #[error("schema mismatch: {message}")]
    SchemaMismatch { message: String },

    // --- module lifecycle ---
    #[error("module '{type_id}' does not require fitting")]
    NotTrainable { type_id: String },
    #[error("module '{type_id}' must be fitted before transform")]
    NotFitted { type_id: String },
    #[error("not enough data: need at least {needed} rows, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("corrupt state blob: {message}")]
    CorruptState { message: String },
    #[error("missing parameter '{name}'")]
    MissingParam { name: String },
    #[error("invalid parameter '{name}': {message}")]
    InvalidParam { name: String, message: String },

    // --- transform preconditions ---
    #[error("shift of {shift} exceeds series length {len}")]
    ShiftTooLarge { shift: i64, len: usize },
    #[error("difference order {order} requires more than {order} rows, got {len}")]
    OrderTooLarge { order: usize, len: usize },
    #[error("cannot interpolate a series with no finite values")]
    AllMissing,
    #[error("resampling requires an equidistant input index")]
    NonEquidistantInput,
    #[error("target step of {target_secs}s is not a multiple or divisor of the input step {input_secs}s")]
    IncompatibleStep { input_secs: i64, target_secs: i64 },
    #[error("window of {window} exceeds series length {len}")]
    WindowTooLarge { window: usize, len: usize },
    #[error("no finite value pairs to compare")]
    NoFinitePairs,
    #[error("sample size {size} exceeds series length {len}")]
    SampleTooLarge { size: usize, len: usize },
    #[error("trend span of {span} steps requires a longer series than {len}")]
    PeriodTooLarge { span: usize, len: usize },
    #[error("design matrix is degenerate even after ridge stabilization")]
    DegenerateDesign,

    // --- graph construction and execution ---
    #[error("step '{step}' introduces a cycle")]
    CycleDetected { step: String },
    #[error("step '{step}' references unknown input '{input}'")]
    UnknownInput { step: String, input: String },
    #[error("duplicate step id '{id}'")]
    DuplicateId { id: String },
    #[error("unknown step '{id}'")]
    UnknownStep { id: String },
    #[error("no module registered for type id '{type_id}'")]
    UnknownTypeId { type_id: String },
    #[error("no predicate registered for id '{id}'")]
    UnknownPredicate { id: String },
    #[error("predicate produced {got} values for {expected} timestamps")]
    PredicateShapeMismatch { expected: usize, got: usize },
    #[error("pipeline input does not provide source '{name}'")]
    MissingSource { name: String },
    #[error("edge '{from}' -> '{to}' carries no rows")]
    EmptyEdge { from: String, to: String },
    #[error("step '{step}' has no finite lookback and cannot run online")]
    UnboundedLookback { step: String },
    #[error("invalid step '{id}': {message}")]
    InvalidStep { id: String, message: String },

    // --- persistence and definitions ---
    #[error("manifest format version {found} is not supported (expected {expected})")]
    ManifestVersionMismatch { expected: u32, found: u32 },
    #[error("definition syntax error at line {line}, column {column}: {message}")]
    DefinitionSyntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("step '{step}' references '{reference}' which is not defined")]
    DanglingReference { step: String, reference: String },
    #[error("invalid definition at {location}: {message}")]
    InvalidDefinition { location: String, message: String },

    // --- CSV ingestion ---
    #[error("malformed timestamp in data row {row}: {message}")]
    MalformedTimestamp { row: usize, message: String },
    #[error("data row {row} has a different number of cells than the header")]
    RaggedRow { row: usize },
    #[error("data row {row} has a non-numeric cell in column '{column}'")]
    MalformedValue { row: usize, column: String },
    #[error("malformed CSV header: {message}")]
    MalformedHeader { message: String },

    // --- context wrappers ---
    #[error("step '{id}': {source}")]
    Step {
        id: String,
        #[source]
        source: Box<Error>,
    },
    #[error("subpipeline '{name}': {source}")]
    Subpipeline {
        name: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wraps an error with the id of the step it occurred in. Errors already
    /// carrying a step context are left untouched so the innermost step wins.
    pub fn at_step(self, id: &str) -> Error {
        match self {
            err @ Error::Step { .. } => err,
            err => Error::Step {
                id: id.to_string(),
                source: Box::new(err),
            },
        }
    }

    /// Wraps an error with the name of the subpipeline it bubbled out of.
    pub fn in_subpipeline(self, name: &str) -> Error {
        Error::Subpipeline {
            name: name.to_string(),
            source: Box::new(self),
        }
    }

    /// The id of the failing step, when one was recorded.
    pub fn step_id(&self) -> Option<&str> {
        match self {
            Error::Step { id, .. } => Some(id),
            Error::Subpipeline { source, .. } => source.step_id(),
            _ => None,
        }
    }

    /// The innermost error, unwrapping step and subpipeline context.
    pub fn root(&self) -> &Error {
        match self {
            Error::Step { source, .. } | Error::Subpipeline { source, .. } => source.root(),
            other => other,
        }
    }
}
