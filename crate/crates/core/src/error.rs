use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: expected {expected} tokens, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: unknown token `{token}` (expected `*`, `o`, `0` or `.`)")]
    UnknownToken { line: usize, token: String },

    #[error("pattern text contains no rows")]
    EmptyPattern,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("vertex {vertex} outside the range 1..={max}")]
    VertexOutOfRange { vertex: usize, max: usize },

    #[error("witness set must be non-empty")]
    EmptyWitness,

    #[error("exhaustive enumeration refused: {count} state vertices exceed the bound of {bound}")]
    TooLarge { count: usize, bound: usize },

    #[error("horizon must be at least 1")]
    InvalidHorizon,

    #[error("horizon {horizon} yields {rows} rows, above the cap of {cap}")]
    HorizonTooLarge {
        horizon: usize,
        rows: usize,
        cap: usize,
    },

    #[error("condition {0} needs a horizon")]
    MissingHorizon(&'static str),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("residual set {0} failed certification as a counterexample")]
    Uncertified(String),

    #[error("time {t} outside the window [{start}, {end}]")]
    OutsideWindow { t: i64, start: i64, end: i64 },

    #[error("empty time interval [{t0}, {t1})")]
    EmptyInterval { t0: i64, t1: i64 },

    #[error("scaling matrix must be diagonal")]
    NotDiagonal,

    #[error("unknown continuous-time family `{0}`")]
    UnknownFamily(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
