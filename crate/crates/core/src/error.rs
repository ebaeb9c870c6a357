use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("incomparable numerical attributes: bounds [{0}, {1}] vs [{2}, {3}]")]
    IncomparableNumerical(f64, f64, f64, f64),

    #[error("invalid numerical bounds: min {0} is not below max {1}")]
    InvalidBounds(f64, f64),

    #[error("vector dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("undefined angle: cosine similarity is undefined for a zero vector")]
    ZeroVector,

    #[error("label not in taxonomy: {0:?}")]
    UnknownLabel(String),

    #[error("invalid taxonomy: {0}")]
    InvalidTaxonomy(String),

    #[error("incomparable distributions: (mu {0}, sigma {1}) vs (mu {2}, sigma {3})")]
    IncomparableDistributions(f64, f64, f64, f64),

    #[error("unweighted node: all attribute pair weights are zero for {0:?} vs {1:?}")]
    UnweightedNode(String, String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("oracle limit: smaller graph has {0} nodes, exhaustive matching is capped at {1}")]
    OracleLimit(usize, usize),

    #[error("corpus too small: no token reaches the minimum count")]
    CorpusTooSmall,

    #[error("degenerate metric history for {0:?}: {1}")]
    DegenerateMetricHistory(String, String),

    #[error("no knowledge: the knowledge base has no exemplars{0}")]
    EmptyKnowledgeBase(String),

    #[error("invalid graph:\n{0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("metric csv: {0}")]
    MetricCsv(String),

    #[error("unknown matching strategy {0:?} (expected one of {1})")]
    UnknownStrategy(String, String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
