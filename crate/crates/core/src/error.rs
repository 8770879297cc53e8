use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node index {0}")]
    UnknownNode(usize),
    #[error("unknown node label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),
    #[error("bidirected self-edge at `{0}` is not allowed")]
    BidirectedSelfEdge(String),
    #[error("self-loop at `{0}` cannot be removed")]
    LoopRemoval(String),
    #[error("expected a directed graph, found {0} bidirected edge(s)")]
    NotADirectedGraph(usize),
    #[error("separation query needs nonempty source and target sets")]
    EmptyQuerySet,
    #[error("brute-force search refused: {nodes} nodes exceeds cap {cap}")]
    BruteForceCap { nodes: usize, cap: usize },
    #[error("query mentions node {0} which is not observed by the oracle")]
    UnobservedNode(usize),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("time {t} outside the observation window [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },
    #[error("model is not stationary (spectral radius {rho:.6} >= 1); pass force to simulate anyway")]
    NonStationary { rho: f64 },
    #[error("simulation aborted after {cap} events (runaway intensity)")]
    EventCapExceeded { cap: usize },
    #[error("invalid intervention: {0}")]
    InvalidIntervention(String),
    #[error("soundness violation: output misses {} true edge(s): {}", .missing.len(), format_pairs(.missing))]
    SoundnessViolation { missing: Vec<(String, String)> },
    #[error("graphs have different node sets")]
    NodeSetMismatch,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {need} observations, got {got}")]
    TooFewObservations { need: usize, got: usize },
    #[error("zero variance: rank correlation is undefined")]
    ZeroVariance,
    #[error("line {line}: {msg}")]
    Malformed { line: u64, msg: String },
    #[error("input contains no nodes")]
    NoNodes,
    #[error("cannot sample {m} nodes from a graph with {n}")]
    SampleTooLarge { m: usize, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_pairs(pairs: &[(String, String)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("{a}->{b}"))
        .collect::<Vec<_>>()
        .join(", ")
}
