use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the individual
/// pipeline stages so callers can map them onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point outside the domain chart/bounding box: {0}")]
    OutOfChart(String),

    #[error("jet oracle depth exceeded: requested order {requested}, available {available}")]
    Capability { requested: usize, available: usize },

    #[error("point is not in the domain: {0}")]
    Membership(String),

    #[error("point outside the projection collar: delta={delta:.6e}, collar={collar:.6e}")]
    Collar { delta: f64, collar: f64 },

    #[error("numeric failure in {context}: residual {residual:.3e}")]
    Numeric { context: String, residual: f64 },

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("chart condition violated: |dr/dw2| = {value:.3e} below threshold {threshold:.3e}")]
    ChartCondition { value: f64, threshold: f64 },

    #[error("frame system ill-conditioned: condition number {0:.3e}")]
    IllConditioned(f64),

    #[error("resource budget exceeded: estimated {estimated} nodes, budget {budget}")]
    Resource { estimated: usize, budget: usize },

    #[error("endpoints not connected in the graph: {0}")]
    Reachability(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid curve: {0}")]
    CurveValidity(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
