//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    /// A finite-difference stencil or a sampled point left the chart domain.
    #[error("domain violation at {coords:?}{}", ctx_suffix(.context))]
    DomainViolation { coords: Vec<f64>, context: String },

    /// Gram-Schmidt hit a pivot below tolerance: the input vectors are
    /// (numerically) linearly dependent.
    #[error("degenerate frame: pivot {pivot:.3e} below tolerance at vector {index}")]
    DegenerateFrame { index: usize, pivot: f64 },

    /// The metric matrix could not be inverted at the given point.
    #[error("singular metric at {coords:?}")]
    SingularMetric { coords: Vec<f64> },

    /// Sectional curvature of a degenerate (rank < 2) plane was requested.
    #[error("degenerate plane: the two vectors are linearly dependent")]
    DegeneratePlane,

    /// A vector passed as a normal has a tangential component above tolerance.
    #[error("invalid normal: tangential component {tangential:.3e} above tolerance")]
    InvalidNormal { tangential: f64 },

    /// The differential of an immersion dropped rank at a sampled point.
    #[error("rank-deficient immersion differential at {coords:?}")]
    RankDeficient { coords: Vec<f64> },

    /// Lookup of an unknown catalog entry.
    #[error("no catalog entry named `{name}`")]
    CatalogMiss { name: String },

    /// A variant- or operation-specific precondition failed.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Malformed configuration (CLI flag or config file).
    #[error("config error: {0}")]
    Config(String),

    /// Rejection sampling could not find enough in-domain points.
    #[error("sampling exhausted: found {found} of {requested} points in the box")]
    SamplingExhausted { requested: usize, found: usize },
}

fn ctx_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
