use thiserror::Error;

/// Errors raised by polygon construction, invariant computation and the
/// classification drivers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("convex hull is not two-dimensional")]
    DegenerateHull,
    #[error("origin is not in the strict interior of the polygon")]
    OriginNotInterior,
    #[error("vertex ({0}, {1}) is not a primitive lattice point")]
    NonPrimitiveVertex(i64, i64),
    #[error("polygon is not an IP-polygon")]
    NotIp,
    #[error("cone generators are parallel or not counterclockwise")]
    DegenerateCone,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("search budget of {0} nodes exceeded")]
    ResourceLimit(u64),
    #[error("box {given} is smaller than the required {required}")]
    BoxTooSmall { given: i64, required: i64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
