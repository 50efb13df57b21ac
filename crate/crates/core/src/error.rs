use thiserror::Error;

/// Errors raised by the geometry, interpolation, and norm routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate element: {0}")]
    DegenerateElement(String),
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("collinear points: triangle has zero area")]
    CollinearPoints,
    #[error("degenerate projection at theta = {theta}")]
    DegenerateProjection { theta: f64 },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("multi-index order {found} does not match interpolation degree {expected}")]
    IndexOrderMismatch { expected: u32, found: u32 },
    #[error("missing nodal value for lattice index {0:?}")]
    MissingNode([u32; 4]),
    #[error("vertex matrix is ill-conditioned")]
    IllConditioned,
    #[error("polynomial degree {degree} exceeds the limit {limit}")]
    DegreeOverflow { degree: u32, limit: u32 },
    #[error("unsupported seminorm request: {0}")]
    UnsupportedOrder(String),
    #[error("p = {p} is not admissible for k = {k}, m = {m}: {clause}")]
    InvalidPForKM { k: u32, m: u32, p: String, clause: &'static str },
    #[error("data seminorm vanishes while the interpolation error does not")]
    ZeroDataSeminorm,
    #[error("quadrature did not converge after {levels} refinement levels")]
    NotConverged { levels: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
