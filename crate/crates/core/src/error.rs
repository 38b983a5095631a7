use thiserror::Error;

/// Errors raised by the geometry kernel, the solvers and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("geodesics are not ultraparallel (|<n1,n2>| = {dot})")]
    NotUltraparallel { dot: f64 },

    #[error("{func} argument {value} is outside its domain")]
    Domain { func: &'static str, value: f64 },

    #[error("point lies outside the closed hexagon (side {side}, signed value {value})")]
    OutsideDomain { side: usize, value: f64 },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("root finder failed to bracket a root: {0}")]
    NoRoot(String),

    #[error("f(lo) = {flo} and f(hi) = {fhi} do not have opposite signs on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("wrong case: solver expects {expected} but the classifier returned {found}")]
    WrongCase { expected: &'static str, found: &'static str },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("fan needs at least one triangle, got {triangles}")]
    DegenerateFan { triangles: i64 },

    #[error("no grid point at resolution {resolution} falls inside the domain")]
    EmptyGrid { resolution: usize },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
