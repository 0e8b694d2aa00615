use thiserror::Error;

/// Errors shared by every module. Positions are reported as `f64` regardless
/// of the scalar type the computation ran in.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({x}, {y}) lies outside the domain [{x0}, {x1}]x[{y0}, {y1}]")]
    OutsideDomain {
        x: f64,
        y: f64,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("non-finite value at ({x}, {y})")]
    NonFinite { x: f64, y: f64 },

    #[error("non-finite sample at t = {t}")]
    NonFiniteSample { t: f64 },

    #[error("unknown catalog entry `{name}`; available: {available}")]
    UnknownCatalog { name: String, available: String },

    #[error("hypothesis violated: {check}; worst defect {defect:.6e} at ({x}, {y}), gate {gate:.6e}")]
    HypothesisViolation {
        check: String,
        defect: f64,
        x: f64,
        y: f64,
        gate: f64,
    },

    #[error("derivative order {n} exceeds the supported cap {cap}")]
    UnsupportedOrder { n: u32, cap: u32 },

    #[error("dimension {d} exceeds the supported cap {cap}")]
    UnsupportedDimension { d: usize, cap: usize },

    #[error("directional derivative does not converge: |{coarse:.6e}| -> |{fine:.6e}| under refinement")]
    NonDifferentiable { coarse: f64, fine: f64 },

    #[error("profile evaluation at t = {t} outside table range [{t0}, {t1}]")]
    ProfileRange { t: f64, t0: f64, t1: f64 },

    #[error("malformed record {record} in {path}: {reason}")]
    MalformedRecord {
        path: String,
        record: usize,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
