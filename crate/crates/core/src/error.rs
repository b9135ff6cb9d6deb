use thiserror::Error;

pub type Result<T> = std::result::Result<T, GeomError>;

/// Failures raised by the geometry kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("point ({u}, {v}) is outside the patch domain")]
    PointOutsideDomain { u: f64, v: f64 },

    #[error("degenerate patch at ({u}, {v}): |Φu × Φv| = {norm:e}")]
    DegeneratePatch { u: f64, v: f64, norm: f64 },

    #[error("degenerate metric at ({u}, {v}): EG - F² = {det:e}")]
    DegenerateMetric { u: f64, v: f64, det: f64 },

    #[error("curve parameter {s} outside [{lo}, {hi}]")]
    ParameterOutOfRange { s: f64, lo: f64, hi: f64 },

    #[error("curve is stationary near t = {t} (speed {speed:e})")]
    StationaryPoint { t: f64, speed: f64 },

    #[error("curve is not unit speed at s = {s} (|σ'| = {speed})")]
    NotUnitSpeed { s: f64, speed: f64 },

    #[error("vanishing curvature at s = {s} (κ = {kappa:e})")]
    VanishingCurvature { s: f64, kappa: f64 },

    #[error("correspondence is not conformal at ({u}, {v}): residual {residual:e}")]
    NonConformalAtPoint { u: f64, v: f64, residual: f64 },

    #[error("source and target patches have different domains")]
    DomainMismatch,

    #[error("operation requires an isometry or homothety, found {class}")]
    WrongMapClass { class: String },

    #[error("initial state has metric speed {speed}, expected 1")]
    NonUnitInitialSpeed { speed: f64 },

    #[error("expression error at column {pos}: {msg}")]
    Expression { pos: usize, msg: String },

    #[error("unknown {kind} id `{id}`")]
    UnknownId { kind: &'static str, id: String },

    #[error("bad parameters for `{id}`: {msg}")]
    BadParams { id: String, msg: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl GeomError {
    /// Short machine-readable tag, used for skipped report entries.
    pub fn tag(&self) -> &'static str {
        match self {
            GeomError::PointOutsideDomain { .. } => "point-outside-domain",
            GeomError::DegeneratePatch { .. } => "degenerate-patch",
            GeomError::DegenerateMetric { .. } => "degenerate-metric",
            GeomError::ParameterOutOfRange { .. } => "out-of-range",
            GeomError::StationaryPoint { .. } => "stationary-point",
            GeomError::NotUnitSpeed { .. } => "not-unit-speed",
            GeomError::VanishingCurvature { .. } => "vanishing-curvature",
            GeomError::NonConformalAtPoint { .. } => "non-conformal-at-point",
            GeomError::DomainMismatch => "domain-mismatch",
            GeomError::WrongMapClass { .. } => "wrong-map-class",
            GeomError::NonUnitInitialSpeed { .. } => "nonunit-initial-speed",
            GeomError::Expression { .. } => "expression",
            GeomError::UnknownId { .. } => "unknown-id",
            GeomError::BadParams { .. } => "bad-params",
            GeomError::InvalidConfig(_) => "invalid-config",
        }
    }
}
