//! Declarative verification scenarios: a TOML document names a
//! correspondence, some curves and a list of checks; the runner evaluates
//! every check on sample grids and returns one [`ReportEntry`] per check
//! (and per curve for curve-level checks).

mod report;
mod run;
mod scenario;

use std::fmt;

use thiserror::Error;

pub use report::{emit_report, Format, Report, ReportEntry, SamplePoint, Verdict};
pub use run::{run_scenario, run_scenarios, worker_count, WORKERS_ENV};
pub use scenario::{
    load_scenario, load_scenario_file, CorrespondenceSpec, CurveSpec, DomainSpec, ExprSpec, GeodesicSpec, GridSpec,
    PatchSpec, Scenario,
};

use crate::error::GeomError;

/// Default tolerance for identities evaluated with closed-form partials.
pub const ANALYTIC_TOL: f64 = 1e-6;
/// Default tolerance when either patch uses finite differences.
pub const FD_TOL: f64 = 1e-4;
/// Default tolerance for residuals along integrated geodesics.
pub const GEODESIC_TOL: f64 = 1e-5;
/// Default tolerance on the relative conformality residual.
pub const CLASSIFICATION_TOL: f64 = 1e-4;

/// Every check a scenario may request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Conformality,
    Christoffel,
    MetricDerivatives,
    StructuralIdentities,
    Tangential,
    NormalComponent,
    GeodesicCurvature,
    OsculatingImage,
    CurveFrame,
    ParallelTransport,
    GeodesicResidual,
    GeodesicInvariance,
    ConformalGeodesicEquivalence,
}

impl Check {
    pub const ALL: [Check; 13] = [
        Check::Conformality,
        Check::Christoffel,
        Check::MetricDerivatives,
        Check::StructuralIdentities,
        Check::Tangential,
        Check::NormalComponent,
        Check::GeodesicCurvature,
        Check::OsculatingImage,
        Check::CurveFrame,
        Check::ParallelTransport,
        Check::GeodesicResidual,
        Check::GeodesicInvariance,
        Check::ConformalGeodesicEquivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Conformality => "conformality",
            Check::Christoffel => "christoffel",
            Check::MetricDerivatives => "metric-derivatives",
            Check::StructuralIdentities => "structural-identities",
            Check::Tangential => "tangential",
            Check::NormalComponent => "normal-component",
            Check::GeodesicCurvature => "geodesic-curvature",
            Check::OsculatingImage => "osculating-image",
            Check::CurveFrame => "curve-frame",
            Check::ParallelTransport => "parallel-transport",
            Check::GeodesicResidual => "geodesic-residual",
            Check::GeodesicInvariance => "geodesic-invariance",
            Check::ConformalGeodesicEquivalence => "conformal-geodesic-equivalence",
        }
    }

    pub fn from_name(name: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Checks evaluated once per curve rather than on the parameter grid.
    pub fn per_curve(self) -> bool {
        matches!(
            self,
            Check::Tangential
                | Check::NormalComponent
                | Check::GeodesicCurvature
                | Check::OsculatingImage
                | Check::CurveFrame
                | Check::ParallelTransport
                | Check::ConformalGeodesicEquivalence
        )
    }

    /// The operation a check dispatches to.
    pub fn operation(self) -> &'static str {
        match self {
            Check::Conformality => "classify_map",
            Check::Christoffel => "conformal_christoffel_check",
            Check::MetricDerivatives => "metric_derivative_relations",
            Check::StructuralIdentities => "dot_product_identities",
            Check::Tangential => "tangential_component_relation",
            Check::NormalComponent => "normal_component_relation",
            Check::GeodesicCurvature => "geodesic_curvature_relation",
            Check::OsculatingImage => "osculating_image_condition",
            Check::CurveFrame => "curvature_sample",
            Check::ParallelTransport => "covariant_derivative_defect",
            Check::GeodesicResidual => "integrate_geodesic",
            Check::GeodesicInvariance => "homothety_invariance_check",
            Check::ConformalGeodesicEquivalence => "conformal_geodesic_residual",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Failures that stop a scenario from loading or a report from being
/// written. Problems inside a check never surface here; they become
/// failed or skipped entries.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown check `{name}`{}", suggestion_text(.suggestion))]
    UnknownCheck { name: String, suggestion: Option<String> },

    #[error("unknown {kind} id `{id}`{}", suggestion_text(.suggestion))]
    UnknownId {
        kind: &'static str,
        id: String,
        suggestion: Option<String>,
    },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Geometry(GeomError),

    #[error("cannot read `{path}`: {source}")]
    Read { path: String, source: std::io::Error },

    #[error("cannot write `{path}`: {source}")]
    Unwritable { path: String, source: std::io::Error },

    #[error("malformed report: {0}")]
    Report(String),
}

fn suggestion_text(s: &Option<String>) -> String {
    match s {
        Some(s) => format!(" (did you mean `{s}`?)"),
        None => String::new(),
    }
}

/// Closest candidate by edit distance, if it is plausibly a typo.
pub(crate) fn nearest<'a>(name: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<String> {
    candidates
        .into_iter()
        .map(|c| (strsim::levenshtein(name, c), c))
        .filter(|(d, c)| *d <= 3.max(c.len() / 3))
        .min()
        .map(|(_, c)| c.to_string())
}

impl From<GeomError> for ConfigError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::UnknownId { kind, id } => {
                let suggestion = match kind {
                    "surface" => nearest(&id, crate::surface::surface_catalog().iter().map(|c| c.id)),
                    "curve" => nearest(&id, crate::curve::curve_catalog().iter().map(|c| c.id)),
                    "correspondence" => nearest(&id, crate::conformal::correspondence_catalog().iter().map(|c| c.id)),
                    _ => None,
                };
                ConfigError::UnknownId { kind, id, suggestion }
            }
            GeomError::DomainMismatch => ConfigError::Geometry(e),
            other => ConfigError::Geometry(other),
        }
    }
}

impl ConfigError {
    pub fn tag(&self) -> &'static str {
        match self {
            ConfigError::Parse { .. } => "parse-error",
            ConfigError::UnknownCheck { .. } => "unknown-check",
            ConfigError::UnknownId { kind: "surface", .. } => "unknown-surface-id",
            ConfigError::UnknownId { .. } => "unknown-id",
            ConfigError::Invalid(_) => "invalid-config",
            ConfigError::Geometry(e) => e.tag(),
            ConfigError::Read { .. } => "unreadable-input",
            ConfigError::Unwritable { .. } => "unwritable-output",
            ConfigError::Report(_) => "malformed-report",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Check::ALL {
            assert_eq!(Check::from_name(c.name()), Some(c));
        }
        assert_eq!(Check::from_name("christofel"), None);
    }

    #[test]
    fn nearest_check() {
        let got = nearest("christofel", Check::ALL.iter().map(|c| c.name()));
        assert_eq!(got.as_deref(), Some("christoffel"));
        assert_eq!(nearest("zzzzzzzzzzzzzzzzzzzzzzzzzz", ["plane"]), None);
    }
}
