use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{nearest, Check, ConfigError, ANALYTIC_TOL, CLASSIFICATION_TOL, FD_TOL, GEODESIC_TOL};
use crate::conformal::SurfaceCorrespondence;
use crate::curve::{arclength_reparam, CurvePath, SurfaceCurve};
use crate::geodesic::{GeodesicState, IntegratorConfig};
use crate::surface::{DiffMode, Domain, SurfacePatch};

/// A validated scenario. After [`load_scenario`] every optional field that
/// has a default carries it, so [`Scenario::to_toml`] is canonical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub checks: Vec<String>,
    pub correspondence: CorrespondenceSpec,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geodesic: Option<GeodesicSpec>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<CurveSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrespondenceSpec {
    /// Catalog correspondence id. Mutually exclusive with `source`/`target`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    /// Surface acted on by `identity` and `scale`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<PatchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<PatchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<PatchSpec>,
    /// Swap source and target.
    #[serde(default)]
    pub reverse: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conformal_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<ExprSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<DiffMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExprSpec {
    Height(String),
    Components([String; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub u: [f64; 2],
    pub v: [f64; 2],
}

impl From<DomainSpec> for Domain {
    fn from(d: DomainSpec) -> Domain {
        Domain::new((d.u[0], d.u[1]), (d.v[0], d.v[1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "GridSpec::default_count")]
    pub nu: usize,
    #[serde(default = "GridSpec::default_count")]
    pub nv: usize,
    /// Samples along each curve.
    #[serde(default = "GridSpec::default_samples")]
    pub samples: usize,
    /// Fraction of each domain side kept clear of the grid.
    #[serde(default = "GridSpec::default_inset")]
    pub inset: f64,
}

impl GridSpec {
    fn default_count() -> usize {
        5
    }
    fn default_samples() -> usize {
        50
    }
    fn default_inset() -> f64 {
        0.05
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            nu: 5,
            nv: 5,
            samples: 50,
            inset: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<[f64; 2]>,
    #[serde(default = "GeodesicSpec::default_direction")]
    pub direction: [f64; 2],
    #[serde(default = "GeodesicSpec::default_length")]
    pub length: f64,
    #[serde(default = "GeodesicSpec::default_step")]
    pub step: f64,
}

impl GeodesicSpec {
    fn default_direction() -> [f64; 2] {
        [1.0, 0.5]
    }
    fn default_length() -> f64 {
        1.0
    }
    fn default_step() -> f64 {
        1e-3
    }
}

impl Default for GeodesicSpec {
    fn default() -> Self {
        GeodesicSpec {
            start: None,
            direction: Self::default_direction(),
            length: Self::default_length(),
            step: Self::default_step(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    /// Polynomial coefficients, lowest degree first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
    /// Reparameterize by arc length on the source surface.
    #[serde(default)]
    pub arclength: bool,
}

/// Parse and validate a scenario, filling in defaults.
pub fn load_scenario(text: &str) -> Result<Scenario, ConfigError> {
    load_named(text, "<scenario>")
}

pub fn load_scenario_file(path: &Path) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.display().to_string(),
        source,
    })?;
    load_named(&text, &path.display().to_string())
}

fn load_named(text: &str, origin: &str) -> Result<Scenario, ConfigError> {
    let mut sc: Scenario = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |span| line_column(text, span.start));
        ConfigError::Parse {
            origin: origin.to_string(),
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    sc.validate()?;
    Ok(sc)
}

/// One-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn parse_check(name: &str) -> Result<Check, ConfigError> {
    Check::from_name(name).ok_or_else(|| ConfigError::UnknownCheck {
        name: name.to_string(),
        suggestion: nearest(name, Check::ALL.iter().map(|c| c.name())),
    })
}

/// Everything the runner needs, built from a scenario.
pub(crate) struct Resolved {
    pub corr: SurfaceCorrespondence,
    pub curves: Vec<(String, Arc<SurfaceCurve>)>,
    pub checks: Vec<Check>,
    pub grid: Vec<(f64, f64)>,
    pub geodesic: (GeodesicState, f64, IntegratorConfig),
}

impl Scenario {
    /// Canonical TOML text.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario fields are always representable")
    }

    pub fn parsed_checks(&self) -> Result<Vec<Check>, ConfigError> {
        self.checks.iter().map(|c| parse_check(c)).collect()
    }

    /// Default tolerance for a check on this scenario's correspondence.
    fn default_tolerance(check: Check, analytic: bool) -> f64 {
        match check {
            Check::Conformality => CLASSIFICATION_TOL,
            Check::GeodesicResidual | Check::GeodesicInvariance => GEODESIC_TOL,
            _ if analytic => ANALYTIC_TOL,
            _ => FD_TOL,
        }
    }

    pub fn tolerance(&self, check: Check) -> f64 {
        self.tolerances.get(check.name()).copied().unwrap_or(ANALYTIC_TOL)
    }

    fn validate(&mut self) -> Result<(), ConfigError> {
        if self.name.trim().is_empty() {
            return Err(ConfigError::Invalid("scenario name must not be empty".into()));
        }
        let checks = self.parsed_checks()?;
        let mut seen = std::collections::BTreeSet::new();
        for c in &checks {
            if !seen.insert(*c) {
                return Err(ConfigError::Invalid(format!("check `{c}` is listed twice")));
            }
        }
        for (key, tol) in &self.tolerances {
            let check = parse_check(key)?;
            if !checks.contains(&check) {
                return Err(ConfigError::Invalid(format!("tolerance given for unlisted check `{key}`")));
            }
            if !(*tol > 0.0 && tol.is_finite()) {
                return Err(ConfigError::Invalid(format!("tolerance for `{key}` must be positive")));
            }
        }
        let g = &self.grid;
        if g.nu == 0 || g.nv == 0 || g.samples == 0 {
            return Err(ConfigError::Invalid("grid counts and curve samples must be at least 1".into()));
        }
        if !(g.inset >= 0.0 && g.inset < 0.5) {
            return Err(ConfigError::Invalid(format!("grid inset must lie in [0, 0.5), got {}", g.inset)));
        }
        if let Some(geo) = &self.geodesic {
            if !(geo.length > 0.0 && geo.step > 0.0 && geo.length.is_finite()) {
                return Err(ConfigError::Invalid("geodesic length and step must be positive".into()));
            }
        }
        let corr = self.build_correspondence()?;
        let analytic = corr.source().mode() == DiffMode::Analytic && corr.target().mode() == DiffMode::Analytic;
        for c in &checks {
            self.tolerances
                .entry(c.name().to_string())
                .or_insert_with(|| Self::default_tolerance(*c, analytic));
        }
        if checks.iter().any(|c| matches!(c, Check::GeodesicResidual | Check::GeodesicInvariance)) && self.geodesic.is_none() {
            self.geodesic = Some(GeodesicSpec::default());
        }
        if let Some(geo) = &mut self.geodesic {
            if geo.start.is_none() {
                let (u, v) = corr.source().domain().center();
                geo.start = Some([u, v]);
            }
        }
        let mut labels = std::collections::BTreeSet::new();
        for i in 0..self.curves.len() {
            let path = self.curves[i].path()?;
            let spec = &mut self.curves[i];
            if spec.range.is_none() {
                let (a, b) = path.default_range();
                spec.range = Some([a, b]);
            }
            if spec.label.is_none() {
                spec.label = Some(spec.default_label());
            }
            let label = spec.label.clone().unwrap_or_default();
            if !labels.insert(label.clone()) {
                return Err(ConfigError::Invalid(format!("two curves share the label `{label}`")));
            }
        }
        self.resolve().map(|_| ())
    }

    fn build_correspondence(&self) -> Result<SurfaceCorrespondence, ConfigError> {
        let c = &self.correspondence;
        let corr = match (&c.id, &c.source, &c.target) {
            (Some(id), None, None) => {
                let base = c.base.as_ref().map(PatchSpec::build).transpose()?;
                SurfaceCorrespondence::from_catalog(id, &c.params, base)?
            }
            (None, Some(s), Some(t)) => {
                if c.base.is_some() || !c.params.is_empty() {
                    return Err(ConfigError::Invalid("`base` and `params` only apply to catalog correspondences".into()));
                }
                SurfaceCorrespondence::new("custom", s.build()?, t.build()?)?
            }
            (Some(_), _, _) => {
                return Err(ConfigError::Invalid(
                    "give either a correspondence `id` or a `source`/`target` pair, not both".into(),
                ))
            }
            _ => {
                return Err(ConfigError::Invalid(
                    "a correspondence needs an `id` or both `source` and `target`".into(),
                ))
            }
        };
        let corr = if c.reverse { corr.reversed() } else { corr };
        Ok(match c.conformal_tol {
            Some(t) if t > 0.0 => corr.with_conformal_tol(t),
            Some(t) => return Err(ConfigError::Invalid(format!("conformal_tol must be positive, got {t}"))),
            None => corr,
        })
    }

    pub(crate) fn resolve(&self) -> Result<Resolved, ConfigError> {
        let corr = self.build_correspondence()?;
        let mut curves = Vec::with_capacity(self.curves.len());
        for spec in &self.curves {
            let path = spec.path()?;
            let [a, b] = spec.range.unwrap_or_else(|| {
                let (a, b) = path.default_range();
                [a, b]
            });
            if !(a < b) {
                return Err(ConfigError::Invalid(format!("curve `{}` has an empty range", spec.id)));
            }
            let mut curve = SurfaceCurve::new(corr.source().clone(), path, (a, b));
            if spec.arclength {
                curve = arclength_reparam(&curve, 64)?;
            }
            let label = spec.label.clone().unwrap_or_else(|| spec.default_label());
            curves.push((label, Arc::new(curve)));
        }
        let domain = corr.source().domain();
        let inset = self.grid.inset * (domain.u.1 - domain.u.0).min(domain.v.1 - domain.v.0);
        let grid = crate::surface::grid_points(&domain, self.grid.nu, self.grid.nv, inset);
        let geo = self.geodesic.unwrap_or_default();
        let [u, v] = geo.start.unwrap_or_else(|| {
            let (u, v) = domain.center();
            [u, v]
        });
        let [du, dv] = geo.direction;
        let initial = GeodesicState::new(u, v, du, dv).normalized(corr.source())?;
        let config = IntegratorConfig {
            step: geo.step,
            ..IntegratorConfig::default()
        };
        Ok(Resolved {
            corr,
            curves,
            checks: self.parsed_checks()?,
            grid,
            geodesic: (initial, geo.length, config),
        })
    }
}

impl PatchSpec {
    fn build(&self) -> Result<SurfacePatch, ConfigError> {
        let patch = match (self.id.as_str(), &self.expr) {
            ("monge", Some(ExprSpec::Height(h))) => {
                self.no_params()?;
                SurfacePatch::monge(h, self.domain_or_square())?
            }
            ("parametric", Some(ExprSpec::Components([x, y, z]))) => {
                self.no_params()?;
                SurfacePatch::parametric(x, y, z, self.domain_or_square())?
            }
            ("monge", _) => return Err(ConfigError::Invalid("`monge` needs `expr = \"f(u, v)\"`".into())),
            ("parametric", _) => return Err(ConfigError::Invalid("`parametric` needs `expr = [\"x\", \"y\", \"z\"]`".into())),
            (id, None) => {
                let p = SurfacePatch::from_catalog(id, &self.params)?;
                match self.domain {
                    Some(d) => p.with_domain(d.into()),
                    None => p,
                }
            }
            (id, Some(_)) => return Err(ConfigError::Invalid(format!("surface `{id}` does not take an expression"))),
        };
        if let Some(d) = self.domain {
            if !(d.u[0] < d.u[1] && d.v[0] < d.v[1]) {
                return Err(ConfigError::Invalid(format!("surface `{}` has an empty domain", self.id)));
            }
        }
        Ok(match self.mode {
            Some(m) => patch.with_mode(m),
            None => patch,
        })
    }

    fn no_params(&self) -> Result<(), ConfigError> {
        if self.params.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(format!("`{}` surfaces take no numeric params", self.id)))
        }
    }

    fn domain_or_square(&self) -> Domain {
        self.domain.map_or(Domain::new((-3.0, 3.0), (-3.0, 3.0)), Domain::from)
    }
}

impl CurveSpec {
    fn path(&self) -> Result<CurvePath, ConfigError> {
        match (self.id.as_str(), &self.u, &self.v) {
            ("polynomial", Some(u), Some(v)) if self.params.is_empty() => Ok(CurvePath::polynomial(u.clone(), v.clone())),
            ("polynomial", _, _) => Err(ConfigError::Invalid("`polynomial` curves need `u` and `v` lists and no `params`".into())),
            (id, None, None) => Ok(CurvePath::from_catalog(id, &self.params)?),
            (id, _, _) => Err(ConfigError::Invalid(format!("curve `{id}` does not take coefficient lists"))),
        }
    }

    fn default_label(&self) -> String {
        let nums = |xs: &[f64]| xs.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        let mut label = match (&self.u, &self.v) {
            (Some(u), Some(v)) => format!("{}[u={};v={}]", self.id, nums(u), nums(v)),
            _ if self.params.is_empty() => self.id.clone(),
            _ => format!("{}[{}]", self.id, nums(&self.params)),
        };
        if self.arclength {
            label.push_str("@arclength");
        }
        label
    }
}
