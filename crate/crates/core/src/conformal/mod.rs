//! Correspondences between two patches over one parameter domain, their
//! dilation field, and the identities relating curve quantities on the
//! two sides.

mod curves;
mod identities;

use std::fmt;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use curves::{
    geodesic_curvature_relation, normal_component_relation, osculating_image_condition,
    tangential_component_relation, GeodesicCurvatureRelation, NormalComponentSample,
    OsculatingImageSample, TangentialSample, SUB_CONDITION_TOL,
};
pub use identities::{
    christoffel_correction, conformal_christoffel_check, metric_derivative_relations,
    pushforward_extend, tangent_extension, ChristoffelCorrection, TangentExtension,
};

use crate::error::{GeomError, Result};
use crate::surface::{fd_step_first, metric_jet, DiffMode, SurfacePatch};
use crate::trace;

/// Default relative residual above which a point is declared non-conformal.
pub const CONFORMAL_TOL: f64 = 1e-4;
/// Spread of δ tolerated by the isometry/homothety classification.
pub const CONSTANT_DILATION_TOL: f64 = 1e-7;

/// Two patches over the same parameter rectangle. The map between them is
/// `Φ̃ ∘ Φ⁻¹`, never formed explicitly.
#[derive(Debug, Clone)]
pub struct SurfaceCorrespondence {
    name: String,
    source: Arc<SurfacePatch>,
    target: Arc<SurfacePatch>,
    declared: Option<MapClass>,
    conformal_tol: f64,
}

pub struct CorrespondenceEntry {
    pub id: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

pub fn correspondence_catalog() -> &'static [CorrespondenceEntry] {
    &[
        CorrespondenceEntry { id: "identity", params: "surface", description: "a surface onto itself" },
        CorrespondenceEntry { id: "scale", params: "surface, [c]", description: "a surface onto its copy scaled by c about the origin" },
        CorrespondenceEntry { id: "helicoid-catenoid", params: "[t = 1]", description: "helicoid onto the associate surface at angle tπ/2 (t = 1: catenoid)" },
        CorrespondenceEntry { id: "exp-plane", params: "[]", description: "(u, v, 0) onto (eᵘ cos v, eᵘ sin v, 0)" },
        CorrespondenceEntry { id: "sphere-stereographic", params: "[]", description: "unit sphere in stereographic coordinates onto the plane" },
    ]
}

impl SurfaceCorrespondence {
    pub fn new(name: impl Into<String>, source: SurfacePatch, target: SurfacePatch) -> Result<SurfaceCorrespondence> {
        if source.domain() != target.domain() {
            return Err(GeomError::DomainMismatch);
        }
        Ok(SurfaceCorrespondence {
            name: name.into(),
            source: Arc::new(source),
            target: Arc::new(target),
            declared: None,
            conformal_tol: CONFORMAL_TOL,
        })
    }

    /// Catalog correspondence. `identity` and `scale` act on `base`
    /// (the plane when absent); the others ignore it.
    pub fn from_catalog(id: &str, params: &[f64], base: Option<SurfacePatch>) -> Result<SurfaceCorrespondence> {
        let bad = |msg: &str| GeomError::BadParams { id: id.into(), msg: msg.into() };
        let max = match id {
            "identity" | "exp-plane" | "sphere-stereographic" => 0,
            "scale" | "helicoid-catenoid" => 1,
            _ => {
                return Err(GeomError::UnknownId {
                    kind: "correspondence",
                    id: id.into(),
                })
            }
        };
        if params.len() > max {
            return Err(bad(&format!("expected at most {max} parameter(s)")));
        }
        let base = match base {
            Some(p) => p,
            None => SurfacePatch::from_catalog("plane", &[])?,
        };
        let corr = match id {
            "identity" => Self::new(id, base.clone(), base)?.declare(MapClass::Isometry),
            "scale" => {
                let c = params.first().copied().unwrap_or(2.0);
                if !(c > 0.0 && c.is_finite()) {
                    return Err(bad("scale factor must be positive"));
                }
                let class = if c == 1.0 { MapClass::Isometry } else { MapClass::Homothety { c } };
                Self::new(id, base.clone(), base.scaled(c))?.declare(class)
            }
            "helicoid-catenoid" => {
                let t = params.first().copied().unwrap_or(1.0);
                let source = SurfacePatch::from_catalog("helicoid", &[])?;
                let target = SurfacePatch::from_catalog("associate", &[t * FRAC_PI_2])?;
                Self::new(id, source, target)?.declare(MapClass::Isometry)
            }
            "exp-plane" => {
                let target = SurfacePatch::from_catalog("exp-plane", &[])?;
                let source = SurfacePatch::from_catalog("plane", &[])?.with_domain(target.domain());
                Self::new(id, source, target)?.declare(MapClass::Conformal)
            }
            "sphere-stereographic" => Self::new(
                id,
                SurfacePatch::from_catalog("stereo-sphere", &[])?,
                SurfacePatch::from_catalog("stereo-plane", &[])?,
            )?
            .declare(MapClass::Conformal),
            _ => unreachable!(),
        };
        Ok(corr)
    }

    pub fn declare(mut self, class: MapClass) -> SurfaceCorrespondence {
        self.declared = Some(class);
        self
    }

    pub fn with_conformal_tol(mut self, tol: f64) -> SurfaceCorrespondence {
        self.conformal_tol = tol;
        self
    }

    /// The inverse correspondence (target onto source).
    pub fn reversed(&self) -> SurfaceCorrespondence {
        SurfaceCorrespondence {
            name: format!("{} (reversed)", self.name),
            source: self.target.clone(),
            target: self.source.clone(),
            declared: self.declared.map(|c| match c {
                MapClass::Homothety { c } => MapClass::Homothety { c: 1.0 / c },
                other => other,
            }),
            conformal_tol: self.conformal_tol,
        }
    }

    /// `self` followed by `next`; the middle patches must share a domain.
    pub fn then(&self, next: &SurfaceCorrespondence) -> Result<SurfaceCorrespondence> {
        if self.target.domain() != next.source.domain() {
            return Err(GeomError::DomainMismatch);
        }
        Ok(SurfaceCorrespondence {
            name: format!("{} ∘ {}", next.name, self.name),
            source: self.source.clone(),
            target: next.target.clone(),
            declared: None,
            conformal_tol: self.conformal_tol.max(next.conformal_tol),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<SurfacePatch> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SurfacePatch> {
        &self.target
    }

    pub fn declared(&self) -> Option<MapClass> {
        self.declared
    }

    pub fn conformal_tol(&self) -> f64 {
        self.conformal_tol
    }

    fn analytic(&self) -> bool {
        self.source.mode() == DiffMode::Analytic && self.target.mode() == DiffMode::Analytic
    }
}

/// δ with its partials at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationField {
    pub u: f64,
    pub v: f64,
    pub delta: f64,
    pub delta_u: f64,
    pub delta_v: f64,
    /// max(|F̃ − δ²F|, |G̃ − δ²G|) relative to max(Ẽ, G̃).
    pub residual: f64,
}

fn dilation_value(corr: &SurfaceCorrespondence, u: f64, v: f64) -> Result<(f64, f64)> {
    let (a, b) = (corr.source.eval_jet(u, v)?, corr.target.eval_jet(u, v)?);
    let (e, f, g) = (a.du.dot(&a.du), a.du.dot(&a.dv), a.dv.dot(&a.dv));
    let (te, tf, tg) = (b.du.dot(&b.du), b.du.dot(&b.dv), b.dv.dot(&b.dv));
    let d2 = te / e;
    let residual = (tf - d2 * f).abs().max((tg - d2 * g).abs()) / te.max(tg);
    Ok((d2.sqrt(), residual))
}

/// δ and its partials without the conformality guard.
pub(crate) fn dilation_unchecked(corr: &SurfaceCorrespondence, u: f64, v: f64) -> Result<DilationField> {
    let (delta, residual) = dilation_value(corr, u, v)?;
    let (delta_u, delta_v) = if corr.analytic() {
        // differentiate δ²(E + G) = Ẽ + G̃, which uses every coefficient
        let (m, tm) = (metric_jet(&corr.source, u, v)?, metric_jet(&corr.target, u, v)?);
        let sum = m.e + m.g;
        let d2 = delta * delta;
        (
            (tm.e_u + tm.g_u - d2 * (m.e_u + m.g_u)) / (2.0 * delta * sum),
            (tm.e_v + tm.g_v - d2 * (m.e_v + m.g_v)) / (2.0 * delta * sum),
        )
    } else {
        let (hu, hv) = (fd_step_first(u), fd_step_first(v));
        let at = |u, v| dilation_value(corr, u, v).map(|x| x.0);
        (
            (at(u + hu, v)? - at(u - hu, v)?) / (2.0 * hu),
            (at(u, v + hv)? - at(u, v - hv)?) / (2.0 * hv),
        )
    };
    Ok(DilationField {
        u,
        v,
        delta,
        delta_u,
        delta_v,
        residual,
    })
}

/// δ = √(Ẽ/E) with partials; fails when the other two coefficients do
/// not scale by δ² within the correspondence's tolerance.
pub fn dilation_field(corr: &SurfaceCorrespondence, u: f64, v: f64) -> Result<DilationField> {
    trace::hit("dilation_field");
    let d = dilation_unchecked(corr, u, v)?;
    if !(d.residual <= corr.conformal_tol) {
        return Err(GeomError::NonConformalAtPoint {
            u,
            v,
            residual: d.residual,
        });
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum MapClass {
    Isometry,
    Homothety { c: f64 },
    Conformal,
    NonConformal,
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapClass::Isometry => f.write_str("isometry"),
            MapClass::Homothety { c } => write!(f, "homothety({c})"),
            MapClass::Conformal => f.write_str("conformal"),
            MapClass::NonConformal => f.write_str("non-conformal"),
        }
    }
}

impl MapClass {
    /// Isometries and homotheties, the classes with constant δ.
    pub fn is_similarity(&self) -> bool {
        matches!(self, MapClass::Isometry | MapClass::Homothety { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub class: MapClass,
    pub max_residual: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    pub samples: usize,
}

/// Classify by the spread of δ over `grid`, after checking conformality
/// at every point against the correspondence's tolerance.
pub fn classify_map(corr: &SurfaceCorrespondence, grid: &[(f64, f64)]) -> Result<Classification> {
    trace::hit("classify_map");
    let mut deltas = Vec::with_capacity(grid.len());
    let mut max_residual: f64 = 0.0;
    for &(u, v) in grid {
        let (d, r) = dilation_value(corr, u, v)?;
        deltas.push(d);
        max_residual = max_residual.max(r);
    }
    let delta_min = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let delta_max = deltas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = |c: f64| deltas.iter().map(|d| (d - c).abs()).fold(0.0, f64::max);
    let class = if !(max_residual <= corr.conformal_tol) {
        MapClass::NonConformal
    } else if spread(1.0) < CONSTANT_DILATION_TOL {
        MapClass::Isometry
    } else {
        let c = 0.5 * (delta_min + delta_max);
        if spread(c) < CONSTANT_DILATION_TOL {
            MapClass::Homothety { c }
        } else {
            MapClass::Conformal
        }
    };
    Ok(Classification {
        class,
        max_residual,
        delta_min,
        delta_max,
        samples: grid.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{grid_points, Domain};

    fn cat(id: &str, p: &[f64]) -> SurfaceCorrespondence {
        SurfaceCorrespondence::from_catalog(id, p, None).unwrap()
    }

    #[test]
    fn dilation_examples() {
        let d = dilation_field(&cat("identity", &[]), 0.3, 0.4).unwrap();
        assert_eq!((d.delta, d.residual), (1.0, 0.0));

        let d = dilation_field(&cat("scale", &[2.0]), 0.3, -1.0).unwrap();
        assert_eq!((d.delta, d.delta_u, d.delta_v), (2.0, 0.0, 0.0));

        let st = cat("sphere-stereographic", &[]);
        assert!((dilation_field(&st, 0.0, 0.0).unwrap().delta - 0.5).abs() < 1e-15);
        let (p, q) = (0.7, -1.2);
        let d = dilation_field(&st, p, q).unwrap();
        let w = 1.0 + p * p + q * q;
        assert!((d.delta - 0.5 * w).abs() < 1e-14);
        assert!((d.delta_u - p).abs() < 1e-13 && (d.delta_v - q).abs() < 1e-13);
        assert!(d.residual < 1e-14);

        let d = dilation_field(&cat("exp-plane", &[]), 0.5, 1.0).unwrap();
        assert!((d.delta - 0.5f64.exp()).abs() < 1e-14 && (d.delta_u - 0.5f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn finite_difference_dilation_agrees() {
        let st = cat("sphere-stereographic", &[]);
        let fd = SurfaceCorrespondence::new(
            "fd",
            (**st.source()).clone().with_mode(DiffMode::FiniteDifference),
            (**st.target()).clone().with_mode(DiffMode::FiniteDifference),
        )
        .unwrap();
        let (a, b) = (dilation_field(&st, 1.0, 0.5).unwrap(), dilation_field(&fd, 1.0, 0.5).unwrap());
        assert!((a.delta_u - b.delta_u).abs() < 1e-6 && (a.delta_v - b.delta_v).abs() < 1e-6);
    }

    #[test]
    fn non_conformal_point_is_reported() {
        let d = Domain::new((-1.0, 1.0), (-1.0, 1.0));
        let corr = SurfaceCorrespondence::new(
            "shear",
            SurfacePatch::monge("0", d).unwrap(),
            SurfacePatch::parametric("u + v", "v", "0", d).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            dilation_field(&corr, 0.1, 0.2),
            Err(GeomError::NonConformalAtPoint { .. })
        ));
        let grid = grid_points(&d, 3, 3, 0.0);
        assert_eq!(classify_map(&corr, &grid).unwrap().class, MapClass::NonConformal);
    }

    #[test]
    fn classification_examples() {
        let grid = |c: &SurfaceCorrespondence| grid_points(&c.source().domain(), 5, 5, 0.05);
        let hc = cat("helicoid-catenoid", &[]);
        assert_eq!(classify_map(&hc, &grid(&hc)).unwrap().class, MapClass::Isometry);
        let sp = cat("scale", &[2.0]);
        assert_eq!(classify_map(&sp, &grid(&sp)).unwrap().class, MapClass::Homothety { c: 2.0 });
        let ep = cat("exp-plane", &[]);
        let cl = classify_map(&ep, &grid(&ep)).unwrap();
        assert_eq!(cl.class, MapClass::Conformal);
        assert!(cl.max_residual < 1e-15);
    }

    #[test]
    fn domain_mismatch_and_unknown_ids() {
        let a = SurfacePatch::from_catalog("plane", &[]).unwrap();
        let b = SurfacePatch::from_catalog("exp-plane", &[]).unwrap();
        assert_eq!(SurfaceCorrespondence::new("x", a, b).unwrap_err(), GeomError::DomainMismatch);
        assert!(matches!(
            SurfaceCorrespondence::from_catalog("mobius", &[], None),
            Err(GeomError::UnknownId { kind: "correspondence", .. })
        ));
    }

    #[test]
    fn composition_multiplies_dilations() {
        let ab = cat("exp-plane", &[]);
        let exp_plane = (**ab.target()).clone();
        let bc = SurfaceCorrespondence::from_catalog("scale", &[3.0], Some(exp_plane)).unwrap();
        let ac = ab.then(&bc).unwrap();
        for (u, v) in grid_points(&ab.source().domain(), 4, 4, 0.1) {
            let (x, y, z) = (
                dilation_field(&ab, u, v).unwrap(),
                dilation_field(&bc, u, v).unwrap(),
                dilation_field(&ac, u, v).unwrap(),
            );
            assert!((z.delta - x.delta * y.delta).abs() < 1e-8 * z.delta);
        }
    }
}
