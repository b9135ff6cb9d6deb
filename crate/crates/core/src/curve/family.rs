//! Closed-form parameter paths `t ↦ (u(t), v(t))`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::jet::Jet3;

/// A path in the parameter plane with exact derivatives to third order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CurvePath {
    /// `(u0 + t, v0)`.
    ParameterLineU { u0: f64, v0: f64 },
    /// `(u0, v0 + t)`.
    ParameterLineV { u0: f64, v0: f64 },
    /// Straight segment `(u0 + a t, v0 + b t)`.
    Line { u0: f64, v0: f64, du: f64, dv: f64 },
    /// `(cu + r cos(t/r), cv + r sin(t/r))`, unit speed in a flat chart.
    PlaneCircle { r: f64, cu: f64, cv: f64 },
    /// `(cu + a cos t, cv + b sin t)`.
    Ellipse { a: f64, b: f64, cu: f64, cv: f64 },
    /// Colatitude circle `u = u0` on a sphere of radius `radius`, unit speed.
    Latitude { u0: f64, radius: f64 },
    /// Unit-speed great circle of the unit sphere through (1, 0, 0) whose
    /// plane is tilted by `tilt` about the x-axis. Written in the
    /// colatitude/longitude chart.
    GreatCircle { tilt: f64 },
    /// Unit-speed helix `(a cos t, a sin t, c t)` in the chart of a
    /// cylinder of radius `a`.
    Helix { a: f64, c: f64 },
    /// `u(t) = Σ u[k] tᵏ`, `v(t) = Σ v[k] tᵏ`.
    Polynomial { u: Vec<f64>, v: Vec<f64> },
}

pub struct CurveFamily {
    pub id: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

pub fn curve_catalog() -> &'static [CurveFamily] {
    &[
        CurveFamily { id: "parameter-line-u", params: "[u0, v0]", description: "(u0 + t, v0)" },
        CurveFamily { id: "parameter-line-v", params: "[u0, v0]", description: "(u0, v0 + t)" },
        CurveFamily { id: "line", params: "[u0, v0, du, dv]", description: "(u0 + du t, v0 + dv t)" },
        CurveFamily { id: "plane-circle", params: "[r, cu = 0, cv = 0]", description: "unit-speed circle of radius r in the chart" },
        CurveFamily { id: "ellipse", params: "[a, b, cu = 0, cv = 0]", description: "(cu + a cos t, cv + b sin t)" },
        CurveFamily { id: "latitude", params: "[u0, radius = 1]", description: "unit-speed colatitude circle on a sphere" },
        CurveFamily { id: "great-circle", params: "[tilt = 0]", description: "unit-speed great circle on the unit sphere" },
        CurveFamily { id: "helix", params: "[a = 1, c = 1]", description: "unit-speed helix on the cylinder of radius a" },
        CurveFamily { id: "polynomial", params: "u = [..], v = [..]", description: "polynomial coefficients, lowest degree first" },
    ]
}

impl CurvePath {
    /// Build a path from a catalog id and numeric parameters.
    pub fn from_catalog(id: &str, p: &[f64]) -> Result<CurvePath> {
        let bad = |msg: String| GeomError::BadParams { id: id.into(), msg };
        let need = |lo: usize, hi: usize| {
            if p.len() < lo || p.len() > hi {
                Err(bad(format!("expected {lo}..={hi} parameters, got {}", p.len())))
            } else {
                Ok(())
            }
        };
        let at = |i: usize, d: f64| p.get(i).copied().unwrap_or(d);
        let path = match id {
            "parameter-line-u" => {
                need(2, 2)?;
                CurvePath::ParameterLineU { u0: p[0], v0: p[1] }
            }
            "parameter-line-v" => {
                need(2, 2)?;
                CurvePath::ParameterLineV { u0: p[0], v0: p[1] }
            }
            "line" => {
                need(4, 4)?;
                CurvePath::Line { u0: p[0], v0: p[1], du: p[2], dv: p[3] }
            }
            "plane-circle" => {
                need(1, 3)?;
                CurvePath::PlaneCircle { r: p[0], cu: at(1, 0.0), cv: at(2, 0.0) }
            }
            "ellipse" => {
                need(2, 4)?;
                CurvePath::Ellipse { a: p[0], b: p[1], cu: at(2, 0.0), cv: at(3, 0.0) }
            }
            "latitude" => {
                need(1, 2)?;
                if !(p[0] > 0.0 && p[0] < PI) {
                    return Err(bad(format!("colatitude must lie in (0, π), got {}", p[0])));
                }
                CurvePath::Latitude { u0: p[0], radius: at(1, 1.0) }
            }
            "great-circle" => {
                need(0, 1)?;
                let tilt = at(0, 0.0);
                if tilt.cos() <= 0.0 {
                    return Err(bad(format!("tilt must satisfy cos(tilt) > 0, got {tilt}")));
                }
                CurvePath::GreatCircle { tilt }
            }
            "helix" => {
                need(0, 2)?;
                CurvePath::Helix { a: at(0, 1.0), c: at(1, 1.0) }
            }
            "polynomial" => return Err(bad("polynomial curves need `u` and `v` coefficient lists".into())),
            _ => {
                return Err(GeomError::UnknownId {
                    kind: "curve",
                    id: id.into(),
                })
            }
        };
        match &path {
            CurvePath::PlaneCircle { r, .. } | CurvePath::Latitude { radius: r, .. } if *r <= 0.0 => {
                Err(bad("radius must be positive".into()))
            }
            CurvePath::Ellipse { a, b, .. } if *a <= 0.0 || *b <= 0.0 => Err(bad("semi-axes must be positive".into())),
            CurvePath::Helix { a, .. } if *a <= 0.0 => Err(bad("helix radius must be positive".into())),
            _ => Ok(path),
        }
    }

    pub fn polynomial(u: Vec<f64>, v: Vec<f64>) -> CurvePath {
        CurvePath::Polynomial { u, v }
    }

    /// Natural parameter interval used when a scenario does not give one.
    pub fn default_range(&self) -> (f64, f64) {
        match *self {
            CurvePath::PlaneCircle { r, .. } => (0.0, TAU * r),
            CurvePath::Ellipse { .. } | CurvePath::GreatCircle { .. } => (0.0, TAU),
            CurvePath::Latitude { u0, radius } => (0.0, TAU * radius * u0.sin()),
            CurvePath::Helix { a, c } => (0.0, TAU * (a * a + c * c).sqrt()),
            _ => (-1.0, 1.0),
        }
    }

    /// Whether the path is unit speed on the surface it was designed for.
    /// Only trusted together with the intended patch; callers verify.
    pub fn declared_unit_speed(&self) -> bool {
        matches!(
            self,
            CurvePath::PlaneCircle { .. } | CurvePath::Latitude { .. } | CurvePath::GreatCircle { .. } | CurvePath::Helix { .. }
        )
    }

    /// `(u, v)` with derivatives at parameter `t`.
    pub fn eval(&self, t: f64) -> (Jet3, Jet3) {
        let x = Jet3::var(t);
        let c = Jet3::constant;
        match self {
            CurvePath::ParameterLineU { u0, v0 } => (x.offset(*u0), c(*v0)),
            CurvePath::ParameterLineV { u0, v0 } => (c(*u0), x.offset(*v0)),
            CurvePath::Line { u0, v0, du, dv } => (x.scale(*du).offset(*u0), x.scale(*dv).offset(*v0)),
            CurvePath::PlaneCircle { r, cu, cv } => {
                let a = x.scale(1.0 / r);
                (a.cos().scale(*r).offset(*cu), a.sin().scale(*r).offset(*cv))
            }
            CurvePath::Ellipse { a, b, cu, cv } => (x.cos().scale(*a).offset(*cu), x.sin().scale(*b).offset(*cv)),
            CurvePath::Latitude { u0, radius } => (c(*u0), x.scale(1.0 / (radius * u0.sin()))),
            CurvePath::GreatCircle { tilt } => {
                let (st, ct) = tilt.sin_cos();
                let z = x.sin().scale(st);
                let mut lon = Jet3::atan2(x.sin().scale(ct), x.cos());
                // follow the longitude continuously past ±π
                lon.v += TAU * ((t - lon.v) / TAU).round();
                (z.acos(), lon)
            }
            CurvePath::Helix { a, c } => {
                let k = 1.0 / (a * a + c * c).sqrt();
                (x.scale(k), x.scale(c * k))
            }
            CurvePath::Polynomial { u, v } => (horner(u, x), horner(v, x)),
        }
    }
}

fn horner(coeffs: &[f64], x: Jet3) -> Jet3 {
    coeffs
        .iter()
        .rev()
        .fold(Jet3::constant(0.0), |acc, &k| (acc * x).offset(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        let p = CurvePath::polynomial(vec![1.0, 2.0, 0.0, 3.0], vec![0.0, 0.0, 1.0]);
        let (u, v) = p.eval(2.0);
        assert_eq!((u.v, u.d1, u.d2, u.d3), (29.0, 38.0, 36.0, 18.0));
        assert_eq!((v.v, v.d1, v.d2, v.d3), (4.0, 4.0, 2.0, 0.0));
    }

    #[test]
    fn great_circle_longitude_is_continuous() {
        let p = CurvePath::GreatCircle { tilt: 0.7 };
        let mut prev = p.eval(0.0).1.v;
        for i in 1..=400 {
            let t = TAU * i as f64 / 400.0;
            let lon = p.eval(t).1.v;
            assert!((lon - prev).abs() < 0.1, "jump at t = {t}");
            prev = lon;
        }
        assert!((prev - TAU).abs() < 1e-12);
    }

    #[test]
    fn catalog_validation() {
        assert!(CurvePath::from_catalog("plane-circle", &[1.0]).is_ok());
        assert!(matches!(
            CurvePath::from_catalog("plane-circle", &[-1.0]),
            Err(GeomError::BadParams { .. })
        ));
        assert!(matches!(
            CurvePath::from_catalog("spiral", &[]),
            Err(GeomError::UnknownId { kind: "curve", .. })
        ));
        assert!(CurvePath::from_catalog("great-circle", &[2.0]).is_err());
    }
}
