use super::Domain;
use crate::error::{GeomError, Result};
use crate::expr::ExprJet;
use crate::Vec3;
use std::f64::consts::PI;
use std::sync::Arc;

/// Closed-form surfaces. Partials are ordered
/// `[Φ, Φu, Φv, Φuu, Φuv, Φvv, Φuuu, Φuuv, Φuvv, Φvvv]`.
#[derive(Debug, Clone)]
pub enum Shape {
    /// `(u, v, h)`
    Plane { height: f64 },
    /// `(c u, c v, 0)`
    ScaledPlane { c: f64 },
    /// `(r cos u, r sin u, v)`
    Cylinder { r: f64 },
    /// `r (sin u cos v, sin u sin v, cos u)`, u colatitude, v longitude.
    Sphere { r: f64 },
    /// Unit sphere through inverse stereographic projection from the north pole.
    StereoSphere,
    /// `(eᵘ cos v, eᵘ sin v, 0)`
    ExpPlane,
    /// Member `cos θ · helicoid + sin θ · catenoid` of the associate family;
    /// θ = 0 is the helicoid, θ = π/2 the catenoid.
    Associate { theta: f64 },
    /// `(u, v, f(u, v))`
    Monge(Arc<ExprJet>),
    /// `(x(u, v), y(u, v), z(u, v))`
    Parametric(Arc<[ExprJet; 3]>),
    /// Another shape scaled about the origin by a constant factor.
    Scaled(Arc<Shape>, f64),
}

pub struct CatalogEntry {
    pub id: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

pub fn surface_catalog() -> &'static [CatalogEntry] {
    &[
        CatalogEntry { id: "plane", params: "[height = 0]", description: "(u, v, h)" },
        CatalogEntry { id: "scaled-plane", params: "[c = 2]", description: "(c u, c v, 0)" },
        CatalogEntry { id: "cylinder", params: "[r = 1]", description: "(r cos u, r sin u, v)" },
        CatalogEntry { id: "sphere", params: "[r = 1]", description: "r (sin u cos v, sin u sin v, cos u), poles excluded" },
        CatalogEntry { id: "stereo-sphere", params: "[]", description: "unit sphere in stereographic coordinates (p, q)" },
        CatalogEntry { id: "stereo-plane", params: "[]", description: "(p, q, 0), the stereographic image plane" },
        CatalogEntry { id: "exp-plane", params: "[]", description: "(eᵘ cos v, eᵘ sin v, 0)" },
        CatalogEntry { id: "helicoid", params: "[]", description: "(sinh v sin u, -sinh v cos u, u)" },
        CatalogEntry { id: "catenoid", params: "[]", description: "(cosh v cos u, cosh v sin u, v)" },
        CatalogEntry { id: "associate", params: "[theta]", description: "cos θ helicoid + sin θ catenoid" },
        CatalogEntry { id: "monge", params: "expr = \"f(u, v)\"", description: "(u, v, f(u, v))" },
        CatalogEntry { id: "parametric", params: "expr = [\"x\", \"y\", \"z\"]", description: "(x(u, v), y(u, v), z(u, v))" },
    ]
}

fn param(params: &[f64], idx: usize, default: f64) -> f64 {
    params.get(idx).copied().unwrap_or(default)
}

pub(super) fn build(id: &str, params: &[f64]) -> Result<(Shape, Domain)> {
    let max_params = match id {
        "plane" | "scaled-plane" | "cylinder" | "sphere" | "associate" => 1,
        "stereo-sphere" | "stereo-plane" | "exp-plane" | "helicoid" | "catenoid" => 0,
        "monge" | "parametric" => {
            return Err(GeomError::BadParams {
                id: id.into(),
                msg: "expression surfaces need an `expr` field".into(),
            })
        }
        _ => {
            return Err(GeomError::UnknownId {
                kind: "surface",
                id: id.into(),
            })
        }
    };
    if params.len() > max_params {
        return Err(GeomError::BadParams {
            id: id.into(),
            msg: format!("expected at most {max_params} parameter(s), got {}", params.len()),
        });
    }
    let square = Domain::new((-3.0, 3.0), (-3.0, 3.0));
    let minimal = Domain::new((-PI, PI), (-2.0, 2.0));
    let positive = |name: &str, x: f64| {
        if x > 0.0 && x.is_finite() {
            Ok(x)
        } else {
            Err(GeomError::BadParams {
                id: id.into(),
                msg: format!("{name} must be positive, got {x}"),
            })
        }
    };
    Ok(match id {
        "plane" => (Shape::Plane { height: param(params, 0, 0.0) }, square),
        "scaled-plane" => (Shape::ScaledPlane { c: positive("c", param(params, 0, 2.0))? }, square),
        "cylinder" => (
            Shape::Cylinder { r: positive("r", param(params, 0, 1.0))? },
            Domain::new((-4.0 * PI, 4.0 * PI), (-10.0, 10.0)),
        ),
        // the longitude spans two turns each way so closed geodesics stay in the chart
        "sphere" => (
            Shape::Sphere { r: positive("r", param(params, 0, 1.0))? },
            Domain::new((0.05, PI - 0.05), (-4.0 * PI, 4.0 * PI)),
        ),
        "stereo-sphere" => (Shape::StereoSphere, square),
        "stereo-plane" => (Shape::Plane { height: 0.0 }, square),
        "exp-plane" => (Shape::ExpPlane, Domain::new((-2.0, 2.0), (-PI, PI))),
        "helicoid" => (Shape::Associate { theta: 0.0 }, minimal),
        "catenoid" => (Shape::Associate { theta: 0.5 * PI }, minimal),
        "associate" => (Shape::Associate { theta: param(params, 0, 0.0) }, minimal),
        _ => unreachable!(),
    })
}

fn v3(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3::new(x, y, z)
}

const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

impl Shape {
    pub fn monge(height: &str) -> Result<Shape> {
        Ok(Shape::Monge(Arc::new(ExprJet::new(height)?)))
    }

    pub fn parametric(x: &str, y: &str, z: &str) -> Result<Shape> {
        Ok(Shape::Parametric(Arc::new([
            ExprJet::new(x)?,
            ExprJet::new(y)?,
            ExprJet::new(z)?,
        ])))
    }

    pub fn point(&self, u: f64, v: f64) -> Vec3 {
        match self {
            Shape::Monge(f) => v3(u, v, f.value(u, v)),
            Shape::Parametric(xyz) => v3(xyz[0].value(u, v), xyz[1].value(u, v), xyz[2].value(u, v)),
            Shape::Scaled(base, c) => base.point(u, v) * *c,
            _ => self.partials(u, v).0[0],
        }
    }

    /// All partials up to third order; the flag reports whether the
    /// third-order entries are meaningful.
    pub fn partials(&self, u: f64, v: f64) -> ([Vec3; 10], bool) {
        match *self {
            Shape::Plane { height } => {
                let mut d = [ZERO; 10];
                d[0] = v3(u, v, height);
                d[1] = v3(1.0, 0.0, 0.0);
                d[2] = v3(0.0, 1.0, 0.0);
                (d, true)
            }
            Shape::ScaledPlane { c } => {
                let mut d = [ZERO; 10];
                d[0] = v3(c * u, c * v, 0.0);
                d[1] = v3(c, 0.0, 0.0);
                d[2] = v3(0.0, c, 0.0);
                (d, true)
            }
            Shape::Cylinder { r } => {
                let (s, c) = u.sin_cos();
                let mut d = [ZERO; 10];
                d[0] = v3(r * c, r * s, v);
                d[1] = v3(-r * s, r * c, 0.0);
                d[2] = v3(0.0, 0.0, 1.0);
                d[3] = v3(-r * c, -r * s, 0.0);
                d[6] = v3(r * s, -r * c, 0.0);
                (d, true)
            }
            Shape::Sphere { r } => {
                let (su, cu) = u.sin_cos();
                let (sv, cv) = v.sin_cos();
                let p = v3(su * cv, su * sv, cu) * r;
                let du = v3(cu * cv, cu * sv, -su) * r;
                let dv = v3(-su * sv, su * cv, 0.0) * r;
                let duv = v3(-cu * sv, cu * cv, 0.0) * r;
                let dvv = v3(-su * cv, -su * sv, 0.0) * r;
                let duvv = v3(-cu * cv, -cu * sv, 0.0) * r;
                (
                    [p, du, dv, -p, duv, dvv, -du, -dv, duvv, -dv],
                    true,
                )
            }
            Shape::StereoSphere => (stereo_partials(u, v), true),
            Shape::ExpPlane => {
                let e = u.exp();
                // ∂uᵃ ∂vᵇ = eᵘ (cos(v + bπ/2), sin(v + bπ/2), 0)
                let rot = |b: u32| {
                    let a = v + b as f64 * 0.5 * PI;
                    v3(e * a.cos(), e * a.sin(), 0.0)
                };
                (
                    [rot(0), rot(0), rot(1), rot(0), rot(1), rot(2), rot(0), rot(1), rot(2), rot(3)],
                    true,
                )
            }
            Shape::Associate { theta } => {
                let (st, ct) = theta.sin_cos();
                let h = helicoid_partials(u, v);
                let c = catenoid_partials(u, v);
                (std::array::from_fn(|i| h[i] * ct + c[i] * st), true)
            }
            Shape::Scaled(ref base, c) => {
                let (mut d, third) = base.partials(u, v);
                d.iter_mut().for_each(|x| *x *= c);
                (d, third)
            }
            Shape::Monge(ref f) => {
                let a = f.eval_all(u, v);
                let mut d = [ZERO; 10];
                d[0] = v3(u, v, a[0]);
                d[1] = v3(1.0, 0.0, a[1]);
                d[2] = v3(0.0, 1.0, a[2]);
                for i in 3..10 {
                    d[i] = v3(0.0, 0.0, a[i]);
                }
                (d, true)
            }
            Shape::Parametric(ref xyz) => {
                let x = xyz[0].eval_all(u, v);
                let y = xyz[1].eval_all(u, v);
                let z = xyz[2].eval_all(u, v);
                (std::array::from_fn(|i| v3(x[i], y[i], z[i])), true)
            }
        }
    }
}

fn helicoid_partials(u: f64, v: f64) -> [Vec3; 10] {
    let (su, cu) = u.sin_cos();
    let (sh, ch) = (v.sinh(), v.cosh());
    [
        v3(sh * su, -sh * cu, u),
        v3(sh * cu, sh * su, 1.0),
        v3(ch * su, -ch * cu, 0.0),
        v3(-sh * su, sh * cu, 0.0),
        v3(ch * cu, ch * su, 0.0),
        v3(sh * su, -sh * cu, 0.0),
        v3(-sh * cu, -sh * su, 0.0),
        v3(-ch * su, ch * cu, 0.0),
        v3(sh * cu, sh * su, 0.0),
        v3(ch * su, -ch * cu, 0.0),
    ]
}

fn catenoid_partials(u: f64, v: f64) -> [Vec3; 10] {
    let (su, cu) = u.sin_cos();
    let (sh, ch) = (v.sinh(), v.cosh());
    [
        v3(ch * cu, ch * su, v),
        v3(-ch * su, ch * cu, 0.0),
        v3(sh * cu, sh * su, 1.0),
        v3(-ch * cu, -ch * su, 0.0),
        v3(-sh * su, sh * cu, 0.0),
        v3(ch * cu, ch * su, 0.0),
        v3(ch * su, -ch * cu, 0.0),
        v3(-sh * cu, -sh * su, 0.0),
        v3(-ch * su, ch * cu, 0.0),
        v3(sh * cu, sh * su, 0.0),
    ]
}

/// Inverse stereographic projection `(2p, 2q, p² + q² - 1) / (1 + p² + q²)`,
/// written through `w = 1 / (1 + p² + q²)` as `(2p w, 2q w, 1 - 2w)`.
fn stereo_partials(p: f64, q: f64) -> [Vec3; 10] {
    let w = 1.0 / (1.0 + p * p + q * q);
    let (w2, w3, w4) = (w * w, w * w * w, w * w * w * w);
    // [w, wp, wq, wpp, wpq, wqq, wppp, wppq, wpqq, wqqq]
    let dw = [
        w,
        -2.0 * p * w2,
        -2.0 * q * w2,
        -2.0 * w2 + 8.0 * p * p * w3,
        8.0 * p * q * w3,
        -2.0 * w2 + 8.0 * q * q * w3,
        24.0 * p * w3 - 48.0 * p * p * p * w4,
        8.0 * q * w3 - 48.0 * p * p * q * w4,
        8.0 * p * w3 - 48.0 * p * q * q * w4,
        24.0 * q * w3 - 48.0 * q * q * q * w4,
    ];
    // Leibniz rule for (coordinate · w): each derivative slot, the slot with
    // one fewer derivative in that coordinate, and how many times it was taken.
    // Slots: 0:-, 1:p, 2:q, 3:pp, 4:pq, 5:qq, 6:ppp, 7:ppq, 8:pqq, 9:qqq
    const DROP_P: [(usize, f64); 10] = [
        (0, 0.0), (0, 1.0), (0, 0.0), (1, 2.0), (2, 1.0),
        (0, 0.0), (3, 3.0), (4, 2.0), (5, 1.0), (0, 0.0),
    ];
    const DROP_Q: [(usize, f64); 10] = [
        (0, 0.0), (0, 0.0), (0, 1.0), (0, 0.0), (1, 1.0),
        (2, 2.0), (0, 0.0), (3, 1.0), (4, 2.0), (5, 3.0),
    ];
    std::array::from_fn(|i| {
        let x = 2.0 * (p * dw[i] + DROP_P[i].1 * dw[DROP_P[i].0]);
        let y = 2.0 * (q * dw[i] + DROP_Q[i].1 * dw[DROP_Q[i].0]);
        let z = if i == 0 { 1.0 - 2.0 * w } else { -2.0 * dw[i] };
        v3(x, y, z)
    })
}
