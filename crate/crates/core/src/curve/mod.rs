//! Curves on surface patches: jets, arc-length reparameterization, Frenet
//! frames, osculating decomposition and the normal/geodesic curvatures.

mod family;
mod frame;

use std::sync::Arc;

pub use family::{curve_catalog, CurveFamily, CurvePath};
pub use frame::{
    binormal_expansion_check, curvature_sample, frenet, geodesic_curvature_def,
    geodesic_curvature_intrinsic, is_asymptotic, is_osculating, normal_curvature,
    normal_curvature_ambient, osculating_decompose, AsymptoticReport, CurvatureSample,
    FrenetFrame, OsculatingDecomposition, OsculatingReport, KAPPA_MIN,
};

pub(crate) use frame::{cubic_form, geodesic_curvature_bracket};

use crate::error::{GeomError, Result};
use crate::surface::{PatchJet, SurfacePatch};
use crate::{trace, Vec3};

/// Default number of samples for curve-level predicates.
pub const DEFAULT_SAMPLES: usize = 101;
/// Tolerance on | |σ′| − 1 | for operations that need arc length.
pub const UNIT_SPEED_TOL: f64 = 1e-6;
/// Speeds below this are treated as stationary points.
pub const STATIONARY_SPEED: f64 = 1e-10;

#[derive(Debug, Clone)]
enum Source {
    Path(CurvePath),
    ArcLength(Arc<ArcLengthMap>),
}

/// A curve `s ↦ Φ(u(s), v(s))` on a patch.
#[derive(Debug, Clone)]
pub struct SurfaceCurve {
    patch: Arc<SurfacePatch>,
    source: Source,
    range: (f64, f64),
    unit_speed: bool,
}

impl SurfaceCurve {
    /// A closed-form path over `range`. The unit-speed flag is taken from
    /// the family; [`SurfaceCurve::speed_defect`] verifies it.
    pub fn new(patch: Arc<SurfacePatch>, path: CurvePath, range: (f64, f64)) -> SurfaceCurve {
        let unit_speed = path.declared_unit_speed();
        SurfaceCurve {
            patch,
            source: Source::Path(path),
            range,
            unit_speed,
        }
    }

    pub fn with_unit_speed(mut self, flag: bool) -> SurfaceCurve {
        self.unit_speed = flag;
        self
    }

    pub fn patch(&self) -> &Arc<SurfacePatch> {
        &self.patch
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn is_unit_speed(&self) -> bool {
        self.unit_speed
    }

    /// `n` uniformly spaced parameters covering the range, endpoints included.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.range;
        match n {
            0 => vec![],
            1 => vec![0.5 * (a + b)],
            _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
        }
    }

    /// Largest | |σ′| − 1 | over `n` samples.
    pub fn speed_defect(&self, n: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for s in self.samples(n) {
            worst = worst.max((curve_jet(self, s)?.tangent.norm() - 1.0).abs());
        }
        Ok(worst)
    }

    /// Parameter values and derivatives at `s`, before touching the patch.
    fn param_jet(&self, s: f64) -> Result<ParamJet> {
        match &self.source {
            Source::Path(path) => {
                let (u, v) = path.eval(s);
                Ok(ParamJet {
                    u: [u.v, u.d1, u.d2],
                    v: [v.v, v.d1, v.d2],
                    third: Some((u.d3, v.d3)),
                })
            }
            Source::ArcLength(map) => map.param_jet(s),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct ParamJet {
    u: [f64; 3],
    v: [f64; 3],
    third: Option<(f64, f64)>,
}

/// Parameter and ambient derivatives of a surface curve at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub s: f64,
    pub u: f64,
    pub v: f64,
    pub du: f64,
    pub dv: f64,
    pub ddu: f64,
    pub ddv: f64,
    /// `(u‴, v‴)` when the path supplies them.
    pub third: Option<(f64, f64)>,
    /// σ
    pub point: Vec3,
    /// σ′
    pub tangent: Vec3,
    /// σ″
    pub accel: Vec3,
    /// σ‴, present only when both the path and the patch have third-order data.
    pub jerk: Option<Vec3>,
    pub patch: PatchJet,
}

impl CurveJet {
    /// Assemble ambient derivatives by the chain rule.
    fn assemble(s: f64, pj: ParamJet, patch: PatchJet) -> CurveJet {
        let [u, du, ddu] = pj.u;
        let [v, dv, ddv] = pj.v;
        let tangent = patch.du * du + patch.dv * dv;
        let accel = patch.du * ddu
            + patch.dv * ddv
            + patch.duu * (du * du)
            + patch.duv * (2.0 * du * dv)
            + patch.dvv * (dv * dv);
        let jerk = match (pj.third, patch.third) {
            (Some((dddu, dddv)), Some(t3)) => Some(
                patch.du * dddu
                    + patch.dv * dddv
                    + patch.duu * (3.0 * du * ddu)
                    + patch.duv * (3.0 * (ddu * dv + du * ddv))
                    + patch.dvv * (3.0 * dv * ddv)
                    + t3.uuu * du.powi(3)
                    + t3.uuv * (3.0 * du * du * dv)
                    + t3.uvv * (3.0 * du * dv * dv)
                    + t3.vvv * dv.powi(3),
            ),
            _ => None,
        };
        CurveJet {
            s,
            u,
            v,
            du,
            dv,
            ddu,
            ddv,
            third: pj.third,
            point: patch.point,
            tangent,
            accel,
            jerk,
            patch,
        }
    }
}

/// The jet of `Φ̃(u(s), v(s))` for another patch `Φ̃` over the same
/// domain, reusing the parameter derivatives of `jet` (so `s` is still the
/// source curve's parameter).
pub fn image_jet(jet: &CurveJet, target: &SurfacePatch) -> Result<CurveJet> {
    let pj = ParamJet {
        u: [jet.u, jet.du, jet.ddu],
        v: [jet.v, jet.dv, jet.ddv],
        third: jet.third,
    };
    Ok(CurveJet::assemble(jet.s, pj, target.eval_jet(jet.u, jet.v)?))
}

pub fn curve_jet(curve: &SurfaceCurve, s: f64) -> Result<CurveJet> {
    trace::hit("curve_jet");
    let (lo, hi) = curve.range;
    let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    if !(s >= lo - slack && s <= hi + slack) {
        return Err(GeomError::ParameterOutOfRange { s, lo, hi });
    }
    let pj = curve.param_jet(s)?;
    let patch = curve.patch.eval_jet(pj.u[0], pj.v[0])?;
    Ok(CurveJet::assemble(s, pj, patch))
}

/// Table mapping arc length back to the parameter of a base curve.
#[derive(Debug, Clone)]
struct ArcLengthMap {
    base: SurfaceCurve,
    knots: Vec<f64>,
    lengths: Vec<f64>,
    speeds: Vec<f64>,
}

// Gauss–Legendre, five nodes on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
    0.236_926_885_056_189_08,
];

fn speed_at(curve: &SurfaceCurve, t: f64) -> Result<f64> {
    let speed = curve_jet(curve, t)?.tangent.norm();
    if speed < STATIONARY_SPEED {
        return Err(GeomError::StationaryPoint { t, speed });
    }
    Ok(speed)
}

fn quad_speed(curve: &SurfaceCurve, a: f64, b: f64) -> Result<f64> {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        acc += w * speed_at(curve, mid + half * x)?;
    }
    Ok(acc * half)
}

impl ArcLengthMap {
    fn build(base: SurfaceCurve, intervals: usize) -> Result<ArcLengthMap> {
        let n = intervals.max(1);
        let (a, b) = base.range;
        let knots: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
        let mut lengths = Vec::with_capacity(n + 1);
        let mut speeds = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        lengths.push(0.0);
        speeds.push(speed_at(&base, knots[0])?);
        for w in knots.windows(2) {
            acc += quad_speed(&base, w[0], w[1])?;
            lengths.push(acc);
            speeds.push(speed_at(&base, w[1])?);
        }
        Ok(ArcLengthMap {
            base,
            knots,
            lengths,
            speeds,
        })
    }

    fn total(&self) -> f64 {
        *self.lengths.last().unwrap()
    }

    /// Base parameter at arc length `s`: monotone cubic Hermite guess,
    /// then Newton on the exact length integral.
    fn param_at(&self, s: f64) -> Result<f64> {
        let s = s.clamp(0.0, self.total());
        let i = self
            .lengths
            .partition_point(|&x| x <= s)
            .saturating_sub(1)
            .min(self.knots.len() - 2);
        let (s0, s1) = (self.lengths[i], self.lengths[i + 1]);
        let (t0, t1) = (self.knots[i], self.knots[i + 1]);
        let h = s1 - s0;
        let secant = (t1 - t0) / h;
        // Fritsch–Carlson: keep end slopes within 3× the secant
        let m0 = (1.0 / self.speeds[i]).min(3.0 * secant);
        let m1 = (1.0 / self.speeds[i + 1]).min(3.0 * secant);
        let x = (s - s0) / h;
        let (x2, x3) = (x * x, x * x * x);
        let mut t = (2.0 * x3 - 3.0 * x2 + 1.0) * t0
            + (x3 - 2.0 * x2 + x) * h * m0
            + (-2.0 * x3 + 3.0 * x2) * t1
            + (x3 - x2) * h * m1;
        for _ in 0..8 {
            let f = s0 + quad_speed(&self.base, t0, t)? - s;
            let step = f / speed_at(&self.base, t)?;
            t = (t - step).clamp(t0, t1);
            if step.abs() < 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        Ok(t)
    }

    fn param_jet(&self, s: f64) -> Result<ParamJet> {
        let t = self.param_at(s)?;
        let j = curve_jet(&self.base, t)?;
        let lam = j.tangent.norm();
        let lam_t = j.tangent.dot(&j.accel) / lam;
        // derivatives of t(s) = inverse of the length function
        let t1 = 1.0 / lam;
        let t2 = -lam_t / lam.powi(3);
        let u = [j.u, j.du * t1, j.ddu * t1 * t1 + j.du * t2];
        let v = [j.v, j.dv * t1, j.ddv * t1 * t1 + j.dv * t2];
        let third = match (j.third, j.jerk) {
            (Some((dddu, dddv)), Some(jerk)) => {
                let lam_tt = (j.accel.norm_squared() + j.tangent.dot(&jerk)) / lam - lam_t * lam_t / lam;
                let t3 = -lam_tt / lam.powi(4) + 3.0 * lam_t * lam_t / lam.powi(5);
                Some((
                    dddu * t1.powi(3) + 3.0 * j.ddu * t1 * t2 + j.du * t3,
                    dddv * t1.powi(3) + 3.0 * j.ddv * t1 * t2 + j.dv * t3,
                ))
            }
            _ => None,
        };
        Ok(ParamJet { u, v, third })
    }
}

/// Reparameterize by arc length measured from the start of the range.
/// `intervals` is the size of the length table (quadrature is exact to
/// high order inside each interval; Newton polishing makes the inverse
/// accurate to round-off).
pub fn arclength_reparam(curve: &SurfaceCurve, intervals: usize) -> Result<SurfaceCurve> {
    let map = ArcLengthMap::build(curve.clone(), intervals)?;
    let total = map.total();
    Ok(SurfaceCurve {
        patch: curve.patch.clone(),
        source: Source::ArcLength(Arc::new(map)),
        range: (0.0, total),
        unit_speed: true,
    })
}
