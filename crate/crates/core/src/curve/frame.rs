use serde::Serialize;

use super::{curve_jet, CurveJet, SurfaceCurve, UNIT_SPEED_TOL};
use crate::error::{GeomError, Result};
use crate::surface::{
    christoffel, surface_normal, ChristoffelSymbols, FundamentalForms, MetricJet,
};
use crate::{trace, Vec3};

/// Curvatures below this leave the Frenet frame undefined.
pub const KAPPA_MIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetFrame {
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub kappa: f64,
    /// `None` when the jet carries no third derivative.
    pub tau: Option<f64>,
}

fn require_unit_speed(jet: &CurveJet) -> Result<()> {
    let speed = jet.tangent.norm();
    if (speed - 1.0).abs() > UNIT_SPEED_TOL {
        return Err(GeomError::NotUnitSpeed { s: jet.s, speed });
    }
    Ok(())
}

/// Frenet apparatus of a unit-speed jet.
///
/// Uses `b ∝ σ′ × σ″` and `n = b × t` so the triple is orthonormal to
/// round-off even when σ″ carries a small tangential part.
pub fn frenet(jet: &CurveJet) -> Result<FrenetFrame> {
    trace::hit("frenet");
    require_unit_speed(jet)?;
    let cross = jet.tangent.cross(&jet.accel);
    let speed = jet.tangent.norm();
    let kappa = cross.norm() / speed.powi(3);
    if !(kappa >= KAPPA_MIN) {
        return Err(GeomError::VanishingCurvature { s: jet.s, kappa });
    }
    let t = jet.tangent / speed;
    let b = cross / cross.norm();
    let n = b.cross(&t);
    let tau = jet.jerk.map(|j| cross.dot(&j) / cross.norm_squared());
    Ok(FrenetFrame { t, n, b, kappa, tau })
}

/// Norm of the difference between the term-by-term expansion of κb in the
/// patch basis and σ′ × σ″ computed directly. The expansion's leading term
/// uses the unnormalized Φu × Φv.
pub fn binormal_expansion_check(jet: &CurveJet) -> Result<f64> {
    trace::hit("binormal_expansion_check");
    let frame = frenet(jet)?;
    let p = &jet.patch;
    let (du, dv, ddu, ddv) = (jet.du, jet.dv, jet.ddu, jet.ddv);
    let expansion = p.du.cross(&p.dv) * (du * ddv - ddu * dv)
        + p.du.cross(&p.duu) * du.powi(3)
        + p.du.cross(&p.duv) * (2.0 * du * du * dv)
        + p.du.cross(&p.dvv) * (du * dv * dv)
        + p.dv.cross(&p.duu) * (du * du * dv)
        + p.dv.cross(&p.duv) * (2.0 * du * dv * dv)
        + p.dv.cross(&p.dvv) * dv.powi(3);
    Ok((expansion - frame.b * frame.kappa).norm())
}

/// Coordinates of the position vector in the Frenet frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OsculatingDecomposition {
    /// σ·t
    pub xi: f64,
    /// σ·n
    pub mu: f64,
    /// σ·b, zero for an osculating curve
    pub beta: f64,
}

pub fn osculating_decompose(jet: &CurveJet, frame: &FrenetFrame) -> OsculatingDecomposition {
    trace::hit("osculating_decompose");
    OsculatingDecomposition {
        xi: jet.point.dot(&frame.t),
        mu: jet.point.dot(&frame.n),
        beta: jet.point.dot(&frame.b),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OsculatingReport {
    pub osculating: bool,
    pub max_beta: f64,
    pub samples: usize,
    /// Parameters where the frame was undefined, with the reason tag.
    pub skipped: Vec<(f64, &'static str)>,
}

/// Whether σ·b stays below `tol · (1 + |σ|)` at every sample where the
/// Frenet frame exists.
pub fn is_osculating(curve: &SurfaceCurve, tol: f64, n_samples: usize) -> Result<OsculatingReport> {
    trace::hit("is_osculating");
    let mut report = OsculatingReport {
        osculating: true,
        max_beta: 0.0,
        samples: 0,
        skipped: vec![],
    };
    for s in curve.samples(n_samples) {
        let jet = curve_jet(curve, s)?;
        let frame = match frenet(&jet) {
            Ok(f) => f,
            Err(e @ GeomError::VanishingCurvature { .. }) => {
                report.skipped.push((s, e.tag()));
                continue;
            }
            Err(e) => return Err(e),
        };
        let beta = osculating_decompose(&jet, &frame).beta.abs();
        report.samples += 1;
        report.max_beta = report.max_beta.max(beta);
        if beta >= tol * (1.0 + jet.point.norm()) {
            report.osculating = false;
        }
    }
    Ok(report)
}

/// κn = u′²L + 2u′v′M + v′²N.
pub fn normal_curvature(jet: &CurveJet, forms: &FundamentalForms) -> f64 {
    trace::hit("normal_curvature");
    jet.du * jet.du * forms.l + 2.0 * jet.du * jet.dv * forms.m + jet.dv * jet.dv * forms.n
}

/// σ″·N, equal to the quadratic form above for any parameterization.
pub fn normal_curvature_ambient(jet: &CurveJet) -> Result<f64> {
    Ok(jet.accel.dot(&surface_normal(&jet.patch)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub asymptotic: bool,
    pub max_abs_kappa_n: f64,
}

pub fn is_asymptotic(curve: &SurfaceCurve, tol: f64, n_samples: usize) -> Result<AsymptoticReport> {
    trace::hit("is_asymptotic");
    let mut worst: f64 = 0.0;
    for s in curve.samples(n_samples) {
        let jet = curve_jet(curve, s)?;
        let forms = FundamentalForms::from_jet(&jet.patch)?;
        worst = worst.max(normal_curvature(&jet, &forms).abs());
    }
    Ok(AsymptoticReport {
        asymptotic: worst < tol,
        max_abs_kappa_n: worst,
    })
}

/// κg = σ″·(N × σ′).
pub fn geodesic_curvature_def(jet: &CurveJet, normal: &Vec3) -> f64 {
    trace::hit("geodesic_curvature_def");
    jet.accel.dot(&normal.cross(&jet.tangent))
}

/// κg from the metric alone:
/// `[Γ²₁₁u′³ + (2Γ²₁₂ − Γ¹₁₁)u′²v′ + (Γ²₂₂ − 2Γ¹₁₂)u′v′² − Γ¹₂₂v′³ + u′v″ − u″v′] W`.
pub fn geodesic_curvature_intrinsic(jet: &CurveJet, metric: &MetricJet, gamma: &ChristoffelSymbols) -> Result<f64> {
    trace::hit("geodesic_curvature_intrinsic");
    let w = metric.first_form()?.w;
    Ok(geodesic_curvature_bracket(jet.du, jet.dv, jet.ddu, jet.ddv, gamma) * w)
}

/// The bracketed factor of the intrinsic κg formula for arbitrary
/// symbol-like coefficients (also used with the conformal corrections).
pub(crate) fn geodesic_curvature_bracket(du: f64, dv: f64, ddu: f64, ddv: f64, g: &ChristoffelSymbols) -> f64 {
    cubic_form(du, dv, g) + du * ddv - ddu * dv
}

pub(crate) fn cubic_form(du: f64, dv: f64, g: &ChristoffelSymbols) -> f64 {
    g.v_uu * du.powi(3) + (2.0 * g.v_uv - g.u_uu) * du * du * dv + (g.v_vv - 2.0 * g.u_uv) * du * dv * dv
        - g.u_vv * dv.powi(3)
}

/// Normal and geodesic curvature at a sample, each by two routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub kappa_n: f64,
    pub kappa_g: f64,
    pub kappa_n_ambient: f64,
    pub kappa_g_intrinsic: f64,
}

pub fn curvature_sample(curve: &SurfaceCurve, s: f64) -> Result<CurvatureSample> {
    let jet = curve_jet(curve, s)?;
    let forms = FundamentalForms::from_jet(&jet.patch)?;
    let normal = surface_normal(&jet.patch)?;
    let metric = crate::surface::metric_jet(curve.patch(), jet.u, jet.v)?;
    let gamma = christoffel(&metric)?;
    Ok(CurvatureSample {
        kappa_n: normal_curvature(&jet, &forms),
        kappa_g: geodesic_curvature_def(&jet, &normal),
        kappa_n_ambient: normal_curvature_ambient(&jet)?,
        kappa_g_intrinsic: geodesic_curvature_intrinsic(&jet, &metric, &gamma)?,
    })
}
