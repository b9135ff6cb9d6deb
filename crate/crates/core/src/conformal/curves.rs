//! Curve-level identities between a source curve and its image.
//!
//! The image of `σ(s) = Φ(u(s), v(s))` is `σ̃(s) = Φ̃(u(s), v(s))`, still
//! parameterized by the source arc length. The "formal" image quantities
//! below keep the source coefficients ξ, μ/κ and the source parameter
//! derivatives, which is how the component relations are stated.

use serde::Serialize;

use super::{christoffel_correction, dilation_field, tangent_extension, DilationField, SurfaceCorrespondence};
use crate::curve::{
    cubic_form, curve_jet, frenet, geodesic_curvature_bracket, geodesic_curvature_def, image_jet, osculating_decompose, CurveJet, FrenetFrame,
    OsculatingDecomposition, SurfaceCurve, KAPPA_MIN, UNIT_SPEED_TOL,
};
use crate::error::{GeomError, Result};
use crate::surface::{christoffel, metric_jet, second_form, surface_normal};
use crate::{trace, Vec3};

/// Threshold for the boolean sub-verdicts of the normal relation.
pub const SUB_CONDITION_TOL: f64 = 1e-6;

struct Point {
    jet: CurveJet,
    image: CurveJet,
    dil: DilationField,
}

impl Point {
    fn new(corr: &SurfaceCorrespondence, curve: &SurfaceCurve, s: f64) -> Result<Point> {
        let jet = curve_jet(curve, s)?;
        let image = image_jet(&jet, corr.target())?;
        let dil = dilation_field(corr, jet.u, jet.v)?;
        Ok(Point { jet, image, dil })
    }

    fn framed(&self) -> Result<(FrenetFrame, OsculatingDecomposition)> {
        let frame = frenet(&self.jet)?;
        let dec = osculating_decompose(&self.jet, &frame);
        Ok((frame, dec))
    }

    /// ξ(Φ̃u u′ + Φ̃v v′) + (μ/κ)(u″Φ̃u + v″Φ̃v + u′²Φ̃uu + 2u′v′Φ̃uv + v′²Φ̃vv).
    fn formal_image(&self, frame: &FrenetFrame, dec: &OsculatingDecomposition) -> Vec3 {
        self.image.tangent * dec.xi + self.image.accel * (dec.mu / frame.kappa)
    }

    /// Unit binormal of the image curve (independent of parameterization).
    fn image_binormal(&self) -> Result<Vec3> {
        let cross = self.image.tangent.cross(&self.image.accel);
        let speed = self.image.tangent.norm();
        let kappa = cross.norm() / speed.powi(3);
        if !(kappa >= KAPPA_MIN) {
            return Err(GeomError::VanishingCurvature { s: self.jet.s, kappa });
        }
        Ok(cross / cross.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OsculatingImageSample {
    /// |σ̃ − δ G∗(σ)|
    pub lhs_norm: f64,
    /// |(μ/κ) Σ (Φ̃ᵢⱼ − δ G∗Φᵢⱼ) xⁱ′ xʲ′|
    pub rhs_norm: f64,
    /// |lhs − rhs|; zero means the sufficient condition holds.
    pub residual: f64,
    /// σ·b on the source.
    pub source_beta: f64,
    /// σ̃·b̃ on the image.
    pub image_beta: f64,
}

/// Sufficient condition for the image of an osculating curve to be
/// osculating, evaluated as a residual, together with the direct test.
/// `G∗` acts on non-tangent vectors through [`TangentExtension`].
///
/// [`TangentExtension`]: super::TangentExtension
pub fn osculating_image_condition(corr: &SurfaceCorrespondence, curve: &SurfaceCurve, s: f64) -> Result<OsculatingImageSample> {
    trace::hit("osculating_image_condition");
    let p = Point::new(corr, curve, s)?;
    let (frame, dec) = p.framed()?;
    let ext = tangent_extension(corr, p.jet.u, p.jet.v)?;
    let (a, b) = (&p.jet.patch, &p.image.patch);
    let delta = p.dil.delta;
    let lhs = p.image.point - ext.apply(&p.jet.point) * delta;
    let defect = |image: Vec3, source: Vec3| image - ext.apply(&source) * delta;
    let (du, dv) = (p.jet.du, p.jet.dv);
    let rhs = (defect(b.duu, a.duu) * (du * du) + defect(b.duv, a.duv) * (2.0 * du * dv) + defect(b.dvv, a.dvv) * (dv * dv))
        * (dec.mu / frame.kappa);
    Ok(OsculatingImageSample {
        lhs_norm: lhs.norm(),
        rhs_norm: rhs.norm(),
        residual: (lhs - rhs).norm(),
        source_beta: dec.beta,
        image_beta: p.image.point.dot(&p.image_binormal()?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalComponentSample {
    /// σ̃·Ñ − δ²(σ·N) with the actual image point.
    pub lhs: f64,
    /// Same with the formal image point.
    pub lhs_formal: f64,
    /// μ(κ̃n − δ²κn)/κ with κ̃n from the target form and source u′, v′.
    pub rhs: f64,
    /// |lhs − rhs|
    pub residual: f64,
    pub mu: f64,
    pub kappa: f64,
    pub kappa_n: f64,
    /// u′²L̃ + 2u′v′M̃ + v′²Ñ.
    pub kappa_n_image_formal: f64,
    /// Normal curvature of the image curve in its own arc length.
    pub kappa_n_image: f64,
    /// μ vanishes.
    pub mu_vanishes: bool,
    /// κn and κ̃n both vanish.
    pub asymptotic: bool,
    /// κ̃n = δ²κn.
    pub normal_curvature_scaled: bool,
}

pub fn normal_component_relation(corr: &SurfaceCorrespondence, curve: &SurfaceCurve, s: f64) -> Result<NormalComponentSample> {
    trace::hit("normal_component_relation");
    let p = Point::new(corr, curve, s)?;
    let (frame, dec) = p.framed()?;
    let (n, tn) = (surface_normal(&p.jet.patch)?, surface_normal(&p.image.patch)?);
    let d2 = p.dil.delta * p.dil.delta;
    let quad = |l: f64, m: f64, nn: f64| p.jet.du * p.jet.du * l + 2.0 * p.jet.du * p.jet.dv * m + p.jet.dv * p.jet.dv * nn;
    let (sf, tsf) = (second_form(&p.jet.patch)?, second_form(&p.image.patch)?);
    let kappa_n = quad(sf.l, sf.m, sf.n);
    let kappa_n_image_formal = quad(tsf.l, tsf.m, tsf.n);
    let lhs = p.image.point.dot(&tn) - d2 * p.jet.point.dot(&n);
    let lhs_formal = p.formal_image(&frame, &dec).dot(&tn) - d2 * p.jet.point.dot(&n);
    let rhs = dec.mu * (kappa_n_image_formal - d2 * kappa_n) / frame.kappa;
    Ok(NormalComponentSample {
        lhs,
        lhs_formal,
        rhs,
        residual: (lhs - rhs).abs(),
        mu: dec.mu,
        kappa: frame.kappa,
        kappa_n,
        kappa_n_image_formal,
        kappa_n_image: p.image.accel.dot(&tn) / p.image.tangent.norm_squared(),
        mu_vanishes: dec.mu.abs() < SUB_CONDITION_TOL,
        asymptotic: kappa_n.abs() < SUB_CONDITION_TOL && kappa_n_image_formal.abs() < SUB_CONDITION_TOL,
        normal_curvature_scaled: (kappa_n_image_formal - d2 * kappa_n).abs() < SUB_CONDITION_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentialSample {
    pub a: f64,
    pub b: f64,
    /// σ̃·T̃ − δ²(σ·T) with the formal image point.
    pub lhs: f64,
    /// Same with the actual image point.
    pub lhs_actual: f64,
    /// Closed form of the tangential defect in terms of E, F, G and δ.
    pub h: f64,
    /// |lhs − h|
    pub residual: f64,
}

/// Tangential relation along `T = aΦu + bΦv`.
pub fn tangential_component_relation(
    corr: &SurfaceCorrespondence,
    curve: &SurfaceCurve,
    s: f64,
    a: f64,
    b: f64,
) -> Result<TangentialSample> {
    trace::hit("tangential_component_relation");
    let p = Point::new(corr, curve, s)?;
    let (frame, dec) = p.framed()?;
    let t = p.jet.patch.du * a + p.jet.patch.dv * b;
    let tt = p.image.patch.du * a + p.image.patch.dv * b;
    let d = &p.dil;
    let d2 = d.delta * d.delta;
    let formal = p.formal_image(&frame, &dec);
    let lhs = formal.dot(&tt) - d2 * p.jet.point.dot(&t);
    let lhs_actual = p.image.point.dot(&tt) - d2 * p.jet.point.dot(&t);

    let ff = crate::surface::first_form(&p.jet.patch)?;
    let (e, f, g) = (ff.e, ff.f, ff.g);
    let (du, dv) = (p.jet.du, p.jet.dv);
    let (xu, xv) = (d.delta * d.delta_u, d.delta * d.delta_v);
    let along_u = 2.0 * du * du * xu * e + 4.0 * du * dv * xv * e + 4.0 * dv * dv * xv * f - 2.0 * dv * dv * xu * g;
    let along_v = 4.0 * du * du * xu * f - 2.0 * du * du * xv * e + 4.0 * du * dv * xu * g + 2.0 * dv * dv * xv * g;
    let h = dec.mu / (2.0 * frame.kappa) * (a * along_u + b * along_v);
    Ok(TangentialSample {
        a,
        b,
        lhs,
        lhs_actual,
        h,
        residual: (lhs - h).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicCurvatureRelation {
    pub delta: f64,
    /// Intrinsic κg formula with target symbols and W̃ but source u′, v′, u″, v″.
    pub kappa_g_image_formal: f64,
    /// κg of the source curve, σ″·(N × σ′).
    pub kappa_g: f64,
    /// ϑ²₁₁u′³ + (2ϑ²₁₂ − ϑ¹₁₁)u′²v′ + (ϑ²₂₂ − 2ϑ¹₁₂)u′v′² − ϑ¹₂₂v′³.
    pub correction: f64,
    /// W·C, the correction term without the δ² factor.
    pub uncorrected_f: f64,
    /// |κ̃g − δ²κg − δ²W·C|
    pub residual_derived: f64,
    /// |κ̃g − δ²κg − W·C|
    pub residual_uncorrected: f64,
    /// Geodesic curvature of the image curve in its own arc length.
    pub kappa_g_image: f64,
}

pub fn geodesic_curvature_relation(corr: &SurfaceCorrespondence, curve: &SurfaceCurve, s: f64) -> Result<GeodesicCurvatureRelation> {
    trace::hit("geodesic_curvature_relation");
    let p = Point::new(corr, curve, s)?;
    let speed = p.jet.tangent.norm();
    if (speed - 1.0).abs() > UNIT_SPEED_TOL {
        return Err(GeomError::NotUnitSpeed { s, speed });
    }
    let j = &p.jet;
    let m = metric_jet(corr.source(), j.u, j.v)?;
    let tm = metric_jet(corr.target(), j.u, j.v)?;
    let target_gamma = christoffel(&tm)?;
    let w = m.first_form()?.w;
    let tw = tm.first_form()?.w;
    let kappa_g_image_formal = geodesic_curvature_bracket(j.du, j.dv, j.ddu, j.ddv, &target_gamma) * tw;
    let kappa_g = geodesic_curvature_def(j, &surface_normal(&j.patch)?);
    let theta = christoffel_correction(&m, &p.dil)?;
    let correction = cubic_form(j.du, j.dv, &theta);
    let d2 = p.dil.delta * p.dil.delta;
    let tn = surface_normal(&p.image.patch)?;
    let image_speed = p.image.tangent.norm();
    Ok(GeodesicCurvatureRelation {
        delta: p.dil.delta,
        kappa_g_image_formal,
        kappa_g,
        correction,
        uncorrected_f: w * correction,
        residual_derived: (kappa_g_image_formal - d2 * kappa_g - d2 * w * correction).abs(),
        residual_uncorrected: (kappa_g_image_formal - d2 * kappa_g - w * correction).abs(),
        kappa_g_image: p.image.accel.dot(&tn.cross(&p.image.tangent)) / image_speed.powi(3),
    })
}
