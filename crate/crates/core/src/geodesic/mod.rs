//! Geodesics from the intrinsic second-order system, their residuals, and
//! the corrected system on the conformal image.

use serde::{Deserialize, Serialize};

use crate::conformal::{
    christoffel_correction, classify_map, dilation_field, DilationField, SurfaceCorrespondence,
};
use crate::curve::{curve_jet, CurveJet, SurfaceCurve};
use crate::error::{GeomError, Result};
use crate::surface::{christoffel, grid_points, metric_jet, ChristoffelSymbols, MetricJet, SurfacePatch};
use crate::trace;

/// Tolerance on the metric speed of an initial state.
pub const INITIAL_SPEED_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub u: f64,
    pub v: f64,
    pub du: f64,
    pub dv: f64,
}

impl GeodesicState {
    pub fn new(u: f64, v: f64, du: f64, dv: f64) -> GeodesicState {
        GeodesicState { u, v, du, dv }
    }

    /// √(E u′² + 2F u′v′ + G v′²) at the state's own point.
    pub fn metric_speed(&self, patch: &SurfacePatch) -> Result<f64> {
        let m = metric_jet(patch, self.u, self.v)?;
        Ok((m.e * self.du * self.du + 2.0 * m.f * self.du * self.dv + m.g * self.dv * self.dv).sqrt())
    }

    /// The same direction rescaled to unit metric speed.
    pub fn normalized(&self, patch: &SurfacePatch) -> Result<GeodesicState> {
        let speed = self.metric_speed(patch)?;
        if !(speed > 0.0) {
            return Err(GeomError::NonUnitInitialSpeed { speed });
        }
        Ok(GeodesicState {
            du: self.du / speed,
            dv: self.dv / speed,
            ..*self
        })
    }

    fn axpy(&self, h: f64, k: &[f64; 4]) -> GeodesicState {
        GeodesicState {
            u: self.u + h * k[0],
            v: self.v + h * k[1],
            du: self.du + h * k[2],
            dv: self.dv + h * k[3],
        }
    }

    fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite() && self.du.is_finite() && self.dv.is_finite()
    }
}

/// Fixed-step classical Runge–Kutta settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            step: 1e-3,
            max_steps: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Termination {
    LengthReached,
    DomainExit,
    StepFailure { detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicSample {
    pub s: f64,
    pub state: GeodesicState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicPath {
    pub samples: Vec<GeodesicSample>,
    /// Arc length actually covered.
    pub length: f64,
    pub step: f64,
    pub termination: Termination,
}

/// `(u″, v″) = −(Γ¹ᵢⱼ xⁱ′xʲ′, Γ²ᵢⱼ xⁱ′xʲ′)`.
pub fn geodesic_rhs(gamma: &ChristoffelSymbols, state: &GeodesicState) -> (f64, f64) {
    trace::hit("geodesic_rhs");
    let (a, b) = gamma.contract(state.du, state.dv);
    (-a, -b)
}

fn derivative(patch: &SurfacePatch, x: &GeodesicState) -> Result<[f64; 4]> {
    let gamma = christoffel(&metric_jet(patch, x.u, x.v)?)?;
    let (ddu, ddv) = geodesic_rhs(&gamma, x);
    Ok([x.du, x.dv, ddu, ddv])
}

fn rk4_step(patch: &SurfacePatch, x: &GeodesicState, h: f64) -> Result<GeodesicState> {
    let k1 = derivative(patch, x)?;
    let k2 = derivative(patch, &x.axpy(0.5 * h, &k1))?;
    let k3 = derivative(patch, &x.axpy(0.5 * h, &k2))?;
    let k4 = derivative(patch, &x.axpy(h, &k3))?;
    let k: [f64; 4] = std::array::from_fn(|i| (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0);
    Ok(x.axpy(h, &k))
}

/// Integrate from a unit-speed state over `length`. The step is shrunk
/// slightly so an integer number of equal steps lands on `length`.
/// Leaving the chart ends the path early with [`Termination::DomainExit`].
pub fn integrate_geodesic(
    patch: &SurfacePatch,
    initial: &GeodesicState,
    length: f64,
    config: &IntegratorConfig,
) -> Result<GeodesicPath> {
    trace::hit("integrate_geodesic");
    if !(config.step > 0.0) || config.max_steps == 0 {
        return Err(GeomError::InvalidConfig(format!(
            "integrator needs step > 0 and max_steps ≥ 1 (got {}, {})",
            config.step, config.max_steps
        )));
    }
    if !(length >= 0.0) {
        return Err(GeomError::InvalidConfig(format!("geodesic length must be non-negative, got {length}")));
    }
    let speed = initial.metric_speed(patch)?;
    if (speed - 1.0).abs() > INITIAL_SPEED_TOL {
        return Err(GeomError::NonUnitInitialSpeed { speed });
    }
    let n = ((length / config.step) - 1e-9).ceil().max(1.0) as usize;
    let h = length / n as f64;
    let mut samples = vec![GeodesicSample { s: 0.0, state: *initial }];
    let mut state = *initial;
    let mut termination = Termination::LengthReached;
    for i in 1..=n {
        if i > config.max_steps {
            termination = Termination::StepFailure {
                detail: format!("step limit {} reached", config.max_steps),
            };
            break;
        }
        match rk4_step(patch, &state, h) {
            Ok(next) if next.is_finite() && patch.check_point(next.u, next.v).is_ok() => {
                state = next;
                samples.push(GeodesicSample { s: i as f64 * h, state });
            }
            Ok(next) if next.is_finite() => {
                termination = Termination::DomainExit;
                break;
            }
            Ok(_) => {
                termination = Termination::StepFailure {
                    detail: "non-finite state".into(),
                };
                break;
            }
            Err(GeomError::PointOutsideDomain { .. }) => {
                termination = Termination::DomainExit;
                break;
            }
            Err(e) => {
                termination = Termination::StepFailure { detail: e.tag().into() };
                break;
            }
        }
    }
    Ok(GeodesicPath {
        length: samples.last().map_or(0.0, |x| x.s),
        samples,
        step: h,
        termination,
    })
}

/// Left-hand sides of the geodesic system on a curve jet.
pub fn geodesic_residual_at(patch: &SurfacePatch, jet: &CurveJet) -> Result<(f64, f64)> {
    let gamma = christoffel(&metric_jet(patch, jet.u, jet.v)?)?;
    let (a, b) = gamma.contract(jet.du, jet.dv);
    Ok((jet.ddu + a, jet.ddv + b))
}

pub fn geodesic_residual(curve: &SurfaceCurve, s: f64) -> Result<(f64, f64)> {
    trace::hit("geodesic_residual");
    geodesic_residual_at(curve.patch(), &curve_jet(curve, s)?)
}

/// Geodesic residuals `(s, r₁, r₂)` along a sampled path, with (u″, v″)
/// from fourth-order differences of the stored velocities (second order
/// when the path has fewer than five samples). `patch` may be a different
/// surface over the same domain (the image of the path).
pub fn path_residuals(patch: &SurfacePatch, path: &GeodesicPath) -> Result<Vec<(f64, f64, f64)>> {
    trace::hit("geodesic_residual");
    let xs = &path.samples;
    let n = xs.len();
    if n < 3 {
        return Ok(vec![]);
    }
    let du: Vec<f64> = xs.iter().map(|x| x.state.du).collect();
    let dv: Vec<f64> = xs.iter().map(|x| x.state.dv).collect();
    let (ddu, ddv) = (differentiate(&du, path.step), differentiate(&dv, path.step));
    let mut out = Vec::with_capacity(n);
    for (i, x) in xs.iter().enumerate() {
        let gamma = christoffel(&metric_jet(patch, x.state.u, x.state.v)?)?;
        let (a, b) = gamma.contract(x.state.du, x.state.dv);
        out.push((x.s, ddu[i] + a, ddv[i] + b));
    }
    Ok(out)
}

/// Derivative of equally spaced samples.
fn differentiate(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    if n < 5 {
        return (0..n)
            .map(|i| match i {
                0 => (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h),
                _ if i == n - 1 => (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h),
                _ => (f[i + 1] - f[i - 1]) / (2.0 * h),
            })
            .collect();
    }
    let forward = |g: &dyn Fn(usize) -> f64, first: bool| {
        if first {
            (-25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) / (12.0 * h)
        } else {
            (-3.0 * g(0) - 10.0 * g(1) + 18.0 * g(2) - 6.0 * g(3) + g(4)) / (12.0 * h)
        }
    };
    (0..n)
        .map(|i| {
            if i < 2 {
                forward(&|k| f[k], i == 0)
            } else if i + 2 >= n {
                // mirror the forward stencils: reversing the samples flips the sign
                -forward(&|k| f[n - 1 - k], i == n - 1)
            } else {
                (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h)
            }
        })
        .collect()
}

/// Coordinates `(a, b)` of a field `X = aΦu + bΦv` along a curve and their
/// derivatives in the curve parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub a: f64,
    pub b: f64,
    pub da: f64,
    pub db: f64,
}

/// The unit tangent of a unit-speed curve as a field along it.
pub fn tangent_field(jet: &CurveJet) -> FieldSample {
    FieldSample {
        a: jet.du,
        b: jet.dv,
        da: jet.ddu,
        db: jet.ddv,
    }
}

/// Metric norm of the covariant derivative `DX/ds`; zero exactly when the
/// field is parallel at `s`.
pub fn covariant_derivative_defect(
    curve: &SurfaceCurve,
    field: &dyn Fn(&CurveJet) -> FieldSample,
    s: f64,
) -> Result<f64> {
    trace::hit("covariant_derivative_defect");
    let jet = curve_jet(curve, s)?;
    let m = metric_jet(curve.patch(), jet.u, jet.v)?;
    let gamma = christoffel(&m)?;
    let x = field(&jet);
    let (ga, gb) = gamma.bilinear((jet.du, jet.dv), (x.a, x.b));
    let (p, q) = (x.da + ga, x.db + gb);
    let ff = m.first_form()?;
    Ok(ff.inner((p, q), (p, q)).max(0.0).sqrt())
}

/// Extra terms of the geodesic system written with source symbols on the
/// conformal image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConformalGeodesicTerms {
    pub f1: f64,
    pub f2: f64,
}

pub fn conformal_geodesic_terms(m: &MetricJet, d: &DilationField, state: &GeodesicState) -> Result<ConformalGeodesicTerms> {
    trace::hit("conformal_geodesic_terms");
    let theta = christoffel_correction(m, d)?;
    let (f1, f2) = theta.contract(state.du, state.dv);
    Ok(ConformalGeodesicTerms { f1, f2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConformalGeodesicResidual {
    /// u″ + Γ¹ᵢⱼxⁱ′xʲ′ + f₁ and the v counterpart (source symbols).
    pub r1: f64,
    pub r2: f64,
    /// The plain geodesic residuals with the target's own symbols.
    pub target_r1: f64,
    pub target_r2: f64,
}

impl ConformalGeodesicResidual {
    pub fn gap(&self) -> f64 {
        (self.r1 - self.target_r1).abs().max((self.r2 - self.target_r2).abs())
    }
}

pub fn conformal_geodesic_residual(corr: &SurfaceCorrespondence, curve: &SurfaceCurve, s: f64) -> Result<ConformalGeodesicResidual> {
    trace::hit("conformal_geodesic_residual");
    let jet = curve_jet(curve, s)?;
    let d = dilation_field(corr, jet.u, jet.v)?;
    let m = metric_jet(corr.source(), jet.u, jet.v)?;
    let gamma = christoffel(&m)?;
    let state = GeodesicState::new(jet.u, jet.v, jet.du, jet.dv);
    let f = conformal_geodesic_terms(&m, &d, &state)?;
    let (a, b) = gamma.contract(jet.du, jet.dv);
    let (ta, tb) = geodesic_residual_at(corr.target(), &jet)?;
    Ok(ConformalGeodesicResidual {
        r1: jet.ddu + a + f.f1,
        r2: jet.ddv + b + f.f2,
        target_r1: ta,
        target_r2: tb,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub max_residual: f64,
    pub samples: usize,
    pub termination: Termination,
}

/// Integrate a geodesic on the source and measure the target geodesic
/// residual of the image path under the same parameters. Only defined for
/// isometries and homotheties.
pub fn homothety_invariance_check(
    corr: &SurfaceCorrespondence,
    initial: &GeodesicState,
    length: f64,
    config: &IntegratorConfig,
) -> Result<InvarianceReport> {
    trace::hit("homothety_invariance_check");
    let domain = corr.source().domain();
    let inset = 0.05 * (domain.u.1 - domain.u.0).min(domain.v.1 - domain.v.0);
    let class = classify_map(corr, &grid_points(&domain, 5, 5, inset))?.class;
    if !class.is_similarity() {
        return Err(GeomError::WrongMapClass { class: class.to_string() });
    }
    let path = integrate_geodesic(corr.source(), initial, length, config)?;
    let residuals = path_residuals(corr.target(), &path)?;
    Ok(InvarianceReport {
        max_residual: residuals.iter().map(|r| r.1.abs().max(r.2.abs())).fold(0.0, f64::max),
        samples: residuals.len(),
        termination: path.termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurvePath;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2, TAU};
    use std::sync::Arc;

    fn patch(id: &str) -> SurfacePatch {
        SurfacePatch::from_catalog(id, &[]).unwrap()
    }

    fn gamma_at(id: &str, u: f64, v: f64) -> ChristoffelSymbols {
        christoffel(&metric_jet(&patch(id), u, v).unwrap()).unwrap()
    }

    #[test]
    fn differences_are_exact_on_quartics() {
        let h = 0.1;
        let f: Vec<f64> = (0..9).map(|i| (i as f64 * h).powi(4)).collect();
        for (i, d) in differentiate(&f, h).iter().enumerate() {
            let x = i as f64 * h;
            assert!((d - 4.0 * x.powi(3)).abs() < 1e-12, "{i}: {d}");
        }
        let g = [1.0, 4.0, 9.0];
        assert_eq!(differentiate(&g, 1.0), vec![2.0, 4.0, 6.0]);
    }

    #[test]
    fn rhs_examples() {
        let st = GeodesicState::new(0.1, 0.2, 0.6, 0.8);
        assert_eq!(geodesic_rhs(&gamma_at("plane", 0.1, 0.2), &st), (0.0, 0.0));
        let eq = GeodesicState::new(FRAC_PI_2, 0.0, 0.0, 1.0);
        let (a, b) = geodesic_rhs(&gamma_at("sphere", FRAC_PI_2, 0.0), &eq);
        assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
        let lat = GeodesicState::new(FRAC_PI_4, 0.0, 0.0, SQRT_2);
        let (a, b) = geodesic_rhs(&gamma_at("sphere", FRAC_PI_4, 0.0), &lat);
        assert!((a - 1.0).abs() < 1e-14 && b.abs() < 1e-15);
    }

    #[test]
    fn straight_line_in_plane() {
        let p = patch("plane");
        let path = integrate_geodesic(&p, &GeodesicState::new(0.0, 0.0, 1.0, 0.0), 1.0, &IntegratorConfig::default()).unwrap();
        let end = path.samples.last().unwrap().state;
        assert!((end.u - 1.0).abs() < 1e-10 && end.v.abs() < 1e-10);
        assert_eq!(path.termination, Termination::LengthReached);
    }

    #[test]
    fn equator_closes() {
        let p = patch("sphere");
        let path = integrate_geodesic(&p, &GeodesicState::new(FRAC_PI_2, 0.0, 0.0, 1.0), TAU, &IntegratorConfig::default()).unwrap();
        let end = path.samples.last().unwrap().state;
        assert!((p.point(end.u, end.v) - p.point(FRAC_PI_2, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn oblique_geodesic_stays_on_a_great_circle() {
        let p = patch("sphere");
        let start = GeodesicState::new(FRAC_PI_2, 0.0, 0.6, 0.8).normalized(&p).unwrap();
        let path = integrate_geodesic(&p, &start, 5.0, &IntegratorConfig::default()).unwrap();
        let (a, b) = (&path.samples[0].state, &path.samples[1].state);
        let normal = p.point(a.u, a.v).cross(&p.point(b.u, b.v)).normalize();
        for x in &path.samples {
            let q = p.point(x.state.u, x.state.v);
            assert!(q.dot(&normal).abs() < 1e-6);
            assert!((x.state.metric_speed(&p).unwrap() - 1.0).abs() < 1e-9);
        }
        let worst = path_residuals(&p, &path).unwrap().iter().map(|r| r.1.abs().max(r.2.abs())).fold(0.0, f64::max);
        assert!(worst < 1e-5);
    }

    #[test]
    fn domain_exit_and_bad_input() {
        let p = patch("plane");
        let path = integrate_geodesic(&p, &GeodesicState::new(2.5, 0.0, 1.0, 0.0), 2.0, &IntegratorConfig::default()).unwrap();
        assert_eq!(path.termination, Termination::DomainExit);
        assert!(path.length < 0.5 + 1e-9 && path.length > 0.49);
        assert!(matches!(
            integrate_geodesic(&p, &GeodesicState::new(0.0, 0.0, 2.0, 0.0), 1.0, &IntegratorConfig::default()),
            Err(GeomError::NonUnitInitialSpeed { .. })
        ));
        let cfg = IntegratorConfig { step: 0.1, max_steps: 3 };
        let path = integrate_geodesic(&p, &GeodesicState::new(0.0, 0.0, 1.0, 0.0), 1.0, &cfg).unwrap();
        assert!(matches!(path.termination, Termination::StepFailure { .. }));
        assert_eq!(path.samples.len(), 4);
    }

    #[test]
    fn curve_residual_examples() {
        let s = Arc::new(patch("sphere"));
        let eq = SurfaceCurve::new(s.clone(), CurvePath::ParameterLineV { u0: FRAC_PI_2, v0: 0.0 }, (0.0, 3.0));
        let (a, b) = geodesic_residual(&eq, 1.0).unwrap();
        assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
        let lat = SurfaceCurve::new(s, CurvePath::Latitude { u0: FRAC_PI_4, radius: 1.0 }, (0.0, 3.0));
        let (a, b) = geodesic_residual(&lat, 1.0).unwrap();
        assert!((a + 1.0).abs() < 1e-14 && b.abs() < 1e-14);
    }

    #[test]
    fn covariant_defect_examples() {
        let plane = Arc::new(patch("plane"));
        let line = SurfaceCurve::new(plane, CurvePath::Line { u0: 0.0, v0: 0.0, du: 0.6, dv: 0.8 }, (0.0, 1.0));
        let constant = |_: &CurveJet| FieldSample { a: 1.0, b: 2.0, da: 0.0, db: 0.0 };
        assert_eq!(covariant_derivative_defect(&line, &constant, 0.5).unwrap(), 0.0);

        let s = Arc::new(patch("sphere"));
        let eq = SurfaceCurve::new(s.clone(), CurvePath::ParameterLineV { u0: FRAC_PI_2, v0: 0.0 }, (0.0, 3.0));
        assert!(covariant_derivative_defect(&eq, &tangent_field, 1.0).unwrap() < 1e-15);
        let lat = SurfaceCurve::new(s, CurvePath::Latitude { u0: FRAC_PI_4, radius: 1.0 }, (0.0, 3.0));
        for t in lat.samples(7) {
            assert!((covariant_derivative_defect(&lat, &tangent_field, t).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn conformal_terms_examples() {
        let ep = SurfaceCorrespondence::from_catalog("exp-plane", &[], None).unwrap();
        let d = dilation_field(&ep, 0.3, 0.1).unwrap();
        let m = metric_jet(ep.source(), 0.3, 0.1).unwrap();
        let f = conformal_geodesic_terms(&m, &d, &GeodesicState::new(0.3, 0.1, 1.0, 0.0)).unwrap();
        assert!((f.f1 - 1.0).abs() < 1e-14 && f.f2.abs() < 1e-14);
        let f = conformal_geodesic_terms(&m, &d, &GeodesicState::new(0.3, 0.1, 0.0, 1.0)).unwrap();
        assert!((f.f1 + 1.0).abs() < 1e-14 && f.f2.abs() < 1e-14);

        let h = SurfaceCorrespondence::from_catalog("scale", &[3.0], None).unwrap();
        let d = dilation_field(&h, 0.3, 0.1).unwrap();
        let m = metric_jet(h.source(), 0.3, 0.1).unwrap();
        let f = conformal_geodesic_terms(&m, &d, &GeodesicState::new(0.3, 0.1, 0.6, 0.8)).unwrap();
        assert_eq!((f.f1, f.f2), (0.0, 0.0));
    }

    #[test]
    fn conformal_residual_matches_target_system() {
        let ep = SurfaceCorrespondence::from_catalog("exp-plane", &[], None).unwrap();
        let line = SurfaceCurve::new(ep.source().clone(), CurvePath::ParameterLineU { u0: 0.0, v0: 0.0 }, (-1.0, 1.0));
        for s in line.samples(11) {
            let r = conformal_geodesic_residual(&ep, &line, s).unwrap();
            assert!(r.gap() < 1e-12);
            // on the target, u″ + Γ̃¹₁₁ = 0 + 1
            assert!((r.target_r1 - 1.0).abs() < 1e-12 && r.target_r2.abs() < 1e-12);
        }
        let id = SurfaceCorrespondence::from_catalog("identity", &[], Some(patch("sphere"))).unwrap();
        let lat = SurfaceCurve::new(id.source().clone(), CurvePath::Latitude { u0: 1.0, radius: 1.0 }, (0.0, 3.0));
        let r = conformal_geodesic_residual(&id, &lat, 0.5).unwrap();
        let plain = geodesic_residual(&lat, 0.5).unwrap();
        assert_eq!((r.r1, r.r2), plain);
    }

    #[test]
    fn invariance_examples() {
        let cfg = IntegratorConfig::default();
        let hs = SurfaceCorrespondence::from_catalog("scale", &[2.0], Some(patch("sphere"))).unwrap();
        let r = homothety_invariance_check(&hs, &GeodesicState::new(FRAC_PI_2, 0.0, 0.0, 1.0), TAU, &cfg).unwrap();
        assert!(r.max_residual < 1e-6);

        let hc = SurfaceCorrespondence::from_catalog("helicoid-catenoid", &[], None).unwrap();
        let start = GeodesicState::new(0.2, -0.3, 0.7, 0.4).normalized(hc.source()).unwrap();
        let r = homothety_invariance_check(&hc, &start, 2.0, &cfg).unwrap();
        assert!(r.max_residual < 1e-5 && r.termination == Termination::LengthReached);

        let ep = SurfaceCorrespondence::from_catalog("exp-plane", &[], None).unwrap();
        assert!(matches!(
            homothety_invariance_check(&ep, &GeodesicState::new(0.0, 0.0, 1.0, 0.0), 1.0, &cfg),
            Err(GeomError::WrongMapClass { .. })
        ));
    }
}
