use super::{dilation_field, DilationField, SurfaceCorrespondence};
use crate::error::Result;
use crate::surface::{christoffel, metric_jet, surface_frame, ChristoffelSymbols, FirstForm, MetricJet};
use crate::{trace, Vec3};

/// Absolute residuals of the six relations
/// `Ẽ_u = 2δδ_uE + δ²E_u`, … in the order
/// `E_u, E_v, F_u, F_v, G_u, G_v`.
pub fn metric_derivative_relations(corr: &SurfaceCorrespondence, u: f64, v: f64) -> Result<[f64; 6]> {
    trace::hit("metric_derivative_relations");
    let d = dilation_field(corr, u, v)?;
    let m = metric_jet(corr.source(), u, v)?;
    let t = metric_jet(corr.target(), u, v)?;
    let (dl, d2) = (d.delta, d.delta * d.delta);
    let rel = |tilde: f64, coeff: f64, grad: f64, partial: f64| (tilde - (2.0 * dl * grad * coeff + d2 * partial)).abs();
    Ok([
        rel(t.e_u, m.e, d.delta_u, m.e_u),
        rel(t.e_v, m.e, d.delta_v, m.e_v),
        rel(t.f_u, m.f, d.delta_u, m.f_u),
        rel(t.f_v, m.f, d.delta_v, m.f_v),
        rel(t.g_u, m.g, d.delta_u, m.g_u),
        rel(t.g_v, m.g, d.delta_v, m.g_v),
    ])
}

/// Differences `Γ̃ − Γ` predicted from the source metric and δ. Stored in
/// the same layout as [`ChristoffelSymbols`].
pub type ChristoffelCorrection = ChristoffelSymbols;

pub fn christoffel_correction(m: &MetricJet, d: &DilationField) -> Result<ChristoffelCorrection> {
    trace::hit("christoffel_correction");
    let ff = m.first_form()?;
    let (e, f, g) = (ff.e, ff.f, ff.g);
    let (du, dv) = (d.delta_u, d.delta_v);
    let q = d.delta * ff.det();
    Ok(ChristoffelSymbols {
        u_uu: (e * g * du - 2.0 * f * f * du + f * e * dv) / q,
        v_uu: (e * f * du - e * e * dv) / q,
        u_uv: (e * g * dv - f * g * du) / q,
        v_uv: (e * g * du - f * e * dv) / q,
        u_vv: (g * f * dv - g * g * du) / q,
        v_vv: (e * g * dv - 2.0 * f * f * dv + f * g * du) / q,
    })
}

/// Largest |Γ̃ − (Γ + ϑ)| over the six symbols, with Γ̃ computed directly
/// from the target metric.
pub fn conformal_christoffel_check(corr: &SurfaceCorrespondence, u: f64, v: f64) -> Result<f64> {
    trace::hit("conformal_christoffel_check");
    let d = dilation_field(corr, u, v)?;
    let m = metric_jet(corr.source(), u, v)?;
    let direct = christoffel(&metric_jet(corr.target(), u, v)?)?.as_array();
    let base = christoffel(&m)?.as_array();
    let corr_terms = christoffel_correction(&m, &d)?.as_array();
    Ok((0..6)
        .map(|i| (direct[i] - (base[i] + corr_terms[i])).abs())
        .fold(0.0, f64::max))
}

/// Linear map on ambient vectors at a point sending `Φu ↦ Φ̃u/δ`,
/// `Φv ↦ Φ̃v/δ` and `N ↦ Ñ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentExtension {
    pub delta: f64,
    du: Vec3,
    dv: Vec3,
    normal: Vec3,
    first: FirstForm,
    image_du: Vec3,
    image_dv: Vec3,
    image_normal: Vec3,
}

impl TangentExtension {
    pub fn apply(&self, x: &Vec3) -> Vec3 {
        let a = x.dot(&self.normal);
        let (p, q) = (x.dot(&self.du), x.dot(&self.dv));
        // solve the Gram system for the tangential coordinates
        let det = self.first.det();
        let alpha = (self.first.g * p - self.first.f * q) / det;
        let beta = (self.first.e * q - self.first.f * p) / det;
        (self.image_du * alpha + self.image_dv * beta) / self.delta + self.image_normal * a
    }
}

pub fn tangent_extension(corr: &SurfaceCorrespondence, u: f64, v: f64) -> Result<TangentExtension> {
    let d = dilation_field(corr, u, v)?;
    let (a, b) = (corr.source().eval_jet(u, v)?, corr.target().eval_jet(u, v)?);
    let (fa, fb) = (surface_frame(&a)?, surface_frame(&b)?);
    Ok(TangentExtension {
        delta: d.delta,
        du: fa.du,
        dv: fa.dv,
        normal: fa.normal,
        first: crate::surface::first_form(&a)?,
        image_du: fb.du,
        image_dv: fb.dv,
        image_normal: fb.normal,
    })
}

pub fn pushforward_extend(corr: &SurfaceCorrespondence, u: f64, v: f64, x: &Vec3) -> Result<Vec3> {
    Ok(tangent_extension(corr, u, v)?.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::grid_points;

    fn cat(id: &str, p: &[f64]) -> SurfaceCorrespondence {
        SurfaceCorrespondence::from_catalog(id, p, None).unwrap()
    }

    fn sphere_scaled() -> SurfaceCorrespondence {
        let s = crate::surface::SurfacePatch::from_catalog("sphere", &[]).unwrap();
        SurfaceCorrespondence::from_catalog("scale", &[2.0], Some(s)).unwrap()
    }

    #[test]
    fn metric_relations_examples() {
        let r = metric_derivative_relations(&sphere_scaled(), 0.7, 0.2).unwrap();
        assert!(r.iter().all(|x| *x < 1e-14));
        let ep = cat("exp-plane", &[]);
        let r = metric_derivative_relations(&ep, 0.0, 0.0).unwrap();
        assert!(r.iter().all(|x| *x < 1e-14));
        let st = cat("sphere-stereographic", &[]);
        for (u, v) in grid_points(&st.source().domain(), 5, 5, 0.1) {
            assert!(metric_derivative_relations(&st, u, v).unwrap().iter().all(|x| *x < 1e-6));
        }
    }

    #[test]
    fn correction_examples() {
        let ep = cat("exp-plane", &[]);
        for (u, v) in [(0.0, 0.0), (1.0, -2.0), (-1.5, 0.5)] {
            let d = dilation_field(&ep, u, v).unwrap();
            let m = metric_jet(ep.source(), u, v).unwrap();
            let t = christoffel_correction(&m, &d).unwrap();
            let want = [1.0, 0.0, 0.0, 1.0, -1.0, 0.0];
            for (got, want) in t.as_array().iter().zip(want) {
                assert!((got - want).abs() < 1e-14);
            }
        }
        let st = cat("sphere-stereographic", &[]);
        let d = dilation_field(&st, 1.0, 0.0).unwrap();
        let m = metric_jet(st.source(), 1.0, 0.0).unwrap();
        // on the sphere side E = G = 4/w², so ϑ¹₁₁ = δ_u/δ = 2p/w
        assert!((christoffel_correction(&m, &d).unwrap().u_uu - 1.0).abs() < 1e-14);

        let h = sphere_scaled();
        let d = dilation_field(&h, 1.0, 0.3).unwrap();
        let m = metric_jet(h.source(), 1.0, 0.3).unwrap();
        assert!(christoffel_correction(&m, &d).unwrap().as_array().iter().all(|x| *x == 0.0));
    }

    #[test]
    fn christoffel_check_examples() {
        assert!(conformal_christoffel_check(&sphere_scaled(), 1.1, 0.4).unwrap() < 1e-9);
        for c in [cat("exp-plane", &[]), cat("sphere-stereographic", &[])] {
            for (u, v) in grid_points(&c.source().domain(), 5, 5, 0.1) {
                assert!(conformal_christoffel_check(&c, u, v).unwrap() < 1e-6);
            }
        }
    }

    #[test]
    fn extension_examples() {
        let id = cat("identity", &[]);
        let x = Vec3::new(0.3, -2.0, 1.5);
        assert!((pushforward_extend(&id, 0.1, 0.2, &x).unwrap() - x).norm() < 1e-15);
        let sp = cat("scale", &[2.0]);
        let e = pushforward_extend(&sp, 0.1, 0.2, &Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!((e - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        let ep = cat("exp-plane", &[]);
        let n = pushforward_extend(&ep, 0.0, 0.0, &Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert!((n - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn extension_scales_tangents_by_inverse_dilation() {
        let st = cat("sphere-stereographic", &[]);
        let ext = tangent_extension(&st, 0.4, -0.9).unwrap();
        let (a, b) = (st.source().eval_jet(0.4, -0.9).unwrap(), st.target().eval_jet(0.4, -0.9).unwrap());
        let x = a.du * 0.3 - a.dv * 1.7;
        let pushed = b.du * 0.3 - b.dv * 1.7;
        assert!((ext.apply(&x) * ext.delta - pushed).norm() < 1e-13);
        let n = surface_frame(&a).unwrap().normal;
        assert!((ext.apply(&n).norm() - 1.0).abs() < 1e-14);
    }
}
