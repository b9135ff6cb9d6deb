use super::{fd_step_first, DiffMode, PatchJet, SurfacePatch, REGULARITY_EPS};
use crate::error::{GeomError, Result};
use crate::trace;
use crate::Vec3;

/// Relative threshold below which EG - F² is treated as degenerate.
pub const METRIC_DEGENERACY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// √(EG − F²)
    pub w: f64,
}

impl FirstForm {
    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    /// g(x, y) for coefficient pairs in the (Φu, Φv) basis.
    pub fn inner(&self, x: (f64, f64), y: (f64, f64)) -> f64 {
        self.e * x.0 * y.0 + self.f * (x.0 * y.1 + x.1 * y.0) + self.g * x.1 * y.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondForm {
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub w: f64,
}

impl FundamentalForms {
    pub fn from_jet(jet: &PatchJet) -> Result<FundamentalForms> {
        let ff = first_form(jet)?;
        let sf = second_form(jet)?;
        Ok(FundamentalForms {
            e: ff.e,
            f: ff.f,
            g: ff.g,
            l: sf.l,
            m: sf.m,
            n: sf.n,
            w: ff.w,
        })
    }

    pub fn first(&self) -> FirstForm {
        FirstForm {
            e: self.e,
            f: self.f,
            g: self.g,
            w: self.w,
        }
    }

    pub fn second(&self) -> SecondForm {
        SecondForm {
            l: self.l,
            m: self.m,
            n: self.n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceFrame {
    pub du: Vec3,
    pub dv: Vec3,
    pub normal: Vec3,
}

fn check_metric(u: f64, v: f64, e: f64, f: f64, g: f64) -> Result<f64> {
    let det = e * g - f * f;
    let scale = (e + g) * (e + g);
    if !(det > METRIC_DEGENERACY * scale) || !(e > 0.0) || !(g > 0.0) {
        return Err(GeomError::DegenerateMetric { u, v, det });
    }
    Ok(det)
}

pub fn first_form(jet: &PatchJet) -> Result<FirstForm> {
    trace::hit("first_form");
    let e = jet.du.dot(&jet.du);
    let f = jet.du.dot(&jet.dv);
    let g = jet.dv.dot(&jet.dv);
    let det = check_metric(jet.u, jet.v, e, f, g)?;
    Ok(FirstForm { e, f, g, w: det.sqrt() })
}

/// Unit normal `(Φu × Φv) / |Φu × Φv|`. Every signed curvature in the
/// crate uses this orientation.
pub fn surface_normal(jet: &PatchJet) -> Result<Vec3> {
    trace::hit("surface_normal");
    let a = jet.area_vector();
    let norm = a.norm();
    if !(norm > REGULARITY_EPS) {
        return Err(GeomError::DegeneratePatch {
            u: jet.u,
            v: jet.v,
            norm,
        });
    }
    Ok(a / norm)
}

pub fn surface_frame(jet: &PatchJet) -> Result<SurfaceFrame> {
    Ok(SurfaceFrame {
        du: jet.du,
        dv: jet.dv,
        normal: surface_normal(jet)?,
    })
}

/// L = Φuu·N, M = Φuv·N, N = Φvv·N.
pub fn second_form(jet: &PatchJet) -> Result<SecondForm> {
    trace::hit("second_form");
    let nrm = surface_normal(jet)?;
    Ok(SecondForm {
        l: jet.duu.dot(&nrm),
        m: jet.duv.dot(&nrm),
        n: jet.dvv.dot(&nrm),
    })
}

/// First fundamental form with its first partials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet {
    pub u: f64,
    pub v: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub e_u: f64,
    pub e_v: f64,
    pub f_u: f64,
    pub f_v: f64,
    pub g_u: f64,
    pub g_v: f64,
}

impl MetricJet {
    /// Metric partials composed from second partials of the patch.
    pub fn from_jet(jet: &PatchJet) -> MetricJet {
        MetricJet {
            u: jet.u,
            v: jet.v,
            e: jet.du.dot(&jet.du),
            f: jet.du.dot(&jet.dv),
            g: jet.dv.dot(&jet.dv),
            e_u: 2.0 * jet.duu.dot(&jet.du),
            e_v: 2.0 * jet.duv.dot(&jet.du),
            f_u: jet.duu.dot(&jet.dv) + jet.du.dot(&jet.duv),
            f_v: jet.duv.dot(&jet.dv) + jet.du.dot(&jet.dvv),
            g_u: 2.0 * jet.duv.dot(&jet.dv),
            g_v: 2.0 * jet.dvv.dot(&jet.dv),
        }
    }

    pub fn first_form(&self) -> Result<FirstForm> {
        let det = check_metric(self.u, self.v, self.e, self.f, self.g)?;
        Ok(FirstForm {
            e: self.e,
            f: self.f,
            g: self.g,
            w: det.sqrt(),
        })
    }

    pub fn partials(&self) -> [f64; 6] {
        [self.e_u, self.e_v, self.f_u, self.f_v, self.g_u, self.g_v]
    }
}

pub fn metric_jet(patch: &SurfacePatch, u: f64, v: f64) -> Result<MetricJet> {
    trace::hit("metric_jet");
    let jet = patch.eval_jet(u, v)?;
    match patch.mode() {
        DiffMode::Analytic => Ok(MetricJet::from_jet(&jet)),
        DiffMode::FiniteDifference => {
            let efg = |u: f64, v: f64| -> Result<[f64; 3]> {
                let j = patch.eval_jet(u, v)?;
                Ok([j.du.dot(&j.du), j.du.dot(&j.dv), j.dv.dot(&j.dv)])
            };
            let (hu, hv) = (fd_step_first(u), fd_step_first(v));
            let (up, um) = (efg(u + hu, v)?, efg(u - hu, v)?);
            let (vp, vm) = (efg(u, v + hv)?, efg(u, v - hv)?);
            let du = |i: usize| (up[i] - um[i]) / (2.0 * hu);
            let dv = |i: usize| (vp[i] - vm[i]) / (2.0 * hv);
            Ok(MetricJet {
                u,
                v,
                e: jet.du.dot(&jet.du),
                f: jet.du.dot(&jet.dv),
                g: jet.dv.dot(&jet.dv),
                e_u: du(0),
                e_v: dv(0),
                f_u: du(1),
                f_v: dv(1),
                g_u: du(2),
                g_v: dv(2),
            })
        }
    }
}

/// Metric partials by fourth-order central differences of E, F and G,
/// which use only first partials of the patch. Independent of the second
/// partials, so it can check identities that [`metric_jet`] satisfies by
/// construction.
pub fn metric_jet_by_differences(patch: &SurfacePatch, u: f64, v: f64) -> Result<MetricJet> {
    let efg = |u: f64, v: f64| -> Result<[f64; 3]> {
        let j = patch.eval_jet(u, v)?;
        Ok([j.du.dot(&j.du), j.du.dot(&j.dv), j.dv.dot(&j.dv)])
    };
    let centre = efg(u, v)?;
    let (hu, hv) = (1e-3 * u.abs().max(1.0), 1e-3 * v.abs().max(1.0));
    let stencil = |f: &dyn Fn(f64) -> Result<[f64; 3]>, h: f64| -> Result<[f64; 3]> {
        let (m2, m1, p1, p2) = (f(-2.0 * h)?, f(-h)?, f(h)?, f(2.0 * h)?);
        Ok(std::array::from_fn(|i| (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h)))
    };
    let d_u = stencil(&|t| efg(u + t, v), hu)?;
    let d_v = stencil(&|t| efg(u, v + t), hv)?;
    Ok(MetricJet {
        u,
        v,
        e: centre[0],
        f: centre[1],
        g: centre[2],
        e_u: d_u[0],
        e_v: d_v[0],
        f_u: d_u[1],
        f_v: d_v[1],
        g_u: d_u[2],
        g_v: d_v[2],
    })
}

/// Christoffel symbols of the second kind. The field name is the upper
/// index followed by the (symmetric) lower pair: `u_uv` is Γ¹₁₂.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChristoffelSymbols {
    pub u_uu: f64,
    pub v_uu: f64,
    pub u_uv: f64,
    pub v_uv: f64,
    pub u_vv: f64,
    pub v_vv: f64,
}

impl ChristoffelSymbols {
    pub fn as_array(&self) -> [f64; 6] {
        [self.u_uu, self.v_uu, self.u_uv, self.v_uv, self.u_vv, self.v_vv]
    }

    pub fn from_array(a: [f64; 6]) -> ChristoffelSymbols {
        ChristoffelSymbols {
            u_uu: a[0],
            v_uu: a[1],
            u_uv: a[2],
            v_uv: a[3],
            u_vv: a[4],
            v_vv: a[5],
        }
    }

    /// Quadratic forms Γᵏᵢⱼ xⁱ xʲ for k = 1, 2.
    pub fn contract(&self, du: f64, dv: f64) -> (f64, f64) {
        (
            self.u_uu * du * du + 2.0 * self.u_uv * du * dv + self.u_vv * dv * dv,
            self.v_uu * du * du + 2.0 * self.v_uv * du * dv + self.v_vv * dv * dv,
        )
    }

    /// Γᵏᵢⱼ xⁱ yʲ for k = 1, 2.
    pub fn bilinear(&self, x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
        let mixed = x.0 * y.1 + x.1 * y.0;
        (
            self.u_uu * x.0 * y.0 + self.u_uv * mixed + self.u_vv * x.1 * y.1,
            self.v_uu * x.0 * y.0 + self.v_uv * mixed + self.v_vv * x.1 * y.1,
        )
    }
}

pub fn christoffel(m: &MetricJet) -> Result<ChristoffelSymbols> {
    trace::hit("christoffel");
    let ff = m.first_form()?;
    let (e, f, g) = (ff.e, ff.f, ff.g);
    let d = 2.0 * ff.det();
    Ok(ChristoffelSymbols {
        u_uu: (g * m.e_u - 2.0 * f * m.f_u + f * m.e_v) / d,
        v_uu: (2.0 * e * m.f_u - e * m.e_v - f * m.e_u) / d,
        u_uv: (g * m.e_v - f * m.g_u) / d,
        v_uv: (e * m.g_u - f * m.e_v) / d,
        u_vv: (2.0 * g * m.f_v - g * m.g_u - f * m.g_v) / d,
        v_vv: (e * m.g_v - 2.0 * f * m.f_v + f * m.g_u) / d,
    })
}

/// Absolute residuals of the six identities expressing Φᵢⱼ·Φₖ through
/// metric partials, in the order
/// `Φuu·Φu, Φuu·Φv, Φuv·Φu, Φuv·Φv, Φvv·Φv, Φvv·Φu`.
pub fn dot_product_identities(jet: &PatchJet, m: &MetricJet) -> [f64; 6] {
    trace::hit("dot_product_identities");
    [
        (jet.duu.dot(&jet.du) - 0.5 * m.e_u).abs(),
        (jet.duu.dot(&jet.dv) - (m.f_u - 0.5 * m.e_v)).abs(),
        (jet.duv.dot(&jet.du) - 0.5 * m.e_v).abs(),
        (jet.duv.dot(&jet.dv) - 0.5 * m.g_u).abs(),
        (jet.dvv.dot(&jet.dv) - 0.5 * m.g_v).abs(),
        (jet.dvv.dot(&jet.du) - (m.f_v - 0.5 * m.g_u)).abs(),
    ]
}

/// Norms of Φᵢⱼ − (Γ¹ᵢⱼ Φu + Γ²ᵢⱼ Φv + IIᵢⱼ N) for ij = uu, uv, vv.
pub fn gauss_residuals(jet: &PatchJet, gamma: &ChristoffelSymbols) -> Result<[f64; 3]> {
    let nrm = surface_normal(jet)?;
    let sf = second_form(jet)?;
    let r = |d2: Vec3, gu: f64, gv: f64, h: f64| (d2 - (jet.du * gu + jet.dv * gv + nrm * h)).norm();
    Ok([
        r(jet.duu, gamma.u_uu, gamma.v_uu, sf.l),
        r(jet.duv, gamma.u_uv, gamma.v_uv, sf.m),
        r(jet.dvv, gamma.u_vv, gamma.v_vv, sf.n),
    ])
}
