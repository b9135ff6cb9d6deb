//! Parametric surface patches and their differential invariants.
//!
//! A [`SurfacePatch`] maps a closed parameter rectangle into 3-space. Its
//! partial derivatives come either from closed forms (catalog surfaces and
//! symbolically differentiated expressions) or from central differences.
//! Everything downstream (fundamental forms, Christoffel symbols, curve
//! frames) is computed from a [`PatchJet`].

mod catalog;
mod forms;

pub use catalog::{surface_catalog, CatalogEntry, Shape};
pub use forms::{
    christoffel, dot_product_identities, first_form, gauss_residuals, metric_jet, metric_jet_by_differences,
    second_form,
    surface_frame, surface_normal, ChristoffelSymbols, FirstForm, FundamentalForms, MetricJet,
    SecondForm, SurfaceFrame,
};

use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::Vec3;

/// Regularity threshold on |Φu × Φv|.
pub const REGULARITY_EPS: f64 = 1e-10;
/// Step for second-order central differences.
pub const FD_STEP_SECOND: f64 = 1e-4;

/// Step for first-order central differences at coordinate `x`.
pub fn fd_step_first(x: f64) -> f64 {
    (1e-5 * x.abs()).max(1e-5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffMode {
    Analytic,
    FiniteDifference,
}

/// Closed parameter rectangle `[u_min, u_max] × [v_min, v_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Domain {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> Domain {
        Domain { u, v }
    }

    pub fn contains(&self, u: f64, v: f64, margin: f64) -> bool {
        u >= self.u.0 + margin && u <= self.u.1 - margin && v >= self.v.0 + margin && v <= self.v.1 - margin
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u.0 + self.u.1), 0.5 * (self.v.0 + self.v.1))
    }
}

/// Third-order partials, present only for closed-form patches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThirdPartials {
    pub uuu: Vec3,
    pub uuv: Vec3,
    pub uvv: Vec3,
    pub vvv: Vec3,
}

/// Point and partial derivatives of a patch at one parameter location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchJet {
    pub u: f64,
    pub v: f64,
    pub point: Vec3,
    pub du: Vec3,
    pub dv: Vec3,
    pub duu: Vec3,
    pub duv: Vec3,
    pub dvv: Vec3,
    pub third: Option<ThirdPartials>,
}

impl PatchJet {
    /// Φu × Φv (not normalized).
    pub fn area_vector(&self) -> Vec3 {
        self.du.cross(&self.dv)
    }
}

#[derive(Debug, Clone)]
pub struct SurfacePatch {
    shape: Shape,
    domain: Domain,
    mode: DiffMode,
    catalog_id: Option<String>,
}

impl SurfacePatch {
    pub fn new(shape: Shape, domain: Domain) -> SurfacePatch {
        SurfacePatch {
            shape,
            domain,
            mode: DiffMode::Analytic,
            catalog_id: None,
        }
    }

    /// Build a catalog surface by id and parameter list, e.g. `("sphere", [2.0])`.
    pub fn from_catalog(id: &str, params: &[f64]) -> Result<SurfacePatch> {
        let (shape, domain) = catalog::build(id, params)?;
        Ok(SurfacePatch {
            shape,
            domain,
            mode: DiffMode::Analytic,
            catalog_id: Some(id.to_string()),
        })
    }

    /// Monge patch `(u, v, f(u, v))` over `domain`.
    pub fn monge(height: &str, domain: Domain) -> Result<SurfacePatch> {
        Ok(SurfacePatch {
            shape: Shape::monge(height)?,
            domain,
            mode: DiffMode::Analytic,
            catalog_id: Some("monge".into()),
        })
    }

    /// Patch given by three coordinate expressions.
    pub fn parametric(x: &str, y: &str, z: &str, domain: Domain) -> Result<SurfacePatch> {
        Ok(SurfacePatch {
            shape: Shape::parametric(x, y, z)?,
            domain,
            mode: DiffMode::Analytic,
            catalog_id: Some("parametric".into()),
        })
    }

    /// The same patch scaled about the origin by `c`, over the same domain.
    pub fn scaled(&self, c: f64) -> SurfacePatch {
        SurfacePatch {
            shape: Shape::Scaled(Arc::new(self.shape.clone()), c),
            domain: self.domain,
            mode: self.mode,
            catalog_id: self.catalog_id.as_ref().map(|id| format!("{id}×{c}")),
        }
    }

    pub fn with_mode(mut self, mode: DiffMode) -> SurfacePatch {
        self.mode = mode;
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> SurfacePatch {
        self.domain = domain;
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn mode(&self) -> DiffMode {
        self.mode
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn catalog_id(&self) -> Option<&str> {
        self.catalog_id.as_deref()
    }

    pub fn point(&self, u: f64, v: f64) -> Vec3 {
        self.shape.point(u, v)
    }

    /// Clearance required between an evaluation point and the boundary.
    pub fn margin(&self) -> f64 {
        match self.mode {
            DiffMode::Analytic => 0.0,
            DiffMode::FiniteDifference => 2.0 * FD_STEP_SECOND,
        }
    }

    pub fn check_point(&self, u: f64, v: f64) -> Result<()> {
        if self.domain.contains(u, v, self.margin()) {
            Ok(())
        } else {
            Err(GeomError::PointOutsideDomain { u, v })
        }
    }

    pub fn eval_jet(&self, u: f64, v: f64) -> Result<PatchJet> {
        self.check_point(u, v)?;
        let jet = match self.mode {
            DiffMode::Analytic => self.analytic_jet(u, v),
            DiffMode::FiniteDifference => self.fd_jet(u, v),
        };
        let norm = jet.area_vector().norm();
        if !(norm > REGULARITY_EPS) {
            return Err(GeomError::DegeneratePatch { u, v, norm });
        }
        Ok(jet)
    }

    /// Closed-form jet regardless of the configured mode.
    pub fn analytic_jet(&self, u: f64, v: f64) -> PatchJet {
        let (d, has_third) = self.shape.partials(u, v);
        PatchJet {
            u,
            v,
            point: d[0],
            du: d[1],
            dv: d[2],
            duu: d[3],
            duv: d[4],
            dvv: d[5],
            third: has_third.then_some(ThirdPartials {
                uuu: d[6],
                uuv: d[7],
                uvv: d[8],
                vvv: d[9],
            }),
        }
    }

    /// Central-difference jet built only from point evaluations.
    pub fn fd_jet(&self, u: f64, v: f64) -> PatchJet {
        let f = |u: f64, v: f64| self.shape.point(u, v);
        let (hu, hv) = (fd_step_first(u), fd_step_first(v));
        let h = FD_STEP_SECOND;
        let p = f(u, v);
        PatchJet {
            u,
            v,
            point: p,
            du: (f(u + hu, v) - f(u - hu, v)) / (2.0 * hu),
            dv: (f(u, v + hv) - f(u, v - hv)) / (2.0 * hv),
            duu: (f(u + h, v) - 2.0 * p + f(u - h, v)) / (h * h),
            duv: (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h))
                / (4.0 * h * h),
            dvv: (f(u, v + h) - 2.0 * p + f(u, v - h)) / (h * h),
            third: None,
        }
    }

    /// Relative disagreement between ∂v(Φu) and ∂u(Φv), each built by
    /// nesting first-order central differences.
    pub fn mixed_partial_asymmetry(&self, u: f64, v: f64) -> f64 {
        let h = FD_STEP_SECOND;
        let f = |u: f64, v: f64| self.shape.point(u, v);
        let d_u = |u: f64, v: f64| (f(u + h, v) - f(u - h, v)) / (2.0 * h);
        let d_v = |u: f64, v: f64| (f(u, v + h) - f(u, v - h)) / (2.0 * h);
        let uv = (d_u(u, v + h) - d_u(u, v - h)) / (2.0 * h);
        let vu = (d_v(u + h, v) - d_v(u - h, v)) / (2.0 * h);
        (uv - vu).norm() / (1.0 + uv.norm().max(vu.norm()))
    }
}

/// Interior sample points of a domain on an `nu × nv` grid of cell centres.
pub fn grid_points(domain: &Domain, nu: usize, nv: usize, inset: f64) -> Vec<(f64, f64)> {
    let (u0, u1) = (domain.u.0 + inset, domain.u.1 - inset);
    let (v0, v1) = (domain.v.0 + inset, domain.v.1 - inset);
    let mut out = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let u = u0 + (u1 - u0) * (i as f64 + 0.5) / nu as f64;
            let v = v0 + (v1 - v0) * (j as f64 + 0.5) / nv as f64;
            out.push((u, v));
        }
    }
    out
}
