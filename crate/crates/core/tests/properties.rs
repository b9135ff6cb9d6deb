use std::sync::Arc;

use osculant_core::conformal::{
    classify_map, conformal_christoffel_check, dilation_field, geodesic_curvature_relation, metric_derivative_relations,
    MapClass, SurfaceCorrespondence,
};
use osculant_core::curve::{
    arclength_reparam, binormal_expansion_check, curvature_sample, curve_jet, frenet, CurvePath, SurfaceCurve,
};
use osculant_core::geodesic::{conformal_geodesic_residual, integrate_geodesic, GeodesicState, IntegratorConfig};
use osculant_core::surface::{
    christoffel, dot_product_identities, gauss_residuals, grid_points, metric_jet, metric_jet_by_differences,
    SurfacePatch,
};
use osculant_core::verify::{load_scenario, Report};
use proptest::prelude::*;

const SURFACES: [&str; 7] = ["plane", "cylinder", "sphere", "stereo-sphere", "exp-plane", "helicoid", "catenoid"];

/// A surface with a point drawn from the middle 80% of its domain.
fn surface_point() -> impl Strategy<Value = (SurfacePatch, f64, f64)> {
    (0..SURFACES.len(), 0.1..0.9f64, 0.1..0.9f64).prop_map(|(i, a, b)| {
        let p = SurfacePatch::from_catalog(SURFACES[i], &[]).unwrap();
        let d = p.domain();
        let u = d.u.0 + a * (d.u.1 - d.u.0);
        let v = d.v.0 + b * (d.v.1 - d.v.0);
        (p, u, v)
    })
}

fn conformal_pair() -> impl Strategy<Value = SurfaceCorrespondence> {
    prop_oneof![
        Just(SurfaceCorrespondence::from_catalog("exp-plane", &[], None).unwrap()),
        Just(SurfaceCorrespondence::from_catalog("sphere-stereographic", &[], None).unwrap()),
        Just(SurfaceCorrespondence::from_catalog("helicoid-catenoid", &[], None).unwrap()),
        (0.3..4.0f64).prop_map(|c| {
            let base = SurfacePatch::from_catalog("sphere", &[]).unwrap();
            SurfaceCorrespondence::from_catalog("scale", &[c], Some(base)).unwrap()
        }),
        (0.0..1.0f64).prop_map(|t| SurfaceCorrespondence::from_catalog("helicoid-catenoid", &[t], None).unwrap()),
    ]
}

fn interior(corr: &SurfaceCorrespondence, a: f64, b: f64) -> (f64, f64) {
    let d = corr.source().domain();
    (d.u.0 + a * (d.u.1 - d.u.0), d.v.0 + b * (d.v.1 - d.v.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_is_positive_definite((p, u, v) in surface_point()) {
        let m = metric_jet(&p, u, v).unwrap();
        prop_assert!(m.e > 0.0 && m.g > 0.0 && m.e * m.g - m.f * m.f > 0.0);
    }

    #[test]
    fn structural_identities_hold((p, u, v) in surface_point()) {
        let jet = p.eval_jet(u, v).unwrap();
        let m = metric_jet(&p, u, v).unwrap();
        let scale = 1.0 + m.e.abs().max(m.g.abs()) * 10.0;
        let dots = dot_product_identities(&jet, &metric_jet_by_differences(&p, u, v).unwrap());
        prop_assert!(dots.iter().all(|r| *r < 1e-8 * scale), "{dots:?}");
        let gamma = christoffel(&m).unwrap();
        let gauss = gauss_residuals(&jet, &gamma).unwrap();
        prop_assert!(gauss.iter().all(|r| *r < 1e-8 * scale), "{gauss:?}");
    }

    #[test]
    fn analytic_and_fd_jets_agree((p, u, v) in surface_point()) {
        let a = p.analytic_jet(u, v);
        let f = p.fd_jet(u, v);
        let scale = 1.0 + a.duu.norm().max(a.dvv.norm()).max(a.du.norm());
        prop_assert!((a.du - f.du).norm() < 1e-6 * scale);
        prop_assert!((a.duu - f.duu).norm() < 1e-4 * scale);
        prop_assert!((a.duv - f.duv).norm() < 1e-4 * scale);
        prop_assert!(p.mixed_partial_asymmetry(u, v) < 1e-6);
    }

    #[test]
    fn conformal_christoffel_identity(corr in conformal_pair(), a in 0.1..0.9f64, b in 0.1..0.9f64) {
        let (u, v) = interior(&corr, a, b);
        prop_assert!(conformal_christoffel_check(&corr, u, v).unwrap() < 1e-7);
        prop_assert!(metric_derivative_relations(&corr, u, v).unwrap().iter().all(|r| *r < 1e-7));
    }

    #[test]
    fn dilation_is_multiplicative_under_composition(c in 0.2..5.0f64, a in 0.1..0.9f64, b in 0.1..0.9f64) {
        let ep = SurfaceCorrespondence::from_catalog("exp-plane", &[], None).unwrap();
        let scale = SurfaceCorrespondence::from_catalog("scale", &[c], Some((**ep.target()).clone())).unwrap();
        let both = ep.then(&scale).unwrap();
        let (u, v) = interior(&ep, a, b);
        let d1 = dilation_field(&ep, u, v).unwrap().delta;
        let d2 = dilation_field(&scale, u, v).unwrap().delta;
        let d = dilation_field(&both, u, v).unwrap().delta;
        prop_assert!((d - d1 * d2).abs() < 1e-12 * d);
    }

    #[test]
    fn homothety_is_classified_with_its_factor(c in 0.2..5.0f64) {
        let base = SurfacePatch::from_catalog("catenoid", &[]).unwrap();
        let corr = SurfaceCorrespondence::from_catalog("scale", &[c], Some(base)).unwrap();
        let class = classify_map(&corr, &grid_points(&corr.source().domain(), 4, 4, 0.1)).unwrap().class;
        match class {
            MapClass::Homothety { c: got } => prop_assert!((got - c).abs() < 1e-9),
            MapClass::Isometry => prop_assert!((c - 1.0).abs() < 1e-7),
            other => prop_assert!(false, "{other}"),
        }
    }

    #[test]
    fn frenet_frame_is_orthonormal(a in 0.2..1.5f64, b in 0.2..1.5f64, t in 0.0..6.0f64) {
        let sphere = Arc::new(SurfacePatch::from_catalog("sphere", &[]).unwrap());
        let path = CurvePath::Ellipse { a: a * 0.5, b, cu: 1.5, cv: 0.0 };
        let curve = arclength_reparam(&SurfaceCurve::new(sphere, path, (0.0, 6.5)), 96).unwrap();
        let jet = curve_jet(&curve, curve.range().1 * t / 6.0).unwrap();
        let f = frenet(&jet).unwrap();
        for (x, y) in [(f.t, f.n), (f.n, f.b), (f.b, f.t)] {
            prop_assert!(x.dot(&y).abs() < 1e-12);
        }
        for x in [f.t, f.n, f.b] {
            prop_assert!((x.norm() - 1.0).abs() < 1e-12);
        }
        prop_assert!((f.t.cross(&f.n) - f.b).norm() < 1e-12);
        prop_assert!(binormal_expansion_check(&jet).unwrap() < 1e-8);
    }

    #[test]
    fn curvature_splits_into_normal_and_geodesic(u0 in 0.2..2.9f64, s in 0.0..1.0f64) {
        let sphere = Arc::new(SurfacePatch::from_catalog("sphere", &[]).unwrap());
        let lat = SurfaceCurve::new(sphere, CurvePath::Latitude { u0, radius: 1.0 }, (0.0, 1.0));
        let c = curvature_sample(&lat, s).unwrap();
        let kappa = frenet(&curve_jet(&lat, s).unwrap()).unwrap().kappa;
        prop_assert!((c.kappa_n.powi(2) + c.kappa_g.powi(2) - kappa * kappa).abs() < 1e-10);
        prop_assert!((c.kappa_g - c.kappa_g_intrinsic).abs() < 1e-10);
        prop_assert!((c.kappa_g - u0.cos() / u0.sin()).abs() < 1e-10);
    }

    #[test]
    fn arclength_reparameterization_has_unit_speed(a in 0.3..1.2f64, b in 0.3..1.2f64) {
        let cat = Arc::new(SurfacePatch::from_catalog("catenoid", &[]).unwrap());
        let base = SurfaceCurve::new(cat, CurvePath::Ellipse { a, b, cu: 0.0, cv: 0.0 }, (0.0, 3.0));
        let curve = arclength_reparam(&base, 96).unwrap();
        prop_assert!(curve.speed_defect(41).unwrap() < 1e-6);
        let again = arclength_reparam(&curve, 96).unwrap();
        let (s0, s1) = (curve.range().1, again.range().1);
        prop_assert!((s0 - s1).abs() < 1e-8);
    }

    #[test]
    fn geodesics_keep_unit_speed(
        (p, u, v) in surface_point(),
        angle in 0.0..std::f64::consts::TAU,
    ) {
        let start = GeodesicState::new(u, v, angle.cos(), angle.sin()).normalized(&p).unwrap();
        // short enough that a start inside the middle 80% cannot reach a coordinate pole
        let path = integrate_geodesic(&p, &start, 0.25, &IntegratorConfig { step: 2e-3, ..Default::default() }).unwrap();
        for x in &path.samples {
            prop_assert!((x.state.metric_speed(&p).unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn conformal_geodesic_forms_agree(corr in conformal_pair(), a in 0.3..0.7f64, b in 0.3..0.7f64, t in 0.0..1.0f64) {
        let (u, v) = interior(&corr, a, b);
        let curve = SurfaceCurve::new(
            corr.source().clone(),
            CurvePath::Ellipse { a: 0.2, b: 0.1, cu: u, cv: v },
            (0.0, 6.0),
        );
        prop_assert!(conformal_geodesic_residual(&corr, &curve, 6.0 * t).unwrap().gap() < 1e-8);
    }

    #[test]
    fn derived_geodesic_curvature_relation(corr in conformal_pair(), a in 0.3..0.7f64, b in 0.3..0.7f64, t in 0.0..1.0f64) {
        let (u, v) = interior(&corr, a, b);
        let base = SurfaceCurve::new(
            corr.source().clone(),
            CurvePath::Ellipse { a: 0.2, b: 0.1, cu: u, cv: v },
            (0.0, 6.0),
        );
        let curve = arclength_reparam(&base, 96).unwrap();
        let s = curve.range().1 * t;
        let r = geodesic_curvature_relation(&corr, &curve, s).unwrap();
        prop_assert!(r.residual_derived < 1e-6, "{r:?}");
        // the image curvature in its own arc length is the formal value over δ³
        prop_assert!((r.kappa_g_image - r.kappa_g_image_formal / r.delta.powi(3)).abs() < 1e-6 * (1.0 + r.kappa_g_image.abs()));
    }

    #[test]
    fn scenario_text_is_canonical(nu in 1usize..9, nv in 1usize..9, samples in 1usize..80, tol in 1e-9..1e-3f64) {
        let text = format!(
            "name = \"p\"\nchecks = [\"christoffel\", \"tangential\"]\n[correspondence]\nid = \"exp-plane\"\n\
             [grid]\nnu = {nu}\nnv = {nv}\nsamples = {samples}\n[tolerances]\nchristoffel = {tol:e}\n\
             [[curves]]\nid = \"plane-circle\"\nparams = [0.5]\n"
        );
        let sc = load_scenario(&text).unwrap();
        let canon = sc.to_toml();
        let again = load_scenario(&canon).unwrap();
        prop_assert_eq!(&again, &sc);
        prop_assert_eq!(again.to_toml(), canon);
    }

    #[test]
    fn report_json_round_trips(nu in 1usize..4) {
        let text = format!(
            "name = \"r\"\nchecks = [\"christoffel\", \"conformality\"]\n[correspondence]\nid = \"sphere-stereographic\"\n[grid]\nnu = {nu}\nnv = 2\n"
        );
        let report = Report::new(osculant_core::verify::run_scenario(&load_scenario(&text).unwrap()));
        let json = report.to_json();
        let back = Report::from_json(&json).unwrap();
        prop_assert_eq!(back.to_json(), json);
    }
}
