use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::report::{ReportEntry, SamplePoint, Verdict};
use super::scenario::{Resolved, Scenario};
use super::{Check, ANALYTIC_TOL};
use crate::conformal::{
    classify_map, conformal_christoffel_check, dilation_unchecked, geodesic_curvature_relation,
    metric_derivative_relations, normal_component_relation, osculating_image_condition,
    tangential_component_relation, MapClass,
};
use crate::curve::{
    binormal_expansion_check, curvature_sample, curve_jet, frenet, is_asymptotic, is_osculating,
    osculating_decompose, SurfaceCurve, UNIT_SPEED_TOL,
};
use crate::error::{GeomError, Result};
use crate::geodesic::{
    conformal_geodesic_residual, covariant_derivative_defect, homothety_invariance_check, integrate_geodesic,
    path_residuals, tangent_field, Termination,
};
use crate::surface::{dot_product_identities, metric_jet_by_differences};

/// Environment variable capping the number of worker threads.
pub const WORKERS_ENV: &str = "OSCULANT_WORKERS";

/// Errors at a single sample that mark the sample as degenerate rather
/// than the check as failed.
const DEGENERATE: &[&str] = &[
    "vanishing-curvature",
    "stationary-point",
    "degenerate-patch",
    "degenerate-metric",
];

pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Default)]
struct Acc {
    points: Vec<SamplePoint>,
    skipped: BTreeMap<&'static str, usize>,
    failure: Option<String>,
    skip_all: Option<String>,
    summary: Option<(f64, usize)>,
    extra: BTreeMap<String, f64>,
    note: Option<String>,
}

impl Acc {
    fn record(&mut self, at: SamplePoint, r: Result<f64>) {
        match r {
            Ok(residual) => self.points.push(SamplePoint { residual, ..at }),
            Err(e) => self.error(e, at),
        }
    }

    fn error(&mut self, e: GeomError, at: SamplePoint) {
        if DEGENERATE.contains(&e.tag()) {
            *self.skipped.entry(e.tag()).or_default() += 1;
        } else if self.failure.is_none() {
            let place = match (at.s, at.u, at.v) {
                (Some(s), _, _) => format!(" at s = {s}"),
                (None, Some(u), Some(v)) => format!(" at ({u}, {v})"),
                _ => String::new(),
            };
            self.failure = Some(format!("{}{place}: {e}", e.tag()));
        }
    }

    fn max_extra(&mut self, key: &str, x: f64) {
        let slot = self.extra.entry(key.to_string()).or_insert(f64::NEG_INFINITY);
        *slot = slot.max(x);
    }

    fn finish(self, scenario: &str, check: Check, curve: Option<&str>, tolerance: f64) -> ReportEntry {
        let skipped_samples: usize = self.skipped.values().sum();
        let (worst, samples) = match self.summary {
            Some((w, n)) => (Some(w), n),
            None => (
                self.points.iter().map(|p| p.residual).reduce(|a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) }),
                self.points.len(),
            ),
        };
        let mut note = self.note;
        let verdict = if let Some(reason) = self.skip_all {
            Verdict::Skipped { reason }
        } else if let Some(f) = self.failure {
            note = Some(match note {
                Some(n) => format!("{f}; {n}"),
                None => f,
            });
            Verdict::Fail
        } else {
            match worst {
                None => Verdict::Skipped {
                    reason: self
                        .skipped
                        .iter()
                        .max_by_key(|(tag, n)| (**n, std::cmp::Reverse(**tag)))
                        .map_or("no-samples".to_string(), |(tag, _)| tag.to_string()),
                },
                Some(w) if w < tolerance => Verdict::Pass,
                Some(_) => Verdict::Fail,
            }
        };
        if skipped_samples > 0 && !matches!(verdict, Verdict::Skipped { .. }) {
            let tags: Vec<String> = self.skipped.iter().map(|(t, n)| format!("{n} {t}")).collect();
            let msg = format!("skipped samples: {}", tags.join(", "));
            note = Some(match note {
                Some(n) => format!("{n}; {msg}"),
                None => msg,
            });
        }
        let worst = worst.filter(|w| w.is_finite()).or(if worst.is_some() { Some(f64::MAX) } else { None });
        ReportEntry {
            scenario: scenario.to_string(),
            check: check.name().to_string(),
            curve: curve.map(str::to_string),
            verdict,
            worst_residual: worst,
            tolerance,
            samples,
            skipped_samples,
            extra: self.extra.into_iter().filter(|(_, x)| x.is_finite()).collect(),
            note,
            points: self.points,
            wall_time: Default::default(),
        }
    }
}

fn at_grid(u: f64, v: f64) -> SamplePoint {
    SamplePoint { s: None, u: Some(u), v: Some(v), residual: 0.0 }
}

fn at_curve(s: f64) -> SamplePoint {
    SamplePoint { s: Some(s), u: None, v: None, residual: 0.0 }
}

struct Task<'a> {
    check: Check,
    curve: Option<&'a (String, Arc<SurfaceCurve>)>,
}

/// Run every check of a scenario. Entries come back in scenario order
/// (checks as listed, curves as listed) whatever the thread count.
pub fn run_scenario(scenario: &Scenario) -> Vec<ReportEntry> {
    run_scenarios(std::slice::from_ref(scenario))
}

pub fn run_scenarios(scenarios: &[Scenario]) -> Vec<ReportEntry> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(worker_count()).build();
    let work = || scenarios.iter().flat_map(run_one).collect();
    match pool {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

fn run_one(scenario: &Scenario) -> Vec<ReportEntry> {
    let resolved = match scenario.resolve() {
        Ok(r) => r,
        Err(e) => {
            return vec![ReportEntry {
                scenario: scenario.name.clone(),
                check: "load".into(),
                curve: None,
                verdict: Verdict::Fail,
                worst_residual: None,
                tolerance: 0.0,
                samples: 0,
                skipped_samples: 0,
                extra: BTreeMap::new(),
                note: Some(format!("{}: {e}", e.tag())),
                points: vec![],
                wall_time: Default::default(),
            }]
        }
    };
    let mut tasks = Vec::new();
    for &check in &resolved.checks {
        if check.per_curve() {
            tasks.extend(resolved.curves.iter().map(|c| Task { check, curve: Some(c) }));
        } else {
            tasks.push(Task { check, curve: None });
        }
    }
    tasks
        .par_iter()
        .map(|t| {
            let started = Instant::now();
            let tol = scenario.tolerance(t.check);
            let acc = match t.curve {
                Some((_, curve)) => run_curve_check(&resolved, t.check, curve, scenario.grid.samples),
                None => run_grid_check(&resolved, t.check),
            };
            let mut entry = acc.finish(&scenario.name, t.check, t.curve.map(|c| c.0.as_str()), tol);
            entry.wall_time = started.elapsed();
            entry
        })
        .collect()
}

/// Whether a measured class is compatible with the declared one. A
/// declaration is a lower bound on structure: a map declared conformal may
/// turn out to be a homothety on a coarse grid, but not the reverse.
fn consistent(declared: MapClass, found: MapClass) -> bool {
    match (declared, found) {
        (MapClass::Homothety { c: x }, MapClass::Homothety { c: y }) => (x - y).abs() <= 1e-6 * x.abs().max(y.abs()),
        (MapClass::Homothety { c }, MapClass::Isometry) => (c - 1.0).abs() <= 1e-6,
        (MapClass::Conformal, f) => f != MapClass::NonConformal,
        (MapClass::NonConformal, _) => true,
        (d, f) => d == f,
    }
}

fn run_grid_check(r: &Resolved, check: Check) -> Acc {
    let corr = &r.corr;
    let mut acc = Acc::default();
    match check {
        Check::Conformality => match classify_map(corr, &r.grid) {
            Ok(class) => {
                for &(u, v) in &r.grid {
                    acc.record(at_grid(u, v), dilation_unchecked(corr, u, v).map(|d| d.residual));
                }
                acc.extra.insert("delta_min".into(), class.delta_min);
                acc.extra.insert("delta_max".into(), class.delta_max);
                acc.note = Some(format!("class {}", class.class));
                if let Some(declared) = corr.declared() {
                    if !consistent(declared, class.class) {
                        acc.failure = Some(format!("declared {declared}, found {}", class.class));
                    }
                }
            }
            Err(e) => acc.error(e, at_grid(f64::NAN, f64::NAN)),
        },
        Check::Christoffel => {
            for &(u, v) in &r.grid {
                acc.record(at_grid(u, v), conformal_christoffel_check(corr, u, v));
            }
        }
        Check::MetricDerivatives => {
            for &(u, v) in &r.grid {
                acc.record(at_grid(u, v), metric_derivative_relations(corr, u, v).map(|x| x.into_iter().fold(0.0, f64::max)));
            }
        }
        Check::StructuralIdentities => {
            for &(u, v) in &r.grid {
                let one = |p: &crate::surface::SurfacePatch| -> Result<f64> {
                    let jet = p.eval_jet(u, v)?;
                    let m = metric_jet_by_differences(p, u, v)?;
                    Ok(dot_product_identities(&jet, &m).into_iter().fold(0.0, f64::max))
                };
                acc.record(at_grid(u, v), one(corr.source()).and_then(|a| Ok(a.max(one(corr.target())?))));
            }
        }
        Check::GeodesicResidual => {
            let (initial, length, config) = &r.geodesic;
            match integrate_geodesic(corr.source(), initial, *length, config).and_then(|p| Ok((path_residuals(corr.source(), &p)?, p))) {
                Ok((rows, path)) => {
                    for (s, r1, r2) in rows {
                        acc.record(at_curve(s), Ok(r1.abs().max(r2.abs())));
                    }
                    acc.extra.insert("length".into(), path.length);
                    if path.termination != Termination::LengthReached {
                        acc.note = Some(format!("stopped early: {:?}", path.termination));
                    }
                }
                Err(e) => acc.error(e, at_curve(0.0)),
            }
        }
        Check::GeodesicInvariance => {
            let (initial, length, config) = &r.geodesic;
            match homothety_invariance_check(corr, initial, *length, config) {
                Ok(rep) => {
                    acc.summary = Some((rep.max_residual, rep.samples));
                    if rep.termination != Termination::LengthReached {
                        acc.note = Some(format!("stopped early: {:?}", rep.termination));
                    }
                }
                Err(e @ GeomError::WrongMapClass { .. }) => acc.skip_all = Some(e.tag().to_string()),
                Err(e) => acc.error(e, at_curve(0.0)),
            }
        }
        _ => unreachable!("curve checks are dispatched per curve"),
    }
    acc
}

/// Threshold for deciding curve properties (osculating, asymptotic) that
/// gate a check. Kept apart from the check tolerance so tightening a
/// tolerance can only turn passes into failures.
const PROPERTY_TOL: f64 = ANALYTIC_TOL;

/// Skip the whole entry unless the source curve is a unit-speed osculating
/// curve. The Frenet frame behind the osculating test needs unit speed.
fn require_osculating(acc: &mut Acc, curve: &SurfaceCurve, n: usize) -> bool {
    if !require_unit_speed(acc, curve, n) {
        return false;
    }
    match is_osculating(curve, PROPERTY_TOL, n) {
        Ok(rep) => {
            acc.extra.insert("source_max_beta".into(), rep.max_beta);
            if !rep.osculating {
                acc.skip_all = Some("not-osculating".into());
            }
            rep.osculating
        }
        Err(e) => {
            acc.error(e, at_curve(curve.range().0));
            false
        }
    }
}

fn require_unit_speed(acc: &mut Acc, curve: &SurfaceCurve, n: usize) -> bool {
    match curve.speed_defect(n) {
        Ok(d) if d <= UNIT_SPEED_TOL => true,
        Ok(_) => {
            acc.skip_all = Some("not-unit-speed".into());
            false
        }
        Err(e) => {
            acc.error(e, at_curve(curve.range().0));
            false
        }
    }
}

fn run_curve_check(r: &Resolved, check: Check, curve: &SurfaceCurve, n: usize) -> Acc {
    let corr = &r.corr;
    let mut acc = Acc::default();
    let samples = curve.samples(n);
    match check {
        Check::Tangential => {
            if require_osculating(&mut acc, curve, n) {
                for &s in &samples {
                    let res = tangential_component_relation(corr, curve, s, 1.0, 0.0).and_then(|a| {
                        let b = tangential_component_relation(corr, curve, s, 0.0, 1.0)?;
                        Ok((a, b))
                    });
                    if let Ok((a, b)) = &res {
                        acc.max_extra("max_abs_h", a.h.abs().max(b.h.abs()));
                    }
                    acc.record(at_curve(s), res.map(|(a, b)| a.residual.max(b.residual)));
                }
            }
        }
        Check::NormalComponent => {
            if require_osculating(&mut acc, curve, n) {
                for &s in &samples {
                    let res = normal_component_relation(corr, curve, s);
                    if let Ok(x) = &res {
                        acc.max_extra("actual_image_residual", x.residual);
                    }
                    acc.record(at_curve(s), res.map(|x| (x.lhs_formal - x.rhs).abs()));
                }
            }
        }
        Check::GeodesicCurvature => {
            if require_unit_speed(&mut acc, curve, n) {
                for &s in &samples {
                    let res = geodesic_curvature_relation(corr, curve, s);
                    if let Ok(x) = &res {
                        acc.max_extra("residual_uncorrected", x.residual_uncorrected);
                        acc.max_extra("max_abs_correction", x.correction.abs());
                    }
                    acc.record(at_curve(s), res.map(|x| x.residual_derived));
                }
            }
        }
        Check::OsculatingImage => {
            if require_osculating(&mut acc, curve, n) {
                let mut held = 0usize;
                for &s in &samples {
                    let res = osculating_image_condition(corr, curve, s);
                    if let Ok(x) = &res {
                        acc.max_extra("max_condition_residual", x.residual);
                        held += usize::from(x.residual < PROPERTY_TOL);
                    }
                    // the condition implies an osculating image; only its failure counts
                    acc.record(at_curve(s), res.map(|x| if x.residual < PROPERTY_TOL { x.image_beta.abs() } else { 0.0 }));
                }
                acc.extra.insert("condition_held".into(), held as f64);
            }
        }
        Check::CurveFrame => {
            if !require_unit_speed(&mut acc, curve, n) {
                return acc;
            }
            if let Ok(rep) = is_osculating(curve, PROPERTY_TOL, n) {
                acc.extra.insert("osculating".into(), f64::from(u8::from(rep.osculating)));
            }
            if let Ok(rep) = is_asymptotic(curve, PROPERTY_TOL, n) {
                acc.extra.insert("asymptotic".into(), f64::from(u8::from(rep.asymptotic)));
            }
            for &s in &samples {
                let res = (|| -> Result<f64> {
                    let c = curvature_sample(curve, s)?;
                    let jet = curve_jet(curve, s)?;
                    let frame = frenet(&jet)?;
                    let dec = osculating_decompose(&jet, &frame);
                    acc.max_extra("max_abs_beta", dec.beta.abs());
                    let expansion = binormal_expansion_check(&jet)?;
                    Ok((c.kappa_g - c.kappa_g_intrinsic).abs().max((c.kappa_n - c.kappa_n_ambient).abs()).max(expansion))
                })();
                acc.record(at_curve(s), res);
            }
        }
        Check::ParallelTransport => {
            if require_unit_speed(&mut acc, curve, n) {
                for &s in &samples {
                    let res = (|| -> Result<f64> {
                        let defect = covariant_derivative_defect(curve, &tangent_field, s)?;
                        let kg = curvature_sample(curve, s)?.kappa_g;
                        Ok((defect - kg.abs()).abs())
                    })();
                    acc.record(at_curve(s), res);
                }
            }
        }
        Check::ConformalGeodesicEquivalence => {
            for &s in &samples {
                let res = conformal_geodesic_residual(corr, curve, s);
                if let Ok(x) = &res {
                    acc.max_extra("max_abs_target_residual", x.target_r1.abs().max(x.target_r2.abs()));
                }
                acc.record(at_curve(s), res.map(|x| x.gap()));
            }
        }
        _ => unreachable!("grid checks are dispatched once per scenario"),
    }
    acc
}
