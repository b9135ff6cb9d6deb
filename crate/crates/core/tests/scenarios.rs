//! The shipped scenario files, run end to end through the library.

use std::path::{Path, PathBuf};

use osculant_core::trace;
use osculant_core::verify::{
    load_scenario, load_scenario_file, run_scenario, run_scenarios, Check, ConfigError, Report, ReportEntry, Scenario,
    Verdict,
};

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn shipped() -> Vec<Scenario> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(scenario_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    files.iter().map(|f| load_scenario_file(f).unwrap()).collect()
}

fn named(name: &str) -> Scenario {
    load_scenario_file(&scenario_dir().join(format!("{name}.toml"))).unwrap()
}

fn entry<'a>(entries: &'a [ReportEntry], check: &str) -> Vec<&'a ReportEntry> {
    entries.iter().filter(|e| e.check == check).collect()
}

#[test]
fn every_shipped_scenario_loads_and_is_canonical() {
    let all = shipped();
    assert_eq!(all.len(), 10);
    for sc in &all {
        let again = load_scenario(&sc.to_toml()).unwrap();
        assert_eq!(&again, sc, "{}", sc.name);
        assert!(!sc.parsed_checks().unwrap().is_empty());
    }
}

#[test]
fn exp_plane_declares_five_checks_on_a_five_by_five_grid() {
    let sc = named("exp-plane");
    let checks = sc.parsed_checks().unwrap();
    assert_eq!(
        checks,
        vec![
            Check::Christoffel,
            Check::MetricDerivatives,
            Check::Tangential,
            Check::ConformalGeodesicEquivalence,
            Check::GeodesicInvariance,
        ]
    );
    assert_eq!(sc.grid.nu * sc.grid.nv, 25);
    assert_eq!(sc.grid.samples, 50);
}

#[test]
fn identity_passes_every_check_to_rounding() {
    let entries = run_scenario(&named("identity"));
    assert_eq!(entry(&entries, "conformality").len(), 1);
    for e in &entries {
        assert_eq!(e.verdict, Verdict::Pass, "{e:?}");
        // integrated paths carry truncation error, everything else is exact
        let limit = if e.check.starts_with("geodesic-") { 1e-8 } else { 1e-9 };
        assert!(e.worst_residual.unwrap() < limit, "{} {:?}", e.check, e.worst_residual);
    }
}

#[test]
fn scaled_plane_is_a_homothety_without_corrections() {
    let entries = run_scenario(&named("scaled-plane"));
    let conf = entry(&entries, "conformality")[0];
    assert_eq!(conf.verdict, Verdict::Pass);
    assert_eq!(conf.note.as_deref(), Some("class homothety(2)"));
    assert!((conf.extra["delta_min"] - 2.0).abs() < 1e-12);
    assert!((conf.extra["delta_max"] - 2.0).abs() < 1e-12);
    for e in entry(&entries, "geodesic-curvature") {
        assert!(e.extra["max_abs_correction"] < 1e-12);
    }
    assert!(entries.iter().all(|e| e.verdict == Verdict::Pass), "{entries:#?}");
}

#[test]
fn exp_plane_passes_and_skips_invariance() {
    let entries = run_scenario(&named("exp-plane"));
    for e in &entries {
        if e.check == "geodesic-invariance" {
            assert_eq!(
                e.verdict,
                Verdict::Skipped {
                    reason: "wrong-map-class".into()
                }
            );
        } else {
            assert_eq!(e.verdict, Verdict::Pass, "{e:?}");
        }
    }
    let tangential = entry(&entries, "tangential");
    assert_eq!(tangential.len(), 2);
    assert!(tangential.iter().all(|e| e.samples >= 20));
}

#[test]
fn full_run_has_no_failures_and_stable_json() {
    let all = shipped();
    let first = Report::new(run_scenarios(&all));
    let second = Report::new(run_scenarios(&all));
    assert_eq!(first.failures(), 0, "{}", first.to_human());
    assert_eq!(first.exit_code(), 0);
    assert_eq!(first.to_json(), second.to_json());
}

#[test]
fn full_run_dispatches_every_geometric_operation() {
    trace::enable();
    run_scenarios(&shipped());
    assert!(trace::missing().is_empty(), "{:?}", trace::missing());
}

#[test]
fn tightened_tolerance_turns_a_pass_into_a_failure() {
    let mut sc = named("exp-plane");
    sc.tolerances.insert("tangential".into(), 0.0);
    let report = Report::new(run_scenario(&sc));
    assert!(report.failures() > 0, "{}", report.to_human());
    assert_eq!(report.exit_code(), 1);
}

#[test]
fn misspelled_check_is_rejected_with_a_suggestion() {
    let text = "name = \"x\"\nchecks = [\"christofel\"]\n[correspondence]\nid = \"exp-plane\"\n";
    match load_scenario(text) {
        Err(ConfigError::UnknownCheck { suggestion, .. }) => assert_eq!(suggestion.as_deref(), Some("christoffel")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_surface_is_rejected_with_a_suggestion() {
    let text = "name = \"x\"\nchecks = [\"christoffel\"]\n[correspondence]\nid = \"scale\"\nparams = [2.0]\n\
                [correspondence.base]\nid = \"spere\"\n";
    let err = load_scenario(text).unwrap_err();
    assert_eq!(err.tag(), "unknown-surface-id");
    assert!(err.to_string().contains("sphere"), "{err}");
}

#[test]
fn syntax_errors_carry_a_position() {
    let err = load_scenario("name = \"x\"\nchecks = [\n").unwrap_err();
    match err {
        ConfigError::Parse { line, .. } => assert!(line >= 2),
        other => panic!("{other:?}"),
    }
}
