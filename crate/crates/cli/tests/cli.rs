use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn osculant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osculant"))
        .args(args)
        .env("OSCULANT_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn scenario(name: &str) -> String {
    scenarios().join(format!("{name}.toml")).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn passing_scenario_exits_zero() {
    let o = osculant(&["verify", &scenario("identity")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("PASS")));
    assert!(text.trim_end().ends_with("0 failed, 0 skipped"), "{text}");
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tight.toml");
    let text = std::fs::read_to_string(scenario("exp-plane")).unwrap() + "\n[tolerances]\nchristoffel = 1e-30\n";
    std::fs::write(&path, text).unwrap();
    let o = osculant(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL") && l.contains("christoffel")));
}

#[test]
fn misspelled_check_exits_two_with_a_suggestion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("typo.toml");
    std::fs::write(&path, "name = \"t\"\nchecks = [\"tangental\"]\n[correspondence]\nid = \"exp-plane\"\n").unwrap();
    let o = osculant(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error[unknown-check]"), "{err}");
    assert!(err.contains("did you mean `tangential`"), "{err}");
}

#[test]
fn unknown_key_and_missing_file_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.toml");
    std::fs::write(&path, "name = \"t\"\nchecks = [\"christoffel\"]\nbogus = 1\n[correspondence]\nid = \"exp-plane\"\n").unwrap();
    let o = osculant(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("extra.toml:3:1: unknown field `bogus`"), "{}", stderr(&o));

    let o = osculant(&["verify", dir.path().join("absent.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[unreadable-input]"));
}

#[test]
fn catalog_lists_every_kind() {
    let text = stdout(&osculant(&["catalog"]));
    for id in ["sphere", "helicoid", "sphere-stereographic", "exp-plane", "plane-circle", "great-circle"] {
        assert!(text.contains(id), "{id} missing");
    }
    let curves = stdout(&osculant(&["catalog", "--kind", "curves"]));
    assert!(curves.starts_with("curves:"));
    assert!(!curves.contains("catenoid"));
}

#[test]
fn geodesic_csv_follows_the_equator() {
    let o = osculant(&[
        "geodesic", "--surface", "sphere", "--start", "1.5707963267948966", "0", "--direction", "0", "3", "--length", "1",
        "--step", "0.01",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,u,v,du,dv,r1,r2"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 101);
    for r in &rows {
        assert!((r[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((r[2] - r[0]).abs() < 1e-12);
        assert!(r[5].abs() < 1e-8 && r[6].abs() < 1e-8);
    }
}

#[test]
fn geodesic_rejects_unknown_surface() {
    let o = osculant(&["geodesic", "--surface", "sphre", "--direction", "1", "0", "--length", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sphere"));
}

#[test]
fn saved_json_re_renders() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = osculant(&["verify", &scenario("scaled-plane"), "--json", json.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("scenario,check,curve,verdict"), "{csv}");

    let again = osculant(&["report", json.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(stdout(&again), csv);

    let copy = dir.path().join("copy.json");
    let o = osculant(&["report", json.to_str().unwrap(), "--format", "json", "--out", copy.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&copy).unwrap(), std::fs::read(&json).unwrap());

    let points = stdout(&osculant(&["report", json.to_str().unwrap(), "--format", "csv-points"]));
    assert!(points.starts_with("scenario,check,curve,s,u,v,residual\n"));
    assert!(points.lines().count() > 100);
}

#[test]
fn malformed_report_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"entries\": 3}").unwrap();
    let o = osculant(&["report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[malformed-report]"));
}

#[test]
fn worker_count_does_not_change_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "4"] {
        let path = dir.path().join(format!("w{workers}.json"));
        let o = Command::new(env!("CARGO_BIN_EXE_osculant"))
            .args(["verify", &scenario("sphere-stereographic"), "--format", "json", "--out", path.to_str().unwrap()])
            .env("OSCULANT_WORKERS", workers)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
