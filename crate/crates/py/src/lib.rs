//! Python bindings: catalog listing, dilation and classification of a
//! correspondence, geodesic tracing, and scenario runs returning JSON.

use std::path::Path;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use osculant_core::conformal::{classify_map, correspondence_catalog, dilation_field, SurfaceCorrespondence};
use osculant_core::curve::curve_catalog;
use osculant_core::geodesic::{integrate_geodesic, GeodesicState, IntegratorConfig};
use osculant_core::surface::{grid_points, surface_catalog, SurfacePatch};
use osculant_core::verify::{load_scenario, load_scenario_file, run_scenarios, ConfigError, Report};
use osculant_core::GeomError;

type PathRow = (f64, f64, f64, f64, f64);

fn geom_err(e: GeomError) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.tag()))
}

fn config_err(e: ConfigError) -> PyErr {
    match e {
        ConfigError::Read { .. } | ConfigError::Unwritable { .. } => PyOSError::new_err(format!("{}: {e}", e.tag())),
        _ => PyValueError::new_err(format!("{}: {e}", e.tag())),
    }
}

fn correspondence(id: &str, params: Option<Vec<f64>>, base: Option<&str>) -> PyResult<SurfaceCorrespondence> {
    let base = base.map(|b| SurfacePatch::from_catalog(b, &[])).transpose().map_err(geom_err)?;
    SurfaceCorrespondence::from_catalog(id, &params.unwrap_or_default(), base).map_err(geom_err)
}

/// Catalog entries as `{"surfaces": [(id, params, description), ...], ...}`.
#[pyfunction]
fn catalog(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let out = PyDict::new(py);
    let rows = |it: &mut dyn Iterator<Item = (&str, &str, &str)>| -> Vec<(String, String, String)> {
        it.map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())).collect()
    };
    out.set_item("surfaces", rows(&mut surface_catalog().iter().map(|e| (e.id, e.params, e.description))))?;
    out.set_item(
        "correspondences",
        rows(&mut correspondence_catalog().iter().map(|e| (e.id, e.params, e.description))),
    )?;
    out.set_item("curves", rows(&mut curve_catalog().iter().map(|e| (e.id, e.params, e.description))))?;
    Ok(out)
}

/// `(δ, δ_u, δ_v)` of a catalog correspondence at `(u, v)`.
#[pyfunction]
#[pyo3(signature = (correspondence_id, u, v, params=None, base=None))]
fn dilation(correspondence_id: &str, u: f64, v: f64, params: Option<Vec<f64>>, base: Option<&str>) -> PyResult<(f64, f64, f64)> {
    let corr = correspondence(correspondence_id, params, base)?;
    let d = dilation_field(&corr, u, v).map_err(geom_err)?;
    Ok((d.delta, d.delta_u, d.delta_v))
}

/// Map class over an `nu` by `nv` grid, e.g. `"homothety(2)"`.
#[pyfunction]
#[pyo3(signature = (correspondence_id, params=None, base=None, nu=5, nv=5))]
fn classify(correspondence_id: &str, params: Option<Vec<f64>>, base: Option<&str>, nu: usize, nv: usize) -> PyResult<String> {
    let corr = correspondence(correspondence_id, params, base)?;
    let grid = grid_points(&corr.source().domain(), nu, nv, 0.05);
    Ok(classify_map(&corr, &grid).map_err(geom_err)?.class.to_string())
}

/// Trace a unit-speed geodesic; returns rows `(s, u, v, du, dv)`.
#[pyfunction]
#[pyo3(signature = (surface, start, direction, length, step=1e-3, params=None))]
fn geodesic(
    surface: &str,
    start: (f64, f64),
    direction: (f64, f64),
    length: f64,
    step: f64,
    params: Option<Vec<f64>>,
) -> PyResult<Vec<PathRow>> {
    let patch = SurfacePatch::from_catalog(surface, &params.unwrap_or_default()).map_err(geom_err)?;
    let initial = GeodesicState::new(start.0, start.1, direction.0, direction.1)
        .normalized(&patch)
        .map_err(geom_err)?;
    let config = IntegratorConfig { step, ..IntegratorConfig::default() };
    let path = integrate_geodesic(&patch, &initial, length, &config).map_err(geom_err)?;
    Ok(path.samples.iter().map(|x| (x.s, x.state.u, x.state.v, x.state.du, x.state.dv)).collect())
}

/// Run scenario TOML text and return the JSON report.
#[pyfunction]
fn verify(py: Python<'_>, scenario: &str) -> PyResult<String> {
    let sc = load_scenario(scenario).map_err(config_err)?;
    Ok(py.detach(|| Report::new(run_scenarios(&[sc])).to_json()))
}

/// Run scenario files and return the combined JSON report.
#[pyfunction]
fn verify_files(py: Python<'_>, paths: Vec<String>) -> PyResult<String> {
    let scenarios = paths
        .iter()
        .map(|p| load_scenario_file(Path::new(p)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(config_err)?;
    Ok(py.detach(|| Report::new(run_scenarios(&scenarios)).to_json()))
}

#[pymodule]
fn osculant(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(dilation, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_files, m)?)?;
    Ok(())
}
