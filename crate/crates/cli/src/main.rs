use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use osculant_core::conformal::correspondence_catalog;
use osculant_core::curve::curve_catalog;
use osculant_core::geodesic::{integrate_geodesic, path_residuals, GeodesicState, IntegratorConfig, Termination};
use osculant_core::surface::{surface_catalog, Domain, SurfacePatch};
use osculant_core::trace;
use osculant_core::verify::{emit_report, load_scenario_file, run_scenarios, ConfigError, Format, Report};

/// Exit code for configuration and I/O problems.
const CONFIG_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "osculant", version, about = "Check curve and geodesic identities under conformal surface maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Human,
    Json,
    Csv,
    CsvPoints,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Human => Format::Human,
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::CsvPoints => Format::CsvPoints,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogKind {
    Surfaces,
    Correspondences,
    Curves,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog surfaces, correspondences and curve families.
    Catalog {
        #[arg(long, value_enum)]
        kind: Option<CatalogKind>,
    },
    /// Run scenario files (directories are searched for *.toml).
    Verify {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
        /// Write the rendered report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the canonical JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Report which geometric operations the run dispatched; a missing
        /// operation makes the run fail.
        #[arg(long)]
        coverage: bool,
    },
    /// Trace one geodesic and print s, u, v, u', v' and the two residuals as CSV.
    Geodesic {
        #[arg(long)]
        surface: String,
        /// Numeric surface parameter (repeatable).
        #[arg(long = "param", allow_negative_numbers = true)]
        params: Vec<f64>,
        /// Height expression for `--surface monge`.
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["U", "V"])]
        start: Vec<f64>,
        /// Initial direction; rescaled to unit speed.
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["DU", "DV"])]
        direction: Vec<f64>,
        #[arg(long)]
        length: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-render a saved JSON report.
    Report {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Catalog { kind } => {
            print_catalog(kind);
            Ok(0)
        }
        Command::Verify {
            scenarios,
            format,
            out,
            json,
            coverage,
        } => verify(&scenarios, format.into(), out.as_deref(), json.as_deref(), coverage),
        Command::Geodesic {
            surface,
            params,
            expr,
            start,
            direction,
            length,
            step,
            out,
        } => geodesic(&surface, &params, expr.as_deref(), &start, &direction, length, step, out.as_deref()),
        Command::Report { input, format, out } => report(&input, format.into(), out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.tag());
            ExitCode::from(CONFIG_ERROR)
        }
    }
}

fn print_catalog(kind: Option<CatalogKind>) {
    let show = |k: CatalogKind| kind.is_none_or(|x| x as u8 == k as u8);
    if show(CatalogKind::Surfaces) {
        println!("surfaces:");
        for e in surface_catalog() {
            println!("  {:<22} {:<28} {}", e.id, e.params, e.description);
        }
    }
    if show(CatalogKind::Correspondences) {
        println!("correspondences:");
        for e in correspondence_catalog() {
            println!("  {:<22} {:<28} {}", e.id, e.params, e.description);
        }
    }
    if show(CatalogKind::Curves) {
        println!("curves:");
        for e in curve_catalog() {
            println!("  {:<22} {:<28} {}", e.id, e.params, e.description);
        }
    }
}

fn scenario_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, ConfigError> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let entries = std::fs::read_dir(p).map_err(|source| ConfigError::Read {
                path: p.display().to_string(),
                source,
            })?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "toml"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn verify(inputs: &[PathBuf], format: Format, out: Option<&Path>, json: Option<&Path>, coverage: bool) -> Result<i32, ConfigError> {
    let scenarios = scenario_files(inputs)?
        .iter()
        .map(|f| load_scenario_file(f))
        .collect::<Result<Vec<_>, _>>()?;
    if coverage {
        trace::enable();
    }
    let entries = run_scenarios(&scenarios);
    if let Some(path) = json {
        emit_report(&entries, Format::Json, Some(path))?;
    }
    let mut code = emit_report(&entries, format, out)?;
    if coverage {
        let missing = trace::missing();
        eprintln!(
            "coverage: {} of {} geometric operations dispatched",
            trace::GEOMETRIC_OPS.len() - missing.len(),
            trace::GEOMETRIC_OPS.len()
        );
        for op in &missing {
            eprintln!("coverage: not dispatched: {op}");
        }
        if !missing.is_empty() {
            code = code.max(1);
        }
    }
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn geodesic(
    surface: &str,
    params: &[f64],
    expr: Option<&str>,
    start: &[f64],
    direction: &[f64],
    length: f64,
    step: f64,
    out: Option<&Path>,
) -> Result<i32, ConfigError> {
    let patch = match (surface, expr) {
        ("monge", Some(h)) => SurfacePatch::monge(h, Domain::new((-3.0, 3.0), (-3.0, 3.0)))?,
        (_, Some(_)) => return Err(ConfigError::Invalid(format!("surface `{surface}` does not take --expr"))),
        (id, None) => SurfacePatch::from_catalog(id, params)?,
    };
    let (u, v) = match start {
        [u, v] => (*u, *v),
        _ => patch.domain().center(),
    };
    let (du, dv) = match direction {
        [a, b] => (*a, *b),
        _ => return Err(ConfigError::Invalid("--direction DU DV is required".into())),
    };
    let initial = GeodesicState::new(u, v, du, dv).normalized(&patch)?;
    let config = IntegratorConfig {
        step,
        ..IntegratorConfig::default()
    };
    let path = integrate_geodesic(&patch, &initial, length, &config)?;
    let residuals = path_residuals(&patch, &path)?;
    let mut text = String::from("s,u,v,du,dv,r1,r2\n");
    for (i, x) in path.samples.iter().enumerate() {
        let (r1, r2) = residuals.get(i).map_or((f64::NAN, f64::NAN), |r| (r.1, r.2));
        let st = x.state;
        text.push_str(&format!("{},{},{},{},{},{:e},{:e}\n", x.s, st.u, st.v, st.du, st.dv, r1, r2));
    }
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| ConfigError::Unwritable {
            path: p.display().to_string(),
            source,
        })?,
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| ConfigError::Unwritable {
                path: "<stdout>".into(),
                source,
            })?,
    }
    if path.termination != Termination::LengthReached {
        eprintln!("geodesic stopped at s = {}: {:?}", path.length, path.termination);
    }
    Ok(0)
}

fn report(input: &Path, format: Format, out: Option<&Path>) -> Result<i32, ConfigError> {
    let text = std::fs::read_to_string(input).map_err(|source| ConfigError::Read {
        path: input.display().to_string(),
        source,
    })?;
    let report = Report::from_json(&text)?;
    emit_report(&report.entries, format, out)
}
