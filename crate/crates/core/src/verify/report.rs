use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::ConfigError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped { .. } => "SKIP",
        }
    }

    fn reason(&self) -> &str {
        match self {
            Verdict::Skipped { reason } => reason,
            _ => "",
        }
    }
}

/// One residual at one sample: a curve parameter `s` or a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub scenario: String,
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Largest residual over the evaluated samples; absent when nothing
    /// could be evaluated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_residual: Option<f64>,
    pub tolerance: f64,
    pub samples: usize,
    #[serde(default)]
    pub skipped_samples: usize,
    /// Secondary quantities, such as the alternative residual of a relation.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<SamplePoint>,
    /// Measured but kept out of the canonical JSON so reports are byte-stable.
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    /// CSV with one row per sample point.
    CsvPoints,
    Human,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "csv-points" => Ok(Format::CsvPoints),
            "human" => Ok(Format::Human),
            _ => Err(format!("unknown format `{s}` (expected json, csv, csv-points or human)")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

#[derive(Serialize, Deserialize)]
struct Counts {
    pass: usize,
    fail: usize,
    skipped: usize,
}

#[derive(Serialize, Deserialize)]
struct JsonReport {
    summary: Counts,
    entries: Vec<ReportEntry>,
}

impl Report {
    pub fn new(entries: Vec<ReportEntry>) -> Report {
        Report { entries }
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.verdict == Verdict::Fail).count()
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.failures() == 0 {
            0
        } else {
            1
        }
    }

    fn counts(&self) -> Counts {
        let skipped = self
            .entries
            .iter()
            .filter(|e| matches!(e.verdict, Verdict::Skipped { .. }))
            .count();
        let fail = self.failures();
        Counts {
            pass: self.entries.len() - fail - skipped,
            fail,
            skipped,
        }
    }

    pub fn to_json(&self) -> String {
        let doc = JsonReport {
            summary: self.counts(),
            entries: self.entries.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report entries are plain data");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report, ConfigError> {
        let doc: JsonReport = serde_json::from_str(text).map_err(|e| ConfigError::Report(e.to_string()))?;
        Ok(Report { entries: doc.entries })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("scenario,check,curve,verdict,reason,worst_residual,tolerance,samples,skipped_samples\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{:e},{},{}",
                csv_field(&e.scenario),
                csv_field(&e.check),
                csv_field(e.curve.as_deref().unwrap_or("")),
                e.verdict.label().to_lowercase(),
                csv_field(e.verdict.reason()),
                e.worst_residual.map(|r| format!("{r:e}")).unwrap_or_default(),
                e.tolerance,
                e.samples,
                e.skipped_samples
            );
        }
        out
    }

    pub fn to_csv_points(&self) -> String {
        let mut out = String::from("scenario,check,curve,s,u,v,residual\n");
        let opt = |x: Option<f64>| x.map(|x| format!("{x}")).unwrap_or_default();
        for e in &self.entries {
            for p in &e.points {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{:e}",
                    csv_field(&e.scenario),
                    csv_field(&e.check),
                    csv_field(e.curve.as_deref().unwrap_or("")),
                    opt(p.s),
                    opt(p.u),
                    opt(p.v),
                    p.residual
                );
            }
        }
        out
    }

    pub fn to_human(&self) -> String {
        let rows: Vec<[String; 7]> = self
            .entries
            .iter()
            .map(|e| {
                let mut detail = e.verdict.reason().to_string();
                if let Some(n) = &e.note {
                    if !detail.is_empty() {
                        detail.push_str("; ");
                    }
                    detail.push_str(n);
                }
                [
                    e.verdict.label().to_string(),
                    e.scenario.clone(),
                    e.check.clone(),
                    e.curve.clone().unwrap_or_else(|| "-".into()),
                    e.worst_residual.map_or("-".into(), |r| format!("{r:.3e}")),
                    format!("{:.0e}", e.tolerance),
                    format!("{}{}", e.samples, if detail.is_empty() { String::new() } else { format!("  {detail}") }),
                ]
            })
            .collect();
        let header = ["", "scenario", "check", "curve", "worst", "tol", "samples"].map(String::from);
        let mut widths = [0usize; 7];
        for r in std::iter::once(&header).chain(&rows) {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for r in std::iter::once(&header).chain(&rows) {
            let mut line = String::new();
            for (i, cell) in r.iter().enumerate() {
                if i + 1 == r.len() {
                    line.push_str(cell);
                } else {
                    let _ = write!(line, "{cell:<w$}  ", w = widths[i]);
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let c = self.counts();
        let _ = writeln!(out, "{} passed, {} failed, {} skipped", c.pass, c.fail, c.skipped);
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::CsvPoints => self.to_csv_points(),
            Format::Human => self.to_human(),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render entries and write them to `out` (standard output when `None`).
/// Returns the exit code implied by the entries.
pub fn emit_report(entries: &[ReportEntry], format: Format, out: Option<&Path>) -> Result<i32, ConfigError> {
    let report = Report::new(entries.to_vec());
    let text = report.render(format);
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| ConfigError::Unwritable {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|source| ConfigError::Unwritable {
                path: "<stdout>".into(),
                source,
            })?;
        }
    }
    Ok(report.exit_code())
}
