use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, ExperimentResult, HarnessError, RunRecord, RunStats};
use crate::problems::Sense;
use crate::trace::{average_cumulative, cumulative};

pub const CSV_HEADER: &str = "name,dim,optimum,mean,sd,best,worst,error";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format `{other}` (csv or json)")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonReport {
    name: String,
    dim: String,
    sense: Sense,
    optimum: Option<f64>,
    seeds: Vec<u64>,
    stats: RunStats,
    runs: Vec<RunRecord>,
    config: ExperimentConfig,
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "-_.".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn write(path: PathBuf, contents: &str, written: &mut Vec<PathBuf>) -> Result<(), HarnessError> {
    fs::write(&path, contents).map_err(|source| HarnessError::Io {
        path: path.clone(),
        source,
    })?;
    written.push(path);
    Ok(())
}

fn series_text(values: &[f64]) -> String {
    let mut s = String::with_capacity(values.len() * 12);
    for v in values {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}

/// Writes the summary (`<name>.csv` and/or `<name>.json`) plus one trace
/// file per run into `dir`, which is created if needed. Runs with a
/// multi-objective trace also get each component and the cumulative and
/// running-average variants of every series. Returns the written paths.
pub fn export_report(
    result: &ExperimentResult,
    dir: &Path,
    format: ReportFormat,
) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let stem = file_stem(&result.name);
    let mut written = Vec::new();

    if format == ReportFormat::Csv {
        let s = &result.stats;
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| HarnessError::Config(format!("csv: {e}"));
        w.write_record(CSV_HEADER.split(',')).map_err(csv_err)?;
        w.write_record([
            result.name.clone(),
            result.dim.clone(),
            opt(result.best_known),
            s.mean.to_string(),
            s.sd.to_string(),
            s.best.to_string(),
            s.worst.to_string(),
            opt(s.error_percent),
        ])
        .map_err(csv_err)?;
        let bytes = w.into_inner().map_err(|e| HarnessError::Config(format!("csv: {e}")))?;
        write(
            dir.join(format!("{stem}.csv")),
            &String::from_utf8_lossy(&bytes),
            &mut written,
        )?;
    }
    let report = JsonReport {
        name: result.name.clone(),
        dim: result.dim.clone(),
        sense: result.sense,
        optimum: result.best_known,
        seeds: result.runs.iter().map(|r| r.seed).collect(),
        stats: result.stats.clone(),
        runs: result.runs.clone(),
        config: result.config.clone(),
    };
    write(
        dir.join(format!("{stem}.json")),
        &serde_json::to_string_pretty(&report)?,
        &mut written,
    )?;

    for (k, run) in result.runs.iter().enumerate() {
        let trace = &run.trace;
        if trace.is_empty() {
            continue;
        }
        let base = format!("{stem}.run{k}");
        write(
            dir.join(format!("{base}.trace")),
            &series_text(&trace.total),
            &mut written,
        )?;
        if trace.components.is_empty() {
            continue;
        }
        let series = std::iter::once(("total", &trace.total))
            .chain(trace.components.iter().map(|c| (c.name.as_str(), &c.values)));
        for (name, values) in series {
            let name = file_stem(name);
            if name != "total" {
                write(
                    dir.join(format!("{base}.{name}.trace")),
                    &series_text(values),
                    &mut written,
                )?;
            }
            write(
                dir.join(format!("{base}.{name}.cumulative.trace")),
                &series_text(&cumulative(values)),
                &mut written,
            )?;
            write(
                dir.join(format!("{base}.{name}.average.trace")),
                &series_text(&average_cumulative(values)),
                &mut written,
            )?;
        }
    }
    Ok(written)
}

/// Reads the configuration back from a JSON report so the experiment can be
/// replayed with the same seeds.
pub fn load_report_config(path: &Path) -> Result<ExperimentConfig, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let report: JsonReport = serde_json::from_str(&text)?;
    Ok(report.config)
}
