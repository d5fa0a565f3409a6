//! CSV emission and ingestion for series and reports.
//!
//! Numbers are written with fixed 3-decimal formatting and files are
//! written atomically (temp file + rename), so identical runs produce
//! byte-identical output.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiment::{ExperimentReport, ScenarioSeries};

pub const SERIES_HEADER: &str = "time_s,t_chamber_c,t_fiber_c,crtt_ps,dt_ps";
pub const REPORT_HEADER: &str = "label,dt_cold_ps,dt_hot_ps,dt_delta_ps,stabilization_time_s";

/// Fixed 3-decimal rendering; values that round to zero print without a
/// negative sign.
pub fn format_fixed3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

/// Writes `bytes` to `path` via a temp file in the same directory and an
/// atomic rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidConfig(format!("not a file path: {}", path.display())))?;
    let mut tmp = std::ffi::OsString::from(".");
    tmp.push(file_name);
    tmp.push(".tmp");
    let tmp_path = match dir {
        Some(d) => d.join(&tmp),
        None => std::path::PathBuf::from(&tmp),
    };
    {
        let mut f = fs::File::create(&tmp_path)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp_path, path)?;
    Ok(())
}

/// Renders the sample series as CSV text.
pub fn series_to_csv(series: &ScenarioSeries) -> String {
    let mut out = String::with_capacity(64 * (series.len() + 1));
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for row in &series.rows {
        let s = &row.sample;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_fixed3(s.t_s),
            format_fixed3(row.t_chamber_c),
            format_fixed3(s.t_fiber_c),
            format_fixed3(s.crtt_ps),
            format_fixed3(s.dt_ps),
        ));
    }
    out
}

pub fn write_series_csv(series: &ScenarioSeries, path: impl AsRef<Path>) -> Result<()> {
    atomic_write(path.as_ref(), series_to_csv(series).as_bytes())
}

/// Renders the report as a one-row CSV.
pub fn report_to_csv(report: &ExperimentReport) -> String {
    format!(
        "{REPORT_HEADER}\n{},{},{},{},{}\n",
        report.label,
        format_fixed3(report.dt_cold_ps),
        format_fixed3(report.dt_hot_ps),
        format_fixed3(report.dt_delta_ps),
        format_fixed3(report.stabilization_time_s),
    )
}

pub fn write_report_csv(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    atomic_write(path.as_ref(), report_to_csv(report).as_bytes())
}

/// Reads back a report CSV written by [`write_report_csv`]. The sample
/// counts are not part of the CSV schema and come back as zero.
pub fn read_report_csv(path: impl AsRef<Path>) -> Result<ExperimentReport> {
    let text = fs::read_to_string(path.as_ref())?;
    parse_report_csv(&text)
}

pub fn parse_report_csv(text: &str) -> Result<ExperimentReport> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::ConfigParse("empty report file".into()))?;
    if header.trim() != REPORT_HEADER {
        return Err(Error::ConfigParse(format!(
            "report header mismatch: expected `{REPORT_HEADER}`, got `{header}`"
        )));
    }
    let row = lines
        .next()
        .ok_or_else(|| Error::ConfigParse("report file has no data row".into()))?;
    let fields: Vec<&str> = row.split(',').collect();
    if fields.len() != 5 {
        return Err(Error::ConfigParse(format!(
            "report row has {} fields, expected 5",
            fields.len()
        )));
    }
    let num = |i: usize, name: &str| -> Result<f64> {
        fields[i]
            .trim()
            .parse::<f64>()
            .map_err(|e| Error::ConfigParse(format!("report field {name}: {e}")))
    };
    Ok(ExperimentReport {
        label: fields[0].trim().to_string(),
        dt_cold_ps: num(1, "dt_cold_ps")?,
        dt_hot_ps: num(2, "dt_hot_ps")?,
        dt_delta_ps: num(3, "dt_delta_ps")?,
        stabilization_time_s: num(4, "stabilization_time_s")?,
        cold_samples: 0,
        hot_samples: 0,
    })
}
