use std::io::Write;

use super::BenchmarkReport;
use crate::table_sim::{GeometryMode, Protocol, StaticAllocation};
use crate::{Error, Result};

/// Column order of the flat report CSV.
pub const REPORT_COLUMNS: [&str; 14] = [
    "format_version",
    "base_seed",
    "strategy",
    "T",
    "n",
    "geometry",
    "cv",
    "games",
    "successes",
    "lambda",
    "failure_mean_steps",
    "collisions",
    "timeouts",
    "fingerprint",
];

fn strategy_name(p: &Protocol) -> &'static str {
    match p {
        Protocol::Centralized => "centralized",
        Protocol::Explicit { .. } => "explicit",
        Protocol::DynamicRoles { .. } => "dynamic",
        Protocol::StaticRoles {
            allocation: StaticAllocation::SpeakerListener,
        } => "speaker_listener",
        Protocol::StaticRoles {
            allocation: StaticAllocation::SpeakerSpeaker,
        } => "speaker_speaker",
    }
}

fn io(e: csv::Error) -> Error {
    crate::table_sim::csv_error(e)
}

/// One row per condition.
pub fn write_report_csv<W: Write>(report: &BenchmarkReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_COLUMNS).map_err(io)?;
    for c in &report.conditions {
        let geometry = match c.condition.geometry {
            GeometryMode::KnownRadius { .. } => "known_radius",
            GeometryMode::UnknownRadius { .. } => "unknown_radius",
        };
        w.write_record([
            report.format_version.to_string(),
            report.config.base_seed.to_string(),
            strategy_name(&c.condition.protocol).to_string(),
            c.condition
                .protocol
                .period()
                .map_or(String::new(), |t| t.to_string()),
            c.condition.n.to_string(),
            geometry.to_string(),
            c.condition.noise_cv.to_string(),
            c.games.to_string(),
            c.successes.to_string(),
            format!("{:.6}", c.lambda),
            c.failure_mean_steps
                .map_or(String::new(), |m| format!("{m:.4}")),
            c.collisions.to_string(),
            c.timeouts.to_string(),
            report.fingerprint.clone(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Pivot table: one row per `(n, cv)`, one column per strategy label, in the
/// order conditions first appear. `value` picks the statistic.
pub fn write_table_csv<W: Write>(
    report: &BenchmarkReport,
    value: impl Fn(&super::ConditionReport) -> Option<f64>,
    out: W,
) -> Result<()> {
    let mut labels: Vec<String> = Vec::new();
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for c in &report.conditions {
        if !labels.contains(&c.label) {
            labels.push(c.label.clone());
        }
        let key = (c.condition.n, c.condition.noise_cv);
        if !rows.contains(&key) {
            rows.push(key);
        }
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["base_seed".to_string(), "n".to_string(), "cv".to_string()];
    header.extend(labels.iter().cloned());
    w.write_record(&header).map_err(io)?;
    for (n, cv) in rows {
        let mut rec = vec![
            report.config.base_seed.to_string(),
            n.to_string(),
            cv.to_string(),
        ];
        for l in &labels {
            let cell = report
                .conditions
                .iter()
                .find(|c| &c.label == l && c.condition.n == n && c.condition.noise_cv == cv)
                .and_then(&value)
                .map_or(String::new(), |v| format!("{v:.4}"));
            rec.push(cell);
        }
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
