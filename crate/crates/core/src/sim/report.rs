use std::fs;
use std::io::BufWriter;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{write_histogram_csv, HistogramBin, JitterTable, Result};
use crate::protocol::{encode_log, EventRecord, PhaseUpdateMsg};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuMetrics {
    pub ru: usize,
    /// Mean-removed RMS of the synchronised clock offset.
    pub rms_wander_s: f64,
    pub mean_offset_s: f64,
    pub max_abs_offset_s: f64,
    /// Mean-removed RMS of the reconstructed uncompensated drift.
    pub rms_uncompensated_s: f64,
    /// Mean-removed RMS of the true outbound drift.
    pub rms_true_one_way_s: f64,
    pub updates_sent: u64,
    pub updates_lost: u64,
    /// Times the phase store jumped to a different unit-interval branch
    /// than the true two-way phase.
    pub wrap_slips: u64,
    /// Largest `|cached - true|` two-way error right after an update.
    pub max_tracking_error_s: f64,
}

/// Time series of one RU, sampled at the evaluation rate.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RuSeries {
    pub time_s: Vec<f64>,
    pub true_one_way: Vec<f64>,
    pub two_way_measured: Vec<f64>,
    pub synchronized_offset: Vec<f64>,
    pub estimated_uncompensated: Vec<f64>,
    pub events: Vec<EventRecord>,
    /// Updates actually delivered to the RU, in order.
    pub updates: Vec<PhaseUpdateMsg>,
}

/// The JSON part of a report: metadata and metrics, no series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub scenario: String,
    pub seed: u64,
    pub config_hash: String,
    pub duration_s: f64,
    pub update_interval_s: f64,
    pub eval_rate_hz: f64,
    pub caching_enabled: bool,
    /// Worst RU.
    pub rms_wander_s: f64,
    /// Worst RU.
    pub max_abs_offset_s: f64,
    pub per_ru: Vec<RuMetrics>,
    /// Distribution of RU 0's synchronised offsets.
    pub histogram: Vec<HistogramBin>,
    pub jitter: JitterTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub summary: ReportSummary,
    pub rus: Vec<RuSeries>,
}

#[derive(Serialize)]
struct OffsetRow {
    time_s: f64,
    offset_s: f64,
}

fn write_series(path: &Path, time: &[f64], values: &[f64]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(BufWriter::new(fs::File::create(path)?));
    for (&time_s, &offset_s) in time.iter().zip(values) {
        wtr.serialize(OffsetRow { time_s, offset_s })?;
    }
    wtr.flush()?;
    Ok(())
}

impl ScenarioReport {
    pub fn rms_wander_s(&self) -> f64 {
        self.summary.rms_wander_s
    }

    /// One machine-greppable line of headline metrics.
    pub fn summary_line(&self) -> String {
        let s = &self.summary;
        let mut line = format!(
            "summary scenario={} seed={} rms_wander_ps={:.3} max_offset_ps={:.3}",
            if s.scenario.is_empty() {
                "-"
            } else {
                &s.scenario
            },
            s.seed,
            s.rms_wander_s * 1e12,
            s.max_abs_offset_s * 1e12
        );
        for row in &s.jitter.rows {
            line.push_str(&format!(
                " jitter_fs.{}={:.3}",
                row.name,
                row.rms_jitter_s * 1e15
            ));
        }
        if let Some(f) = &s.jitter.fading {
            line.push_str(&format!(
                " carrier_amplitude.k{}={:.4}",
                f.harmonic, f.amplitude
            ));
        }
        line
    }

    /// Writes `report.json`, `offsets.csv` (RU 0), `histogram.csv` and per-RU
    /// series, event logs and binary update logs into `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(
            dir.join("report.json"),
            serde_json::to_string_pretty(&self.summary)? + "\n",
        )?;
        let hist = BufWriter::new(fs::File::create(dir.join("histogram.csv"))?);
        write_histogram_csv(&self.summary.histogram, hist)?;
        for (i, ru) in self.rus.iter().enumerate() {
            if i == 0 {
                write_series(
                    &dir.join("offsets.csv"),
                    &ru.time_s,
                    &ru.synchronized_offset,
                )?;
            }
            write_series(
                &dir.join(format!("ru{i}_synchronized.csv")),
                &ru.time_s,
                &ru.synchronized_offset,
            )?;
            write_series(
                &dir.join(format!("ru{i}_two_way.csv")),
                &ru.time_s,
                &ru.two_way_measured,
            )?;
            write_series(
                &dir.join(format!("ru{i}_uncompensated.csv")),
                &ru.time_s,
                &ru.estimated_uncompensated,
            )?;
            let mut wtr = csv::Writer::from_writer(BufWriter::new(fs::File::create(
                dir.join(format!("ru{i}_events.csv")),
            )?));
            for e in &ru.events {
                wtr.serialize(e)?;
            }
            wtr.flush()?;
            fs::write(
                dir.join(format!("ru{i}_updates.bin")),
                encode_log(&ru.updates)?,
            )?;
        }
        Ok(())
    }
}
