use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{NoiseError, Result};

/// Uniformly sampled phase, expressed as time (`phase / (2π f_c)`) in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub sample_rate: f64,
    pub samples: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    time_s: f64,
    phase_s: f64,
}

impl PhaseRecord {
    pub fn new(sample_rate: f64, samples: Vec<f64>) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(NoiseError::InvalidRecord(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(NoiseError::InvalidRecord(format!(
                "sample {i} is not finite"
            )));
        }
        Ok(PhaseRecord {
            sample_rate,
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time_of(&self, index: usize) -> f64 {
        index as f64 / self.sample_rate
    }

    /// Writes `time_s,phase_s` rows.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for (i, &phase_s) in self.samples.iter().enumerate() {
            wtr.serialize(Row {
                time_s: self.time_of(i),
                phase_s,
            })?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads `time_s,phase_s` rows. The sample rate is recovered from the
    /// first two timestamps, so at least two rows are needed.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let rows = rdr
            .deserialize::<Row>()
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if rows.len() < 2 {
            return Err(NoiseError::InvalidRecord(
                "need at least two rows to infer the sample rate".into(),
            ));
        }
        let dt = rows[1].time_s - rows[0].time_s;
        if !(dt > 0.0) {
            return Err(NoiseError::InvalidRecord("timestamps must increase".into()));
        }
        Self::new(1.0 / dt, rows.into_iter().map(|r| r.phase_s).collect())
    }
}

/// Mean-removed RMS of the record, in seconds.
pub fn rms_of_record(record: &PhaseRecord) -> Result<f64> {
    mean_removed_rms(&record.samples).ok_or(NoiseError::EmptyRecord)
}

pub(crate) fn mean_removed_rms(samples: &[f64]) -> Option<f64> {
    if samples.is_empty() {
        return None;
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Some(var.sqrt())
}
