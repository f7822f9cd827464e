use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_center_s: f64,
    pub count: u64,
}

/// Fixed-width bins anchored at the series minimum. Only occupied bins are
/// returned, so a series with a few wild outliers stays small.
pub fn histogram(offsets: &[f64], bin_width: f64) -> Result<Vec<HistogramBin>> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(SimError::InvalidBinWidth(bin_width));
    }
    if offsets.is_empty() {
        return Err(SimError::EmptySeries);
    }
    let min = offsets.iter().copied().fold(f64::INFINITY, f64::min);
    let mut counts = BTreeMap::new();
    for &x in offsets {
        *counts
            .entry(((x - min) / bin_width).floor() as u64)
            .or_insert(0u64) += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(i, count)| HistogramBin {
            bin_center_s: min + (i as f64 + 0.5) * bin_width,
            count,
        })
        .collect())
}

/// `bin_center_s,count` rows.
pub fn write_histogram_csv<W: Write>(bins: &[HistogramBin], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for b in bins {
        wtr.serialize(b)?;
    }
    wtr.flush()?;
    Ok(())
}
