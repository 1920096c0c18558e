//! Euclidean distance: rigid one-to-one alignment.

use crate::error::{Error, Result};
use crate::measure::DistanceMeasure;
use crate::series::TimeSeries;

/// Square root of the sum of squared pointwise differences.
pub fn eud(x: &TimeSeries, y: &TimeSeries) -> Result<f64> {
    eud_slices(x.values(), y.values())
}

pub(crate) fn eud_slices(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::UnequalLengths {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut acc = 0.0;
    for (a, b) in x.iter().zip(y) {
        let diff = a - b;
        acc += diff * diff;
    }
    Ok(acc.sqrt())
}

/// Strategy wrapper for [`eud`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl DistanceMeasure for Euclidean {
    fn name(&self) -> &'static str {
        "eud"
    }

    fn distance(&self, x: &TimeSeries, y: &TimeSeries) -> Result<f64> {
        eud(x, y)
    }
}
