//! Core data carriers: a single time series and a labeled collection of them.

use crate::error::{Error, Result};

/// An ordered sequence of real observations.
///
/// Construction validates the two invariants every algorithm in this crate
/// relies on: the series is non-empty and every value is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    /// Build a series, rejecting empty input and NaN/infinite values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    /// Convenience constructor from a slice.
    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Series length `d`. Always at least 1.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// A named collection of equal-length series with integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    name: String,
    series: Vec<TimeSeries>,
    labels: Vec<i64>,
}

impl LabeledDataset {
    /// Build a dataset. Requires at least one instance, one label per
    /// series, and a common series length.
    pub fn new(name: impl Into<String>, series: Vec<TimeSeries>, labels: Vec<i64>) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::EmptyInput);
        }
        if series.len() != labels.len() {
            return Err(Error::CountMismatch {
                series: series.len(),
                labels: labels.len(),
            });
        }
        let d = series[0].len();
        for s in &series[1..] {
            if s.len() != d {
                return Err(Error::UnequalLengths {
                    left: d,
                    right: s.len(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            series,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of instances `n`.
    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Common series length `d`.
    pub fn series_len(&self) -> usize {
        self.series[0].len()
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    /// Distinct labels in ascending order.
    pub fn class_labels(&self) -> Vec<i64> {
        let mut out = self.labels.clone();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// All series belonging to one class, in dataset order.
    pub fn series_of_class(&self, label: i64) -> Vec<&TimeSeries> {
        self.series
            .iter()
            .zip(&self.labels)
            .filter(|(_, l)| **l == label)
            .map(|(s, _)| s)
            .collect()
    }

    /// Apply a value transform to every observation, keeping labels and name.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let series = self
            .series
            .iter()
            .map(|s| TimeSeries::new(s.values().iter().map(|&v| f(v)).collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.name.clone(), series, self.labels.clone())
    }
}
