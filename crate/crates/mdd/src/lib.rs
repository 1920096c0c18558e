//! Multiscale Dubuc distance for time series, alongside Euclidean and
//! Sakoe-Chiba-banded DTW baselines, a 1-nearest-neighbor classifier with
//! leave-one-out parameter tuning, evaluation metrics, seeded synthetic
//! dataset generators, and UCR-format dataset I/O.
//!
//! The multiscale Dubuc distance compares two series through the overlap
//! of their envelopes across a ladder of scales instead of matching
//! points: see [`measure::mdd`] and the [`envelope`] module. Measures are
//! interchangeable behind [`measure::DistanceMeasure`] and can be selected
//! by name at runtime through [`measure::MeasureRegistry`].

#![forbid(unsafe_code)]

pub mod classify;
pub mod datagen;
pub mod envelope;
pub mod error;
pub mod eval;
pub mod io;
pub mod measure;
pub mod series;
pub mod tune;

pub use envelope::{envelope_bounds, Envelope, EpsilonConvention, EpsilonSet};
pub use error::{Error, Result};
pub use measure::{
    dtw, dtw_bruteforce, eud, intersection_ratio, intersection_union, mdd, mds, DistanceMeasure,
    DtwConfig, DtwCost, MeasureParams, MeasureRegistry, MeasureSpec,
};
pub use series::{LabeledDataset, TimeSeries};
