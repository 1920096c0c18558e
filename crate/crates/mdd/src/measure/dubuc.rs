//! Multiscale Dubuc similarity and distance.
//!
//! Two series are compared by the overlap of their envelopes at each scale
//! of a ladder: per timestep, the intersection and combined extent of the
//! two `[lower, upper]` intervals are summed over the series, their ratio
//! is taken per scale, and the ratios are aggregated into a pseudo-area
//! under the ratio curve. The distance is one minus that similarity. The
//! whole computation is Θ(|scales| · d).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::envelope::{envelope_bounds, envelopes_at_radii, Envelope, EpsilonConvention, EpsilonSet};
use crate::error::{Error, Result};
use crate::measure::DistanceMeasure;
use crate::series::TimeSeries;

/// Weight given to each trapezoid when aggregating per-scale ratios.
///
/// `Intervals` divides by the number of trapezoids, `|scales| - 1`, so a
/// perfect match scores exactly 1 at any ladder size. `Scales` divides by
/// `|scales|`, which caps the similarity at `(|scales| - 1) / |scales|`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaNormalization {
    #[default]
    Intervals,
    Scales,
}

impl fmt::Display for DeltaNormalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaNormalization::Intervals => write!(f, "intervals"),
            DeltaNormalization::Scales => write!(f, "scales"),
        }
    }
}

impl FromStr for DeltaNormalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intervals" => Ok(DeltaNormalization::Intervals),
            "scales" => Ok(DeltaNormalization::Scales),
            other => Err(Error::InvalidParameter(format!(
                "unknown delta normalization `{other}` (expected intervals or scales)"
            ))),
        }
    }
}

/// Scale ladder plus the conventions that interpret it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MddConfig {
    pub scales: EpsilonSet,
    #[serde(default)]
    pub convention: EpsilonConvention,
    #[serde(default)]
    pub normalization: DeltaNormalization,
}

impl MddConfig {
    pub fn new(scales: EpsilonSet) -> Self {
        Self {
            scales,
            convention: EpsilonConvention::default(),
            normalization: DeltaNormalization::default(),
        }
    }

    /// Effective inclusive radii for the ladder under the convention.
    pub fn radii(&self) -> Result<Vec<u32>> {
        self.scales
            .scales()
            .iter()
            .map(|&eps| self.convention.radius(eps))
            .collect()
    }
}

/// Summed per-timestep interval overlap and combined extent of two
/// envelopes. Both are non-negative and intersection <= union.
pub(crate) fn intersection_union_envelopes(ex: &Envelope, ey: &Envelope) -> (f64, f64) {
    let mut intersection = 0.0;
    let mut union = 0.0;
    for t in 0..ex.len() {
        let (ux, lx) = (ex.upper()[t], ex.lower()[t]);
        let (uy, ly) = (ey.upper()[t], ey.lower()[t]);
        intersection += (ux.min(uy) - lx.max(ly)).max(0.0);
        union += (ux.max(uy) - lx.min(ly)).max(0.0);
    }
    (intersection, union)
}

/// Intersection over union of two envelopes. A zero union means both
/// envelopes are identical and degenerate, which counts as a full match.
pub(crate) fn ratio_from_envelopes(ex: &Envelope, ey: &Envelope) -> f64 {
    let (intersection, union) = intersection_union_envelopes(ex, ey);
    if union == 0.0 {
        1.0
    } else {
        intersection / union
    }
}

/// Summed envelope intersection and combined extent at one scale
/// (inclusive neighborhood `|t - s| <= epsilon`).
pub fn intersection_union(x: &TimeSeries, y: &TimeSeries, epsilon: u32) -> Result<(f64, f64)> {
    check_lengths(x, y)?;
    let ex = envelope_bounds(x.values(), epsilon)?;
    let ey = envelope_bounds(y.values(), epsilon)?;
    Ok(intersection_union_envelopes(&ex, &ey))
}

/// Intersection ratio at one scale, in [0, 1].
pub fn intersection_ratio(x: &TimeSeries, y: &TimeSeries, epsilon: u32) -> Result<f64> {
    check_lengths(x, y)?;
    let ex = envelope_bounds(x.values(), epsilon)?;
    let ey = envelope_bounds(y.values(), epsilon)?;
    Ok(ratio_from_envelopes(&ex, &ey))
}

fn check_lengths(x: &TimeSeries, y: &TimeSeries) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::UnequalLengths {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

/// Aggregate per-scale ratios into the similarity score.
///
/// Trapezoids over consecutive ratios with uniform weight; a singleton
/// ladder has no trapezoid and scores its single ratio. Division by the
/// trapezoid count (rather than multiplying by a reciprocal) keeps a
/// perfect match at exactly 1.0.
pub(crate) fn aggregate_ratios(ratios: &[f64], normalization: DeltaNormalization) -> f64 {
    let k = ratios.len();
    if k == 1 {
        return ratios[0];
    }
    let mut sum = 0.0;
    for pair in ratios.windows(2) {
        sum += (pair[0] + pair[1]) / 2.0;
    }
    let denominator = match normalization {
        DeltaNormalization::Intervals => (k - 1) as f64,
        DeltaNormalization::Scales => k as f64,
    };
    sum / denominator
}

fn ratios_for_config(x: &TimeSeries, y: &TimeSeries, config: &MddConfig) -> Result<Vec<f64>> {
    check_lengths(x, y)?;
    let radii = config.radii()?;
    let envelopes_x = envelopes_at_radii(x.values(), &radii)?;
    let envelopes_y = envelopes_at_radii(y.values(), &radii)?;
    Ok(envelopes_x
        .iter()
        .zip(&envelopes_y)
        .map(|(ex, ey)| ratio_from_envelopes(ex, ey))
        .collect())
}

/// Multiscale Dubuc similarity under explicit conventions.
pub fn mds_with(x: &TimeSeries, y: &TimeSeries, config: &MddConfig) -> Result<f64> {
    let ratios = ratios_for_config(x, y, config)?;
    Ok(aggregate_ratios(&ratios, config.normalization))
}

/// Multiscale Dubuc similarity in [0, 1] with default conventions.
pub fn mds(x: &TimeSeries, y: &TimeSeries, scales: &EpsilonSet) -> Result<f64> {
    mds_with(x, y, &MddConfig::new(scales.clone()))
}

/// Multiscale Dubuc distance under explicit conventions.
pub fn mdd_with(x: &TimeSeries, y: &TimeSeries, config: &MddConfig) -> Result<f64> {
    Ok(1.0 - mds_with(x, y, config)?)
}

/// Multiscale Dubuc distance, `1 - mds`, with default conventions.
///
/// Reflexive, non-negative, and symmetric; distinct series can still sit at
/// distance zero, so this is a pseudo-metric.
pub fn mdd(x: &TimeSeries, y: &TimeSeries, scales: &EpsilonSet) -> Result<f64> {
    Ok(1.0 - mds(x, y, scales)?)
}

/// Strategy wrapper for [`mdd`]. Validates the scale ladder against the
/// convention at construction.
#[derive(Debug, Clone)]
pub struct MultiscaleDubuc {
    config: MddConfig,
}

impl MultiscaleDubuc {
    pub fn new(config: MddConfig) -> Result<Self> {
        config.radii()?;
        Ok(Self { config })
    }

    pub fn config(&self) -> &MddConfig {
        &self.config
    }
}

impl DistanceMeasure for MultiscaleDubuc {
    fn name(&self) -> &'static str {
        "mdd"
    }

    fn distance(&self, x: &TimeSeries, y: &TimeSeries) -> Result<f64> {
        mdd_with(x, y, &self.config)
    }
}
