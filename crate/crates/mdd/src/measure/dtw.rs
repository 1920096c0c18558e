//! Dynamic time warping constrained to a Sakoe-Chiba band.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::DistanceMeasure;
use crate::series::TimeSeries;

/// Largest series length accepted by the exhaustive path oracle.
const BRUTE_FORCE_MAX_LEN: usize = 10;

/// Pointwise cost accumulated along the warping path.
///
/// `Squared` accumulates squared differences and takes the square root of
/// the final cell, so a zero-width band reproduces the Euclidean distance
/// exactly. `Absolute` accumulates absolute differences with no final root.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DtwCost {
    #[default]
    Squared,
    Absolute,
}

impl fmt::Display for DtwCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DtwCost::Squared => write!(f, "squared"),
            DtwCost::Absolute => write!(f, "absolute"),
        }
    }
}

impl FromStr for DtwCost {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squared" => Ok(DtwCost::Squared),
            "absolute" => Ok(DtwCost::Absolute),
            other => Err(Error::InvalidParameter(format!(
                "unknown dtw cost `{other}` (expected squared or absolute)"
            ))),
        }
    }
}

/// Band half-width and cost mode. A window of at least the series length
/// means unconstrained alignment; larger values are clipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtwConfig {
    pub window: usize,
    #[serde(default)]
    pub cost: DtwCost,
}

impl DtwConfig {
    pub fn new(window: usize) -> Self {
        Self {
            window,
            cost: DtwCost::Squared,
        }
    }
}

#[inline]
fn step_cost(a: f64, b: f64, cost: DtwCost) -> f64 {
    match cost {
        DtwCost::Squared => {
            let diff = a - b;
            diff * diff
        }
        DtwCost::Absolute => (a - b).abs(),
    }
}

fn finish(total: f64, cost: DtwCost) -> f64 {
    match cost {
        DtwCost::Squared => total.sqrt(),
        DtwCost::Absolute => total,
    }
}

/// Optimal-alignment cost restricted to the band `|i - j| <= window`.
///
/// Two rolling rows, touching only band cells: O(d * window) time, O(d)
/// space. Out-of-band predecessors read as infinity; the path starts at
/// `(0, 0)` and ends at `(d-1, d-1)`.
pub fn dtw(x: &TimeSeries, y: &TimeSeries, config: &DtwConfig) -> Result<f64> {
    dtw_slices(x.values(), y.values(), config)
}

pub(crate) fn dtw_slices(x: &[f64], y: &[f64], config: &DtwConfig) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::UnequalLengths {
            left: x.len(),
            right: y.len(),
        });
    }
    let d = x.len();
    let w = config.window.min(d);

    let mut prev = vec![f64::INFINITY; d];
    let mut curr = vec![f64::INFINITY; d];
    // Band bounds of the previous row; row -1 has an empty band.
    let mut prev_band = 1..0;

    for i in 0..d {
        let lo = i.saturating_sub(w);
        let hi = (i + w).min(d - 1);
        for j in lo..=hi {
            let c = step_cost(x[i], y[j], config.cost);
            if i == 0 && j == 0 {
                curr[j] = c;
                continue;
            }
            let mut best = f64::INFINITY;
            if prev_band.contains(&j) {
                best = best.min(prev[j]);
            }
            if j > 0 && prev_band.contains(&(j - 1)) {
                best = best.min(prev[j - 1]);
            }
            if j > lo {
                best = best.min(curr[j - 1]);
            }
            curr[j] = c + best;
        }
        prev_band = lo..hi + 1;
        std::mem::swap(&mut prev, &mut curr);
    }

    Ok(finish(prev[d - 1], config.cost))
}

/// Exhaustive oracle: enumerates every monotone warping path inside the
/// band and returns the minimum cost. Exponential, so the series length is
/// capped at 10; must agree with [`dtw`] on its whole domain.
pub fn dtw_bruteforce(x: &TimeSeries, y: &TimeSeries, config: &DtwConfig) -> Result<f64> {
    let (xs, ys) = (x.values(), y.values());
    if xs.len() != ys.len() {
        return Err(Error::UnequalLengths {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let d = xs.len();
    if d > BRUTE_FORCE_MAX_LEN {
        return Err(Error::TooLongForEnumeration {
            len: d,
            max: BRUTE_FORCE_MAX_LEN,
        });
    }
    let w = config.window.min(d);

    fn walk(
        xs: &[f64],
        ys: &[f64],
        w: usize,
        cost: DtwCost,
        i: usize,
        j: usize,
        acc: f64,
        best: &mut f64,
    ) {
        let d = xs.len();
        let acc = acc + step_cost(xs[i], ys[j], cost);
        if i == d - 1 && j == d - 1 {
            if acc < *best {
                *best = acc;
            }
            return;
        }
        let in_band = |i: usize, j: usize| i.abs_diff(j) <= w;
        if i + 1 < d && in_band(i + 1, j) {
            walk(xs, ys, w, cost, i + 1, j, acc, best);
        }
        if j + 1 < d && in_band(i, j + 1) {
            walk(xs, ys, w, cost, i, j + 1, acc, best);
        }
        if i + 1 < d && j + 1 < d {
            walk(xs, ys, w, cost, i + 1, j + 1, acc, best);
        }
    }

    let mut best = f64::INFINITY;
    walk(xs, ys, w, config.cost, 0, 0, 0.0, &mut best);
    Ok(finish(best, config.cost))
}

/// Strategy wrapper for band-constrained [`dtw`].
#[derive(Debug, Clone, Copy)]
pub struct SakoeChibaDtw {
    config: DtwConfig,
}

impl SakoeChibaDtw {
    pub fn new(config: DtwConfig) -> Self {
        Self { config }
    }

    pub fn config(&self) -> &DtwConfig {
        &self.config
    }
}

impl DistanceMeasure for SakoeChibaDtw {
    fn name(&self) -> &'static str {
        "dtw"
    }

    fn distance(&self, x: &TimeSeries, y: &TimeSeries) -> Result<f64> {
        dtw(x, y, &self.config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(values: &[f64]) -> TimeSeries {
        TimeSeries::from_slice(values).unwrap()
    }

    #[test]
    fn identical_series_cost_zero() {
        let x = ts(&[1.0, 2.0, 3.0]);
        for w in 0..=3 {
            assert_eq!(dtw(&x, &x, &DtwConfig::new(w)).unwrap(), 0.0);
        }
    }

    #[test]
    fn zero_window_reduces_to_euclidean() {
        let x = ts(&[0.0, 0.0]);
        let y = ts(&[3.0, 4.0]);
        assert_eq!(dtw(&x, &y, &DtwConfig::new(0)).unwrap(), 5.0);
    }

    #[test]
    fn unconstrained_aligns_shifted_peak() {
        // x=[0,1,0,0], y=[0,0,1,0]: the peaks align exactly, cost 0.
        let x = ts(&[0.0, 1.0, 0.0, 0.0]);
        let y = ts(&[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(dtw(&x, &y, &DtwConfig::new(4)).unwrap(), 0.0);
        assert_eq!(dtw_bruteforce(&x, &y, &DtwConfig::new(4)).unwrap(), 0.0);
        // A zero-width band cannot warp and pays for both mismatches.
        let banded = dtw(&x, &y, &DtwConfig::new(0)).unwrap();
        assert!((banded - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn window_wider_than_series_is_clipped() {
        let x = ts(&[0.0, 1.0]);
        let y = ts(&[1.0, 0.0]);
        let a = dtw(&x, &y, &DtwConfig::new(2)).unwrap();
        let b = dtw(&x, &y, &DtwConfig::new(1000)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hand_computed_two_by_two() {
        // a=[0,1], b=[1,0], unconstrained:
        // C[0][0]=1, C[0][1]=1, C[1][0]=1, C[1][1]=1+min(1,1,1)=2 -> sqrt(2)
        let a = ts(&[0.0, 1.0]);
        let b = ts(&[1.0, 0.0]);
        let got = dtw(&a, &b, &DtwConfig::new(2)).unwrap();
        assert!((got - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn absolute_cost_mode() {
        // w=0: sum of |diffs| with no final root.
        let x = ts(&[0.0, 0.0]);
        let y = ts(&[3.0, 4.0]);
        let config = DtwConfig {
            window: 0,
            cost: DtwCost::Absolute,
        };
        assert_eq!(dtw(&x, &y, &config).unwrap(), 7.0);
        assert_eq!(dtw_bruteforce(&x, &y, &config).unwrap(), 7.0);
    }

    #[test]
    fn band_monotonicity() {
        let x = ts(&[0.0, 2.0, -1.0, 3.0, 0.5, -2.0]);
        let y = ts(&[1.0, -1.0, 2.0, 0.0, -2.0, 1.5]);
        let mut last = f64::INFINITY;
        for w in 0..=6 {
            let d = dtw(&x, &y, &DtwConfig::new(w)).unwrap();
            assert!(d <= last, "w={w}: {d} > {last}");
            last = d;
        }
    }

    #[test]
    fn brute_force_matches_dp_on_small_inputs() {
        // Deterministic pseudo-random small instances, every window.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 8.0 - 4.0
        };
        for d in 1..=6 {
            for _ in 0..20 {
                let x = ts(&(0..d).map(|_| next()).collect::<Vec<_>>());
                let y = ts(&(0..d).map(|_| next()).collect::<Vec<_>>());
                for w in 0..=d {
                    let config = DtwConfig::new(w);
                    let a = dtw(&x, &y, &config).unwrap();
                    let b = dtw_bruteforce(&x, &y, &config).unwrap();
                    assert_eq!(a, b, "d={d} w={w}");
                }
            }
        }
    }

    #[test]
    fn brute_force_rejects_long_series() {
        let x = ts(&vec![0.0; 11]);
        let err = dtw_bruteforce(&x, &x, &DtwConfig::new(11)).unwrap_err();
        assert!(matches!(err, Error::TooLongForEnumeration { len: 11, .. }));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let x = ts(&[1.0]);
        let y = ts(&[1.0, 2.0]);
        assert!(dtw(&x, &y, &DtwConfig::new(1)).is_err());
        assert!(dtw_bruteforce(&x, &y, &DtwConfig::new(1)).is_err());
    }
}
