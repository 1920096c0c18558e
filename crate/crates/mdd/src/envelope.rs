//! Envelopes: per-timestep upper/lower bounds of a series over a sliding
//! neighborhood, the multiscale primitive behind the Dubuc similarity.
//!
//! The neighborhood of timestep `t` at scale `epsilon` is every index `s`
//! with `|t - s| <= epsilon`, clipped to the series extent. Bounds are
//! computed with a monotone double-ended queue in O(d) per scale, and a
//! whole ascending scale ladder is built incrementally: dilating a
//! radius-`a` envelope by radius `b` yields the radius-`a+b` envelope.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sliding-window maximum with a centered window of the given radius,
/// clipped at the boundaries: `out[t] = max(a[max(0, t-r) ..= min(d-1, t+r)])`.
///
/// Amortized O(d) via a monotone deque of candidate indices.
pub fn sliding_window_max(values: &[f64], radius: usize) -> Vec<f64> {
    sliding_extremum(values, radius, |cand, new| cand <= new)
}

/// Sliding-window minimum, mirror of [`sliding_window_max`].
pub fn sliding_window_min(values: &[f64], radius: usize) -> Vec<f64> {
    sliding_extremum(values, radius, |cand, new| cand >= new)
}

fn sliding_extremum(values: &[f64], radius: usize, evict: impl Fn(f64, f64) -> bool) -> Vec<f64> {
    let d = values.len();
    let mut out = vec![0.0; d];
    // Deque holds indices whose values are strictly "better" front to back.
    let mut deque: VecDeque<usize> = VecDeque::new();
    for j in 0..d + radius {
        if j < d {
            while let Some(&back) = deque.back() {
                if evict(values[back], values[j]) {
                    deque.pop_back();
                } else {
                    break;
                }
            }
            deque.push_back(j);
        }
        if j >= radius {
            let t = j - radius;
            while let Some(&front) = deque.front() {
                if front + radius < t {
                    deque.pop_front();
                } else {
                    break;
                }
            }
            out[t] = values[*deque.front().expect("window never empty")];
        }
    }
    out
}

/// Per-timestep upper and lower bounds of a series at one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    epsilon: u32,
    upper: Vec<f64>,
    lower: Vec<f64>,
}

impl Envelope {
    /// The scale (neighborhood radius) this envelope was built with.
    pub fn epsilon(&self) -> u32 {
        self.epsilon
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    /// Widen this envelope by an extra radius. Dilation composes:
    /// `envelope_bounds(x, a).dilate(b)` equals `envelope_bounds(x, a + b)`.
    pub fn dilate(&self, extra_radius: u32) -> Envelope {
        Envelope {
            epsilon: self.epsilon + extra_radius,
            upper: sliding_window_max(&self.upper, extra_radius as usize),
            lower: sliding_window_min(&self.lower, extra_radius as usize),
        }
    }
}

/// Upper/lower bounds of `values` over the inclusive neighborhood
/// `|t - s| <= epsilon`, clipped to the series extent.
pub fn envelope_bounds(values: &[f64], epsilon: u32) -> Result<Envelope> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(Envelope {
        epsilon,
        upper: sliding_window_max(values, epsilon as usize),
        lower: sliding_window_min(values, epsilon as usize),
    })
}

/// Envelopes at every radius of a strictly increasing ladder, built
/// incrementally by composing dilations. O(d) per radius.
pub fn envelopes_at_radii(values: &[f64], radii: &[u32]) -> Result<Vec<Envelope>> {
    let mut out: Vec<Envelope> = Vec::with_capacity(radii.len());
    for &radius in radii {
        let env = match out.last() {
            Some(prev) => {
                debug_assert!(radius > prev.epsilon());
                prev.dilate(radius - prev.epsilon())
            }
            None => envelope_bounds(values, radius)?,
        };
        out.push(env);
    }
    Ok(out)
}

/// Ordered set of scales compared by the multiscale similarity.
///
/// Scales are non-negative and strictly increasing; the tuning search uses
/// powers of two by convention, but any ladder is accepted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct EpsilonSet {
    scales: Vec<u32>,
}

impl EpsilonSet {
    pub fn new(scales: Vec<u32>) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::EmptyEpsilonSet);
        }
        for pair in scales.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::NonIncreasingScales {
                    prev: pair[0],
                    next: pair[1],
                });
            }
        }
        Ok(Self { scales })
    }

    pub fn from_slice(scales: &[u32]) -> Result<Self> {
        Self::new(scales.to_vec())
    }

    pub fn scales(&self) -> &[u32] {
        &self.scales
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }
}

impl TryFrom<Vec<u32>> for EpsilonSet {
    type Error = Error;

    fn try_from(scales: Vec<u32>) -> Result<Self> {
        Self::new(scales)
    }
}

impl From<EpsilonSet> for Vec<u32> {
    fn from(set: EpsilonSet) -> Self {
        set.scales
    }
}

impl fmt::Display for EpsilonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.scales.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for EpsilonSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let scales = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidParameter(format!("invalid epsilon `{part}`")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Self::new(scales)
    }
}

/// How a scale value maps to a neighborhood.
///
/// `Inclusive` is the radius reading `|t - s| <= epsilon`. `Strict` uses
/// `|t - s| < epsilon`, so `epsilon = 1` reproduces the raw series; it is
/// implemented by shrinking the radius by one and rejects `epsilon = 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonConvention {
    #[default]
    Inclusive,
    Strict,
}

impl EpsilonConvention {
    /// Effective inclusive radius for a scale under this convention.
    pub fn radius(&self, epsilon: u32) -> Result<u32> {
        match self {
            EpsilonConvention::Inclusive => Ok(epsilon),
            EpsilonConvention::Strict => epsilon
                .checked_sub(1)
                .ok_or(Error::InvalidEpsilonForConvention { epsilon }),
        }
    }
}

impl fmt::Display for EpsilonConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonConvention::Inclusive => write!(f, "inclusive"),
            EpsilonConvention::Strict => write!(f, "strict"),
        }
    }
}

impl FromStr for EpsilonConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inclusive" => Ok(EpsilonConvention::Inclusive),
            "strict" => Ok(EpsilonConvention::Strict),
            other => Err(Error::InvalidParameter(format!(
                "unknown epsilon convention `{other}` (expected inclusive or strict)"
            ))),
        }
    }
}

/// Naive reference for the envelope: per-timestep scan of the clipped
/// neighborhood, O(d * epsilon). Kept public for oracle-style checks.
pub fn envelope_bounds_naive(values: &[f64], epsilon: u32) -> Result<Envelope> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = values.len();
    let r = epsilon as usize;
    let mut upper = Vec::with_capacity(d);
    let mut lower = Vec::with_capacity(d);
    for t in 0..d {
        let lo = t.saturating_sub(r);
        let hi = (t + r).min(d - 1);
        let window = &values[lo..=hi];
        upper.push(window.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        lower.push(window.iter().cloned().fold(f64::INFINITY, f64::min));
    }
    Ok(Envelope { epsilon, upper, lower })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_match_worked_example() {
        // x=[1,3,2], eps=1 -> upper=[3,3,3], lower=[1,1,2]
        let env = envelope_bounds(&[1.0, 3.0, 2.0], 1).unwrap();
        assert_eq!(env.upper(), &[3.0, 3.0, 3.0]);
        assert_eq!(env.lower(), &[1.0, 1.0, 2.0]);
    }

    #[test]
    fn radius_zero_is_identity() {
        let x = [1.0, 3.0, 2.0];
        let env = envelope_bounds(&x, 0).unwrap();
        assert_eq!(env.upper(), &x);
        assert_eq!(env.lower(), &x);
    }

    #[test]
    fn constant_series_collapses() {
        let env = envelope_bounds(&[5.0, 5.0, 5.0], 2).unwrap();
        assert_eq!(env.upper(), &[5.0, 5.0, 5.0]);
        assert_eq!(env.lower(), &[5.0, 5.0, 5.0]);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(envelope_bounds(&[], 1), Err(Error::EmptyInput)));
    }

    #[test]
    fn radius_larger_than_series_covers_everything() {
        let env = envelope_bounds(&[1.0, -4.0, 2.0], 100).unwrap();
        assert_eq!(env.upper(), &[2.0, 2.0, 2.0]);
        assert_eq!(env.lower(), &[-4.0, -4.0, -4.0]);
    }

    #[test]
    fn dilation_composes() {
        let x: Vec<f64> = (0..50).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        for (a, b) in [(1u32, 1u32), (1, 2), (2, 4), (3, 5)] {
            let direct = envelope_bounds(&x, a + b).unwrap();
            let composed = envelope_bounds(&x, a).unwrap().dilate(b);
            assert_eq!(direct, composed, "radius {a}+{b}");
        }
    }

    #[test]
    fn ladder_matches_direct_construction() {
        let x: Vec<f64> = (0..64).map(|i| (i as f64 * 0.7).sin()).collect();
        let radii = [0u32, 1, 2, 4, 8, 16];
        let ladder = envelopes_at_radii(&x, &radii).unwrap();
        for (env, &r) in ladder.iter().zip(&radii) {
            assert_eq!(env, &envelope_bounds(&x, r).unwrap(), "radius {r}");
        }
    }

    #[test]
    fn epsilon_set_validation() {
        assert!(matches!(EpsilonSet::new(vec![]), Err(Error::EmptyEpsilonSet)));
        assert!(matches!(
            EpsilonSet::new(vec![1, 1]),
            Err(Error::NonIncreasingScales { .. })
        ));
        assert!(matches!(
            EpsilonSet::new(vec![4, 2]),
            Err(Error::NonIncreasingScales { .. })
        ));
        assert!(EpsilonSet::new(vec![0, 1, 2]).is_ok());
        let set: EpsilonSet = "1, 2,4".parse().unwrap();
        assert_eq!(set.scales(), &[1, 2, 4]);
        assert_eq!(set.to_string(), "1,2,4");
    }

    #[test]
    fn strict_convention_shifts_radius() {
        assert_eq!(EpsilonConvention::Inclusive.radius(0).unwrap(), 0);
        assert_eq!(EpsilonConvention::Strict.radius(1).unwrap(), 0);
        assert_eq!(EpsilonConvention::Strict.radius(4).unwrap(), 3);
        assert!(EpsilonConvention::Strict.radius(0).is_err());
    }
}
