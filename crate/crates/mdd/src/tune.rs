//! Parameter tuning: exhaustive leave-one-out search over DTW windows and
//! over every non-empty subset of the epsilon search space.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{loocv_accuracy_from_matrix, pairwise_distances, DistanceMatrix};
use crate::envelope::{envelopes_at_radii, Envelope, EpsilonConvention, EpsilonSet};
use crate::error::{Error, Result};
use crate::measure::dubuc::{aggregate_ratios, ratio_from_envelopes};
use crate::measure::{DeltaNormalization, DtwConfig, DtwCost, MeasureSpec, SakoeChibaDtw};
use crate::series::LabeledDataset;

/// One evaluated candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuningEntry {
    pub spec: MeasureSpec,
    pub accuracy: f64,
}

/// Best parameters found by an exhaustive search, with the full log.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuningResult {
    pub best: MeasureSpec,
    pub expected_accuracy: f64,
    pub log: Vec<TuningEntry>,
}

/// All powers of two no larger than `eta * d`, ascending.
pub fn epsilon_search_space(d: usize, eta: f64) -> Result<Vec<u32>> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eta must be in (0, 1], got {eta}"
        )));
    }
    let limit = eta * d as f64;
    let mut scales = Vec::new();
    let mut power: u64 = 1;
    while power as f64 <= limit {
        scales.push(power as u32);
        power *= 2;
    }
    if scales.is_empty() {
        return Err(Error::EtaTooSmall { limit });
    }
    Ok(scales)
}

/// Cached per-pair intersection ratios for every scale of a search space.
///
/// Envelopes are built once per series per scale and reused across all
/// pair evaluations; any ladder subset can then be scored without touching
/// the raw series again.
pub struct RatioTable {
    n: usize,
    scale_count: usize,
    // ratios[(i * n + j) * scale_count + s] = r(x_i, x_j, scales[s])
    ratios: Vec<f64>,
}

impl RatioTable {
    pub fn build(
        data: &LabeledDataset,
        scales: &[u32],
        convention: EpsilonConvention,
    ) -> Result<Self> {
        let radii = scales
            .iter()
            .map(|&eps| convention.radius(eps))
            .collect::<Result<Vec<u32>>>()?;
        let envelopes: Vec<Vec<Envelope>> = data
            .series()
            .par_iter()
            .map(|s| envelopes_at_radii(s.values(), &radii))
            .collect::<Result<Vec<_>>>()?;

        let n = data.len();
        let scale_count = scales.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let computed: Vec<(usize, usize, Vec<f64>)> = pairs
            .into_par_iter()
            .map(|(i, j)| {
                let rs = envelopes[i]
                    .iter()
                    .zip(&envelopes[j])
                    .map(|(ex, ey)| ratio_from_envelopes(ex, ey))
                    .collect();
                (i, j, rs)
            })
            .collect();

        let mut ratios = vec![1.0; n * n * scale_count];
        for (i, j, rs) in computed {
            for (s, r) in rs.into_iter().enumerate() {
                ratios[(i * n + j) * scale_count + s] = r;
                ratios[(j * n + i) * scale_count + s] = r;
            }
        }
        Ok(Self {
            n,
            scale_count,
            ratios,
        })
    }

    fn pair_ratios(&self, i: usize, j: usize) -> &[f64] {
        let base = (i * self.n + j) * self.scale_count;
        &self.ratios[base..base + self.scale_count]
    }

    /// Distance matrix for a subset of the cached scales, given by index.
    fn distance_matrix(&self, subset: &[usize], normalization: DeltaNormalization) -> DistanceMatrix {
        let mut scratch = vec![0.0; subset.len()];
        let mut matrix = DistanceMatrix::zeros(self.n);
        // Sequential fill: the aggregation over cached ratios is too cheap
        // to be worth parallel dispatch.
        for i in 0..self.n {
            for j in i + 1..self.n {
                let rs = self.pair_ratios(i, j);
                for (slot, &s) in scratch.iter_mut().zip(subset) {
                    *slot = rs[s];
                }
                let d = 1.0 - aggregate_ratios(&scratch, normalization);
                matrix.set_symmetric(i, j, d);
            }
        }
        matrix
    }
}

/// Exhaustive search over every non-empty subset of the epsilon search
/// space. Ties break toward larger subsets, then lexicographically
/// smallest scales.
pub fn tune_mdd(train: &LabeledDataset, eta: f64) -> Result<TuningResult> {
    tune_mdd_with(
        train,
        eta,
        EpsilonConvention::default(),
        DeltaNormalization::default(),
    )
}

pub fn tune_mdd_with(
    train: &LabeledDataset,
    eta: f64,
    convention: EpsilonConvention,
    normalization: DeltaNormalization,
) -> Result<TuningResult> {
    if train.len() < 2 {
        return Err(Error::TooFewInstances {
            needed: 2,
            got: train.len(),
        });
    }
    let space = epsilon_search_space(train.series_len(), eta)?;
    let table = RatioTable::build(train, &space, convention)?;

    let mut log = Vec::with_capacity((1usize << space.len()) - 1);
    let mut best: Option<(f64, usize, Vec<u32>)> = None;

    for mask in 1u32..(1u32 << space.len()) {
        let subset_indices: Vec<usize> =
            (0..space.len()).filter(|&s| mask >> s & 1 == 1).collect();
        let subset_scales: Vec<u32> = subset_indices.iter().map(|&s| space[s]).collect();

        let matrix = table.distance_matrix(&subset_indices, normalization);
        let accuracy = loocv_accuracy_from_matrix(&matrix, train.labels())?;

        log.push(TuningEntry {
            spec: MeasureSpec::Mdd {
                epsilons: EpsilonSet::new(subset_scales.clone())?,
                convention,
                normalization,
            },
            accuracy,
        });

        let better = match &best {
            None => true,
            Some((best_acc, best_card, best_scales)) => {
                accuracy > *best_acc
                    || (accuracy == *best_acc
                        && (subset_scales.len() > *best_card
                            || (subset_scales.len() == *best_card
                                && subset_scales.as_slice() < best_scales.as_slice())))
            }
        };
        if better {
            best = Some((accuracy, subset_scales.len(), subset_scales));
        }
    }

    let (accuracy, _, scales) = best.expect("search space is non-empty");
    Ok(TuningResult {
        best: MeasureSpec::Mdd {
            epsilons: EpsilonSet::new(scales)?,
            convention,
            normalization,
        },
        expected_accuracy: accuracy,
        log,
    })
}

/// Exhaustive search over window sizes `0..=max_window`. Ties break
/// toward the smaller window.
pub fn tune_dtw(train: &LabeledDataset, max_window: usize) -> Result<TuningResult> {
    tune_dtw_with(train, max_window, DtwCost::default())
}

pub fn tune_dtw_with(
    train: &LabeledDataset,
    max_window: usize,
    cost: DtwCost,
) -> Result<TuningResult> {
    if train.len() < 2 {
        return Err(Error::TooFewInstances {
            needed: 2,
            got: train.len(),
        });
    }
    if max_window > train.series_len() {
        return Err(Error::InvalidParameter(format!(
            "max window {max_window} exceeds series length {}",
            train.series_len()
        )));
    }

    let mut log = Vec::with_capacity(max_window + 1);
    let mut best: Option<(f64, usize)> = None;

    for window in 0..=max_window {
        let measure = SakoeChibaDtw::new(DtwConfig { window, cost });
        let matrix = pairwise_distances(train.series(), &measure)?;
        let accuracy = loocv_accuracy_from_matrix(&matrix, train.labels())?;
        log.push(TuningEntry {
            spec: MeasureSpec::Dtw { window, cost },
            accuracy,
        });
        // Strict improvement keeps the earliest (smallest) window on ties.
        if best.is_none_or(|(best_acc, _)| accuracy > best_acc) {
            best = Some((accuracy, window));
        }
    }

    let (accuracy, window) = best.expect("at least window 0 evaluated");
    Ok(TuningResult {
        best: MeasureSpec::Dtw { window, cost },
        expected_accuracy: accuracy,
        log,
    })
}
