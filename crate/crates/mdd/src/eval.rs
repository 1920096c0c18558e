//! Evaluation: confusion counts, precision/recall/F1, the true skill
//! statistic, accuracy gains with sharpshooter regions, win significance,
//! and within-class variability.

use std::fmt;

use serde::Serialize;

use crate::classify::DistanceMatrix;
use crate::error::{Error, Result};
use crate::measure::euclidean::eud_slices;
use crate::measure::MeasureSpec;
use crate::series::TimeSeries;

/// One-vs-rest confusion counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConfusionCounts {
    #[serde(rename = "tp")]
    pub true_pos: u64,
    #[serde(rename = "fp")]
    pub false_pos: u64,
    #[serde(rename = "fn")]
    pub false_neg: u64,
    #[serde(rename = "tn")]
    pub true_neg: u64,
}

impl ConfusionCounts {
    pub fn new(true_pos: u64, false_pos: u64, false_neg: u64, true_neg: u64) -> Self {
        Self {
            true_pos,
            false_pos,
            false_neg,
            true_neg,
        }
    }

    /// Actual positives.
    pub fn p(&self) -> u64 {
        self.true_pos + self.false_neg
    }

    /// Actual negatives.
    pub fn n(&self) -> u64 {
        self.false_pos + self.true_neg
    }
}

/// Count one-vs-rest outcomes for a single positive class.
pub fn confusion_one_vs_rest(
    predicted: &[i64],
    actual: &[i64],
    positive_class: i64,
) -> Result<ConfusionCounts> {
    if predicted.len() != actual.len() {
        return Err(Error::UnequalLengths {
            left: predicted.len(),
            right: actual.len(),
        });
    }
    let mut counts = ConfusionCounts::new(0, 0, 0, 0);
    for (&p, &a) in predicted.iter().zip(actual) {
        match (p == positive_class, a == positive_class) {
            (true, true) => counts.true_pos += 1,
            (true, false) => counts.false_pos += 1,
            (false, true) => counts.false_neg += 1,
            (false, false) => counts.true_neg += 1,
        }
    }
    Ok(counts)
}

/// Precision, recall, and their harmonic mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf1 {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Scores with the zero-denominator convention: undefined ratios are 0.
pub fn prf1(counts: &ConfusionCounts) -> Prf1 {
    let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let precision = ratio(counts.true_pos, counts.true_pos + counts.false_pos);
    let recall = ratio(counts.true_pos, counts.true_pos + counts.false_neg);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Prf1 {
        precision,
        recall,
        f1,
    }
}

/// True skill statistic: true-positive rate minus false-positive rate.
/// Undefined when either class is absent.
pub fn tss(counts: &ConfusionCounts) -> Result<f64> {
    let (p, n) = (counts.p(), counts.n());
    if p == 0 || n == 0 {
        return Err(Error::UndefinedSkillScore { p, n });
    }
    Ok(counts.true_pos as f64 / p as f64 - counts.false_pos as f64 / n as f64)
}

/// Ratio of two accuracies; applied identically to expected and actual
/// accuracies.
pub fn accuracy_gain(acc_mu1: f64, acc_mu2: f64) -> Result<f64> {
    if !(acc_mu2 > 0.0) {
        return Err(Error::ZeroAccuracy);
    }
    Ok(acc_mu1 / acc_mu2)
}

/// Quadrant of the sharpshooter plane. Gains exactly at 1 fall on the
/// non-win side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    #[serde(rename = "TP")]
    Tp,
    #[serde(rename = "FP")]
    Fp,
    #[serde(rename = "FN")]
    Fn,
    #[serde(rename = "TN")]
    Tn,
}

impl Region {
    pub fn of(expected_gain: f64, actual_gain: f64) -> Region {
        match (expected_gain > 1.0, actual_gain > 1.0) {
            (true, true) => Region::Tp,
            (true, false) => Region::Fp,
            (false, true) => Region::Fn,
            (false, false) => Region::Tn,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Tp => write!(f, "TP"),
            Region::Fp => write!(f, "FP"),
            Region::Fn => write!(f, "FN"),
            Region::Tn => write!(f, "TN"),
        }
    }
}

/// Expected and actual accuracies of two measures on one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct GainInput {
    pub dataset: String,
    pub expected_mu1: f64,
    pub expected_mu2: f64,
    pub actual_mu1: f64,
    pub actual_mu2: f64,
}

/// One dataset's gains of measure 1 over measure 2, with its region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpshooterPoint {
    pub dataset: String,
    pub expected_gain: f64,
    pub actual_gain: f64,
    pub region: Region,
}

/// Gains and regions for a batch of datasets; plot-ready records.
pub fn sharpshooter(rows: &[GainInput]) -> Result<Vec<SharpshooterPoint>> {
    rows.iter()
        .map(|row| {
            if !(row.expected_mu1 > 0.0 && row.actual_mu1 > 0.0) {
                return Err(Error::ZeroAccuracy);
            }
            let expected_gain = accuracy_gain(row.expected_mu1, row.expected_mu2)?;
            let actual_gain = accuracy_gain(row.actual_mu1, row.actual_mu2)?;
            Ok(SharpshooterPoint {
                dataset: row.dataset.clone(),
                expected_gain,
                actual_gain,
                region: Region::of(expected_gain, actual_gain),
            })
        })
        .collect()
}

/// Aggregate distance of winning gain points from the no-gain point (1, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WinSignificance {
    pub count: usize,
    pub total: f64,
    pub mean: f64,
    /// Population standard deviation of the per-point distances.
    pub stddev: f64,
}

/// Sum, mean, and spread of the Euclidean distances of qualifying points
/// (both gains at least 1) from (1, 1). Errors when nothing qualifies.
pub fn win_significance(points: &[SharpshooterPoint]) -> Result<WinSignificance> {
    let distances: Vec<f64> = points
        .iter()
        .filter(|p| p.actual_gain >= 1.0 && p.expected_gain >= 1.0)
        .map(|p| {
            let dg = p.actual_gain - 1.0;
            let de = p.expected_gain - 1.0;
            (dg * dg + de * de).sqrt()
        })
        .collect();
    if distances.is_empty() {
        return Err(Error::EmptyQualifyingSet);
    }
    let count = distances.len();
    let total: f64 = distances.iter().sum();
    let mean = total / count as f64;
    let variance = distances.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / count as f64;
    Ok(WinSignificance {
        count,
        total,
        mean,
        stddev: variance.sqrt(),
    })
}

/// Mean pairwise Euclidean distance among the series of one class.
pub fn within_class_variability(class_series: &[TimeSeries]) -> Result<f64> {
    let n = class_series.len();
    if n < 2 {
        return Err(Error::TooFewInstances { needed: 2, got: n });
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += eud_slices(class_series[i].values(), class_series[j].values())?;
        }
    }
    Ok(2.0 * sum / (n * (n - 1)) as f64)
}

/// The full pairwise Euclidean matrix behind the variability score, for
/// distribution plots.
pub fn euclidean_distance_matrix(series: &[TimeSeries]) -> Result<DistanceMatrix> {
    DistanceMatrix::from_pairwise(series.len(), |i, j| {
        eud_slices(series[i].values(), series[j].values())
    })
}

/// Per-class one-vs-rest scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub label: i64,
    #[serde(flatten)]
    pub counts: ConfusionCounts,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Square confusion matrix over the sorted class labels; rows are actual
/// classes, columns predicted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<i64>,
    pub counts: Vec<Vec<u64>>,
}

/// Classification outcome of one experiment, serializable as a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub dataset: String,
    pub measure: MeasureSpec,
    pub accuracy: f64,
    pub classes: Vec<ClassReport>,
    pub confusion: ConfusionMatrix,
    /// Present only for binary tasks.
    pub tss: Option<f64>,
}

/// Score predictions against ground truth: overall accuracy, per-class
/// precision/recall/F1, the confusion matrix, and TSS for binary tasks.
pub fn evaluate_predictions(
    dataset: &str,
    measure: &MeasureSpec,
    actual: &[i64],
    predicted: &[i64],
) -> Result<EvalReport> {
    if predicted.len() != actual.len() {
        return Err(Error::UnequalLengths {
            left: predicted.len(),
            right: actual.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut labels: Vec<i64> = actual.iter().chain(predicted).copied().collect();
    labels.sort_unstable();
    labels.dedup();

    let correct = predicted
        .iter()
        .zip(actual)
        .filter(|(p, a)| p == a)
        .count();
    let accuracy = correct as f64 / actual.len() as f64;

    let classes = labels
        .iter()
        .map(|&label| {
            let counts = confusion_one_vs_rest(predicted, actual, label)?;
            let scores = prf1(&counts);
            Ok(ClassReport {
                label,
                counts,
                precision: scores.precision,
                recall: scores.recall,
                f1: scores.f1,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let index_of = |label: i64| labels.binary_search(&label).expect("label is present");
    let mut counts = vec![vec![0u64; labels.len()]; labels.len()];
    for (&p, &a) in predicted.iter().zip(actual) {
        counts[index_of(a)][index_of(p)] += 1;
    }

    // TSS only when the task is binary in the ground truth, which
    // guarantees both actual counts are positive. Swap-invariant, so the
    // choice of positive class does not matter.
    let distinct_actual = {
        let mut v = actual.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let tss_value = if distinct_actual.len() == 2 {
        Some(tss(&confusion_one_vs_rest(
            predicted,
            actual,
            distinct_actual[0],
        )?)?)
    } else {
        None
    };

    Ok(EvalReport {
        dataset: dataset.to_string(),
        measure: measure.clone(),
        accuracy,
        classes,
        confusion: ConfusionMatrix {
            labels,
            counts,
        },
        tss: tss_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_all_correct() {
        let actual = [1, 1, 1, 0, 0];
        let counts = confusion_one_vs_rest(&actual, &actual, 1).unwrap();
        assert_eq!(counts, ConfusionCounts::new(3, 0, 0, 2));
    }

    #[test]
    fn confusion_all_predicted_positive() {
        let predicted = [1, 1, 1, 1];
        let actual = [1, 0, 0, 0];
        let counts = confusion_one_vs_rest(&predicted, &actual, 1).unwrap();
        assert_eq!(counts, ConfusionCounts::new(1, 3, 0, 0));
    }

    #[test]
    fn prf1_reference_rows() {
        // tp=173 fp=47 fn=0 -> 0.79 / 1.0 / 0.88 at two decimals.
        let s = prf1(&ConfusionCounts::new(173, 47, 0, 0));
        assert!((s.precision - 173.0 / 220.0).abs() < 1e-15);
        assert_eq!(s.recall, 1.0);
        assert!((s.f1 - 0.88).abs() < 0.005);

        // tp=113 fp=0 fn=44 -> 1.0 / 0.72 / 0.84 at two decimals.
        let s = prf1(&ConfusionCounts::new(113, 0, 44, 0));
        assert_eq!(s.precision, 1.0);
        assert!((s.recall - 0.72).abs() < 0.005);
        assert!((s.f1 - 0.84).abs() < 0.005);
    }

    #[test]
    fn prf1_degenerate_convention() {
        let s = prf1(&ConfusionCounts::new(0, 0, 0, 5));
        assert_eq!((s.precision, s.recall, s.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn tss_reference_cases() {
        // Perfect classifier.
        assert_eq!(tss(&ConfusionCounts::new(10, 0, 0, 7)).unwrap(), 1.0);
        // Constant-positive classifier has no skill.
        assert_eq!(tss(&ConfusionCounts::new(10, 7, 0, 0)).unwrap(), 0.0);
        // Swap-invariance under exchanging the positive class.
        let a = tss(&ConfusionCounts::new(8, 3, 2, 7)).unwrap();
        let b = tss(&ConfusionCounts::new(7, 2, 3, 8)).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn tss_undefined_without_both_classes() {
        assert!(tss(&ConfusionCounts::new(5, 0, 1, 0)).is_err());
        assert!(tss(&ConfusionCounts::new(0, 4, 0, 2)).is_err());
    }

    #[test]
    fn gain_examples() {
        assert_eq!(accuracy_gain(0.8, 0.8).unwrap(), 1.0);
        assert!((accuracy_gain(0.82, 0.75).unwrap() - 1.0933333333333333).abs() < 1e-15);
        assert_eq!(accuracy_gain(0.5, 1.0).unwrap(), 0.5);
        assert!(accuracy_gain(0.5, 0.0).is_err());
    }

    #[test]
    fn gain_reciprocity() {
        let g = accuracy_gain(0.9, 0.7).unwrap();
        let h = accuracy_gain(0.7, 0.9).unwrap();
        assert!((g * h - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regions_cover_all_quadrants() {
        assert_eq!(Region::of(1.1, 1.2), Region::Tp);
        assert_eq!(Region::of(1.1, 0.9), Region::Fp);
        assert_eq!(Region::of(0.9, 1.1), Region::Fn);
        assert_eq!(Region::of(0.9, 0.9), Region::Tn);
        // Boundary goes to the non-win side.
        assert_eq!(Region::of(1.0, 1.0), Region::Tn);
        assert_eq!(Region::of(1.0, 1.2), Region::Fn);
        assert_eq!(Region::of(1.2, 1.0), Region::Fp);
    }

    #[test]
    fn win_significance_single_point() {
        let points = vec![SharpshooterPoint {
            dataset: "a".into(),
            expected_gain: 1.15,
            actual_gain: 1.15,
            region: Region::Tp,
        }];
        let w = win_significance(&points).unwrap();
        assert!((w.total - 0.15 * 2.0_f64.sqrt()).abs() < 1e-12);
        assert_eq!(w.count, 1);
        assert_eq!(w.stddev, 0.0);
    }

    #[test]
    fn win_significance_no_gain_point_counts_as_zero() {
        let points = vec![SharpshooterPoint {
            dataset: "a".into(),
            expected_gain: 1.0,
            actual_gain: 1.0,
            region: Region::Tn,
        }];
        let w = win_significance(&points).unwrap();
        assert_eq!(w.total, 0.0);
        assert_eq!(w.count, 1);
    }

    #[test]
    fn win_significance_filters_and_errors_when_empty() {
        let losing = vec![SharpshooterPoint {
            dataset: "a".into(),
            expected_gain: 0.9,
            actual_gain: 1.2,
            region: Region::Fn,
        }];
        assert!(matches!(
            win_significance(&losing),
            Err(Error::EmptyQualifyingSet)
        ));
    }

    #[test]
    fn variability_examples() {
        let ts = |v: &[f64]| TimeSeries::from_slice(v).unwrap();
        assert_eq!(
            within_class_variability(&[ts(&[1.0, 2.0]), ts(&[1.0, 2.0])]).unwrap(),
            0.0
        );
        assert_eq!(
            within_class_variability(&[ts(&[0.0, 0.0]), ts(&[3.0, 4.0])]).unwrap(),
            5.0
        );
        let got = within_class_variability(&[ts(&[0.0]), ts(&[1.0]), ts(&[2.0])]).unwrap();
        assert!((got - 4.0 / 3.0).abs() < 1e-15);
        assert!(within_class_variability(&[ts(&[0.0])]).is_err());
    }

    #[test]
    fn report_on_binary_task() {
        let actual = [1, 1, 2, 2];
        let predicted = [1, 2, 2, 2];
        let report =
            evaluate_predictions("toy", &MeasureSpec::Eud, &actual, &predicted).unwrap();
        assert_eq!(report.accuracy, 0.75);
        assert!(report.tss.is_some());
        assert_eq!(report.confusion.labels, vec![1, 2]);
        assert_eq!(report.confusion.counts, vec![vec![1, 1], vec![0, 2]]);
        let class1 = &report.classes[0];
        assert_eq!(class1.label, 1);
        assert_eq!(class1.counts, ConfusionCounts::new(1, 0, 1, 2));
    }

    #[test]
    fn report_skips_tss_for_multiclass() {
        let actual = [1, 2, 3];
        let predicted = [1, 2, 3];
        let report =
            evaluate_predictions("toy", &MeasureSpec::Eud, &actual, &predicted).unwrap();
        assert_eq!(report.accuracy, 1.0);
        assert!(report.tss.is_none());
    }
}
