//! 1-nearest-neighbor classification and leave-one-out cross-validation.
//!
//! All-pairs distances are computed once into a symmetric matrix and
//! reused; the pair evaluations are pure, so they run in parallel over
//! disjoint cells and the result is bit-identical to a sequential pass.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::DistanceMeasure;
use crate::series::{LabeledDataset, TimeSeries};

/// Dense symmetric matrix of pairwise distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Number of instances.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// All-zero matrix, filled in by callers that compute distances from
    /// cached intermediates.
    pub(crate) fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![0.0; n * n],
        }
    }

    pub(crate) fn set_symmetric(&mut self, i: usize, j: usize, d: f64) {
        self.values[i * self.n + j] = d;
        self.values[j * self.n + i] = d;
    }

    /// Build from a pairwise distance function evaluated on the upper
    /// triangle in parallel and mirrored.
    pub fn from_pairwise<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<f64> + Sync,
    {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let computed: Vec<(usize, usize, f64)> = pairs
            .into_par_iter()
            .map(|(i, j)| f(i, j).map(|d| (i, j, d)))
            .collect::<Result<Vec<_>>>()?;
        let mut values = vec![0.0; n * n];
        for (i, j, d) in computed {
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
        Ok(Self { n, values })
    }
}

/// All-pairs distances for a set of series under one measure.
pub fn pairwise_distances(
    series: &[TimeSeries],
    measure: &dyn DistanceMeasure,
) -> Result<DistanceMatrix> {
    DistanceMatrix::from_pairwise(series.len(), |i, j| measure.distance(&series[i], &series[j]))
}

/// Index of the smallest value, scanning in order so that ties go to the
/// lowest index.
fn argmin<I: Iterator<Item = (usize, f64)>>(iter: I) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (idx, value) in iter {
        match best {
            Some((_, b)) if value >= b => {}
            _ => best = Some((idx, value)),
        }
    }
    best.map(|(idx, _)| idx)
}

/// Label of the training series nearest to the query. Ties break toward
/// the lowest training index.
pub fn knn_classify(
    train: &LabeledDataset,
    query: &TimeSeries,
    measure: &dyn DistanceMeasure,
) -> Result<i64> {
    if query.len() != train.series_len() {
        return Err(Error::UnequalLengths {
            left: train.series_len(),
            right: query.len(),
        });
    }
    let mut distances = Vec::with_capacity(train.len());
    for (idx, candidate) in train.series().iter().enumerate() {
        distances.push((idx, measure.distance(candidate, query)?));
    }
    let nearest = argmin(distances.into_iter()).expect("dataset is non-empty");
    Ok(train.labels()[nearest])
}

/// Leave-one-out accuracy computed from a precomputed distance matrix.
pub fn loocv_accuracy_from_matrix(matrix: &DistanceMatrix, labels: &[i64]) -> Result<f64> {
    let n = labels.len();
    if n < 2 {
        return Err(Error::TooFewInstances { needed: 2, got: n });
    }
    let mut correct = 0usize;
    for i in 0..n {
        let nearest = argmin((0..n).filter(|&j| j != i).map(|j| (j, matrix.get(i, j))))
            .expect("at least one other instance");
        if labels[nearest] == labels[i] {
            correct += 1;
        }
    }
    Ok(correct as f64 / n as f64)
}

/// Fraction of instances whose nearest neighbor among the remaining ones
/// carries the same label (the expected accuracy of the measure).
pub fn loocv_accuracy(data: &LabeledDataset, measure: &dyn DistanceMeasure) -> Result<f64> {
    if data.len() < 2 {
        return Err(Error::TooFewInstances {
            needed: 2,
            got: data.len(),
        });
    }
    let matrix = pairwise_distances(data.series(), measure)?;
    loocv_accuracy_from_matrix(&matrix, data.labels())
}

/// 1NN label for every test instance against the full training set,
/// evaluated in parallel per query.
pub fn test_predictions(
    train: &LabeledDataset,
    test: &LabeledDataset,
    measure: &dyn DistanceMeasure,
) -> Result<Vec<i64>> {
    if train.series_len() != test.series_len() {
        return Err(Error::UnequalLengths {
            left: train.series_len(),
            right: test.series_len(),
        });
    }
    test.series()
        .par_iter()
        .map(|query| knn_classify(train, query, measure))
        .collect()
}

/// Fraction of test instances labeled correctly (the actual accuracy).
pub fn test_accuracy(
    train: &LabeledDataset,
    test: &LabeledDataset,
    measure: &dyn DistanceMeasure,
) -> Result<f64> {
    let predictions = test_predictions(train, test, measure)?;
    let correct = predictions
        .iter()
        .zip(test.labels())
        .filter(|(p, a)| p == a)
        .count();
    Ok(correct as f64 / test.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::EpsilonSet;
    use crate::measure::{Euclidean, MeasureSpec};

    fn ts(values: &[f64]) -> TimeSeries {
        TimeSeries::from_slice(values).unwrap()
    }

    fn dataset(rows: &[(&[f64], i64)]) -> LabeledDataset {
        let series = rows.iter().map(|(v, _)| ts(v)).collect();
        let labels = rows.iter().map(|(_, l)| *l).collect();
        LabeledDataset::new("test", series, labels).unwrap()
    }

    #[test]
    fn nearest_by_inspection() {
        let train = dataset(&[(&[0.0, 0.0], 1), (&[5.0, 5.0], 2)]);
        let got = knn_classify(&train, &ts(&[0.1, 0.0]), &Euclidean).unwrap();
        assert_eq!(got, 1);
    }

    #[test]
    fn single_neighbor_always_wins() {
        let train = dataset(&[(&[0.0, 0.0], 7)]);
        assert_eq!(knn_classify(&train, &ts(&[9.0, 9.0]), &Euclidean).unwrap(), 7);
    }

    #[test]
    fn mdd_nearest_matches_core_example() {
        // MDD between the anti-phase square waves is 0, so class 1 wins.
        let train = dataset(&[(&[0.0, 1.0, 0.0, 1.0], 1), (&[9.0, 9.0, 9.0, 9.0], 2)]);
        let spec = MeasureSpec::Mdd {
            epsilons: EpsilonSet::new(vec![1, 2]).unwrap(),
            convention: Default::default(),
            normalization: Default::default(),
        };
        let measure = spec.build().unwrap();
        let got = knn_classify(&train, &ts(&[1.0, 0.0, 1.0, 0.0]), measure.as_ref()).unwrap();
        assert_eq!(got, 1);
    }

    #[test]
    fn ties_break_toward_lowest_index() {
        // Both training series are equidistant from the query.
        let train = dataset(&[(&[1.0], 5), (&[-1.0], 6)]);
        assert_eq!(knn_classify(&train, &ts(&[0.0]), &Euclidean).unwrap(), 5);
    }

    #[test]
    fn loocv_worked_examples() {
        let same = dataset(&[(&[1.0, 2.0], 1), (&[1.0, 2.0], 1)]);
        assert_eq!(loocv_accuracy(&same, &Euclidean).unwrap(), 1.0);

        let split = dataset(&[(&[1.0, 2.0], 1), (&[1.0, 2.0], 2)]);
        assert_eq!(loocv_accuracy(&split, &Euclidean).unwrap(), 0.0);

        // The lone 2 has a 1 as its nearest neighbor.
        let lopsided = dataset(&[(&[0.0, 0.0], 1), (&[0.1, 0.0], 1), (&[9.0, 9.0], 2)]);
        let got = loocv_accuracy(&lopsided, &Euclidean).unwrap();
        assert!((got - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn loocv_requires_two_instances() {
        let one = dataset(&[(&[0.0], 1)]);
        assert!(matches!(
            loocv_accuracy(&one, &Euclidean),
            Err(Error::TooFewInstances { .. })
        ));
    }

    #[test]
    fn test_accuracy_on_identical_partitions() {
        let train = dataset(&[(&[0.0, 1.0], 1), (&[5.0, 5.0], 2), (&[-3.0, 0.0], 3)]);
        assert_eq!(test_accuracy(&train, &train, &Euclidean).unwrap(), 1.0);
    }

    #[test]
    fn query_length_mismatch_is_an_error() {
        let train = dataset(&[(&[0.0, 0.0], 1)]);
        assert!(knn_classify(&train, &ts(&[0.0]), &Euclidean).is_err());
        let test = dataset(&[(&[0.0], 1)]);
        assert!(test_accuracy(&train, &test, &Euclidean).is_err());
    }

    #[test]
    fn matrix_matches_on_demand_distances() {
        let data = dataset(&[
            (&[0.0, 1.0, 2.0], 1),
            (&[2.0, 1.0, 0.0], 2),
            (&[1.0, 1.0, 1.0], 1),
            (&[0.5, -1.0, 3.0], 2),
        ]);
        let matrix = pairwise_distances(data.series(), &Euclidean).unwrap();
        for i in 0..data.len() {
            assert_eq!(matrix.get(i, i), 0.0);
            for j in 0..data.len() {
                let direct = Euclidean
                    .distance(&data.series()[i], &data.series()[j])
                    .unwrap();
                assert_eq!(matrix.get(i, j), direct);
                assert_eq!(matrix.get(i, j), matrix.get(j, i));
            }
        }
        // LOOCV from the cached matrix equals the on-demand path.
        assert_eq!(
            loocv_accuracy_from_matrix(&matrix, data.labels()).unwrap(),
            loocv_accuracy(&data, &Euclidean).unwrap()
        );
    }
}
