//! Labeled datasets in the UCR text layout, plus z-score standardization.
//!
//! One record per line: the class label first, then the observations in
//! time order, separated by a single tab or comma. No header, UTF-8,
//! newline-terminated lines.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{LabeledDataset, TimeSeries};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Delimiter {
    #[default]
    Tab,
    Comma,
}

impl Delimiter {
    pub fn as_char(&self) -> char {
        match self {
            Delimiter::Tab => '\t',
            Delimiter::Comma => ',',
        }
    }
}

impl fmt::Display for Delimiter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delimiter::Tab => write!(f, "tab"),
            Delimiter::Comma => write!(f, "comma"),
        }
    }
}

impl FromStr for Delimiter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tab" => Ok(Delimiter::Tab),
            "comma" => Ok(Delimiter::Comma),
            other => Err(Error::InvalidParameter(format!(
                "unknown delimiter `{other}` (expected tab or comma)"
            ))),
        }
    }
}

fn parse_label(field: &str, path: &Path, line: usize) -> Result<i64> {
    if let Ok(label) = field.parse::<i64>() {
        return Ok(label);
    }
    // Accept float-formatted integer labels such as "1.0", truncating.
    if let Ok(value) = field.parse::<f64>() {
        if value.is_finite() && value.fract() == 0.0 && value.abs() < i64::MAX as f64 {
            log::warn!(
                "{}: line {line}: float-formatted label `{field}` truncated to {}",
                path.display(),
                value as i64
            );
            return Ok(value as i64);
        }
    }
    Err(Error::InvalidLabel {
        path: path.to_path_buf(),
        line,
        value: field.to_string(),
    })
}

/// Read a dataset. Every row must carry the same field count; the dataset
/// name is the file stem.
pub fn load_ucr(path: impl AsRef<Path>, delimiter: Delimiter) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;

    let mut series = Vec::new();
    let mut labels = Vec::new();
    let mut expected_fields: Option<usize> = None;

    for (idx, row) in content.lines().enumerate() {
        let line = idx + 1;
        if row.is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(delimiter.as_char()).collect();
        match expected_fields {
            None => {
                if fields.len() < 2 {
                    return Err(Error::RaggedRow {
                        path: path.to_path_buf(),
                        line,
                        expected: 2,
                        found: fields.len(),
                    });
                }
                expected_fields = Some(fields.len());
            }
            Some(expected) if fields.len() != expected => {
                return Err(Error::RaggedRow {
                    path: path.to_path_buf(),
                    line,
                    expected,
                    found: fields.len(),
                });
            }
            Some(_) => {}
        }

        labels.push(parse_label(fields[0], path, line)?);
        let values = fields[1..]
            .iter()
            .enumerate()
            .map(|(offset, field)| {
                field
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::InvalidField {
                        path: path.to_path_buf(),
                        line,
                        field: offset + 2,
                        value: field.to_string(),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        series.push(TimeSeries::new(values)?);
    }

    if series.is_empty() {
        return Err(Error::EmptyFile {
            path: path.to_path_buf(),
        });
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    LabeledDataset::new(name, series, labels)
}

/// Write the format [`load_ucr`] reads. Observations are rendered with 17
/// significant digits so a round trip is lossless.
pub fn save_ucr(data: &LabeledDataset, path: impl AsRef<Path>, delimiter: Delimiter) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = std::io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
    let sep = delimiter.as_char();
    for (series, label) in data.series().iter().zip(data.labels()) {
        write!(file, "{label}").map_err(io_err)?;
        for value in series.values() {
            write!(file, "{sep}{value:.16e}").map_err(io_err)?;
        }
        writeln!(file).map_err(io_err)?;
    }
    file.flush().map_err(io_err)
}

/// Pooled mean and standard deviation of one partition's observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardizationStats {
    pub mean: f64,
    /// Population standard deviation; always positive.
    pub stddev: f64,
    /// Which partition produced the statistics.
    pub source: String,
}

/// Fit pooled statistics over all observations of all training series.
pub fn zscore_fit(train: &LabeledDataset) -> Result<StandardizationStats> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut count = 0usize;
    for series in train.series() {
        for &v in series.values() {
            min = min.min(v);
            max = max.max(v);
            sum += v;
            count += 1;
        }
    }
    if min == max {
        return Err(Error::ZeroVariance);
    }
    let mean = sum / count as f64;
    let sq_sum: f64 = train
        .series()
        .iter()
        .flat_map(|s| s.values())
        .map(|&v| (v - mean) * (v - mean))
        .sum();
    let stddev = (sq_sum / count as f64).sqrt();
    if stddev == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(StandardizationStats {
        mean,
        stddev,
        source: train.name().to_string(),
    })
}

/// Map every observation to `(v - mean) / stddev`; labels unchanged.
pub fn zscore_apply(data: &LabeledDataset, stats: &StandardizationStats) -> Result<LabeledDataset> {
    data.map_values(|v| (v - stats.mean) / stats.stddev)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(values: &[f64]) -> TimeSeries {
        TimeSeries::from_slice(values).unwrap()
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file
    }

    #[test]
    fn parses_a_simple_row() {
        let file = write_temp("1\t0.5\t0.7\n");
        let data = load_ucr(file.path(), Delimiter::Tab).unwrap();
        assert_eq!(data.len(), 1);
        assert_eq!(data.labels(), &[1]);
        assert_eq!(data.series()[0].values(), &[0.5, 0.7]);
    }

    #[test]
    fn ragged_rows_name_the_line() {
        let file = write_temp("1\t0.5\t0.7\n2\t0.1\n");
        let err = load_ucr(file.path(), Delimiter::Tab).unwrap_err();
        match err {
            Error::RaggedRow { line, expected, found, .. } => {
                assert_eq!((line, expected, found), (2, 3, 2));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bad_numbers_carry_coordinates() {
        let file = write_temp("1\t0.5\tabc\n");
        let err = load_ucr(file.path(), Delimiter::Tab).unwrap_err();
        match err {
            Error::InvalidField { line, field, value, .. } => {
                assert_eq!((line, field), (1, 3));
                assert_eq!(value, "abc");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_an_error() {
        let file = write_temp("");
        assert!(matches!(
            load_ucr(file.path(), Delimiter::Tab),
            Err(Error::EmptyFile { .. })
        ));
    }

    #[test]
    fn float_labels_truncate() {
        let file = write_temp("1.0,0.5,0.7\n2.5,0.5,0.7\n");
        let err = load_ucr(file.path(), Delimiter::Comma).unwrap_err();
        assert!(matches!(err, Error::InvalidLabel { line: 2, .. }));
        let file = write_temp("1.0,0.5,0.7\n");
        let data = load_ucr(file.path(), Delimiter::Comma).unwrap();
        assert_eq!(data.labels(), &[1]);
    }

    #[test]
    fn round_trip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("RoundTrip.tsv");
        let data = LabeledDataset::new(
            "RoundTrip",
            vec![
                ts(&[0.1, -2.5e-7, std::f64::consts::PI]),
                ts(&[1.0 / 3.0, 9.9e200, -0.0]),
            ],
            vec![3, -1],
        )
        .unwrap();
        save_ucr(&data, &path, Delimiter::Tab).unwrap();
        let loaded = load_ucr(&path, Delimiter::Tab).unwrap();
        assert_eq!(loaded, data);

        // Comma round trip too.
        let path = dir.path().join("RoundTrip.csv");
        save_ucr(&data, &path, Delimiter::Comma).unwrap();
        let loaded = load_ucr(&path, Delimiter::Comma).unwrap();
        assert_eq!(loaded.series(), data.series());
        assert_eq!(loaded.labels(), data.labels());
    }

    #[test]
    fn zscore_fit_worked_examples() {
        let data = LabeledDataset::new("x", vec![ts(&[0.0, 2.0]), ts(&[2.0, 0.0])], vec![1, 2]).unwrap();
        let stats = zscore_fit(&data).unwrap();
        assert_eq!(stats.mean, 1.0);
        assert_eq!(stats.stddev, 1.0);
        assert_eq!(stats.source, "x");

        let single = LabeledDataset::new("y", vec![ts(&[1.0, 2.0, 3.0])], vec![1]).unwrap();
        let stats = zscore_fit(&single).unwrap();
        assert_eq!(stats.mean, 2.0);
        assert!((stats.stddev - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_dataset_has_zero_variance() {
        let data = LabeledDataset::new("c", vec![ts(&[0.1, 0.1]), ts(&[0.1, 0.1])], vec![1, 2]).unwrap();
        assert!(matches!(zscore_fit(&data), Err(Error::ZeroVariance)));
    }

    #[test]
    fn apply_normalizes_the_fitted_partition() {
        let data = LabeledDataset::new(
            "x",
            vec![ts(&[1.0, 5.0, -2.0]), ts(&[0.5, 2.0, 7.0])],
            vec![1, 2],
        )
        .unwrap();
        let stats = zscore_fit(&data).unwrap();
        let normalized = zscore_apply(&data, &stats).unwrap();
        let refit = zscore_fit(&normalized).unwrap();
        assert!(refit.mean.abs() < 1e-12);
        assert!((refit.stddev - 1.0).abs() < 1e-12);
        assert_eq!(normalized.labels(), data.labels());

        // Identity stats leave the data alone.
        let identity = StandardizationStats {
            mean: 0.0,
            stddev: 1.0,
            source: "id".into(),
        };
        assert_eq!(zscore_apply(&data, &identity).unwrap().series(), data.series());

        // mean 2, stddev 2 on [4] -> [1].
        let one = LabeledDataset::new("o", vec![ts(&[4.0])], vec![1]).unwrap();
        let stats = StandardizationStats {
            mean: 2.0,
            stddev: 2.0,
            source: "manual".into(),
        };
        assert_eq!(zscore_apply(&one, &stats).unwrap().series()[0].values(), &[1.0]);
    }
}
