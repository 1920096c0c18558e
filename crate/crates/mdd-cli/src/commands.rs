//! Implementations of the five subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use mdd::classify::{test_accuracy, test_predictions};
use mdd::datagen::{simulation_one_with, simulation_two_with, SimulationOptions};
use mdd::eval::{
    evaluate_predictions, sharpshooter, win_significance, GainInput, Region, SharpshooterPoint,
    WinSignificance,
};
use mdd::io::{load_ucr, save_ucr, zscore_apply, zscore_fit, Delimiter, StandardizationStats};
use mdd::measure::{DistanceMeasure, MeasureParams, MeasureRegistry, MeasureSpec};
use mdd::tune::{tune_dtw_with, tune_mdd_with, TuningResult};
use mdd::{LabeledDataset, TimeSeries};

use crate::manifest::RunManifest;
use crate::{ClassifyArgs, ComputeArgs, EvalArgs, MeasureArgs, SimulateArgs, TuneArgs};

/// Resolve the measure named on the command line through the registry.
fn resolve_measure(args: &MeasureArgs) -> Result<(MeasureSpec, Box<dyn DistanceMeasure>)> {
    let params = MeasureParams {
        window: args.window,
        cost: args.dtw_cost,
        epsilons: args.epsilons.clone(),
        convention: args.epsilon_convention,
        normalization: args.delta_normalization,
    };
    let spec = MeasureSpec::from_params(&args.measure, &params)?;
    let measure = MeasureRegistry::builtin().build(&args.measure, &params)?;
    Ok((spec, measure))
}

fn parse_inline_series(text: &str) -> Result<TimeSeries> {
    let values = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid value `{part}` in series"))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(TimeSeries::new(values)?)
}

fn write_json(value: &impl Serialize, out: &Option<PathBuf>) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => fs::write(path, json + "\n")
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}

pub fn compute(args: ComputeArgs) -> Result<()> {
    let (spec, measure) = resolve_measure(&args.measure)?;
    let series_a = parse_inline_series(&args.series_a)?;
    let series_b = parse_inline_series(&args.series_b)?;
    let distance = measure.distance(&series_a, &series_b)?;
    println!("{distance:.11e}");

    #[derive(Serialize)]
    struct Params<'a> {
        measure: &'a MeasureSpec,
        series_a: &'a str,
        series_b: &'a str,
        distance: f64,
    }
    let manifest = RunManifest::new(
        "compute",
        Params {
            measure: &spec,
            series_a: &args.series_a,
            series_b: &args.series_b,
            distance,
        },
    )?;
    manifest.write_if_requested(&args.manifest)
}

fn load_standardized(
    train_path: &Path,
    test_path: Option<&Path>,
    delimiter: Delimiter,
    zscore: bool,
) -> Result<(LabeledDataset, Option<LabeledDataset>, Option<StandardizationStats>)> {
    let train = load_ucr(train_path, delimiter)?;
    let test = test_path.map(|p| load_ucr(p, delimiter)).transpose()?;
    if !zscore {
        return Ok((train, test, None));
    }
    let stats = zscore_fit(&train)?;
    let train = zscore_apply(&train, &stats)?;
    let test = test.map(|t| zscore_apply(&t, &stats)).transpose()?;
    Ok((train, test, Some(stats)))
}

pub fn classify(args: ClassifyArgs) -> Result<()> {
    let (spec, measure) = resolve_measure(&args.measure)?;
    let (train, test, stats) =
        load_standardized(&args.train, Some(&args.test), args.delimiter, args.zscore)?;
    let test = test.expect("test path was provided");

    let predictions = test_predictions(&train, &test, measure.as_ref())?;
    let report = evaluate_predictions(test.name(), &spec, test.labels(), &predictions)?;
    write_json(&report, &args.out)?;

    if let Some(path) = &args.predictions {
        let mut writer = csv::Writer::from_path(path)
            .with_context(|| format!("writing {}", path.display()))?;
        writer.write_record(["index", "actual", "predicted"])?;
        for (idx, (actual, predicted)) in test.labels().iter().zip(&predictions).enumerate() {
            writer.write_record([
                idx.to_string(),
                actual.to_string(),
                predicted.to_string(),
            ])?;
        }
        writer.flush()?;
    }

    #[derive(Serialize)]
    struct Params<'a> {
        measure: &'a MeasureSpec,
        delimiter: Delimiter,
        zscore: Option<&'a StandardizationStats>,
        accuracy: f64,
    }
    let mut manifest = RunManifest::new(
        "classify",
        Params {
            measure: &spec,
            delimiter: args.delimiter,
            zscore: stats.as_ref(),
            accuracy: report.accuracy,
        },
    )?;
    manifest.add_input(&args.train)?;
    manifest.add_input(&args.test)?;
    if let Some(path) = &args.out {
        manifest.add_output(path);
    }
    if let Some(path) = &args.predictions {
        manifest.add_output(path);
    }
    manifest.write_if_requested(&args.manifest)
}

pub fn tune(args: TuneArgs) -> Result<()> {
    let (train, _, stats) = load_standardized(&args.train, None, args.delimiter, args.zscore)?;

    let result: TuningResult = match args.measure.as_str() {
        "mdd" => tune_mdd_with(
            &train,
            args.eta,
            args.epsilon_convention,
            args.delta_normalization,
        )?,
        "dtw" => {
            let max_window = args.max_window.unwrap_or_else(|| train.series_len());
            tune_dtw_with(&train, max_window, args.dtw_cost)?
        }
        "eud" => bail!("eud has no parameters to tune; use --measure dtw or mdd"),
        other => bail!(
            "unknown measure `{other}` for tuning, available: dtw, mdd"
        ),
    };
    write_json(&result, &args.out)?;

    #[derive(Serialize)]
    struct Params<'a> {
        measure: &'a str,
        eta: f64,
        max_window: Option<usize>,
        best: &'a MeasureSpec,
        expected_accuracy: f64,
        candidates: usize,
        delimiter: Delimiter,
        zscore: Option<&'a StandardizationStats>,
    }
    let mut manifest = RunManifest::new(
        "tune",
        Params {
            measure: &args.measure,
            eta: args.eta,
            max_window: args.max_window,
            best: &result.best,
            expected_accuracy: result.expected_accuracy,
            candidates: result.log.len(),
            delimiter: args.delimiter,
            zscore: stats.as_ref(),
        },
    )?;
    manifest.add_input(&args.train)?;
    if let Some(path) = &args.out {
        manifest.add_output(path);
    }
    manifest.write_if_requested(&args.manifest)
}

const TABLE_HEADERS: [&str; 5] = [
    "dataset",
    "acc_expected_mu1",
    "acc_expected_mu2",
    "acc_actual_mu1",
    "acc_actual_mu2",
];

fn read_gain_table(path: &Path) -> Result<Vec<GainInput>> {
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let got: Vec<&str> = headers.iter().map(str::trim).collect();
    if got != TABLE_HEADERS {
        bail!(
            "malformed table: expected headers {TABLE_HEADERS:?}, found {got:?} in {}",
            path.display()
        );
    }
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let field = |i: usize| -> Result<f64> {
            record
                .get(i)
                .unwrap_or_default()
                .trim()
                .parse::<f64>()
                .with_context(|| format!("malformed table: row {}, field {}", idx + 2, i + 1))
        };
        rows.push(GainInput {
            dataset: record.get(0).unwrap_or_default().to_string(),
            expected_mu1: field(1)?,
            expected_mu2: field(2)?,
            actual_mu1: field(3)?,
            actual_mu2: field(4)?,
        });
    }
    if rows.is_empty() {
        bail!("malformed table: no data rows in {}", path.display());
    }
    Ok(rows)
}

#[derive(Serialize)]
struct RegionPct {
    tp: f64,
    fp: f64,
    #[serde(rename = "fn")]
    fn_: f64,
    tn: f64,
}

#[derive(Serialize)]
struct RegionSummary {
    tp: usize,
    fp: usize,
    #[serde(rename = "fn")]
    fn_: usize,
    tn: usize,
    total: usize,
    /// Rows whose actual gain is exactly 1.
    ties: usize,
    pct: RegionPct,
    pct_excluding_ties: Option<RegionPct>,
}

#[derive(Serialize)]
struct WinSummary {
    schema_version: u32,
    mu1: String,
    mu2: String,
    win_mu1_over_mu2: Option<WinSignificance>,
    win_mu2_over_mu1: Option<WinSignificance>,
    regions: RegionSummary,
}

fn region_summary(points: &[SharpshooterPoint]) -> RegionSummary {
    let count = |r: Region| points.iter().filter(|p| p.region == r).count();
    let (tp, fp, fn_, tn) = (
        count(Region::Tp),
        count(Region::Fp),
        count(Region::Fn),
        count(Region::Tn),
    );
    let total = points.len();
    let ties = points.iter().filter(|p| p.actual_gain == 1.0).count();
    let pct_of = |n: usize, d: usize| 100.0 * n as f64 / d as f64;
    let tie_free: Vec<&SharpshooterPoint> =
        points.iter().filter(|p| p.actual_gain != 1.0).collect();
    let count_tf = |r: Region| tie_free.iter().filter(|p| p.region == r).count();
    RegionSummary {
        tp,
        fp,
        fn_,
        tn,
        total,
        ties,
        pct: RegionPct {
            tp: pct_of(tp, total),
            fp: pct_of(fp, total),
            fn_: pct_of(fn_, total),
            tn: pct_of(tn, total),
        },
        pct_excluding_ties: (!tie_free.is_empty()).then(|| RegionPct {
            tp: pct_of(count_tf(Region::Tp), tie_free.len()),
            fp: pct_of(count_tf(Region::Fp), tie_free.len()),
            fn_: pct_of(count_tf(Region::Fn), tie_free.len()),
            tn: pct_of(count_tf(Region::Tn), tie_free.len()),
        }),
    }
}

pub fn eval(args: EvalArgs) -> Result<()> {
    let rows = read_gain_table(&args.table)?;
    let points = sharpshooter(&rows)?;

    // The opposite direction swaps the roles of the two measures.
    let swapped: Vec<GainInput> = rows
        .iter()
        .map(|r| GainInput {
            dataset: r.dataset.clone(),
            expected_mu1: r.expected_mu2,
            expected_mu2: r.expected_mu1,
            actual_mu1: r.actual_mu2,
            actual_mu2: r.actual_mu1,
        })
        .collect();
    let reverse_points = sharpshooter(&swapped)?;

    let mut csv_out: Vec<u8> = Vec::new();
    {
        let mut writer = csv::Writer::from_writer(&mut csv_out);
        writer.write_record([
            "dataset",
            "acc_expected_mu1",
            "acc_expected_mu2",
            "acc_actual_mu1",
            "acc_actual_mu2",
            "gain_expected",
            "gain_actual",
            "region",
        ])?;
        for (row, point) in rows.iter().zip(&points) {
            writer.write_record([
                row.dataset.clone(),
                row.expected_mu1.to_string(),
                row.expected_mu2.to_string(),
                row.actual_mu1.to_string(),
                row.actual_mu2.to_string(),
                point.expected_gain.to_string(),
                point.actual_gain.to_string(),
                point.region.to_string(),
            ])?;
        }
        writer.flush()?;
    }
    match &args.out_csv {
        Some(path) => fs::write(path, &csv_out)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", String::from_utf8_lossy(&csv_out)),
    }

    let summary = WinSummary {
        schema_version: 1,
        mu1: args.mu1.clone(),
        mu2: args.mu2.clone(),
        win_mu1_over_mu2: win_significance(&points).ok(),
        win_mu2_over_mu1: win_significance(&reverse_points).ok(),
        regions: region_summary(&points),
    };
    write_json(&summary, &args.out_json)?;

    #[derive(Serialize)]
    struct Params<'a> {
        mu1: &'a str,
        mu2: &'a str,
        rows: usize,
    }
    let mut manifest = RunManifest::new(
        "eval",
        Params {
            mu1: &args.mu1,
            mu2: &args.mu2,
            rows: rows.len(),
        },
    )?;
    manifest.add_input(&args.table)?;
    if let Some(path) = &args.out_csv {
        manifest.add_output(path);
    }
    if let Some(path) = &args.out_json {
        manifest.add_output(path);
    }
    manifest.write_if_requested(&args.manifest)
}

pub fn simulate(args: SimulateArgs) -> Result<()> {
    let options = SimulationOptions {
        count_per_class: args.count_per_class,
        train_fraction: args.train_fraction,
        length: args.length,
    };
    let sim = match args.which.as_str() {
        "one" => simulation_one_with(args.seed, &options)?,
        "two" => simulation_two_with(args.seed, &options)?,
        other => bail!("unknown study `{other}`, expected one or two"),
    };

    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let ext = match args.delimiter {
        Delimiter::Tab => "tsv",
        Delimiter::Comma => "csv",
    };
    let stem = format!("simulation-{}", args.which);
    let train_path = args.out_dir.join(format!("{stem}_TRAIN.{ext}"));
    let test_path = args.out_dir.join(format!("{stem}_TEST.{ext}"));
    save_ucr(&sim.train, &train_path, args.delimiter)?;
    save_ucr(&sim.test, &test_path, args.delimiter)?;

    #[derive(Serialize)]
    struct Params<'a> {
        which: &'a str,
        seed: u64,
        options: &'a SimulationOptions,
        specs: &'a [mdd::datagen::WaveSpec],
        delimiter: Delimiter,
    }
    let mut manifest = RunManifest::new(
        "simulate",
        Params {
            which: &args.which,
            seed: args.seed,
            options: &options,
            specs: &sim.specs,
            delimiter: args.delimiter,
        },
    )?;
    manifest.add_output(&train_path);
    manifest.add_output(&test_path);
    let manifest_path = args
        .manifest
        .clone()
        .unwrap_or_else(|| args.out_dir.join("manifest.json"));
    manifest.write(&manifest_path)?;

    eprintln!(
        "wrote {} and {} ({} train, {} test instances)",
        train_path.display(),
        test_path.display(),
        sim.train.len(),
        sim.test.len()
    );
    Ok(())
}
