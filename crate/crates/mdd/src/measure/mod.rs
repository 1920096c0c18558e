//! Distance measures behind a common strategy trait.
//!
//! Every measure implements [`DistanceMeasure`] so classifiers and the CLI
//! can swap them at runtime. [`MeasureSpec`] is the serializable description
//! of a configured measure; [`MeasureRegistry`] resolves a measure by name
//! from loosely-typed parameters, which is how the CLI selects one.

pub(crate) mod dtw;
pub(crate) mod dubuc;
pub(crate) mod euclidean;

use std::collections::BTreeMap;

pub use dtw::{dtw, dtw_bruteforce, DtwConfig, DtwCost, SakoeChibaDtw};
pub use dubuc::{
    intersection_ratio, intersection_union, mdd, mdd_with, mds, mds_with, DeltaNormalization,
    MddConfig, MultiscaleDubuc,
};
pub use euclidean::{eud, Euclidean};

use crate::envelope::{EpsilonConvention, EpsilonSet};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

use serde::{Deserialize, Serialize};

/// A distance between two equal-length time series.
///
/// Implementations must be pure: the result depends only on the inputs, so
/// evaluations may run concurrently on shared series.
pub trait DistanceMeasure: Send + Sync {
    /// Short identifier used for registry lookup and reports.
    fn name(&self) -> &'static str;

    fn distance(&self, x: &TimeSeries, y: &TimeSeries) -> Result<f64>;
}

/// Serializable description of a configured measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MeasureSpec {
    Eud,
    Dtw {
        window: usize,
        #[serde(default)]
        cost: DtwCost,
    },
    Mdd {
        epsilons: EpsilonSet,
        #[serde(default)]
        convention: EpsilonConvention,
        #[serde(default)]
        normalization: DeltaNormalization,
    },
}

impl MeasureSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            MeasureSpec::Eud => "eud",
            MeasureSpec::Dtw { .. } => "dtw",
            MeasureSpec::Mdd { .. } => "mdd",
        }
    }

    /// Instantiate the measure this spec describes.
    pub fn build(&self) -> Result<Box<dyn DistanceMeasure>> {
        match self {
            MeasureSpec::Eud => Ok(Box::new(Euclidean)),
            MeasureSpec::Dtw { window, cost } => Ok(Box::new(SakoeChibaDtw::new(DtwConfig {
                window: *window,
                cost: *cost,
            }))),
            MeasureSpec::Mdd {
                epsilons,
                convention,
                normalization,
            } => {
                let config = MddConfig {
                    scales: epsilons.clone(),
                    convention: *convention,
                    normalization: *normalization,
                };
                Ok(Box::new(MultiscaleDubuc::new(config)?))
            }
        }
    }

    /// Resolve a spec from a measure kind plus loose parameters, validating
    /// that the parameters present match the kind.
    pub fn from_params(kind: &str, params: &MeasureParams) -> Result<Self> {
        match kind {
            "eud" => Ok(MeasureSpec::Eud),
            "dtw" => {
                let window = params.window.ok_or(Error::MissingParameter {
                    measure: "dtw",
                    flag: "--window",
                })?;
                Ok(MeasureSpec::Dtw {
                    window,
                    cost: params.cost,
                })
            }
            "mdd" => {
                let epsilons = params.epsilons.clone().ok_or(Error::MissingParameter {
                    measure: "mdd",
                    flag: "--epsilons",
                })?;
                // Fail early on scales the convention cannot interpret.
                for &eps in epsilons.scales() {
                    params.convention.radius(eps)?;
                }
                Ok(MeasureSpec::Mdd {
                    epsilons,
                    convention: params.convention,
                    normalization: params.normalization,
                })
            }
            other => Err(Error::UnknownMeasure {
                name: other.to_string(),
                available: "eud, dtw, mdd".to_string(),
            }),
        }
    }
}

/// Loosely-typed measure parameters as collected from a CLI or config file.
#[derive(Debug, Clone, Default)]
pub struct MeasureParams {
    pub window: Option<usize>,
    pub cost: DtwCost,
    pub epsilons: Option<EpsilonSet>,
    pub convention: EpsilonConvention,
    pub normalization: DeltaNormalization,
}

type MeasureFactory = Box<dyn Fn(&MeasureParams) -> Result<Box<dyn DistanceMeasure>> + Send + Sync>;

/// Name-keyed registry of measure factories.
pub struct MeasureRegistry {
    factories: BTreeMap<String, MeasureFactory>,
}

impl MeasureRegistry {
    pub fn new() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    /// Registry with the three built-in measures.
    pub fn builtin() -> Self {
        let mut reg = Self::new();
        for kind in ["eud", "dtw", "mdd"] {
            reg.register(kind, move |params| {
                MeasureSpec::from_params(kind, params)?.build()
            });
        }
        reg
    }

    pub fn register(
        &mut self,
        name: impl Into<String>,
        factory: impl Fn(&MeasureParams) -> Result<Box<dyn DistanceMeasure>> + Send + Sync + 'static,
    ) {
        self.factories.insert(name.into(), Box::new(factory));
    }

    /// Instantiate a measure by name.
    pub fn build(&self, name: &str, params: &MeasureParams) -> Result<Box<dyn DistanceMeasure>> {
        match self.factories.get(name) {
            Some(factory) => factory(params),
            None => Err(Error::UnknownMeasure {
                name: name.to_string(),
                available: self.names().join(", "),
            }),
        }
    }

    /// Registered names in sorted order.
    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }
}

impl Default for MeasureRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(values: &[f64]) -> TimeSeries {
        TimeSeries::from_slice(values).unwrap()
    }

    #[test]
    fn registry_builds_all_builtins() {
        let reg = MeasureRegistry::builtin();
        assert_eq!(reg.names(), vec!["dtw", "eud", "mdd"]);

        let x = ts(&[0.0, 0.0]);
        let y = ts(&[3.0, 4.0]);

        let params = MeasureParams::default();
        let e = reg.build("eud", &params).unwrap();
        assert_eq!(e.name(), "eud");
        assert!((e.distance(&x, &y).unwrap() - 5.0).abs() < 1e-12);

        let params = MeasureParams {
            window: Some(0),
            ..Default::default()
        };
        let d = reg.build("dtw", &params).unwrap();
        assert!((d.distance(&x, &y).unwrap() - 5.0).abs() < 1e-12);

        let params = MeasureParams {
            epsilons: Some(EpsilonSet::new(vec![1, 2]).unwrap()),
            ..Default::default()
        };
        let m = reg.build("mdd", &params).unwrap();
        assert_eq!(m.distance(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn unknown_measure_lists_available() {
        let reg = MeasureRegistry::builtin();
        let err = match reg.build("lcss", &MeasureParams::default()) {
            Err(err) => err,
            Ok(_) => panic!("lcss should not resolve"),
        };
        let msg = err.to_string();
        assert!(msg.contains("lcss") && msg.contains("dtw, eud, mdd"), "{msg}");
    }

    #[test]
    fn missing_parameters_are_reported() {
        let err = MeasureSpec::from_params("dtw", &MeasureParams::default()).unwrap_err();
        assert!(err.to_string().contains("--window"));
        let err = MeasureSpec::from_params("mdd", &MeasureParams::default()).unwrap_err();
        assert!(err.to_string().contains("--epsilons"));
    }

    #[test]
    fn strict_convention_rejects_zero_scale() {
        let params = MeasureParams {
            epsilons: Some(EpsilonSet::new(vec![0, 1]).unwrap()),
            convention: EpsilonConvention::Strict,
            ..Default::default()
        };
        assert!(MeasureSpec::from_params("mdd", &params).is_err());
    }

    #[test]
    fn custom_measures_can_register() {
        struct Zero;
        impl DistanceMeasure for Zero {
            fn name(&self) -> &'static str {
                "zero"
            }
            fn distance(&self, _: &TimeSeries, _: &TimeSeries) -> Result<f64> {
                Ok(0.0)
            }
        }
        let mut reg = MeasureRegistry::builtin();
        reg.register("zero", |_| Ok(Box::new(Zero)));
        assert!(reg.names().contains(&"zero"));
        let m = reg.build("zero", &MeasureParams::default()).unwrap();
        assert_eq!(m.distance(&ts(&[1.0]), &ts(&[9.0])).unwrap(), 0.0);
    }

    #[test]
    fn spec_serializes_with_kind_tag() {
        let spec = MeasureSpec::Dtw {
            window: 3,
            cost: DtwCost::Squared,
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"kind\":\"dtw\""), "{json}");
        let back: MeasureSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);

        let spec = MeasureSpec::Mdd {
            epsilons: EpsilonSet::new(vec![1, 2, 4]).unwrap(),
            convention: EpsilonConvention::Inclusive,
            normalization: DeltaNormalization::Intervals,
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"epsilons\":[1,2,4]"), "{json}");
    }
}
