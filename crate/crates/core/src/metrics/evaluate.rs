use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::functions::*;
use crate::categorical::CategoricalState;
use crate::convert::{ConversionParams, ConversionTarget, ConverterRegistry};
use crate::emotion_set::EmotionSet;
use crate::error::{Error, Result};
use crate::grid::DensityGrid;
use crate::point::VAPoint;
use crate::state::{EmotionState, Kind};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub name: String,
    #[serde(serialize_with = "crate::format::sig9")]
    pub value: f64,
    #[serde(rename = "n")]
    pub sample_count: usize,
    pub skipped: usize,
}

impl MetricReport {
    fn new(name: &str, value: f64, sample_count: usize, skipped: usize) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite(value));
        }
        if sample_count == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Self {
            name: name.to_string(),
            value,
            sample_count,
            skipped,
        })
    }
}

/// Representation level a metric is computed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Categorical,
    Dimensional,
    Density,
}

/// Prediction/ground-truth pairs brought to a common representation.
#[derive(Debug, Clone)]
pub enum Aligned {
    Categorical(Vec<CategoricalState>, Vec<CategoricalState>),
    Dimensional(Vec<VAPoint>, Vec<VAPoint>),
    Density(Vec<DensityGrid>, Vec<DensityGrid>),
}

pub trait Metric: Send + Sync {
    fn name(&self) -> &'static str;

    /// Level this metric needs for the given prediction and ground-truth kinds.
    fn level(&self, pred: Kind, gt: Kind) -> Level;

    fn compute(&self, data: &Aligned) -> Result<MetricReport>;
}

fn wrong_level(metric: &str, needed: &'static str) -> Error {
    Error::Format(format!("metric {metric} needs {needed} inputs"))
}

struct Accuracy;
struct MacroF1;
struct KendallTau;
struct PearsonAxis {
    name: &'static str,
    arousal: bool,
}
struct Rmse;
struct Mse;
struct KlDivergence;

impl Metric for Accuracy {
    fn name(&self) -> &'static str {
        "accuracy"
    }
    fn level(&self, _: Kind, _: Kind) -> Level {
        Level::Categorical
    }
    fn compute(&self, data: &Aligned) -> Result<MetricReport> {
        let Aligned::Categorical(p, g) = data else {
            return Err(wrong_level(self.name(), "categorical"));
        };
        MetricReport::new(self.name(), top1_accuracy(p, g)?, p.len(), 0)
    }
}

impl Metric for MacroF1 {
    fn name(&self) -> &'static str {
        "f1"
    }
    fn level(&self, _: Kind, _: Kind) -> Level {
        Level::Categorical
    }
    fn compute(&self, data: &Aligned) -> Result<MetricReport> {
        let Aligned::Categorical(p, g) = data else {
            return Err(wrong_level(self.name(), "categorical"));
        };
        MetricReport::new(self.name(), macro_f1(p, g)?, p.len(), 0)
    }
}

impl Metric for KendallTau {
    fn name(&self) -> &'static str {
        "kendall"
    }
    fn level(&self, _: Kind, _: Kind) -> Level {
        Level::Categorical
    }
    /// Mean per-sample tau-b; samples with an all-tied vector are skipped and counted.
    fn compute(&self, data: &Aligned) -> Result<MetricReport> {
        let Aligned::Categorical(p, g) = data else {
            return Err(wrong_level(self.name(), "categorical"));
        };
        if p.len() != g.len() {
            return Err(Error::LengthMismatch {
                expected: g.len(),
                found: p.len(),
            });
        }
        let (mut sum, mut used, mut skipped) = (0.0, 0usize, 0usize);
        for (a, b) in p.iter().zip(g) {
            match kendall_tau(a, b) {
                Ok(t) => {
                    sum += t;
                    used += 1;
                }
                Err(Error::DegenerateInput) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        if used == 0 {
            return Err(Error::DegenerateInput);
        }
        MetricReport::new(self.name(), sum / used as f64, used, skipped)
    }
}

impl Metric for PearsonAxis {
    fn name(&self) -> &'static str {
        self.name
    }
    fn level(&self, _: Kind, _: Kind) -> Level {
        Level::Dimensional
    }
    fn compute(&self, data: &Aligned) -> Result<MetricReport> {
        let Aligned::Dimensional(p, g) = data else {
            return Err(wrong_level(self.name(), "dimensional"));
        };
        let axis = |pts: &[VAPoint]| -> Vec<f64> {
            pts.iter()
                .map(|q| {
                    if self.arousal {
                        q.arousal()
                    } else {
                        q.valence()
                    }
                })
                .collect()
        };
        MetricReport::new(self.name, pearson_r(&axis(p), &axis(g))?, p.len(), 0)
    }
}

impl Metric for Rmse {
    fn name(&self) -> &'static str {
        "rmse"
    }
    fn level(&self, _: Kind, _: Kind) -> Level {
        Level::Dimensional
    }
    fn compute(&self, data: &Aligned) -> Result<MetricReport> {
        let Aligned::Dimensional(p, g) = data else {
            return Err(wrong_level(self.name(), "dimensional"));
        };
        MetricReport::new(self.name(), rmse(p, g)?, p.len(), 0)
    }
}

impl Metric for Mse {
    fn name(&self) -> &'static str {
        "mse"
    }
    fn level(&self, _: Kind, _: Kind) -> Level {
        Level::Dimensional
    }
    fn compute(&self, data: &Aligned) -> Result<MetricReport> {
        let Aligned::Dimensional(p, g) = data else {
            return Err(wrong_level(self.name(), "dimensional"));
        };
        if p.len() != g.len() || p.is_empty() {
            return Err(Error::LengthMismatch {
                expected: g.len(),
                found: p.len(),
            });
        }
        let mean = p.iter().zip(g).map(|(a, b)| mse_loss(a, b)).sum::<f64>() / p.len() as f64;
        MetricReport::new(self.name(), mean, p.len(), 0)
    }
}

impl Metric for KlDivergence {
    fn name(&self) -> &'static str {
        "kl"
    }
    fn level(&self, pred: Kind, gt: Kind) -> Level {
        if pred == Kind::Ddes && gt == Kind::Ddes {
            Level::Density
        } else {
            Level::Categorical
        }
    }
    /// Mean `KL(gt || pred)` over samples.
    fn compute(&self, data: &Aligned) -> Result<MetricReport> {
        let divs: Vec<f64> = match data {
            Aligned::Categorical(p, g) => {
                check_pairs(p.len(), g.len())?;
                p.iter()
                    .zip(g)
                    .map(|(a, b)| {
                        a.ensure_same_set(b)?;
                        kl_divergence(b.probs(), a.probs())
                    })
                    .collect::<Result<_>>()?
            }
            Aligned::Density(p, g) => {
                check_pairs(p.len(), g.len())?;
                p.iter()
                    .zip(g)
                    .map(|(a, b)| {
                        if a.geometry() != b.geometry() {
                            return Err(Error::ShapeMismatch {
                                expected: format!("{:?}", b.geometry()),
                                found: format!("{:?}", a.geometry()),
                            });
                        }
                        kl_divergence(b.values(), a.values())
                    })
                    .collect::<Result<_>>()?
            }
            Aligned::Dimensional(..) => return Err(wrong_level(self.name(), "distribution")),
        };
        MetricReport::new(
            self.name(),
            divs.iter().sum::<f64>() / divs.len() as f64,
            divs.len(),
            0,
        )
    }
}

fn check_pairs(p: usize, g: usize) -> Result<()> {
    if p != g {
        return Err(Error::LengthMismatch {
            expected: g,
            found: p,
        });
    }
    if p == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

pub const DEFAULT_METRICS: &[&str] = &[
    "accuracy",
    "f1",
    "kendall",
    "kl",
    "pearson_v",
    "pearson_a",
    "rmse",
    "mse",
];

/// Metrics selectable by name.
pub struct MetricRegistry {
    metrics: BTreeMap<&'static str, Box<dyn Metric>>,
}

impl Default for MetricRegistry {
    fn default() -> Self {
        let mut r = Self {
            metrics: BTreeMap::new(),
        };
        r.register(Box::new(Accuracy));
        r.register(Box::new(MacroF1));
        r.register(Box::new(KendallTau));
        r.register(Box::new(KlDivergence));
        r.register(Box::new(PearsonAxis {
            name: "pearson_v",
            arousal: false,
        }));
        r.register(Box::new(PearsonAxis {
            name: "pearson_a",
            arousal: true,
        }));
        r.register(Box::new(Rmse));
        r.register(Box::new(Mse));
        r
    }
}

impl MetricRegistry {
    pub fn register(&mut self, m: Box<dyn Metric>) {
        self.metrics.insert(m.name(), m);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Metric> {
        self.metrics
            .get(name)
            .map(Box::as_ref)
            .ok_or_else(|| Error::UnknownMetric(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.metrics.keys().copied()
    }
}

/// Brings predictions and ground truth to `level`.
///
/// Predictions are converted toward the ground truth. The one ground-truth
/// conversion is density -> categorical, projected onto `target.set`.
fn align(
    level: Level,
    preds: &[EmotionState],
    gts: &[EmotionState],
    target: &ConversionTarget,
    params: &ConversionParams,
    converters: &ConverterRegistry,
) -> Result<Aligned> {
    check_pairs(preds.len(), gts.len())?;
    match level {
        Level::Categorical => {
            let gt_states: Vec<CategoricalState> = gts
                .par_iter()
                .map(|g| match g {
                    EmotionState::Categorical(c) => Ok(c.clone()),
                    EmotionState::Density(grid) => {
                        let set = target.set.clone().ok_or_else(|| {
                            Error::Format("density ground truth needs an emotion set".into())
                        })?;
                        crate::convert::ddes_to_ces(grid, set)
                    }
                    EmotionState::Dimensional(_) => Err(Error::IncompatibleKinds {
                        metric: "categorical".into(),
                        needed: "ces or ddes",
                        got: "des",
                    }),
                })
                .collect::<Result<_>>()?;
            let pred_states: Vec<CategoricalState> = preds
                .par_iter()
                .zip(&gt_states)
                .map(|(p, g)| to_categorical(p, g.set(), params, converters))
                .collect::<Result<_>>()?;
            Ok(Aligned::Categorical(pred_states, gt_states))
        }
        Level::Dimensional => {
            let gt_points: Vec<VAPoint> = gts
                .iter()
                .map(|g| {
                    g.as_point().copied().ok_or(Error::IncompatibleKinds {
                        metric: "dimensional".into(),
                        needed: "des",
                        got: g.kind().as_str(),
                    })
                })
                .collect::<Result<_>>()?;
            let pred_points: Vec<VAPoint> = preds
                .par_iter()
                .map(|p| match p {
                    EmotionState::Dimensional(v) => Ok(*v),
                    other => converters
                        .convert(other, Kind::Des, target, params)
                        .map(|s| *s.as_point().expect("des converter yields a point")),
                })
                .collect::<Result<_>>()?;
            Ok(Aligned::Dimensional(pred_points, gt_points))
        }
        Level::Density => {
            let unwrap = |xs: &[EmotionState]| -> Result<Vec<DensityGrid>> {
                xs.iter()
                    .map(|x| {
                        x.as_grid().cloned().ok_or(Error::IncompatibleKinds {
                            metric: "density".into(),
                            needed: "ddes",
                            got: x.kind().as_str(),
                        })
                    })
                    .collect()
            };
            Ok(Aligned::Density(unwrap(preds)?, unwrap(gts)?))
        }
    }
}

fn to_categorical(
    pred: &EmotionState,
    set: &Arc<EmotionSet>,
    params: &ConversionParams,
    converters: &ConverterRegistry,
) -> Result<CategoricalState> {
    if let EmotionState::Categorical(c) = pred {
        if Arc::ptr_eq(c.set(), set) || **c.set() == **set {
            return Ok(c.clone());
        }
    }
    let target = ConversionTarget {
        set: Some(set.clone()),
        ..Default::default()
    };
    let out = converters.convert(pred, Kind::Ces, &target, params)?;
    Ok(out
        .as_categorical()
        .cloned()
        .expect("ces converter yields a categorical state"))
}

/// Computes each named metric; a failing metric does not stop the others.
/// Results come back in request order.
pub fn evaluate(
    preds: &[EmotionState],
    gts: &[EmotionState],
    metric_names: &[&str],
    target: &ConversionTarget,
    params: &ConversionParams,
) -> Vec<(String, Result<MetricReport>)> {
    let registry = MetricRegistry::default();
    let converters = ConverterRegistry::default();
    let pred_kind = preds.first().map_or(Kind::Ces, EmotionState::kind);
    let gt_kind = gts.first().map_or(Kind::Ces, EmotionState::kind);
    metric_names
        .iter()
        .map(|&name| {
            let result = registry.get(name).and_then(|m| {
                let level = m.level(pred_kind, gt_kind);
                let aligned =
                    align(level, preds, gts, target, params, &converters).map_err(|e| match e {
                        Error::IncompatibleKinds { needed, got, .. } => Error::IncompatibleKinds {
                            metric: name.to_string(),
                            needed,
                            got,
                        },
                        other => other,
                    })?;
                m.compute(&aligned)
            });
            (name.to_string(), result)
        })
        .collect()
}
