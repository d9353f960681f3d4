use serde::{Deserialize, Serialize};

use super::WeightedPointCloud;
use crate::error::{Error, Result};

/// Isotropic standard deviation used when the data cannot support a covariance estimate.
pub const FALLBACK_SIGMA: f64 = 0.1;

const SINGULAR_EIGENVALUE: f64 = 1e-12;

/// Kernel covariance (VA units squared). Always symmetric positive definite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidth {
    cov: [[f64; 2]; 2],
    fallback: bool,
}

impl Bandwidth {
    pub fn new(cov: [[f64; 2]; 2]) -> Result<Self> {
        let [[a, b], [c, d]] = cov;
        if [a, b, c, d].iter().any(|x| !x.is_finite()) || b != c {
            return Err(Error::InvalidBandwidth);
        }
        if min_eigenvalue(&cov) <= 0.0 {
            return Err(Error::InvalidBandwidth);
        }
        Ok(Self {
            cov,
            fallback: false,
        })
    }

    pub fn isotropic(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::SigmaNonPositive(sigma));
        }
        let s2 = sigma * sigma;
        Self::new([[s2, 0.0], [0.0, s2]])
    }

    pub fn fallback() -> Self {
        let s2 = FALLBACK_SIGMA * FALLBACK_SIGMA;
        Self {
            cov: [[s2, 0.0], [0.0, s2]],
            fallback: true,
        }
    }

    pub fn cov(&self) -> [[f64; 2]; 2] {
        self.cov
    }

    /// True when this bandwidth came from the degenerate-input rule.
    pub fn is_fallback(&self) -> bool {
        self.fallback
    }

    pub(crate) fn inverse(&self) -> Result<[[f64; 2]; 2]> {
        let [[a, b], [_, d]] = self.cov;
        let det = a * d - b * b;
        if !(det.is_finite() && det > 0.0) {
            return Err(Error::SingularBandwidth);
        }
        Ok([[d / det, -b / det], [-b / det, a / det]])
    }
}

fn min_eigenvalue(m: &[[f64; 2]; 2]) -> f64 {
    let [[a, b], [_, d]] = *m;
    let half_trace = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    half_trace - disc
}

/// Weighted mean and reliability-corrected weighted covariance of a cloud,
/// together with the Kish effective sample size `1 / sum(w^2)`.
pub fn weighted_moments(cloud: &WeightedPointCloud) -> ([f64; 2], [[f64; 2]; 2], f64) {
    let mut mean = [0.0; 2];
    let mut sum_w2 = 0.0;
    for (p, &w) in cloud.points().iter().zip(cloud.weights()) {
        mean[0] += w * p.valence();
        mean[1] += w * p.arousal();
        sum_w2 += w * w;
    }
    let mut cov = [[0.0; 2]; 2];
    for (p, &w) in cloud.points().iter().zip(cloud.weights()) {
        let dv = p.valence() - mean[0];
        let da = p.arousal() - mean[1];
        cov[0][0] += w * dv * dv;
        cov[0][1] += w * dv * da;
        cov[1][1] += w * da * da;
    }
    let correction = 1.0 - sum_w2;
    if correction > 0.0 {
        cov[0][0] /= correction;
        cov[0][1] /= correction;
        cov[1][1] /= correction;
    }
    cov[1][0] = cov[0][1];
    (mean, cov, 1.0 / sum_w2)
}

/// Scott's rule for a weighted 2-D cloud: `n_eff^(-1/3) * cov`.
///
/// Falls back to `0.1^2 * I` when `n_eff < 2` or the sample covariance is singular.
pub fn scott_bandwidth(cloud: &WeightedPointCloud) -> Result<Bandwidth> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let (_, cov, n_eff) = weighted_moments(cloud);
    if n_eff < 2.0 || min_eigenvalue(&cov) <= SINGULAR_EIGENVALUE {
        return Ok(Bandwidth::fallback());
    }
    let factor = n_eff.powf(-1.0 / 3.0);
    let scaled = [
        [factor * cov[0][0], factor * cov[0][1]],
        [factor * cov[1][0], factor * cov[1][1]],
    ];
    Bandwidth::new(scaled).or(Ok(Bandwidth::fallback()))
}

/// Picks a kernel bandwidth for a point cloud.
pub trait BandwidthStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn select(&self, cloud: &WeightedPointCloud) -> Result<Bandwidth>;
}

pub struct ScottRule;

impl BandwidthStrategy for ScottRule {
    fn name(&self) -> &'static str {
        "scott"
    }

    fn select(&self, cloud: &WeightedPointCloud) -> Result<Bandwidth> {
        scott_bandwidth(cloud)
    }
}

pub struct FixedBandwidth(pub Bandwidth);

impl BandwidthStrategy for FixedBandwidth {
    fn name(&self) -> &'static str {
        "fixed"
    }

    fn select(&self, cloud: &WeightedPointCloud) -> Result<Bandwidth> {
        if cloud.is_empty() {
            return Err(Error::EmptyCloud);
        }
        Ok(self.0)
    }
}

/// Bandwidth as written in an aggregation config:
/// `"scott"`, `{"sigma": s}` or `{"cov": [[a, b], [b, c]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BandwidthConfig {
    Named(String),
    Sigma { sigma: f64 },
    Cov { cov: [[f64; 2]; 2] },
}

impl Default for BandwidthConfig {
    fn default() -> Self {
        BandwidthConfig::Named("scott".into())
    }
}

type StrategyCtor = fn() -> Box<dyn BandwidthStrategy>;

/// Parameter-free strategies selectable by name.
pub const NAMED_STRATEGIES: &[(&str, StrategyCtor)] = &[("scott", || Box::new(ScottRule))];

impl BandwidthConfig {
    pub fn strategy(&self) -> Result<Box<dyn BandwidthStrategy>> {
        match self {
            BandwidthConfig::Named(name) => NAMED_STRATEGIES
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, ctor)| ctor())
                .ok_or_else(|| Error::Format(format!("unknown bandwidth strategy {name:?}"))),
            BandwidthConfig::Sigma { sigma } => {
                Ok(Box::new(FixedBandwidth(Bandwidth::isotropic(*sigma)?)))
            }
            BandwidthConfig::Cov { cov } => Ok(Box::new(FixedBandwidth(Bandwidth::new(*cov)?))),
        }
    }
}
