use crate::error::{Error, Result};

/// Kernel width for Gaussian conversions into a grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Sigma {
    /// Scott's rule over the (weighted) source points, with the degenerate fallback.
    #[default]
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConversionParams {
    /// Added to each distance in the inverse-distance categorical resampling.
    pub epsilon_dist: f64,
    /// Sharpness of the point-to-categorical Gaussian softmax.
    pub sharpness_k: f64,
    pub sigma: Sigma,
    /// Temperature of grid sharpening before taking the center of mass.
    pub temperature_tau: f64,
    /// Floor added to each cell before sharpening.
    pub epsilon_temp: f64,
}

impl Default for ConversionParams {
    fn default() -> Self {
        Self {
            epsilon_dist: 1e-6,
            sharpness_k: 10.0,
            sigma: Sigma::Auto,
            temperature_tau: 0.05,
            epsilon_temp: 1e-12,
        }
    }
}

impl ConversionParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |name, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParam { name, value })
            }
        };
        positive("epsilon_dist", self.epsilon_dist)?;
        positive("sharpness_k", self.sharpness_k)?;
        positive("epsilon_temp", self.epsilon_temp)?;
        positive("temperature_tau", self.temperature_tau)?;
        if self.temperature_tau > 1.0 {
            return Err(Error::InvalidParam {
                name: "temperature_tau",
                value: self.temperature_tau,
            });
        }
        if let Sigma::Fixed(s) = self.sigma {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::SigmaNonPositive(s));
            }
        }
        Ok(())
    }
}
