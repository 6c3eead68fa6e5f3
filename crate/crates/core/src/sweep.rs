//! Description of a batch run over a `ka` grid.

use thiserror::Error;

use crate::quadrature::Tolerance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("ka range must satisfy 0 < ka_min < ka_max (got {min} .. {max})")]
    Range { min: f64, max: f64 },
    #[error("a sweep needs at least one point")]
    NoPoints,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SweepSpec {
    pub ka_min: f64,
    pub ka_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
    pub tol: Tolerance,
    pub output_format: OutputFormat,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.n_points == 0 {
            return Err(SweepError::NoPoints);
        }
        let ok = self.ka_min.is_finite() && self.ka_max.is_finite() && self.ka_min > 0.0 && self.ka_min < self.ka_max;
        if !ok {
            return Err(SweepError::Range {
                min: self.ka_min,
                max: self.ka_max,
            });
        }
        Ok(())
    }

    /// The `ka` values of the sweep, strictly increasing. A single point sits at `ka_min`.
    pub fn grid(&self) -> Result<Vec<f64>, SweepError> {
        self.validate()?;
        let n = self.n_points;
        if n == 1 {
            return Ok(vec![self.ka_min]);
        }
        let last = (n - 1) as f64;
        let grid = (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.ka_max;
                }
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.ka_min + f * (self.ka_max - self.ka_min),
                    Spacing::Log => (self.ka_min.ln() + f * (self.ka_max.ln() - self.ka_min.ln())).exp(),
                }
            })
            .collect();
        Ok(grid)
    }
}
