use serde::{Deserialize, Serialize};

use crate::error::PropagationError;

/// Uniform discretization of `[t0, tf]` (µs) into `steps` intervals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t0: f64,
    tf: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, tf: f64, steps: usize) -> Result<Self, PropagationError> {
        if !(t0.is_finite() && tf.is_finite()) {
            return Err(PropagationError::InvalidGrid(format!(
                "endpoints must be finite, got [{t0}, {tf}]"
            )));
        }
        if tf < t0 {
            return Err(PropagationError::InvalidGrid(format!(
                "tf = {tf} precedes t0 = {t0}"
            )));
        }
        // A zero-length window with zero steps is the trivial identity run.
        if steps == 0 && tf != t0 {
            return Err(PropagationError::InvalidGrid(
                "steps must be positive".to_string(),
            ));
        }
        Ok(Self { t0, tf, steps })
    }

    /// Symmetric window `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, steps: usize) -> Result<Self, PropagationError> {
        Self::new(-half_width, half_width, steps)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn tf(&self) -> f64 {
        self.tf
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            (self.tf - self.t0) / self.steps as f64
        }
    }

    /// Sample time `k` in `0..=steps`.
    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.tf
        } else {
            self.t0 + k as f64 * self.dt()
        }
    }

    pub fn midpoint(&self, k: usize) -> f64 {
        self.t0 + (k as f64 + 0.5) * self.dt()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| self.time(k)).collect()
    }

    /// Same window with `factor` times as many steps.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            steps: self.steps * factor,
            ..*self
        }
    }

    pub fn with_steps(&self, steps: usize) -> Self {
        Self { steps, ..*self }
    }
}
