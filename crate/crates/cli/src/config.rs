use std::path::Path;

use minkabs::quantum::ModelConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Flat run configuration. Every key is optional in the file; missing keys
/// take the defaults below, and command-line flags override both.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Lattice points per axis (power of two, at least 8).
    pub lattice: usize,
    /// Lattice spacing in sec.
    pub spacing: f64,
    /// Particle mass in 1/sec.
    pub mass: f64,
    /// Oversampling factor of the general boost path.
    pub pad: usize,
    pub seed: u64,
    /// Boost rapidity of the covariance checks.
    pub rapidity: f64,
    /// Random states per covariance check.
    pub states: usize,
    /// Time steps of the causality sweep, in sec.
    pub delta_t: Vec<f64>,
    /// Observer rapidities of the causality sweep, taken at the last time step.
    pub rapidities: Vec<f64>,
    /// Side of the initial causality box in sec; 4 lattice spacings if absent.
    pub box_side: Option<f64>,
    /// Width of the packet cut to the causality box, in sec.
    pub width: f64,
    /// Power iterations of the commutator witness.
    pub iterations: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lattice: 32,
            spacing: 0.25,
            mass: 1.0,
            pad: 2,
            seed: 42,
            rapidity: 0.25,
            states: 8,
            delta_t: vec![0.0, 0.5, 1.0, 2.0],
            rapidities: vec![0.1, 0.25],
            box_side: None,
            width: 0.75,
            iterations: 20,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn model_config(&self, lattice: usize) -> ModelConfig {
        ModelConfig::standard()
            .with_lattice(lattice)
            .with_spacing(self.spacing)
            .with_mass(self.mass)
            .with_pad(self.pad)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.model_config(self.lattice)
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.states == 0 {
            return Err(CliError::Config("states must be at least 1".into()));
        }
        if self.delta_t.is_empty() {
            return Err(CliError::Config("delta_t needs at least one entry".into()));
        }
        if let Some(dt) = self.delta_t.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(CliError::Config(format!(
                "delta_t entries must be finite and non-negative, got {dt}"
            )));
        }
        if let Some(side) = self.box_side {
            if !(side > 0.0 && side.is_finite()) {
                return Err(CliError::Config(format!("box_side must be positive, got {side}")));
            }
        }
        if !self.rapidity.is_finite() || self.rapidities.iter().any(|r| !r.is_finite()) {
            return Err(CliError::Config("rapidities must be finite".into()));
        }
        Ok(())
    }
}
