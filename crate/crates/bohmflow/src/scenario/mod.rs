//! Declarative scenario configs, named presets, and the artifact-producing
//! runner behind the CLI.
//!
//! A scenario is a TOML document: physical constants, a potential, one or
//! two packets, a coupling value (or sweep list), integration controls, the
//! ensemble layout, and the requested outputs. Presets expand to fully
//! explicit configs and round-trip through serialization.

mod presets;
mod run;

pub use presets::{preset, preset_names};
pub use run::{
    run, simulate, sweep_lambda, Manifest, OutputFormat, RunArtifact, RunOptions, RunSummary,
    SimulationOutcome, SweepArtifact,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::gaussian::{Constants, GaussianState};
use crate::potential::Potential;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid config: field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("unknown preset `{0}` (see `presets` for the list)")]
    UnknownPreset(String),

    #[error("failed to parse config: {0}")]
    Parse(#[from] toml::de::Error),

    #[error(transparent)]
    Physics(#[from] Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(
        "density grid too fine: {cells} cells exceed the {max} limit; \
             coarsen grid.nx or raise integration.store_every"
    )]
    GridTooFine { cells: u64, max: u64 },
}

fn config_err(field: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Config {
        field: field.into(),
        message: message.into(),
    }
}

/// A full scenario description; see the book's CLI chapter for the schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub constants: Constants,
    pub potential: PotentialSpec,
    pub packets: Vec<PacketSpec>,
    pub lambda: LambdaSpec,
    pub integration: IntegrationSpec,
    #[serde(default)]
    pub ensemble: EnsembleSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

/// Potential in config form: `{kind = "free"}`, `{kind = "harmonic",
/// omega = 1.0}`, or `{kind = "quadratic", c = [c0, c1, c2]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PotentialSpec {
    Free,
    Harmonic { omega: f64 },
    Quadratic { c: Vec<f64> },
}

impl PotentialSpec {
    pub fn build(&self) -> Result<Potential, ScenarioError> {
        match self {
            PotentialSpec::Free => Ok(Potential::Free),
            PotentialSpec::Harmonic { omega } => Potential::harmonic(*omega)
                .map_err(|e| config_err("potential.omega", e.to_string())),
            PotentialSpec::Quadratic { c } => Potential::from_coefficients(c)
                .map_err(|e| config_err("potential.c", e.to_string())),
        }
    }
}

/// Initial packet: centroid plus either a width `sigma0` or a complex
/// `alpha0 = [re, im]` (exactly one of the two).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub x0: f64,
    pub p0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<[f64; 2]>,
}

impl PacketSpec {
    pub fn build(&self, constants: &Constants) -> Result<GaussianState, ScenarioError> {
        match (self.sigma0, self.alpha0) {
            (Some(sigma0), None) => {
                GaussianState::minimum_uncertainty(self.x0, self.p0, sigma0, constants)
                    .map_err(|e| config_err("packets.sigma0", e.to_string()))
            }
            (None, Some([re, im])) => GaussianState::from_alpha(
                self.x0,
                self.p0,
                num_complex::Complex64::new(re, im),
                constants,
            )
            .map_err(|e| config_err("packets.alpha0", e.to_string())),
            (None, None) => Err(config_err("packets", "set either sigma0 or alpha0")),
            (Some(_), Some(_)) => Err(config_err(
                "packets",
                "sigma0 and alpha0 are mutually exclusive",
            )),
        }
    }
}

/// A single coupling value or a sweep list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    One(f64),
    Sweep(Vec<f64>),
}

impl LambdaSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            LambdaSpec::One(v) => vec![*v],
            LambdaSpec::Sweep(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationSpec {
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub t_final: f64,
    #[serde(default = "default_store_every")]
    pub store_every: usize,
}

fn default_dt() -> f64 {
    1e-3
}

fn default_store_every() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    /// Paths launched per packet.
    #[serde(default = "default_count")]
    pub count: usize,
    /// Launch offsets span `[-span, +span]` in units of the packet width.
    #[serde(default = "default_span")]
    pub span_sigma: f64,
    #[serde(default)]
    pub placement: Placement,
}

fn default_count() -> usize {
    15
}

fn default_span() -> f64 {
    2.5
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        EnsembleSpec {
            count: 15,
            span_sigma: 2.5,
            placement: Placement::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    #[default]
    Uniform,
    /// Offsets at the normal quantiles of the initial density; the path
    /// fraction inside an interval then tracks its probability content.
    Quantile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default = "yes")]
    pub trajectories: bool,
    #[serde(default)]
    pub classical: bool,
    #[serde(default)]
    pub density: bool,
    #[serde(default)]
    pub nodes: bool,
    #[serde(default = "yes")]
    pub audits: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            trajectories: true,
            classical: false,
            density: false,
            nodes: false,
            audits: true,
        }
    }
}

/// Uniform x-grid for density maps, sampled at every stored time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        let config: ScenarioConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        Constants::new(self.constants.hbar, self.constants.mass)
            .map_err(|e| config_err("constants", e.to_string()))?;
        self.potential.build()?;
        if self.packets.is_empty() || self.packets.len() > 2 {
            return Err(config_err("packets", "need exactly 1 or 2 packets"));
        }
        for packet in &self.packets {
            packet.build(&self.constants)?;
        }
        let lambdas = self.lambda.values();
        if lambdas.is_empty() {
            return Err(config_err("lambda", "sweep list is empty"));
        }
        for &l in &lambdas {
            if !(0.0..=1.0).contains(&l) {
                return Err(config_err("lambda", format!("{l} lies outside [0, 1]")));
            }
        }
        if !(self.integration.dt > 0.0) {
            return Err(config_err("integration.dt", "must be positive"));
        }
        if !(self.integration.t_final > 0.0) {
            return Err(config_err("integration.t_final", "must be positive"));
        }
        if self.integration.store_every == 0 {
            return Err(config_err("integration.store_every", "must be at least 1"));
        }
        if self.ensemble.count == 0 {
            return Err(config_err("ensemble.count", "must be at least 1"));
        }
        if !(self.ensemble.span_sigma > 0.0) {
            return Err(config_err("ensemble.span_sigma", "must be positive"));
        }
        if let Some(grid) = &self.grid {
            if grid.nx < 2 || !(grid.x_max > grid.x_min) {
                return Err(config_err("grid", "need nx >= 2 and x_max > x_min"));
            }
        }
        Ok(())
    }

    /// Replace the coupling list (the CLI `--lambda` override).
    pub fn with_lambda(mut self, values: &[f64]) -> Self {
        self.lambda = if values.len() == 1 {
            LambdaSpec::One(values[0])
        } else {
            LambdaSpec::Sweep(values.to_vec())
        };
        self
    }

    /// Closed-form node spacing when the scenario matches a symmetric
    /// two-packet setup: `pi hbar / |p0|` for a free head-on collision,
    /// `pi hbar / (m omega |x0|)` for packets released from opposite
    /// harmonic turning points.
    pub fn expected_node_spacing(&self) -> Option<f64> {
        if self.packets.len() != 2 {
            return None;
        }
        let (a, b) = (&self.packets[0], &self.packets[1]);
        let symmetric = (a.x0 + b.x0).abs() < 1e-12
            && (a.p0 + b.p0).abs() < 1e-12
            && a.sigma0 == b.sigma0
            && a.alpha0 == b.alpha0;
        if !symmetric {
            return None;
        }
        let h = self.constants.hbar;
        match self.potential {
            PotentialSpec::Free if a.p0.abs() > 0.0 => Some(std::f64::consts::PI * h / a.p0.abs()),
            PotentialSpec::Harmonic { omega } if a.p0 == 0.0 && a.x0.abs() > 0.0 => {
                Some(std::f64::consts::PI * h / (self.constants.mass * omega * a.x0.abs()))
            }
            _ => None,
        }
    }
}
