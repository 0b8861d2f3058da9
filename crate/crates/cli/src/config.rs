//! Run configuration: one JSON document, unknown keys rejected.

use pdmosc_core::{AmbiguityTriple, Branch, ClassicalState, ModelParams, QuantumConfig};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambiguity: Option<TripleConfig>,
    #[serde(default = "one")]
    pub m0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigensolve: Option<EigensolveConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavefunction: Option<WavefunctionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_portrait: Option<PortraitConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linearize_check: Option<LinearizeConfig>,
}

fn one() -> f64 {
    1.0
}

fn default_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub omega: f64,
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleConfig {
    pub alpha: f64,
    pub beta: f64,
}

/// Initial condition: a phase-space point `{x, xdot}` or an orbit label
/// `{energy, theta0}` (`theta0` defaults to 0).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Start {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xdot: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta0: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub initial: Start,
    pub t_end: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Uniform output samples from the dense interpolant; accepted steps if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub energies: Vec<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub levels: usize,
    /// Several orderings in one run; the top-level `ambiguity` is used if empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triples: Vec<TripleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Xi,
    X,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigensolveConfig {
    pub levels: usize,
    pub space: Space,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(default)]
    pub refine: bool,
    /// Fail when any per-level error estimate exceeds this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default)]
    pub vectors: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavefunctionConfig {
    pub levels: usize,
    /// Defaults to 200 per unit of ξ, so integer ξ values are grid points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Defaults to the normalisation cut-off of the highest level, rounded up.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_max: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortraitConfig {
    pub energies: Vec<f64>,
    #[serde(default = "default_portrait_samples")]
    pub samples: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_portrait_samples() -> usize {
    200
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearizeConfig {
    pub initial: Start,
    #[serde(default = "default_periods")]
    pub periods: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_periods() -> f64 {
    5.0
}

/// Flag overrides, applied to the JSON document before it is typed.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub entries: Vec<(&'static [&'static str], Value)>,
}

impl Overrides {
    pub fn set(&mut self, path: &'static [&'static str], value: Option<Value>) {
        if let Some(v) = value {
            self.entries.push((path, v));
        }
    }
}

fn apply(doc: &mut Value, path: &[&str], value: Value) -> Result<(), CliError> {
    let mut cur = doc;
    for key in &path[..path.len() - 1] {
        let obj = cur.as_object_mut().ok_or_else(|| CliError::Config {
            path: key.to_string(),
            message: "expected an object".into(),
        })?;
        cur = obj
            .entry(key.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = cur.as_object_mut().ok_or_else(|| CliError::Config {
        path: path.join("."),
        message: "expected an object".into(),
    })?;
    obj.insert(path[path.len() - 1].to_string(), value);
    Ok(())
}

pub fn load(text: &str, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let mut doc: Value = serde_json::from_str(text).map_err(|e| CliError::Config {
        path: ".".into(),
        message: e.to_string(),
    })?;
    if !doc.is_object() {
        return Err(CliError::Config {
            path: ".".into(),
            message: "top level must be a JSON object".into(),
        });
    }
    for (path, value) in &overrides.entries {
        apply(&mut doc, path, value.clone())?;
    }
    serde_path_to_error::deserialize(doc).map_err(|e| CliError::Config {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

impl RunConfig {
    pub fn params(&self) -> Result<ModelParams, CliError> {
        let m = &self.model;
        let p = match m.branch {
            Some(b) => ModelParams::with_branch(m.omega, m.a, b),
            None => ModelParams::new(m.omega, m.a),
        };
        p.map_err(|e| CliError::invalid("model", e))
    }

    pub fn triple(&self) -> Result<AmbiguityTriple, CliError> {
        let t = self.ambiguity.ok_or_else(|| CliError::Config {
            path: "ambiguity".into(),
            message: "missing field `ambiguity`".into(),
        })?;
        to_triple(&t, "ambiguity")
    }

    pub fn quantum(&self, triple: AmbiguityTriple) -> Result<QuantumConfig, CliError> {
        QuantumConfig::new(self.params()?, triple, self.m0).map_err(CliError::from_quantum)
    }

    pub fn section<'a, T>(&self, value: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
        value.as_ref().ok_or_else(|| CliError::Config {
            path: name.into(),
            message: format!("missing field `{name}`"),
        })
    }
}

pub fn to_triple(t: &TripleConfig, path: &str) -> Result<AmbiguityTriple, CliError> {
    AmbiguityTriple::new(t.alpha, t.beta).map_err(|e| CliError::invalid(path, e))
}

impl Start {
    pub fn state(&self, params: &ModelParams, path: &str) -> Result<ClassicalState, CliError> {
        match (self.x, self.xdot, self.energy, self.theta0) {
            (Some(x), Some(xdot), None, None) => Ok(ClassicalState::new(x, xdot)),
            (None, None, Some(energy), theta0) => {
                pdmosc_core::OrbitSolution::new(energy, theta0.unwrap_or(0.0), *params)
                    .map(|s| s.state(0.0))
                    .map_err(|e| CliError::invalid(path, e))
            }
            _ => Err(CliError::Config {
                path: path.into(),
                message: "give either `x` and `xdot`, or `energy` (and optionally `theta0`)".into(),
            }),
        }
    }
}
