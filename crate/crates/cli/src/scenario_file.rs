//! TOML scenario files.
//!
//! ```toml
//! target = [0.5, 4.0]
//! attacker = [4.0, 0.0]
//! defender = [-4.0, 0.0]
//! alpha = 0.25
//! gamma = 0.8
//! capture_radius_defender = 0.01   # optional
//! capture_radius_attacker = 0.0    # optional
//!
//! [simulation]                     # optional
//! dt = 1e-3
//! t_max = 1000.0
//! resolve_stride = 1
//! pn_constant = 3.0
//! policies = { target = "optimal", attacker = "pn", defender = "optimal" }
//!
//! [output]                         # optional default paths
//! solution = "solution.json"
//! directory = "run"
//! table = "sweep.csv"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tad_core::{GuidancePolicy, Policies, Scenario, SimConfig, Vec2};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub target: [f64; 2],
    pub attacker: [f64; 2],
    pub defender: [f64; 2],
    pub alpha: f64,
    pub gamma: f64,
    #[serde(default = "default_defender_radius")]
    pub capture_radius_defender: f64,
    #[serde(default)]
    pub capture_radius_attacker: f64,
    pub simulation: Option<SimulationBlock>,
    #[serde(default)]
    pub output: OutputBlock,
}

fn default_defender_radius() -> f64 {
    Scenario::DEFAULT_DEFENDER_CAPTURE_RADIUS
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationBlock {
    pub dt: Option<f64>,
    pub t_max: Option<f64>,
    pub resolve_stride: Option<usize>,
    /// Navigation constant for every agent flying `pn`.
    pub pn_constant: Option<f64>,
    #[serde(default)]
    pub policies: PolicyBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyBlock {
    #[serde(default)]
    pub target: PolicyName,
    #[serde(default)]
    pub attacker: PolicyName,
    #[serde(default)]
    pub defender: PolicyName,
}

/// `"optimal"`, `"pn"`, `"pure_pursuit"` or `{ fixed = <heading in radians> }`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyName {
    #[default]
    Optimal,
    Pn,
    PurePursuit,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    /// Default `-o` for `solve`.
    pub solution: Option<PathBuf>,
    /// Default `-d` for `simulate`.
    pub directory: Option<PathBuf>,
    /// Default `-o` for `sweep`.
    pub table: Option<PathBuf>,
}

pub const DEFAULT_PN_CONSTANT: f64 = 3.0;

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::validation("parsing scenario", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation("reading scenario", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The engagement, validated.
    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let v = |p: [f64; 2]| Vec2::new(p[0], p[1]);
        let s = Scenario {
            target: v(self.target),
            attacker: v(self.attacker),
            defender: v(self.defender),
            alpha: self.alpha,
            gamma: self.gamma,
            capture_radius_defender: self.capture_radius_defender,
            capture_radius_attacker: self.capture_radius_attacker,
        };
        s.validate().map_err(|e| CliError::core("validating scenario", e))?;
        Ok(s)
    }

    /// Simulation settings; all-optimal play with default step when the block is absent.
    pub fn simulation(&self) -> Result<(Policies, SimConfig, f64), CliError> {
        let block = self.simulation.clone().unwrap_or_default();
        let defaults = SimConfig::default();
        let cfg = SimConfig {
            dt: block.dt.unwrap_or(defaults.dt),
            t_max: block.t_max.unwrap_or(defaults.t_max),
            resolve_stride: block.resolve_stride.unwrap_or(defaults.resolve_stride),
        };
        let nav = block.pn_constant.unwrap_or(DEFAULT_PN_CONSTANT);
        if !(nav.is_finite() && nav > 0.0) {
            return Err(CliError::validation(
                "validating simulation",
                "invalid field `pn_constant`: must be positive and finite",
            ));
        }
        let policy = |p: PolicyName| match p {
            PolicyName::Optimal => GuidancePolicy::OptimalGame,
            PolicyName::Pn => GuidancePolicy::ProportionalNavigation { nav_constant: nav },
            PolicyName::PurePursuit => GuidancePolicy::PurePursuit,
            PolicyName::Fixed(angle) => GuidancePolicy::FixedHeading { angle },
        };
        let p = block.policies;
        let policies = Policies {
            target: policy(p.target),
            attacker: policy(p.attacker),
            defender: policy(p.defender),
        };
        Ok((policies, cfg, nav))
    }
}
