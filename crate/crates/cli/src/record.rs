//! Serialized result documents. Field order is the output key order.

use serde::Serialize;
use tad_core::geometry::Region;
use tad_core::{GuidancePolicy, InterceptionSolution, Outcome, Policies, Regime, Scenario, SimConfig, Vec2};

use crate::VERSION;

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: "tad",
            version: VERSION,
        }
    }
}

/// Facts about the run that do not depend on the machine or the clock.
#[derive(Debug, Clone, Serialize)]
pub struct RunInfo {
    pub command: &'static str,
    pub deterministic: bool,
    pub float_format: &'static str,
    pub time_unit: &'static str,
}

impl RunInfo {
    pub fn new(command: &'static str) -> Self {
        RunInfo {
            command,
            deterministic: true,
            float_format: "17 significant digits",
            time_unit: "length / attacker speed",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub target: [f64; 2],
    pub attacker: [f64; 2],
    pub defender: [f64; 2],
    pub alpha: f64,
    pub gamma: f64,
    pub capture_radius_defender: f64,
    pub capture_radius_attacker: f64,
}

pub fn xy(p: Vec2) -> [f64; 2] {
    [p.x, p.y]
}

impl From<&Scenario> for InputEcho {
    fn from(s: &Scenario) -> Self {
        InputEcho {
            target: xy(s.target),
            attacker: xy(s.attacker),
            defender: xy(s.defender),
            alpha: s.alpha,
            gamma: s.gamma,
            capture_radius_defender: s.capture_radius_defender,
            capture_radius_attacker: s.capture_radius_attacker,
        }
    }
}

pub fn region_name(r: Region) -> &'static str {
    match r {
        Region::Inside => "inside",
        Region::Outside => "outside",
        Region::OnBoundary => "on_boundary",
    }
}

pub fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Inside => "inside",
        Regime::Outside => "outside",
    }
}

pub fn method_name(sol: &InterceptionSolution) -> &'static str {
    if sol.used_grid_fallback {
        "grid_fallback"
    } else {
        "sextic"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HeadingsRecord {
    pub target: f64,
    pub attacker: f64,
    pub defender: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateRecord {
    pub angle: f64,
    pub cost: f64,
    pub residual: f64,
    pub modulus: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionRecord {
    pub tool: ToolInfo,
    pub input: InputEcho,
    pub region: &'static str,
    pub regime: &'static str,
    pub phi_star: f64,
    /// Attacker–Defender frame: Attacker on +x, Defender on -x, origin midway.
    pub intercept_frame: [f64; 2],
    pub intercept_world: [f64; 2],
    pub j_star: f64,
    pub j_semantics: &'static str,
    pub critical_alpha: f64,
    pub escape_infeasible: bool,
    pub t_f: f64,
    pub target_terminal: [f64; 2],
    pub headings: HeadingsRecord,
    pub method: &'static str,
    pub candidates: Vec<CandidateRecord>,
    pub run: RunInfo,
}

impl SolutionRecord {
    pub fn new(scenario: &Scenario, sol: &InterceptionSolution, command: &'static str) -> Self {
        SolutionRecord {
            tool: ToolInfo::current(),
            input: scenario.into(),
            region: region_name(sol.region),
            regime: regime_name(sol.regime),
            phi_star: sol.phi_star,
            intercept_frame: xy(sol.intercept_frame),
            intercept_world: xy(sol.intercept_world),
            j_star: sol.j_star,
            j_semantics: sol.regime.cost_semantics(),
            critical_alpha: sol.critical_alpha,
            escape_infeasible: sol.escape_infeasible,
            t_f: sol.t_f,
            target_terminal: xy(sol.target_terminal),
            headings: HeadingsRecord {
                target: sol.headings.target,
                attacker: sol.headings.attacker,
                defender: sol.headings.defender,
            },
            method: method_name(sol),
            candidates: sol
                .candidates
                .iter()
                .map(|c| CandidateRecord {
                    angle: c.angle,
                    cost: c.cost,
                    residual: c.residual,
                    modulus: c.modulus,
                })
                .collect(),
            run: RunInfo::new(command),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PolicyRecord {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nav_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heading: Option<f64>,
}

impl From<GuidancePolicy> for PolicyRecord {
    fn from(p: GuidancePolicy) -> Self {
        let (kind, nav_constant, heading) = match p {
            GuidancePolicy::OptimalGame => ("optimal", None, None),
            GuidancePolicy::ProportionalNavigation { nav_constant } => ("pn", Some(nav_constant), None),
            GuidancePolicy::PurePursuit => ("pure_pursuit", None, None),
            GuidancePolicy::FixedHeading { angle } => ("fixed", None, Some(angle)),
        };
        PolicyRecord {
            kind,
            nav_constant,
            heading,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSettings {
    pub dt: f64,
    pub t_max: f64,
    pub resolve_stride: usize,
    pub target: PolicyRecord,
    pub attacker: PolicyRecord,
    pub defender: PolicyRecord,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutcomeRecord {
    pub kind: &'static str,
    /// Interception or capture time; the horizon on timeout.
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_final: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intercept_point: Option<[f64; 2]>,
}

impl From<Outcome> for OutcomeRecord {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::DefenderIntercepts {
                t_f,
                r_final,
                intercept_point,
            } => OutcomeRecord {
                kind: "defender_intercepts",
                t: t_f,
                r_final: Some(r_final),
                intercept_point: Some(xy(intercept_point)),
            },
            Outcome::AttackerCaptures { t } => OutcomeRecord {
                kind: "attacker_captures",
                t,
                r_final: None,
                intercept_point: None,
            },
            Outcome::Timeout { t_max } => OutcomeRecord {
                kind: "timeout",
                t: t_max,
                r_final: None,
                intercept_point: None,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationRecord {
    pub tool: ToolInfo,
    pub input: InputEcho,
    pub simulation: SimulationSettings,
    pub outcome: OutcomeRecord,
    pub samples: usize,
    /// Attacker heading at t = 0 when it flies proportional navigation.
    pub pn_initial_heading: Option<f64>,
    pub run: RunInfo,
}

impl SimulationRecord {
    pub fn new(
        scenario: &Scenario,
        policies: &Policies,
        cfg: &SimConfig,
        outcome: Outcome,
        samples: usize,
        pn_initial_heading: Option<f64>,
    ) -> Self {
        SimulationRecord {
            tool: ToolInfo::current(),
            input: scenario.into(),
            simulation: SimulationSettings {
                dt: cfg.dt,
                t_max: cfg.t_max,
                resolve_stride: cfg.resolve_stride,
                target: policies.target.into(),
                attacker: policies.attacker.into(),
                defender: policies.defender.into(),
            },
            outcome: outcome.into(),
            samples,
            pn_initial_heading,
            run: RunInfo::new("simulate"),
        }
    }
}
