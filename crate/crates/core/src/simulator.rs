//! Closed-loop engagement simulation in the world frame.
//!
//! Every agent has simple motion: constant speed (Target α, Attacker 1,
//! Defender 1/γ) and an instantaneously chosen heading. Headings are
//! recomputed every step from the chosen guidance policy and positions are
//! advanced by explicit Euler, which is exact for straight segments.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TadError};
use crate::geometry::{wrap_angle, Scenario, Vec2};
use crate::solver::{self, headings_from_aimpoint, Regime};
use crate::tpbvp::ReducedState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GuidancePolicy {
    /// Re-solve the game from current positions and follow the optimal heading.
    OptimalGame,
    /// Heading rate = nav_constant × line-of-sight rate to the agent's quarry.
    ProportionalNavigation { nav_constant: f64 },
    /// Head straight at the quarry (Target: straight away from the Attacker).
    PurePursuit,
    FixedHeading { angle: f64 },
}

/// One policy per agent. The Attacker's quarry is the Target; the Defender's
/// quarry is the Attacker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Policies {
    pub target: GuidancePolicy,
    pub attacker: GuidancePolicy,
    pub defender: GuidancePolicy,
}

impl Policies {
    pub fn all_optimal() -> Self {
        Policies {
            target: GuidancePolicy::OptimalGame,
            attacker: GuidancePolicy::OptimalGame,
            defender: GuidancePolicy::OptimalGame,
        }
    }

    /// Target and Defender play the game; the Attacker uses `attacker`.
    pub fn team_optimal_against(attacker: GuidancePolicy) -> Self {
        Policies {
            attacker,
            ..Self::all_optimal()
        }
    }

    fn any_optimal(&self) -> bool {
        [self.target, self.attacker, self.defender]
            .iter()
            .any(|p| matches!(p, GuidancePolicy::OptimalGame))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub t_max: f64,
    /// Re-solve the game every `resolve_stride` steps; the cached aim point
    /// is reused in between.
    pub resolve_stride: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 1e-3,
            t_max: 1e3,
            resolve_stride: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    /// Normalized time (length / V_A).
    pub times: Vec<f64>,
    pub target: Vec<Vec2>,
    pub attacker: Vec<Vec2>,
    pub defender: Vec<Vec2>,
    /// World headings used on the step that starts at each sample; the last
    /// sample repeats the previous heading.
    pub target_heading: Vec<f64>,
    pub attacker_heading: Vec<f64>,
    pub defender_heading: Vec<f64>,
    /// Attacker–Target range R.
    pub target_range: Vec<f64>,
    /// Attacker–Defender range r.
    pub defender_range: Vec<f64>,
    pub theta: Vec<f64>,
    /// Aim point of the most recent game solve at each step, if any policy solves the game.
    pub aim_points: Vec<Option<Vec2>>,
    /// Attacker heading at t = 0 when it flies proportional navigation.
    pub pn_initial_heading: Option<f64>,
}

impl Trajectory {
    fn push(&mut self, t: f64, s: &Scenario, h: [f64; 3], aim: Option<Vec2>) {
        self.times.push(t);
        self.target.push(s.target);
        self.attacker.push(s.attacker);
        self.defender.push(s.defender);
        self.target_heading.push(h[0]);
        self.attacker_heading.push(h[1]);
        self.defender_heading.push(h[2]);
        self.target_range.push(s.target.dist(s.attacker));
        self.defender_range.push(s.defender.dist(s.attacker));
        let theta = wrap_angle((s.defender - s.attacker).angle() - (s.target - s.attacker).angle());
        self.theta.push(theta);
        self.aim_points.push(aim);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    DefenderIntercepts {
        t_f: f64,
        /// Target–Attacker separation at interception.
        r_final: f64,
        intercept_point: Vec2,
    },
    AttackerCaptures {
        t: f64,
    },
    Timeout {
        t_max: f64,
    },
}

/// Direction from `attacker` to `target`.
pub fn pure_pursuit_heading(attacker: Vec2, target: Vec2) -> Result<f64> {
    let d = target - attacker;
    if d.norm() == 0.0 {
        return Err(TadError::UndefinedDirection("pursuer already on its quarry"));
    }
    Ok(d.angle())
}

/// Commanded heading rate `N · dλ/dt` for a pursuer chasing a quarry, with
/// the line-of-sight rate from relative position and velocity.
pub fn pn_heading_rate(
    pursuer_pos: Vec2,
    pursuer_vel: Vec2,
    quarry_pos: Vec2,
    quarry_vel: Vec2,
    nav_constant: f64,
) -> Result<f64> {
    let rel = quarry_pos - pursuer_pos;
    let r2 = rel.dot(rel);
    if r2 == 0.0 {
        return Err(TadError::UndefinedDirection("pursuer already on its quarry"));
    }
    let los_rate = rel.cross(quarry_vel - pursuer_vel) / r2;
    Ok(nav_constant * los_rate)
}

/// Reduced coordinates of a world configuration.
pub fn reduce_state(target: Vec2, attacker: Vec2, defender: Vec2) -> Result<ReducedState> {
    let to_t = target - attacker;
    let to_d = defender - attacker;
    if to_t.norm() == 0.0 || to_d.norm() == 0.0 {
        return Err(TadError::UndefinedDirection("agents coincide"));
    }
    Ok(ReducedState {
        target_range: to_t.norm(),
        defender_range: to_d.norm(),
        theta: wrap_angle(to_d.angle() - to_t.angle()),
        los_angle: to_t.angle(),
    })
}

/// Smallest s in [0, 1] with |p0 + s (p1 - p0)| <= radius.
fn first_crossing(p0: Vec2, p1: Vec2, radius: f64) -> Option<f64> {
    if p0.norm() <= radius {
        return Some(0.0);
    }
    let d = p1 - p0;
    let a = d.dot(d);
    if a == 0.0 {
        return None;
    }
    let b = 2.0 * p0.dot(d);
    let c = p0.dot(p0) - radius * radius;
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let s = (-b - disc.sqrt()) / (2.0 * a);
        if (0.0..=1.0).contains(&s) {
            return Some(s);
        }
    }
    // grazing passes where rounding pushes the discriminant below zero
    let s_min = (-p0.dot(d) / a).clamp(0.0, 1.0);
    let closest = (p0 + d * s_min).norm();
    (closest <= radius + 1e-12 * p0.norm()).then_some(s_min)
}

fn validate(policies: &Policies, cfg: &SimConfig) -> Result<()> {
    let bad = |field, reason: &str| {
        Err(TadError::InvalidSimulation {
            field,
            reason: reason.into(),
        })
    };
    if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
        return bad("dt", "must be positive and finite");
    }
    if !(cfg.t_max > 0.0 && cfg.t_max.is_finite()) {
        return bad("t_max", "must be positive and finite");
    }
    if cfg.resolve_stride == 0 {
        return bad("resolve_stride", "must be at least 1");
    }
    for (field, p) in [
        ("target", policies.target),
        ("attacker", policies.attacker),
        ("defender", policies.defender),
    ] {
        match p {
            GuidancePolicy::ProportionalNavigation { nav_constant } => {
                if !(nav_constant > 0.0 && nav_constant.is_finite()) {
                    return bad(field, "nav_constant must be positive");
                }
                if field == "target" {
                    return bad(field, "proportional navigation needs a quarry; the target has none");
                }
            }
            GuidancePolicy::FixedHeading { angle } if !angle.is_finite() => {
                return bad(field, "heading must be finite");
            }
            _ => {}
        }
    }
    Ok(())
}

struct GameAim {
    point: Vec2,
    regime: Regime,
}

/// Integrates the engagement until interception, capture of the Target, or `t_max`.
pub fn run(scenario: &Scenario, policies: &Policies, cfg: &SimConfig) -> Result<(Trajectory, Outcome)> {
    scenario.validate()?;
    validate(policies, cfg)?;
    let speeds = [scenario.alpha, 1.0, scenario.beta()];
    let r_c = scenario.capture_radius_defender;
    let r_att = scenario.capture_radius_attacker;

    let mut cur = *scenario;
    let mut traj = Trajectory::default();
    let mut aim: Option<GameAim> = None;
    // last headings, reused when a direction is momentarily undefined
    let mut heading = [
        (cur.target - cur.attacker).angle(),
        pure_pursuit_heading(cur.attacker, cur.target)?,
        pure_pursuit_heading(cur.defender, cur.attacker)?,
    ];
    let mut pn_heading = None;
    if let GuidancePolicy::ProportionalNavigation { .. } = policies.attacker {
        pn_heading = Some(heading[1]);
        traj.pn_initial_heading = pn_heading;
    }
    let mut pn_defender = match policies.defender {
        GuidancePolicy::ProportionalNavigation { .. } => Some(heading[2]),
        _ => None,
    };

    if cur.defender.dist(cur.attacker) <= r_c {
        traj.push(0.0, &cur, heading, None);
        let outcome = Outcome::DefenderIntercepts {
            t_f: 0.0,
            r_final: cur.target.dist(cur.attacker),
            intercept_point: cur.attacker,
        };
        return Ok((traj, outcome));
    }
    if cur.target.dist(cur.attacker) <= r_att {
        traj.push(0.0, &cur, heading, None);
        return Ok((traj, Outcome::AttackerCaptures { t: 0.0 }));
    }

    let mut step = 0usize;
    let mut t = 0.0;
    loop {
        if policies.any_optimal() && (step.is_multiple_of(cfg.resolve_stride) || aim.is_none()) {
            let sol = solver::solve(&cur).map_err(|e| TadError::SimulationStep {
                step,
                source: Box::new(e),
            })?;
            aim = Some(GameAim {
                point: sol.intercept_world,
                regime: sol.regime,
            });
        }
        let game = match &aim {
            Some(g) => match headings_from_aimpoint(&cur, g.point, g.regime) {
                Ok(h) => Some(h),
                Err(TadError::UndefinedDirection(_)) => None,
                Err(e) => {
                    return Err(TadError::SimulationStep {
                        step,
                        source: Box::new(e),
                    })
                }
            },
            None => None,
        };

        let mut next = heading;
        for (k, policy) in [policies.target, policies.attacker, policies.defender].iter().enumerate() {
            next[k] = match *policy {
                GuidancePolicy::OptimalGame => match game {
                    Some(h) => [h.target, h.attacker, h.defender][k],
                    None => heading[k],
                },
                GuidancePolicy::FixedHeading { angle } => angle,
                GuidancePolicy::PurePursuit => {
                    let res = match k {
                        0 => pure_pursuit_heading(cur.attacker, cur.target),
                        1 => pure_pursuit_heading(cur.attacker, cur.target),
                        _ => pure_pursuit_heading(cur.defender, cur.attacker),
                    };
                    res.unwrap_or(heading[k])
                }
                GuidancePolicy::ProportionalNavigation { .. } => match k {
                    1 => pn_heading.unwrap_or(heading[1]),
                    _ => pn_defender.unwrap_or(heading[2]),
                },
            };
        }
        heading = next;

        let h = cfg.dt.min(cfg.t_max - t);
        let vel: Vec<Vec2> = (0..3).map(|k| Vec2::from_angle(heading[k]) * speeds[k]).collect();

        // heading-rate updates for the next step
        if let GuidancePolicy::ProportionalNavigation { nav_constant } = policies.attacker {
            if let Ok(rate) = pn_heading_rate(cur.attacker, vel[1], cur.target, vel[0], nav_constant) {
                pn_heading = Some(heading[1] + rate * h);
            }
        }
        if let GuidancePolicy::ProportionalNavigation { nav_constant } = policies.defender {
            if let Ok(rate) = pn_heading_rate(cur.defender, vel[2], cur.attacker, vel[1], nav_constant) {
                pn_defender = Some(heading[2] + rate * h);
            }
        }

        traj.push(t, &cur, heading, aim.as_ref().map(|g| g.point));

        let moved = Scenario {
            target: cur.target + vel[0] * h,
            attacker: cur.attacker + vel[1] * h,
            defender: cur.defender + vel[2] * h,
            ..cur
        };
        let hit_d = first_crossing(cur.attacker - cur.defender, moved.attacker - moved.defender, r_c);
        let hit_a = first_crossing(cur.target - cur.attacker, moved.target - moved.attacker, r_att);
        let hit = match (hit_d, hit_a) {
            (Some(sd), Some(sa)) if sd <= sa => Some((sd, true)),
            (Some(sd), None) => Some((sd, true)),
            (_, Some(sa)) => Some((sa, false)),
            (None, None) => None,
        };
        if let Some((s, defender_wins)) = hit {
            let at = Scenario {
                target: cur.target + vel[0] * (s * h),
                attacker: cur.attacker + vel[1] * (s * h),
                defender: cur.defender + vel[2] * (s * h),
                ..cur
            };
            let tc = t + s * h;
            if s > 0.0 {
                traj.push(tc, &at, heading, aim.as_ref().map(|g| g.point));
            }
            let outcome = if defender_wins {
                Outcome::DefenderIntercepts {
                    t_f: tc,
                    r_final: at.target.dist(at.attacker),
                    intercept_point: at.attacker,
                }
            } else {
                Outcome::AttackerCaptures { t: tc }
            };
            return Ok((traj, outcome));
        }

        cur = moved;
        step += 1;
        t = if h < cfg.dt { cfg.t_max } else { step as f64 * cfg.dt };
        if t >= cfg.t_max {
            traj.push(t, &cur, heading, aim.as_ref().map(|g| g.point));
            return Ok((traj, Outcome::Timeout { t_max: cfg.t_max }));
        }
    }
}
