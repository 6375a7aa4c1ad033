//! Analytic solution of the game: optimal interception point, cost and headings.
//!
//! Target outside the DA circle: the Attacker picks the circle point that
//! minimizes `|IT| + α|AI|`, the Target flees straight away from it.
//! Target inside: the Target picks the point that maximizes `α|AI| - |IT|`
//! and runs to it. In both cases the Defender and Attacker head straight at
//! the interception point.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TadError};
use crate::geometry::{
    build_frame, classify_target, critical_alpha, da_circle, wrap_angle, AdFrame, Region,
    Scenario, Vec2,
};
use crate::search::periodic_grid_min;
use crate::sextic::{
    branch_residual, build_geometry, build_sextic, candidate_angles, find_roots, GameGeometry,
};

use std::f64::consts::{PI, TAU};

/// Grid size of the fallback search.
pub const FALLBACK_GRID: usize = 4096;
/// Golden-section bracket width for the fallback and the oracle.
pub const REFINE_TOL: f64 = 1e-10;
/// Relative first-order residual above which the best root is distrusted.
pub const FALLBACK_RESIDUAL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Target starts inside the DA circle; the cost is maximized.
    Inside,
    /// Target starts outside (or on) the DA circle; the cost is minimized.
    Outside,
}

impl Regime {
    pub fn from_region(region: Region) -> Regime {
        match region {
            Region::Inside => Regime::Inside,
            Region::Outside | Region::OnBoundary => Regime::Outside,
        }
    }

    /// What `j_star` means in this regime.
    pub fn cost_semantics(self) -> &'static str {
        match self {
            Regime::Outside => "terminal target-attacker separation |IT| + alpha*|AI| (minimized)",
            Regime::Inside => "signed escape margin alpha*|AI| - |IT| (maximized)",
        }
    }
}

/// `|IT| + α|AI|`.
pub fn cost_outside(geom: &GameGeometry, phi: f64) -> f64 {
    geom.target_distance(phi) + geom.alpha * geom.attacker_distance(phi)
}

/// `α|AI| - |IT|`.
pub fn cost_inside(geom: &GameGeometry, phi: f64) -> f64 {
    geom.alpha * geom.attacker_distance(phi) - geom.target_distance(phi)
}

pub fn regime_cost(geom: &GameGeometry, regime: Regime, phi: f64) -> f64 {
    match regime {
        Regime::Outside => cost_outside(geom, phi),
        Regime::Inside => cost_inside(geom, phi),
    }
}

/// Regime cost oriented so that smaller is better.
fn loss(geom: &GameGeometry, regime: Regime, phi: f64) -> f64 {
    match regime {
        Regime::Outside => cost_outside(geom, phi),
        Regime::Inside => -cost_inside(geom, phi),
    }
}

/// dJ/dφ of the regime cost.
pub fn regime_derivative(geom: &GameGeometry, regime: Regime, phi: f64) -> Result<f64> {
    let (t, a) = geom.derivative_terms(phi)?;
    Ok(match regime {
        Regime::Outside => t + a,
        Regime::Inside => a - t,
    })
}

/// Extremizer of the regime cost over a uniform grid of `n_grid` angles in
/// (-π, π], refined by golden section. Independent of the polynomial route.
pub fn brute_force_phi(geom: &GameGeometry, regime: Regime, n_grid: usize) -> f64 {
    brute_force(geom, regime, n_grid).0
}

/// As [`brute_force_phi`], also returning the regime cost at the extremizer.
pub fn brute_force(geom: &GameGeometry, regime: Regime, n_grid: usize) -> (f64, f64) {
    assert!(n_grid >= 1000, "grid oracle needs at least 1000 points");
    let (phi, _) = periodic_grid_min(|p| loss(geom, regime, p), -PI, TAU, n_grid, REFINE_TOL);
    let phi = wrap_angle(phi);
    (phi, regime_cost(geom, regime, phi))
}

/// World-frame headings (radians from world +x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Headings {
    pub target: f64,
    pub attacker: f64,
    pub defender: f64,
}

fn direction(from: Vec2, to: Vec2, what: &'static str) -> Result<f64> {
    let d = to - from;
    if d.norm() <= 1e-12 * (1.0 + from.norm().max(to.norm())) {
        return Err(TadError::UndefinedDirection(what));
    }
    Ok(d.angle())
}

/// Optimal headings once the interception point is known: Attacker and
/// Defender fly straight at it; the Target flees along the ray from `I`
/// through itself (outside) or runs straight to `I` (inside).
pub fn headings_from_aimpoint(scenario: &Scenario, i_world: Vec2, regime: Regime) -> Result<Headings> {
    let attacker = direction(scenario.attacker, i_world, "attacker sits on the interception point")?;
    let defender = direction(scenario.defender, i_world, "defender sits on the interception point")?;
    let target = match regime {
        Regime::Outside => direction(i_world, scenario.target, "target sits on the interception point")?,
        Regime::Inside => direction(scenario.target, i_world, "target sits on the interception point")?,
    };
    Ok(Headings {
        target,
        attacker,
        defender,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedCandidate {
    pub angle: f64,
    pub cost: f64,
    pub residual: f64,
    pub modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterceptionSolution {
    pub region: Region,
    pub regime: Regime,
    pub phi_star: f64,
    pub intercept_frame: Vec2,
    pub intercept_world: Vec2,
    /// Outside: terminal separation. Inside: signed margin, see [`Regime::cost_semantics`].
    pub j_star: f64,
    /// Target position when the Defender intercepts, world frame.
    pub target_terminal: Vec2,
    pub headings: Headings,
    /// Interception time in units of length / V_A, equal to |AI|.
    pub t_f: f64,
    pub critical_alpha: f64,
    /// Inside regime with `alpha <= critical_alpha`: the Target cannot be saved.
    pub escape_infeasible: bool,
    pub candidates: Vec<EvaluatedCandidate>,
    /// True when the grid search replaced (or could not be checked against) the roots.
    pub used_grid_fallback: bool,
    pub geometry: GameGeometry,
    pub frame: AdFrame,
}

pub fn solve(scenario: &Scenario) -> Result<InterceptionSolution> {
    scenario.validate()?;
    let frame = build_frame(scenario)?;
    let x_a = frame.half_separation;
    let circle = da_circle(x_a, scenario.gamma)?;
    let target = frame.to_frame(scenario.target);
    let region = classify_target(target, &circle);
    let regime = Regime::from_region(region);
    let geom = build_geometry(target, x_a, scenario.alpha, &circle)?;

    let candidates: Vec<EvaluatedCandidate> = build_sextic(&geom)
        .and_then(|c| find_roots(&c))
        .map(|roots| {
            let cand = candidate_angles(&geom, &roots);
            (0..cand.len())
                .map(|k| EvaluatedCandidate {
                    angle: cand.angles[k],
                    cost: regime_cost(&geom, regime, cand.angles[k]),
                    residual: cand.residuals[k],
                    modulus: cand.moduli[k],
                })
                .collect()
        })
        .unwrap_or_default();

    let scale = geom.n + geom.alpha * geom.m;
    let best = pick_best(&geom, regime, &candidates, scale);
    let trusted = best.filter(|&phi| {
        regime_derivative(&geom, regime, phi)
            .map(|d| d.abs() <= FALLBACK_RESIDUAL * scale)
            .unwrap_or(false)
    });
    let (phi_star, used_grid_fallback) = match trusted {
        Some(phi) => (phi, false),
        None => {
            let (grid_phi, _) = brute_force(&geom, regime, FALLBACK_GRID);
            match best {
                Some(phi) if loss(&geom, regime, phi) <= loss(&geom, regime, grid_phi) => (phi, true),
                _ => (grid_phi, true),
            }
        }
    };

    let intercept_frame = geom.intercept_point(phi_star);
    let intercept_world = frame.to_world(intercept_frame);
    let j_star = regime_cost(&geom, regime, phi_star);
    let headings = headings_from_aimpoint(scenario, intercept_world, regime)?;
    let t_f = scenario.attacker.dist(intercept_world);
    let target_terminal = scenario.target + Vec2::from_angle(headings.target) * (scenario.alpha * t_f);
    let critical_alpha = critical_alpha(target, x_a, scenario.gamma);

    Ok(InterceptionSolution {
        region,
        regime,
        phi_star,
        intercept_frame,
        intercept_world,
        j_star,
        target_terminal,
        headings,
        t_f,
        critical_alpha,
        escape_infeasible: regime == Regime::Inside && scenario.alpha <= critical_alpha,
        candidates,
        used_grid_fallback,
        geometry: geom,
        frame,
    })
}

/// Solves many independent engagements, in parallel when enabled. Results
/// keep the input order.
pub fn solve_batch(scenarios: &[Scenario]) -> Vec<Result<InterceptionSolution>> {
    crate::par::map_slice(scenarios, solve)
}

/// Best candidate by regime cost; near-ties go to the angle closest to λ.
fn pick_best(
    geom: &GameGeometry,
    regime: Regime,
    candidates: &[EvaluatedCandidate],
    scale: f64,
) -> Option<f64> {
    let losses: Vec<(f64, f64)> = candidates
        .iter()
        .map(|c| (c.angle, loss(geom, regime, c.angle)))
        .filter(|(_, l)| l.is_finite())
        .collect();
    let min = losses.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return None;
    }
    let tie = 1e-12 * scale.max(1.0);
    losses
        .iter()
        .filter(|c| c.1 <= min + tie)
        .map(|c| c.0)
        .min_by(|a, b| {
            let da = wrap_angle(a - geom.target_polar_angle).abs();
            let db = wrap_angle(b - geom.target_polar_angle).abs();
            da.total_cmp(&db).then(a.total_cmp(b))
        })
}

/// Tests-and-tools helper: the squared-condition residual of the chosen angle.
pub fn solution_residual(sol: &InterceptionSolution) -> f64 {
    branch_residual(&sol.geometry, sol.phi_star).unwrap_or(f64::NAN)
}
