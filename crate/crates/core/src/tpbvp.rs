//! Pontryagin formulation in the reduced state space and its shooting solver.
//!
//! State: `R` (Attacker–Target range), `r` (Attacker–Defender range) and `θ`,
//! the angle at the Attacker from the ray A→T to the ray A→D. Controls are
//! headings relative to the A→T line of sight `λ`: the world headings are
//! `φ + λ` (Target), `λ + θ - χ` (Attacker) and `ψ + θ + λ - π` (Defender).
//! Speeds are normalized by the Attacker speed, so the Target moves at `α`
//! and the Defender at `β = 1/γ`.
//!
//! The Target–Defender team minimizes `-J = -∫ Ṙ dt`, the Attacker maximizes
//! it. The boundary-value problem is solved by shooting backward from the
//! terminal manifold `r = r_c, λ_R = λ_θ = 0, H = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TadError};
use crate::geometry::{wrap_angle, Scenario, Vec2};
use crate::solver::{self, Headings, InterceptionSolution, Regime};

use std::f64::consts::PI;

const SINGULAR_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedState {
    /// R, Attacker–Target range.
    pub target_range: f64,
    /// r, Attacker–Defender range.
    pub defender_range: f64,
    /// θ in (-π, π].
    pub theta: f64,
    /// World angle of the A→T line of sight; only used to recover world headings.
    pub los_angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Costate {
    /// λ_R
    pub target_range: f64,
    /// λ_r
    pub defender_range: f64,
    /// λ_θ
    pub theta: f64,
}

/// Relative headings with their sines and cosines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadingTriple {
    pub sin_phi: f64,
    pub cos_phi: f64,
    pub sin_psi: f64,
    pub cos_psi: f64,
    pub sin_chi: f64,
    pub cos_chi: f64,
    /// Numerator terms of the Attacker feedback law; zero when built from angles.
    pub chi_s: f64,
    pub chi_c: f64,
}

impl HeadingTriple {
    pub fn from_angles(phi: f64, psi: f64, chi: f64) -> Self {
        let (sin_phi, cos_phi) = phi.sin_cos();
        let (sin_psi, cos_psi) = psi.sin_cos();
        let (sin_chi, cos_chi) = chi.sin_cos();
        HeadingTriple {
            sin_phi,
            cos_phi,
            sin_psi,
            cos_psi,
            sin_chi,
            cos_chi,
            chi_s: 0.0,
            chi_c: 0.0,
        }
    }

    /// Target heading relative to the line of sight.
    pub fn phi(&self) -> f64 {
        self.sin_phi.atan2(self.cos_phi)
    }

    /// Defender heading.
    pub fn psi(&self) -> f64 {
        self.sin_psi.atan2(self.cos_psi)
    }

    /// Attacker heading.
    pub fn chi(&self) -> f64 {
        self.sin_chi.atan2(self.cos_chi)
    }

    /// (sin, cos) of θ - χ.
    fn theta_minus_chi(&self, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        (
            s * self.cos_chi - c * self.sin_chi,
            c * self.cos_chi + s * self.sin_chi,
        )
    }
}

/// World-frame headings for relative headings at `state`.
pub fn world_headings(state: &ReducedState, h: &HeadingTriple) -> Headings {
    let lam = state.los_angle;
    Headings {
        target: wrap_angle(h.phi() + lam),
        attacker: wrap_angle(lam + state.theta - h.chi()),
        defender: wrap_angle(h.psi() + state.theta + lam - PI),
    }
}

/// Saddle-point headings from the co-states.
pub fn optimal_headings(
    state: &ReducedState,
    costate: &Costate,
    _alpha: f64,
    _beta: f64,
) -> Result<HeadingTriple> {
    let big_r = state.target_range;
    let r = state.defender_range;
    let lr = costate.defender_range;
    let lt = costate.theta;
    let one_minus = 1.0 - costate.target_range;

    let den_psi = (lr * lr + lt * lt / (r * r)).sqrt();
    if !(den_psi > SINGULAR_EPS) {
        return Err(TadError::SingularArc("defender heading undetermined (lambda_r = lambda_theta = 0)"));
    }
    let den_phi = (one_minus * one_minus + lt * lt / (big_r * big_r)).sqrt();
    if !(den_phi > SINGULAR_EPS) {
        return Err(TadError::SingularArc("target heading undetermined (lambda_R = 1, lambda_theta = 0)"));
    }
    let (s, c) = state.theta.sin_cos();
    let chi_s = one_minus * s - lt / big_r * c + lt / r;
    let chi_c = one_minus * c + lt / big_r * s - lr;
    let den_chi = chi_s.hypot(chi_c);
    if !(den_chi > SINGULAR_EPS) {
        return Err(TadError::SingularArc("attacker heading undetermined (chi_s = chi_c = 0)"));
    }
    Ok(HeadingTriple {
        sin_psi: lt / (r * den_psi),
        cos_psi: lr / den_psi,
        sin_phi: lt / (big_r * den_phi),
        cos_phi: one_minus / den_phi,
        sin_chi: chi_s / den_chi,
        cos_chi: chi_c / den_chi,
        chi_s,
        chi_c,
    })
}

/// d(R, r, θ)/dt.
pub fn reduced_dynamics(state: &ReducedState, h: &HeadingTriple, alpha: f64, beta: f64) -> [f64; 3] {
    let big_r = state.target_range;
    let r = state.defender_range;
    let (s_tc, c_tc) = h.theta_minus_chi(state.theta);
    [
        alpha * h.cos_phi - c_tc,
        -h.cos_chi - beta * h.cos_psi,
        -alpha / big_r * h.sin_phi + s_tc / big_r - beta / r * h.sin_psi + h.sin_chi / r,
    ]
}

/// d(λ_R, λ_r, λ_θ)/dt.
pub fn costate_dynamics(
    state: &ReducedState,
    costate: &Costate,
    h: &HeadingTriple,
    alpha: f64,
    beta: f64,
) -> [f64; 3] {
    let big_r = state.target_range;
    let r = state.defender_range;
    let lt = costate.theta;
    let (s_tc, c_tc) = h.theta_minus_chi(state.theta);
    [
        lt / (big_r * big_r) * (s_tc - alpha * h.sin_phi),
        lt / (r * r) * (h.sin_chi - beta * h.sin_psi),
        (1.0 - costate.target_range) * s_tc - lt / big_r * c_tc,
    ]
}

pub fn hamiltonian(
    state: &ReducedState,
    costate: &Costate,
    h: &HeadingTriple,
    alpha: f64,
    beta: f64,
) -> f64 {
    let (_, c_tc) = h.theta_minus_chi(state.theta);
    let [dr_t, dr_d, dtheta] = reduced_dynamics(state, h, alpha, beta);
    c_tc - alpha * h.cos_phi
        + dr_t * costate.target_range
        + dr_d * costate.defender_range
        + dtheta * costate.theta
}

/// λ_r(t_f) from `H(t_f) = 0` on the terminal manifold: the root of
/// `(β²-1)λ² + 2(αβ + cos θ_f)λ + α² - 1 = 0` for which the Defender is
/// closing (ṙ < 0) under the induced headings.
pub fn terminal_lambda_r(theta_f: f64, alpha: f64, beta: f64) -> Result<f64> {
    let qa = beta * beta - 1.0;
    let qb = 2.0 * (alpha * beta + theta_f.cos());
    let qc = alpha * alpha - 1.0;
    let disc = qb * qb - 4.0 * qa * qc;
    if !(qa > 0.0) || !(disc >= 0.0) {
        return Err(TadError::InfeasibleTerminal { theta_f });
    }
    // cancellation-free pair of roots
    let q = -0.5 * (qb + qb.signum() * disc.sqrt());
    let roots = [q / qa, if q != 0.0 { qc / q } else { 0.0 }];
    let closing = |lr: f64| -> Option<f64> {
        let state = ReducedState {
            target_range: 1.0,
            defender_range: 1.0,
            theta: theta_f,
            los_angle: 0.0,
        };
        let costate = Costate {
            target_range: 0.0,
            defender_range: lr,
            theta: 0.0,
        };
        let h = optimal_headings(&state, &costate, alpha, beta).ok()?;
        Some(reduced_dynamics(&state, &h, alpha, beta)[1])
    };
    roots
        .into_iter()
        .filter_map(|lr| closing(lr).filter(|&rdot| rdot < 0.0).map(|rdot| (lr, rdot)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(lr, _)| lr)
        .ok_or(TadError::InfeasibleTerminal { theta_f })
}

/// Shooting-solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TpbvpOptions {
    /// RK4 steps over [0, t_f].
    pub steps: usize,
    pub max_newton: usize,
    /// Convergence when |residual| < tol · max(R0, r0, 1).
    pub tol: f64,
    /// Relative finite-difference step for the Jacobian.
    pub fd_rel: f64,
    /// Step-halving acceptance threshold on the boundary residual.
    pub halving_tol: f64,
    /// How many times the step count may be doubled to pass the halving check.
    pub max_refinements: usize,
}

impl Default for TpbvpOptions {
    fn default() -> Self {
        TpbvpOptions {
            steps: 2000,
            max_newton: 50,
            tol: 1e-8,
            fd_rel: 1e-7,
            halving_tol: 1e-6,
            max_refinements: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TpbvpSolution {
    /// Forward time grid from 0 to t_f.
    pub times: Vec<f64>,
    pub states: Vec<ReducedState>,
    pub costates: Vec<Costate>,
    pub target_world: Vec<Vec2>,
    pub attacker_world: Vec<Vec2>,
    pub defender_world: Vec<Vec2>,
    pub t_f: f64,
    /// Attacker position at capture.
    pub intercept_world: Vec2,
    /// R(t_f).
    pub terminal_separation: f64,
    pub theta_f: f64,
    pub lambda_r_f: f64,
    pub capture_radius: f64,
    pub newton_iterations: usize,
    pub residual_norm: f64,
    pub max_abs_hamiltonian: f64,
    /// Change of the boundary residual when the step is halved.
    pub step_halving_change: f64,
    pub steps: usize,
    /// λ_θ vanished along the whole arc (straight-line extremal).
    pub straight_line_extremal: bool,
}

// augmented state: R, r, θ, λ_R, λ_r, λ_θ, λ (line of sight), x_A, y_A
type Aug = [f64; 9];

struct Problem {
    alpha: f64,
    beta: f64,
    r_c: f64,
    initial: [f64; 3],
    scale: f64,
}

fn split(y: &Aug) -> (ReducedState, Costate) {
    (
        ReducedState {
            target_range: y[0],
            defender_range: y[1],
            theta: y[2],
            los_angle: y[6],
        },
        Costate {
            target_range: y[3],
            defender_range: y[4],
            theta: y[5],
        },
    )
}

impl Problem {
    fn rhs(&self, y: &Aug) -> Result<Aug> {
        let (state, costate) = split(y);
        if !(state.target_range > 0.0 && state.defender_range > 0.0) {
            return Err(TadError::SingularConfiguration("range collapsed during integration"));
        }
        let h = optimal_headings(&state, &costate, self.alpha, self.beta)?;
        let [d_big_r, d_r, d_theta] = reduced_dynamics(&state, &h, self.alpha, self.beta);
        let [dl_big_r, dl_r, dl_theta] = costate_dynamics(&state, &costate, &h, self.alpha, self.beta);
        let (s_tc, _) = h.theta_minus_chi(state.theta);
        let d_los = (self.alpha * h.sin_phi - s_tc) / state.target_range;
        let heading = state.los_angle + state.theta - h.chi();
        let (s, c) = heading.sin_cos();
        Ok([d_big_r, d_r, d_theta, dl_big_r, dl_r, dl_theta, d_los, c, s])
    }

    fn rk4_step(&self, y: &Aug, h: f64) -> Result<Aug> {
        let add = |a: &Aug, k: &Aug, s: f64| -> Aug { std::array::from_fn(|i| a[i] + s * k[i]) };
        let k1 = self.rhs(y)?;
        let k2 = self.rhs(&add(y, &k1, 0.5 * h))?;
        let k3 = self.rhs(&add(y, &k2, 0.5 * h))?;
        let k4 = self.rhs(&add(y, &k3, h))?;
        Ok(std::array::from_fn(|i| {
            y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        }))
    }

    fn terminal(&self, z: [f64; 3]) -> Result<Aug> {
        let [r_f, theta_f, _] = z;
        let lr = terminal_lambda_r(theta_f, self.alpha, self.beta)?;
        Ok([r_f, self.r_c, theta_f, 0.0, lr, 0.0, 0.0, 0.0, 0.0])
    }

    /// Integrates from t_f back to 0; `samples` receives every grid point
    /// in backward order when given.
    fn integrate_back(&self, z: [f64; 3], steps: usize, mut samples: Option<&mut Vec<Aug>>) -> Result<Aug> {
        let t_f = z[2];
        if !(t_f > 0.0 && z[0] > 0.0) {
            return Err(TadError::SingularConfiguration("non-positive terminal range or time"));
        }
        let h = -t_f / steps as f64;
        let mut y = self.terminal(z)?;
        if let Some(s) = samples.as_deref_mut() {
            s.push(y);
        }
        for _ in 0..steps {
            y = self.rk4_step(&y, h)?;
            if !y.iter().all(|v| v.is_finite()) {
                return Err(TadError::SingularConfiguration("integration diverged"));
            }
            if let Some(s) = samples.as_deref_mut() {
                s.push(y);
            }
        }
        Ok(y)
    }

    fn residual(&self, z: [f64; 3], steps: usize) -> Result<[f64; 3]> {
        let y = self.integrate_back(z, steps, None)?;
        Ok([
            y[0] - self.initial[0],
            y[1] - self.initial[1],
            wrap_angle(y[2] - self.initial[2]),
        ])
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting.
fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (dst, src) in m[row].iter_mut().zip(pivot_row).skip(col) {
                *dst -= f * src;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

struct NewtonResult {
    z: [f64; 3],
    residual: f64,
    iterations: usize,
}

fn newton(p: &Problem, z0: [f64; 3], steps: usize, opts: &TpbvpOptions) -> Result<NewtonResult> {
    let tol = opts.tol * p.scale;
    let mut z = z0;
    let mut f = p.residual(z, steps)?;
    let mut fn_ = norm3(&f);
    for it in 0..opts.max_newton {
        if fn_ < tol {
            return Ok(NewtonResult {
                z,
                residual: fn_,
                iterations: it,
            });
        }
        let mut jac = [[0.0; 3]; 3];
        for j in 0..3 {
            let h = opts.fd_rel * z[j].abs().max(1e-3);
            let mut zp = z;
            zp[j] += h;
            let fp = p.residual(zp, steps)?;
            for i in 0..3 {
                jac[i][j] = (fp[i] - f[i]) / h;
            }
        }
        let delta = solve3(jac, [-f[0], -f[1], -f[2]]).ok_or(TadError::ShootingNonConvergence {
            iterations: it,
            residual: fn_,
            best: z,
        })?;
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=8 {
            let trial = [z[0] + step * delta[0], z[1] + step * delta[1], z[2] + step * delta[2]];
            if let Ok(ft) = p.residual(trial, steps) {
                let nt = norm3(&ft);
                if nt < fn_ {
                    accepted = Some((trial, ft, nt));
                    break;
                }
            }
            step *= 0.5;
        }
        match accepted {
            Some((zt, ft, nt)) => {
                z = zt;
                f = ft;
                fn_ = nt;
            }
            None => {
                return Err(TadError::ShootingNonConvergence {
                    iterations: it,
                    residual: fn_,
                    best: z,
                })
            }
        }
    }
    if fn_ < tol {
        return Ok(NewtonResult {
            z,
            residual: fn_,
            iterations: opts.max_newton,
        });
    }
    Err(TadError::ShootingNonConvergence {
        iterations: opts.max_newton,
        residual: fn_,
        best: z,
    })
}

fn initial_reduced(scenario: &Scenario) -> ReducedState {
    let to_t = scenario.target - scenario.attacker;
    let to_d = scenario.defender - scenario.attacker;
    ReducedState {
        target_range: to_t.norm(),
        defender_range: to_d.norm(),
        theta: wrap_angle(to_d.angle() - to_t.angle()),
        los_angle: to_t.angle(),
    }
}

/// Terminal unknowns (R_f, θ_f, t_f) if every agent flies straight to the
/// aim point `aim` (Target away from it outside, toward it inside).
pub fn seed_from_aimpoint(scenario: &Scenario, aim: Vec2, regime: Regime, r_c: f64) -> [f64; 3] {
    let beta = scenario.beta();
    let u_a = (aim - scenario.attacker) * (1.0 / scenario.attacker.dist(aim).max(1e-300));
    let u_d = (aim - scenario.defender) * (1.0 / scenario.defender.dist(aim).max(1e-300));
    let closing = (u_a - u_d * beta).norm().max(1e-9);
    let t_f = (scenario.attacker.dist(aim) - r_c / closing).max(1e-6);
    let a_f = scenario.attacker + u_a * t_f;
    let away = match regime {
        Regime::Outside => scenario.target - aim,
        Regime::Inside => aim - scenario.target,
    };
    let t_dir = away * (1.0 / away.norm().max(1e-300));
    let t_f_pos = scenario.target + t_dir * (scenario.alpha * t_f);
    let d_f_dir = scenario.defender - aim;
    [
        a_f.dist(t_f_pos).max(1e-6),
        wrap_angle(d_f_dir.angle() - (t_f_pos - a_f).angle()),
        t_f,
    ]
}

/// Seed without the analytic solution: straight-line play toward the DA
/// circle point on the ray from its centre through the Target.
pub fn collision_triangle_seed(scenario: &Scenario, r_c: f64) -> Result<[f64; 3]> {
    scenario.validate()?;
    let frame = crate::geometry::build_frame(scenario)?;
    let circle = crate::geometry::da_circle(frame.half_separation, scenario.gamma)?;
    let t = frame.to_frame(scenario.target);
    let dir = t - circle.center;
    let dir = if dir.norm() > 0.0 { dir * (1.0 / dir.norm()) } else { Vec2::new(-1.0, 0.0) };
    let aim = frame.to_world(circle.center + dir * circle.radius);
    let regime = Regime::from_region(crate::geometry::classify_target(t, &circle));
    Ok(seed_from_aimpoint(scenario, aim, regime, r_c))
}

/// Solves the boundary-value problem, warm-started from `seed` when given.
pub fn solve_tpbvp(scenario: &Scenario, seed: Option<&InterceptionSolution>) -> Result<TpbvpSolution> {
    solve_tpbvp_with(scenario, seed, &TpbvpOptions::default())
}

pub fn solve_tpbvp_with(
    scenario: &Scenario,
    seed: Option<&InterceptionSolution>,
    opts: &TpbvpOptions,
) -> Result<TpbvpSolution> {
    scenario.validate()?;
    let r_c = if scenario.capture_radius_defender > 0.0 {
        scenario.capture_radius_defender
    } else {
        Scenario::DEFAULT_DEFENDER_CAPTURE_RADIUS
    };
    let init = initial_reduced(scenario);
    if init.defender_range <= r_c {
        return Err(TadError::InvalidScenario {
            field: "capture_radius_defender",
            reason: "defender already within capture radius".into(),
        });
    }
    let problem = Problem {
        alpha: scenario.alpha,
        beta: scenario.beta(),
        r_c,
        initial: [init.target_range, init.defender_range, init.theta],
        scale: init.target_range.max(init.defender_range).max(1.0),
    };
    let z0 = match seed {
        Some(sol) => seed_from_aimpoint(scenario, sol.intercept_world, sol.regime, r_c),
        None => collision_triangle_seed(scenario, r_c)?,
    };

    let mut steps = opts.steps;
    let mut start = z0;
    let mut total_iterations = 0;
    let (result, halving_change) = loop {
        let res = newton(&problem, start, steps, opts)?;
        total_iterations += res.iterations;
        let coarse = problem.residual(res.z, steps)?;
        let fine = problem.residual(res.z, 2 * steps)?;
        let change = norm3(&[fine[0] - coarse[0], fine[1] - coarse[1], fine[2] - coarse[2]]);
        if change < opts.halving_tol || steps >= opts.steps << opts.max_refinements {
            break (res, change);
        }
        steps *= 2;
        start = res.z;
    };

    let mut samples = Vec::with_capacity(steps + 1);
    problem.integrate_back(result.z, steps, Some(&mut samples))?;
    samples.reverse();
    let h = result.z[2] / steps as f64;

    // the backward pass starts from λ = 0 at A = origin; rotate and shift so
    // that the initial line of sight and Attacker position match the scenario
    let first = samples[0];
    let rot = init.los_angle - first[6];
    let attacker_at = |y: &Aug| Vec2::new(y[7], y[8]).rotate(rot);
    let shift = scenario.attacker - attacker_at(&first);

    let mut sol = TpbvpSolution {
        times: (0..=steps).map(|k| k as f64 * h).collect(),
        states: Vec::with_capacity(steps + 1),
        costates: Vec::with_capacity(steps + 1),
        target_world: Vec::with_capacity(steps + 1),
        attacker_world: Vec::with_capacity(steps + 1),
        defender_world: Vec::with_capacity(steps + 1),
        t_f: result.z[2],
        intercept_world: Vec2::ZERO,
        terminal_separation: result.z[0],
        theta_f: result.z[1],
        lambda_r_f: terminal_lambda_r(result.z[1], problem.alpha, problem.beta)?,
        capture_radius: r_c,
        newton_iterations: total_iterations,
        residual_norm: result.residual,
        max_abs_hamiltonian: 0.0,
        step_halving_change: halving_change,
        steps,
        straight_line_extremal: true,
    };
    for y in &samples {
        let (mut state, costate) = split(y);
        state.los_angle = wrap_angle(state.los_angle + rot);
        state.theta = wrap_angle(state.theta);
        let a = attacker_at(y) + shift;
        let h = optimal_headings(&state, &costate, problem.alpha, problem.beta)?;
        let ham = hamiltonian(&state, &costate, &h, problem.alpha, problem.beta);
        sol.max_abs_hamiltonian = sol.max_abs_hamiltonian.max(ham.abs());
        if costate.theta.abs() > 1e-12 {
            sol.straight_line_extremal = false;
        }
        sol.attacker_world.push(a);
        sol.target_world.push(a + Vec2::from_angle(state.los_angle) * state.target_range);
        sol.defender_world
            .push(a + Vec2::from_angle(state.los_angle + state.theta) * state.defender_range);
        sol.states.push(state);
        sol.costates.push(costate);
    }
    sol.intercept_world = *sol.attacker_world.last().unwrap();
    Ok(sol)
}

/// Solves with the analytic solution as the warm start.
pub fn solve_tpbvp_seeded(scenario: &Scenario) -> Result<TpbvpSolution> {
    let analytic = solver::solve(scenario)?;
    solve_tpbvp(scenario, Some(&analytic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn state(big_r: f64, r: f64, theta: f64) -> ReducedState {
        ReducedState {
            target_range: big_r,
            defender_range: r,
            theta,
            los_angle: 0.0,
        }
    }

    fn costate(l_big_r: f64, lr: f64, lt: f64) -> Costate {
        Costate {
            target_range: l_big_r,
            defender_range: lr,
            theta: lt,
        }
    }

    #[test]
    fn radial_play_headings() {
        let h = optimal_headings(&state(3.0, 2.0, 0.7), &costate(0.0, 0.8, 0.0), 0.3, 1.5).unwrap();
        assert_eq!((h.sin_psi, h.cos_psi), (0.0, 1.0));
        assert_eq!((h.sin_phi, h.cos_phi), (0.0, 1.0));
        let (s, c) = 0.7f64.sin_cos();
        assert!((h.chi_s - s).abs() < 1e-15);
        assert!((h.chi_c - (c - 0.8)).abs() < 1e-15);
        assert!((h.chi() - s.atan2(c - 0.8)).abs() < 1e-15);
    }

    #[test]
    fn singular_arc_reported() {
        let e = optimal_headings(&state(3.0, 2.0, 0.7), &costate(0.0, 0.0, 0.0), 0.3, 1.5);
        assert!(matches!(e, Err(TadError::SingularArc(_))));
        let e = optimal_headings(&state(3.0, 2.0, 0.7), &costate(1.0, 0.5, 0.0), 0.3, 1.5);
        assert!(matches!(e, Err(TadError::SingularArc(_))));
    }

    #[test]
    fn head_on_dynamics() {
        let h = HeadingTriple::from_angles(0.0, 0.0, 0.0);
        let d = reduced_dynamics(&state(5.0, 4.0, 0.0), &h, 0.4, 1.25);
        assert!((d[0] - (0.4 - 1.0)).abs() < 1e-15);
        assert!((d[1] - (-1.0 - 1.25)).abs() < 1e-15);
        // static target, attacker straight at it
        let h = HeadingTriple::from_angles(0.3, 0.2, 0.9);
        let d = reduced_dynamics(&state(5.0, 4.0, 0.9), &h, 0.0, 1.25);
        assert!((d[0] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn costate_rest_points() {
        let h = HeadingTriple::from_angles(0.3, -0.4, 1.1);
        let s = state(5.0, 4.0, 0.6);
        let d = costate_dynamics(&s, &costate(0.2, 0.7, 0.0), &h, 0.4, 1.25);
        assert_eq!((d[0], d[1]), (0.0, 0.0));
        let d = costate_dynamics(&s, &costate(1.0, 0.7, 0.0), &h, 0.4, 1.25);
        assert_eq!(d, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn hamiltonian_without_costates() {
        let h = HeadingTriple::from_angles(0.0, 0.5, 0.8);
        let ham = hamiltonian(&state(5.0, 4.0, 0.8), &Costate::default(), &h, 0.35, 1.25);
        assert!((ham - (1.0 - 0.35)).abs() < 1e-15);
    }

    #[test]
    fn terminal_root_zeroes_hamiltonian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let alpha = rng.gen_range(0.05..0.95);
            let beta = rng.gen_range(1.05..5.0);
            let theta_f = rng.gen_range(-PI..PI);
            let lr = terminal_lambda_r(theta_f, alpha, beta).unwrap();
            assert!(lr > 0.0);
            let quad = alpha * alpha + 2.0 * (alpha * beta + theta_f.cos()) * lr + (beta * beta - 1.0) * lr * lr - 1.0;
            assert!(quad.abs() < 1e-12);
            let s = state(2.0, 0.01, theta_f);
            let c = costate(0.0, lr, 0.0);
            let h = optimal_headings(&s, &c, alpha, beta).unwrap();
            assert!(hamiltonian(&s, &c, &h, alpha, beta).abs() < 1e-12);
            assert!(reduced_dynamics(&s, &h, alpha, beta)[1] < 0.0);
        }
    }

    #[test]
    fn terminal_root_specific_case() {
        let (alpha, beta) = (0.25, 1.25);
        let lr = terminal_lambda_r(0.0, alpha, beta).unwrap();
        let (qa, qb, qc) = (beta * beta - 1.0, 2.0 * (alpha * beta + 1.0), alpha * alpha - 1.0);
        let expect = (-qb + (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa);
        assert!((lr - expect).abs() < 1e-14);
    }

    #[test]
    fn terminal_root_vanishes_as_alpha_approaches_one() {
        let lr = terminal_lambda_r(PI, 1.0 - 1e-9, 1.0 + 1e-3).unwrap();
        assert!(lr.abs() < 1e-3, "{lr}");
        assert!(terminal_lambda_r(0.3, 0.5, 0.9).is_err());
    }

    fn random_point(rng: &mut ChaCha8Rng) -> (ReducedState, Costate, f64, f64) {
        let s = state(rng.gen_range(0.5..20.0), rng.gen_range(0.5..20.0), rng.gen_range(-PI..PI));
        let c = costate(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-5.0..5.0));
        (s, c, rng.gen_range(0.05..0.95), rng.gen_range(1.05..4.0))
    }

    #[test]
    fn headings_are_unit_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let (s, c, a, b) = random_point(&mut rng);
            let h = optimal_headings(&s, &c, a, b).unwrap();
            for (sn, cs) in [(h.sin_phi, h.cos_phi), (h.sin_psi, h.cos_psi), (h.sin_chi, h.cos_chi)] {
                assert!((sn * sn + cs * cs - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn world_headings_follow_relative_definitions() {
        let s = ReducedState {
            los_angle: 0.4,
            ..state(3.0, 2.0, 1.0)
        };
        let h = HeadingTriple::from_angles(0.2, 0.3, 0.5);
        let w = world_headings(&s, &h);
        assert!((w.target - 0.6).abs() < 1e-12);
        assert!((w.attacker - 0.9).abs() < 1e-12);
        assert!((w.defender - wrap_angle(0.3 + 1.0 + 0.4 - PI)).abs() < 1e-12);
    }

    #[test]
    fn linear_solve() {
        let m = [[2.0, 1.0, 0.0], [0.0, 0.0, 3.0], [1.0, 4.0, 1.0]];
        let x = solve3(m, [4.0, 9.0, 12.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12 && (x[2] - 3.0).abs() < 1e-12);
        assert!(solve3([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]], [1.0, 2.0, 3.0]).is_none());
    }
}
