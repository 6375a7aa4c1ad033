mod common;

use common::*;
use tad_core::solver::solve;
use tad_core::tpbvp::*;
use tad_core::Regime;

fn check_converged(sol: &TpbvpSolution, r_c: f64, alpha: f64, beta: f64) {
    let last = sol.states.len() - 1;
    let (sf, cf) = (sol.states[last], sol.costates[last]);
    assert!((sf.defender_range - r_c).abs() < 1e-12);
    assert_eq!(cf.target_range, 0.0);
    assert_eq!(cf.theta, 0.0);
    let lr = cf.defender_range;
    let quad = alpha * alpha + 2.0 * (alpha * beta + sf.theta.cos()) * lr + (beta * beta - 1.0) * lr * lr - 1.0;
    assert!(quad.abs() < 1e-8, "terminal H condition {quad}");
    assert!(sol.max_abs_hamiltonian < 1e-6, "max |H| = {}", sol.max_abs_hamiltonian);
    assert!(sol.step_halving_change < 1e-6);
}

#[test]
fn example_one_matches_analytic() {
    let sc = example1();
    let analytic = solve(&sc).unwrap();
    let sol = solve_tpbvp(&sc, Some(&analytic)).unwrap();
    assert!(sol.newton_iterations <= 5, "{} iterations", sol.newton_iterations);
    assert!(sol.intercept_world.dist(analytic.intercept_world) < 0.05);
    assert!((sol.terminal_separation - analytic.j_star).abs() < 0.02 * analytic.j_star);
    check_converged(&sol, sc.capture_radius_defender, sc.alpha, sc.beta());
    assert!(!sol.straight_line_extremal);
}

#[test]
fn example_two_matches_analytic() {
    let sc = example2();
    let analytic = solve(&sc).unwrap();
    assert_eq!(analytic.regime, Regime::Inside);
    let sol = solve_tpbvp(&sc, Some(&analytic)).unwrap();
    assert!(sol.newton_iterations <= 5, "{} iterations", sol.newton_iterations);
    assert!(sol.intercept_world.dist(analytic.intercept_world) < 0.05);
    assert!((sol.terminal_separation - analytic.j_star).abs() < 0.02 * analytic.j_star);
    check_converged(&sol, sc.capture_radius_defender, sc.alpha, sc.beta());
}

#[test]
fn cold_start_reaches_the_same_solution() {
    for sc in [example1(), example2(), example3()] {
        let warm = solve_tpbvp_seeded(&sc).unwrap();
        let cold = solve_tpbvp(&sc, None).unwrap();
        assert!((warm.t_f - cold.t_f).abs() < 1e-6);
        assert!(warm.intercept_world.dist(cold.intercept_world) < 1e-6);
    }
}

#[test]
fn initial_headings_match_analytic_headings() {
    for sc in [example1(), example2()] {
        let analytic = solve(&sc).unwrap();
        let sol = solve_tpbvp(&sc, Some(&analytic)).unwrap();
        let h = optimal_headings(&sol.states[0], &sol.costates[0], sc.alpha, sc.beta()).unwrap();
        let w = world_headings(&sol.states[0], &h);
        let d = |a: f64, b: f64| tad_core::geometry::wrap_angle(a - b).abs();
        // the capture radius shifts the aim point slightly
        assert!(d(w.attacker, analytic.headings.attacker) < 2e-3, "{} vs {}", w.attacker, analytic.headings.attacker);
        assert!(d(w.defender, analytic.headings.defender) < 2e-3);
        assert!(d(w.target, analytic.headings.target) < 2e-3);
    }
}

#[test]
fn world_trajectory_starts_at_scenario() {
    let sc = example1();
    let sol = solve_tpbvp_seeded(&sc).unwrap();
    assert!(sol.attacker_world[0].dist(sc.attacker) < 1e-12);
    assert!(sol.target_world[0].dist(sc.target) < 1e-6);
    assert!(sol.defender_world[0].dist(sc.defender) < 1e-6);
    let n = sol.times.len();
    assert_eq!(sol.times[n - 1], sol.t_f);
    assert!((sol.defender_world[n - 1].dist(sol.attacker_world[n - 1]) - sol.capture_radius).abs() < 1e-9);
}

#[test]
fn point_capture_uses_default_radius() {
    let mut sc = example1();
    sc.capture_radius_defender = 0.0;
    let sol = solve_tpbvp_seeded(&sc).unwrap();
    assert_eq!(sol.capture_radius, 1e-2);
}

#[test]
fn terminal_root_matches_shooting_solution() {
    let sc = example1();
    let sol = solve_tpbvp_seeded(&sc).unwrap();
    let lr = terminal_lambda_r(sol.theta_f, sc.alpha, sc.beta()).unwrap();
    assert!((lr - sol.lambda_r_f).abs() < 1e-12);
    assert!(sol.residual_norm < 1e-8 * 8.0);
}
