mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tad_core::tpbvp::*;

fn random_point<R: Rng>(rng: &mut R) -> (ReducedState, Costate) {
    let state = ReducedState {
        target_range: rng.gen_range(0.5..20.0),
        defender_range: rng.gen_range(0.5..20.0),
        theta: rng.gen_range(-3.0..3.0),
        los_angle: rng.gen_range(-3.0..3.0),
    };
    let costate = Costate {
        target_range: rng.gen_range(-2.0..2.0),
        defender_range: rng.gen_range(-2.0..2.0),
        theta: rng.gen_range(-5.0..5.0),
    };
    (state, costate)
}

#[test]
fn headings_are_unit_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let (s, c) = random_point(&mut rng);
        let h = optimal_headings(&s, &c, 0.5, 1.2).unwrap();
        for (sn, cs) in [(h.sin_phi, h.cos_phi), (h.sin_psi, h.cos_psi), (h.sin_chi, h.cos_chi)] {
            assert!((sn * sn + cs * cs - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn hamiltonian_stationary_in_headings() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let e = 1e-6;
    for _ in 0..1000 {
        let (s, c) = random_point(&mut rng);
        let (alpha, beta) = (rng.gen_range(0.1..0.9), rng.gen_range(1.05..5.0));
        let h = optimal_headings(&s, &c, alpha, beta).unwrap();
        let (phi, psi, chi) = (h.phi(), h.psi(), h.chi());
        let ham = |p: f64, q: f64, x: f64| hamiltonian(&s, &c, &HeadingTriple::from_angles(p, q, x), alpha, beta);
        let d = [
            (ham(phi + e, psi, chi) - ham(phi - e, psi, chi)) / (2.0 * e),
            (ham(phi, psi + e, chi) - ham(phi, psi - e, chi)) / (2.0 * e),
            (ham(phi, psi, chi + e) - ham(phi, psi, chi - e)) / (2.0 * e),
        ];
        for g in d {
            assert!(g.abs() < 1e-6, "{g}");
        }
        // saddle: with running cost -dR/dt the team minimizes H, the Attacker maximizes it
        let h0 = ham(phi, psi, chi);
        let step = 1e-2;
        let d2 = |f: &dyn Fn(f64) -> f64| f(step) - 2.0 * h0 + f(-step);
        let scale = 1e-10 * (1.0 + h0.abs());
        let tp = d2(&|x| ham(phi + x, psi, chi));
        let dp = d2(&|x| ham(phi, psi + x, chi));
        let ap = d2(&|x| ham(phi, psi, chi + x));
        assert!(tp >= -scale, "target {tp}");
        assert!(dp >= -scale, "defender {dp}");
        assert!(ap <= scale, "attacker {ap}");
    }
}

#[test]
fn costate_rates_are_hamiltonian_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let (s, c) = random_point(&mut rng);
        let (alpha, beta) = (rng.gen_range(0.1..0.9), rng.gen_range(1.05..5.0));
        let h = optimal_headings(&s, &c, alpha, beta).unwrap();
        let rates = costate_dynamics(&s, &c, &h, alpha, beta);
        let ham = |st: ReducedState| hamiltonian(&st, &c, &h, alpha, beta);
        let fd = |bump: &dyn Fn(f64) -> ReducedState, x: f64| {
            let e = 1e-6 * (1.0 + x.abs());
            -(ham(bump(e)) - ham(bump(-e))) / (2.0 * e)
        };
        let expected = [
            fd(&|e| ReducedState { target_range: s.target_range + e, ..s }, s.target_range),
            fd(&|e| ReducedState { defender_range: s.defender_range + e, ..s }, s.defender_range),
            fd(&|e| ReducedState { theta: s.theta + e, ..s }, s.theta),
        ];
        for (r, x) in rates.iter().zip(expected) {
            assert!((r - x).abs() <= 1e-6 * (1.0 + x.abs()), "{r} vs {x}");
        }
    }
}

#[test]
fn hamiltonian_vanishes_along_solutions() {
    for sc in [example1(), example2(), example3()] {
        let sol = solve_tpbvp_seeded(&sc).unwrap();
        let (alpha, beta) = (sc.alpha, sc.beta());
        for (s, c) in sol.states.iter().zip(&sol.costates) {
            let h = optimal_headings(s, c, alpha, beta).unwrap();
            assert!(hamiltonian(s, c, &h, alpha, beta).abs() < 1e-6);
        }
    }
}

#[test]
fn terminal_root_makes_hamiltonian_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut ok = 0;
    for _ in 0..500 {
        let alpha = rng.gen_range(0.1..0.9);
        let beta = rng.gen_range(1.05..5.0);
        let theta = rng.gen_range(-3.1..3.1);
        let Ok(lr) = terminal_lambda_r(theta, alpha, beta) else { continue };
        let s = ReducedState { target_range: 3.0, defender_range: 0.01, theta, los_angle: 0.0 };
        let c = Costate { target_range: 0.0, defender_range: lr, theta: 0.0 };
        let h = optimal_headings(&s, &c, alpha, beta).unwrap();
        assert!(hamiltonian(&s, &c, &h, alpha, beta).abs() < 1e-10);
        assert!(reduced_dynamics(&s, &h, alpha, beta)[1] < 0.0);
        assert!(lr > 0.0);
        ok += 1;
    }
    assert!(ok > 400);
}
