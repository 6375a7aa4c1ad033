#![allow(dead_code)]

use rand::Rng;
use tad_core::geometry::da_circle;
use tad_core::{Scenario, Vec2};

pub fn example1() -> Scenario {
    Scenario::new(Vec2::new(0.5, 4.0), Vec2::new(4.0, 0.0), Vec2::new(-4.0, 0.0), 0.25, 0.8)
}

pub fn example2() -> Scenario {
    Scenario::new(Vec2::new(3.1, 2.7), Vec2::new(6.0, 0.0), Vec2::new(-6.0, 0.0), 0.5, 0.93)
}

pub fn example3() -> Scenario {
    Scenario::new(Vec2::new(3.0, 7.5), Vec2::new(10.0, 0.0), Vec2::new(-10.0, 0.0), 0.6, 0.85)
}

/// Random scenario in the canonical frame: α ∈ [0.1, 0.9], γ ∈ [0.2, 0.95],
/// Target anywhere in a box around the DA circle but not at its centre.
pub fn random_scenario<R: Rng>(rng: &mut R) -> Scenario {
    loop {
        let x_a = rng.gen_range(0.5..10.0);
        let gamma = rng.gen_range(0.2..0.95);
        let alpha = rng.gen_range(0.1..0.9);
        let c = da_circle(x_a, gamma).unwrap();
        let half = 1.5 * c.radius + 2.0 * x_a;
        let t = Vec2::new(
            c.center.x + rng.gen_range(-half..half),
            rng.gen_range(-half..half),
        );
        if t.dist(c.center) < 1e-3 * c.radius || t.dist(Vec2::new(x_a, 0.0)) < 1e-3 * x_a {
            continue;
        }
        return Scenario::new(t, Vec2::new(x_a, 0.0), Vec2::new(-x_a, 0.0), alpha, gamma);
    }
}

/// The same engagement rotated by `angle` and shifted by `shift`.
pub fn moved(s: &Scenario, angle: f64, shift: Vec2) -> Scenario {
    let m = |p: Vec2| p.rotate(angle) + shift;
    Scenario {
        target: m(s.target),
        attacker: m(s.attacker),
        defender: m(s.defender),
        ..*s
    }
}
