//! Attacker–Defender frame, Apollonius circles and the critical speed ratio.
//!
//! The frame is anchored on the Attacker and the Defender: the x axis runs
//! along D→A with the origin at their midpoint, so A = (x_A, 0) and
//! D = (-x_A, 0). Every quantity below is expressed in that frame unless a
//! name says `world`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TadError};

/// Largest accepted Attacker/Defender speed ratio.
pub const GAMMA_MAX: f64 = 1.0 - 1e-6;

/// Relative tolerance for a Target lying on the DA circle.
pub const BOUNDARY_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at `angle` radians from +x.
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Vec2 { x: c, y: s }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z component of the 3-D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Polar angle in (-π, π].
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Wraps an angle into (-π, π].
pub fn wrap_angle(angle: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}

/// The single input record: world positions, speed ratios and capture radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub target: Vec2,
    pub attacker: Vec2,
    pub defender: Vec2,
    /// Target/Attacker speed ratio V_T / V_A.
    pub alpha: f64,
    /// Attacker/Defender speed ratio V_A / V_D.
    pub gamma: f64,
    pub capture_radius_defender: f64,
    pub capture_radius_attacker: f64,
}

impl Scenario {
    pub const DEFAULT_DEFENDER_CAPTURE_RADIUS: f64 = 1e-2;

    /// Scenario with the default capture radii (Defender 1e-2, Attacker point capture).
    pub fn new(target: Vec2, attacker: Vec2, defender: Vec2, alpha: f64, gamma: f64) -> Self {
        Scenario {
            target,
            attacker,
            defender,
            alpha,
            gamma,
            capture_radius_defender: Self::DEFAULT_DEFENDER_CAPTURE_RADIUS,
            capture_radius_attacker: 0.0,
        }
    }

    /// Defender/Attacker speed ratio.
    pub fn beta(&self) -> f64 {
        1.0 / self.gamma
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: &str| {
            Err(TadError::InvalidScenario {
                field,
                reason: reason.to_string(),
            })
        };
        for (field, p) in [
            ("target", self.target),
            ("attacker", self.attacker),
            ("defender", self.defender),
        ] {
            if !p.is_finite() {
                return bad(field, "coordinates must be finite");
            }
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha", "must satisfy 0 < alpha < 1");
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return bad("gamma", "must satisfy 0 < gamma");
        }
        if self.gamma >= GAMMA_MAX {
            return bad(
                "gamma",
                "must be below 1 - 1e-6: only the fast-defender case (V_D > V_A) is supported",
            );
        }
        for (field, v) in [
            ("capture_radius_defender", self.capture_radius_defender),
            ("capture_radius_attacker", self.capture_radius_attacker),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(field, "must be finite and non-negative");
            }
        }
        if self.attacker == self.defender {
            return bad("defender", "must differ from the attacker position");
        }
        Ok(())
    }
}

/// Rotating frame anchored on the Attacker (+x) and the Defender (-x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdFrame {
    /// Midpoint of D and A, world coordinates.
    pub origin: Vec2,
    /// Unit vector along D→A, world coordinates.
    pub x_axis: Vec2,
    /// Half the A–D separation (x_A).
    pub half_separation: f64,
}

impl AdFrame {
    pub fn to_frame(&self, world: Vec2) -> Vec2 {
        let d = world - self.origin;
        Vec2::new(d.dot(self.x_axis), d.dot(self.x_axis.perp()))
    }

    pub fn to_world(&self, frame: Vec2) -> Vec2 {
        self.origin + self.x_axis * frame.x + self.x_axis.perp() * frame.y
    }

    /// World heading of the frame's +x axis.
    pub fn axis_angle(&self) -> f64 {
        self.x_axis.angle()
    }

    pub fn attacker(&self) -> Vec2 {
        Vec2::new(self.half_separation, 0.0)
    }

    pub fn defender(&self) -> Vec2 {
        Vec2::new(-self.half_separation, 0.0)
    }
}

pub fn build_frame(scenario: &Scenario) -> Result<AdFrame> {
    let da = scenario.attacker - scenario.defender;
    let sep = da.norm();
    if sep == 0.0 || !sep.is_finite() {
        return Err(TadError::DegenerateFrame);
    }
    Ok(AdFrame {
        origin: (scenario.attacker + scenario.defender) * 0.5,
        x_axis: da * (1.0 / sep),
        half_separation: 0.5 * sep,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CircleKind {
    /// Defender–Attacker dominance boundary, ratio γ.
    DefenderAttacker,
    /// Attacker–Target dominance boundary, ratio α.
    AttackerTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApolloniusCircle {
    /// Frame coordinates.
    pub center: Vec2,
    pub radius: f64,
    pub kind: CircleKind,
}

impl ApolloniusCircle {
    /// Boundary point at polar angle `angle` about the centre (from +x).
    pub fn point_at(&self, angle: f64) -> Vec2 {
        self.center + Vec2::from_angle(angle) * self.radius
    }
}

/// DA Apollonius circle: the locus where the Defender and the Attacker arrive
/// simultaneously. Centre (a, 0), radius r_A.
pub fn da_circle(x_a: f64, gamma: f64) -> Result<ApolloniusCircle> {
    if !(x_a > 0.0 && x_a.is_finite()) {
        return Err(TadError::DegenerateFrame);
    }
    if !(gamma > 0.0 && gamma < GAMMA_MAX) {
        return Err(TadError::UnsupportedRegime { gamma });
    }
    let g2 = gamma * gamma;
    let denom = 1.0 - g2;
    Ok(ApolloniusCircle {
        center: Vec2::new((1.0 + g2) / denom * x_a, 0.0),
        radius: 2.0 * gamma / denom * x_a,
        kind: CircleKind::DefenderAttacker,
    })
}

/// AT Apollonius circle for Target speed ratio `alpha`: points the Target
/// reaches no later than the Attacker lie inside it.
pub fn at_circle(target: Vec2, x_a: f64, alpha: f64) -> Result<ApolloniusCircle> {
    let d = target.dist(Vec2::new(x_a, 0.0));
    if d == 0.0 {
        return Err(TadError::ZeroDiameter);
    }
    let denom = 1.0 - alpha * alpha;
    let center = Vec2::new(
        target.x / denom - alpha * alpha * x_a / denom,
        target.y / denom,
    );
    Ok(ApolloniusCircle {
        center,
        radius: alpha * d / denom,
        kind: CircleKind::AttackerTarget,
    })
}

/// Unclamped critical speed ratio; negative for Targets outside the DA circle.
pub fn critical_alpha_raw(target: Vec2, x_a: f64, gamma: f64) -> f64 {
    let to_d = (x_a + target.x).hypot(target.y);
    let to_a = (x_a - target.x).hypot(target.y);
    (gamma * to_d - to_a) / (2.0 * gamma * x_a)
}

/// Minimum Target/Attacker speed ratio for which a Target starting at
/// `target` can still be saved. Zero when the Target starts outside the DA
/// circle.
pub fn critical_alpha(target: Vec2, x_a: f64, gamma: f64) -> f64 {
    critical_alpha_raw(target, x_a, gamma).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Inside,
    Outside,
    OnBoundary,
}

pub fn classify_target(target: Vec2, circle: &ApolloniusCircle) -> Region {
    let gap = target.dist(circle.center) - circle.radius;
    if gap.abs() <= BOUNDARY_REL_TOL * circle.radius {
        Region::OnBoundary
    } else if gap < 0.0 {
        Region::Inside
    } else {
        Region::Outside
    }
}
