//! Stationary interception angles as roots of a degree-6 polynomial in e^{iφ}.
//!
//! The interception point is parametrized on the DA circle by
//! `I(φ) = (a - r_A cos φ, r_A sin φ)`, so φ = 0 is the circle point nearest
//! the Attacker. The squared first-order condition of the interception cost
//! is a polynomial of degree six in `z = e^{iφ}`; its roots come in pairs
//! `z`, `1/z̄`, so every unit-modulus root and every reflected pair yields a
//! candidate angle `arg z`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TadError};
use crate::geometry::{ApolloniusCircle, Vec2};

pub const ROOT_TOL: f64 = 1e-12;
pub const ROOT_MAX_ITER: usize = 500;

/// Reduced parameters of one engagement, all in the Attacker–Defender frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameGeometry {
    /// Abscissa of the DA circle centre.
    pub a: f64,
    pub r_a: f64,
    /// Distance from the Attacker to the circle centre.
    pub m: f64,
    /// Distance from the circle centre to the Target.
    pub n: f64,
    /// Polar angle of the Target about the centre, measured from the ray
    /// centre→Attacker, positive toward +y.
    pub target_polar_angle: f64,
    pub alpha: f64,
    /// Half the Attacker–Defender separation.
    pub x_a: f64,
}

impl GameGeometry {
    /// `l = e^{iλ}`.
    pub fn l(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.target_polar_angle)
    }

    /// Point on the DA circle for angle φ (frame coordinates).
    pub fn intercept_point(&self, phi: f64) -> Vec2 {
        let (s, c) = phi.sin_cos();
        Vec2::new(self.a - self.r_a * c, self.r_a * s)
    }

    pub fn target(&self) -> Vec2 {
        let (s, c) = self.target_polar_angle.sin_cos();
        Vec2::new(self.a - self.n * c, self.n * s)
    }

    /// |I(φ) T| by the law of cosines.
    pub fn target_distance(&self, phi: f64) -> f64 {
        let (r, n) = (self.r_a, self.n);
        (r * r + n * n - 2.0 * n * r * (phi - self.target_polar_angle).cos())
            .max(0.0)
            .sqrt()
    }

    /// |A I(φ)| by the law of cosines.
    pub fn attacker_distance(&self, phi: f64) -> f64 {
        let (r, m) = (self.r_a, self.m);
        (r * r + m * m - 2.0 * m * r * phi.cos()).max(0.0).sqrt()
    }

    /// The two terms of dJ/dφ: (target term, attacker term). The outside
    /// cost derivative is their sum, the inside cost derivative is
    /// `attacker - target`.
    pub fn derivative_terms(&self, phi: f64) -> Result<(f64, f64)> {
        let dt = self.target_distance(phi);
        let da = self.attacker_distance(phi);
        if dt <= 1e-14 * self.r_a || da <= 1e-14 * self.r_a {
            return Err(TadError::SingularConfiguration(
                "interception point coincides with the target or the attacker",
            ));
        }
        Ok((
            self.n * (phi - self.target_polar_angle).sin() / dt,
            self.alpha * self.m * phi.sin() / da,
        ))
    }

    /// Same geometry mirrored about the frame x axis.
    pub fn reflected(&self) -> GameGeometry {
        GameGeometry {
            target_polar_angle: -self.target_polar_angle,
            ..*self
        }
    }

    /// Same geometry with every length multiplied by `k`.
    pub fn scaled(&self, k: f64) -> GameGeometry {
        GameGeometry {
            a: self.a * k,
            r_a: self.r_a * k,
            m: self.m * k,
            n: self.n * k,
            x_a: self.x_a * k,
            ..*self
        }
    }
}

pub fn build_geometry(
    target: Vec2,
    x_a: f64,
    alpha: f64,
    circle: &ApolloniusCircle,
) -> Result<GameGeometry> {
    let a = circle.center.x;
    let n = target.dist(circle.center);
    if n <= 1e-12 * circle.radius {
        return Err(TadError::UndefinedAngle);
    }
    Ok(GameGeometry {
        a,
        r_a: circle.radius,
        m: a - x_a,
        n,
        target_polar_angle: target.y.atan2(a - target.x),
        alpha,
        x_a,
    })
}

/// Coefficients `c[k]` of `z^k`, `z = e^{iφ}`, divided by r_A².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SexticCoefficients {
    pub c: [Complex64; 7],
}

impl SexticCoefficients {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.c, z)
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * z + ck)
}

pub fn build_sextic(geom: &GameGeometry) -> Result<SexticCoefficients> {
    let GameGeometry {
        r_a, m, n, alpha, ..
    } = *geom;
    if !(alpha > 0.0) {
        return Err(TadError::DegeneratePolynomial("alpha must be positive"));
    }
    if !(m > 0.0) {
        return Err(TadError::DegeneratePolynomial("attacker at the circle centre"));
    }
    if !(n > 0.0) {
        return Err(TadError::DegeneratePolynomial("target at the circle centre"));
    }
    let l = geom.l();
    let one = Complex64::new(1.0, 0.0);
    let nr = n * r_a;
    let a2m = alpha * alpha * m;
    let sum_m = r_a * r_a + m * m;
    let sum_n = r_a * r_a + n * n;
    let q = n / (alpha * m);

    let c6 = nr / l * (one - n / (a2m * l));
    let c5 = (q / l).powi(2) * sum_m - sum_n;
    let c4 = nr * (n / (a2m * l * l) * (2.0 * l * l - 1.0) + l - 2.0 / l);
    let c3 = Complex64::new(2.0 * (sum_n - q * q * sum_m), 0.0);
    let c2 = nr * (n / a2m * (2.0 - l * l) - 2.0 * l + 1.0 / l);
    let c1 = (q * l).powi(2) * sum_m - sum_n;
    let c0 = nr * l * (one - n * l / a2m);

    let s = 1.0 / (r_a * r_a);
    Ok(SexticCoefficients {
        c: [c0 * s, c1 * s, c2 * s, c3 * s, c4 * s, c5 * s, c6 * s],
    })
}

/// All roots of the sextic by Aberth–Ehrlich simultaneous iteration.
///
/// Leading coefficients below 1e-14 of the largest are dropped first, so a
/// degenerate polynomial returns fewer than six roots.
pub fn find_roots(coeffs: &SexticCoefficients) -> Result<Vec<Complex64>> {
    let scale = coeffs.max_abs();
    if scale == 0.0 || !scale.is_finite() {
        return Err(TadError::DegeneratePolynomial("all coefficients vanish"));
    }
    let mut c: Vec<Complex64> = coeffs.c.iter().map(|&ck| ck / scale).collect();
    while c.len() > 1 && c.last().is_some_and(|ck| ck.norm() <= 1e-14) {
        c.pop();
    }
    let degree = c.len() - 1;
    if degree == 0 {
        return Err(TadError::DegeneratePolynomial("constant polynomial"));
    }
    aberth(&c, ROOT_MAX_ITER, ROOT_TOL)
}

/// Aberth–Ehrlich iteration on `c[0] + c[1] z + ... + c[n] z^n`.
pub fn aberth(c: &[Complex64], max_iter: usize, tol: f64) -> Result<Vec<Complex64>> {
    let degree = c.len() - 1;
    let deriv: Vec<Complex64> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| ck * k as f64)
        .collect();
    // roots of this family cluster around the unit circle
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            Complex64::from_polar(
                1.1,
                std::f64::consts::TAU * k as f64 / degree as f64 + 0.4,
            )
        })
        .collect();
    let abs_coeffs: Vec<f64> = c.iter().map(|ck| ck.norm()).collect();
    // |p(z)| at or below the rounding error of Horner's rule cannot improve;
    // this is what stops the iteration on multiple roots
    let noise_floor = |z: Complex64| {
        let r = z.norm();
        16.0 * f64::EPSILON * abs_coeffs.iter().rev().fold(0.0, |acc, &a| acc * r + a)
    };
    let mut done = vec![false; degree];
    let mut correction = f64::INFINITY;
    for _ in 0..max_iter {
        correction = 0.0;
        for k in 0..degree {
            if done[k] {
                continue;
            }
            let p = horner(c, z[k]);
            if p.norm() <= noise_floor(z[k]) {
                done[k] = true;
                continue;
            }
            let ratio = p / horner(&deriv, z[k]);
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !w.is_finite() {
                continue;
            }
            z[k] -= w;
            let step = w.norm() / (1.0 + z[k].norm());
            if step <= tol {
                done[k] = true;
            }
            correction = correction.max(step);
        }
        if done.iter().all(|&d| d) {
            return Ok(z);
        }
    }
    Err(TadError::RootingFailure {
        iterations: max_iter,
        correction,
    })
}

/// One candidate angle per root, sorted by angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateAngles {
    /// `arg z` in (-π, π].
    pub angles: Vec<f64>,
    /// Residual of the squared first-order condition at each angle,
    /// `| |target term| - |attacker term| |`; zero at stationary points of
    /// either regime's cost. NaN where the configuration is singular.
    pub residuals: Vec<f64>,
    /// `|z|`, for diagnostics only.
    pub moduli: Vec<f64>,
}

impl CandidateAngles {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Angles with near-duplicates (closer than 1e-9) merged.
    pub fn distinct_angles(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::with_capacity(self.angles.len());
        for &a in &self.angles {
            if out.iter().all(|&b| crate::geometry::wrap_angle(a - b).abs() > 1e-9) {
                out.push(a);
            }
        }
        out
    }
}

pub fn candidate_angles(geom: &GameGeometry, roots: &[Complex64]) -> CandidateAngles {
    let mut rows: Vec<(f64, f64)> = roots
        .iter()
        .map(|z| {
            // arg(-x + 0i) is π, so the range is (-π, π]
            let angle = if z.im == 0.0 && z.re < 0.0 {
                std::f64::consts::PI
            } else {
                z.arg()
            };
            (angle, z.norm())
        })
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    CandidateAngles {
        residuals: rows
            .iter()
            .map(|&(phi, _)| branch_residual(geom, phi).unwrap_or(f64::NAN))
            .collect(),
        angles: rows.iter().map(|r| r.0).collect(),
        moduli: rows.iter().map(|r| r.1).collect(),
    }
}

/// dJ/dφ of the outside-regime cost `|IT| + α|AI|`.
pub fn stationarity_residual(geom: &GameGeometry, phi: f64) -> Result<f64> {
    let (t, a) = geom.derivative_terms(phi)?;
    Ok(t + a)
}

/// Residual of the squared first-order condition shared by both regimes.
pub fn branch_residual(geom: &GameGeometry, phi: f64) -> Result<f64> {
    let (t, a) = geom.derivative_terms(phi)?;
    Ok((t.abs() - a.abs()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{da_circle, Vec2};
    use std::f64::consts::{PI, TAU};

    pub(crate) fn geometry_for(x_a: f64, gamma: f64, alpha: f64, t: Vec2) -> GameGeometry {
        let c = da_circle(x_a, gamma).unwrap();
        build_geometry(t, x_a, alpha, &c).unwrap()
    }

    fn example1() -> GameGeometry {
        geometry_for(4.0, 0.8, 0.25, Vec2::new(0.5, 4.0))
    }

    fn example2() -> GameGeometry {
        geometry_for(6.0, 0.93, 0.5, Vec2::new(3.1, 2.7))
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn geometry_example_one() {
        let g = example1();
        // recomputed from a = 18.22, x_A = 4, T = (0.5, 4)
        assert!((g.m - 14.222).abs() < 5e-4);
        assert!((g.n - 18.168).abs() < 5e-4);
        assert!((g.target_polar_angle - 0.2220).abs() < 5e-4);
        let gamma: f64 = 0.8;
        let m_closed = 2.0 * gamma * gamma * 4.0 / (1.0 - gamma * gamma);
        assert!((g.m - m_closed).abs() < 1e-12 * m_closed);
        let t = g.target();
        assert!((t.x - 0.5).abs() < 1e-12 && (t.y - 4.0).abs() < 1e-12);
    }

    #[test]
    fn geometry_example_two_and_axis() {
        assert!((example2().m - 76.823).abs() < 5e-4);
        let g = geometry_for(4.0, 0.8, 0.25, Vec2::new(1.0, 0.0));
        assert_eq!(g.target_polar_angle, 0.0);
    }

    #[test]
    fn target_at_centre_rejected() {
        let c = da_circle(4.0, 0.8).unwrap();
        assert_eq!(
            build_geometry(c.center, 4.0, 0.3, &c),
            Err(TadError::UndefinedAngle)
        );
    }

    #[test]
    fn zero_alpha_rejected() {
        let g = GameGeometry {
            alpha: 0.0,
            ..example1()
        };
        assert!(matches!(
            build_sextic(&g),
            Err(TadError::DegeneratePolynomial(_))
        ));
    }

    #[test]
    fn sixth_roots_of_unity() {
        let mut c = [Complex64::new(0.0, 0.0); 7];
        c[0] = Complex64::new(-1.0, 0.0);
        c[6] = Complex64::new(1.0, 0.0);
        let roots = find_roots(&SexticCoefficients { c }).unwrap();
        assert_eq!(roots.len(), 6);
        let mut args = sorted(roots.iter().map(|z| z.arg()).collect());
        args.iter_mut().for_each(|a| {
            if *a < -PI + 1e-9 {
                *a += TAU
            }
        });
        let args = sorted(args);
        for (k, a) in args.iter().enumerate() {
            let expect = -2.0 * PI / 3.0 + k as f64 * PI / 3.0;
            assert!((a - expect).abs() < 1e-10, "{a} vs {expect}");
        }
        assert!(roots.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn deflates_vanishing_leading_terms() {
        let mut c = [Complex64::new(0.0, 0.0); 7];
        // (z - 2)(z + 3) = z^2 + z - 6
        c[0] = Complex64::new(-6.0, 0.0);
        c[1] = Complex64::new(1.0, 0.0);
        c[2] = Complex64::new(1.0, 0.0);
        let roots = find_roots(&SexticCoefficients { c }).unwrap();
        assert_eq!(roots.len(), 2);
        let re = sorted(roots.iter().map(|z| z.re).collect());
        assert!((re[0] + 3.0).abs() < 1e-12 && (re[1] - 2.0).abs() < 1e-12);
    }

    fn roots_of(g: &GameGeometry) -> (SexticCoefficients, Vec<Complex64>) {
        let c = build_sextic(g).unwrap();
        let r = find_roots(&c).unwrap();
        (c, r)
    }

    #[test]
    fn example_one_root_angles() {
        let g = example1();
        let (c, roots) = roots_of(&g);
        let cand = candidate_angles(&g, &roots);
        let expect = sorted(vec![-2.9596, -2.8573, 0.0001, 0.0001, 0.2254, 0.2186]);
        assert_eq!(cand.len(), 6);
        for (a, e) in cand.angles.iter().zip(&expect) {
            assert!((a - e).abs() < 5e-4, "{a} vs {e}");
        }
        for z in &roots {
            assert!(c.eval(*z).norm() < 1e-9 * c.max_abs());
        }
        assert_eq!(cand.distinct_angles().len(), 5);
    }

    #[test]
    fn example_two_root_angles() {
        let g = example2();
        let (_, roots) = roots_of(&g);
        let cand = candidate_angles(&g, &roots);
        let expect = sorted(vec![-3.0752, -3.1189, -0.0014, -0.0014, 0.0277, 0.0429]);
        for (a, e) in cand.angles.iter().zip(&expect) {
            assert!((a - e).abs() < 5e-4, "{a} vs {e}");
        }
    }

    #[test]
    fn reexpansion_matches_coefficients() {
        for g in [example1(), example2()] {
            let (c, roots) = roots_of(&g);
            let lead = c.c[6];
            let mut poly = vec![lead];
            for z in &roots {
                // multiply by (x - z)
                let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
                for (k, &p) in poly.iter().enumerate() {
                    next[k] += p;
                    next[k + 1] -= p * z;
                }
                poly = next;
            }
            // poly is stored highest-first
            let scale = c.max_abs();
            for k in 0..7 {
                let diff = (poly[6 - k] - c.c[k]).norm() / scale;
                assert!(diff < 1e-7, "coefficient {k}: {diff}");
            }
        }
    }

    #[test]
    fn roots_closed_under_unit_circle_reflection() {
        for g in [example1(), example2()] {
            let (_, roots) = roots_of(&g);
            for z in &roots {
                let refl = z.conj().inv();
                let nearest = roots
                    .iter()
                    .map(|w| (w - refl).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(nearest < 1e-6 * (1.0 + refl.norm()), "{z}");
            }
        }
    }

    #[test]
    fn example_one_optimal_angle_is_stationary() {
        let g = example1();
        // 0.2186 is rounded to 4 d.p.; the slope over ±5e-5 stays small
        assert!(stationarity_residual(&g, 0.2186).unwrap().abs() < 1e-3);
    }

    #[test]
    fn collinear_target_has_zero_root() {
        let g = geometry_for(4.0, 0.8, 0.25, Vec2::new(1.0, 0.0));
        assert_eq!(stationarity_residual(&g, 0.0).unwrap(), 0.0);
        let (c, roots) = roots_of(&g);
        assert!(c.eval(Complex64::new(1.0, 0.0)).norm() < 1e-12 * c.max_abs());
        let cand = candidate_angles(&g, &roots);
        assert!(cand.angles.iter().any(|a| a.abs() < 1e-6), "{:?}", cand.angles);
    }

    #[test]
    fn off_circle_root_keeps_its_angle() {
        let g = example1();
        let cand = candidate_angles(&g, &[Complex64::from_polar(0.5, 0.3)]);
        assert!((cand.angles[0] - 0.3).abs() < 1e-15);
        assert!((cand.moduli[0] - 0.5).abs() < 1e-15);
        assert!(cand.residuals[0] > 1e-3);
    }

    #[test]
    fn residual_sign_change_brackets_outside_minimum() {
        let g = example1();
        let lo = stationarity_residual(&g, 0.2186 - 1e-3).unwrap();
        let hi = stationarity_residual(&g, 0.2186 + 1e-3).unwrap();
        assert!(lo < 0.0 && hi > 0.0);
    }

    #[test]
    fn reflected_geometry_negates_angles() {
        for g in [example1(), example2()] {
            let (_, r1) = roots_of(&g);
            let (_, r2) = roots_of(&g.reflected());
            let a1 = sorted(candidate_angles(&g, &r1).angles.iter().map(|a| -a).collect());
            let a2 = candidate_angles(&g.reflected(), &r2).angles;
            for (x, y) in a1.iter().zip(&a2) {
                let d = crate::geometry::wrap_angle(x - y).abs();
                assert!(d < 1e-7, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn angles_invariant_under_scaling() {
        let g = example1();
        let (_, r1) = roots_of(&g);
        let (_, r2) = roots_of(&g.scaled(7.5));
        let a1 = candidate_angles(&g, &r1).angles;
        let a2 = candidate_angles(&g.scaled(7.5), &r2).angles;
        for (x, y) in a1.iter().zip(&a2) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}
