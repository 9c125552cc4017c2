use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use super::{angle_power, clamp_unit, radius_pow};

/// A point of R³ carrying a spherical power.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Triplex {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Triplex {
    pub const ZERO: Triplex = Triplex { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// `hypot(hypot(x, y), z)`: equals the complex modulus on the `z = 0` plane.
    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }
}

impl Add for Triplex {
    type Output = Triplex;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Triplex {
    type Output = Triplex;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

/// A point of R⁴ carrying the Hopf-chart power.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Hopf4 {
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
    pub y4: f64,
}

impl Hopf4 {
    pub const ZERO: Hopf4 = Hopf4 { y1: 0.0, y2: 0.0, y3: 0.0, y4: 0.0 };

    pub const fn new(y1: f64, y2: f64, y3: f64, y4: f64) -> Self {
        Self { y1, y2, y3, y4 }
    }

    /// `hypot(ρ₁, ρ₂)` with `ρ₁ = |(y1, y2)|`, `ρ₂ = |(y3, y4)|`.
    #[inline]
    pub fn norm(self) -> f64 {
        self.y1.hypot(self.y2).hypot(self.y3.hypot(self.y4))
    }
}

impl Sub for Hopf4 {
    type Output = Hopf4;
    fn sub(self, o: Self) -> Self {
        Self::new(self.y1 - o.y1, self.y2 - o.y2, self.y3 - o.y3, self.y4 - o.y4)
    }
}

/// White-Nylander chart `ρ(cos φ cos θ, cos φ sin θ, sin φ)`, latitude φ.
#[inline]
pub fn triplex_step_wn(p: Triplex, d: u32, c: Triplex) -> Triplex {
    let r = p.norm();
    if r == 0.0 {
        return c;
    }
    let phi = clamp_unit(p.z / r).asin();
    let rd = radius_pow(r, d);
    let (st, ct) = angle_power(p.y, p.x, d);
    let (sp, cp) = (d as f64 * phi).sin_cos();
    Triplex::new(rd * cp * ct + c.x, rd * cp * st + c.y, rd * sp + c.z)
}

/// Polar-angle chart `ρ(sin φ cos θ, sin φ sin θ, cos φ)`, φ measured from +z.
#[inline]
pub fn triplex_step_alt(p: Triplex, d: u32, c: Triplex) -> Triplex {
    let r = p.norm();
    if r == 0.0 {
        return c;
    }
    let phi = clamp_unit(p.z / r).acos();
    let rd = radius_pow(r, d);
    let (st, ct) = angle_power(p.y, p.x, d);
    let (sp, cp) = (d as f64 * phi).sin_cos();
    Triplex::new(rd * sp * ct + c.x, rd * sp * st + c.y, rd * cp + c.z)
}

/// Hopf chart `(cos t cos u, cos t sin u, sin t cos v, sin t sin v)` with
/// `u = arg(y1 + i y2)`, `v = arg(y3 + i y4)`, `t = atan2(ρ₂, ρ₁) ∈ [0, π/2]`.
#[inline]
pub fn hopf_step(p: Hopf4, d: u32, c: Hopf4) -> Hopf4 {
    let rho1 = p.y1.hypot(p.y2);
    let rho2 = p.y3.hypot(p.y4);
    let r = rho1.hypot(rho2);
    if r == 0.0 {
        return c;
    }
    let rd = radius_pow(r, d);
    let (su, cu) = angle_power(p.y2, p.y1, d);
    let (sv, cv) = angle_power(p.y4, p.y3, d);
    let (s_t, c_t) = angle_power(rho2, rho1, d);
    Hopf4::new(rd * cu * c_t + c.y1, rd * su * c_t + c.y2, rd * cv * s_t + c.y3, rd * sv * s_t + c.y4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{complex_step, Complex};
    use proptest::prelude::*;

    #[test]
    fn zero_returns_parameter() {
        assert_eq!(triplex_step_wn(Triplex::ZERO, 8, Triplex::new(0.0, 0.0, 2.0)), Triplex::new(0.0, 0.0, 2.0));
        assert_eq!(triplex_step_alt(Triplex::ZERO, 2, Triplex::new(1.0, 0.0, 0.0)), Triplex::new(1.0, 0.0, 0.0));
        assert_eq!(hopf_step(Hopf4::ZERO, 2, Hopf4::new(0.3, -0.2, 0.0, 0.0)), Hopf4::new(0.3, -0.2, 0.0, 0.0));
    }

    #[test]
    fn pole_orbit_degree_eight() {
        let c = Triplex::new(0.0, 0.0, 2.0);
        // White-Nylander: the pole latitude π/2 is sent to 4π, so the image
        // points along +x; the modulus is still 2⁸ up to |c|.
        let w = triplex_step_wn(c, 8, c);
        assert!((w.norm() - 256.0).abs() <= 2.0 + 1e-9, "{w:?}");
        // Polar-angle chart keeps the pole on the z axis: (0, 0, 2⁸ + 2).
        let a = triplex_step_alt(c, 8, c);
        assert_eq!((a.x, a.y), (0.0, 0.0));
        assert_eq!(a.z, 258.0);
    }

    #[test]
    fn alt_chart_examples() {
        let pole = triplex_step_alt(Triplex::new(0.0, 0.0, 1.0), 2, Triplex::ZERO);
        assert_eq!(pole, Triplex::new(0.0, 0.0, 1.0));
        // r = 1, θ = 0, φ = π/2, image (sin π, 0, cos π).
        let eq = triplex_step_alt(Triplex::new(1.0, 0.0, 0.0), 2, Triplex::ZERO);
        let oracle = Triplex::new(std::f64::consts::PI.sin(), 0.0, std::f64::consts::PI.cos());
        assert!((eq - oracle).norm() < 1e-12, "{eq:?}");
        assert!((eq - Triplex::new(0.0, 0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn hopf_pure_second_plane() {
        // ρ₁ = 0, ρ₂ = 2: u = 0, v = π/2, t = π/2, r^d = 4.
        let w = hopf_step(Hopf4::new(0.0, 0.0, 0.0, 2.0), 2, Hopf4::ZERO);
        let (pi, two) = (std::f64::consts::PI, 2.0f64);
        let oracle = Hopf4::new(
            4.0 * (two * 0.0).cos() * pi.cos(),
            4.0 * (two * 0.0).sin() * pi.cos(),
            4.0 * pi.cos() * pi.sin(),
            4.0 * pi.sin() * pi.sin(),
        );
        assert!((w - oracle).norm() < 1e-12, "{w:?} vs {oracle:?}");
        assert!((w.norm() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn planes_are_closed_and_match_complex() {
        let pts = [(0.3, -0.7), (-1.2, 0.4), (-0.75, 0.0), (1.5, 2.5), (0.0, -1.0), (-0.1, -0.0)];
        for &(x, y) in &pts {
            for d in 2..=8 {
                let c = Complex::new(0.05, -0.3);
                let z = complex_step(Complex::new(x, y), d, c);
                let t = triplex_step_wn(Triplex::new(x, y, 0.0), d, Triplex::new(c.re, c.im, 0.0));
                assert_eq!(t.z, 0.0);
                assert_eq!((t.x, t.y), (z.re, z.im));
                let h = hopf_step(Hopf4::new(x, y, 0.0, 0.0), d, Hopf4::new(c.re, c.im, 0.0, 0.0));
                assert_eq!((h.y3, h.y4), (0.0, 0.0));
                assert_eq!((h.y1, h.y2), (z.re, z.im));
            }
        }
    }

    proptest! {
        #[test]
        fn norm_law(x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0, w in -2.0f64..2.0, d in 2u32..=8) {
            let p = Triplex::new(x, y, z);
            prop_assume!(p.norm() > 1e-6);
            let expect = p.norm().powi(d as i32);
            for img in [triplex_step_wn(p, d, Triplex::ZERO), triplex_step_alt(p, d, Triplex::ZERO)] {
                prop_assert!((img.norm() - expect).abs() <= 1e-12 * expect);
            }
            let h = Hopf4::new(x, y, z, w);
            let expect = h.norm().powi(d as i32);
            let img = hopf_step(h, d, Hopf4::ZERO);
            prop_assert!((img.norm() - expect).abs() <= 1e-12 * expect);
        }
    }
}
