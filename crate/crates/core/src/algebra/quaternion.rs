use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::{angle_power, radius_pow};

/// `a + b i + c j + d k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion { a: 0.0, b: 0.0, c: 0.0, d: 0.0 };
    pub const ONE: Quaternion = Quaternion { a: 1.0, b: 0.0, c: 0.0, d: 0.0 };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// Norm of the imaginary part.
    #[inline]
    pub fn vector_norm(self) -> f64 {
        self.b.hypot(self.c).hypot(self.d)
    }

    /// Evaluated as `hypot(a, |v|)` so that a quaternion with `c = d = 0`
    /// has exactly the norm of the complex number `a + bi`.
    #[inline]
    pub fn norm(self) -> f64 {
        self.a.hypot(self.vector_norm())
    }

    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// Repeated Hamilton product, left-associated: `((q·q)·q)·…`.
    pub fn pow_hamilton(self, d: u32) -> Self {
        let mut acc = Self::ONE;
        for _ in 0..d {
            acc = acc * self;
        }
        acc
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    /// Hamilton product.
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a * o.a - self.b * o.b - self.c * o.c - self.d * o.d,
            self.a * o.b + self.b * o.a + self.c * o.d - self.d * o.c,
            self.a * o.c - self.b * o.d + self.c * o.a + self.d * o.b,
            self.a * o.d + self.b * o.c - self.c * o.b + self.d * o.a,
        )
    }
}

/// `z^d + c` in ℍ.
///
/// The power is evaluated through the exponential form
/// `q = |q| (cos α + n sin α)`, `q^d = |q|^d (cos dα + n sin dα)`, which is
/// the same element as the iterated Hamilton product (powers of `q` commute
/// with `q`). On the subring `c = d = 0` the operations reduce exactly to
/// [`complex_step`](super::complex_step). A real `q` uses the `i` axis with
/// the sign of its `b` component.
#[inline]
pub fn quaternion_step(z: Quaternion, d: u32, c: Quaternion) -> Quaternion {
    let v = z.vector_norm();
    let r = z.a.hypot(v);
    if r == 0.0 {
        return c;
    }
    let rd = radius_pow(r, d);
    let (s, co) = angle_power(v, z.a, d);
    let (nb, nc, nd) = if v > 0.0 { (z.b / v, z.c / v, z.d / v) } else { (1.0f64.copysign(z.b), 0.0, 0.0) };
    let rs = rd * s;
    Quaternion::new(rd * co + c.a, rs * nb + c.b, rs * nc + c.c, rs * nd + c.d)
}
