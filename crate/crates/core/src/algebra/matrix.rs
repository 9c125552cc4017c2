use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Real 2×2 matrix `[[m11, m12], [m21, m22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Mat2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerMode {
    /// `Z^d = |Z|^d U^d` from the polar decomposition `Z = |Z| U`.
    Polar,
    /// `Z^d = Z·Z⋯Z`.
    Product,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 { m11: 0.0, m12: 0.0, m21: 0.0, m22: 0.0 };
    pub const IDENTITY: Mat2 = Mat2 { m11: 1.0, m12: 0.0, m21: 0.0, m22: 1.0 };

    pub const fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub const fn diag(a: f64, b: f64) -> Self {
        Self::new(a, 0.0, 0.0, b)
    }

    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c, -s, s, c)
    }

    pub fn transpose(self) -> Self {
        Self::new(self.m11, self.m21, self.m12, self.m22)
    }

    pub fn det(self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(self) -> f64 {
        self.m11 + self.m22
    }

    pub fn frobenius(self) -> f64 {
        self.m11.hypot(self.m12).hypot(self.m21.hypot(self.m22))
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)
    }

    pub fn is_symmetric(self, tol: f64) -> bool {
        (self.m12 - self.m21).abs() <= tol
    }

    /// Cofactor matrix; `A + cof(A)` is a multiple of a rotation and
    /// `A − cof(A)` a multiple of a reflection.
    fn cofactor(self) -> Self {
        Self::new(self.m22, -self.m21, -self.m12, self.m11)
    }

    pub fn powu(self, d: u32) -> Self {
        let mut acc = Self::IDENTITY;
        for _ in 0..d {
            acc = acc * self;
        }
        acc
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Self) -> Self {
        Self::new(self.m11 + o.m11, self.m12 + o.m12, self.m21 + o.m21, self.m22 + o.m22)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Self) -> Self {
        Self::new(self.m11 - o.m11, self.m12 - o.m12, self.m21 - o.m21, self.m22 - o.m22)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )
    }
}

/// Eigenpairs of the symmetric part of `s`, eigenvalues descending. A
/// diagonal matrix with equal entries reports `e₁` first.
pub fn symmetric_eigen(s: Mat2) -> [(f64, [f64; 2]); 2] {
    let a = s.m11;
    let d = s.m22;
    let b = 0.5 * (s.m12 + s.m21);
    if b == 0.0 {
        return if a >= d { [(a, [1.0, 0.0]), (d, [0.0, 1.0])] } else { [(d, [0.0, 1.0]), (a, [1.0, 0.0])] };
    }
    let mean = 0.5 * (a + d);
    let rad = (0.5 * (a - d)).hypot(b);
    let l1 = mean + rad;
    let l2 = mean - rad;
    // (S − l1) v = 0: pick the better conditioned of the two row solutions
    let v_a = [b, l1 - a];
    let v_b = [l1 - d, b];
    let v = if v_a[0].hypot(v_a[1]) >= v_b[0].hypot(v_b[1]) { v_a } else { v_b };
    let n = v[0].hypot(v[1]);
    let v1 = [v[0] / n, v[1] / n];
    let v2 = [-v1[1], v1[0]];
    [(l1, v1), (l2, v2)]
}

fn spectral(pairs: [(f64, [f64; 2]); 2], f: impl Fn(f64) -> f64) -> Mat2 {
    let mut out = Mat2::ZERO;
    for (lambda, v) in pairs {
        let w = f(lambda);
        out = out + Mat2::new(v[0] * v[0], v[0] * v[1], v[1] * v[0], v[1] * v[1]).scale(w);
    }
    out
}

/// Polar decomposition `A = P·U` with `P = (A Aᵀ)^{1/2}` symmetric PSD and
/// `U` orthogonal.
///
/// `U` is the normalized `A ± cof(A)`, sign taken from `det A` (`+` when the
/// determinant is zero, so a rank-one `A` gets a rotation). `A = 0` gives
/// `U = I`. `P` is then `A·Uᵀ`, symmetrized.
pub fn polar_decompose_2x2(a: Mat2) -> (Mat2, Mat2) {
    let det = a.det();
    let cof = a.cofactor();
    let m = if det < 0.0 { a - cof } else { a + cof };
    let scale = m.m11.hypot(m.m12);
    if scale == 0.0 {
        return (Mat2::ZERO, Mat2::IDENTITY);
    }
    let u = m.scale(1.0 / scale);
    let p = a * u.transpose();
    let off = 0.5 * (p.m12 + p.m21);
    (Mat2::new(p.m11, off, off, p.m22), u)
}

/// `Z^d + c`.
pub fn matrix_step(z: Mat2, d: u32, c: Mat2, mode: PowerMode) -> Mat2 {
    match mode {
        PowerMode::Product => z.powu(d) + c,
        PowerMode::Polar => {
            let (p, u) = polar_decompose_2x2(z);
            let pd = spectral(symmetric_eigen(p), |l| l.max(0.0).powi(d as i32));
            pd * u.powu(d) + c
        }
    }
}
