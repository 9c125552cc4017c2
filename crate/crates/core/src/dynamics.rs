//! Orbit iteration, escape classification, membership rasters and the
//! Green/Böttcher estimates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    complex_step, hopf_step, matrix_step, quaternion_step, triplex_step_alt, triplex_step_wn, Complex, Hopf4, Mat2,
    PowerMode, Quaternion, Triplex,
};
use crate::exec::Executor;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("escape radius must be at least 2, got {0}")]
    BadRadius(f64),
    #[error("empty raster {0}")]
    EmptyRaster(String),
    #[error("invalid window {0:?}")]
    BadWindow([f64; 2]),
    #[error("lemniscate degree {0} exceeds 40")]
    TooDeep(u32),
    #[error("p_{0} overflowed")]
    Overflow(u32),
}

/// A ring with a power-plus-add step, as seen by the escape-time iteration.
pub trait PowerMap: Sync {
    type Elem: Copy + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn step(&self, z: Self::Elem, c: Self::Elem) -> Self::Elem;
    fn norm(&self, z: Self::Elem) -> f64;
}

macro_rules! euclidean_map {
    ($(#[$doc:meta])* $name:ident, $elem:ty, $zero:expr, $step:path) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub struct $name {
            pub degree: u32,
        }

        impl $name {
            pub const fn new(degree: u32) -> Self {
                Self { degree }
            }
        }

        impl PowerMap for $name {
            type Elem = $elem;

            #[inline]
            fn zero(&self) -> $elem {
                $zero
            }

            #[inline]
            fn step(&self, z: $elem, c: $elem) -> $elem {
                $step(z, self.degree, c)
            }

            #[inline]
            fn norm(&self, z: $elem) -> f64 {
                z.norm()
            }
        }
    };
}

euclidean_map!(ComplexMap, Complex, Complex::ZERO, complex_step);
euclidean_map!(QuaternionMap, Quaternion, Quaternion::ZERO, quaternion_step);
euclidean_map!(
    /// White-Nylander bulb.
    BulbWn, Triplex, Triplex::ZERO, triplex_step_wn
);
euclidean_map!(
    /// Polar-angle bulb.
    BulbAlt, Triplex, Triplex::ZERO, triplex_step_alt
);
euclidean_map!(HopfMap, Hopf4, Hopf4::ZERO, hopf_step);

/// 2×2 real matrices with the Frobenius norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixMap {
    pub degree: u32,
    pub mode: PowerMode,
}

impl PowerMap for MatrixMap {
    type Elem = Mat2;

    fn zero(&self) -> Mat2 {
        Mat2::ZERO
    }

    fn step(&self, z: Mat2, c: Mat2) -> Mat2 {
        matrix_step(z, self.degree, c, self.mode)
    }

    fn norm(&self, z: Mat2) -> f64 {
        z.frobenius()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy", content = "radius")]
pub enum RadiusPolicy {
    Fixed(f64),
    /// `max(2, |c|)`.
    MaxTwoAbsC,
}

impl RadiusPolicy {
    #[inline]
    pub fn radius(&self, c_norm: f64) -> f64 {
        match *self {
            RadiusPolicy::Fixed(r) => r,
            RadiusPolicy::MaxTwoAbsC => c_norm.max(2.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EscapeMode {
    /// First iterate with norm above the radius marks escape.
    Escape,
    /// Fixed-n Green-type proxy: run exactly `max_iter` steps, in-set iff
    /// `|T_c^n(0)|² ≤ 4`.
    GreenThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeConfig {
    pub max_iter: u32,
    pub radius: RadiusPolicy,
    pub mode: EscapeMode,
}

impl EscapeConfig {
    /// Escape mode with the `max(2, |c|)` radius.
    pub const fn new(max_iter: u32) -> Self {
        Self { max_iter, radius: RadiusPolicy::MaxTwoAbsC, mode: EscapeMode::Escape }
    }

    pub const fn with_radius(mut self, radius: RadiusPolicy) -> Self {
        self.radius = radius;
        self
    }

    pub const fn with_mode(mut self, mode: EscapeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        match self.radius {
            RadiusPolicy::Fixed(r) if r.is_nan() || r < 2.0 => Err(DynamicsError::BadRadius(r)),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Index of the first iterate beyond the radius.
    Escaped(u32),
    Bounded(u32),
}

impl Verdict {
    pub fn is_bounded(&self) -> bool {
        matches!(self, Verdict::Bounded(_))
    }

    /// Raster byte: 0 in-set, `1 + ⌊254·k/N⌋` otherwise.
    pub fn encode(&self, max_iter: u32) -> u8 {
        match *self {
            Verdict::Bounded(_) => 0,
            Verdict::Escaped(k) => {
                let n = max_iter.max(1) as u64;
                let k = (k as u64).min(n);
                (1 + 254 * k / n) as u8
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitResult<E> {
    pub verdict: Verdict,
    pub final_norm: f64,
    pub orbit: Option<Vec<E>>,
}

const THRESHOLD_OVERFLOW: f64 = 1e150;

fn iterate<M: PowerMap>(map: &M, z0: M::Elem, c: M::Elem, cfg: &EscapeConfig, record: bool) -> OrbitResult<M::Elem> {
    let mut orbit = record.then(Vec::new);
    let mut z = z0;
    match cfg.mode {
        EscapeMode::Escape => {
            let radius = cfg.radius.radius(map.norm(c));
            let mut k = 0u32;
            loop {
                let norm = map.norm(z);
                if let Some(o) = orbit.as_mut() {
                    o.push(z);
                }
                if norm > radius {
                    return OrbitResult { verdict: Verdict::Escaped(k), final_norm: norm, orbit };
                }
                if k == cfg.max_iter {
                    return OrbitResult { verdict: Verdict::Bounded(k), final_norm: norm, orbit };
                }
                z = map.step(z, c);
                k += 1;
            }
        }
        EscapeMode::GreenThreshold => {
            let mut first_above_two = None;
            let mut norm = map.norm(z);
            if let Some(o) = orbit.as_mut() {
                o.push(z);
            }
            if norm > 2.0 {
                first_above_two = Some(0);
            }
            for k in 1..=cfg.max_iter {
                z = map.step(z, c);
                norm = map.norm(z);
                if let Some(o) = orbit.as_mut() {
                    o.push(z);
                }
                if norm > 2.0 && first_above_two.is_none() {
                    first_above_two = Some(k);
                }
                if norm.is_nan() || norm > THRESHOLD_OVERFLOW {
                    break;
                }
            }
            let verdict = if norm * norm <= 4.0 {
                Verdict::Bounded(cfg.max_iter)
            } else {
                Verdict::Escaped(first_above_two.unwrap_or(cfg.max_iter))
            };
            OrbitResult { verdict, final_norm: norm, orbit }
        }
    }
}

/// Classifies the parameter `c` by iterating from `z = 0`.
#[inline]
pub fn classify<M: PowerMap>(map: &M, c: M::Elem, cfg: &EscapeConfig) -> OrbitResult<M::Elem> {
    iterate(map, map.zero(), c, cfg, false)
}

/// [`classify`] keeping every iterate `z_0, …, z_k`.
pub fn classify_with_orbit<M: PowerMap>(map: &M, c: M::Elem, cfg: &EscapeConfig) -> OrbitResult<M::Elem> {
    iterate(map, map.zero(), c, cfg, true)
}

/// Classifies the starting point `z` for fixed `c` (filled Julia sets).
#[inline]
pub fn classify_from<M: PowerMap>(map: &M, z: M::Elem, c: M::Elem, cfg: &EscapeConfig) -> OrbitResult<M::Elem> {
    iterate(map, z, c, cfg, false)
}

/// `x0,x1,y0,y1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    /// `[−2, 1] × [−1.5, 1.5]`, area 9.
    pub const fn mandelbrot() -> Self {
        Self::new(-2.0, 1.0, -1.5, 1.5)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        for (a, b) in [(self.x0, self.x1), (self.y0, self.y1)] {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(DynamicsError::BadWindow([a, b]));
            }
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    /// Center of pixel `(i, j)` in a `w × h` raster.
    #[inline]
    pub fn center(&self, i: usize, j: usize, w: usize, h: usize) -> (f64, f64) {
        let dx = (self.x1 - self.x0) / w as f64;
        let dy = (self.y1 - self.y0) / h as f64;
        (self.x0 + (i as f64 + 0.5) * dx, self.y0 + (j as f64 + 0.5) * dy)
    }
}

/// `x0,x1,y0,y1,z0,z1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub z0: f64,
    pub z1: f64,
}

impl Box3 {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64, z0: f64, z1: f64) -> Self {
        Self { x0, x1, y0, y1, z0, z1 }
    }

    pub const fn cube(half: f64) -> Self {
        Self::new(-half, half, -half, half, -half, half)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        for (a, b) in [(self.x0, self.x1), (self.y0, self.y1), (self.z0, self.z1)] {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(DynamicsError::BadWindow([a, b]));
            }
        }
        Ok(())
    }

    pub fn spacing(&self, nx: usize, ny: usize, nz: usize) -> (f64, f64, f64) {
        ((self.x1 - self.x0) / nx as f64, (self.y1 - self.y0) / ny as f64, (self.z1 - self.z0) / nz as f64)
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize, k: usize, n: (usize, usize, usize)) -> (f64, f64, f64) {
        let (dx, dy, dz) = self.spacing(n.0, n.1, n.2);
        (self.x0 + (i as f64 + 0.5) * dx, self.y0 + (j as f64 + 0.5) * dy, self.z0 + (k as f64 + 0.5) * dz)
    }
}

/// Row-major raster, row `j = 0` at `y0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipGrid {
    pub width: usize,
    pub height: usize,
    pub window: WindowBits,
    pub data: Vec<u8>,
}

/// Window stored by bit pattern so grids compare with `Eq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowBits([u64; 4]);

impl From<Window> for WindowBits {
    fn from(w: Window) -> Self {
        Self([w.x0.to_bits(), w.x1.to_bits(), w.y0.to_bits(), w.y1.to_bits()])
    }
}

impl From<WindowBits> for Window {
    fn from(b: WindowBits) -> Self {
        let [a, c, d, e] = b.0.map(f64::from_bits);
        Window::new(a, c, d, e)
    }
}

impl MembershipGrid {
    pub fn window(&self) -> Window {
        self.window.into()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[j * self.width + i]
    }

    #[inline]
    pub fn in_set(&self, i: usize, j: usize) -> bool {
        self.get(i, j) == 0
    }

    pub fn in_set_count(&self) -> usize {
        self.data.iter().filter(|&&b| b == 0).count()
    }

    pub fn mask(&self) -> Vec<bool> {
        self.data.iter().map(|&b| b == 0).collect()
    }

    /// Evaluates `pixel(x, y)` at every pixel center, rows scheduled by `exec`.
    pub fn from_fn<F>(window: Window, width: usize, height: usize, exec: &Executor, pixel: F) -> Self
    where
        F: Fn(f64, f64) -> u8 + Sync + Send,
    {
        let rows = exec.map(height, |j| {
            (0..width)
                .map(|i| {
                    let (x, y) = window.center(i, j, width, height);
                    pixel(x, y)
                })
                .collect::<Vec<u8>>()
        });
        Self { width, height, window: window.into(), data: rows.concat() }
    }
}

/// Per-voxel in/out bits (1 = in-set), x fastest, then y, then z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoxelVolume {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub bbox: [u64; 6],
    pub data: Vec<u8>,
}

impl VoxelVolume {
    pub fn new(bbox: Box3, nx: usize, ny: usize, nz: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), nx * ny * nz);
        let b = [bbox.x0, bbox.x1, bbox.y0, bbox.y1, bbox.z0, bbox.z1].map(f64::to_bits);
        Self { nx, ny, nz, bbox: b, data }
    }

    pub fn bbox(&self) -> Box3 {
        let [a, b, c, d, e, f] = self.bbox.map(f64::from_bits);
        Box3::new(a, b, c, d, e, f)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.ny + j) * self.nx + i
    }

    #[inline]
    pub fn in_set(&self, i: usize, j: usize, k: usize) -> bool {
        self.data[self.index(i, j, k)] != 0
    }

    pub fn in_set_count(&self) -> usize {
        self.data.iter().filter(|&&b| b != 0).count()
    }

    pub fn from_fn<F>(bbox: Box3, n: (usize, usize, usize), exec: &Executor, voxel: F) -> Self
    where
        F: Fn(f64, f64, f64) -> bool + Sync + Send,
    {
        let (nx, ny, nz) = n;
        let slabs = exec.map(nz, |k| {
            let mut slab = Vec::with_capacity(nx * ny);
            for j in 0..ny {
                for i in 0..nx {
                    let (x, y, z) = bbox.center(i, j, k, n);
                    slab.push(voxel(x, y, z) as u8);
                }
            }
            slab
        });
        Self::new(bbox, nx, ny, nz, slabs.concat())
    }
}

/// Parameter-plane raster: pixel center `(x, y)` is embedded into the ring
/// by `embed`, then classified.
pub fn render_grid<M, E>(
    map: &M,
    embed: E,
    cfg: &EscapeConfig,
    window: Window,
    res: (usize, usize),
    exec: &Executor,
) -> MembershipGrid
where
    M: PowerMap,
    E: Fn(f64, f64) -> M::Elem + Sync + Send,
{
    MembershipGrid::from_fn(window, res.0, res.1, exec, |x, y| {
        classify(map, embed(x, y), cfg).verdict.encode(cfg.max_iter)
    })
}

pub fn render_voxels<M, E>(
    map: &M,
    embed: E,
    cfg: &EscapeConfig,
    bbox: Box3,
    res: (usize, usize, usize),
    exec: &Executor,
) -> VoxelVolume
where
    M: PowerMap,
    E: Fn(f64, f64, f64) -> M::Elem + Sync + Send,
{
    VoxelVolume::from_fn(bbox, res, exec, |x, y, z| classify(map, embed(x, y, z), cfg).verdict.is_bounded())
}

/// Bailout modulus for the Green-function iteration.
pub const GREEN_BAILOUT: f64 = 1e8;

/// `G_c(z) ≈ 2^{−k} ln|f_c^k(z)|` at the first `k` with `|f_c^k(z)| > 10⁸`;
/// 0 when no such `k ≤ max_iter` exists.
pub fn green_estimate(c: Complex, z: Complex, max_iter: u32) -> f64 {
    let mut z = z;
    for k in 0..=max_iter {
        let r = z.norm();
        if r > GREEN_BAILOUT {
            return r.ln() * 0.5f64.powi(k as i32);
        }
        if k < max_iter {
            z = complex_step(z, 2, c);
        }
    }
    0.0
}

/// `|Φ(c)| = exp(G_c(c))`; 1 for parameters that do not escape.
pub fn phi_magnitude(c: Complex, max_iter: u32) -> f64 {
    green_estimate(c, c, max_iter).exp()
}

/// `p_0 = z`, `p_n = p_{n−1}² + z`, so `p_n(c) = f_c^{n+1}(0)`.
pub fn lemniscate_poly(n: u32, z: Complex) -> Result<Complex, DynamicsError> {
    if n > 40 {
        return Err(DynamicsError::TooDeep(n));
    }
    let mut p = z;
    for k in 1..=n {
        p = p * p + z;
        if !p.is_finite() {
            return Err(DynamicsError::Overflow(k));
        }
    }
    Ok(p)
}
