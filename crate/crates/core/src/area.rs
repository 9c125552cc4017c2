//! Area estimates for the quadratic Mandelbrot set: Monte Carlo, pixel
//! counting on the escape mask (a non-certified upper estimate), and the
//! closed-form lower bound from the main cardioid and the period-2 disk.

use std::f64::consts::PI;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebra::Complex;
use crate::dynamics::{classify, ComplexMap, EscapeConfig, Window};
use crate::exec::Executor;
use crate::rng::{splitmix64, unit_f64};

/// Published envelope for the area.
pub const PUBLISHED_BOUNDS: (f64, f64) = (1.3744, 1.7274);

/// Area of `[−2, 1] × [−1.5, 1.5]`.
pub const BOX_AREA: f64 = 9.0;

const MC_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaMethod {
    MonteCarlo,
    GridUpperBound,
    AnalyticLowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaReport {
    pub method: AreaMethod,
    pub estimate: f64,
    /// Monte Carlo only: `9·sqrt(p̂(1−p̂)/n)`.
    pub std_error: Option<f64>,
    pub n_samples: Option<u64>,
    pub resolution: Option<usize>,
    pub max_iter: Option<u32>,
    pub hits: Option<u64>,
    pub certified: bool,
    pub elapsed_s: f64,
    pub within_published_bounds: bool,
    pub above_analytic_lower_bound: bool,
}

impl AreaReport {
    fn new(method: AreaMethod, estimate: f64, started: Instant) -> Self {
        Self {
            method,
            estimate,
            std_error: None,
            n_samples: None,
            resolution: None,
            max_iter: None,
            hits: None,
            certified: matches!(method, AreaMethod::AnalyticLowerBound),
            elapsed_s: started.elapsed().as_secs_f64(),
            within_published_bounds: (PUBLISHED_BOUNDS.0..=PUBLISHED_BOUNDS.1).contains(&estimate),
            above_analytic_lower_bound: estimate >= analytic_lower_bound_value(),
        }
    }
}

/// Sample `i` of seed `s`: `h₁ = mix(s ⊕ i)`, `h₂ = mix(h₁)`, mapped to the box.
#[inline]
pub fn mc_sample(seed: u64, i: u64) -> Complex {
    let h1 = splitmix64(seed ^ i);
    let h2 = splitmix64(h1);
    Complex::new(-2.0 + 3.0 * unit_f64(h1), -1.5 + 3.0 * unit_f64(h2))
}

pub fn mc_area(n_samples: u64, max_iter: u32, seed: u64, exec: &Executor) -> AreaReport {
    let started = Instant::now();
    let n = n_samples.max(1);
    let map = ComplexMap::new(2);
    let cfg = EscapeConfig::new(max_iter);
    let chunks = n.div_ceil(MC_CHUNK as u64) as usize;
    let hits: u64 = exec
        .map(chunks, |ci| {
            let lo = ci as u64 * MC_CHUNK as u64;
            let hi = (lo + MC_CHUNK as u64).min(n);
            (lo..hi).filter(|&i| classify(&map, mc_sample(seed, i), &cfg).verdict.is_bounded()).count() as u64
        })
        .into_iter()
        .sum();
    let p = hits as f64 / n as f64;
    let mut report = AreaReport::new(AreaMethod::MonteCarlo, BOX_AREA * p, started);
    report.std_error = Some(BOX_AREA * (p * (1.0 - p) / n as f64).sqrt());
    report.n_samples = Some(n);
    report.max_iter = Some(max_iter);
    report.hits = Some(hits);
    report
}

/// Pixel area times the number of `res × res` centers in the box that have
/// not escaped after `max_iter` steps.
pub fn grid_upper_bound(res: usize, max_iter: u32, exec: &Executor) -> AreaReport {
    let started = Instant::now();
    let res = res.max(2);
    let window = Window::mandelbrot();
    let map = ComplexMap::new(2);
    let cfg = EscapeConfig::new(max_iter);
    let count: usize = exec
        .map(res, |j| {
            (0..res)
                .filter(|&i| {
                    let (x, y) = window.center(i, j, res, res);
                    classify(&map, Complex::new(x, y), &cfg).verdict.is_bounded()
                })
                .count()
        })
        .into_iter()
        .sum();
    let pixel = BOX_AREA / (res * res) as f64;
    let mut report = AreaReport::new(AreaMethod::GridUpperBound, count as f64 * pixel, started);
    report.resolution = Some(res);
    report.max_iter = Some(max_iter);
    report.hits = Some(count as u64);
    report
}

/// `3π/8 + π/16 = 7π/16`.
pub fn analytic_lower_bound_value() -> f64 {
    3.0 * PI / 8.0 + PI / 16.0
}

pub fn analytic_lower_bound() -> AreaReport {
    AreaReport::new(AreaMethod::AnalyticLowerBound, analytic_lower_bound_value(), Instant::now())
}

/// Main cardioid `|1 − √(1 − 4c)| < 1` or period-2 disk `|c + 1| < 1/4`.
pub fn cardioid_or_p2(c: Complex) -> bool {
    let w = (Complex::ONE - Complex::new(4.0 * c.re, 4.0 * c.im)).sqrt();
    (Complex::ONE - w).norm() < 1.0 || (c + Complex::ONE).norm() < 0.25
}
