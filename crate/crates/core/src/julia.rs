//! Filled Julia rasters (forward escape) and Julia point clouds (backward
//! iteration through the two inverse branches `z ↦ ±√(z − c)`).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Complex;
use crate::dynamics::{classify_from, ComplexMap, EscapeConfig, MembershipGrid, Window};
use crate::exec::Executor;
use crate::rng::BitStream;

pub const DEFAULT_BURN_IN: usize = 32;

/// Per-pixel escape test started at the pixel's `z` with `c` fixed.
pub fn filled_julia_grid(
    c: Complex,
    degree: u32,
    window: Window,
    res: (usize, usize),
    cfg: &EscapeConfig,
    exec: &Executor,
) -> MembershipGrid {
    let map = ComplexMap::new(degree);
    MembershipGrid::from_fn(window, res.0, res.1, exec, |x, y| {
        classify_from(&map, Complex::new(x, y), c, cfg).verdict.encode(cfg.max_iter)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub c: Complex,
    pub seed: u64,
    pub count: usize,
    pub burn_in: usize,
    pub points: Vec<Complex>,
}

/// Backward chain from `z = 2`: each step picks a branch of `±√(z − c)` with
/// one bit of SplitMix64 output. The first `burn_in` iterates are dropped.
pub fn julia_inverse_iteration(c: Complex, n_points: usize, seed: u64, burn_in: usize) -> PointCloud {
    let n_points = n_points.max(1);
    let mut bits = BitStream::new(seed);
    let mut z = Complex::new(2.0, 0.0);
    let mut points = Vec::with_capacity(n_points);
    for k in 0..burn_in + n_points {
        let root = (z - c).sqrt();
        z = if bits.next_bit() { -root } else { root };
        if k >= burn_in {
            points.push(z);
        }
    }
    PointCloud { c, seed, count: n_points, burn_in, points }
}

/// Points whose forward image `f_c(p)` is not within `eps` of another cloud
/// point. The chain head is skipped: its image is the last discarded
/// burn-in iterate.
pub fn forward_invariance_violations(cloud: &PointCloud, eps: f64) -> Vec<usize> {
    let cell = |p: Complex| ((p.re / eps).floor() as i64, (p.im / eps).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (idx, &p) in cloud.points.iter().enumerate() {
        buckets.entry(cell(p)).or_default().push(idx);
    }
    let c = cloud.c;
    let mut bad = Vec::new();
    for (idx, &p) in cloud.points.iter().enumerate().skip(1) {
        let image = p * p + c;
        let (cx, cy) = cell(image);
        let mut found = false;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = buckets.get(&(cx + dx, cy + dy)) {
                    if list.iter().any(|&o| o != idx && (cloud.points[o] - image).norm() <= eps) {
                        found = true;
                        break 'search;
                    }
                }
            }
        }
        if !found {
            bad.push(idx);
        }
    }
    bad
}
