//! Mandelstuff in `M(2, R)` under the polar power and the product power.

use serde::{Deserialize, Serialize};

use crate::algebra::{Mat2, PowerMode};
use crate::dynamics::{classify, EscapeConfig, MatrixMap, OrbitResult, RadiusPolicy};
use crate::exec::Executor;

/// Frobenius-norm escape threshold.
pub const DEFAULT_BOUND: f64 = 10.0;

/// Iterates `Z ↦ Z^d + c` from `Z = 0`; escape when `‖Z‖_F > bound`.
pub fn matrix_classify(c: Mat2, mode: PowerMode, degree: u32, max_iter: u32, bound: f64) -> OrbitResult<Mat2> {
    let map = MatrixMap { degree, mode };
    let cfg = EscapeConfig::new(max_iter).with_radius(RadiusPolicy::Fixed(bound));
    classify(&map, c, &cfg)
}

/// Bounded orbit of `x ↦ x² + c` from 0 on the real line, by direct
/// iteration (`|x| > 2` escapes).
pub fn real_orbit_bounded(c: f64, steps: u32) -> bool {
    let mut x = 0.0f64;
    for _ in 0..steps {
        x = x * x + c;
        if x.abs() > 2.0 {
            return false;
        }
    }
    true
}

/// Both eigenvalue maps `x ↦ x² + cᵢ` have bounded orbits, i.e.
/// `c₁, c₂ ∈ [−2, 1/4]`.
pub fn diagonal_oracle(c1: f64, c2: f64) -> bool {
    let inside = |c: f64| (-2.0..=0.25).contains(&c);
    inside(c1) && inside(c2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalSweep {
    pub lo: f64,
    pub hi: f64,
    pub side: usize,
    pub max_iter: u32,
    pub bound: f64,
    pub agree: usize,
    /// Disagreements whose 8-neighborhood has a constant oracle verdict.
    pub disagree_outside_band: usize,
    pub disagree_in_band: usize,
    pub band_cells: usize,
    pub bounded_cells: usize,
}

/// Polar-mode `d = 2` classification of `diag(c₁, c₂)` on a `side × side`
/// grid over `[lo, hi]²` (endpoints included), compared with
/// [`diagonal_oracle`].
pub fn diagonal_sweep(lo: f64, hi: f64, side: usize, max_iter: u32, bound: f64, exec: &Executor) -> DiagonalSweep {
    let coord = |k: usize| lo + (hi - lo) * k as f64 / (side - 1) as f64;
    let measured: Vec<bool> = exec
        .map(side, |j| {
            (0..side)
                .map(|i| {
                    let c = Mat2::diag(coord(i), coord(j));
                    matrix_classify(c, PowerMode::Polar, 2, max_iter, bound).verdict.is_bounded()
                })
                .collect::<Vec<_>>()
        })
        .concat();
    let oracle: Vec<bool> = (0..side * side).map(|k| diagonal_oracle(coord(k % side), coord(k / side))).collect();
    let in_band = |i: usize, j: usize| {
        let v = oracle[j * side + i];
        (j.saturating_sub(1)..=(j + 1).min(side - 1))
            .any(|nj| (i.saturating_sub(1)..=(i + 1).min(side - 1)).any(|ni| oracle[nj * side + ni] != v))
    };
    let mut sweep = DiagonalSweep {
        lo,
        hi,
        side,
        max_iter,
        bound,
        agree: 0,
        disagree_outside_band: 0,
        disagree_in_band: 0,
        band_cells: 0,
        bounded_cells: measured.iter().filter(|&&m| m).count(),
    };
    for j in 0..side {
        for i in 0..side {
            let band = in_band(i, j);
            sweep.band_cells += band as usize;
            let k = j * side + i;
            match (measured[k] == oracle[k], band) {
                (true, _) => sweep.agree += 1,
                (false, true) => sweep.disagree_in_band += 1,
                (false, false) => sweep.disagree_outside_band += 1,
            }
        }
    }
    sweep
}

/// Largest interval `[a, b]` of scalar parameters `c·I` found bounded on a
/// uniform scan of `[lo, hi]`.
pub fn scalar_bounded_interval(lo: f64, hi: f64, steps: usize, max_iter: u32) -> Option<(f64, f64)> {
    let mut found: Option<(f64, f64)> = None;
    for k in 0..=steps {
        let c = lo + (hi - lo) * k as f64 / steps as f64;
        let m = Mat2::diag(c, c);
        if matrix_classify(m, PowerMode::Polar, 2, max_iter, DEFAULT_BOUND).verdict.is_bounded() {
            found = Some(match found {
                None => (c, c),
                Some((a, _)) => (a, c),
            });
        }
    }
    found
}
