//! Marching squares for the lemniscates `{|p_n(z)| = 2}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Complex;
use crate::dynamics::{lemniscate_poly, DynamicsError, Window};
use crate::exec::Executor;

/// A chain of vertices; a closed curve repeats its first vertex at the end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCurve {
    pub n: u32,
    pub polylines: Vec<Polyline>,
}

/// Node grid: `nx × ny` samples with node `(i, j)` at
/// `(x0 + i·Δx, y0 + j·Δy)`, `Δx = (x1 − x0)/(nx − 1)`.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        let w = self.window;
        (w.x0 + (w.x1 - w.x0) * i as f64 / (self.nx - 1) as f64, w.y0 + (w.y1 - w.y0) * j as f64 / (self.ny - 1) as f64)
    }

    pub fn sample<F>(window: Window, nx: usize, ny: usize, exec: &Executor, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Sync + Send,
    {
        let nx = nx.max(2);
        let ny = ny.max(2);
        let proto = Self { window, nx, ny, values: Vec::new() };
        let rows = exec.map(ny, |j| {
            (0..nx)
                .map(|i| {
                    let (x, y) = proto.node(i, j);
                    f(x, y)
                })
                .collect::<Vec<f64>>()
        });
        Self { values: rows.concat(), ..proto }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }
}

/// Zero set of `field` (inside = negative), linearly interpolated on cell
/// edges. Saddle cells are resolved with the mean of the four corners.
pub fn marching_squares(field: &ScalarField) -> Vec<Polyline> {
    let (nx, ny) = (field.nx, field.ny);
    let inside = |i: usize, j: usize| field.at(i, j) < 0.0;
    // edge key: 2·node + (0 horizontal to the right, 1 vertical upwards)
    let h_key = |i: usize, j: usize| 2 * (j * nx + i) as u64;
    let v_key = |i: usize, j: usize| 2 * (j * nx + i) as u64 + 1;
    let mut coords: HashMap<u64, (f64, f64)> = HashMap::new();
    let mut crossing = |key: u64, a: (usize, usize), b: (usize, usize)| -> u64 {
        coords.entry(key).or_insert_with(|| {
            let (va, vb) = (field.at(a.0, a.1), field.at(b.0, b.1));
            let t = va / (va - vb);
            let (pa, pb) = (field.node(a.0, a.1), field.node(b.0, b.1));
            (pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1))
        });
        key
    };
    let mut segments: Vec<(u64, u64)> = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let s00 = inside(i, j);
            let s10 = inside(i + 1, j);
            let s11 = inside(i + 1, j + 1);
            let s01 = inside(i, j + 1);
            let bottom = (s00 != s10).then(|| crossing(h_key(i, j), (i, j), (i + 1, j)));
            let right = (s10 != s11).then(|| crossing(v_key(i + 1, j), (i + 1, j), (i + 1, j + 1)));
            let top = (s01 != s11).then(|| crossing(h_key(i, j + 1), (i, j + 1), (i + 1, j + 1)));
            let left = (s00 != s01).then(|| crossing(v_key(i, j), (i, j), (i, j + 1)));
            match (bottom, right, top, left) {
                (Some(b), Some(r), Some(t), Some(l)) => {
                    let mean =
                        0.25 * (field.at(i, j) + field.at(i + 1, j) + field.at(i + 1, j + 1) + field.at(i, j + 1));
                    if (mean < 0.0) == s00 {
                        segments.push((b, r));
                        segments.push((t, l));
                    } else {
                        segments.push((l, b));
                        segments.push((r, t));
                    }
                }
                edges => {
                    let found: Vec<u64> = [edges.0, edges.1, edges.2, edges.3].into_iter().flatten().collect();
                    if found.len() == 2 {
                        segments.push((found[0], found[1]));
                    }
                }
            }
        }
    }
    chain(&segments, &coords)
}

fn chain(segments: &[(u64, u64)], coords: &HashMap<u64, (f64, f64)>) -> Vec<Polyline> {
    let mut incident: HashMap<u64, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(s);
        incident.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let walk = |start_key: u64, first: usize, used: &mut Vec<bool>| -> Vec<u64> {
        let mut keys = vec![start_key];
        let mut seg = first;
        let mut at = start_key;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            at = if a == at { b } else { a };
            keys.push(at);
            match incident[&at].iter().find(|&&s| !used[s]) {
                Some(&next) => seg = next,
                None => break,
            }
        }
        keys
    };
    // open chains start at an endpoint of degree one; sort keys for determinism
    let mut ends: Vec<u64> = incident.iter().filter(|(_, v)| v.len() == 1).map(|(&k, _)| k).collect();
    ends.sort_unstable();
    for key in ends {
        let seg = incident[&key][0];
        if used[seg] {
            continue;
        }
        let keys = walk(key, seg, &mut used);
        out.push(Polyline { points: keys.iter().map(|k| coords[k]).collect(), closed: false });
    }
    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        let start = segments[s].0;
        let keys = walk(start, s, &mut used);
        let closed = keys.first() == keys.last();
        out.push(Polyline { points: keys.iter().map(|k| coords[k]).collect(), closed });
    }
    out
}

/// `{|p_n| = 2}` for each requested `n` on an `res × res` node grid.
pub fn level_curves(ns: &[u32], window: Window, res: usize, exec: &Executor) -> Result<Vec<LevelCurve>, DynamicsError> {
    ns.iter()
        .map(|&n| {
            if n > 40 {
                return Err(DynamicsError::TooDeep(n));
            }
            let field =
                ScalarField::sample(window, res, res, exec, |x, y| match lemniscate_poly(n, Complex::new(x, y)) {
                    Ok(p) => p.norm().min(1e300) - 2.0,
                    Err(_) => 1e300,
                });
            Ok(LevelCurve { n, polylines: marching_squares(&field) })
        })
        .collect()
}
