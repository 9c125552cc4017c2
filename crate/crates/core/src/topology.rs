//! Connected-component census on membership rasters, voxel volumes and the
//! coordinate torus of a finite ring.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::FiniteRing;
use crate::dynamics::{MembershipGrid, VoxelVolume};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("no in-set cells to label")]
    Empty,
    #[error("adjacency {0:?} does not apply to a {1}D domain")]
    WrongAdjacency(Adjacency, u8),
    #[error("mask length {got} does not match the {expected} cells of the domain")]
    ShapeMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adjacency {
    Four,
    Eight,
    Six,
    TwentySix,
    /// 4-adjacency with wrap-around on both axes.
    Torus4,
}

impl Adjacency {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "4" | "four" => Some(Self::Four),
            "8" | "eight" => Some(Self::Eight),
            "6" | "six" => Some(Self::Six),
            "26" | "twenty_six" => Some(Self::TwentySix),
            "torus4" | "torus-4" | "torus_4" => Some(Self::Torus4),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentCensus {
    pub adjacency: Adjacency,
    pub component_count: usize,
    /// Descending.
    pub sizes: Vec<usize>,
    pub in_set_count: usize,
    pub largest_fraction: f64,
}

struct DisjointSet {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut node: u32) -> u32 {
        let mut root = node;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[node as usize] != root {
            let next = self.parent[node as usize];
            self.parent[node as usize] = root;
            node = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.rank[a as usize] < self.rank[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        if self.rank[a as usize] == self.rank[b as usize] {
            self.rank[a as usize] += 1;
        }
    }
}

/// Cells `0..mask.len()`; `neighbors(cell, out)` pushes candidate neighbors.
fn census<N>(
    adjacency: Adjacency,
    mask: &[bool],
    order: impl Iterator<Item = usize>,
    neighbors: N,
) -> Result<ComponentCensus, TopologyError>
where
    N: Fn(usize, &mut Vec<usize>),
{
    let mut dsu = DisjointSet::new(mask.len());
    let mut scratch = Vec::with_capacity(26);
    for cell in order {
        if !mask[cell] {
            continue;
        }
        scratch.clear();
        neighbors(cell, &mut scratch);
        for &nb in &scratch {
            if mask[nb] {
                dsu.union(cell as u32, nb as u32);
            }
        }
    }
    let mut sizes_by_root = vec![0usize; mask.len()];
    let mut in_set = 0usize;
    for (cell, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
        sizes_by_root[dsu.find(cell as u32) as usize] += 1;
        in_set += 1;
    }
    if in_set == 0 {
        return Err(TopologyError::Empty);
    }
    let mut sizes: Vec<usize> = sizes_by_root.into_iter().filter(|&s| s > 0).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(ComponentCensus {
        adjacency,
        component_count: sizes.len(),
        largest_fraction: sizes[0] as f64 / in_set as f64,
        sizes,
        in_set_count: in_set,
    })
}

fn neighbors_2d(w: usize, h: usize, adjacency: Adjacency) -> impl Fn(usize, &mut Vec<usize>) {
    let diagonal = adjacency == Adjacency::Eight;
    move |cell, out| {
        let (i, j) = ((cell % w) as isize, (cell / w) as isize);
        for dj in -1isize..=1 {
            for di in -1isize..=1 {
                if (di == 0 && dj == 0) || (!diagonal && di != 0 && dj != 0) {
                    continue;
                }
                let (ni, nj) = (i + di, j + dj);
                if ni >= 0 && nj >= 0 && (ni as usize) < w && (nj as usize) < h {
                    out.push(nj as usize * w + ni as usize);
                }
            }
        }
    }
}

fn check_2d(adjacency: Adjacency) -> Result<(), TopologyError> {
    match adjacency {
        Adjacency::Four | Adjacency::Eight => Ok(()),
        other => Err(TopologyError::WrongAdjacency(other, 2)),
    }
}

/// Census of a row-major `w × h` boolean mask.
pub fn label_mask_2d(
    mask: &[bool],
    w: usize,
    h: usize,
    adjacency: Adjacency,
) -> Result<ComponentCensus, TopologyError> {
    check_2d(adjacency)?;
    if mask.len() != w * h {
        return Err(TopologyError::ShapeMismatch { expected: w * h, got: mask.len() });
    }
    census(adjacency, mask, 0..mask.len(), neighbors_2d(w, h, adjacency))
}

/// Census of the in-set pixels of a grid.
pub fn label_components(grid: &MembershipGrid, adjacency: Adjacency) -> Result<ComponentCensus, TopologyError> {
    label_mask_2d(&grid.mask(), grid.width, grid.height, adjacency)
}

pub fn label_volume(volume: &VoxelVolume, adjacency: Adjacency) -> Result<ComponentCensus, TopologyError> {
    let full = match adjacency {
        Adjacency::Six => false,
        Adjacency::TwentySix => true,
        other => return Err(TopologyError::WrongAdjacency(other, 3)),
    };
    let (nx, ny, nz) = (volume.nx, volume.ny, volume.nz);
    let mask: Vec<bool> = volume.data.iter().map(|&b| b != 0).collect();
    census(adjacency, &mask, 0..mask.len(), move |cell, out| {
        let i = (cell % nx) as isize;
        let j = ((cell / nx) % ny) as isize;
        let k = (cell / (nx * ny)) as isize;
        for dk in -1isize..=1 {
            for dj in -1isize..=1 {
                for di in -1isize..=1 {
                    let moved = (di != 0) as u8 + (dj != 0) as u8 + (dk != 0) as u8;
                    if moved == 0 || (!full && moved > 1) {
                        continue;
                    }
                    let (a, b, c) = (i + di, j + dj, k + dk);
                    if a >= 0 && b >= 0 && c >= 0 && (a as usize) < nx && (b as usize) < ny && (c as usize) < nz {
                        out.push((c as usize * ny + b as usize) * nx + a as usize);
                    }
                }
            }
        }
    })
}

/// Census of a finite-ring member set on its coordinate torus.
///
/// `Z_{p²}` elements sit at `(x mod p, x div p)`, `GF(p²)` elements at
/// `(a₀, a₁)`; neighbors differ by ±1 (mod the side) in one coordinate.
pub fn torus_components(ring: &FiniteRing, members: &[u64]) -> Result<ComponentCensus, TopologyError> {
    let (w, h) = ring.coordinate_dims();
    let (w, h) = (w as usize, h as usize);
    let mut mask = vec![false; w * h];
    for &m in members {
        let (a, b) = ring.coordinates(m);
        mask[b as usize * w + a as usize] = true;
    }
    torus_census(&mask, w, h, 0..w * h)
}

fn torus_census(
    mask: &[bool],
    w: usize,
    h: usize,
    order: impl Iterator<Item = usize>,
) -> Result<ComponentCensus, TopologyError> {
    census(Adjacency::Torus4, mask, order, move |cell, out| {
        let (i, j) = (cell % w, cell / w);
        out.push(j * w + (i + 1) % w);
        out.push(j * w + (i + w - 1) % w);
        out.push(((j + 1) % h) * w + i);
        out.push(((j + h - 1) % h) * w + i);
    })
}
