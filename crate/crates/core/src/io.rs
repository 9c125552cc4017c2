//! Byte-exact writers: PGM (P5), PPM (P6), the `MSVX` voxel container,
//! binary STL of the voxel shell, and CSV/SVG level curves.
//!
//! Rasters are written top row first, i.e. grid row `height − 1` (largest
//! `y`) comes first so the image is upright.

use std::fmt::Write as _;

use crate::contour::LevelCurve;
use crate::dynamics::{MembershipGrid, VoxelVolume, Window};

pub fn write_pgm(grid: &MembershipGrid) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", grid.width, grid.height).into_bytes();
    out.reserve(grid.width * grid.height);
    for j in (0..grid.height).rev() {
        out.extend_from_slice(&grid.data[j * grid.width..(j + 1) * grid.width]);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Palette {
    Gray,
    /// Black inside; escaped bytes ramp through blue, white and orange.
    Fire,
}

pub fn palette_color(palette: Palette, value: u8) -> [u8; 3] {
    match palette {
        Palette::Gray => [value; 3],
        Palette::Fire => {
            if value == 0 {
                return [0, 0, 0];
            }
            let t = (value - 1) as f64 / 254.0;
            let lerp = |a: [f64; 3], b: [f64; 3], s: f64| {
                [0, 1, 2].map(|k| (a[k] + (b[k] - a[k]) * s).round().clamp(0.0, 255.0) as u8)
            };
            let stops = [[0.0, 7.0, 100.0], [32.0, 107.0, 203.0], [237.0, 255.0, 255.0], [255.0, 170.0, 0.0]];
            let seg = (t * 3.0).min(2.999_999);
            let k = seg.floor() as usize;
            lerp(stops[k], stops[k + 1], seg - k as f64)
        }
    }
}

pub fn write_ppm(grid: &MembershipGrid, palette: Palette) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", grid.width, grid.height).into_bytes();
    out.reserve(3 * grid.width * grid.height);
    for j in (0..grid.height).rev() {
        for &v in &grid.data[j * grid.width..(j + 1) * grid.width] {
            out.extend_from_slice(&palette_color(palette, v));
        }
    }
    out
}

pub const VOXEL_MAGIC: &[u8; 4] = b"MSVX";

/// `MSVX`, three little-endian `u32` dimensions, then one byte per voxel
/// (x fastest).
pub fn write_voxels(volume: &VoxelVolume) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + volume.data.len());
    out.extend_from_slice(VOXEL_MAGIC);
    for d in [volume.nx, volume.ny, volume.nz] {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    out.extend_from_slice(&volume.data);
    out
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("not an MSVX voxel file")]
    BadMagic,
    #[error("voxel payload has {got} bytes, header says {expected}")]
    Truncated { expected: usize, got: usize },
}

/// `(nx, ny, nz)`.
pub type VoxelDims = (usize, usize, usize);

/// Dimensions and payload of an `MSVX` buffer.
pub fn read_voxels(bytes: &[u8]) -> Result<(VoxelDims, &[u8]), FormatError> {
    if bytes.len() < 16 || &bytes[..4] != VOXEL_MAGIC {
        return Err(FormatError::BadMagic);
    }
    let dim = |k: usize| u32::from_le_bytes(bytes[4 + 4 * k..8 + 4 * k].try_into().unwrap()) as usize;
    let n = (dim(0), dim(1), dim(2));
    let expected = n.0 * n.1 * n.2;
    let payload = &bytes[16..];
    if payload.len() != expected {
        return Err(FormatError::Truncated { expected, got: payload.len() });
    }
    Ok((n, payload))
}

pub const STL_HEADER_TEXT: &[u8] = b"mandelstuff voxel shell";

/// Unit-cube corners of each face, counter-clockwise seen from outside,
/// with the outward normal. Order: −x, +x, −y, +y, −z, +z.
const FACES: [([i32; 3], [[u8; 3]; 4]); 6] = [
    ([-1, 0, 0], [[0, 0, 0], [0, 0, 1], [0, 1, 1], [0, 1, 0]]),
    ([1, 0, 0], [[1, 0, 0], [1, 1, 0], [1, 1, 1], [1, 0, 1]]),
    ([0, -1, 0], [[0, 0, 0], [1, 0, 0], [1, 0, 1], [0, 0, 1]]),
    ([0, 1, 0], [[0, 1, 0], [0, 1, 1], [1, 1, 1], [1, 1, 0]]),
    ([0, 0, -1], [[0, 0, 0], [0, 1, 0], [1, 1, 0], [1, 0, 0]]),
    ([0, 0, 1], [[0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]]),
];

/// Binary little-endian STL of the boundary-voxel shell: two triangles for
/// every face of an in-set voxel whose neighbor is out of set or outside
/// the volume.
pub fn write_stl(volume: &VoxelVolume) -> Vec<u8> {
    let bbox = volume.bbox();
    let (dx, dy, dz) = bbox.spacing(volume.nx, volume.ny, volume.nz);
    let (nx, ny, nz) = (volume.nx as i64, volume.ny as i64, volume.nz as i64);
    let filled = |i: i64, j: i64, k: i64| {
        i >= 0 && j >= 0 && k >= 0 && i < nx && j < ny && k < nz && volume.in_set(i as usize, j as usize, k as usize)
    };
    let mut body = Vec::new();
    let mut count: u32 = 0;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                if !filled(i, j, k) {
                    continue;
                }
                for (normal, corners) in FACES.iter() {
                    if filled(i + normal[0] as i64, j + normal[1] as i64, k + normal[2] as i64) {
                        continue;
                    }
                    let world = |c: [u8; 3]| {
                        [
                            (bbox.x0 + (i + c[0] as i64) as f64 * dx) as f32,
                            (bbox.y0 + (j + c[1] as i64) as f64 * dy) as f32,
                            (bbox.z0 + (k + c[2] as i64) as f64 * dz) as f32,
                        ]
                    };
                    let v = corners.map(world);
                    let n = normal.map(|x| x as f32);
                    for tri in [[v[0], v[1], v[2]], [v[0], v[2], v[3]]] {
                        for x in n.iter().chain(tri.iter().flatten()) {
                            body.extend_from_slice(&x.to_le_bytes());
                        }
                        body.extend_from_slice(&0u16.to_le_bytes());
                        count += 1;
                    }
                }
            }
        }
    }
    let mut out = Vec::with_capacity(84 + body.len());
    let mut header = [0u8; 80];
    header[..STL_HEADER_TEXT.len()].copy_from_slice(STL_HEADER_TEXT);
    out.extend_from_slice(&header);
    out.extend_from_slice(&count.to_le_bytes());
    out.extend_from_slice(&body);
    out
}

/// Rows `curve_id,x,y` with `curve_id = n<n>_<k>`.
pub fn write_levelcurves_csv(curves: &[LevelCurve]) -> String {
    let mut out = String::from("curve_id,x,y\n");
    for curve in curves {
        for (k, line) in curve.polylines.iter().enumerate() {
            for &(x, y) in &line.points {
                let _ = writeln!(out, "n{}_{},{},{}", curve.n, k, x, y);
            }
        }
    }
    out
}

pub fn write_levelcurves_svg(curves: &[LevelCurve], window: Window, size_px: u32) -> String {
    let aspect = (window.y1 - window.y0) / (window.x1 - window.x0);
    let (w, h) = (size_px as f64, (size_px as f64 * aspect).round());
    let sx = |x: f64| (x - window.x0) / (window.x1 - window.x0) * w;
    let sy = |y: f64| (window.y1 - y) / (window.y1 - window.y0) * h;
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let count = curves.len().max(1);
    for (idx, curve) in curves.iter().enumerate() {
        let hue = 360.0 * idx as f64 / count as f64;
        let _ = writeln!(out, r#"<g id="n{}" stroke="hsl({hue:.1},80%,40%)" fill="none" stroke-width="1">"#, curve.n);
        for line in &curve.polylines {
            let mut d = String::new();
            for (k, &(x, y)) in line.points.iter().enumerate() {
                let _ = write!(d, "{}{:.3},{:.3} ", if k == 0 { "M" } else { "L" }, sx(x), sy(y));
            }
            if line.closed {
                d.push('Z');
            }
            let _ = writeln!(out, r#"<path d="{}"/>"#, d.trim_end());
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
