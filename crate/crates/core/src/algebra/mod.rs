//! Ring elements and the power-plus-add step `z ↦ z^d + c` for every
//! supported ring.
//!
//! The Euclidean rings (complex, quaternion, triplex, Hopf) all compute the
//! power in polar/spherical form. The helpers below are shared so that a
//! lower-dimensional element embedded in a bigger ring goes through
//! bit-identical floating point operations.

mod complex;
mod finite;
mod lattice;
mod matrix;
mod quaternion;
mod spherical;

pub use complex::{complex_step, Complex};
pub use finite::{finite_step, Exponent, FiniteResidue, FiniteRing, FiniteRingError};
pub use lattice::{lattice_step, LatticeError, LatticePoint};
pub use matrix::{matrix_step, polar_decompose_2x2, symmetric_eigen, Mat2, PowerMode};
pub use quaternion::{quaternion_step, Quaternion};
pub use spherical::{hopf_step, triplex_step_alt, triplex_step_wn, Hopf4, Triplex};

/// `atan2` with `angle(0, 0) = 0` and range (−π, π].
#[inline]
pub(crate) fn angle(y: f64, x: f64) -> f64 {
    if x == 0.0 && y == 0.0 {
        0.0
    } else {
        y.atan2(x)
    }
}

/// `(sin dθ, cos dθ)` for `θ = angle(y, x)`. On the real axis (`y = 0`) the
/// result is exact, so real orbits such as `0 → −2 → 2 → 2` stay real.
#[inline]
pub(crate) fn angle_power(y: f64, x: f64, d: u32) -> (f64, f64) {
    if y == 0.0 {
        if x >= 0.0 || d.is_multiple_of(2) {
            (0.0, 1.0)
        } else {
            (0.0, -1.0)
        }
    } else {
        (d as f64 * y.atan2(x)).sin_cos()
    }
}

#[inline]
pub(crate) fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Radius power used by every polar step.
#[inline]
pub(crate) fn radius_pow(r: f64, d: u32) -> f64 {
    r.powi(d as i32)
}
