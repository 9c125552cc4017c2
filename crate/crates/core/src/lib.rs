//! Generalized Mandelbrot sets ("Mandelstuff") over several rings: complex
//! numbers, quaternions, spherical-power bulbs in R³ and R⁴, finite rings,
//! a floor-discretized lattice and 2×2 real matrices.
//!
//! Rendering and sampling loops go through [`exec::Executor`], which uses
//! rayon when the `parallel` feature is on and a plain loop otherwise. All
//! outputs are independent of the worker count.

pub mod algebra;
pub mod area;
pub mod contour;
pub mod dynamics;
pub mod exec;
pub mod finitering;
pub mod io;
pub mod julia;
pub mod matrixstuff;
pub mod rng;
pub mod topology;

pub use algebra::{Complex, Hopf4, Mat2, Quaternion, Triplex};
pub use dynamics::{EscapeConfig, MembershipGrid, OrbitResult, Verdict, VoxelVolume, Window};
pub use exec::Executor;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
