//! `mandelstuff` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error. Diagnostics go to
//! standard error; data goes to files or standard output.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mandelstuff::algebra::PowerMode;
use mandelstuff::dynamics::{EscapeMode, RadiusPolicy};
use thiserror::Error;

use config::{parse_box, parse_levels, parse_list, parse_mode, parse_radius, parse_res, parse_window, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mandelstuff", version, about = "Generalized Mandelbrot sets over several rings")]
struct Cli {
    /// JSON file whose keys override the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct EscapeArgs {
    #[arg(long, default_value_t = 100)]
    max_iter: u32,
    /// `auto` for max(2, |c|) or a fixed radius ≥ 2.
    #[arg(long, default_value = "auto", value_parser = parse_radius)]
    escape_radius: RadiusPolicy,
    /// `escape` or `green-threshold`.
    #[arg(long, default_value = "escape", value_parser = parse_mode)]
    escape_mode: EscapeMode,
}

impl EscapeArgs {
    fn fill(&self, cfg: &mut RunConfig) {
        cfg.max_iter = Some(self.max_iter);
        cfg.escape_radius = Some(self.escape_radius);
        cfg.escape_mode = Some(self.escape_mode);
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parameter-plane raster (PGM/PPM).
    Render2d(Render2d),
    /// Parameter-space voxel volume (MSVX) or boundary-shell mesh (STL).
    Render3d(Render3d),
    /// Filled Julia raster or inverse-iteration point cloud.
    Julia(Julia),
    /// Area of the Mandelbrot set: Monte Carlo, grid upper bound or analytic lower bound.
    Area(Area),
    /// Lemniscates |p_n| = 2 as SVG and CSV.
    Levelcurves(Levelcurves),
    /// Exhaustive Mandelstuff over a finite ring or the floor lattice.
    Finite(Finite),
    /// 2×2 matrix Mandelstuff: one parameter or the diagonal sweep.
    Matrix(Matrix),
    /// Connected-component census of a raster, a volume or a finite ring.
    Components(Components),
    /// Pollard rho factorization.
    Pollard(Pollard),
}

#[derive(Debug, Args)]
struct Render2d {
    /// complex, quaternion, bulb-wn, bulb-alt or hopf.
    #[arg(long, default_value = "complex")]
    ring: String,
    #[arg(long, default_value_t = 2)]
    degree: u32,
    /// x0,x1,y0,y1
    #[arg(long, default_value = "-2,1,-1.5,1.5", allow_hyphen_values = true, value_parser = parse_window)]
    window: [f64; 4],
    #[arg(long, default_value = "512x512", value_parser = parse_res)]
    res: ::std::vec::Vec<usize>,
    #[command(flatten)]
    escape: EscapeArgs,
    /// Fixed values of the coordinates beyond the first two.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
    slice: Option<::std::vec::Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// pgm or ppm; inferred from the extension when absent.
    #[arg(long)]
    format: Option<String>,
    /// gray or fire (PPM only).
    #[arg(long, default_value = "fire")]
    palette: String,
}

#[derive(Debug, Args)]
struct Render3d {
    /// bulb-wn, bulb-alt, quaternion or hopf.
    #[arg(long, default_value = "bulb-wn")]
    ring: String,
    #[arg(long, default_value_t = 8)]
    degree: u32,
    /// x0,x1,y0,y1,z0,z1
    #[arg(long = "box", default_value = "-1.5,1.5,-1.5,1.5,-1.5,1.5", allow_hyphen_values = true, value_parser = parse_box)]
    bbox: [f64; 6],
    #[arg(long, default_value = "64x64x64", value_parser = parse_res)]
    res: ::std::vec::Vec<usize>,
    #[command(flatten)]
    escape: EscapeArgs,
    /// Fixed fourth coordinate for the 4-dimensional rings.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
    slice: Option<::std::vec::Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// voxel or stl; inferred from the extension when absent.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct Julia {
    /// re,im
    #[arg(long, default_value = "-0.75,0.1", allow_hyphen_values = true, value_parser = parse_list)]
    c: ::std::vec::Vec<f64>,
    #[arg(long, default_value_t = 2)]
    degree: u32,
    /// filled or cloud.
    #[arg(long, default_value = "filled")]
    method: String,
    #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true, value_parser = parse_window)]
    window: [f64; 4],
    #[arg(long, default_value = "512x512", value_parser = parse_res)]
    res: ::std::vec::Vec<usize>,
    #[command(flatten)]
    escape: EscapeArgs,
    /// Cloud size.
    #[arg(long, default_value_t = 100_000)]
    points: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = mandelstuff::julia::DEFAULT_BURN_IN)]
    burn_in: usize,
    /// Forward-invariance tolerance.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// PGM for `filled`, JSON report for `cloud`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cloud points as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Area {
    /// mc, grid or analytic.
    #[arg(long, default_value = "mc")]
    method: String,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 999)]
    max_iter: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Grid side for `grid`.
    #[arg(long, default_value = "2048", value_parser = parse_res)]
    res: ::std::vec::Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Levelcurves {
    /// Comma-separated n values (each ≤ 40).
    #[arg(long, default_value = "0,1,2,3,4", value_parser = parse_levels)]
    levels: ::std::vec::Vec<u32>,
    #[arg(long, default_value = "-2.5,2.5,-2.5,2.5", allow_hyphen_values = true, value_parser = parse_window)]
    window: [f64; 4],
    /// Node grid side.
    #[arg(long, default_value = "512", value_parser = parse_res)]
    res: ::std::vec::Vec<usize>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON summary.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Finite {
    /// zp2, gfp2, zn or lattice.
    #[arg(long, default_value = "zp2")]
    ring: String,
    /// Prime for zp2/gfp2.
    #[arg(long)]
    p: Option<u64>,
    /// Modulus for zn, denominator for lattice.
    #[arg(long)]
    n: Option<u64>,
    /// Use the Frobenius exponent (the characteristic prime).
    #[arg(long)]
    frobenius: bool,
    #[arg(long, default_value_t = 2)]
    exponent: u64,
    /// Escape point b.
    #[arg(long = "escape", default_value_t = 1)]
    escape_point: u64,
    /// Iteration cap for the lattice ring.
    #[arg(long, default_value_t = 100)]
    max_iter: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Matrix {
    /// single or sweep.
    #[arg(long, default_value = "single")]
    method: String,
    /// m11,m12,m21,m22
    #[arg(long, default_value = "0,1,0,0", allow_hyphen_values = true, value_parser = parse_list)]
    c: ::std::vec::Vec<f64>,
    /// polar or product.
    #[arg(long, default_value = "polar", value_parser = parse_power_mode)]
    mode: PowerMode,
    #[arg(long, default_value_t = 2)]
    degree: u32,
    #[arg(long, default_value_t = 200)]
    max_iter: u32,
    /// Frobenius-norm escape bound.
    #[arg(long, default_value_t = mandelstuff::matrixstuff::DEFAULT_BOUND)]
    bound: f64,
    /// Sweep range lo,hi for both diagonal entries.
    #[arg(long, default_value = "-2.5,0.5", allow_hyphen_values = true, value_parser = parse_range)]
    range: [f64; 2],
    /// Sweep grid side.
    #[arg(long, default_value = "101", value_parser = parse_res)]
    res: ::std::vec::Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Components {
    /// complex, quaternion, bulb-wn, bulb-alt, hopf, zp2 or gfp2.
    #[arg(long, default_value = "complex")]
    ring: String,
    #[arg(long, default_value_t = 2)]
    degree: u32,
    /// 4 or 8 for rasters, 6 or 26 for volumes; finite rings use the torus.
    #[arg(long)]
    adjacency: Option<String>,
    #[arg(long, default_value = "-2,1,-1.5,1.5", allow_hyphen_values = true, value_parser = parse_window)]
    window: [f64; 4],
    #[arg(long = "box", default_value = "-1.5,1.5,-1.5,1.5,-1.5,1.5", allow_hyphen_values = true, value_parser = parse_box)]
    bbox: [f64; 6],
    /// WxH for complex, WxHxD for the bulbs.
    #[arg(long, value_parser = parse_res)]
    res: Option<::std::vec::Vec<usize>>,
    #[command(flatten)]
    escape: EscapeArgs,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
    slice: Option<::std::vec::Vec<f64>>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    frobenius: bool,
    #[arg(long, default_value_t = 2)]
    exponent: u64,
    #[arg(long = "escape", default_value_t = 1)]
    escape_point: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Pollard {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    c: u64,
    #[arg(long, default_value_t = 2)]
    x0: u64,
    /// Further attempts with c + 1, c + 2, … after a failure.
    #[arg(long, default_value_t = 0)]
    retries: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_power_mode(s: &str) -> Result<PowerMode, String> {
    match s {
        "polar" => Ok(PowerMode::Polar),
        "product" => Ok(PowerMode::Product),
        _ => Err(format!("unknown power mode {s:?} (polar, product)")),
    }
}

fn parse_range(s: &str) -> Result<[f64; 2], String> {
    match parse_list(s)?.as_slice() {
        &[lo, hi] => Ok([lo, hi]),
        v => Err(format!("range needs lo,hi, got {} values", v.len())),
    }
}

impl Command {
    fn into_config(self) -> RunConfig {
        match self {
            Command::Render2d(a) => {
                let mut cfg = RunConfig::new("render2d");
                cfg.ring = Some(a.ring);
                cfg.degree = Some(a.degree);
                cfg.window = Some(a.window);
                cfg.resolution = Some(a.res);
                a.escape.fill(&mut cfg);
                cfg.slice = a.slice;
                cfg.out = a.out;
                cfg.format = a.format;
                cfg.palette = Some(a.palette);
                cfg
            }
            Command::Render3d(a) => {
                let mut cfg = RunConfig::new("render3d");
                cfg.ring = Some(a.ring);
                cfg.degree = Some(a.degree);
                cfg.bbox = Some(a.bbox);
                cfg.resolution = Some(a.res);
                a.escape.fill(&mut cfg);
                cfg.slice = a.slice;
                cfg.out = a.out;
                cfg.format = a.format;
                cfg
            }
            Command::Julia(a) => {
                let mut cfg = RunConfig::new("julia");
                cfg.c = Some(a.c);
                cfg.degree = Some(a.degree);
                cfg.method = Some(a.method);
                cfg.window = Some(a.window);
                cfg.resolution = Some(a.res);
                a.escape.fill(&mut cfg);
                cfg.samples = Some(a.points);
                cfg.seed = Some(a.seed);
                cfg.burn_in = Some(a.burn_in);
                cfg.eps = Some(a.eps);
                cfg.out = a.out;
                cfg.csv = a.csv;
                cfg
            }
            Command::Area(a) => {
                let mut cfg = RunConfig::new("area");
                cfg.method = Some(a.method);
                cfg.samples = Some(a.samples);
                cfg.max_iter = Some(a.max_iter);
                cfg.seed = Some(a.seed);
                cfg.resolution = Some(a.res);
                cfg.out = a.out;
                cfg
            }
            Command::Levelcurves(a) => {
                let mut cfg = RunConfig::new("levelcurves");
                cfg.levels = Some(a.levels);
                cfg.window = Some(a.window);
                cfg.resolution = Some(a.res);
                cfg.svg = a.svg;
                cfg.csv = a.csv;
                cfg.out = a.out;
                cfg
            }
            Command::Finite(a) => {
                let mut cfg = RunConfig::new("finite");
                cfg.ring = Some(a.ring);
                cfg.p = a.p;
                cfg.n = a.n;
                cfg.frobenius = Some(a.frobenius);
                cfg.exponent = Some(a.exponent);
                cfg.escape_point = Some(a.escape_point);
                cfg.max_iter = Some(a.max_iter);
                cfg.out = a.out;
                cfg
            }
            Command::Matrix(a) => {
                let mut cfg = RunConfig::new("matrix");
                cfg.method = Some(a.method);
                cfg.c = Some(a.c);
                cfg.power_mode = Some(a.mode);
                cfg.degree = Some(a.degree);
                cfg.max_iter = Some(a.max_iter);
                cfg.bound = Some(a.bound);
                cfg.range = Some(a.range);
                cfg.resolution = Some(a.res);
                cfg.out = a.out;
                cfg
            }
            Command::Components(a) => {
                let mut cfg = RunConfig::new("components");
                cfg.ring = Some(a.ring);
                cfg.degree = Some(a.degree);
                cfg.adjacency = a.adjacency;
                cfg.window = Some(a.window);
                cfg.bbox = Some(a.bbox);
                cfg.resolution = a.res;
                a.escape.fill(&mut cfg);
                cfg.slice = a.slice;
                cfg.p = a.p;
                cfg.frobenius = Some(a.frobenius);
                cfg.exponent = Some(a.exponent);
                cfg.escape_point = Some(a.escape_point);
                cfg.out = a.out;
                cfg
            }
            Command::Pollard(a) => {
                let mut cfg = RunConfig::new("pollard");
                cfg.n = Some(a.n);
                cfg.rho_c = Some(a.c);
                cfg.x0 = Some(a.x0);
                cfg.retries = Some(a.retries);
                cfg.out = a.out;
                cfg
            }
        }
    }
}

fn run() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(CliError::Usage(e.render().to_string()));
        }
    };
    let mut cfg = cli.command.into_config();
    if let Some(path) = &cli.config {
        cfg = cfg.overlay_file(path)?;
    }
    commands::execute(&cfg)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let text = e.to_string();
            eprintln!("mandelstuff: {}", text.trim_end());
            ExitCode::from(e.code())
        }
    }
}
