//! Subcommand execution from a validated [`RunConfig`].

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use mandelstuff::algebra::{Exponent, FiniteRing, PowerMode};
use mandelstuff::area::{self, PUBLISHED_BOUNDS};
use mandelstuff::contour::level_curves;
use mandelstuff::dynamics::{
    render_grid, render_voxels, BulbAlt, BulbWn, ComplexMap, HopfMap, QuaternionMap, VoxelVolume,
};
use mandelstuff::finitering::{enumerate_lattice, enumerate_mandelstuff, pollard_rho, FiniteError, PollardError};
use mandelstuff::io::{self, Palette};
use mandelstuff::julia::{filled_julia_grid, forward_invariance_violations, julia_inverse_iteration};
use mandelstuff::matrixstuff::{diagonal_oracle, diagonal_sweep, matrix_classify, scalar_bounded_interval};
use mandelstuff::topology::{label_components, label_volume, torus_components, Adjacency};
use mandelstuff::{Complex, Executor, Hopf4, Mat2, MembershipGrid, Quaternion, Triplex, TOOL_VERSION};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

/// Interval the paper gives for symmetric-matrix membership.
const PAPER_EIGEN_INTERVAL: [f64; 2] = [-1.0, 1.0];

pub fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    let exec = Executor::from_env();
    match cfg.subcommand.as_str() {
        "render2d" => render2d(cfg, &exec),
        "render3d" => render3d(cfg, &exec),
        "julia" => julia(cfg, &exec),
        "area" => area(cfg, &exec),
        "levelcurves" => levelcurves(cfg, &exec),
        "finite" => finite(cfg, &exec),
        "matrix" => matrix(cfg, &exec),
        "components" => components(cfg, &exec),
        "pollard" => pollard(cfg, &exec),
        other => Err(CliError::Usage(format!("unknown subcommand {other:?}"))),
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn require_out(cfg: &RunConfig) -> Result<&Path, CliError> {
    cfg.out.as_deref().ok_or_else(|| usage("--out is required"))
}

fn extension(path: &Path) -> String {
    path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase()
}

/// `{tool_version, method, config, result, timing}` to `--out` or stdout.
fn emit_report(
    cfg: &RunConfig,
    method: &str,
    result: Value,
    started: Instant,
    exec: &Executor,
) -> Result<(), CliError> {
    let report = json!({
        "tool_version": TOOL_VERSION,
        "method": method,
        "config": cfg,
        "result": result,
        "timing": {
            "elapsed_s": started.elapsed().as_secs_f64(),
            "threads": exec.threads(),
        },
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    match cfg.out.as_deref() {
        Some(path) => {
            write_file(path, text.as_bytes())?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Runtime(format!("stdout: {e}"))),
    }
}

/// Parameter-plane raster of `ring`; coordinates past the second come from
/// the slice.
fn plane_grid(cfg: &RunConfig, exec: &Executor) -> Result<MembershipGrid, CliError> {
    let window = cfg.window()?;
    let res = cfg.res2()?;
    let esc = cfg.escape()?;
    let d = cfg.degree();
    let (s0, s1) = (cfg.slice_at(0), cfg.slice_at(1));
    Ok(match cfg.ring() {
        "complex" => render_grid(&ComplexMap::new(d), Complex::new, &esc, window, res, exec),
        "quaternion" => {
            render_grid(&QuaternionMap::new(d), |x, y| Quaternion::new(x, y, s0, s1), &esc, window, res, exec)
        }
        "bulb-wn" => render_grid(&BulbWn::new(d), |x, y| Triplex::new(x, y, s0), &esc, window, res, exec),
        "bulb-alt" => render_grid(&BulbAlt::new(d), |x, y| Triplex::new(x, y, s0), &esc, window, res, exec),
        "hopf" => render_grid(&HopfMap::new(d), |x, y| Hopf4::new(x, y, s0, s1), &esc, window, res, exec),
        other => return Err(usage(format!("unknown ring {other:?} for a raster"))),
    })
}

fn space_volume(cfg: &RunConfig, exec: &Executor) -> Result<VoxelVolume, CliError> {
    let bbox = cfg.bbox()?;
    let res = cfg.res3()?;
    let esc = cfg.escape()?;
    let d = cfg.degree();
    let s0 = cfg.slice_at(0);
    Ok(match cfg.ring() {
        "bulb-wn" => render_voxels(&BulbWn::new(d), Triplex::new, &esc, bbox, res, exec),
        "bulb-alt" => render_voxels(&BulbAlt::new(d), Triplex::new, &esc, bbox, res, exec),
        "quaternion" => {
            render_voxels(&QuaternionMap::new(d), |x, y, z| Quaternion::new(x, y, z, s0), &esc, bbox, res, exec)
        }
        "hopf" => render_voxels(&HopfMap::new(d), |x, y, z| Hopf4::new(x, y, z, s0), &esc, bbox, res, exec),
        other => return Err(usage(format!("unknown ring {other:?} for a volume"))),
    })
}

fn image_bytes(cfg: &RunConfig, grid: &MembershipGrid, out: &Path) -> Result<Vec<u8>, CliError> {
    let format = cfg.format.clone().unwrap_or_else(|| extension(out));
    match format.as_str() {
        "ppm" => {
            let palette = match cfg.palette.as_deref().unwrap_or("fire") {
                "gray" => Palette::Gray,
                "fire" => Palette::Fire,
                other => return Err(usage(format!("unknown palette {other:?}"))),
            };
            Ok(io::write_ppm(grid, palette))
        }
        "pgm" | "" => Ok(io::write_pgm(grid)),
        other => Err(usage(format!("unknown image format {other:?} (pgm, ppm)"))),
    }
}

fn render2d(cfg: &RunConfig, exec: &Executor) -> Result<(), CliError> {
    let out = require_out(cfg)?;
    let grid = plane_grid(cfg, exec)?;
    let bytes = image_bytes(cfg, &grid, out)?;
    write_file(out, &bytes)?;
    eprintln!("wrote {} ({}x{}, {} in-set pixels)", out.display(), grid.width, grid.height, grid.in_set_count());
    Ok(())
}

fn render3d(cfg: &RunConfig, exec: &Executor) -> Result<(), CliError> {
    let out = require_out(cfg)?;
    let format = cfg.format.clone().unwrap_or_else(|| extension(out));
    let volume = space_volume(cfg, exec)?;
    let bytes = match format.as_str() {
        "stl" => io::write_stl(&volume),
        "voxel" | "msvx" | "" => io::write_voxels(&volume),
        other => return Err(usage(format!("unknown volume format {other:?} (voxel, stl)"))),
    };
    write_file(out, &bytes)?;
    eprintln!(
        "wrote {} ({}x{}x{}, {} in-set voxels)",
        out.display(),
        volume.nx,
        volume.ny,
        volume.nz,
        volume.in_set_count()
    );
    Ok(())
}

fn julia(cfg: &RunConfig, exec: &Executor) -> Result<(), CliError> {
    let started = Instant::now();
    let [re, im] = cfg.c_coords::<2>()?;
    let c = Complex::new(re, im);
    match cfg.method.as_deref().unwrap_or("filled") {
        "filled" => {
            let out = require_out(cfg)?;
            let grid = filled_julia_grid(c, cfg.degree(), cfg.window()?, cfg.res2()?, &cfg.escape()?, exec);
            write_file(out, &image_bytes(cfg, &grid, out)?)?;
            eprintln!("wrote {} ({} in-set pixels)", out.display(), grid.in_set_count());
            Ok(())
        }
        "cloud" => {
            if cfg.degree() != 2 {
                return Err(usage("the inverse-iteration cloud is defined for degree 2"));
            }
            let n = cfg.samples.unwrap_or(100_000) as usize;
            let eps = cfg.eps.unwrap_or(1e-6);
            if eps.is_nan() || eps <= 0.0 {
                return Err(usage("eps must be positive"));
            }
            let cloud = julia_inverse_iteration(c, n, cfg.seed.unwrap_or(1), cfg.burn_in.unwrap_or(32));
            let violations = forward_invariance_violations(&cloud, eps);
            let max_abs = cloud.points.iter().map(|p| p.norm()).fold(0.0, f64::max);
            let max_unit_dev = cloud.points.iter().map(|p| (p.norm() - 1.0).abs()).fold(0.0, f64::max);
            let max_imag = cloud.points.iter().map(|p| p.im.abs()).fold(0.0, f64::max);
            if let Some(path) = cfg.csv.as_deref() {
                let mut text = String::from("x,y\n");
                for p in &cloud.points {
                    text.push_str(&format!("{},{}\n", p.re, p.im));
                }
                write_file(path, text.as_bytes())?;
            }
            let result = json!({
                "count": cloud.points.len(),
                "burn_in": cloud.burn_in,
                "max_modulus": max_abs,
                "max_abs_modulus_minus_one": max_unit_dev,
                "max_abs_imag": max_imag,
                "forward_invariance_eps": eps,
                "forward_invariance_violations": violations.len(),
                "forward_invariant": violations.is_empty(),
            });
            emit_report(cfg, "julia_inverse_iteration", result, started, exec)
        }
        other => Err(usage(format!("unknown julia method {other:?} (filled, cloud)"))),
    }
}

fn area(cfg: &RunConfig, exec: &Executor) -> Result<(), CliError> {
    let started = Instant::now();
    let max_iter = cfg.max_iter.unwrap_or(999);
    let (tag, report) = match cfg.method.as_deref().unwrap_or("mc") {
        "mc" => {
            let n = cfg.samples.unwrap_or(1_000_000);
            if n == 0 {
                return Err(usage("samples must be positive"));
            }
            ("area_monte_carlo", area::mc_area(n, max_iter, cfg.seed.unwrap_or(1), exec))
        }
        "grid" => ("area_grid_upper_bound", area::grid_upper_bound(cfg.res2()?.0, max_iter, exec)),
        "analytic" => ("area_analytic_lower_bound", area::analytic_lower_bound()),
        other => return Err(usage(format!("unknown area method {other:?} (mc, grid, analytic)"))),
    };
    let mut result = serde_json::to_value(&report).expect("report serializes");
    // wall time belongs to the timing section, not the reproducible result
    if let Value::Object(map) = &mut result {
        map.remove("elapsed_s");
        map.insert("published_bounds".into(), json!([PUBLISHED_BOUNDS.0, PUBLISHED_BOUNDS.1]));
        map.insert("analytic_lower_bound".into(), json!(area::analytic_lower_bound_value()));
    }
    emit_report(cfg, tag, result, started, exec)
}

fn levelcurves(cfg: &RunConfig, exec: &Executor) -> Result<(), CliError> {
    let started = Instant::now();
    let window = cfg.window()?;
    let (side, _) = cfg.res2()?;
    let levels = cfg.levels.clone().unwrap_or_else(|| vec![0, 1, 2, 3, 4]);
    let curves = level_curves(&levels, window, side, exec).map_err(usage)?;
    let csv = io::write_levelcurves_csv(&curves);
    if let Some(path) = cfg.svg.as_deref() {
        write_file(path, io::write_levelcurves_svg(&curves, window, 800).as_bytes())?;
        eprintln!("wrote {}", path.display());
    }
    match cfg.csv.as_deref() {
        Some(path) => {
            write_file(path, csv.as_bytes())?;
            eprintln!("wrote {}", path.display());
        }
        None if cfg.svg.is_none() && cfg.out.is_none() => {
            std::io::stdout().write_all(csv.as_bytes()).map_err(|e| CliError::Runtime(format!("stdout: {e}")))?;
        }
        None => {}
    }
    if cfg.out.is_some() {
        let summary: Vec<Value> = curves
            .iter()
            .map(|c| {
                json!({
                    "n": c.n,
                    "polylines": c.polylines.len(),
                    "closed": c.polylines.iter().filter(|l| l.closed).count(),
                    "vertices": c.polylines.iter().map(|l| l.points.len()).sum::<usize>(),
                })
            })
            .collect();
        emit_report(cfg, "levelcurves_marching_squares", json!({ "curves": summary }), started, exec)?;
    }
    Ok(())
}

fn finite_error(e: FiniteError) -> CliError {
    usage(e)
}

fn finite_ring(cfg: &RunConfig) -> Result<FiniteRing, CliError> {
    let need_p = || cfg.p.ok_or_else(|| usage("--p is required"));
    match cfg.ring() {
        "zp2" => FiniteRing::zp2(need_p()?).map_err(usage),
        "gfp2" => FiniteRing::gfp2(need_p()?).map_err(usage),
        "zn" => FiniteRing::zn(cfg.n.ok_or_else(|| usage("--n is required"))?).map_err(usage),
        other => Err(usage(format!("unknown finite ring {other:?} (zp2, gfp2, zn, lattice)"))),
    }
}

fn finite_exponent(cfg: &RunConfig) -> Exponent {
    if cfg.frobenius.unwrap_or(false) {
        Exponent::Frobenius
    } else {
        Exponent::Power(cfg.exponent.unwrap_or(2))
    }
}

fn finite(cfg: &RunConfig, exec: &Executor) -> Result<(), CliError> {
    let started = Instant::now();
    if cfg.ring() == "lattice" {
        let n = cfg.n.ok_or_else(|| usage("--n (denominator) is required"))?;
        let n = i64::try_from(n).map_err(usage)?;
        let report = enumerate_lattice(n, cfg.max_iter.unwrap_or(100), exec).map_err(finite_error)?;
        return emit_report(
            cfg,
            "lattice_enumeration",
            serde_json::to_value(&report).expect("serializes"),
            started,
            exec,
        );
    }
    let ring = finite_ring(cfg)?;
    let report =
        enumerate_mandelstuff(ring, finite_exponent(cfg), cfg.escape_point.unwrap_or(1), exec).map_err(finite_error)?;
    emit_report(cfg, "finite_enumeration", serde_json::to_value(&report).expect("serializes"), started, exec)
}

fn matrix(cfg: &RunConfig, exec: &Executor) -> Result<(), CliError> {
    let started = Instant::now();
    let mode = cfg.power_mode.unwrap_or(PowerMode::Polar);
    let d = cfg.degree();
    let max_iter = cfg.max_iter.unwrap_or(200);
    let bound = cfg.bound.unwrap_or(mandelstuff::matrixstuff::DEFAULT_BOUND);
    if bound.is_nan() || bound < 2.0 {
        return Err(usage("bound must be at least 2"));
    }
    match cfg.method.as_deref().unwrap_or("single") {
        "single" => {
            let [m11, m12, m21, m22] = cfg.c_coords::<4>()?;
            let c = Mat2::new(m11, m12, m21, m22);
            let r = matrix_classify(c, mode, d, max_iter, bound);
            let nilpotent = c.det() == 0.0 && c.trace() == 0.0;
            let diagonal = m12 == 0.0 && m21 == 0.0;
            let result = json!({
                "verdict": r.verdict,
                "bounded": r.verdict.is_bounded(),
                "final_norm": r.final_norm,
                "nilpotent": nilpotent,
                "symmetric": c.is_symmetric(0.0),
                "diagonal_oracle": diagonal.then(|| diagonal_oracle(m11, m22)),
            });
            emit_report(cfg, "matrix_classify", result, started, exec)
        }
        "sweep" => {
            if mode != PowerMode::Polar || d != 2 {
                return Err(usage("the diagonal sweep compares polar-mode degree-2 classification"));
            }
            let [lo, hi] = cfg.range.unwrap_or([-2.5, 0.5]);
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(usage("range needs lo < hi"));
            }
            let (side, _) = cfg.res2()?;
            if side < 2 {
                return Err(usage("sweep side must be at least 2"));
            }
            let sweep = diagonal_sweep(lo, hi, side, max_iter, bound, exec);
            let measured = scalar_bounded_interval(lo, hi, 3500, max_iter);
            let step = (hi - lo) / 3500.0;
            let matches_paper = measured.is_some_and(|(a, b)| {
                (a - PAPER_EIGEN_INTERVAL[0]).abs() <= step && (b - PAPER_EIGEN_INTERVAL[1]).abs() <= step
            });
            let result = json!({
                "sweep": sweep,
                "measured_scalar_interval": measured.map(|(a, b)| [a, b]),
                "expected_scalar_interval": [-2.0, 0.25],
                "paper_eigenvalue_interval": PAPER_EIGEN_INTERVAL,
                "paper_interval_matches": matches_paper,
            });
            emit_report(cfg, "matrix_diagonal_sweep", result, started, exec)
        }
        other => Err(usage(format!("unknown matrix method {other:?} (single, sweep)"))),
    }
}

fn components(cfg: &RunConfig, exec: &Executor) -> Result<(), CliError> {
    let started = Instant::now();
    let adjacency = |default: Adjacency| -> Result<Adjacency, CliError> {
        match cfg.adjacency.as_deref() {
            None => Ok(default),
            Some(s) => Adjacency::parse(s).ok_or_else(|| usage(format!("unknown adjacency {s:?}"))),
        }
    };
    let ring = cfg.ring().to_string();
    let (tag, census, extra) = match ring.as_str() {
        "zp2" | "gfp2" | "zn" => {
            let fr = finite_ring(cfg)?;
            let report = enumerate_mandelstuff(fr, finite_exponent(cfg), cfg.escape_point.unwrap_or(1), exec)
                .map_err(finite_error)?;
            let census = torus_components(&fr, &report.members).map_err(usage)?;
            ("finite_torus_census", census, json!({ "member_count": report.member_count }))
        }
        _ => {
            let dims = cfg.resolution.as_ref().map_or(if ring == "complex" { 2 } else { 3 }, Vec::len);
            let mut cfg = cfg.clone();
            if cfg.resolution.is_none() {
                cfg.resolution = Some(if dims == 2 { vec![512, 512] } else { vec![64, 64, 64] });
            }
            if dims == 2 {
                let grid = plane_grid(&cfg, exec)?;
                let census = label_components(&grid, adjacency(Adjacency::Four)?).map_err(usage)?;
                ("raster_census", census, json!({}))
            } else {
                let volume = space_volume(&cfg, exec)?;
                let census = label_volume(&volume, adjacency(Adjacency::Six)?).map_err(usage)?;
                ("volume_census", census, json!({}))
            }
        }
    };
    let mut result = serde_json::to_value(&census).expect("census serializes");
    if let (Value::Object(map), Value::Object(extra)) = (&mut result, extra) {
        map.insert("connected".into(), json!(census.component_count == 1));
        map.extend(extra);
    }
    emit_report(cfg, tag, result, started, exec)
}

fn pollard(cfg: &RunConfig, exec: &Executor) -> Result<(), CliError> {
    let started = Instant::now();
    let n = cfg.n.ok_or_else(|| usage("--n is required"))?;
    let c0 = cfg.rho_c.unwrap_or(1);
    let x0 = cfg.x0.unwrap_or(2);
    let retries = cfg.retries.unwrap_or(0);
    let mut result = json!({ "n": n, "status": "failure", "factor": null, "attempts": 0 });
    for attempt in 0..=retries {
        let c = c0.wrapping_add(attempt as u64);
        result["attempts"] = json!(attempt + 1);
        result["c"] = json!(c);
        match pollard_rho(n, c, x0) {
            Ok(f) => {
                result["status"] = json!("factor");
                result["factor"] = json!(f);
                result["cofactor"] = json!(n / f);
                break;
            }
            Err(PollardError::Failure) => {}
            Err(e @ PollardError::TooSmall(_)) => return Err(usage(e)),
        }
    }
    if result["status"] == "failure" {
        eprintln!("pollard rho found no factor of {n}; retry with another c");
    }
    emit_report(cfg, "pollard_rho_floyd", result, started, exec)
}
