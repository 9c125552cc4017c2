//! Acceptance criteria 1-12. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use mandelstuff::algebra::{complex_step, Mat2, PowerMode};
use mandelstuff::area::{analytic_lower_bound, cardioid_or_p2, grid_upper_bound, mc_area, BOX_AREA, PUBLISHED_BOUNDS};
use mandelstuff::dynamics::{
    classify, green_estimate, lemniscate_poly, phi_magnitude, render_grid, render_voxels, Box3, BulbWn, ComplexMap,
    HopfMap, QuaternionMap,
};
use mandelstuff::io::{write_pgm, write_stl, write_voxels};
use mandelstuff::julia::{forward_invariance_violations, julia_inverse_iteration};
use mandelstuff::matrixstuff::{diagonal_sweep, matrix_classify, DEFAULT_BOUND};
use mandelstuff::rng::SplitMix64;
use mandelstuff::topology::{label_components, Adjacency};
use mandelstuff::{Complex, EscapeConfig, Executor, Hopf4, Quaternion, Triplex, VoxelVolume, Window};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mandelstuff")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

/// Runs the CLI with a fixed worker count and returns stdout parsed as JSON.
fn cli_json(args: &[&str], threads: usize) -> Result<Value, String> {
    let out = Command::new(bin())
        .args(args)
        .env("MANDELSTUFF_THREADS", threads.to_string())
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn cli_run(args: &[&str], threads: usize) -> Result<(), String> {
    let out = Command::new(bin())
        .args(args)
        .env("MANDELSTUFF_THREADS", threads.to_string())
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())
}

fn random_disk(rng: &mut SplitMix64, r: f64) -> Complex {
    loop {
        let z = Complex::new(r * (2.0 * rng.next_f64() - 1.0), r * (2.0 * rng.next_f64() - 1.0));
        if z.norm() <= r {
            return z;
        }
    }
}

fn c1_frobenius_lemma() -> Outcome {
    let mut counts = Vec::new();
    for p in [3u64, 5, 7, 11, 13] {
        let started = Instant::now();
        let report = cli_json(&["finite", "--ring", "zp2", "--p", &p.to_string(), "--frobenius", "--escape", "1"], 0)?;
        let secs = started.elapsed().as_secs_f64();
        let count = report["result"]["member_count"].as_u64().ok_or("missing member_count")?;
        ensure(count == p * p - p + 1, || format!("p={p}: member_count {count}, expected {}", p * p - p + 1))?;
        ensure(secs < 1.0, || format!("p={p}: {secs:.2} s"))?;
        if p == 3 {
            let members: BTreeSet<u64> = report["result"]["members"]
                .as_array()
                .ok_or("missing members")?
                .iter()
                .filter_map(Value::as_u64)
                .collect();
            ensure(members == BTreeSet::from([0, 3, 4, 5, 6, 7, 8]), || format!("p=3 members {members:?}"))?;
        }
        counts.push(format!("p={p}:{count}"));
    }
    Ok(counts.join(" "))
}

fn c2_monte_carlo() -> Outcome {
    let started = Instant::now();
    let report = cli_json(&["area", "--method", "mc", "--samples", "1000000", "--max-iter", "999", "--seed", "1"], 1)?;
    let secs = started.elapsed().as_secs_f64();
    let mut details = Vec::new();
    let check = |est: f64, se: f64, seed: u64| -> Result<String, String> {
        ensure((1.40..=1.60).contains(&est), || format!("seed {seed}: estimate {est}"))?;
        ensure((PUBLISHED_BOUNDS.0..=PUBLISHED_BOUNDS.1).contains(&est), || {
            format!("seed {seed}: {est} outside bounds")
        })?;
        ensure(se < 0.005, || format!("seed {seed}: std_error {se}"))?;
        Ok(format!("seed {seed}: {est:.4} ± {se:.4}"))
    };
    let est = report["result"]["estimate"].as_f64().ok_or("missing estimate")?;
    let se = report["result"]["std_error"].as_f64().ok_or("missing std_error")?;
    details.push(check(est, se, 1)?);
    ensure(secs < 30.0, || format!("single-threaded run took {secs:.1} s"))?;
    let other = mc_area(1_000_000, 999, 0x5eed_2026, &Executor::auto());
    details.push(check(other.estimate, other.std_error.unwrap(), 0x5eed_2026)?);
    Ok(format!("{}; 1 thread {secs:.1} s", details.join(", ")))
}

fn c3_analytic_lower_bound() -> Outcome {
    let value = analytic_lower_bound().estimate;
    let target = 7.0 * PI / 16.0;
    ensure((value - target).abs() <= 4.0 * f64::EPSILON * target, || format!("{value} vs {target}"))?;
    let mut rng = SplitMix64::new(3);
    let cfg = EscapeConfig::new(10_000);
    let members: Vec<Complex> =
        std::iter::repeat_with(|| Complex::new(-2.0 + 2.5 * rng.next_f64(), -1.0 + 2.0 * rng.next_f64()))
            .filter(|&c| cardioid_or_p2(c))
            .take(10_000)
            .collect();
    let map = ComplexMap::new(2);
    let escaped = Executor::auto()
        .map(members.len(), |k| !classify(&map, members[k], &cfg).verdict.is_bounded())
        .into_iter()
        .filter(|&e| e)
        .count();
    ensure(escaped == 0, || format!("{escaped} of 10^4 members escaped"))?;
    Ok(format!("7π/16 = {value:.15}; 10^4 members bounded at N=10^4"))
}

fn c4_upper_bound_chain() -> Outcome {
    let exec = Executor::auto();
    let lower = 7.0 * PI / 16.0;
    let mut prev = f64::INFINITY;
    let mut values = Vec::new();
    for n in [4, 8, 16, 32] {
        let a = grid_upper_bound(2048, n, &exec).estimate;
        ensure(a <= BOX_AREA && a <= prev && a >= lower, || format!("N={n}: {a} (previous {prev})"))?;
        values.push(format!("N={n}:{a:.4}"));
        prev = a;
    }
    Ok(values.join(" "))
}

fn c5_slice_equalities() -> Outcome {
    let exec = Executor::auto();
    let cfg = EscapeConfig::new(200);
    let w = Window::new(-2.0, 1.0, -1.5, 1.5);
    let res = (256, 256);
    for d in [2, 8] {
        let complex = render_grid(&ComplexMap::new(d), Complex::new, &cfg, w, res, &exec);
        let bulb = render_grid(&BulbWn::new(d), |x, y| Triplex::new(x, y, 0.0), &cfg, w, res, &exec);
        let hopf = render_grid(&HopfMap::new(d), |x, y| Hopf4::new(x, y, 0.0, 0.0), &cfg, w, res, &exec);
        let quat = render_grid(&QuaternionMap::new(d), |x, y| Quaternion::new(x, y, 0.0, 0.0), &cfg, w, res, &exec);
        ensure(bulb.data == complex.data, || format!("bulb-WN slice differs at d={d}"))?;
        ensure(hopf.data == complex.data, || format!("Hopf slice differs at d={d}"))?;
        ensure(quat.data == complex.data, || format!("quaternion slice differs at d={d}"))?;
    }
    Ok("bulb-WN, Hopf, quaternion slices bit-identical at d=2,8".into())
}

fn random_ball(rng: &mut SplitMix64, lo: f64, hi: f64) -> Triplex {
    loop {
        let p = Triplex::new(
            hi * (2.0 * rng.next_f64() - 1.0),
            hi * (2.0 * rng.next_f64() - 1.0),
            hi * (2.0 * rng.next_f64() - 1.0),
        );
        let r = p.norm();
        if r > lo && r <= hi {
            return p;
        }
    }
}

fn c6_shell_bounds() -> Outcome {
    let map = BulbWn::new(8);
    let cfg = EscapeConfig::new(1000);
    let mut rng = SplitMix64::new(8);
    let inner: Vec<Triplex> = (0..10_000).map(|_| random_ball(&mut rng, 0.0, 0.49)).collect();
    let outer: Vec<Triplex> = (0..10_000).map(|_| random_ball(&mut rng, 2.0, 3.0)).collect();
    let exec = Executor::auto();
    let inner_out = exec.map(inner.len(), |k| !classify(&map, inner[k], &cfg).verdict.is_bounded());
    let outer_in = exec.map(outer.len(), |k| classify(&map, outer[k], &cfg).verdict.is_bounded());
    let a = inner_out.iter().filter(|&&b| b).count();
    let b = outer_in.iter().filter(|&&b| b).count();
    ensure(a == 0 && b == 0, || format!("{a} inner escaped, {b} outer bounded"))?;
    Ok("|c|≤0.49 all bounded, |c|∈(2,3] all escaped (10^4 each, N=10^3)".into())
}

fn c7_green() -> Outcome {
    let mut rng = SplitMix64::new(7);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 100 {
        let c = random_disk(&mut rng, 2.0);
        let z = random_disk(&mut rng, 10.0);
        if z.norm() <= 3.0 {
            continue;
        }
        n += 1;
        let g = green_estimate(c, z, 1000);
        let g1 = green_estimate(c, complex_step(z, 2, c), 1000);
        worst = worst.max((g1 - 2.0 * g).abs());
    }
    ensure(worst < 1e-6, || format!("max |G(f(z)) - 2G(z)| = {worst:e}"))?;
    let g0 = green_estimate(Complex::ZERO, Complex::new(4.0, 0.0), 1000);
    ensure((g0 - 4f64.ln()).abs() < 1e-9, || format!("G_0(4) = {g0}"))?;
    let mut ratios = Vec::new();
    for k in 0..8 {
        let t = 2.0 * PI * k as f64 / 8.0;
        let c = Complex::new(1000.0 * t.cos(), 1000.0 * t.sin());
        let ratio = phi_magnitude(c, 1000) / 1000.0;
        ensure((0.99..=1.01).contains(&ratio), || format!("|Φ(c)|/|c| = {ratio} at arg {t}"))?;
        ratios.push(ratio);
    }
    Ok(format!(
        "recursion error {worst:.1e}; |Φ|/|c| ∈ [{:.5}, {:.5}]",
        ratios.iter().cloned().fold(f64::INFINITY, f64::min),
        ratios.iter().cloned().fold(0.0, f64::max)
    ))
}

fn c8_julia() -> Outcome {
    let circle = julia_inverse_iteration(Complex::ZERO, 100_000, 1, 32);
    let dev = circle.points.iter().map(|p| (p.norm() - 1.0).abs()).fold(0.0, f64::max);
    ensure(dev < 1e-9, || format!("c=0: max ||p|-1| = {dev:e}"))?;
    let segment = julia_inverse_iteration(Complex::new(-2.0, 0.0), 100_000, 1, 32);
    let im = segment.points.iter().map(|p| p.im.abs()).fold(0.0, f64::max);
    ensure(im < 1e-6, || format!("c=-2: max |Im p| = {im:e}"))?;
    for cloud in [&circle, &segment] {
        let bad = forward_invariance_violations(cloud, 1e-6);
        ensure(bad.is_empty(), || format!("c={:?}: {} forward-invariance violations", cloud.c, bad.len()))?;
    }
    Ok(format!("c=0 dev {dev:.1e}; c=-2 |Im| {im:.1e}; invariant at ε=1e-6"))
}

fn c9_connectivity() -> Outcome {
    let grid = render_grid(
        &ComplexMap::new(2),
        Complex::new,
        &EscapeConfig::new(500),
        Window::new(-2.0, 1.0, -1.5, 1.5),
        (512, 512),
        &Executor::auto(),
    );
    let census = label_components(&grid, Adjacency::Four).map_err(|e| e.to_string())?;
    ensure(census.largest_fraction >= 0.99, || format!("largest_fraction {}", census.largest_fraction))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let args = |out: &Path| -> Vec<String> {
        [
            "components",
            "--ring",
            "bulb-wn",
            "--degree",
            "2",
            "--res",
            "128x128x128",
            "--max-iter",
            "100",
            "--adjacency",
            "6",
            "--box",
            "-2,1,-1.5,1.5,-1.5,1.5",
            "--out",
        ]
        .iter()
        .map(|s| s.to_string())
        .chain([out.display().to_string()])
        .collect()
    };
    let mut results = Vec::new();
    let mut report = Value::Null;
    for (k, threads) in [1usize, 8, 1].into_iter().enumerate() {
        let out = dir.path().join(format!("census{k}.json"));
        let started = Instant::now();
        let argv = args(&out);
        cli_run(&argv.iter().map(String::as_str).collect::<Vec<_>>(), threads)?;
        let secs = started.elapsed().as_secs_f64();
        ensure(secs < 60.0, || format!("128³ census took {secs:.1} s with {threads} thread(s)"))?;
        report = serde_json::from_slice(&std::fs::read(&out).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        for key in ["config", "tool_version", "method", "result"] {
            ensure(report.get(key).is_some(), || format!("report lacks {key}"))?;
        }
        results.push(serde_json::to_vec(&report["result"]).unwrap());
    }
    ensure(results.windows(2).all(|w| w[0] == w[1]), || "census differs across runs or thread counts".into())?;
    let r = &report["result"];
    Ok(format!(
        "2D largest_fraction {:.4}; Mandelbug 128³: {} components, largest_fraction {:.4} (reported, not asserted)",
        census.largest_fraction,
        r["component_count"],
        r["largest_fraction"].as_f64().unwrap_or(f64::NAN)
    ))
}

/// The paper's expansion of `|p₂(x + iy)|²`.
fn paper_p2(x: f64, y: f64) -> f64 {
    let terms: [(f64, i32, i32); 24] = [
        (1.0, 8, 0),
        (4.0, 7, 0),
        (4.0, 6, 2),
        (6.0, 6, 0),
        (12.0, 5, 2),
        (6.0, 5, 0),
        (6.0, 4, 4),
        (14.0, 4, 2),
        (5.0, 4, 0),
        (12.0, 3, 4),
        (4.0, 3, 2),
        (2.0, 3, 0),
        (4.0, 2, 6),
        (10.0, 2, 4),
        (2.0, 2, 2),
        (1.0, 2, 0),
        (4.0, 1, 6),
        (-2.0, 1, 4),
        (2.0, 1, 2),
        (1.0, 0, 8),
        (2.0, 0, 6),
        (-3.0, 0, 4),
        (1.0, 0, 2),
        (0.0, 0, 0),
    ];
    terms.iter().map(|&(k, a, b)| k * x.powi(a) * y.powi(b)).sum()
}

fn c10_polynomial() -> Outcome {
    let mut rng = SplitMix64::new(10);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (x, y) = (-2.0 + 3.0 * rng.next_f64(), -1.5 + 3.0 * rng.next_f64());
        let p = lemniscate_poly(2, Complex::new(x, y)).map_err(|e| e.to_string())?;
        let f = paper_p2(x, y);
        let rel = (p.norm_sqr() - f).abs() / f.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
    }
    ensure(worst < 1e-9, || format!("max relative error {worst:e}"))?;
    Ok(format!("max relative error {worst:.1e} over 10^3 points"))
}

fn c11_matrix() -> Outcome {
    let sweep = diagonal_sweep(-2.5, 0.5, 101, 10_000, DEFAULT_BOUND, &Executor::auto());
    ensure(sweep.disagree_outside_band == 0, || {
        format!("{} disagreements outside the boundary band", sweep.disagree_outside_band)
    })?;
    for c in [
        Mat2::new(0.0, 1.0, 0.0, 0.0),
        Mat2::new(1.0, 1.0, -1.0, -1.0),
        Mat2::new(2.0, -4.0, 1.0, -2.0),
        Mat2::new(0.0, 0.0, -3.0, 0.0),
    ] {
        let r = matrix_classify(c, PowerMode::Product, 2, 10_000, DEFAULT_BOUND);
        ensure(r.verdict.is_bounded(), || format!("nilpotent {c:?} escaped: {:?}", r.verdict))?;
    }
    Ok(format!(
        "{} agree, {} in-band disagreements, 0 outside; nilpotent product-mode c bounded",
        sweep.agree, sweep.disagree_in_band
    ))
}

fn c12_golden() -> Outcome {
    let read = |name: &str| std::fs::read(fixture(name)).map_err(|e| format!("{name}: {e}"));
    let pgm = read("complex16.pgm")?;
    let msvx = read("bulb8.msvx")?;
    let stl = read("voxel1.stl")?;
    for threads in [1, 8] {
        let exec = Executor::with_threads(threads);
        let grid = render_grid(
            &ComplexMap::new(2),
            Complex::new,
            &EscapeConfig::new(50),
            Window::new(-2.0, 1.0, -1.5, 1.5),
            (16, 16),
            &exec,
        );
        ensure(write_pgm(&grid) == pgm, || format!("PGM differs ({threads} workers)"))?;
        let vol =
            render_voxels(&BulbWn::new(8), Triplex::new, &EscapeConfig::new(10), Box3::cube(1.2), (8, 8, 8), &exec);
        ensure(write_voxels(&vol) == msvx, || format!("voxel file differs ({threads} workers)"))?;
    }
    let single = VoxelVolume::new(Box3::new(0.0, 1.0, 0.0, 1.0, 0.0, 1.0), 1, 1, 1, vec![1]);
    ensure(write_stl(&single) == stl, || "STL differs".into())?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for threads in [1, 8] {
        let p = dir.path().join(format!("m{threads}.pgm"));
        let v = dir.path().join(format!("b{threads}.msvx"));
        cli_run(
            &[
                "render2d",
                "--ring",
                "complex",
                "--degree",
                "2",
                "--window",
                "-2,1,-1.5,1.5",
                "--res",
                "16x16",
                "--max-iter",
                "50",
                "--out",
                p.to_str().unwrap(),
            ],
            threads,
        )?;
        cli_run(
            &[
                "render3d",
                "--ring",
                "bulb-wn",
                "--degree",
                "8",
                "--box",
                "-1.2,1.2,-1.2,1.2,-1.2,1.2",
                "--res",
                "8x8x8",
                "--max-iter",
                "10",
                "--out",
                v.to_str().unwrap(),
            ],
            threads,
        )?;
        ensure(std::fs::read(&p).map_err(|e| e.to_string())? == pgm, || {
            format!("CLI PGM differs ({threads} workers)")
        })?;
        ensure(std::fs::read(&v).map_err(|e| e.to_string())? == msvx, || {
            format!("CLI voxel file differs ({threads} workers)")
        })?;
    }
    Ok("PGM, voxel and STL byte-exact; 1 and 8 workers identical (library and CLI)".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("Frobenius lemma", c1_frobenius_lemma),
        ("Monte Carlo area", c2_monte_carlo),
        ("analytic lower bound", c3_analytic_lower_bound),
        ("grid upper-bound chain", c4_upper_bound_chain),
        ("slice equalities", c5_slice_equalities),
        ("M8 shell bounds", c6_shell_bounds),
        ("Green function", c7_green),
        ("Julia clouds", c8_julia),
        ("connectivity census", c9_connectivity),
        ("polynomial identity", c10_polynomial),
        ("matrix oracle agreement", c11_matrix),
        ("format golden files", c12_golden),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1} s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1} s]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
