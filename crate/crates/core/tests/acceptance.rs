//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use anyon_waveguide::anyon2d::{
    assemble_relative, lanczos_smallest, RelativeProblem, SpectrumOptions,
};
use anyon_waveguide::calogero_reference::{
    calogero_n2_levels, radial_fd_levels, CalogeroParams, RadialGrid,
};
use anyon_waveguide::energy_functionals::{
    c_alpha, c_alpha_exact, channel_bound_holds, energy2d_trial, hardy_quotient_mc,
    many_anyon_hardy_constant, many_anyon_hardy_constant_exact, min_even_distance_sq,
    shipped_trials, three_body_quotient_mc, Rational, TrialState2D,
};
use anyon_waveguide::experiments::{
    epsilon_sweep, gap_trend, overlap_study, OverlapOptions, SweepRow, DEFAULT_LADDER,
};
use anyon_waveguide::gauge_geometry::{grad_s, vector_potentials, Configuration2D, Point2};
use anyon_waveguide::tonks_girardeau::{tg_energy_quadrature, tg_levels};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn tg_exactness() -> Outcome {
    let e2: Vec<u64> = tg_levels(2, 6).unwrap().iter().map(|s| s.energy).collect();
    let e3: Vec<u64> = tg_levels(3, 1).unwrap().iter().map(|s| s.energy).collect();
    let states = tg_levels(2, 3).unwrap();
    let worst = states
        .iter()
        .map(|s| (tg_energy_quadrature(s, 24).unwrap() - s.energy as f64).abs())
        .fold(0.0, f64::max);
    let pass = e2 == [4, 6, 8, 8, 10, 10] && e3 == [9] && worst < 1e-8;
    outcome(
        pass,
        format!("N=2 {e2:?}, N=3 {e3:?}, quadrature max error {worst:.2e}"),
    )
}

fn gauge_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        let mut done = 0;
        while done < 1000 {
            let pts: Vec<Point2<f64>> = (0..n)
                .map(|_| Point2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
                .collect();
            // off-diagonal sample set: every pair separated in x
            if (0..n).any(|i| (i + 1..n).any(|j| (pts[i].x - pts[j].x).abs() < 0.05)) {
                continue;
            }
            let cfg = Configuration2D::new(pts);
            let g = grad_s(&cfg).unwrap();
            let a = vector_potentials(&cfg).unwrap();
            for (u, v) in g.iter().zip(&a) {
                worst = worst.max((u.x - v.x).abs()).max((u.y - v.y).abs());
            }
            done += 1;
        }
    }
    outcome(
        worst < 1e-12,
        format!("max |grad S - A| = {worst:.2e} over 3000 configurations"),
    )
}

fn energy_decoupling() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for &alpha in &[0.3, 0.5, 1.0, 1.5] {
        for &eps in &[1.0, 0.5, 0.1] {
            for psi in tg_levels(2, 2).unwrap() {
                let t = TrialState2D::new(psi, alpha, eps).unwrap();
                let e = energy2d_trial(&t, 20).unwrap();
                let err = (e.total - t.predicted_energy()).abs();
                let rel = err / (1.0 + 2.0 / eps);
                worst = worst.max(rel);
                pass &= rel < 1e-6;
            }
        }
    }
    outcome(
        pass,
        format!("max |E2D - (E1D + N/eps)| / (1 + N/eps) = {worst:.2e} over 24 cases"),
    )
}

fn isotropic_oracle() -> Outcome {
    let grid = RadialGrid::default();
    let mut worst_solver: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    for &alpha in &[0.25, 0.5, 1.0, 1.5] {
        let p = RelativeProblem::new(alpha, 1.0, 10, 20).unwrap();
        let m = assemble_relative(&p).unwrap();
        let got = lanczos_smallest(&m, 10, 1e-12, 20_000).unwrap().eigenvalues;
        let mut exact: Vec<(f64, usize, f64)> = Vec::new();
        for n in 0..=10usize {
            for m in (-20..=20i64).step_by(2) {
                let nu = (m as f64 + alpha).abs();
                exact.push((2.0 * (2.0 * n as f64 + nu + 1.0), n, nu));
            }
        }
        exact.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (g, &(e, n, nu)) in got.iter().zip(&exact) {
            worst_solver = worst_solver.max((g - e).abs());
            let fd = 2.0 * radial_fd_levels(nu, n + 1, grid).unwrap()[n];
            worst_fd = worst_fd.max((fd - e).abs());
        }
    }
    outcome(
        worst_solver < 1e-8 && worst_fd < 1e-4,
        format!("solver max error {worst_solver:.2e}, finite-difference oracle max error {worst_fd:.2e}"),
    )
}

const SWEEP_ALPHAS: [f64; 3] = [0.5, 1.0, 1.5];

fn sweeps() -> &'static Vec<(f64, Vec<SweepRow>)> {
    static S: OnceLock<Vec<(f64, Vec<SweepRow>)>> = OnceLock::new();
    S.get_or_init(|| {
        let opts = SpectrumOptions::default();
        SWEEP_ALPHAS
            .iter()
            .map(|&a| (a, epsilon_sweep(a, &DEFAULT_LADDER, 3, &opts).unwrap()))
            .collect()
    })
}

fn upper_bound() -> Outcome {
    let mut checked = 0;
    let mut unconverged = 0;
    let mut worst = f64::NEG_INFINITY;
    for (_, rows) in sweeps() {
        for r in rows {
            if !r.converged {
                unconverged += 1;
                continue;
            }
            checked += 1;
            worst = worst.max(r.gap - r.lambda1d);
        }
    }
    outcome(
        checked > 0 && worst <= 1e-6,
        format!("{checked} converged rows ({unconverged} unconverged), max gap - lambda1d = {worst:.3e}"),
    )
}

fn gap_trend_check() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (alpha, rows) in sweeps() {
        let k1: Vec<SweepRow> = rows.iter().filter(|r| r.k == 1).cloned().collect();
        let t = gap_trend(&k1, 1).unwrap();
        let last = k1.last().unwrap();
        let cal = calogero_n2_levels(CalogeroParams::new(*alpha).unwrap(), 1)[0];
        let sep = (last.gap - cal).abs();
        let ok_trend = t.monotone
            && t.increments_shrink
            && t.final_distance < 0.15
            && k1.iter().all(|r| r.converged);
        let ok_model = sep > 1.0;
        pass &= ok_trend && ok_model;
        parts.push(format!(
            "alpha={alpha}: gap(0.02)={:.6} |gap-4|={:.4} trend={} calogero={:.6} separation={:.4} model-selection={}",
            last.gap,
            t.final_distance,
            if ok_trend { "ok" } else { "FAIL" },
            cal,
            sep,
            if ok_model { "ok" } else { "FAIL" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn overlap_trend() -> Outcome {
    let opts = OverlapOptions {
        with_projection: false,
        ..OverlapOptions::default()
    };
    let rows = overlap_study(1.0, &DEFAULT_LADDER, 1, &opts).unwrap();
    let at = rows.iter().find(|r| r.epsilon == 0.05).unwrap();
    let monotone = rows.windows(2).all(|w| w[1].overlap >= w[0].overlap - 1e-3);
    let pass = at.overlap > 0.99 && monotone && at.control_overlap < at.overlap;
    let seq: Vec<String> = rows.iter().map(|r| format!("{:.6}", r.overlap)).collect();
    outcome(
        pass,
        format!(
            "overlaps [{}], at eps=0.05 overlap {:.8} vs no-phase control {:.6}",
            seq.join(", "),
            at.overlap,
            at.control_overlap
        ),
    )
}

fn hardy_suite() -> Outcome {
    // (a) C_α against 2 min(α, 2-α)² in exact arithmetic, and the many-body constant
    let mut exact_ok = true;
    for den in [7i64, 12, 24] {
        for num in 1..2 * den {
            let a = Rational::new(num, den);
            let d = if a < Rational::from_integer(1) {
                a
            } else {
                Rational::from_integer(2) - a
            };
            let c = Rational::from_integer(2) * d * d;
            exact_ok &= c_alpha_exact(a).unwrap() == c;
            for n in 2..=6usize {
                let nm1 = Rational::from_integer(n as i64 - 1);
                let nm2 = Rational::from_integer(n as i64 - 2);
                let want = Rational::from_integer(2) * c
                    / (nm1 * (Rational::from_integer(2) + Rational::from_integer(3) * nm2 * c));
                exact_ok &= many_anyon_hardy_constant_exact(n, a).unwrap() == want;
            }
        }
    }
    for &a in &[0.25, 0.5, 1.0, 1.5] {
        let r = Rational::new((a * 4.0) as i64, 4);
        exact_ok &= c_alpha(a).unwrap()
            == *c_alpha_exact(r).unwrap().numer() as f64
                / *c_alpha_exact(r).unwrap().denom() as f64;
    }
    // (b) channel bound
    let mut channel_ok = true;
    for num in 1..48 {
        let a = Rational::new(num, 24);
        for m in (-20..=20).step_by(2) {
            channel_ok &= channel_bound_holds(m, a);
        }
        channel_ok &= min_even_distance_sq(a) > Rational::from_integer(0);
    }
    // (c) Monte Carlo
    let mut mc_ok = true;
    let mut worst_rel: f64 = 0.0;
    let mut min_margin = f64::INFINITY;
    let trials = shipped_trials();
    for t in &trials {
        let e = hardy_quotient_mc(t, 1_000_000, 1).unwrap();
        let bound = many_anyon_hardy_constant(t.particles(), t.alpha()).unwrap();
        mc_ok &= e.estimate >= bound - 3.0 * e.stderr && e.stderr < 0.05 * e.estimate;
        worst_rel = worst_rel.max(e.stderr / e.estimate);
        min_margin = min_margin.min((e.estimate - bound) / e.stderr);
    }
    let three = three_body_quotient_mc(0.5, 1_000_000, 1).unwrap();
    mc_ok &= three.estimate >= 3.0 - 3.0 * three.stderr && three.stderr < 0.05 * three.estimate;
    worst_rel = worst_rel.max(three.stderr / three.estimate);
    outcome(
        exact_ok && channel_ok && mc_ok,
        format!(
            "constants {}, channel bound {}, {} trials: min (estimate - bound)/stderr {:.1}, max rel stderr {:.3}; three-body quotient {:.4} +- {:.4} vs 3",
            if exact_ok { "exact" } else { "MISMATCH" },
            if channel_ok { "holds" } else { "VIOLATED" },
            trials.len(),
            min_margin,
            worst_rel,
            three.estimate,
            three.stderr
        ),
    )
}

fn run_cli(out: &Path, cache: &Path, args: &[&str]) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_anyon"))
        .args(args)
        .args(["--threads", "1", "--seed", "7", "--out"])
        .arg(out)
        .arg("--cache-dir")
        .arg(cache)
        .output()
        .expect("spawn anyon");
    assert!(
        status.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&status.stderr)
    );
    let first = String::from_utf8(status.stdout).unwrap();
    std::fs::read(first.lines().next().unwrap()).unwrap()
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let runs: [&[&str]; 9] = [
        &["tg", "--n", "2", "--k", "6"],
        &[
            "decoupling",
            "--alpha",
            "0.5",
            "--epsilon",
            "0.1",
            "--k",
            "2",
        ],
        &[
            "spectrum2d",
            "--alpha",
            "0.25",
            "--epsilon",
            "1",
            "--k",
            "10",
        ],
        &["sweep", "--alpha", "0.5", "--k", "3"],
        &["sweep", "--alpha", "1.0", "--k", "3"],
        &["sweep", "--alpha", "1.5", "--k", "3"],
        &["overlap", "--alpha", "1.0", "--no-projection"],
        &["hardy", "--samples", "1000000"],
        &["calogero", "--alpha", "0.5", "--k", "5"],
    ];
    let mut same = 0;
    let mut differ = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let a = run_cli(&dir.path().join(format!("a{i}")), &cache, args);
        let b = run_cli(&dir.path().join(format!("b{i}")), &cache, args);
        if a == b && !a.is_empty() {
            same += 1;
        } else {
            differ.push(args[0]);
        }
    }
    outcome(
        differ.is_empty(),
        format!(
            "{same}/{} CSV outputs byte-identical on rerun (second run from cache){}",
            runs.len(),
            if differ.is_empty() {
                String::new()
            } else {
                format!(", differing: {differ:?}")
            }
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("tg exactness", tg_exactness),
        ("gauge identity", gauge_identity),
        ("energy decoupling", energy_decoupling),
        ("isotropic oracle", isotropic_oracle),
        ("sweep upper bound", upper_bound),
        ("gap trend and model selection", gap_trend_check),
        ("overlap trend", overlap_trend),
        ("hardy suite", hardy_suite),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let o = f();
        let secs = t0.elapsed().as_secs_f64();
        failed += !o.pass as usize;
        println!(
            "criterion {} {}: {} ({:.1} s) {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            secs,
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
