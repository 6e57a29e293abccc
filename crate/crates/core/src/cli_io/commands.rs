//! Command bodies shared by the binary and the tests. Each validates its
//! config, runs, and writes `<out>/<verb>.csv` with a manifest beside it.

use std::path::PathBuf;

use serde_json::json;

use super::config::{RunConfig, Verb};
use super::csv::CsvTable;
use super::manifest::RunManifest;
use crate::anyon2d::{two_anyon_spectrum, LanczosOptions, SpectrumOptions, TruncationPolicy};
use crate::calogero_reference::{
    calogero_n2_levels, calogero_relative_oracle, CalogeroParams, RadialGrid,
};
use crate::energy_functionals::{
    channel_quotient_exact, energy2d_trial, hardy_quotient_mc, many_anyon_hardy_constant,
    shipped_trials, three_body_quotient_mc, HardyTrial, TrialState2D,
};
use crate::error::Result;
use crate::experiments::{epsilon_sweep, overlap_study, OverlapOptions};
use crate::tonks_girardeau::tg_levels;

/// Default 4D quadrature order of the energy identity check.
pub const DECOUPLING_ORDER: usize = 20;
/// Relative tolerance of the energy identity, scaled by `1 + N/ε`.
pub const DECOUPLING_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct RunReport {
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub table: CsvTable,
    /// False when a convergence or identity check failed.
    pub ok: bool,
}

pub fn spectrum_options(c: &RunConfig) -> SpectrumOptions {
    let policy = match (c.n_max, c.m_max) {
        (Some(n_max), Some(m_max)) => TruncationPolicy::Fixed { n_max, m_max },
        _ => TruncationPolicy::Auto,
    };
    let defaults = LanczosOptions::default();
    SpectrumOptions {
        policy,
        omega_b: c.omega_b,
        radial_order: c.order.unwrap_or(0),
        lanczos: LanczosOptions {
            tol: c.tol(),
            seed: c.seed.unwrap_or(defaults.seed),
            ..defaults
        },
        check_doubling: c.check_doubling.unwrap_or(true),
        cache_dir: Some(c.cache_dir()),
        ..SpectrumOptions::default()
    }
}

fn finish(
    verb: Verb,
    cfg: &RunConfig,
    table: CsvTable,
    mut manifest: RunManifest,
) -> Result<RunReport> {
    let dir = cfg.out_dir();
    let csv = dir.join(format!("{}.csv", verb.name()));
    let bytes = table.write(&csv)?;
    manifest.record_output(&csv, &bytes);
    let mpath = dir.join(format!("{}.manifest.json", verb.name()));
    manifest.write(&mpath)?;
    Ok(RunReport {
        csv,
        manifest: mpath,
        table,
        ok: manifest.all_converged,
    })
}

pub fn run(verb: Verb, cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate(verb)?;
    match verb {
        Verb::Tg => cmd_tg(cfg),
        Verb::Spectrum2d => cmd_spectrum2d(cfg),
        Verb::Sweep => cmd_sweep(cfg),
        Verb::Overlap => cmd_overlap(cfg),
        Verb::Hardy => cmd_hardy(cfg),
        Verb::Decoupling => cmd_decoupling(cfg),
        Verb::Calogero => cmd_calogero(cfg),
    }
}

pub fn cmd_tg(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate(Verb::Tg)?;
    let mut m = RunManifest::new(Verb::Tg.name(), cfg);
    let (n, k) = (cfg.particles(), cfg.k());
    m.resolved = json!({ "n": n, "k": k });
    let levels = m.stage("enumerate", || tg_levels(n, k))?;
    let mut t = CsvTable::new(&["k", "energy", "orbitals"]);
    for (i, s) in levels.iter().enumerate() {
        let orb: Vec<String> = s
            .orbitals
            .orbitals()
            .iter()
            .map(|o| o.to_string())
            .collect();
        t.push(vec![
            (i + 1).into(),
            (s.energy as i64).into(),
            orb.join(" ").into(),
        ]);
    }
    finish(Verb::Tg, cfg, t, m)
}

pub fn cmd_spectrum2d(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate(Verb::Spectrum2d)?;
    let mut m = RunManifest::new(Verb::Spectrum2d.name(), cfg);
    let opts = spectrum_options(cfg);
    let (alpha, eps, k) = (cfg.alpha(), cfg.epsilon(), cfg.k());
    let sol = m.stage("solve", || two_anyon_spectrum(alpha, eps, k, &opts))?;
    m.resolved = json!({
        "alpha": alpha, "epsilon": eps, "k": k,
        "n_max": sol.problem.n_max, "m_max": sol.problem.m_max, "omega_b": sol.problem.omega_b,
        "radial_order": sol.problem.quadrature_order(), "tol": opts.lanczos.tol,
        "check_doubling": opts.check_doubling, "matvecs": sol.relative.matvecs,
    });
    m.cache_hits = sol.cache_hits;
    m.seeds.push(opts.lanczos.seed);
    let mut t = CsvTable::new(&[
        "alpha",
        "epsilon",
        "k",
        "lambda2d",
        "gap",
        "cm_p",
        "cm_q",
        "rel_idx",
        "rel_energy",
        "base_value",
        "residual",
        "solver_converged",
        "truncation_converged",
    ]);
    for (i, lv) in sol.levels.iter().enumerate() {
        m.flag(format!("k={}", i + 1), lv.solver_converged);
        t.push(vec![
            alpha.into(),
            eps.into(),
            (i + 1).into(),
            lv.value.into(),
            (lv.value - 2.0 / eps).into(),
            lv.cm.0.into(),
            lv.cm.1.into(),
            lv.rel_index.into(),
            lv.rel_energy.into(),
            lv.base_value.into(),
            lv.residual.into(),
            lv.solver_converged.into(),
            lv.truncation_converged.into(),
        ]);
    }
    finish(Verb::Spectrum2d, cfg, t, m)
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate(Verb::Sweep)?;
    let mut m = RunManifest::new(Verb::Sweep.name(), cfg);
    let opts = spectrum_options(cfg);
    let (alpha, eps, k) = (cfg.alpha(), cfg.eps_list(), cfg.k());
    let rows = m.stage("sweep", || epsilon_sweep(alpha, &eps, k, &opts))?;
    m.resolved = json!({
        "alpha": alpha, "eps_list": eps, "k": k, "tol": opts.lanczos.tol,
        "check_doubling": opts.check_doubling,
        "truncations": eps.iter().map(|&e| opts.problem(alpha, e).map(|p| (p.n_max, p.m_max)).ok()).collect::<Vec<_>>(),
    });
    m.seeds.push(opts.lanczos.seed);
    let mut t = CsvTable::new(&[
        "alpha",
        "epsilon",
        "k",
        "lambda2d",
        "gap",
        "lambda1d",
        "residual",
        "cm_p",
        "cm_q",
        "rel_idx",
        "converged",
    ]);
    for r in &rows {
        m.flag(format!("eps={},k={}", r.epsilon, r.k), r.converged);
        t.push(vec![
            r.alpha.into(),
            r.epsilon.into(),
            r.k.into(),
            r.lambda2d.into(),
            r.gap.into(),
            r.lambda1d.into(),
            r.residual.into(),
            r.cm_p.into(),
            r.cm_q.into(),
            r.rel_idx.into(),
            r.converged.into(),
        ]);
    }
    finish(Verb::Sweep, cfg, t, m)
}

pub fn cmd_overlap(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate(Verb::Overlap)?;
    let mut m = RunManifest::new(Verb::Overlap.name(), cfg);
    let mut spectrum = spectrum_options(cfg);
    spectrum.check_doubling = cfg.check_doubling.unwrap_or(false);
    let opts = OverlapOptions {
        spectrum,
        with_projection: cfg.projection.unwrap_or(true),
        ..OverlapOptions::default()
    };
    let (alpha, eps, k) = (cfg.alpha(), cfg.eps_list(), cfg.k());
    let rows = m.stage("overlap", || overlap_study(alpha, &eps, k, &opts))?;
    m.resolved = json!({
        "alpha": alpha, "eps_list": eps, "k": k, "x_order": opts.x_order, "r_max": opts.r_max,
        "grid_half_width": opts.grid.half_width, "grid_points": opts.grid.points, "y_order": opts.y_order,
        "with_projection": opts.with_projection,
    });
    m.seeds.push(opts.spectrum.lanczos.seed);
    let mut t = CsvTable::new(&[
        "alpha",
        "epsilon",
        "k",
        "overlap",
        "l2_dist",
        "h1_dist_diag",
        "control_overlap",
        "diag_max",
        "symmetry_error",
    ]);
    for r in &rows {
        t.push(vec![
            r.alpha.into(),
            r.epsilon.into(),
            r.k.into(),
            r.overlap.into(),
            r.l2_dist.into(),
            r.h1_dist_diag.into(),
            r.control_overlap.into(),
            r.diag_max.into(),
            r.symmetry_error.into(),
        ]);
    }
    finish(Verb::Overlap, cfg, t, m)
}

fn trial_label(t: &HardyTrial) -> String {
    match *t {
        HardyTrial::Jastrow {
            particles,
            beta,
            a,
            c,
            ..
        } => format!("jastrow n={particles} beta={beta} a={a} c={c}"),
        HardyTrial::Channel { m, s, b, c, .. } => format!("channel m={m} s={s} b={b} c={c}"),
    }
}

/// Shipped trial family plus the three-body Gaussian reference quotient.
/// A row passes when `estimate >= bound - 3 stderr` and the relative
/// standard error is below 5%.
pub fn cmd_hardy(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate(Verb::Hardy)?;
    let mut m = RunManifest::new(Verb::Hardy.name(), cfg);
    let (samples, seed) = (cfg.samples(), cfg.seed());
    let trials: Vec<HardyTrial> = shipped_trials()
        .into_iter()
        .filter(|t| cfg.alpha.is_none_or(|a| t.alpha() == a))
        .filter(|t| cfg.n.is_none_or(|n| t.particles() == n))
        .collect();
    m.resolved = json!({ "samples": samples, "seed": seed, "trials": trials.len() });
    m.seeds.push(seed);
    let mut t = CsvTable::new(&[
        "trial",
        "particles",
        "alpha",
        "estimate",
        "stderr",
        "bound",
        "exact",
        "flagged",
        "pass",
    ]);
    let add = |t: &mut CsvTable,
               m: &mut RunManifest,
               label: String,
               n: usize,
               alpha: f64,
               e: &crate::energy_functionals::HardyEstimate,
               bound: f64,
               exact: f64| {
        let pass = e.estimate >= bound - 3.0 * e.stderr && e.stderr < 0.05 * e.estimate.abs();
        m.flag(label.clone(), pass);
        t.push(vec![
            label.into(),
            n.into(),
            alpha.into(),
            e.estimate.into(),
            e.stderr.into(),
            bound.into(),
            exact.into(),
            e.flagged.into(),
            pass.into(),
        ]);
    };
    for tr in &trials {
        let est = m.stage("mc", || hardy_quotient_mc(tr, samples, seed))?;
        let bound = many_anyon_hardy_constant(tr.particles(), tr.alpha())?;
        let exact = match tr {
            HardyTrial::Channel { .. } => channel_quotient_exact(tr)?,
            HardyTrial::Jastrow { .. } => f64::NAN,
        };
        add(
            &mut t,
            &mut m,
            trial_label(tr),
            tr.particles(),
            tr.alpha(),
            &est,
            bound,
            exact,
        );
    }
    if cfg.n.is_none_or(|n| n == 3) && cfg.alpha.is_none() {
        let est = m.stage("three-body", || three_body_quotient_mc(0.5, samples, seed))?;
        add(
            &mut t,
            &mut m,
            "three-body gaussian a=0.5".into(),
            3,
            f64::NAN,
            &est,
            3.0,
            9.0,
        );
    }
    finish(Verb::Hardy, cfg, t, m)
}

/// Energy identity for the TG levels `1..=k` at the configured α and ε.
pub fn cmd_decoupling(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate(Verb::Decoupling)?;
    let mut m = RunManifest::new(Verb::Decoupling.name(), cfg);
    let (alpha, eps, k) = (cfg.alpha(), cfg.epsilon(), cfg.k());
    let order = cfg.order.unwrap_or(DECOUPLING_ORDER);
    m.resolved =
        json!({ "alpha": alpha, "epsilon": eps, "k": k, "order": order, "tol": DECOUPLING_TOL });
    let states = tg_levels(2, k)?;
    let mut t = CsvTable::new(&[
        "alpha",
        "epsilon",
        "k",
        "energy2d",
        "predicted",
        "abs_err",
        "tolerance",
        "pass",
    ]);
    for (i, s) in states.into_iter().enumerate() {
        let trial = TrialState2D::new(s, alpha, eps)?;
        let e = m.stage("quadrature", || energy2d_trial(&trial, order))?;
        let pred = trial.predicted_energy();
        let tol = DECOUPLING_TOL * (1.0 + 2.0 / eps);
        let err = (e.total - pred).abs();
        m.flag(format!("k={}", i + 1), err < tol);
        t.push(vec![
            alpha.into(),
            eps.into(),
            (i + 1).into(),
            e.total.into(),
            pred.into(),
            err.into(),
            tol.into(),
            (err < tol).into(),
        ]);
    }
    finish(Verb::Decoupling, cfg, t, m)
}

pub fn cmd_calogero(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate(Verb::Calogero)?;
    let mut m = RunManifest::new(Verb::Calogero.name(), cfg);
    let (alpha, k) = (cfg.alpha(), cfg.k());
    let p = CalogeroParams::new(alpha)?;
    let grid = RadialGrid::default();
    m.resolved = json!({ "alpha": alpha, "k": k, "coupling": p.coupling(), "nu": p.nu(), "r_max": grid.r_max, "cells": grid.cells });
    let levels = calogero_n2_levels(p, k);
    let oracle = m.stage("oracle", || calogero_relative_oracle(p, k, grid))?;
    let tg = tg_levels(2, k)?;
    let mut t = CsvTable::new(&[
        "alpha",
        "k",
        "calogero",
        "tg",
        "difference",
        "relative_exact",
        "relative_oracle",
    ]);
    for i in 0..k {
        let rel = p.relative_level(i);
        let ok = (oracle[i] - rel).abs() < 1e-4 * rel;
        m.flag(format!("oracle n={i}"), ok);
        let tg_e = tg[i].energy as f64;
        t.push(vec![
            alpha.into(),
            (i + 1).into(),
            levels[i].into(),
            tg_e.into(),
            (levels[i] - tg_e).into(),
            rel.into(),
            oracle[i].into(),
        ]);
    }
    finish(Verb::Calogero, cfg, t, m)
}
