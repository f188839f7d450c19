//! Named verification suites. Output is always JSON; the process exits 0
//! iff every check of the requested suite passes, 4 otherwise.

use crate::output::{emit, Meta};
use crate::{resolve_seed, usage_err, CliError, CliResult, EXIT_VERIFY};
use clap::Args;
use ksdiff_core::fracops::{self, StretchedOrder};
use ksdiff_core::kilbas_saigo::{ks_bounds, KSParams, KsEvaluator};
use ksdiff_core::pearson_spectral::{
    residual_check, ou_classical_kernel, HyperbolicSolver, PearsonModel, StretchedSolver,
    TimeOperator,
};
use ksdiff_core::stats;
use ksdiff_core::stochastic_sim::{
    mc_laplace_transform, path_rng, sample_z, sample_z_beta_product, MCConfig,
};
use serde_json::json;
use std::path::Path;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// ks-bounds | mb-constant | residual | mc-laplace | beta-law | reduction | all
    #[arg(long)]
    pub suite: String,
    /// RNG seed for the Monte Carlo suites; falls back to KSDIFF_SEED
    #[arg(long)]
    pub seed: Option<u64>,
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn suite_ks_bounds() -> Result<Vec<Check>, CliError> {
    let mut worst: f64 = 0.0;
    let mut violations = 0usize;
    for &a in &[0.3, 0.5, 0.7] {
        for &m in &[1.0, 1.5, 2.0] {
            let ev = KsEvaluator::new(KSParams::new(a, m, m - 1.0)?, 1e-10);
            for i in 0..60 {
                let x = 25.0 * i as f64 / 59.0;
                let v = ev.eval_neg(x)?;
                let (lo, hi) = ks_bounds(x, a, m)?;
                let slack = (lo - v).max(v - hi);
                worst = worst.max(slack);
                if slack > 1e-9 {
                    violations += 1;
                }
            }
        }
    }
    Ok(vec![check(
        "bounds-sandwich",
        violations == 0,
        format!("540 grid points, {violations} violations, worst slack {worst:.2e}"),
    )])
}

fn suite_mb_constant() -> Result<Vec<Check>, CliError> {
    // full-line integral of sqrt((1+4n^2/9)(1+4n^2)/cosh(pi n))
    let (lo, hi, n) = (-15.0, 15.0, 12_000usize);
    let h = (hi - lo) / n as f64;
    let mut s = 0.0;
    for i in 0..=n {
        let eta: f64 = lo + i as f64 * h;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        let f = ((1.0 + 4.0 * eta * eta / 9.0) * (1.0 + 4.0 * eta * eta)
            / (std::f64::consts::PI * eta).cosh())
        .sqrt();
        s += w * f;
    }
    s *= h;
    let err = (s - 3.93953).abs();
    Ok(vec![check(
        "mb-constant",
        err < 1e-4,
        format!("quadrature {s:.6}, reference 3.93953, err {err:.2e}"),
    )])
}

fn suite_residual() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    // classical OU kernel against the classical equation
    {
        let m = PearsonModel::ou(1.0, 0.0, 1.0)?;
        let mut sups = Vec::new();
        for lvl in 0..2 {
            let nx = 30 * (1 << lvl) + 1;
            let nt = 60 * (1 << lvl) + 1;
            let xs: Vec<f64> = (0..nx)
                .map(|j| -2.0 + 4.0 * j as f64 / (nx - 1) as f64)
                .collect();
            let h_t = 1.0 / (nt - 1) as f64;
            let values: Vec<Vec<f64>> = (0..nt)
                .map(|i| {
                    let t = 0.3 + i as f64 * h_t;
                    xs.iter()
                        .map(|y| ou_classical_kernel(1.0, 0.0, 1.0, 0.4, t, *y))
                        .collect()
                })
                .collect();
            let (sup, _) =
                residual_check(&m, TimeOperator::Classical, 0.0, 1.0, &xs, h_t, &values, 0.0)?;
            sups.push(sup);
        }
        checks.push(check(
            "classical-ou-residual",
            sups[1] < 0.5 * sups[0],
            format!("sup {:.3e} -> {:.3e} under 2x refinement", sups[0], sups[1]),
        ));
    }
    // stretched single-mode solution
    {
        let m = PearsonModel::ou(1.0, 0.0, 1.0)?;
        let ord = StretchedOrder::new(0.5, 0.25)?;
        let s = StretchedSolver::new(m, ord);
        let mut sups = Vec::new();
        for lvl in 0..2 {
            let nx = 30 * (1 << lvl) + 1;
            let nt = 100 * (1 << lvl) + 1;
            let xs: Vec<f64> = (0..nx)
                .map(|j| -2.0 + 4.0 * j as f64 / (nx - 1) as f64)
                .collect();
            let h_t = 2.0 / (nt - 1) as f64;
            let q1: Vec<f64> = xs
                .iter()
                .map(|x| m.orthonormal_poly(1, *x))
                .collect::<ksdiff_core::Result<_>>()?;
            let values: Vec<Vec<f64>> = (0..nt)
                .map(|i| {
                    let f = s.factors(i as f64 * h_t, 2)?[1];
                    Ok(q1.iter().map(|q| f * q).collect())
                })
                .collect::<ksdiff_core::Result<_>>()?;
            let (sup, _) = residual_check(
                &m,
                TimeOperator::Stretched(ord),
                0.0,
                1.0,
                &xs,
                h_t,
                &values,
                0.25,
            )?;
            sups.push(sup);
        }
        checks.push(check(
            "stretched-single-mode-residual",
            sups[1] < 0.7 * sups[0],
            format!("sup {:.3e} -> {:.3e} under 2x refinement", sups[0], sups[1]),
        ));
    }
    Ok(checks)
}

fn suite_mc_laplace(seed: u64) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for (i, &(alpha, gamma)) in [(0.5, 0.25), (0.5, 0.0)].iter().enumerate() {
        let cfg = MCConfig {
            n_paths: 4000,
            seed: seed + i as u64,
            ..MCConfig::default()
        };
        let est = mc_laplace_transform(alpha, gamma, 1.0, 1.0, &cfg)?;
        let ord = StretchedOrder::new(alpha, gamma)?;
        let ev = KsEvaluator::new(ord.ks_params(), 1e-10);
        let exact = ev.eval_neg(1.0)?;
        let dev = (est.mean - exact).abs();
        let band = 4.0 * est.stderr;
        checks.push(check(
            if i == 0 {
                "laplace-transform-identity"
            } else {
                "laplace-mittag-leffler"
            },
            dev <= band,
            format!(
                "alpha={alpha} gamma={gamma}: |{:.6} - {exact:.6}| = {dev:.2e} vs 4se = {band:.2e}",
                est.mean
            ),
        ));
    }
    Ok(checks)
}

fn suite_beta_law(seed: u64) -> Result<Vec<Check>, CliError> {
    let (alpha, gamma) = (0.5, 0.25);
    let cfg = MCConfig {
        n_paths: 3000,
        seed,
        ..MCConfig::default()
    };
    let n = 3000usize;
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..n {
        let mut rng = path_rng(seed, 2 * i as u64);
        a.push(sample_z(alpha, gamma, &cfg, &mut rng)?.z);
        let mut rng = path_rng(seed ^ 0x9e37_79b9, 2 * i as u64);
        b.push(sample_z_beta_product(alpha, gamma, &cfg, &mut rng)?.z);
    }
    let ks = stats::ks_two_sample(&a, &b)?;
    Ok(vec![check(
        "beta-product-law",
        ks.p_value > 0.01,
        format!(
            "two-sample KS D = {:.4}, p = {:.4} at {n} samples each",
            ks.statistic, ks.p_value
        ),
    )])
}

fn suite_reduction() -> Result<Vec<Check>, CliError> {
    let m = PearsonModel::ou(1.0, 0.0, 1.0)?;
    let (x, y, t) = (0.3, -0.2, 0.8);
    let mut checks = Vec::new();
    {
        let ord = StretchedOrder::new(0.5, 0.25)?;
        let hyper = m.transition_density_hyperbolic(&ord, 0.0, 1.0, x, t, y, 40)?;
        let stretched = m.transition_density_stretched(&ord, x, t, y, 40)?;
        let diff = (hyper - stretched).abs();
        checks.push(check(
            "hyperbolic-reduces-to-stretched",
            diff < 1e-9,
            format!("A=0, B=1: |{hyper:.10} - {stretched:.10}| = {diff:.2e}"),
        ));
    }
    {
        let ord = StretchedOrder::new(0.6, 0.0)?;
        let hs = HyperbolicSolver::new(m, ord, 0.0, 1.0)?;
        let f = hs.temporal_factor(1, t)?;
        let ml = fracops::first_order_solution(m.eigenvalue(1), &ord, t)?;
        let diff = (f - ml).abs();
        checks.push(check(
            "stretched-reduces-to-mittag-leffler",
            diff < 1e-9,
            format!("gamma=0: |{f:.10} - {ml:.10}| = {diff:.2e}"),
        ));
    }
    Ok(checks)
}

pub fn cmd_verify(a: &VerifyArgs, out: Option<&Path>) -> CliResult {
    let seed = resolve_seed(a.seed)?;
    let suites: Vec<&str> = match a.suite.as_str() {
        "all" => vec![
            "ks-bounds",
            "mb-constant",
            "residual",
            "mc-laplace",
            "beta-law",
            "reduction",
        ],
        s => vec![s],
    };
    let mut checks = Vec::new();
    for s in suites {
        let mut batch = match s {
            "ks-bounds" => suite_ks_bounds()?,
            "mb-constant" => suite_mb_constant()?,
            "residual" => suite_residual()?,
            "mc-laplace" => suite_mc_laplace(seed)?,
            "beta-law" => suite_beta_law(seed)?,
            "reduction" => suite_reduction()?,
            other => {
                return Err(usage_err(format!(
                    "unknown suite {other:?}; expected ks-bounds, mb-constant, residual, mc-laplace, beta-law, reduction, or all"
                )))
            }
        };
        checks.append(&mut batch);
    }
    let passed = checks.iter().all(|c| c.passed);
    let doc = json!({
        "meta": Meta::new(Some(seed)).to_json(),
        "suite": a.suite,
        "passed": passed,
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("verify serialization");
    text.push('\n');
    emit(&text, out)?;
    if passed {
        Ok(())
    } else {
        Err(CliError {
            code: EXIT_VERIFY,
            message: format!("{} check(s) failed", checks.iter().filter(|c| !c.passed).count()),
        })
    }
}
