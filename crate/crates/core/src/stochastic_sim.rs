//! Monte Carlo layer: stable subordinator increments, the random time change
//! Z = int_0^inf (1 - sigma_s)_+^gamma ds, its beta-product equivalent, and
//! time-changed Pearson diffusions, cross-validated against the analytic
//! solvers.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Exp1, Gamma, Poisson, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fracops::StretchedOrder;
use crate::pearson_spectral::{
    solve_backward_hyperbolic_classical, PearsonModel, SpectralCoeffs,
};
use crate::special;
use crate::stats;

/// Hard cap on subordinator grid steps per path.
pub const STEP_BUDGET: usize = 100_000_000;

/// Monte Carlo configuration.
#[derive(Debug, Clone, Copy)]
pub struct MCConfig {
    pub n_paths: usize,
    /// subordinator grid step for the time-change integral
    pub dt: f64,
    pub seed: u64,
    /// truncation length of the beta-product representation
    pub n_beta_factors: usize,
    pub n_workers: usize,
}

impl Default for MCConfig {
    fn default() -> Self {
        Self {
            n_paths: 10_000,
            dt: 5e-4,
            seed: 0x5eed,
            n_beta_factors: 2000,
            n_workers: 1,
        }
    }
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 || self.n_beta_factors == 0 {
            return Err(Error::InvalidParameter(
                "n_paths and n_beta_factors must be positive".into(),
            ));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidParameter("dt must be positive".into()));
        }
        Ok(())
    }
}

/// Which representation produced a Z realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMethod {
    SubordinatorIntegral,
    BetaProduct,
}

/// One realization of the random variable Z.
#[derive(Debug, Clone, Copy)]
pub struct TimeChangeSample {
    pub z: f64,
    pub method: SampleMethod,
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct EstimateWithError {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

/// RNG for path `i`; the even stream drives Z, the odd stream the diffusion,
/// so the time change and the space motion are independent by construction.
pub fn path_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One increment of the alpha-stable subordinator over a step of length dt,
/// normalized so that E exp(-lambda sigma_t) = exp(-t lambda^alpha).
/// Kanter's representation: X = (a(U)/E)^{(1-alpha)/alpha} with
/// a(u) = sin(a pi u)^{a/(1-a)} sin((1-a) pi u) / sin(pi u)^{1/(1-a)},
/// then the increment is dt^{1/alpha} X.
pub fn sample_stable_increment(alpha: f64, dt: f64, rng: &mut impl Rng) -> f64 {
    debug_assert!(alpha > 0.0 && alpha < 1.0);
    let u: f64 = rng.random::<f64>().clamp(1e-16, 1.0 - 1e-16);
    let e: f64 = rng.sample(Exp1);
    let log_a = alpha / (1.0 - alpha) * (alpha * PI * u).sin().ln()
        + ((1.0 - alpha) * PI * u).sin().ln()
        - 1.0 / (1.0 - alpha) * (PI * u).sin().ln();
    let x = ((log_a - e.ln()) * (1.0 - alpha) / alpha).exp();
    dt.powf(1.0 / alpha) * x
}

/// Z = int_0^inf (1 - sigma_s)_+^gamma ds by left-endpoint quadrature on the
/// subordinator grid, stopped at first passage of level 1 (the integrand
/// vanishes beyond it, so the truncation is exact).
pub fn sample_z(
    alpha: f64,
    gamma: f64,
    cfg: &MCConfig,
    rng: &mut impl Rng,
) -> Result<TimeChangeSample> {
    sample_z_with_budget(alpha, gamma, cfg, rng, STEP_BUDGET)
}

fn sample_z_with_budget(
    alpha: f64,
    gamma: f64,
    cfg: &MCConfig,
    rng: &mut impl Rng,
    budget: usize,
) -> Result<TimeChangeSample> {
    cfg.validate()?;
    if !(alpha > 0.0 && alpha < 1.0) || gamma < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need 0 < alpha < 1 and gamma >= 0, got ({alpha}, {gamma})"
        )));
    }
    let mut sigma = 0.0f64;
    let mut z = 0.0f64;
    let mut steps = 0usize;
    while sigma < 1.0 {
        steps += 1;
        if steps > budget {
            return Err(Error::StepBudget(budget));
        }
        z += cfg.dt
            * if gamma == 0.0 {
                1.0
            } else {
                (1.0 - sigma).powf(gamma)
            };
        sigma += sample_stable_increment(alpha, cfg.dt, rng);
    }
    Ok(TimeChangeSample {
        z,
        method: SampleMethod::SubordinatorIntegral,
    })
}

/// Z as the truncated infinite product of independent Beta variables,
/// Z = [G(g+1)/G(a+g+1)] prod_n [(g+n+1)/(a+g+n)] B(1+n/(a+g), (1-a)/(a+g)).
/// Each factor beyond the prefactor has unit mean, so the truncated tail
/// needs no deterministic correction.
pub fn sample_z_beta_product(
    alpha: f64,
    gamma: f64,
    cfg: &MCConfig,
    rng: &mut impl Rng,
) -> Result<TimeChangeSample> {
    cfg.validate()?;
    if !(alpha > 0.0 && alpha < 1.0) || gamma <= -alpha {
        return Err(Error::InvalidParameter(format!(
            "need 0 < alpha < 1 and gamma > -alpha, got ({alpha}, {gamma})"
        )));
    }
    let b = alpha + gamma;
    let mut log_z = special::log_gamma_real(gamma + 1.0)? - special::log_gamma_real(b + 1.0)?;
    for n in 0..cfg.n_beta_factors {
        let nf = n as f64;
        let beta = Beta::new(1.0 + nf / b, (1.0 - alpha) / b)
            .map_err(|e| Error::InvalidParameter(format!("beta factor {n}: {e}")))?;
        let draw: f64 = beta.sample(rng);
        log_z += ((gamma + nf + 1.0) / (b + nf)).ln() + draw.ln();
    }
    Ok(TimeChangeSample {
        z: log_z.exp(),
        method: SampleMethod::BetaProduct,
    })
}

/// Exact OU transition draw X_tau | X_0 = x0.
fn ou_transition_sample(theta: f64, mu: f64, sigma2: f64, x0: f64, tau: f64, rng: &mut impl Rng) -> f64 {
    let decay = (-theta * tau).exp();
    let mean = mu + (x0 - mu) * decay;
    let var = sigma2 * (1.0 - decay * decay);
    let g: f64 = rng.sample(StandardNormal);
    mean + var.sqrt() * g
}

/// Exact CIR transition draw via the Poisson-Gamma mixture of the noncentral
/// chi-square: X_tau = Gamma(b + N, 1)/c with N ~ Poisson(c x0 e^{-theta tau}),
/// c = a/(1 - e^{-theta tau}).
fn cir_transition_sample(
    theta: f64,
    a: f64,
    b: f64,
    x0: f64,
    tau: f64,
    rng: &mut impl Rng,
) -> Result<f64> {
    let decay = (-theta * tau).exp();
    let c = a / (1.0 - decay);
    let nc = c * x0 * decay;
    let n = if nc > 1e-12 {
        let pois = Poisson::new(nc)
            .map_err(|e| Error::Numerical(format!("poisson mean {nc}: {e}")))?;
        pois.sample(rng)
    } else {
        0.0
    };
    let gamma_dist = Gamma::new(b + n, 1.0 / c)
        .map_err(|e| Error::Numerical(format!("gamma shape {}: {e}", b + n)))?;
    Ok(gamma_dist.sample(rng))
}

/// Jacobi transition by Euler-Maruyama with reflection at the boundary;
/// no closed-form transition is available.
fn jacobi_transition_sample(
    theta: f64,
    a: f64,
    b: f64,
    x0: f64,
    tau: f64,
    rng: &mut impl Rng,
) -> Result<f64> {
    const H: f64 = 1e-4;
    const EDGE: f64 = 1e-9;
    let s = a + b;
    let n_steps = (tau / H).ceil() as usize;
    let mut x = x0;
    for k in 0..n_steps {
        let h = if k + 1 == n_steps { tau - k as f64 * H } else { H };
        let drift = -theta * (x - (b - a) / (s + 2.0));
        let diff2 = 2.0 * theta * (1.0 - x * x).max(0.0) / (s + 2.0);
        let g: f64 = rng.sample(StandardNormal);
        x += drift * h + (diff2 * h).sqrt() * g;
        if x > 1.0 - EDGE {
            x = 2.0 * (1.0 - EDGE) - x;
        }
        if x < -1.0 + EDGE {
            x = 2.0 * (-1.0 + EDGE) - x;
        }
        if x.abs() > 1.0 - EDGE / 2.0 {
            return Err(Error::DomainExit);
        }
    }
    Ok(x)
}

/// One draw of the stretched non-local Pearson diffusion
/// X^{(alpha,gamma)}_t = X_{t^{alpha+gamma} Z} started from x0. The time
/// change and the diffusion use separate RNGs so they are independent.
pub fn sample_time_changed_pearson(
    model: &PearsonModel,
    ord: &StretchedOrder,
    t: f64,
    x0: f64,
    cfg: &MCConfig,
    rng_z: &mut impl Rng,
    rng_x: &mut impl Rng,
) -> Result<f64> {
    if !model.contains(x0) {
        return Err(Error::Domain(format!("x0 = {x0} outside the state space")));
    }
    if t < 0.0 {
        return Err(Error::InvalidParameter("t must be nonnegative".into()));
    }
    if t == 0.0 {
        return Ok(x0);
    }
    let z = sample_z(ord.alpha, ord.gamma, cfg, rng_z)?.z;
    let tau = t.powf(ord.beta()) * z;
    if tau == 0.0 {
        return Ok(x0);
    }
    match *model {
        PearsonModel::Ou { theta, mu, sigma2 } => {
            Ok(ou_transition_sample(theta, mu, sigma2, x0, tau, rng_x))
        }
        PearsonModel::Cir { theta, a, b } => cir_transition_sample(theta, a, b, x0, tau, rng_x),
        PearsonModel::Jacobi { theta, a, b } => {
            jacobi_transition_sample(theta, a, b, x0, tau, rng_x)
        }
    }
}

fn with_pool<T: Send>(n_workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n_workers.max(1))
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn estimate_over_paths(
    cfg: &MCConfig,
    per_path: impl Fn(usize) -> Result<f64> + Sync,
) -> Result<EstimateWithError> {
    cfg.validate()?;
    // per-path values are collected in path order and reduced sequentially,
    // so the estimate is bit-identical for any n_workers
    let values: Vec<f64> = with_pool(cfg.n_workers, || {
        (0..cfg.n_paths)
            .into_par_iter()
            .map(&per_path)
            .collect::<Result<Vec<f64>>>()
    })??;
    let (mean, stderr) = stats::mean_stderr(&values);
    Ok(EstimateWithError {
        mean,
        stderr: if values.len() > 1 { stderr } else { 0.0 },
        n: values.len(),
    })
}

/// Monte Carlo estimate of E exp(-lambda t^{alpha+gamma} Z), the left side of
/// the Laplace-transform identity whose right side is the Kilbas-Saigo
/// function E_{alpha,1+gamma/alpha,gamma/alpha}(-lambda t^{alpha+gamma}).
pub fn mc_laplace_transform(
    alpha: f64,
    gamma: f64,
    lambda: f64,
    t: f64,
    cfg: &MCConfig,
) -> Result<EstimateWithError> {
    if lambda < 0.0 {
        return Err(Error::InvalidParameter("lambda must be nonnegative".into()));
    }
    cfg.validate()?;
    if lambda == 0.0 || t == 0.0 {
        return Ok(EstimateWithError {
            mean: 1.0,
            stderr: 0.0,
            n: cfg.n_paths,
        });
    }
    let tb = t.powf(alpha + gamma);
    estimate_over_paths(cfg, |i| {
        let mut rng = path_rng(cfg.seed, 2 * i as u64);
        let z = sample_z(alpha, gamma, cfg, &mut rng)?.z;
        Ok((-lambda * tb * z).exp())
    })
}

/// Monte Carlo estimate of the subordination identity
/// g^H_{alpha,gamma}(t, y) = E[ g^H_{1,0}(t^{alpha+gamma} Z, y) ], where the
/// inner function is the classical hyperbolic solution built from
/// exponential temporal factors.
pub fn hyperbolic_subordination_estimate(
    model: &PearsonModel,
    ord: &StretchedOrder,
    a_coef: f64,
    b_coef: f64,
    coeffs: &SpectralCoeffs,
    t: f64,
    y: f64,
    cfg: &MCConfig,
) -> Result<EstimateWithError> {
    if t == 0.0 {
        let v = solve_backward_hyperbolic_classical(model, a_coef, b_coef, coeffs, 0.0, y)?;
        return Ok(EstimateWithError {
            mean: v,
            stderr: 0.0,
            n: cfg.n_paths,
        });
    }
    let tb = t.powf(ord.beta());
    estimate_over_paths(cfg, |i| {
        let mut rng = path_rng(cfg.seed, 2 * i as u64);
        let z = sample_z(ord.alpha, ord.gamma, cfg, &mut rng)?.z;
        solve_backward_hyperbolic_classical(model, a_coef, b_coef, coeffs, tb * z, y)
    })
}
