//! The Kilbas-Saigo function E_{a,m,l}(z) = sum c_n z^n with
//! c_n = prod_{k<n} Gamma(1 + a(km+l)) / Gamma(1 + a(km+l+1)).
//!
//! Three evaluation regimes, switched by |z|:
//! - power series, accurate while the largest term stays small enough that
//!   alternating cancellation does not eat the budget;
//! - Mellin-Barnes contour quadrature for mid-range arguments in the sector
//!   Re(-z) > 0, built on the double gamma function;
//! - the one-term large-argument asymptotic with its decay order delta.

use crate::double_gamma::{DoubleGamma, DoubleGammaCfg};
use crate::error::{Error, Result};
use crate::special;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

/// Parameters (a, m, l) of E_{a,m,l}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KSParams {
    pub a: f64,
    pub m: f64,
    pub l: f64,
}

impl KSParams {
    pub fn new(a: f64, m: f64, l: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::InvalidParameter(format!("a must be in (0, 1], got {a}")));
        }
        if !(m > 0.0) {
            return Err(Error::InvalidParameter(format!("m must be > 0, got {m}")));
        }
        if !(l > -1.0 / a) {
            return Err(Error::InvalidParameter(format!(
                "l must exceed -1/a = {}, got {l}",
                -1.0 / a
            )));
        }
        Ok(Self { a, m, l })
    }

    /// The parameters of the stretched family: m = 1 + gamma/alpha, l = gamma/alpha.
    pub fn stretched(alpha: f64, gamma: f64) -> Result<Self> {
        Self::new(alpha, 1.0 + gamma / alpha, gamma / alpha)
    }

    pub fn tau(&self) -> f64 {
        1.0 / (self.a * self.m)
    }

    pub fn phi(&self) -> f64 {
        (1.0 + self.a * self.l) * self.tau()
    }

    /// Whether the Mellin-Barnes/asymptotic machinery applies (phi > 1,
    /// equivalently l > m - 1/a).
    pub fn mb_admissible(&self) -> bool {
        self.phi() > 1.0 + 1e-9
    }

    /// log of the largest series term at |z| = x; the series loses about this
    /// many nats to cancellation at negative arguments.
    fn series_max_log(&self, x: f64) -> f64 {
        x.powf(1.0 / self.a) / self.m
    }

    /// Radius of the fully-accurate series regime; chosen so that the largest
    /// term stays below e^10 even at twice this radius (the regime-overlap
    /// band reaches 2 r1).
    pub fn series_radius(&self) -> f64 {
        let l_cap = 10.0 * 2f64.powf(-1.0 / self.a);
        (l_cap * self.m).powf(self.a).min(20.0)
    }

    /// Outer radius of the Mellin-Barnes regime.
    pub fn mb_outer_radius(&self) -> f64 {
        1e3
    }
}

/// Contour configuration for the Mellin-Barnes quadrature.
#[derive(Debug, Clone)]
pub struct MBContourCfg {
    /// Contour abscissa, 0 < c < min(1, phi + a tau).
    pub c: f64,
    /// Contour half height.
    pub half_height: f64,
    /// Upper bound on the number of quadrature nodes over [-H, H].
    pub n_nodes: usize,
    pub tol: f64,
}

impl MBContourCfg {
    /// Contour sized for arguments with |arg z| up to `max_arg`.
    pub fn for_params(p: &KSParams, tol: f64, max_arg: f64) -> Result<Self> {
        let eps = 1.0_f64.min(p.phi() + p.a * p.tau());
        let rate = PI * (1.0 - p.a / 2.0) - max_arg;
        if rate < 0.05 {
            return Err(Error::Sector(format!(
                "contour decay rate {rate:.3} too small for |arg z| up to {max_arg:.3}"
            )));
        }
        // ln(10/tol) for the target plus slack for the polynomial prefactor
        // of the integrand decay.
        let half_height = ((10.0 / tol).ln() + 10.0) / rate;
        Ok(Self {
            c: eps / 2.0,
            half_height,
            n_nodes: 4001,
            tol,
        })
    }
}

/// Decay order of the large-argument expansion.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticOrder {
    pub delta: f64,
    pub leading_coeff: f64,
}

/// c_n in log space; c_0 = 1.
pub fn ks_coeff(n: usize, p: &KSParams) -> Result<f64> {
    let lc = ks_log_coeff(n, p)?;
    if lc > 700.0 {
        return Err(Error::Numerical(format!(
            "log c_{n} = {lc:.1} overflows f64; stay in log space"
        )));
    }
    Ok(lc.exp())
}

fn ks_log_coeff(n: usize, p: &KSParams) -> Result<f64> {
    let mut s = 0.0;
    for k in 0..n {
        let base = 1.0 + p.a * (k as f64 * p.m + p.l);
        s -= special::log_gamma_ratio(base, p.a)?;
    }
    Ok(s)
}

/// Power-series evaluation; stops after two consecutive terms fall below
/// tol relative to the running sum.
pub fn ks_series(z: Complex64, p: &KSParams, tol: f64) -> Result<Complex64> {
    const MAX_TERMS: usize = 10_000;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut small_run = 0;
    for k in 0..MAX_TERMS {
        let base = 1.0 + p.a * (k as f64 * p.m + p.l);
        let ratio = (-special::log_gamma_ratio(base, p.a)?).exp();
        term *= z * ratio;
        sum += term;
        if term.norm() <= tol * sum.norm().max(1.0) {
            small_run += 1;
            if small_run >= 2 && k as f64 >= p.series_max_log(z.norm()) {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::SlowConvergence { terms: MAX_TERMS })
}

/// Precomputed Mellin-Barnes contour kernel for fixed parameters; the node
/// weights are independent of the evaluation point, so one kernel serves a
/// whole grid of arguments.
pub struct MbKernel {
    c: f64,
    h: f64,
    /// log K(c + i j h) + log(h / 2 pi) + log prefactor, j = 0..=half_n.
    log_weights: Vec<Complex64>,
    /// Exponential decay rate of |K| in |Im s|.
    decay_rate: f64,
    /// Largest |arg z| the contour height supports at tolerance `tol`.
    max_arg: f64,
    tol: f64,
}

impl MbKernel {
    pub fn new(p: &KSParams, cfg: &MBContourCfg) -> Result<Self> {
        let tau = p.tau();
        let phi = p.phi();
        let atau = p.a * tau;
        let eps = 1.0_f64.min(phi + atau);
        if !(cfg.c > 0.0 && cfg.c < eps) {
            return Err(Error::InvalidParameter(format!(
                "contour abscissa {} outside (0, {eps})",
                cfg.c
            )));
        }
        if !p.mb_admissible() {
            return Err(Error::InvalidParameter(format!(
                "Mellin-Barnes requires l > m - 1/a (phi > 1); phi = {phi}"
            )));
        }
        let decay_rate = PI * (1.0 - p.a / 2.0);
        // Trapezoid step bounded by the distance from the contour to the
        // nearest integrand pole (the spacing controls the quadrature error
        // e^(-2 pi d / h) for analytic integrands).
        let d = cfg.c.min(eps - cfg.c);
        let h_max = 2.0 * PI * d / ((1.0 / cfg.tol).ln() + 2.0);
        let h_cfg = 2.0 * cfg.half_height / (cfg.n_nodes.max(3) - 1) as f64;
        let h = h_max.min(h_cfg);
        let half_n = (cfg.half_height / h).ceil() as usize;

        let mut dg_cfg = DoubleGammaCfg::new(tau);
        dg_cfg.tol = (cfg.tol * 1e-2).max(1e-13);
        let dg = DoubleGamma::new(dg_cfg)?;
        let log_pref = dg.log_g_product(Complex64::new(phi + atau, 0.0))?
            - dg.log_g_product(Complex64::new(phi, 0.0))?;

        let log_h = (h / (2.0 * PI)).ln();
        let mut log_weights = Vec::with_capacity(half_n + 1);
        for j in 0..=half_n {
            let s = Complex64::new(cfg.c, j as f64 * h);
            // Gamma(s) Gamma(1-s) = pi / sin(pi s)
            let log_gammas = PI.ln() - log_sin_pi_stable(s);
            let lk = log_gammas + dg.log_g_product(phi - s)? - dg.log_g_product(phi + atau - s)?;
            log_weights.push(lk + log_pref + log_h);
        }
        // The height supports |arg z| < decay_rate - ln(1/tol)/H.
        let max_arg = decay_rate - (1.0 / cfg.tol).ln() / cfg.half_height;
        Ok(Self {
            c: cfg.c,
            h,
            log_weights,
            decay_rate,
            max_arg,
            tol: cfg.tol,
        })
    }

    /// E_{a,m,l}(-x) for Re x > 0, with a quadrature-tail error estimate.
    pub fn eval(&self, x: Complex64) -> Result<(Complex64, f64)> {
        if !(x.re > 0.0) {
            return Err(Error::Sector(format!("{x}")));
        }
        let arg = x.arg();
        let lx = x.ln();
        let half_n = self.log_weights.len() - 1;
        // Sum from the decaying end inward; node j pairs with its conjugate.
        let mut sum = Complex64::new(0.0, 0.0);
        let mut edge = 0.0f64;
        for j in (1..=half_n).rev() {
            let s = Complex64::new(self.c, j as f64 * self.h);
            let t_plus = (self.log_weights[j] - s * lx).exp();
            let t_minus = (self.log_weights[j].conj() - s.conj() * lx).exp();
            if j == half_n {
                edge = t_plus.norm().max(t_minus.norm());
            }
            sum += t_plus + t_minus;
        }
        sum += (self.log_weights[0] - Complex64::new(self.c, 0.0) * lx).exp();
        // Geometric tail bound from the edge node and the residual decay rate.
        let rate = self.decay_rate - arg.abs();
        if rate <= 0.05 {
            return Err(Error::Sector(format!(
                "|arg z| = {:.3} too close to the sector boundary",
                arg.abs()
            )));
        }
        let tail = edge / (1.0 - (-rate * self.h).exp());
        if tail > self.tol * sum.norm().max(1e-300) && tail > self.tol {
            return Err(Error::TailTooLarge {
                estimate: tail,
                tol: self.tol,
            });
        }
        Ok((sum, tail))
    }

    pub fn max_arg(&self) -> f64 {
        self.max_arg
    }
}

/// log sin(pi s) without overflow for large |Im s|, continuous enough for use
/// inside exp (2 pi i offsets cancel nothing here since we exponentiate).
fn log_sin_pi_stable(s: Complex64) -> Complex64 {
    if s.im.abs() <= 20.0 {
        (PI * s).sin().ln()
    } else {
        let iw = Complex64::new(0.0, 1.0) * (PI * s);
        if s.im > 0.0 {
            -iw + (1.0 - (2.0 * iw).exp()).ln() - Complex64::new(0.0, 2.0).ln()
                + Complex64::new(0.0, PI)
        } else {
            iw + (1.0 - (-2.0 * iw).exp()).ln() - Complex64::new(0.0, 2.0).ln()
        }
    }
}

/// One-shot Mellin-Barnes evaluation of E_{a,m,l}(-z), Re z > 0.
pub fn ks_mellin_barnes(z: Complex64, p: &KSParams, cfg: &MBContourCfg) -> Result<Complex64> {
    Ok(MbKernel::new(p, cfg)?.eval(z)?.0)
}

/// Leading large-argument term: E(-z) ~ [Gamma(1+a(l-m+1)) / Gamma(1+a(l-m))] / z,
/// with relative error O(|z|^(1-delta)).
pub fn ks_asymptotic(z: Complex64, p: &KSParams) -> Result<(Complex64, AsymptoticOrder)> {
    if !(z.re > 0.0) {
        return Err(Error::Sector(format!("{z}")));
    }
    if !p.mb_admissible() {
        return Err(Error::InvalidParameter(
            "asymptotic expansion requires l > m - 1/a".into(),
        ));
    }
    let alm = p.a * (p.l - p.m);
    let coeff = special::gamma_real(1.0 + alm + p.a)? / special::gamma_real(1.0 + alm)?;
    let delta = 0.5 * (1.0 + (p.phi() + p.a * p.tau()).min(2.0));
    Ok((
        coeff * z.inv(),
        AsymptoticOrder {
            delta,
            leading_coeff: coeff,
        },
    ))
}

/// Lower/upper bounds of E_{a,m,m-1}(-x): 1/(1 + Gamma(1-a) x) and
/// 1/(1 + Gamma(1+a(m-1))/Gamma(1+am) x). Requires a < 1 (Gamma(1-a) pole).
pub fn ks_bounds(x: f64, a: f64, m: f64) -> Result<(f64, f64)> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("x must be >= 0, got {x}")));
    }
    if !(a >= 0.0 && a < 1.0) || !(m > 0.0) {
        return Err(Error::Domain(format!(
            "bounds require a in [0, 1) and m > 0, got a={a}, m={m}"
        )));
    }
    let lower = 1.0 / (1.0 + special::gamma_real(1.0 - a)? * x);
    let ratio = (special::log_gamma_real(1.0 + a * (m - 1.0))? - special::log_gamma_real(1.0 + a * m)?).exp();
    let upper = 1.0 / (1.0 + ratio * x);
    Ok((lower.min(upper), lower.max(upper)))
}

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    ClosedForm,
    Series,
    MellinBarnes,
    Asymptotic,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::ClosedForm => "closed-form",
            Regime::Series => "series",
            Regime::MellinBarnes => "mellin-barnes",
            Regime::Asymptotic => "asymptotic",
        })
    }
}

/// Regime-dispatching evaluator; caches the Mellin-Barnes kernel across calls
/// and rebuilds it if an argument needs a taller contour.
pub struct KsEvaluator {
    p: KSParams,
    tol: f64,
    r1: f64,
    r2: f64,
    kernel: Mutex<Option<Arc<MbKernel>>>,
}

impl KsEvaluator {
    pub fn new(p: KSParams, tol: f64) -> Self {
        let r1 = p.series_radius();
        let r2 = p.mb_outer_radius();
        Self {
            p,
            tol,
            r1,
            r2,
            kernel: Mutex::new(None),
        }
    }

    pub fn params(&self) -> &KSParams {
        &self.p
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_detailed(z)?.0)
    }

    /// Evaluate E(-x) for real x >= 0 (the argument convention of the
    /// stretched temporal factors).
    pub fn eval_neg(&self, x: f64) -> Result<f64> {
        Ok(self.eval(Complex64::new(-x, 0.0))?.re)
    }

    /// Value, regime used, and an error estimate.
    pub fn eval_detailed(&self, z: Complex64) -> Result<(Complex64, Regime, f64)> {
        // E has real coefficients: normalize to Im z >= 0 so conjugate
        // symmetry holds exactly in floating point.
        if z.im < 0.0 {
            let (v, r, e) = self.eval_detailed(z.conj())?;
            return Ok((v.conj(), r, e));
        }
        let p = &self.p;
        if p.a == 1.0 && p.m == 1.0 && p.l == 0.0 {
            return Ok((z.exp(), Regime::ClosedForm, 1e-15 * z.exp().norm()));
        }
        let r = z.norm();
        if r <= self.r1 {
            let v = ks_series(z, p, self.tol)?;
            return Ok((v, Regime::Series, self.tol * v.norm().max(1.0)));
        }
        let w = -z; // MB/asymptotic argument
        if w.re > 0.0 && p.mb_admissible() {
            if r <= self.r2 {
                let (v, tail) = self.kernel_eval(w)?;
                return Ok((v, Regime::MellinBarnes, tail + self.tol * v.norm()));
            }
            let (v, order) = ks_asymptotic(w, p)?;
            let err = v.norm() * r.powf(1.0 - order.delta);
            return Ok((v, Regime::Asymptotic, err));
        }
        // Series-only fallback (either phi <= 1 or the argument sits outside
        // the Re(-z) > 0 sector); accept while cancellation stays moderate.
        if p.series_max_log(r) <= 25.0 {
            let v = ks_series(z, p, self.tol)?;
            let err = (p.series_max_log(r) - 36.0).exp().max(self.tol * v.norm());
            return Ok((v, Regime::Series, err));
        }
        Err(Error::UnsupportedRegion { abs: r })
    }

    fn kernel_eval(&self, w: Complex64) -> Result<(Complex64, f64)> {
        let arg = w.arg().abs();
        let mut guard = self.kernel.lock().unwrap();
        let rebuild = match guard.as_ref() {
            Some(k) => arg > k.max_arg(),
            None => true,
        };
        if rebuild {
            let margin = 0.1 * (PI * (1.0 - self.p.a / 2.0) - arg).max(0.0);
            let max_arg = (arg + margin).max(0.45 * PI.min(PI * (1.0 - self.p.a / 2.0) - 0.1));
            let cfg = MBContourCfg::for_params(&self.p, self.tol.min(1e-9), max_arg)
                .or_else(|_| MBContourCfg::for_params(&self.p, self.tol.min(1e-9), arg + 0.02))?;
            *guard = Some(Arc::new(MbKernel::new(&self.p, &cfg)?));
        }
        let kernel = guard.as_ref().unwrap().clone();
        drop(guard);
        kernel.eval(w)
    }
}

/// One-shot dispatching evaluation; prefer [`KsEvaluator`] on grids.
pub fn ks_eval(z: Complex64, p: &KSParams, tol: f64) -> Result<Complex64> {
    KsEvaluator::new(*p, tol).eval(z)
}
