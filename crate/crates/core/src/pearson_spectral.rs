//! OU, CIR and Jacobi diffusions with discrete spectrum, their orthonormal
//! eigenfunctions, and spectral series for classical, stretched and
//! hyperbolic transition densities and Cauchy-problem solutions.

use crate::error::{Error, Result};
use crate::fracops::{self, StretchedOrder, TelegraphCoeffs};
use crate::kilbas_saigo::KsEvaluator;
use crate::special;
use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

/// The three Pearson diffusions with purely discrete spectrum. The generator
/// is G = D(x) d^2/dx^2 + mu(x) d/dx with the parametrizations below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PearsonModel {
    /// D(x) = theta sigma2, mu(x) = -theta (x - mu); state space R.
    Ou { theta: f64, mu: f64, sigma2: f64 },
    /// D(x) = theta x / a, mu(x) = -theta (x - b/a); state space (0, inf).
    Cir { theta: f64, a: f64, b: f64 },
    /// D(x) = theta (1-x^2)/(a+b+2), mu(x) = -theta (x - (b-a)/(a+b+2));
    /// state space (-1, 1). Eigenvalues carry the theta/(a+b+2) scaling.
    Jacobi { theta: f64, a: f64, b: f64 },
}

/// Spectral coefficients of an initial condition, together with which pairing
/// produced them.
#[derive(Debug, Clone)]
pub struct SpectralCoeffs {
    pub values: Vec<f64>,
    pub kind: CoeffKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffKind {
    /// a_n = int h Q_n m dx (backward / generator side)
    Backward,
    /// a_n = int h Q_n dx (forward / Fokker-Planck side)
    Forward,
}

impl CoeffKind {
    fn name(&self) -> &'static str {
        match self {
            CoeffKind::Backward => "backward",
            CoeffKind::Forward => "forward",
        }
    }
}

/// Time operator of the Cauchy problem handed to [`residual_check`].
#[derive(Debug, Clone, Copy)]
pub enum TimeOperator {
    /// Ordinary d/dt (and d^2/dt^2 for the hyperbolic part).
    Classical,
    /// The stretched Caputo operator D^(alpha,gamma).
    Stretched(StretchedOrder),
}

impl PearsonModel {
    pub fn ou(theta: f64, mu: f64, sigma2: f64) -> Result<Self> {
        if !(theta > 0.0 && sigma2 > 0.0) {
            return Err(Error::InvalidParameter(
                "OU needs theta > 0 and sigma2 > 0".into(),
            ));
        }
        Ok(PearsonModel::Ou { theta, mu, sigma2 })
    }

    pub fn cir(theta: f64, a: f64, b: f64) -> Result<Self> {
        if !(theta > 0.0 && a > 0.0 && b > 0.0) {
            return Err(Error::InvalidParameter(
                "CIR needs theta, a, b > 0".into(),
            ));
        }
        Ok(PearsonModel::Cir { theta, a, b })
    }

    pub fn jacobi(theta: f64, a: f64, b: f64) -> Result<Self> {
        if !(theta > 0.0 && a > -1.0 && b > -1.0) {
            return Err(Error::InvalidParameter(
                "Jacobi needs theta > 0 and a, b > -1".into(),
            ));
        }
        Ok(PearsonModel::Jacobi { theta, a, b })
    }

    pub fn state_space(&self) -> (f64, f64) {
        match self {
            PearsonModel::Ou { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            PearsonModel::Cir { .. } => (0.0, f64::INFINITY),
            PearsonModel::Jacobi { .. } => (-1.0, 1.0),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.state_space();
        x > lo && x < hi
    }

    /// Diffusion coefficient D(x) of the generator.
    pub fn diffusion(&self, x: f64) -> f64 {
        match *self {
            PearsonModel::Ou { theta, sigma2, .. } => theta * sigma2,
            PearsonModel::Cir { theta, a, .. } => theta * x / a,
            PearsonModel::Jacobi { theta, a, b } => theta * (1.0 - x * x) / (a + b + 2.0),
        }
    }

    /// Drift mu(x) of the generator.
    pub fn drift(&self, x: f64) -> f64 {
        match *self {
            PearsonModel::Ou { theta, mu, .. } => -theta * (x - mu),
            PearsonModel::Cir { theta, a, b } => -theta * (x - b / a),
            PearsonModel::Jacobi { theta, a, b } => -theta * (x - (b - a) / (a + b + 2.0)),
        }
    }

    /// Stationary density m(x).
    pub fn stationary_density(&self, x: f64) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::Domain(format!("x = {x} outside the state space")));
        }
        Ok(match *self {
            PearsonModel::Ou { mu, sigma2, .. } => {
                (-(x - mu) * (x - mu) / (2.0 * sigma2)).exp() / (2.0 * PI * sigma2).sqrt()
            }
            PearsonModel::Cir { a, b, .. } => {
                (b * a.ln() + (b - 1.0) * x.ln() - a * x - special::log_gamma_real(b)?).exp()
            }
            PearsonModel::Jacobi { a, b, .. } => {
                let log_beta = special::log_gamma_real(a + 1.0)? + special::log_gamma_real(b + 1.0)?
                    - special::log_gamma_real(a + b + 2.0)?;
                ((1.0 - x).ln() * a + (1.0 + x).ln() * b
                    - log_beta
                    - (a + b + 1.0) * std::f64::consts::LN_2)
                    .exp()
            }
        })
    }

    /// Eigenvalue lambda_n of -G; lambda_0 = 0 and strictly increasing.
    pub fn eigenvalue(&self, n: usize) -> f64 {
        let nf = n as f64;
        match *self {
            PearsonModel::Ou { theta, .. } | PearsonModel::Cir { theta, .. } => theta * nf,
            PearsonModel::Jacobi { theta, a, b } => {
                theta * nf * (nf + a + b + 1.0) / (a + b + 2.0)
            }
        }
    }

    /// Map from the state variable to the reference variable of the classical
    /// weight (standard normal / gamma(b) / beta on (-1,1)).
    fn to_reference(&self, x: f64) -> f64 {
        match *self {
            PearsonModel::Ou { mu, sigma2, .. } => (x - mu) / sigma2.sqrt(),
            PearsonModel::Cir { a, .. } => a * x,
            PearsonModel::Jacobi { .. } => x,
        }
    }

    fn from_reference(&self, u: f64) -> f64 {
        match *self {
            PearsonModel::Ou { mu, sigma2, .. } => mu + sigma2.sqrt() * u,
            PearsonModel::Cir { a, .. } => u / a,
            PearsonModel::Jacobi { .. } => u,
        }
    }

    /// Three-term recurrence coefficients of the orthonormal polynomials in
    /// the reference variable: u p_n = sqrt(beta_{n+1}) p_{n+1} + alpha_n p_n
    /// + sqrt(beta_n) p_{n-1}.
    fn recurrence(&self, n: usize) -> (f64, f64) {
        let nf = n as f64;
        match *self {
            // Hermite (probabilists')
            PearsonModel::Ou { .. } => (0.0, nf),
            // Laguerre with nu = b - 1
            PearsonModel::Cir { b, .. } => (2.0 * nf + b, nf * (nf + b - 1.0)),
            // Jacobi weight (1-x)^a (1+x)^b
            PearsonModel::Jacobi { a, b, .. } => {
                let s = a + b;
                // n = 0 in cancelled form; the raw quotient is 0/0 at s = 0
                let alpha = if n == 0 {
                    (b - a) / (s + 2.0)
                } else {
                    (b * b - a * a) / ((2.0 * nf + s) * (2.0 * nf + s + 2.0))
                };
                let beta = if n == 0 {
                    0.0
                } else if n == 1 {
                    // cancelled form; the raw one is 0/0 as s -> -1
                    4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + s) * (2.0 + s) * (3.0 + s))
                } else {
                    4.0 * nf * (nf + a) * (nf + b) * (nf + s)
                        / ((2.0 * nf + s) * (2.0 * nf + s) * (2.0 * nf + s + 1.0)
                            * (2.0 * nf + s - 1.0))
                };
                (alpha, beta)
            }
        }
    }

    /// Orthonormal eigenfunction Q_n(x): int Q_n Q_m m dx = delta_{nm}.
    pub fn orthonormal_poly(&self, n: usize, x: f64) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::Domain(format!("x = {x} outside the state space")));
        }
        let u = self.to_reference(x);
        let mut p_prev = 0.0;
        let mut p = 1.0;
        for k in 0..n {
            let (alpha_k, beta_k) = self.recurrence(k);
            let (_, beta_next) = self.recurrence(k + 1);
            let next = ((u - alpha_k) * p - beta_k.sqrt() * p_prev) / beta_next.sqrt();
            if !next.is_finite() || next.abs() > 1e300 {
                return Err(Error::Numerical(format!(
                    "orthonormal polynomial overflow at n = {k}, x = {x}"
                )));
            }
            p_prev = p;
            p = next;
        }
        Ok(p)
    }

    /// Gauss quadrature matched to the stationary weight (Golub-Welsch):
    /// sum w_j f(x_j) approximates int f m dx, exact for polynomial f of
    /// degree <= 2 n_nodes - 1. Weights sum to 1.
    pub fn gauss_quadrature(&self, n_nodes: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        if n_nodes == 0 {
            return Err(Error::InvalidParameter("need at least one node".into()));
        }
        let mut m = DMatrix::<f64>::zeros(n_nodes, n_nodes);
        for i in 0..n_nodes {
            let (alpha_i, _) = self.recurrence(i);
            m[(i, i)] = alpha_i;
            if i + 1 < n_nodes {
                let (_, beta) = self.recurrence(i + 1);
                m[(i, i + 1)] = beta.sqrt();
                m[(i + 1, i)] = beta.sqrt();
            }
        }
        let eig = SymmetricEigen::new(m);
        // Newton-polish the eigenvalue nodes against p_N from the recurrence,
        // then take weights from the Christoffel identity
        // w_j = 1 / sum_{k<N} p_k(u_j)^2; eigenvector first components alone
        // leave ~1e-8 orthonormality residue at degree 20.
        let mut pairs: Vec<(f64, f64)> = (0..n_nodes)
            .map(|j| {
                let mut u = eig.eigenvalues[j];
                for _ in 0..3 {
                    let (p_n, dp_n, _) = self.reference_poly_with_derivative(n_nodes, u);
                    let step = p_n / dp_n;
                    if !step.is_finite() {
                        break;
                    }
                    u -= step;
                }
                let (_, _, christoffel) = self.reference_poly_with_derivative(n_nodes, u);
                (self.from_reference(u), 1.0 / christoffel)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(pairs.into_iter().unzip())
    }

    /// (p_N(u), p_N'(u), sum_{k<N} p_k(u)^2) in the reference variable.
    fn reference_poly_with_derivative(&self, n: usize, u: f64) -> (f64, f64, f64) {
        let mut p_prev = 0.0;
        let mut dp_prev = 0.0;
        let mut p = 1.0;
        let mut dp = 0.0;
        let mut sq = 0.0;
        for k in 0..n {
            sq += p * p;
            let (alpha_k, beta_k) = self.recurrence(k);
            let (_, beta_next) = self.recurrence(k + 1);
            let s = beta_next.sqrt();
            let b = beta_k.sqrt();
            let next = ((u - alpha_k) * p - b * p_prev) / s;
            let dnext = ((u - alpha_k) * dp + p - b * dp_prev) / s;
            p_prev = p;
            dp_prev = dp;
            p = next;
            dp = dnext;
        }
        (p, dp, sq)
    }

    /// Spectral coefficients of an initial condition h.
    /// Backward kind: a_n = int h Q_n m dx. Forward kind: a_n = int h Q_n dx,
    /// computed as int (h/m) Q_n m dx on the same Gauss rule.
    pub fn project_initial(
        &self,
        h: &dyn Fn(f64) -> f64,
        n_modes: usize,
        kind: CoeffKind,
    ) -> Result<SpectralCoeffs> {
        let n_nodes = (2 * n_modes).max(40);
        let (nodes, weights) = self.gauss_quadrature(n_nodes)?;
        let mut values = vec![0.0; n_modes];
        for (x, w) in nodes.iter().zip(&weights) {
            let g = match kind {
                CoeffKind::Backward => h(*x),
                CoeffKind::Forward => h(*x) / self.stationary_density(*x)?,
            };
            if !g.is_finite() {
                return Err(Error::Numerical(format!(
                    "initial condition not integrable at quadrature node {x}"
                )));
            }
            let mut p_prev = 0.0;
            let mut p = 1.0;
            let u = self.to_reference(*x);
            for n in 0..n_modes {
                values[n] += w * g * p;
                let (alpha_n, beta_n) = self.recurrence(n);
                let (_, beta_next) = self.recurrence(n + 1);
                let next = ((u - alpha_n) * p - beta_n.sqrt() * p_prev) / beta_next.sqrt();
                p_prev = p;
                p = next;
            }
        }
        Ok(SpectralCoeffs { values, kind })
    }

    /// Classical transition density p(x, t; y) = m(x) sum e^{-lambda_n t}
    /// Q_n(x) Q_n(y).
    pub fn transition_density_classical(
        &self,
        x: f64,
        t: f64,
        y: f64,
        n_modes: usize,
    ) -> Result<f64> {
        self.kernel_series(x, y, n_modes, |_, lambda| Ok((-lambda * t).exp()))
    }

    /// Stretched transition density: the exponential factor is replaced by
    /// E_{alpha,1+gamma/alpha,gamma/alpha}(-lambda_n t^{alpha+gamma}).
    /// One-shot convenience; batch callers should hold a [`StretchedSolver`].
    pub fn transition_density_stretched(
        &self,
        ord: &StretchedOrder,
        x: f64,
        t: f64,
        y: f64,
        n_modes: usize,
    ) -> Result<f64> {
        StretchedSolver::new(*self, *ord).transition_density(x, t, y, n_modes)
    }

    /// Spectral kernel m(x) sum_n factors[n] Q_n(x) Q_n(y) with the temporal
    /// factors supplied by the caller.
    pub fn transition_kernel(&self, x: f64, y: f64, factors: &[f64]) -> Result<f64> {
        let mut it = factors.iter();
        self.kernel_series(x, y, factors.len(), |_, _| Ok(*it.next().unwrap()))
    }

    /// Hyperbolic transition density with temporal factor T_n(t; alpha, gamma).
    pub fn transition_density_hyperbolic(
        &self,
        ord: &StretchedOrder,
        a_coef: f64,
        b_coef: f64,
        x: f64,
        t: f64,
        y: f64,
        n_modes: usize,
    ) -> Result<f64> {
        let hs = HyperbolicSolver::new(*self, *ord, a_coef, b_coef)?;
        self.kernel_series(x, y, n_modes, |n, _| hs.temporal_factor(n, t))
    }

    fn kernel_series(
        &self,
        x: f64,
        y: f64,
        n_modes: usize,
        mut factor: impl FnMut(usize, f64) -> Result<f64>,
    ) -> Result<f64> {
        let m = self.stationary_density(x)?;
        let ux = self.to_reference(x);
        let uy = self.to_reference(y);
        if !self.contains(y) {
            return Err(Error::Domain(format!("y = {y} outside the state space")));
        }
        let mut px_prev = 0.0;
        let mut px = 1.0;
        let mut py_prev = 0.0;
        let mut py = 1.0;
        let mut sum = 0.0;
        for n in 0..n_modes {
            sum += factor(n, self.eigenvalue(n))? * px * py;
            let (alpha_n, beta_n) = self.recurrence(n);
            let (_, beta_next) = self.recurrence(n + 1);
            let nx = ((ux - alpha_n) * px - beta_n.sqrt() * px_prev) / beta_next.sqrt();
            let ny = ((uy - alpha_n) * py - beta_n.sqrt() * py_prev) / beta_next.sqrt();
            px_prev = px;
            px = nx;
            py_prev = py;
            py = ny;
        }
        Ok(m * sum)
    }

    /// Backward Cauchy-problem solution sum a_n E(-lambda_n t^{a+g}) Q_n(y).
    pub fn solve_backward_stretched(
        &self,
        ord: &StretchedOrder,
        coeffs: &SpectralCoeffs,
        t: f64,
        y: f64,
    ) -> Result<f64> {
        StretchedSolver::new(*self, *ord).solve_backward(coeffs, t, y)
    }

    /// Forward solution m(x) sum a_n E(-lambda_n t^{a+g}) Q_n(x).
    pub fn solve_forward_stretched(
        &self,
        ord: &StretchedOrder,
        coeffs: &SpectralCoeffs,
        t: f64,
        x: f64,
    ) -> Result<f64> {
        StretchedSolver::new(*self, *ord).solve_forward(coeffs, t, x)
    }

    fn mode_sum(
        &self,
        coeffs: &SpectralCoeffs,
        y: f64,
        mut factor: impl FnMut(usize, f64) -> Result<f64>,
    ) -> Result<f64> {
        if !self.contains(y) {
            return Err(Error::Domain(format!("y = {y} outside the state space")));
        }
        let u = self.to_reference(y);
        let mut p_prev = 0.0;
        let mut p = 1.0;
        let mut sum = 0.0;
        for (n, a_n) in coeffs.values.iter().enumerate() {
            if *a_n != 0.0 {
                sum += a_n * factor(n, self.eigenvalue(n))? * p;
            }
            let (alpha_n, beta_n) = self.recurrence(n);
            let (_, beta_next) = self.recurrence(n + 1);
            let next = ((u - alpha_n) * p - beta_n.sqrt() * p_prev) / beta_next.sqrt();
            p_prev = p;
            p = next;
        }
        Ok(sum)
    }
}

fn expect_kind(coeffs: &SpectralCoeffs, expected: CoeffKind) -> Result<()> {
    if coeffs.kind != expected {
        return Err(Error::KindMismatch {
            expected: expected.name(),
            found: coeffs.kind.name(),
        });
    }
    Ok(())
}

/// Solver for the stretched time part D^(a,g) T = -lambda_n T, sharing one
/// Kilbas-Saigo evaluator (and its Mellin-Barnes kernel) across modes, times
/// and space points.
pub struct StretchedSolver {
    model: PearsonModel,
    ord: StretchedOrder,
    ev: KsEvaluator,
}

impl StretchedSolver {
    pub fn new(model: PearsonModel, ord: StretchedOrder) -> Self {
        Self {
            model,
            ord,
            ev: KsEvaluator::new(ord.ks_params(), 1e-11),
        }
    }

    pub fn model(&self) -> &PearsonModel {
        &self.model
    }

    /// Per-mode temporal factors E(-lambda_n t^{a+g}), n < n_modes.
    pub fn factors(&self, t: f64, n_modes: usize) -> Result<Vec<f64>> {
        let tb = t.powf(self.ord.beta());
        (0..n_modes)
            .map(|n| self.ev.eval_neg(self.model.eigenvalue(n) * tb))
            .collect()
    }

    pub fn transition_density(&self, x: f64, t: f64, y: f64, n_modes: usize) -> Result<f64> {
        let f = self.factors(t, n_modes)?;
        self.model.transition_kernel(x, y, &f)
    }

    pub fn solve_backward(&self, coeffs: &SpectralCoeffs, t: f64, y: f64) -> Result<f64> {
        expect_kind(coeffs, CoeffKind::Backward)?;
        let tb = t.powf(self.ord.beta());
        self.model
            .mode_sum(coeffs, y, |n, _| self.ev.eval_neg(self.model.eigenvalue(n) * tb))
    }

    pub fn solve_forward(&self, coeffs: &SpectralCoeffs, t: f64, x: f64) -> Result<f64> {
        expect_kind(coeffs, CoeffKind::Forward)?;
        let tb = t.powf(self.ord.beta());
        Ok(self.model.stationary_density(x)?
            * self
                .model
                .mode_sum(coeffs, x, |n, _| self.ev.eval_neg(self.model.eigenvalue(n) * tb))?)
    }
}

/// Solver for the hyperbolic (telegraph-type) time part
/// A (D^(a,g))^2 T + B D^(a,g) T + lambda_n T = 0, sharing one Kilbas-Saigo
/// evaluator across modes. The contour kernel is built once for arguments up
/// to arg approaching pi/2, which the roots a*_n approach as n grows.
pub struct HyperbolicSolver {
    model: PearsonModel,
    ord: StretchedOrder,
    a_coef: f64,
    b_coef: f64,
    ev: KsEvaluator,
}

impl HyperbolicSolver {
    pub fn new(
        model: PearsonModel,
        ord: StretchedOrder,
        a_coef: f64,
        b_coef: f64,
    ) -> Result<Self> {
        if a_coef < 0.0 || b_coef < 0.0 || (a_coef == 0.0 && b_coef == 0.0) {
            return Err(Error::InvalidParameter(
                "hyperbolic coefficients must be nonnegative and not both zero".into(),
            ));
        }
        Ok(Self {
            model,
            ord,
            a_coef,
            b_coef,
            ev: KsEvaluator::new(ord.ks_params(), 1e-11),
        })
    }

    /// T_n(t; alpha, gamma); T_0 = 1 since lambda_0 = 0 puts all weight on
    /// the zero root.
    pub fn temporal_factor(&self, n: usize, t: f64) -> Result<f64> {
        let lambda = self.model.eigenvalue(n);
        if lambda == 0.0 || t == 0.0 {
            return Ok(1.0);
        }
        if self.a_coef == 0.0 {
            return self.ev.eval_neg(lambda / self.b_coef * t.powf(self.ord.beta()));
        }
        let c = TelegraphCoeffs::new(self.a_coef, self.b_coef, lambda)?;
        let rw = fracops::telegraph_roots(&c)?;
        let tb = t.powf(self.ord.beta());
        let ea = self.ev.eval(rw.a_star * tb)?;
        if rw.conjugate {
            Ok(2.0 * (rw.k1 * ea).re)
        } else {
            let eb = self.ev.eval(rw.b_star * tb)?;
            let v = rw.k1 * ea + rw.k2 * eb;
            if v.im.abs() > 1e-10 * v.re.abs().max(1.0) {
                return Err(Error::Numerical(format!(
                    "temporal factor acquired an imaginary part {:e}",
                    v.im
                )));
            }
            Ok(v.re)
        }
    }

    /// Per-mode temporal factors T_n(t), n < n_modes.
    pub fn factors(&self, t: f64, n_modes: usize) -> Result<Vec<f64>> {
        (0..n_modes).map(|n| self.temporal_factor(n, t)).collect()
    }

    pub fn solve_backward(&self, coeffs: &SpectralCoeffs, t: f64, y: f64) -> Result<f64> {
        expect_kind(coeffs, CoeffKind::Backward)?;
        self.model
            .mode_sum(coeffs, y, |n, _| self.temporal_factor(n, t))
    }

    pub fn solve_forward(&self, coeffs: &SpectralCoeffs, t: f64, x: f64) -> Result<f64> {
        expect_kind(coeffs, CoeffKind::Forward)?;
        Ok(self.model.stationary_density(x)?
            * self
                .model
                .mode_sum(coeffs, x, |n, _| self.temporal_factor(n, t))?)
    }
}

/// Classical (alpha = 1, gamma = 0) hyperbolic temporal factor
/// T_n(t) = K1 e^{a* t} + K2 e^{b* t}, the building block of the
/// subordination identity.
pub fn classical_hyperbolic_temporal_factor(
    model: &PearsonModel,
    a_coef: f64,
    b_coef: f64,
    n: usize,
    t: f64,
) -> Result<f64> {
    let lambda = model.eigenvalue(n);
    if lambda == 0.0 || t == 0.0 {
        return Ok(1.0);
    }
    if a_coef == 0.0 {
        return Ok((-lambda / b_coef * t).exp());
    }
    let c = TelegraphCoeffs::new(a_coef, b_coef, lambda)?;
    let rw = fracops::telegraph_roots(&c)?;
    let v = rw.k1 * (rw.a_star * t).exp() + rw.k2 * (rw.b_star * t).exp();
    if v.im.abs() > 1e-9 * v.re.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "classical temporal factor acquired an imaginary part {:e}",
            v.im
        )));
    }
    Ok(v.re)
}

/// Classical hyperbolic backward solution g^H_{1,0}(t, y); used as the inner
/// function of the subordination identity.
pub fn solve_backward_hyperbolic_classical(
    model: &PearsonModel,
    a_coef: f64,
    b_coef: f64,
    coeffs: &SpectralCoeffs,
    t: f64,
    y: f64,
) -> Result<f64> {
    expect_kind(coeffs, CoeffKind::Backward)?;
    model.mode_sum(coeffs, y, |n, _| {
        classical_hyperbolic_temporal_factor(model, a_coef, b_coef, n, t)
    })
}

/// PDE residual of a sampled solution g(t_i, x_j), t_i = i h_t:
/// A (D_t)^2 g + B D_t g - D(x) g_xx - mu(x) g_x, with the time operator
/// either classical central differences or the L1 stretched Caputo scheme.
/// Returns (sup, l2) norms over interior nodes with t >= t_window.
pub fn residual_check(
    model: &PearsonModel,
    op: TimeOperator,
    a_coef: f64,
    b_coef: f64,
    xs: &[f64],
    h_t: f64,
    values: &[Vec<f64>],
    t_window: f64,
) -> Result<(f64, f64)> {
    let nt = values.len();
    let nx = xs.len();
    if nt < 4 || nx < 3 {
        return Err(Error::Domain("grid too coarse for the residual check".into()));
    }
    let h_x = xs[1] - xs[0];
    // Startup correction for the composed stretched case. Solutions behave
    // like c0 + mu t^(alpha+gamma) near t = 0; the L1 scheme has an index
    // locked error layer on the t^(alpha+gamma) part whose jump the second
    // convolution picks up at O(1) weight for any step size. Making the
    // first application exact on that monomial removes the layer.
    let singular_corr = match op {
        TimeOperator::Stretched(ord) if a_coef != 0.0 => {
            let b = ord.alpha + ord.gamma;
            let (coeff, _) = fracops::power_rule(b, &ord)?;
            let g: Vec<f64> = (0..nt).map(|i| (i as f64 * h_t).powf(b)).collect();
            let gl1 = fracops::apply_stretched_caputo(&g, h_t, &ord)?;
            let corr: Vec<f64> = gl1.iter().map(|v| coeff - v).collect();
            Some((b, coeff, corr))
        }
        _ => None,
    };
    // time-derivative columns
    let mut dt1 = vec![vec![0.0; nx]; nt];
    let mut dt2 = vec![vec![0.0; nx]; nt];
    for j in 0..nx {
        let col: Vec<f64> = values.iter().map(|row| row[j]).collect();
        match op {
            TimeOperator::Classical => {
                for i in 1..nt - 1 {
                    dt1[i][j] = (col[i + 1] - col[i - 1]) / (2.0 * h_t);
                    dt2[i][j] = (col[i + 1] - 2.0 * col[i] + col[i - 1]) / (h_t * h_t);
                }
            }
            TimeOperator::Stretched(ord) => {
                let mut d1 = fracops::apply_stretched_caputo(&col, h_t, &ord)?;
                if let Some((b, _, corr)) = &singular_corr {
                    // leading singular coefficient from the first increment;
                    // corr[0] = D t^b at 0+, so d1[0] gets the correct limit
                    let mu = (col[1] - col[0]) / h_t.powf(*b);
                    for i in 0..nt {
                        d1[i] += mu * corr[i];
                    }
                }
                for i in 0..nt {
                    dt1[i][j] = d1[i];
                }
                if a_coef != 0.0 {
                    let d2 = fracops::apply_stretched_caputo(&d1, h_t, &ord)?;
                    for i in 0..nt {
                        dt2[i][j] = d2[i];
                    }
                }
            }
        }
    }
    let t_last = match op {
        TimeOperator::Classical => nt - 1,
        TimeOperator::Stretched(_) => nt,
    };
    let mut sup: f64 = 0.0;
    let mut l2 = 0.0;
    let mut count = 0usize;
    for i in 1..t_last {
        if (i as f64) * h_t < t_window {
            continue;
        }
        for j in 1..nx - 1 {
            let gx = (values[i][j + 1] - values[i][j - 1]) / (2.0 * h_x);
            let gxx = (values[i][j + 1] - 2.0 * values[i][j] + values[i][j - 1]) / (h_x * h_x);
            let space = model.diffusion(xs[j]) * gxx + model.drift(xs[j]) * gx;
            let r = a_coef * dt2[i][j] + b_coef * dt1[i][j] - space;
            sup = sup.max(r.abs());
            l2 += r * r;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::Domain("residual window contains no grid nodes".into()));
    }
    Ok((sup, (l2 / count as f64).sqrt()))
}

/// Classical Ornstein-Uhlenbeck transition kernel (closed form): Gaussian
/// with mean mu + (y - mu) e^{-theta t} and variance sigma2 (1 - e^{-2 theta t}).
pub fn ou_classical_kernel(theta: f64, mu: f64, sigma2: f64, x: f64, t: f64, y: f64) -> f64 {
    let mean = mu + (y - mu) * (-theta * t).exp();
    let var = sigma2 * (1.0 - (-2.0 * theta * t).exp());
    (-(x - mean) * (x - mean) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}
