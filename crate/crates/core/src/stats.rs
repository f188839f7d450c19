//! Small statistics toolkit for the Monte Carlo cross-validation layer:
//! Kolmogorov-Smirnov tests and mean/stderr summaries.

use crate::error::{Error, Result};

/// Result of a Kolmogorov-Smirnov test.
#[derive(Debug, Clone, Copy)]
pub struct KsTest {
    /// sup-distance between the compared distribution functions
    pub statistic: f64,
    /// asymptotic Kolmogorov p-value
    pub p_value: f64,
}

/// Survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // dual theta series: the direct alternating sum loses all accuracy
        // for small lambda, where the CDF itself is tiny
        let mut cdf = 0.0;
        for k in 1..=100u32 {
            let e = (2 * k - 1) as f64 * std::f64::consts::PI / lambda;
            let term = (-e * e / 8.0).exp();
            cdf += term;
            if term < 1e-18 {
                break;
            }
        }
        cdf *= (2.0 * std::f64::consts::PI).sqrt() / lambda;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
        s += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * s).clamp(0.0, 1.0)
}

fn effective_lambda(n_eff: f64, d: f64) -> f64 {
    // finite-sample correction (Stephens): lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) d
    let sn = n_eff.sqrt();
    (sn + 0.12 + 0.11 / sn) * d
}

/// Two-sample Kolmogorov-Smirnov test.
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> Result<KsTest> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::InvalidParameter("empty sample".into()));
    }
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(|p, q| p.partial_cmp(q).unwrap());
    b.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n1, n2) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < n1 && j < n2 {
        let x = a[i].min(b[j]);
        while i < n1 && a[i] <= x {
            i += 1;
        }
        while j < n2 && b[j] <= x {
            j += 1;
        }
        let diff = (i as f64 / n1 as f64 - j as f64 / n2 as f64).abs();
        d = d.max(diff);
    }
    let n_eff = (n1 as f64 * n2 as f64) / (n1 + n2) as f64;
    Ok(KsTest {
        statistic: d,
        p_value: kolmogorov_sf(effective_lambda(n_eff, d)),
    })
}

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
pub fn ks_one_sample(xs: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsTest> {
    if xs.is_empty() {
        return Err(Error::InvalidParameter("empty sample".into()));
    }
    let mut a = xs.to_vec();
    a.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let n = a.len() as f64;
    let mut d = 0.0f64;
    for (k, x) in a.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((f - k as f64 / n).abs());
        d = d.max(((k + 1) as f64 / n - f).abs());
    }
    Ok(KsTest {
        statistic: d,
        p_value: kolmogorov_sf(effective_lambda(n, d)),
    })
}

/// Sample mean and standard error (sd / sqrt(n)).
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kolmogorov_sf_endpoints() {
        assert_eq!(kolmogorov_sf(0.0), 1.0);
        assert!(kolmogorov_sf(0.2) > 0.999);
        assert!(kolmogorov_sf(3.0) < 1e-6);
        // Q(0.8276) ~ 0.5 (median of the Kolmogorov distribution)
        assert!((kolmogorov_sf(0.8276) - 0.5).abs() < 1e-3);
    }

    #[test]
    fn two_sample_same_distribution_has_high_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let xs: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let ys: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let t = ks_two_sample(&xs, &ys).unwrap();
        assert!(t.p_value > 0.01, "p = {}", t.p_value);
    }

    #[test]
    fn two_sample_detects_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let xs: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let ys: Vec<f64> = (0..5000).map(|_| rng.random::<f64>() + 0.1).collect();
        let t = ks_two_sample(&xs, &ys).unwrap();
        assert!(t.p_value < 1e-6, "p = {}", t.p_value);
    }

    #[test]
    fn one_sample_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let xs: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let t = ks_one_sample(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(t.p_value > 0.01, "p = {}", t.p_value);
        let t2 = ks_one_sample(&xs, |x| (x * x).clamp(0.0, 1.0)).unwrap();
        assert!(t2.p_value < 1e-6);
    }

    #[test]
    fn mean_stderr_basic() {
        let (m, se) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert!((m - 2.5).abs() < 1e-15);
        // sd = sqrt(5/3), se = sd/2
        assert!((se - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-15);
    }
}
