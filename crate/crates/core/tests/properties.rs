//! Randomized property tests for the structural invariants of the library.

use ksdiff_core::fracops::{self, StretchedOrder, TelegraphCoeffs};
use ksdiff_core::kilbas_saigo::{ks_bounds, KSParams, KsEvaluator};
use ksdiff_core::stats;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // E_{a,m,m-1}(-x) sits between its two algebraic bounds and decreases in x
    #[test]
    fn ks_bounds_sandwich_and_monotone(
        a in 0.2f64..0.9,
        m in 0.5f64..3.0,
        x in 0.0f64..30.0,
    ) {
        let p = KSParams::new(a, m, m - 1.0).unwrap();
        let ev = KsEvaluator::new(p, 1e-10);
        let v = ev.eval_neg(x).unwrap();
        let (lo, hi) = ks_bounds(x, a, m).unwrap();
        prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9, "{lo} <= {v} <= {hi}");
        let v2 = ev.eval_neg(x + 0.5).unwrap();
        prop_assert!(v2 <= v + 1e-12);
    }

    // conjugate symmetry of the evaluator off the real axis
    #[test]
    fn ks_eval_conjugate_symmetry(
        a in 0.3f64..0.8,
        gamma in 0.0f64..0.3,
        r in 0.5f64..30.0,
        arg in 0.1f64..1.2,
    ) {
        let ord = StretchedOrder::new(a, gamma.min(1.0 - a)).unwrap();
        let ev = KsEvaluator::new(ord.ks_params(), 1e-9);
        let z = Complex64::from_polar(r, std::f64::consts::PI - arg);
        let v = ev.eval(z).unwrap();
        let vc = ev.eval(z.conj()).unwrap();
        prop_assert!((v.conj() - vc).norm() <= 1e-9 * (1.0 + v.norm()));
    }

    // coefficient recursion c_n [n] = c_{n-1} against the direct product form
    #[test]
    fn bracket_recursion(
        a in 0.2f64..0.9,
        gamma in 0.0f64..0.4,
        n in 1u32..25,
    ) {
        let ord = StretchedOrder::new(a, gamma.min(1.0 - a)).unwrap();
        let b_n = fracops::bracket(n, &ord).unwrap();
        let f_n = fracops::bracket_factorial(n, &ord).unwrap();
        let f_prev = fracops::bracket_factorial(n - 1, &ord).unwrap();
        prop_assert!((f_n - b_n * f_prev).abs() <= 1e-10 * f_n.abs().max(1e-300));
    }

    // telegraph root/weight structure: Vieta products and K1 + K2 = 1
    #[test]
    fn telegraph_vieta_and_weight_sum(
        a_coef in 0.2f64..3.0,
        b_coef in 0.0f64..3.0,
        lambda in 0.1f64..50.0,
    ) {
        let c = TelegraphCoeffs::new(a_coef, b_coef, lambda).unwrap();
        let (red_b, red_lam) = c.reduced().unwrap();
        match fracops::telegraph_roots(&c) {
            Ok(rw) => {
                let sum = rw.a_star + rw.b_star;
                let prod = rw.a_star * rw.b_star;
                prop_assert!((sum.re + red_b).abs() < 1e-9 * (1.0 + red_b.abs()));
                prop_assert!(sum.im.abs() < 1e-9);
                prop_assert!((prod.re - red_lam).abs() < 1e-9 * (1.0 + red_lam.abs()));
                let k = rw.k1 + rw.k2;
                prop_assert!((k - Complex64::new(1.0, 0.0)).norm() < 1e-9);
            }
            Err(_) => {
                // double root: only on the measure-zero set B^2 = 4 A lambda
                prop_assert!((red_b * red_b - 4.0 * red_lam).abs() < 1e-6);
            }
        }
    }

    // power rule maps t^beta into the expected monomial and annihilates constants
    #[test]
    fn power_rule_consistency(
        a in 0.2f64..0.9,
        gamma in 0.0f64..0.4,
        beta in 0.5f64..5.0,
    ) {
        let ord = StretchedOrder::new(a, gamma.min(1.0 - a)).unwrap();
        let (c0, _) = fracops::power_rule(0.0, &ord).unwrap();
        prop_assert_eq!(c0, 0.0);
        let b = beta.max(a + 1e-3);
        let (coeff, expo) = fracops::power_rule(b, &ord).unwrap();
        prop_assert!(coeff.is_finite() && coeff > 0.0);
        prop_assert!((expo - (b - ord.alpha - ord.gamma)).abs() < 1e-12);
    }

    // Kolmogorov survival function is a proper tail probability
    #[test]
    fn kolmogorov_sf_monotone(l1 in 0.0f64..3.0, dl in 0.0f64..1.0) {
        let q1 = stats::kolmogorov_sf(l1);
        let q2 = stats::kolmogorov_sf(l1 + dl);
        prop_assert!((0.0..=1.0).contains(&q1));
        prop_assert!(q2 <= q1 + 1e-12);
    }
}
