use proptest::prelude::*;
use radspec_core::precision::BigReal;
use radspec_core::ritz::{expectation_inv_y, ritz_converged, ritz_spectrum, ConvergenceOptions};
use radspec_core::spectra::truncation_gap;
use radspec_core::truncation::truncation_solutions;

fn real(v: f64) -> BigReal {
    BigReal::from_f64(v)
}

fn s_value(k: u8) -> BigReal {
    BigReal::ratio(k as i64, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Away from the truncation roots no low level equals `2(n + s + 1)`.
    #[test]
    fn no_level_on_truncation_energies_between_roots(k in 0u8..=2, alpha in -5.0f64..5.0) {
        let s = s_value(k);
        let a = real(alpha);
        let near_root = (0..=4usize).any(|n| {
            truncation_solutions(n, &s).unwrap().iter().any(|x| (&x.alpha_root - &a).abs().to_f64() < 1e-3)
        });
        prop_assume!(!near_root);
        let gap = truncation_gap(&s, &a, 5, 4).unwrap();
        prop_assert!(gap.to_f64() > 1e-6, "gap {}", gap);
    }

    /// Neighbouring grid values differ by at most `max <1/y> * step`.
    #[test]
    fn curves_are_lipschitz_in_alpha(k in 0u8..=2, alpha in -4.0f64..4.0, step in 0.01f64..0.25, level in 0usize..3) {
        let s = s_value(k);
        let opts = ConvergenceOptions::with_levels(level + 1);
        let a = ritz_converged(&s, &real(alpha), &opts).unwrap();
        let n = a.result.n;
        let b = ritz_spectrum(&s, &real(alpha + step), n).unwrap();
        let bound = expectation_inv_y(&a.result, level).unwrap().max(expectation_inv_y(&b, level).unwrap());
        let change = (&b.eigenvalues[level] - &a.result.eigenvalues[level]).abs();
        prop_assert!(b.eigenvalues[level] < a.result.eigenvalues[level]);
        prop_assert!(change <= bound * real(step) * real(1.0 + 1e-6), "change {}", change);
    }
}
