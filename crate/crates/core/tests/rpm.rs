use proptest::prelude::*;
use radspec_core::precision::{working_precision, BigReal};
use radspec_core::rpm::{hankel_at, riccati_series, rpm_track, RpmResult, ScanOptions, Window};
use radspec_core::truncation::truncation_solutions;

fn real(v: f64) -> BigReal {
    BigReal::from_f64(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coefficients_have_alternating_parity_in_alpha(s in 0.0f64..3.0, alpha in -5.0f64..5.0, w in -10.0f64..30.0) {
        let (s, alpha, w) = (real(s), real(alpha), real(w));
        let plus = riccati_series(&s, &alpha, &w, 24).unwrap().coeffs;
        let minus = riccati_series(&s, &-&alpha, &w, 24).unwrap().coeffs;
        for (j, (p, m)) in plus.iter().zip(&minus).enumerate() {
            let expected = if j % 2 == 0 { -p } else { p.clone() };
            prop_assert!((m - &expected).abs() <= BigReal::pow2(-200) * p.abs().max(BigReal::one()));
        }
    }

    #[test]
    fn determinant_is_even_or_odd_in_alpha(s in 0.0f64..2.0, alpha in 0.1f64..4.0, w in -5.0f64..25.0, dim in 2usize..=10) {
        let (s, alpha, w) = (real(s), real(alpha), real(w));
        let plus = hankel_at(&s, &alpha, &w, dim, 0).unwrap();
        let minus = hankel_at(&s, &-&alpha, &w, dim, 0).unwrap();
        let parity = if dim % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(minus.sign, plus.sign * parity);
        if let (Some(a), Some(b)) = (&plus.ln_abs, &minus.ln_abs) {
            prop_assert!((a - b).abs() < BigReal::pow2(-150) * a.abs().max(BigReal::one()));
        }
    }
}

#[test]
fn determinant_vanishes_at_every_truncation_solution() {
    for s in [BigReal::zero(), BigReal::ratio(1, 2), BigReal::one()] {
        for n in 0..=4usize {
            for sol in truncation_solutions(n, &s).unwrap() {
                for dim in n + 1..=n + 6 {
                    let ld = hankel_at(&s, &sol.alpha_root, &sol.w, dim, 0).unwrap();
                    assert_eq!(ld.sign, 0, "s={s} n={n} i={} D={dim}", sol.i);
                }
            }
        }
    }
}

/// Stability error of the root nearest each reference level.
fn level_errors(row: &RpmResult, reference: &[BigReal]) -> Vec<f64> {
    reference
        .iter()
        .map(|target| {
            row.own()
                .into_iter()
                .min_by(|a, b| (&a.w - target).abs().total_cmp(&(&b.w - target).abs()))
                .and_then(|r| r.stability_error.as_ref())
                .map_or(f64::INFINITY, BigReal::to_f64)
        })
        .collect()
}

#[test]
fn stability_errors_shrink_over_published_dimensions() {
    let floor = BigReal::pow2(-(working_precision() as i32) / 2).to_f64();
    let s = BigReal::zero();
    for sign in [-1, 1] {
        let alpha = BigReal::from(2).sqrt().unwrap() * sign;
        let window = Window::for_levels(&s, &alpha, 4);
        let track = rpm_track(&s, &alpha, 8..=15, 0, &window, &ScanOptions::default()).unwrap();
        let top = track.last().unwrap();
        let reference: Vec<BigReal> = top
            .stable_levels()
            .into_iter()
            .filter(|r| r.attribution.includes_same())
            .take(4)
            .map(|r| r.w.clone())
            .collect();
        assert_eq!(reference.len(), 4, "alpha sign {sign}");
        let errors: Vec<Vec<f64>> = track.iter().map(|row| level_errors(row, &reference)).collect();
        for level in 0..4 {
            for pair in errors.windows(2) {
                let (before, after) = (pair[0][level], pair[1][level]);
                assert!(
                    after <= before.max(floor),
                    "alpha sign {sign}, level {level}: error grew from {before:e} to {after:e}"
                );
            }
        }
    }
}
