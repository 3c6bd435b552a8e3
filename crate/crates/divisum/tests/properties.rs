//! Property tests over randomized inputs.

use proptest::prelude::*;

use divisum::approx::{self, ApproxKind};
use divisum::report::fmt_sig;
use divisum::series;
use divisum::sieve::FactorSieve;

fn sieve() -> &'static FactorSieve {
    use std::sync::OnceLock;
    static SIEVE: OnceLock<FactorSieve> = OnceLock::new();
    SIEVE.get_or_init(|| FactorSieve::new(100_000).unwrap())
}

proptest! {
    #[test]
    fn batch_matches_point_on_random_windows(
        start in 1u64..50_000,
        len in 1u64..500,
        r in 1.0f64..200.0,
    ) {
        let s = sieve();
        let arr = approx::batch(ApproxKind::LambdaR, start, start + len, r, s).unwrap();
        for n in start..start + len {
            let point = approx::lambda_r_point(n as i64, r, s).unwrap();
            prop_assert!((arr.get(n as i64) - point).abs() < 1e-6,
                "n = {n}: {} vs {point}", arr.get(n as i64));
        }
    }

    #[test]
    fn truncation_complete_below_cutoff(n in 2i64..10_000) {
        // Moebius identity: Lambda_R(n) = Lambda(n) once R covers all divisors
        let s = sieve();
        let r = 10_000.0;
        let lr = approx::lambda_r_point(n, r, s).unwrap();
        prop_assert!((lr - s.von_mangoldt(n as u64)).abs() < 1e-9);
    }

    #[test]
    fn moebius_matches_trial_division(n in 1u64..100_000) {
        let s = sieve();
        let mut m = n;
        let mut distinct = 0u32;
        let mut squarefree = true;
        let mut d = 2u64;
        while d * d <= m {
            if m % d == 0 {
                let mut e = 0;
                while m % d == 0 { m /= d; e += 1; }
                squarefree &= e == 1;
                distinct += 1;
            }
            d += 1;
        }
        if m > 1 { distinct += 1; }
        let expect = if !squarefree { 0 } else if distinct % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(s.moebius(n).unwrap(), expect);
    }

    #[test]
    fn pair_series_two_routes_agree(k in -500i64..500) {
        prop_assume!(k != 0);
        let s = sieve();
        let reduced = series::sseries_j(k, 2, s).unwrap();
        let via_vec = series::sseries_vec_exact(&[0, k], s).unwrap();
        prop_assert_eq!(reduced, via_vec);
    }

    #[test]
    fn shifting_preserves_float_series(
        k1 in 1i64..60,
        k2 in 61i64..120,
        c in -1000i64..1000,
    ) {
        let s = sieve();
        let a = series::sseries_vec(&[0, k1, k2], 10_000, s).unwrap().value;
        let b = series::sseries_vec(&[c, k1 + c, k2 + c], 10_000, s).unwrap().value;
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn sig_formatting_round_trips(x in -1e12f64..1e12, sig in 10usize..15) {
        let printed = fmt_sig(x, sig);
        let parsed: f64 = printed.parse().unwrap();
        let tol = 10f64.powi(-(sig as i32) + 1) * x.abs().max(1e-300);
        prop_assert!((parsed - x).abs() <= tol, "{x} printed as {printed}");
    }
}
