//! Brute-force correlation sums of the truncated divisor sum against
//! their predicted main terms, and the exact congruence-count envelope
//! behind the triple correlation.
//!
//! ```bash
//! cargo run --release --example correlations
//! ```

use divisum::correlate::{
    brute_corr, decomp_check_s3, pair_main, predictor_theorem1, triple_main, CorrelationSpec,
};
use divisum::series::ConstantsTable;
use divisum::sieve::FactorSieve;

fn main() {
    let n = 1_000_000u64;
    let nf = n as f64;
    let sieve = FactorSieve::new(n + 100).unwrap();
    let consts = ConstantsTable::with_prime_limit(1_000_000).unwrap();

    println!("correlations at N = {n} (ratio -> 1 as N grows):");
    println!(
        "{:>22} {:>9} {:>16} {:>16} {:>8}",
        "spec", "R", "brute", "predictor", "ratio"
    );
    let cases: Vec<(&str, Vec<i64>, Vec<u32>, f64)> = vec![
        ("S_1", vec![0], vec![1], 1e3),
        ("S_2(0)", vec![0], vec![2], nf.powf(0.3)),
        ("S_2(2)", vec![0, 2], vec![1, 1], nf.powf(0.3)),
        ("S_3(0)", vec![0], vec![3], nf.powf(0.15)),
        ("S_3(2) = (0,2),(2,1)", vec![0, 2], vec![2, 1], nf.powf(0.15)),
        ("S_3(2,6)", vec![0, 2, 6], vec![1, 1, 1], nf.powf(0.2)),
    ];
    for (name, shifts, powers, r) in cases {
        let spec = CorrelationSpec::new(shifts, powers).unwrap();
        let brute = brute_corr(n, &spec, r, &sieve).unwrap();
        let pred = predictor_theorem1(n, r, &spec, 1_000_000, &sieve).unwrap();
        let ratio = if pred != 0.0 { brute / pred } else { f64::NAN };
        println!("{name:>22} {r:>9.1} {brute:>16.3} {pred:>16.3} {ratio:>8.4}");
    }

    println!("\ndedicated pair/triple main terms:");
    let r = nf.powf(0.3);
    println!(
        "  pair_main(0)  = {:>14.3}   pair_main(2) = {:>14.3}",
        pair_main(0, n, r, &sieve, &consts).unwrap(),
        pair_main(2, n, r, &sieve, &consts).unwrap()
    );
    let r = nf.powf(0.2);
    println!(
        "  triple_main(0,0) = {:>11.3}   triple_main(2,0) = {:>11.3}   triple_main(2,6) = {:>11.3}",
        triple_main(0, 0, n, r, &sieve, &consts).unwrap(),
        triple_main(2, 0, n, r, &sieve, &consts).unwrap(),
        triple_main(2, 6, n, r, &sieve, &consts).unwrap()
    );

    println!("\nexact envelope |S_3 - N T_3| <= sum of per-triple slacks:");
    for kk in [[0i64, 0, 0], [0, 1, 2], [0, 2, 6]] {
        let d = decomp_check_s3(100_000, 30.0, kk[0], kk[1], kk[2], &sieve).unwrap();
        println!(
            "  k={kk:?}: |{:.2} - {:.2}| = {:.2} <= {:.2}",
            d.brute,
            d.n_times_t3,
            (d.brute - d.n_times_t3).abs(),
            d.bound
        );
    }
}
