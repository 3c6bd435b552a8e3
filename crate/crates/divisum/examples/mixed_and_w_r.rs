//! Mixed correlations and the W_R double sum: the bridge between the
//! truncated divisor sum and the primes themselves.
//!
//! ```bash
//! cargo run --release --example mixed_and_w_r
//! ```

use divisum::correlate::{brute_corr, w_r_closed, w_r_direct, CorrelationSpec};
use divisum::series::ConstantsTable;
use divisum::sieve::FactorSieve;

fn main() {
    let sieve = FactorSieve::new(2_000_000).unwrap();
    let consts = ConstantsTable::with_prime_limit(1_000_000).unwrap();

    println!("W_R double sum vs its closed form:");
    println!("{:>10} {:>9} {:>14} {:>14}", "shifts", "R", "direct", "closed");
    for (jv, r) in [
        ([2i64, 2], 1e4),
        ([2, 6], 1e4),
        ([2, 6], 3e4),
        ([4, 10], 3e4),
        ([2, 4], 3e4), // the closed form is exactly zero here
    ] {
        let direct = w_r_direct(r, &jv, &sieve).unwrap();
        let closed = w_r_closed(r, (jv[0], jv[1]), &sieve, &consts).unwrap();
        println!("{:>10} {r:>9.0} {direct:>14.6} {closed:>14.6}", format!("{jv:?}"));
    }
    println!("(equal shifts grow like S((0,k)) log R; distinct ones settle at S((0,k1,k2)))");

    // single-shift case collapses to the log-weighted Moebius sum
    let w1 = w_r_direct(1e4, &[2], &sieve).unwrap();
    println!("\nsingle shift: W_R((2)) = {w1:.8} -> S_2(2) = {:.8}", 2.0 * consts.c2);

    println!("\nmixed vs pure pair correlation, N = 1e6 (they merge as R grows):");
    println!("{:>6} {:>12} {:>12} {:>10}", "R", "pure", "mixed", "rel diff");
    let n = 1_000_000u64;
    for exp in [0.1, 0.15, 0.2, 0.25] {
        let r = (n as f64).powf(exp);
        let spec = CorrelationSpec::new(vec![0, 2], vec![1, 1]).unwrap();
        let pure = brute_corr(n, &spec, r, &sieve).unwrap();
        let mixed_spec = CorrelationSpec::new(vec![0, 2], vec![1, 1])
            .unwrap()
            .mixed()
            .unwrap();
        let mixed = brute_corr(n, &mixed_spec, r, &sieve).unwrap();
        println!(
            "{r:>6.1} {pure:>12.1} {mixed:>12.1} {:>10.4}",
            (mixed - pure).abs() / pure
        );
    }
}
