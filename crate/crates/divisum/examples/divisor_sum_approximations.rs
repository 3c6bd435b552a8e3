//! The truncated divisor sums that approximate the von Mangoldt function:
//! point evaluation, additive-sieve batches, partial sums, and primes in
//! arithmetic progressions.
//!
//! ```bash
//! cargo run --release --example divisor_sum_approximations
//! ```

use divisum::approx::{
    batch, bv_sum, lambda_lower_r_point, lambda_r_point, psi, psi_in_ap, psi_r, ApproxKind,
};
use divisum::sieve::FactorSieve;

fn main() {
    let sieve = FactorSieve::new(2_000_000).unwrap();
    let r = 100.0;

    println!("Lambda_R(n) next to Lambda(n), R = {r}:");
    println!("{:>6} {:>14} {:>14} {:>14}", "n", "Lambda_R", "lambda_R", "Lambda");
    for n in [1i64, 30, 97, 98, 128, 1009, 5040] {
        println!(
            "{n:>6} {:>14.8} {:>14.8} {:>14.8}",
            lambda_r_point(n, r, &sieve).unwrap(),
            lambda_lower_r_point(n, r, &sieve).unwrap(),
            sieve.von_mangoldt(n as u64)
        );
    }
    println!("(for 1 < n <= R the truncation is complete and Lambda_R = Lambda exactly)");

    // batch arrays match point evaluation
    let arr = batch(ApproxKind::LambdaR, 1, 100_001, r, &sieve).unwrap();
    let mut worst = 0.0f64;
    for n in 1..=100_000i64 {
        worst = worst.max((arr.get(n) - lambda_r_point(n, r, &sieve).unwrap()).abs());
    }
    println!("\nbatch vs point over [1, 1e5]: max |dev| = {worst:.3e}");

    // partial sums: psi_R(x)/x drifts to 1 like psi(x)/x
    println!("\npartial sums with R = 1000:");
    println!("{:>9} {:>12} {:>12}", "x", "psi(x)/x", "psi_R(x)/x");
    for x in [10_000u64, 100_000, 1_000_000, 2_000_000] {
        println!(
            "{x:>9} {:>12.6} {:>12.6}",
            psi(x, &sieve).unwrap() / x as f64,
            psi_r(x, 1_000.0, &sieve).unwrap() / x as f64
        );
    }

    // arithmetic progressions and the equidistribution sum
    let x = 1_000_000u64;
    println!("\nprimes in progressions mod 4 at x = {x}:");
    for a in [1u64, 3] {
        println!(
            "  psi(x;4,{a}) = {:>13.3}  (x/phi(4) = {})",
            psi_in_ap(x, 4, a, &sieve).unwrap(),
            x / 2
        );
    }
    let q_max = 100u64;
    let bv = bv_sum(x, q_max, &sieve).unwrap();
    println!(
        "sum over q <= {q_max} of max (a,q)=1 |psi(x;q,a) - x/phi(q)| = {bv:.1} = {:.4} x",
        bv / x as f64
    );
}
