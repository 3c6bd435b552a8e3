//! Singular series three ways: exact rational forms carrying C2/C3
//! symbolically, truncated Euler products, and the pair/triple reductions
//! that connect them.
//!
//! ```bash
//! cargo run --release --example singular_series
//! ```

use divisum::series::{
    c_constant, d_constant, nu_p, sseries_j, sseries_vec, sseries_vec_exact, ConstantsTable,
};
use divisum::sieve::FactorSieve;

fn main() {
    let sieve = FactorSieve::new(100_000).unwrap();
    let prime_limit = 1_000_000u64;
    let consts = ConstantsTable::with_prime_limit(prime_limit).unwrap();

    println!("constants truncated at p <= {prime_limit}:");
    println!("  C2 = {:.12}  (tail bound {:.1e})", consts.c2, consts.tail_bound(2));
    println!("  C3 = {:.12}  (tail bound {:.1e})", consts.c3, consts.tail_bound(3));
    for j in 1..=3u32 {
        println!("  D{j} = {:+.12}", consts.d(j));
    }
    println!(
        "  doubling the truncation moves C2 by {:.2e}",
        (c_constant(2, 2 * prime_limit).unwrap() - consts.c2).abs()
    );
    println!(
        "  d_constant(1) via its own prime sum: {:.12}",
        d_constant(1, prime_limit).unwrap()
    );

    println!("\nexact S_j(n) = q * C2^a * C3^b:");
    println!("{:>6} {:>3} {:>12} {:>16}", "n", "j", "exact form", "float value");
    for (n, j) in [(2i64, 2u32), (3, 2), (6, 2), (30, 2), (6, 3), (36, 3), (210, 3)] {
        let s = sseries_j(n, j, &sieve).unwrap();
        println!("{n:>6} {j:>3} {:>12} {:>16.10}", s.to_string(), s.to_f64(&consts));
    }

    println!("\noccupied residue classes drive the product:");
    let v = [0i64, 2, 4];
    for p in [2u64, 3, 5] {
        println!("  nu_{p}({v:?}) = {}", nu_p(&v, p).unwrap());
    }
    println!("  -> S((0,2,4)) = {} (three classes mod 3 leave no room for primes)",
        sseries_vec_exact(&v, &sieve).unwrap());

    println!("\npair and triple reductions vs the raw Euler product:");
    println!(
        "{:>14} {:>14} {:>14} {:>10}",
        "shifts", "exact", "euler product", "tail bound"
    );
    for jv in [
        vec![0i64, 2],
        vec![0, 6],
        vec![0, 2, 6],
        vec![0, 4, 6],
        vec![0, 6, 12],
        vec![0, 2, 12],
    ] {
        let exact = sseries_vec_exact(&jv, &sieve).unwrap();
        let float = sseries_vec(&jv, prime_limit, &sieve).unwrap();
        println!(
            "{:>14} {:>14.10} {:>14.10} {:>10.1e}",
            format!("{jv:?}"),
            exact.to_f64(&consts),
            float.value,
            float.tail_bound
        );
    }

    // shifting every component leaves the series unchanged
    let base = sseries_vec(&[0, 2, 6], prime_limit, &sieve).unwrap().value;
    let moved = sseries_vec(&[101, 103, 107], prime_limit, &sieve).unwrap().value;
    println!("\nshift invariance: {base:.12} vs {moved:.12}");
}
