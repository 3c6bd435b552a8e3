//! The truncated Moebius/squarefree divisor sums and their predicted
//! main terms: residual decay, the Hildebrand-type linear growth, the
//! empirically extracted constant term, and the finite identity that
//! holds bit-for-bit in exact arithmetic.
//!
//! ```bash
//! cargo run --release --example lemma_sums
//! ```

use divisum::lemmas::{
    lemma1_plain, lemma1_sum, lemma2_log_sum, lemma2_sum, lemma3_sum, lemma4_exact,
    lemma4_truncated,
};
use divisum::series::ConstantsTable;
use divisum::sieve::FactorSieve;

fn main() {
    let sieve = FactorSieve::new(1_000_000).unwrap();
    let consts = ConstantsTable::with_prime_limit(1_000_000).unwrap();

    println!("log-weighted Moebius sum -> singular series (k=2, j=1):");
    println!("{:>9} {:>14} {:>14} {:>12}", "R", "lhs", "main", "residual");
    for r in [1e3, 1e4, 1e5, 1e6] {
        let v = lemma1_sum(r, 2, 1, &sieve, &consts).unwrap();
        println!("{r:>9} {:>14.8} {:>14.8} {:>12.2e}", v.lhs, v.main, v.residual);
    }
    println!(
        "plain Moebius sum at R=1e6 (should drift to 0): {:.2e}",
        lemma1_plain(1e6, 2, 1, &sieve).unwrap()
    );

    println!("\nsquarefree sum grows linearly in log R (k=2, j=2):");
    println!("{:>9} {:>14} {:>14} {:>12}", "R", "lhs", "main", "scaled res");
    for r in [1e3, 1e4, 1e5, 1e6] {
        let v = lemma2_sum(r, 2, 2, &sieve, &consts).unwrap();
        println!(
            "{r:>9} {:>14.8} {:>14.8} {:>12.4}",
            v.lhs, v.main, v.scaled_residual
        );
    }

    println!("\nlog-weighted squarefree sum: the constant term is read off empirically:");
    println!("{:>9} {:>14} {:>16}", "R", "lhs", "empirical E");
    for r in [1e4, 1e5, 1e6] {
        let v = lemma2_log_sum(r, 1, 1, &sieve, &consts).unwrap();
        println!("{r:>9} {:>14.6} {:>16.10}", v.lhs, v.empirical_e);
    }

    println!("\nMoebius sum against the singular series (k=6, j=1):");
    let v = lemma3_sum(1e6, 6, 1, &sieve, &consts).unwrap();
    println!("  lhs = {:.8}, main = {:.8}", v.lhs, v.main.unwrap());

    println!("\nsquarefree sum against the singular series (k=2, j=1):");
    for r in [1e4, 1e6] {
        let v = lemma4_truncated(r, 2, 1, &sieve, &consts).unwrap();
        println!("  R={r:>9}: lhs = {:.8}, main = {:.8}", v.lhs, v.main);
    }

    println!("\nthe finite identity is exact, constants and all:");
    for (r, k, j) in [(3u64, 2u64, 1u32), (15, 2, 1), (3, 2, 2), (105, 6, 1), (77, 30, 2)] {
        let (lhs, rhs) = lemma4_exact(r, k, j, &sieve).unwrap();
        println!(
            "  r={r:<4} k={k:<3} j={j}: sum over d|r = {lhs}, S_{}(rk) = {rhs}, equal: {}",
            j + 1,
            lhs == rhs
        );
    }
}
