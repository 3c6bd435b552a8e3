//! Tour of the factor sieve: factorization, the multiplicative helpers
//! built on it, and a cross-check of the prime count against an
//! independent bit sieve.
//!
//! ```bash
//! cargo run --release --example sieve_tour
//! ```

use divisum::sieve::{p_of, small_primes, FactorSieve};

fn main() {
    let limit = 10_000_000u64;
    let t = std::time::Instant::now();
    let sieve = FactorSieve::new(limit).unwrap();
    println!("built factor sieve to {limit} in {:?}", t.elapsed());

    println!("\nfactorizations:");
    for n in [2u64, 360, 1_000_003, 9_999_991, 9_999_999] {
        let f = sieve.factorize(n);
        let parts: Vec<String> = f
            .factors
            .iter()
            .map(|&(p, e)| {
                if e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        println!("  {n} = {}", parts.join(" * "));
    }

    println!("\nmultiplicative functions at n = 60060:");
    let n = 60060u64;
    println!("  mu(n)      = {}", sieve.moebius(n).unwrap());
    println!("  phi(n)     = {}", sieve.euler_phi(n));
    println!("  kernel(n)  = {}", sieve.squarefree_kernel(n));
    println!("  divisors   = {} of them", sieve.divisors(n).len());
    println!("  m(n)       = {:.12}", sieve.m_of(n));

    println!("\nphi_j on squarefree 15015 = 3*5*7*11*13:");
    for j in 0..=3u32 {
        println!("  phi_{j} = {}", sieve.phi_j(15015, j).unwrap());
    }

    println!("\np(j) selects mandatory prime divisors:");
    for j in 0..=6u64 {
        print!("  p({j}) = {}", p_of(j));
    }
    println!();

    // independent check: count primes with a plain bit sieve
    let t = std::time::Instant::now();
    let via_spf = sieve.prime_count();
    let via_bits = small_primes(limit).len() as u64;
    println!(
        "\npi({limit}) = {via_spf} (factor sieve) = {via_bits} (bit sieve), checked in {:?}",
        t.elapsed()
    );
    assert_eq!(via_spf, via_bits);
}
