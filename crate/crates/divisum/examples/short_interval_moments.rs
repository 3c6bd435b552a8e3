//! Moments of prime counts in short intervals against the Poisson model,
//! the matching polynomials for the truncated approximation, and the
//! optimized mixed-moment quadratic.
//!
//! ```bash
//! cargo run --release --example short_interval_moments
//! ```

use divisum::moments::{
    gallagher_moment, m_h_rho, m_h_rho_closed, moment, multinomial_identity_check, optimal_c,
    pk_poly, singular_avg, stirling2, MomentParams, MomentSource,
};
use divisum::series::ConstantsTable;
use divisum::sieve::FactorSieve;

fn main() {
    let consts = ConstantsTable::with_prime_limit(1_000_000).unwrap();

    println!("Stirling numbers feed the Poisson moments:");
    for k in 1..=4u32 {
        let row: Vec<String> = (1..=k).map(|r| stirling2(k, r).unwrap().to_string()).collect();
        let ok = (1..=k).all(|r| multinomial_identity_check(k, r).unwrap());
        println!("  k={k}: {{k r}} = [{}]  multinomial identity: {ok}", row.join(", "));
    }
    let lam = 1.0;
    println!(
        "\nPoisson moments at lambda = {lam}: M1..M4 coefficients = {:?}",
        (1..=4u32)
            .map(|k| gallagher_moment(lam, k).unwrap())
            .collect::<Vec<_>>()
    );

    // the singular-series average that justifies them
    let sieve_small = FactorSieve::new(20_000).unwrap();
    println!("\nsingular-series averages (both tend to 1):");
    for (h, r) in [(1_000u64, 2u32), (5_000, 2), (200, 3), (500, 3)] {
        println!(
            "  h={h:>5} r={r}: {:.5}",
            singular_avg(h, r, &sieve_small, &consts).unwrap()
        );
    }

    let n = 1_000_000u64;
    let nf = n as f64;
    let log_n = nf.ln();
    let h = log_n.round() as u64;
    let sieve = FactorSieve::new(2 * n + h + 10).unwrap();
    println!("\nmoments at N = {n}, h = {h} (lambda ~ 1):");
    println!(
        "{:>7} {:>2} {:>16} {:>16} {:>8}",
        "source", "k", "value", "predictor", "ratio"
    );
    for (source, name, k, theta) in [
        (MomentSource::Psi, "psi", 1u32, 0.0),
        (MomentSource::Psi, "psi", 2, 0.0),
        (MomentSource::Psi, "psi", 3, 0.0),
        (MomentSource::PsiR, "psiR", 2, 0.4),
        (MomentSource::Mixed, "mixed", 2, 0.4),
        (MomentSource::Mixed, "mixed", 3, 0.2),
    ] {
        let m = moment(
            MomentParams {
                n,
                h,
                k,
                source,
                r: nf.powf(theta),
                c: 0.0,
                primed: false,
            },
            &sieve,
        )
        .unwrap();
        let pred = m.predictor.unwrap();
        println!(
            "{name:>7} {k:>2} {:>16.4e} {:>16.4e} {:>8.4}",
            m.value,
            pred,
            m.value / pred
        );
    }
    println!("(the psiR k=2 polynomial is theta*lambda + lambda^2; convergence is logarithmic)");

    // the optimized quadratic
    let theta = 0.2;
    let rho = 2.0;
    let lam_grid = [1.2f64, 1.5, 1.8, 2.2, 2.5];
    println!("\ncombined quadratic M(h, rho)/(N log^3 N) at rho = {rho}, theta = {theta}:");
    println!(
        "{:>6} {:>10} {:>12} {:>12}",
        "lambda", "optimal C", "closed form", "direct"
    );
    for lam_t in lam_grid {
        let h = (lam_t * log_n).round() as u64;
        let lam = h as f64 / log_n;
        let c = optimal_c(lam, rho, theta).unwrap();
        let closed = m_h_rho_closed(lam, rho, theta).unwrap();
        let direct = m_h_rho(n, h, rho, nf.powf(theta), c, &sieve).unwrap() / (nf * log_n.powi(3));
        println!("{lam:>6.3} {c:>10.4} {closed:>12.5} {direct:>12.5}");
    }
    println!("(the closed form is positive exactly for rho - sqrt(theta rho) < lambda < rho;");
    println!(" the direct sum needs far larger N before its sign settles)");
    let _ = pk_poly(1.0, 0.25, 3).unwrap();
}
