//! Prime gaps: window histograms against the Poisson model, the exact
//! window-count decompositions, empirical normalized gaps, and the table
//! of proved gap bounds they are measured against.
//!
//! ```bash
//! cargo run --release --example prime_gaps
//! ```

use divisum::bounds::{huxley, maier_scale, xi_bd, xi_bd_erdos, xi_gpy, BoundTable};
use divisum::moments::{empirical_xi, gap_histogram, gap_inequalities};
use divisum::sieve::FactorSieve;

fn main() {
    let n = 2_000_000u64;
    let log_n = (n as f64).ln();
    let h = log_n.round() as u64;
    let sieve = FactorSieve::new(2 * n + 200_000).unwrap();

    let hist = gap_histogram(n, h, &sieve).unwrap();
    let lam = h as f64 / log_n;
    println!("primes in windows (x, x+{h}] over ({n}, {}]:", 2 * n);
    println!("{:>3} {:>10} {:>12} {:>8}", "r", "count", "Poisson", "ratio");
    let mut poisson = (-lam).exp() * n as f64;
    for (&r, &count) in &hist.counts {
        if r > 6 {
            break;
        }
        // advance the Poisson weight to r
        let pred = poisson;
        poisson *= lam / (r + 1) as f64;
        println!("{r:>3} {count:>10} {pred:>12.0} {:>8.4}", count as f64 / pred);
    }
    println!("  total {} = N exactly", hist.total());

    println!("\nexact window-count decomposition (r = 1):");
    let g = gap_inequalities(n, h, 1, &sieve).unwrap();
    println!(
        "  Q_1^+ = {} = {} (boundary) + {} (main) - {} (overshoot)",
        g.q_plus, g.plus_boundary_low, g.plus_main, g.plus_boundary_high
    );
    println!(
        "  main <= h * gap events: {} <= {} * {} = {}",
        g.plus_main,
        g.h,
        g.plus_events,
        g.h * g.plus_events
    );
    println!(
        "  Q_1^- = {} with main {} <= sum of wide gaps {}",
        g.q_minus, g.minus_main, g.minus_gap_sum
    );

    println!("\nsmallest normalized r-step gaps found in (N, 2N]:");
    for r in 1..=4u32 {
        println!("  r={r}: min (p_(m+r) - p_m)/log p_m = {:.5}", empirical_xi(n, r, &sieve).unwrap());
    }

    println!("\nproved upper bounds on liminf (p_(n+r) - p_n)/log p_n:");
    println!(
        "{:>3} {:>9} {:>11} {:>11} {:>9} {:>9} {:>9}",
        "r", "BD", "Huxley B=4", "B=3.5", "+Maier", "GPY", "GPY(EH)"
    );
    for r in 1..=4u32 {
        let h4 = huxley(4.0, r).unwrap().bound;
        println!(
            "{r:>3} {:>9.5} {h4:>11.5} {:>11.5} {:>9.5} {:>9.5} {:>9.5}",
            xi_bd(r).unwrap(),
            huxley(3.5, r).unwrap().bound,
            maier_scale(h4),
            xi_gpy(r, 0.5).unwrap(),
            xi_gpy(r, 1.0).unwrap(),
        );
    }
    println!("  refined r=1 second-moment bound: {:.5}", xi_bd_erdos());

    let table = BoundTable::generate(4.0, 0.5, 6).unwrap();
    println!(
        "\nfull bound table has {} rows; see `divisum gap-bounds --b 4 --rmax 6`",
        table.rows.len()
    );
}
