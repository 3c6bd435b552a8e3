//! Point and batch evaluation of the von Mangoldt function and its two
//! truncated divisor-sum approximations, plus their partial sums and
//! primes in arithmetic progressions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kahan::{sum_iter, KahanSum};
use crate::sieve::{gcd, FactorSieve};

/// Which arithmetic function a batch array holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxKind {
    /// Lambda_R(n) = sum_{d|n, d<=R} mu(d) log(R/d)
    LambdaR,
    /// lambda_R(n) = sum_{r<=R} mu^2(r)/phi(r) sum_{d|r, d|n} d mu(d)
    LambdaLowerR,
    /// Lambda(n)
    VonMangoldt,
}

/// Divisor cutoff for a real truncation level R; the epsilon keeps
/// float-boundary values (R = 10.0 vs 9.999...) from flapping.
#[inline]
pub fn cutoff(r: f64) -> u64 {
    (r + 1e-9).floor() as u64
}

/// Dense block of function values on a shifted integer range.
///
/// Values for n <= 0 are never stored; lookups below 1 return 0.
/// Immutable after construction.
pub struct ApproxArray {
    pub kind: ApproxKind,
    pub r: f64,
    start: u64,
    values: Vec<f64>,
}

impl ApproxArray {
    #[inline]
    pub fn start(&self) -> u64 {
        self.start
    }

    #[inline]
    pub fn end(&self) -> u64 {
        self.start + self.values.len() as u64
    }

    /// Value at n, with the convention that anything at or below zero is 0.
    /// Indices at or above `start` but past the end are a caller bug.
    #[inline]
    pub fn get(&self, n: i64) -> f64 {
        if n <= 0 {
            return 0.0;
        }
        let n = n as u64;
        debug_assert!(n >= self.start && n < self.end(), "index {n} out of array");
        self.values[(n - self.start) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Prefix sums aligned to the array: out[i] = sum of values[..=i].
    pub fn prefix_sums(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.values.len());
        let mut acc = KahanSum::new();
        for &v in &self.values {
            acc.add(v);
            out.push(acc.value());
        }
        out
    }
}

/// Lambda_R at a single point.
pub fn lambda_r_point(n: i64, r: f64, sieve: &FactorSieve) -> Result<f64> {
    if n <= 0 {
        return Ok(0.0);
    }
    let n = n as u64;
    if n > sieve.limit() {
        return Err(Error::InvalidArgument(format!(
            "n = {n} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    let cut = cutoff(r);
    let log_r = r.ln();
    let mut acc = KahanSum::new();
    for d in sieve.divisors(n) {
        if d > cut {
            break;
        }
        let mu = sieve.moebius(d)?;
        if mu != 0 {
            acc.add(mu as f64 * (log_r - (d as f64).ln()));
        }
    }
    Ok(acc.value())
}

/// lambda_R at a single point, via the closed form of the inner sum:
/// sum_{d|r, d|n} d mu(d) = prod_{p | gcd(r, n)} (1 - p) for squarefree r.
pub fn lambda_lower_r_point(n: i64, r: f64, sieve: &FactorSieve) -> Result<f64> {
    if n <= 0 {
        return Ok(0.0);
    }
    let n = n as u64;
    let cut = cutoff(r);
    if n > sieve.limit() || cut > sieve.limit() {
        return Err(Error::InvalidArgument(format!(
            "n = {n}, R = {r} must lie within sieve limit {}",
            sieve.limit()
        )));
    }
    let mut acc = KahanSum::new();
    for q in 1..=cut {
        if !sieve.is_squarefree(q) {
            continue;
        }
        let mut inner = 1i64;
        let mut m = q;
        while m > 1 {
            let p = sieve.spf(m);
            m /= p;
            if n % p == 0 {
                inner *= 1 - p as i64;
            }
        }
        acc.add(inner as f64 / sieve.euler_phi(q) as f64);
    }
    Ok(acc.value())
}

const BATCH_SEGMENT: usize = 1 << 18;

/// Builds a dense value table over [start, end) by additive sieving.
pub fn batch(
    kind: ApproxKind,
    start: u64,
    end: u64,
    r: f64,
    sieve: &FactorSieve,
) -> Result<ApproxArray> {
    if start >= end {
        return Err(Error::InvalidArgument(format!(
            "empty range [{start}, {end})"
        )));
    }
    if start < 1 {
        return Err(Error::InvalidArgument("range must start at n >= 1".into()));
    }
    if end > sieve.limit() + 1 {
        return Err(Error::InvalidArgument(format!(
            "range end {end} exceeds sieve limit {} + 1",
            sieve.limit()
        )));
    }
    let mut values = vec![0.0f64; (end - start) as usize];
    match kind {
        ApproxKind::VonMangoldt => {
            values
                .par_chunks_mut(BATCH_SEGMENT)
                .enumerate()
                .for_each(|(ci, chunk)| {
                    let lo = start + (ci * BATCH_SEGMENT) as u64;
                    for (i, v) in chunk.iter_mut().enumerate() {
                        *v = sieve.von_mangoldt(lo + i as u64);
                    }
                });
        }
        ApproxKind::LambdaR => {
            let weights = moebius_log_weights(r, sieve)?;
            sieve_additively(&mut values, start, &weights);
        }
        ApproxKind::LambdaLowerR => {
            let weights = lower_weights(r, sieve)?;
            sieve_additively(&mut values, start, &weights);
        }
    }
    Ok(ApproxArray {
        kind,
        r,
        start,
        values,
    })
}

/// (d, w_d) pairs with w_d = mu(d) log(R/d) over squarefree d <= R.
fn moebius_log_weights(r: f64, sieve: &FactorSieve) -> Result<Vec<(u64, f64)>> {
    let cut = cutoff(r);
    if cut > sieve.limit() {
        return Err(Error::InvalidArgument(format!(
            "R = {r} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    let log_r = r.ln();
    let mut out = Vec::new();
    for d in 1..=cut {
        let mu = sieve.moebius(d)?;
        if mu != 0 {
            out.push((d, mu as f64 * (log_r - (d as f64).ln())));
        }
    }
    Ok(out)
}

/// (d, w_d) pairs for lambda_R: w_d = d mu(d) sum_{q<=R, d|q} mu^2(q)/phi(q).
fn lower_weights(r: f64, sieve: &FactorSieve) -> Result<Vec<(u64, f64)>> {
    let cut = cutoff(r);
    if cut > sieve.limit() {
        return Err(Error::InvalidArgument(format!(
            "R = {r} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    let mut acc = vec![0.0f64; cut as usize + 1];
    for q in 1..=cut {
        if !sieve.is_squarefree(q) {
            continue;
        }
        let w = 1.0 / sieve.euler_phi(q) as f64;
        for d in sieve.divisors(q) {
            acc[d as usize] += w;
        }
    }
    let mut out = Vec::new();
    for d in 1..=cut {
        let mu = sieve.moebius(d)?;
        if mu != 0 && acc[d as usize] != 0.0 {
            out.push((d, d as f64 * mu as f64 * acc[d as usize]));
        }
    }
    Ok(out)
}

/// Adds w_d to every multiple of d inside the block, one fixed-width
/// segment per task, so the result is independent of the thread count.
fn sieve_additively(values: &mut [f64], start: u64, weights: &[(u64, f64)]) {
    values
        .par_chunks_mut(BATCH_SEGMENT)
        .enumerate()
        .for_each(|(ci, chunk)| {
            let lo = start + (ci * BATCH_SEGMENT) as u64;
            let hi = lo + chunk.len() as u64;
            for &(d, w) in weights {
                let mut m = lo.div_ceil(d) * d;
                while m < hi {
                    chunk[(m - lo) as usize] += w;
                    m += d;
                }
            }
        });
}

/// psi(x) = sum_{n <= x} Lambda(n), summed over prime powers.
pub fn psi(x: u64, sieve: &FactorSieve) -> Result<f64> {
    if x > sieve.limit() {
        return Err(Error::InvalidArgument(format!(
            "x = {x} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    let mut acc = KahanSum::new();
    for p in sieve.primes_in(2, x) {
        let lp = (p as f64).ln();
        let mut q = p;
        loop {
            acc.add(lp);
            if q > x / p {
                break;
            }
            q *= p;
        }
    }
    Ok(acc.value())
}

/// psi_R(x) = sum_{n <= x} Lambda_R(n) = sum_{d <= R} mu(d) log(R/d) floor(x/d).
pub fn psi_r(x: u64, r: f64, sieve: &FactorSieve) -> Result<f64> {
    if x > sieve.limit() {
        return Err(Error::InvalidArgument(format!(
            "x = {x} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    let weights = moebius_log_weights(r, sieve)?;
    Ok(sum_iter(
        weights.iter().map(|&(d, w)| w * (x / d) as f64),
    ))
}

/// psi(x; q, a) = sum over n <= x, n = a (mod q) of Lambda(n).
pub fn psi_in_ap(x: u64, q: u64, a: u64, sieve: &FactorSieve) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidArgument("modulus q must be >= 1".into()));
    }
    if x > sieve.limit() {
        return Err(Error::InvalidArgument(format!(
            "x = {x} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    let mut acc = KahanSum::new();
    let mut n = a % q;
    if n == 0 {
        n = q;
    }
    while n <= x {
        acc.add(sieve.von_mangoldt(n));
        n += q;
    }
    Ok(acc.value())
}

/// sum_{q <= q_max} max_{(a,q)=1} |psi(x;q,a) - x/phi(q)|.
pub fn bv_sum(x: u64, q_max: u64, sieve: &FactorSieve) -> Result<f64> {
    if q_max == 0 {
        return Err(Error::InvalidArgument("q_max must be >= 1".into()));
    }
    if x > sieve.limit() {
        return Err(Error::InvalidArgument(format!(
            "x = {x} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    // One pass to collect prime powers, then a histogram per modulus.
    let mut prime_powers: Vec<(u64, f64)> = Vec::new();
    for n in 2..=x {
        let v = sieve.von_mangoldt(n);
        if v != 0.0 {
            prime_powers.push((n, v));
        }
    }
    let mut total = KahanSum::new();
    for q in 1..=q_max {
        let mut buckets = vec![KahanSum::new(); q as usize];
        for &(n, v) in &prime_powers {
            buckets[(n % q) as usize].add(v);
        }
        let expected = x as f64 / sieve.euler_phi(q) as f64;
        let mut worst = 0.0f64;
        for a in 0..q {
            if gcd(a, q) == 1 {
                worst = worst.max((buckets[a as usize].value() - expected).abs());
            }
        }
        total.add(worst);
    }
    Ok(total.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve() -> FactorSieve {
        FactorSieve::new(20_000).unwrap()
    }

    #[test]
    fn lambda_r_point_basics() {
        let s = sieve();
        let r = 10.0;
        assert!((lambda_r_point(1, r, &s).unwrap() - r.ln()).abs() < 1e-12);
        // prime beyond the cutoff sees only d = 1
        assert!((lambda_r_point(97, r, &s).unwrap() - r.ln()).abs() < 1e-12);
        assert_eq!(lambda_r_point(0, r, &s).unwrap(), 0.0);
        assert_eq!(lambda_r_point(-5, r, &s).unwrap(), 0.0);
        assert!(lambda_r_point(20_001, r, &s).is_err());
    }

    #[test]
    fn lambda_r_equals_von_mangoldt_below_cutoff() {
        // Moebius identity: for 1 < n <= R the truncation is complete.
        let s = sieve();
        let r = 10_000.0;
        for n in 2..=10_000i64 {
            let lr = lambda_r_point(n, r, &s).unwrap();
            let lam = s.von_mangoldt(n as u64);
            assert!((lr - lam).abs() < 1e-9, "n = {n}: {lr} vs {lam}");
        }
    }

    #[test]
    fn lambda_lower_point_examples() {
        let s = sieve();
        assert!((lambda_lower_r_point(1, 2.0, &s).unwrap() - 2.0).abs() < 1e-12);
        assert!(lambda_lower_r_point(2, 2.0, &s).unwrap().abs() < 1e-12);
        // n = 1: only d = 1 contributes, giving sum_{q<=R} mu^2(q)/phi(q)
        let direct: f64 = (1..=50u64)
            .filter(|&q| s.is_squarefree(q))
            .map(|q| 1.0 / s.euler_phi(q) as f64)
            .sum();
        assert!((lambda_lower_r_point(1, 50.0, &s).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn batch_matches_point_evaluation() {
        let s = sieve();
        let r = 10.0;
        let arr = batch(ApproxKind::LambdaR, 1, 100, r, &s).unwrap();
        assert!((arr.get(97) - r.ln()).abs() < 1e-12);
        assert!((arr.get(1) - r.ln()).abs() < 1e-12);
        for n in 1..100i64 {
            let point = lambda_r_point(n, r, &s).unwrap();
            assert!((arr.get(n) - point).abs() < 1e-6, "n = {n}");
        }
    }

    #[test]
    fn batch_lower_matches_point_evaluation() {
        let s = sieve();
        let r = 30.0;
        let arr = batch(ApproxKind::LambdaLowerR, 1, 500, r, &s).unwrap();
        for n in 1..500i64 {
            let point = lambda_lower_r_point(n, r, &s).unwrap();
            assert!((arr.get(n) - point).abs() < 1e-6, "n = {n}");
        }
    }

    #[test]
    fn batch_von_mangoldt_values() {
        let s = sieve();
        let arr = batch(ApproxKind::VonMangoldt, 1, 20, 0.0, &s).unwrap();
        assert!((arr.get(16) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(arr.get(15), 0.0);
        assert_eq!(arr.get(1), 0.0);
    }

    #[test]
    fn batch_rejects_bad_ranges() {
        let s = sieve();
        assert!(batch(ApproxKind::LambdaR, 5, 5, 10.0, &s).is_err());
        assert!(batch(ApproxKind::LambdaR, 0, 5, 10.0, &s).is_err());
        assert!(batch(ApproxKind::LambdaR, 1, 30_000, 10.0, &s).is_err());
    }

    #[test]
    fn psi_examples() {
        let s = sieve();
        let expected = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((psi(10, &s).unwrap() - expected).abs() < 1e-12);
        assert_eq!(psi(1, &s).unwrap(), 0.0);
    }

    #[test]
    fn psi_r_consistent_with_batch_prefix() {
        let s = sieve();
        let r = 50.0;
        let arr = batch(ApproxKind::LambdaR, 1, 10_001, r, &s).unwrap();
        let prefix = arr.prefix_sums();
        let direct = psi_r(10_000, r, &s).unwrap();
        let via_batch = prefix[9_999];
        assert!(
            (direct - via_batch).abs() <= 1e-4 * direct.abs().max(1.0),
            "{direct} vs {via_batch}"
        );
    }

    #[test]
    fn psi_in_ap_examples() {
        let s = sieve();
        assert!((psi_in_ap(10, 1, 0, &s).unwrap() - psi(10, &s).unwrap()).abs() < 1e-12);
        // n = 2, 4, 8 contribute log 2 each
        assert!((psi_in_ap(10, 2, 0, &s).unwrap() - 3.0 * 2f64.ln()).abs() < 1e-12);
        assert!(psi_in_ap(10, 0, 1, &s).is_err());
    }

    #[test]
    fn bv_sum_small_is_small() {
        let s = sieve();
        let x = 20_000u64;
        let v = bv_sum(x, 10, &s).unwrap();
        assert!(v > 0.0 && v < 0.05 * x as f64, "bv_sum = {v}");
    }

    #[test]
    fn crude_divisor_bound_holds() {
        // |Lambda_R(n)| <= d(n) log R
        let s = sieve();
        let r = 100.0;
        let arr = batch(ApproxKind::LambdaR, 1, 5_000, r, &s).unwrap();
        for n in 1..5_000u64 {
            let bound = s.divisors(n).len() as f64 * r.ln();
            assert!(arr.get(n as i64).abs() <= bound + 1e-9, "n = {n}");
        }
    }
}
