//! Smallest-prime-factor sieve and multiplicative-function primitives.
//!
//! [`FactorSieve`] stores one 32-bit smallest-prime-factor entry per
//! integer, built segment by segment in parallel (the result is identical
//! to a sequential build, since each entry depends only on its own value).
//! A limit of 2*10^8 fits in under 1 GB. Everything else in the crate
//! factors integers through this table in O(log n).

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Ordered prime factorization: strictly increasing primes with exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Reconstructs the factored integer.
    pub fn value(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Distinct primes, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

/// Smallest-prime-factor table for all 2 <= n <= limit.
///
/// Immutable after construction and safe to share across threads.
pub struct FactorSieve {
    limit: u64,
    // spf[n] == 0 means n is prime (or n < 2); otherwise the smallest prime
    // factor of n, which is always <= sqrt(n).
    spf: Vec<u32>,
}

const SIEVE_SEGMENT: usize = 1 << 21;

impl FactorSieve {
    /// Builds the table for `2 <= n <= limit`.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit must be >= 2, got {limit}"
            )));
        }
        if limit > u32::MAX as u64 {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds the 32-bit entry scheme"
            )));
        }
        let len = (limit + 1) as usize;
        let mut spf = vec![0u32; len];

        let root = (limit as f64).sqrt() as u64 + 1;
        let base_primes = small_primes(root);

        // Each segment is filled independently: primes are applied in
        // ascending order and only unset entries are written, so spf[n]
        // ends up as the least prime factor of n regardless of which
        // thread handles the segment.
        spf[2..].par_chunks_mut(SIEVE_SEGMENT).enumerate().for_each(
            |(ci, chunk)| {
                let lo = 2 + (ci * SIEVE_SEGMENT) as u64;
                let hi = lo + chunk.len() as u64;
                for &p in &base_primes {
                    if p * p >= hi {
                        break;
                    }
                    let mut m = (lo.div_ceil(p) * p).max(p * p);
                    while m < hi {
                        let e = &mut chunk[(m - lo) as usize];
                        if *e == 0 {
                            *e = p as u32;
                        }
                        m += p;
                    }
                }
            },
        );

        Ok(Self { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    fn check_range(&self, n: u64) -> Result<()> {
        if n < 1 || n > self.limit {
            return Err(Error::InvalidArgument(format!(
                "n = {n} outside sieve range [1, {}]",
                self.limit
            )));
        }
        Ok(())
    }

    /// Smallest prime factor of n, for 2 <= n <= limit.
    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        debug_assert!((2..=self.limit).contains(&n));
        let e = self.spf[n as usize];
        if e == 0 {
            n
        } else {
            e as u64
        }
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[n as usize] == 0
    }

    pub fn factorize(&self, n: u64) -> Factorization {
        debug_assert!(n >= 1 && n <= self.limit);
        let mut m = n;
        let mut factors = Vec::new();
        while m > 1 {
            let p = self.spf(m);
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Factorization { factors }
    }

    /// Moebius function, {-1, 0, 1}.
    pub fn moebius(&self, n: u64) -> Result<i32> {
        self.check_range(n)?;
        let mut m = n;
        let mut k = 0u32;
        while m > 1 {
            let p = self.spf(m);
            m /= p;
            if m % p == 0 {
                return Ok(0);
            }
            k += 1;
        }
        Ok(if k % 2 == 0 { 1 } else { -1 })
    }

    pub fn is_squarefree(&self, n: u64) -> bool {
        let mut m = n;
        while m > 1 {
            let p = self.spf(m);
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        true
    }

    pub fn euler_phi(&self, n: u64) -> u64 {
        let mut m = n;
        let mut phi = 1u64;
        while m > 1 {
            let p = self.spf(m);
            let mut pe = 1u64;
            while m % p == 0 {
                m /= p;
                pe *= p;
            }
            phi *= pe - pe / p;
        }
        phi
    }

    /// phi_j(n) = prod_{p|n} (p - j) for squarefree n; phi_j(1) = 1.
    ///
    /// The value may be zero or negative when some p <= j; callers'
    /// coprimality conditions are expected to exclude the cases where
    /// that matters.
    pub fn phi_j(&self, n: u64, j: u32) -> Result<i64> {
        self.check_range(n)?;
        let mut m = n;
        let mut out = 1i64;
        while m > 1 {
            let p = self.spf(m);
            m /= p;
            if m % p == 0 {
                return Err(Error::InvalidArgument(format!(
                    "phi_j requires a squarefree argument, got {n}"
                )));
            }
            out *= p as i64 - j as i64;
        }
        Ok(out)
    }

    /// m(k) = prod_{p|k} (1 + 1/sqrt(p)).
    pub fn m_of(&self, k: u64) -> f64 {
        let mut m = k;
        let mut out = 1.0f64;
        while m > 1 {
            let p = self.spf(m);
            while m % p == 0 {
                m /= p;
            }
            out *= 1.0 + 1.0 / (p as f64).sqrt();
        }
        out
    }

    /// All divisors of n, ascending.
    pub fn divisors(&self, n: u64) -> Vec<u64> {
        let f = self.factorize(n);
        let mut divs = vec![1u64];
        for &(p, e) in &f.factors {
            let prev = divs.len();
            let mut pe = 1u64;
            for _ in 0..e {
                pe *= p;
                for i in 0..prev {
                    divs.push(divs[i] * pe);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Product of the distinct primes dividing n; 1 for n = 1.
    pub fn squarefree_kernel(&self, n: u64) -> u64 {
        let mut m = n;
        let mut k = 1u64;
        while m > 1 {
            let p = self.spf(m);
            while m % p == 0 {
                m /= p;
            }
            k *= p;
        }
        k
    }

    /// von Mangoldt: log p when n = p^m, else 0.
    pub fn von_mangoldt(&self, n: u64) -> f64 {
        if n < 2 {
            return 0.0;
        }
        let p = self.spf(n);
        let mut m = n;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            (p as f64).ln()
        } else {
            0.0
        }
    }

    /// Primes in [lo, hi], ascending.
    pub fn primes_in(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> + '_ {
        let hi = hi.min(self.limit);
        (lo.max(2)..=hi).filter(move |&n| self.spf[n as usize] == 0)
    }

    /// pi(limit): number of primes stored.
    pub fn prime_count(&self) -> u64 {
        self.spf[2..]
            .par_iter()
            .filter(|&&e| e == 0)
            .count() as u64
    }
}

/// p(j): j if j is prime, 1 otherwise (so p(0) = p(1) = 1).
pub fn p_of(j: u64) -> u64 {
    if is_prime_u64(j) {
        j
    } else {
        1
    }
}

/// Trial-division primality, independent of any sieve.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[inline]
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

#[inline]
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// All primes up to `limit` by a plain bit sieve. Used for base primes and
/// as an implementation-independent cross-check of the factor sieve.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut m = i * i;
            while m <= n {
                composite[m] = true;
                m += i;
            }
        }
    }
    primes
}

/// Calls `f(p)` for every prime p <= limit in ascending order, using a
/// segmented odd-only bit sieve (memory O(sqrt(limit) + segment)).
pub fn for_each_prime<F: FnMut(u64)>(limit: u64, mut f: F) {
    if limit < 2 {
        return;
    }
    f(2);
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = small_primes(root);
    const SEG_ODDS: usize = 1 << 20;
    let mut mark = vec![false; SEG_ODDS];
    let mut lo = 3u64; // always odd
    while lo <= limit {
        let count = (((limit - lo) / 2) as usize + 1).min(SEG_ODDS);
        let hi = lo + 2 * count as u64; // exclusive; segment holds lo, lo+2, ..
        mark[..count].fill(false);
        for &p in base.iter().skip(1) {
            if p * p >= hi {
                break;
            }
            let mut m = (lo.div_ceil(p) * p).max(p * p);
            if m % 2 == 0 {
                m += p;
            }
            while m < hi {
                mark[((m - lo) / 2) as usize] = true;
                m += 2 * p;
            }
        }
        for (i, &composite) in mark[..count].iter().enumerate() {
            if !composite {
                f(lo + 2 * i as u64);
            }
        }
        lo = hi;
    }
}
