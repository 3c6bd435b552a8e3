//! Short-interval moments of psi and psi_R, Poisson-moment polynomials,
//! the Stirling/multinomial identity, the singular-series average, prime
//! gap histograms, and the optimized mixed-moment quadratic.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::approx::{batch, ApproxArray, ApproxKind};
use crate::error::{Error, Result};
use crate::kahan::{sum_iter, sum_over, KahanSum};
use crate::series::{sseries_j, sseries_vec_exact, ConstantsTable};
use crate::sieve::FactorSieve;

/// Stirling number of the second kind, exact for 1 <= r <= k <= 20.
pub fn stirling2(k: u32, r: u32) -> Result<u128> {
    if r < 1 || k < r || k > 20 {
        return Err(Error::InvalidArgument(format!(
            "stirling2 requires 1 <= r <= k <= 20, got k={k} r={r}"
        )));
    }
    // S(n, m) = m S(n-1, m) + S(n-1, m-1)
    let mut row = vec![0u128; k as usize + 1];
    row[0] = 1;
    for n in 1..=k as usize {
        for m in (1..=n).rev() {
            row[m] = m as u128 * row[m] + row[m - 1];
        }
        row[0] = 0;
    }
    Ok(row[r as usize])
}

/// Checks that the compositions of k into r positive parts, weighted by
/// multinomial coefficients, count r! times the Stirling partition number.
pub fn multinomial_identity_check(k: u32, r: u32) -> Result<bool> {
    let target = stirling2(k, r)? * factorial(r);
    let mut total = 0u128;
    let mut parts = vec![1u32; r as usize];
    sum_compositions(k, r, &mut parts, 0, k - r, &mut total);
    Ok(total == target)
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

fn multinomial(k: u32, parts: &[u32]) -> u128 {
    let mut out = factorial(k);
    for &a in parts {
        out /= factorial(a);
    }
    out
}

fn sum_compositions(k: u32, r: u32, parts: &mut Vec<u32>, idx: usize, slack: u32, total: &mut u128) {
    if idx == r as usize - 1 {
        parts[idx] = 1 + slack;
        *total += multinomial(k, parts);
        return;
    }
    for extra in 0..=slack {
        parts[idx] = 1 + extra;
        sum_compositions(k, r, parts, idx + 1, slack - extra, total);
    }
}

/// Poisson moment polynomial sum_r {k r} lambda^r.
pub fn gallagher_moment(lambda: f64, k: u32) -> Result<f64> {
    if k < 1 || k > 20 {
        return Err(Error::InvalidArgument(format!(
            "gallagher moment requires 1 <= k <= 20, got {k}"
        )));
    }
    let mut acc = 0.0;
    for r in 1..=k {
        acc += stirling2(k, r)? as f64 * lambda.powi(r as i32);
    }
    Ok(acc)
}

/// Normalized k-th moment polynomial of the truncated approximation with
/// R = N^theta: lambda, theta lambda + lambda^2, and
/// (3/4) theta^2 lambda + 3 theta lambda^2 + lambda^3.
pub fn pk_poly(lambda: f64, theta: f64, k: u32) -> Result<f64> {
    match k {
        1 => Ok(lambda),
        2 => Ok(theta * lambda + lambda * lambda),
        3 => Ok(0.75 * theta * theta * lambda
            + 3.0 * theta * lambda * lambda
            + lambda.powi(3)),
        _ => Err(Error::Unsupported(format!(
            "moment polynomial only for k <= 3, got {k}"
        ))),
    }
}

/// Mixed-moment variant: the k = 3 leading coefficient is 1, not 3/4.
pub fn pk_poly_mixed(lambda: f64, theta: f64, k: u32) -> Result<f64> {
    match k {
        1 => Ok(lambda),
        2 => Ok(theta * lambda + lambda * lambda),
        3 => Ok(theta * theta * lambda + 3.0 * theta * lambda * lambda + lambda.powi(3)),
        _ => Err(Error::Unsupported(format!(
            "mixed moment polynomial only for k <= 3, got {k}"
        ))),
    }
}

/// Average of the singular series over distinct r-tuples in [1, h]^r,
/// divided by h^r; tends to 1 as h grows.
pub fn singular_avg(h: u64, r: u32, sieve: &FactorSieve, consts: &ConstantsTable) -> Result<f64> {
    match r {
        2 => {
            if h > 10_000 {
                return Err(Error::Resource(format!(
                    "pair average capped at h = 1e4, got {h}"
                )));
            }
            // ordered distinct pairs: 2 sum_{k=1}^{h-1} (h-k) S_2(k)
            let mut acc = KahanSum::new();
            for k in 1..h {
                let s2 = sseries_j(k as i64, 2, sieve)?.to_f64(consts);
                if s2 != 0.0 {
                    acc.add(2.0 * (h - k) as f64 * s2);
                }
            }
            Ok(acc.value() / (h as f64).powi(2))
        }
        3 => {
            if h > 1_000 {
                return Err(Error::Resource(format!(
                    "triple average capped at h = 1e3, got {h}"
                )));
            }
            // 6 sum over 0 < a < b <= h-1 of (h-b) S((0,a,b))
            let partials: Vec<f64> = (1..h)
                .into_par_iter()
                .map(|a| {
                    let mut acc = KahanSum::new();
                    for b in (a + 1)..h {
                        let s = sseries_vec_exact(&[0, a as i64, b as i64], sieve)
                            .expect("shifts are distinct")
                            .to_f64(consts);
                        if s != 0.0 {
                            acc.add(6.0 * (h - b) as f64 * s);
                        }
                    }
                    acc.value()
                })
                .collect();
            Ok(sum_iter(partials) / (h as f64).powi(3))
        }
        _ => Err(Error::Unsupported(format!(
            "singular average only for r in {{2, 3}}, got {r}"
        ))),
    }
}

/// What goes inside the k-th power of a short-interval moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSource {
    Psi,
    PsiR,
    Mixed,
}

/// One evaluated moment with the matching prediction, when a formula
/// applies.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub n: u64,
    pub h: u64,
    pub r: f64,
    pub c: f64,
    pub k: u32,
    pub source: MomentSource,
    /// realized lambda = h / log N
    pub lambda: f64,
    pub value: f64,
    pub predictor: Option<f64>,
    pub normalized: f64,
}

/// Moment parameters; `primed` sums over (N, 2N] instead of [1, N].
#[derive(Debug, Clone, Copy)]
pub struct MomentParams {
    pub n: u64,
    pub h: u64,
    pub k: u32,
    pub source: MomentSource,
    pub r: f64,
    pub c: f64,
    pub primed: bool,
}

fn increments(arr: &ApproxArray, h: u64) -> Vec<f64> {
    // increment(x) = sum of values over (x, x+h], x = start + i
    let prefix = arr.prefix_sums();
    let h = h as usize;
    let len = prefix.len() - h;
    (0..len).map(|i| prefix[i + h] - prefix[i]).collect()
}

/// Short-interval moment sum_n (increment - C log N)^k, with the increment
/// drawn from psi or psi_R, or the mixed product with one psi increment.
pub fn moment(params: MomentParams, sieve: &FactorSieve) -> Result<MomentReport> {
    let MomentParams {
        n,
        h,
        k,
        source,
        r,
        c,
        primed,
    } = params;
    if k < 1 {
        return Err(Error::InvalidArgument("moment order k must be >= 1".into()));
    }
    if source == MomentSource::Mixed && k < 2 {
        return Err(Error::InvalidArgument(
            "mixed moments require k >= 2".into(),
        ));
    }
    let (lo, hi) = if primed { (n + 1, 2 * n) } else { (1, n) };
    if hi + h > sieve.limit() {
        return Err(Error::Precondition(format!(
            "moment window end {} exceeds sieve limit {}",
            hi + h,
            sieve.limit()
        )));
    }
    let log_n = (n as f64).ln();
    let lambda = h as f64 / log_n;
    let count = hi - lo + 1;
    let value = if h == 0 {
        let base = -c * log_n;
        match source {
            MomentSource::Mixed => 0.0,
            _ => count as f64 * base.powi(k as i32),
        }
    } else {
        let need_psi = source != MomentSource::PsiR;
        let need_approx = source != MomentSource::Psi;
        let psi_inc = if need_psi {
            let arr = batch(ApproxKind::VonMangoldt, lo, hi + h + 1, 0.0, sieve)?;
            Some(increments(&arr, h))
        } else {
            None
        };
        let approx_inc = if need_approx {
            let arr = batch(ApproxKind::LambdaR, lo, hi + h + 1, r, sieve)?;
            Some(increments(&arr, h))
        } else {
            None
        };
        let shift = c * log_n;
        sum_over(0, count, |i| {
            let i = i as usize;
            match source {
                MomentSource::Psi => (psi_inc.as_ref().unwrap()[i] - shift).powi(k as i32),
                MomentSource::PsiR => (approx_inc.as_ref().unwrap()[i] - shift).powi(k as i32),
                MomentSource::Mixed => {
                    psi_inc.as_ref().unwrap()[i]
                        * (approx_inc.as_ref().unwrap()[i] - shift).powi(k as i32 - 1)
                }
            }
        })
    };
    let theta = r.ln() / log_n;
    let predictor = if c == 0.0 {
        match source {
            MomentSource::Psi => gallagher_moment(lambda, k).ok(),
            MomentSource::PsiR => pk_poly(lambda, theta, k).ok(),
            MomentSource::Mixed => pk_poly_mixed(lambda, theta, k).ok(),
        }
        .map(|poly| poly * count as f64 * log_n.powi(k as i32))
    } else {
        // expansions used by the optimized quadratic
        match (source, k) {
            (MomentSource::PsiR, 2) => Some(
                (theta * lambda + lambda * lambda - 2.0 * c * lambda + c * c)
                    * count as f64
                    * log_n.powi(2),
            ),
            (MomentSource::Mixed, 3) => Some(
                (pk_poly_mixed(lambda, theta, 3)? - 2.0 * c * (theta * lambda + lambda * lambda)
                    + c * c * lambda)
                    * count as f64
                    * log_n.powi(3),
            ),
            _ => None,
        }
    };
    Ok(MomentReport {
        n,
        h,
        r,
        c,
        k,
        source,
        lambda,
        value,
        predictor,
        normalized: value / (count as f64 * log_n.powi(k as i32)),
    })
}

/// The combined third-moment quadratic
/// M(h, rho) = sum (psi-inc - rho log N)(psiR-inc - C log N)^2 over (N, 2N].
pub fn m_h_rho(n: u64, h: u64, rho: f64, r: f64, c: f64, sieve: &FactorSieve) -> Result<f64> {
    if 2 * n + h > sieve.limit() {
        return Err(Error::Precondition(format!(
            "window end {} exceeds sieve limit {}",
            2 * n + h,
            sieve.limit()
        )));
    }
    let psi_arr = batch(ApproxKind::VonMangoldt, n + 1, 2 * n + h + 1, 0.0, sieve)?;
    let appr = batch(ApproxKind::LambdaR, n + 1, 2 * n + h + 1, r, sieve)?;
    let psi_inc = increments(&psi_arr, h);
    let appr_inc = increments(&appr, h);
    let log_n = (n as f64).ln();
    Ok(sum_over(0, n, |i| {
        let i = i as usize;
        let a = psi_inc[i] - rho * log_n;
        let b = appr_inc[i] - c * log_n;
        a * b * b
    }))
}

/// Closed form of the optimized quadratic, normalized by N log^3 N:
/// (lambda theta / (lambda - rho)) ((lambda - rho)^2 - theta rho).
pub fn m_h_rho_closed(lambda: f64, rho: f64, theta: f64) -> Result<f64> {
    if lambda == rho {
        return Err(Error::InvalidArgument(
            "closed form is singular at lambda = rho".into(),
        ));
    }
    Ok(lambda * theta / (lambda - rho) * ((lambda - rho).powi(2) - theta * rho))
}

/// The C that extremizes the quadratic: lambda (1 + theta/(lambda - rho)).
pub fn optimal_c(lambda: f64, rho: f64, theta: f64) -> Result<f64> {
    if lambda == rho {
        return Err(Error::InvalidArgument(
            "optimal shift is singular at lambda = rho".into(),
        ));
    }
    Ok(lambda * (1.0 + theta / (lambda - rho)))
}

/// Normalized quadratic assembled from the moment polynomials:
/// mixed third moment minus rho times the second moment, as a function
/// of the shift C.
pub fn m_h_rho_quadratic(lambda: f64, rho: f64, theta: f64, c: f64) -> f64 {
    let tilde_m3 = (theta * theta * lambda + 3.0 * theta * lambda * lambda + lambda.powi(3))
        - 2.0 * c * (theta * lambda + lambda * lambda)
        + c * c * lambda;
    let m2 = theta * lambda + lambda * lambda - 2.0 * c * lambda + c * c;
    tilde_m3 - rho * m2
}

/// Histogram of prime counts pi(n+h) - pi(n) over N < n <= 2N.
#[derive(Debug, Clone)]
pub struct GapHistogram {
    pub n: u64,
    pub h: u64,
    pub counts: BTreeMap<u32, u64>,
}

impl GapHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Q_r^- : windows containing at most r primes.
    pub fn q_minus(&self, r: u32) -> u64 {
        self.counts
            .iter()
            .filter(|&(&m, _)| m <= r)
            .map(|(_, &c)| c)
            .sum()
    }

    /// Q_r^+ : windows containing more than r primes.
    pub fn q_plus(&self, r: u32) -> u64 {
        self.total() - self.q_minus(r)
    }
}

pub fn gap_histogram(n: u64, h: u64, sieve: &FactorSieve) -> Result<GapHistogram> {
    if 2 * n + h > sieve.limit() {
        return Err(Error::Precondition(format!(
            "histogram window end {} exceeds sieve limit {}",
            2 * n + h,
            sieve.limit()
        )));
    }
    let mut counts = BTreeMap::new();
    if h == 0 {
        counts.insert(0, n);
        return Ok(GapHistogram { n, h, counts });
    }
    // pi[i] = number of primes in (n, n+i]
    let span = (n + h + 1) as usize;
    let mut pi = vec![0u32; span];
    let mut count = 0u32;
    for i in 1..span {
        if sieve.is_prime(n + i as u64) {
            count += 1;
        }
        pi[i] = count;
    }
    for m in 1..=n as usize {
        // window (n+m, n+m+h]
        let in_window = pi[m + h as usize] - pi[m];
        *counts.entry(in_window).or_insert(0u64) += 1;
    }
    Ok(GapHistogram { n, h, counts })
}

/// Smallest normalized r-step prime gap with left endpoint in (N, 2N]:
/// min (p_{m+r} - p_m)/log p_m. Needs primes a little past 2N in the
/// sieve to close the last windows.
pub fn empirical_xi(n: u64, r: u32, sieve: &FactorSieve) -> Result<f64> {
    if r < 1 {
        return Err(Error::InvalidArgument("step r must be >= 1".into()));
    }
    if 2 * n > sieve.limit() {
        return Err(Error::Precondition(format!(
            "2N = {} exceeds sieve limit {}",
            2 * n,
            sieve.limit()
        )));
    }
    let primes: Vec<u64> = sieve.primes_in(n + 1, sieve.limit()).collect();
    let mut best = f64::INFINITY;
    for (i, &p) in primes.iter().enumerate() {
        if p > 2 * n || i + r as usize >= primes.len() {
            break;
        }
        let gap = (primes[i + r as usize] - p) as f64 / (p as f64).ln();
        best = best.min(gap);
    }
    if best.is_infinite() {
        return Err(Error::Precondition(
            "sieve holds too few primes past 2N to close any window".into(),
        ));
    }
    Ok(best)
}

/// All pieces of the exact window-count decompositions: the window counts
/// split into a main prime-gap sum plus boundary terms, and the main sums
/// obey integer envelope inequalities against gap-restricted counts.
#[derive(Debug, Clone, Copy)]
pub struct GapInequalities {
    pub r: u32,
    pub h: u64,
    pub q_plus: u64,
    /// sum over N+1 <= p_m <= 2N with p_{m+r+1} - p_{m+1} < h of the
    /// window count between consecutive primes
    pub plus_main: u64,
    pub plus_boundary_low: u64,
    pub plus_boundary_high: u64,
    /// number of gap events p_{m+r+1} - p_{m+1} < h
    pub plus_events: u64,
    pub q_minus: u64,
    pub minus_main: u64,
    pub minus_boundary_low: u64,
    pub minus_boundary_high: u64,
    /// sum of p_{m+r+1} - p_m over events with that gap exceeding h
    pub minus_gap_sum: u64,
}

pub fn gap_inequalities(n: u64, h: u64, r: u32, sieve: &FactorSieve) -> Result<GapInequalities> {
    if h < 1 {
        return Err(Error::InvalidArgument("window length h must be >= 1".into()));
    }
    let hist = gap_histogram(n, h, sieve)?;
    let q_plus = hist.q_plus(r);
    let q_minus = hist.q_minus(r);

    // primes from the last one at or before N+1 up to well past 2N
    let primes: Vec<u64> = sieve.primes_in(2, sieve.limit()).collect();
    let first_in = primes.partition_point(|&p| p < n + 1);
    let last_in = primes.partition_point(|&p| p <= 2 * n); // exclusive
    let need = last_in + r as usize + 1;
    if need >= primes.len() {
        return Err(Error::Precondition(
            "sieve must extend past p_{j+r+1} for the last prime below 2N".into(),
        ));
    }

    let mut plus_main = 0u64;
    let mut plus_events = 0u64;
    let mut minus_main = 0u64;
    let mut minus_gap_sum = 0u64;
    for m in first_in..last_in {
        let p = primes[m];
        let p_next = primes[m + 1];
        let p_far = primes[m + r as usize + 1];
        // windows (x, x+h] with p <= x < p_next hold > r primes iff
        // p_{m+r+1} <= x + h
        if p_far - p_next < h {
            plus_events += 1;
            let lo = p.max(p_far.saturating_sub(h));
            plus_main += p_next - lo;
        }
        // and hold <= r primes iff x < p_{m+r+1} - h
        if p_far - p > h {
            minus_main += p_next.min(p_far - h) - p;
            minus_gap_sum += p_far - p;
        }
    }

    // boundary pieces: window starts x in (N, 2N] not covered by a prime
    // p in [N+1, 2N] with p <= x < next prime
    let count_over = |lo: u64, hi: u64, more_than: bool| -> u64 {
        let mut c = 0u64;
        for x in lo..=hi {
            let inside = sieve
                .primes_in(x + 1, x + h)
                .take(r as usize + 1)
                .count() as u32;
            let hit = if more_than { inside > r } else { inside <= r };
            if hit {
                c += 1;
            }
        }
        c
    };
    // before the first prime in range
    let (pb_lo, mb_lo) = if first_in < primes.len() && primes[first_in] > n + 1 {
        (
            count_over(n + 1, primes[first_in] - 1, true),
            count_over(n + 1, primes[first_in] - 1, false),
        )
    } else {
        (0, 0)
    };
    // after 2N but before the prime following the last one in range
    let (pb_hi, mb_hi) = if last_in > first_in {
        let p_after = primes[last_in]; // first prime beyond 2N
        if p_after > 2 * n + 1 {
            (
                count_over(2 * n + 1, p_after - 1, true),
                count_over(2 * n + 1, p_after - 1, false),
            )
        } else {
            (0, 0)
        }
    } else {
        (0, 0)
    };

    Ok(GapInequalities {
        r,
        h,
        q_plus,
        plus_main,
        plus_boundary_low: pb_lo,
        plus_boundary_high: pb_hi,
        plus_events,
        q_minus,
        minus_main,
        minus_boundary_low: mb_lo,
        minus_boundary_high: mb_hi,
        minus_gap_sum,
    })
}
