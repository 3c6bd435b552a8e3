//! Brute-force correlation sums of shifted, powered divisor-sum
//! approximations, their asymptotic main terms, the W_R double sum, and
//! the exact congruence-count decomposition of the triple sum.

use rayon::prelude::*;

use crate::approx::{batch, cutoff, ApproxKind};
use crate::error::{Error, Result};
use crate::kahan::{sum_iter, sum_over, KahanSum};
use crate::series::{sseries_j, sseries_vec_exact, ConstantsTable};
use crate::sieve::{gcd, lcm, FactorSieve};

/// Shift pattern and power vector driving a correlation sum.
#[derive(Debug, Clone)]
pub struct CorrelationSpec {
    pub shifts: Vec<i64>,
    pub powers: Vec<u32>,
    /// When set, the last factor is the true von Mangoldt function and its
    /// power must be 1.
    pub mixed: bool,
    pub kind: ApproxKind,
}

impl CorrelationSpec {
    pub fn new(shifts: Vec<i64>, powers: Vec<u32>) -> Result<Self> {
        let spec = Self {
            shifts,
            powers,
            mixed: false,
            kind: ApproxKind::LambdaR,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn mixed(mut self) -> Result<Self> {
        self.mixed = true;
        self.validate()?;
        Ok(self)
    }

    pub fn with_kind(mut self, kind: ApproxKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.shifts.is_empty() || self.shifts.len() != self.powers.len() {
            return Err(Error::InvalidArgument(
                "shifts and powers must be nonempty and of equal length".into(),
            ));
        }
        let distinct: std::collections::BTreeSet<i64> = self.shifts.iter().copied().collect();
        if distinct.len() != self.shifts.len() {
            return Err(Error::InvalidArgument("shifts must be distinct".into()));
        }
        if self.powers.iter().any(|&a| a < 1) {
            return Err(Error::InvalidArgument("powers must be >= 1".into()));
        }
        if self.mixed {
            if self.shifts.len() < 2 {
                return Err(Error::InvalidArgument(
                    "mixed correlations require r >= 2 factors".into(),
                ));
            }
            if *self.powers.last().unwrap() != 1 {
                return Err(Error::InvalidArgument(
                    "mixed correlations require the last power to be 1".into(),
                ));
            }
        }
        Ok(())
    }

    /// k = sum of the powers.
    pub fn k(&self) -> u32 {
        self.powers.iter().sum()
    }
}

/// Direct evaluation of the correlation sum over n in [1, N], reading one
/// shared batch array (plus the von Mangoldt array when mixed).
pub fn brute_corr(n_max: u64, spec: &CorrelationSpec, r: f64, sieve: &FactorSieve) -> Result<f64> {
    spec.validate()?;
    if n_max == 0 {
        return Ok(0.0);
    }
    let max_shift = *spec.shifts.iter().max().unwrap();
    let hi = n_max as i64 + max_shift.max(0);
    if hi as u64 > sieve.limit() {
        return Err(Error::Precondition(format!(
            "N + max shift = {hi} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    let approx = batch(spec.kind, 1, hi as u64 + 1, r, sieve)?;
    let lambda = if spec.mixed {
        Some(batch(ApproxKind::VonMangoldt, 1, hi as u64 + 1, 0.0, sieve)?)
    } else {
        None
    };
    let last = spec.shifts.len() - 1;
    Ok(sum_over(1, n_max + 1, |n| {
        let mut term = 1.0f64;
        for (i, (&j, &a)) in spec.shifts.iter().zip(&spec.powers).enumerate() {
            let idx = n as i64 + j;
            let v = if spec.mixed && i == last {
                lambda.as_ref().unwrap().get(idx)
            } else {
                approx.get(idx)
            };
            if v == 0.0 {
                return 0.0;
            }
            term *= v.powi(a as i32);
        }
        term
    }))
}

/// Main-term constants for the diagonal power vector (k) up to k = 6 and
/// all off-diagonal vectors with k <= 3.
fn c_k_constant(powers: &[u32]) -> Result<f64> {
    let k: u32 = powers.iter().sum();
    if powers.len() == 1 {
        return match k {
            1 | 2 => Ok(1.0),
            3 | 4 => Ok(0.75),
            5 => Ok(11065.0 / (1u64 << 14) as f64),
            6 => Ok(11_460_578_803.0 / (1u64 << 34) as f64),
            _ => Err(Error::Unsupported(format!(
                "no diagonal constant for k = {k}"
            ))),
        };
    }
    if k <= 3 {
        Ok(1.0)
    } else {
        Err(Error::Unsupported(format!(
            "off-diagonal constants only known for k <= 3, got k = {k} with {} factors",
            powers.len()
        )))
    }
}

/// Predicted main term C_k(a) S(j) N (log R)^{k-r}.
pub fn predictor_theorem1(
    n_max: u64,
    r: f64,
    spec: &CorrelationSpec,
    prime_limit: u64,
    sieve: &FactorSieve,
) -> Result<f64> {
    spec.validate()?;
    let c = c_k_constant(&spec.powers)?;
    let series = crate::series::sseries_vec(&spec.shifts, prime_limit, sieve)?.value;
    let k = spec.k() as i32;
    let r_count = spec.shifts.len() as i32;
    Ok(c * series * n_max as f64 * r.ln().powi(k - r_count))
}

/// Pair-correlation main term: N log R on the diagonal, S_2(k) N off it.
pub fn pair_main(
    k: i64,
    n_max: u64,
    r: f64,
    sieve: &FactorSieve,
    consts: &ConstantsTable,
) -> Result<f64> {
    if k == 0 {
        return Ok(n_max as f64 * r.ln());
    }
    if k.unsigned_abs() as f64 > r {
        return Err(Error::Precondition(format!(
            "pair main term requires 0 < |k| <= R, got k = {k}, R = {r}"
        )));
    }
    Ok(sseries_j(k, 2, sieve)?.to_f64(consts) * n_max as f64)
}

/// Triple-correlation main term for the three shift patterns
/// (0,0,0), (0,k,k->0 diagonal with square), and distinct (0,k1,k2).
pub fn triple_main(
    k1: i64,
    k2: i64,
    n_max: u64,
    r: f64,
    sieve: &FactorSieve,
    consts: &ConstantsTable,
) -> Result<f64> {
    let n = n_max as f64;
    let log_r = r.ln();
    if k1 == 0 && k2 == 0 {
        return Ok(0.75 * n * log_r * log_r);
    }
    if k1 == 0 || k2 == 0 || k1 == k2 {
        let k = if k1 == 0 { k2 } else { k1 };
        if (k * k) as f64 >= r {
            return Err(Error::Precondition(format!(
                "single-shift branch requires |k| <= sqrt(R), got k = {k}, R = {r}"
            )));
        }
        return Ok(sseries_j(k, 2, sieve)?.to_f64(consts) * n * log_r);
    }
    let k_star = k1.unsigned_abs().max(k2.unsigned_abs());
    if (k_star * k_star) as f64 >= r / 2.0 {
        return Err(Error::Precondition(format!(
            "distinct-shift branch requires (k*)^2 < R/2, got k* = {k_star}, R = {r}"
        )));
    }
    let series = sseries_vec_exact(&[0, k1, k2], sieve)?.to_f64(consts);
    Ok(series * n)
}

/// The double divisor sum behind the mixed correlations:
/// sum over d_1, d_2 <= R with (d_i, j_i) = 1, (d_1, d_2) | j_2 - j_1 of
/// mu(d_1) mu(d_2) / phi([d_1, d_2]) log(R/d_1) log(R/d_2).
/// With a single shift the inner product collapses to the Lemma-1 sum.
pub fn w_r_direct(r: f64, jvec: &[i64], sieve: &FactorSieve) -> Result<f64> {
    if jvec.is_empty() || jvec.len() > 2 {
        return Err(Error::Unsupported(
            "W_R direct evaluation supports 1 or 2 shifts".into(),
        ));
    }
    if jvec.iter().any(|&j| j == 0) {
        return Err(Error::Precondition(
            "W_R requires every shift to be nonzero".into(),
        ));
    }
    let cut = cutoff(r);
    if cut > 100_000 {
        return Err(Error::Resource(format!(
            "W_R direct loop capped at R = 1e5, got {r}"
        )));
    }
    if cut > sieve.limit() {
        return Err(Error::InvalidArgument(format!(
            "R = {r} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    let log_r = r.ln();
    if jvec.len() == 1 {
        let j0 = jvec[0].unsigned_abs();
        let mut acc = KahanSum::new();
        for d in 1..=cut {
            if gcd(d, j0) != 1 {
                continue;
            }
            let mu = sieve.moebius(d)?;
            if mu == 0 {
                continue;
            }
            acc.add(mu as f64 / sieve.euler_phi(d) as f64 * (log_r - (d as f64).ln()));
        }
        return Ok(acc.value());
    }

    let (j1, j2) = (jvec[0], jvec[1]);
    let delta = (j2 - j1).unsigned_abs();
    // Per-d tables: w[d] = mu(d) log(R/d) / phi(d), zero when skipped.
    let mut w1 = vec![0.0f64; cut as usize + 1];
    let mut w2 = vec![0.0f64; cut as usize + 1];
    let mut phi = vec![0u32; cut as usize + 1];
    for d in 1..=cut {
        let mu = sieve.moebius(d)?;
        if mu == 0 {
            continue;
        }
        let ph = sieve.euler_phi(d);
        phi[d as usize] = ph as u32;
        let w = mu as f64 * (log_r - (d as f64).ln()) / ph as f64;
        if gcd(d, j1.unsigned_abs()) == 1 {
            w1[d as usize] = w;
        }
        if gcd(d, j2.unsigned_abs()) == 1 {
            w2[d as usize] = w;
        }
    }
    // Stripes over d_1 in fixed-width blocks, combined in ascending order.
    const STRIPE: u64 = 256;
    let nstripes = cut.div_ceil(STRIPE);
    let partials: Vec<f64> = (0..nstripes)
        .into_par_iter()
        .map(|s| {
            let lo = 1 + s * STRIPE;
            let hi = (lo + STRIPE).min(cut + 1);
            let mut acc = KahanSum::new();
            for d1 in lo..hi {
                let a = w1[d1 as usize];
                if a == 0.0 {
                    continue;
                }
                for d2 in 1..=cut {
                    let b = w2[d2 as usize];
                    if b == 0.0 {
                        continue;
                    }
                    let g = gcd(d1, d2);
                    if delta % g != 0 {
                        continue;
                    }
                    // phi([d1,d2]) = phi(d1) phi(d2) / phi(g) for squarefree d
                    acc.add(a * b * phi[g as usize] as f64);
                }
            }
            acc.value()
        })
        .collect();
    Ok(sum_iter(partials))
}

/// Closed form predicted for W_R on a pair of shifts: the equal-shift case
/// grows like S((0,k)) log R, the distinct case tends to S((0,k1,k2)).
pub fn w_r_closed(
    r: f64,
    j_pair: (i64, i64),
    sieve: &FactorSieve,
    consts: &ConstantsTable,
) -> Result<f64> {
    let (k1, k2) = j_pair;
    if k1 == 0 || k2 == 0 {
        return Err(Error::Precondition(
            "W_R closed form requires nonzero shifts".into(),
        ));
    }
    if k1 == k2 {
        return Ok(sseries_j(k1, 2, sieve)?.to_f64(consts) * r.ln());
    }
    let delta = k1
        .checked_mul(k2)
        .and_then(|t| t.checked_mul(k2 - k1))
        .ok_or_else(|| Error::InvalidArgument("shift product overflows".into()))?;
    if (delta.unsigned_abs() as f64) >= r / 2.0 {
        return Err(Error::Precondition(format!(
            "distinct-shift closed form requires |k1 k2 (k2-k1)| < R/2, got {delta}"
        )));
    }
    Ok(sseries_vec_exact(&[0, k1, k2], sieve)?.to_f64(consts))
}

/// Exact decomposition check for the triple sum: the brute-force value
/// differs from N*T_3 by at most the accumulated per-triple envelope,
/// because each admissible congruence class contributes floor-count
/// instead of N/lcm, an error below 1 in absolute value.
#[derive(Debug, Clone, Copy)]
pub struct DecompCheck {
    pub brute: f64,
    pub n_times_t3: f64,
    pub bound: f64,
}

pub fn decomp_check_s3(
    n_max: u64,
    r: f64,
    k1: i64,
    k2: i64,
    k3: i64,
    sieve: &FactorSieve,
) -> Result<DecompCheck> {
    let cut = cutoff(r);
    if cut > 300 {
        return Err(Error::Resource(format!(
            "decomposition check capped at R = 300, got {r}"
        )));
    }
    if k1 < 0 || k2 < 0 || k3 < 0 {
        return Err(Error::Precondition(
            "decomposition check requires nonnegative shifts".into(),
        ));
    }
    let shifts = [k1, k2, k3];
    let brute = if n_max == 0 {
        0.0
    } else {
        let hi = n_max as i64 + shifts.iter().max().unwrap();
        if hi as u64 > sieve.limit() {
            return Err(Error::Precondition(format!(
                "N + max shift = {hi} exceeds sieve limit {}",
                sieve.limit()
            )));
        }
        let arr = batch(ApproxKind::LambdaR, 1, hi as u64 + 1, r, sieve)?;
        sum_over(1, n_max + 1, |n| {
            shifts.iter().map(|&k| arr.get(n as i64 + k)).product()
        })
    };

    // squarefree d <= R with mu and log weight
    let mut ds: Vec<(u64, f64)> = Vec::new();
    let log_r = r.ln();
    for d in 1..=cut {
        let mu = sieve.moebius(d)?;
        if mu != 0 {
            ds.push((d, mu as f64 * (log_r - (d as f64).ln())));
        }
    }
    let mut t3 = KahanSum::new();
    let mut bound = KahanSum::new();
    for &(d1, w1) in &ds {
        for &(d2, w2) in &ds {
            if (k2 - k1) % gcd(d1, d2) as i64 != 0 {
                continue;
            }
            let l12 = lcm(d1, d2);
            for &(d3, w3) in &ds {
                if (k3 - k1) % gcd(d1, d3) as i64 != 0 || (k3 - k2) % gcd(d2, d3) as i64 != 0 {
                    continue;
                }
                let l = lcm(l12, d3);
                t3.add(w1 * w2 * w3 / l as f64);
                bound.add((w1 * w2 * w3).abs());
            }
        }
    }
    Ok(DecompCheck {
        brute,
        n_times_t3: n_max as f64 * t3.value(),
        bound: bound.value(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (FactorSieve, ConstantsTable) {
        (
            FactorSieve::new(2_000_000).unwrap(),
            ConstantsTable::with_prime_limit(1_000_000).unwrap(),
        )
    }

    #[test]
    fn spec_validation() {
        assert!(CorrelationSpec::new(vec![0, 0], vec![1, 1]).is_err());
        assert!(CorrelationSpec::new(vec![0, 2], vec![1, 0]).is_err());
        assert!(CorrelationSpec::new(vec![0], vec![1]).unwrap().mixed().is_err());
        assert!(CorrelationSpec::new(vec![0, 2], vec![2, 1])
            .unwrap()
            .mixed()
            .is_ok());
        assert_eq!(CorrelationSpec::new(vec![0, 2], vec![2, 1]).unwrap().k(), 3);
    }

    #[test]
    fn brute_zero_n_is_zero() {
        let (s, _) = setup();
        let spec = CorrelationSpec::new(vec![0], vec![1]).unwrap();
        assert_eq!(brute_corr(0, &spec, 10.0, &s).unwrap(), 0.0);
    }

    #[test]
    fn brute_matches_naive_per_point_loop() {
        let (s, _) = setup();
        let r = 20.0;
        let spec = CorrelationSpec::new(vec![0], vec![2]).unwrap();
        let fast = brute_corr(10_000, &spec, r, &s).unwrap();
        let naive: f64 = (1..=10_000i64)
            .map(|n| crate::approx::lambda_r_point(n, r, &s).unwrap().powi(2))
            .sum();
        assert!((fast - naive).abs() < 1e-6 * naive.abs(), "{fast} vs {naive}");
    }

    #[test]
    fn first_correlation_near_n() {
        let (s, _) = setup();
        let spec = CorrelationSpec::new(vec![0], vec![1]).unwrap();
        let n = 1_000_000u64;
        let v = brute_corr(n, &spec, 1_000.0, &s).unwrap();
        let ratio = v / n as f64;
        assert!((0.93..=1.07).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn predictor_table() {
        let (s, _) = setup();
        let n = 100u64;
        let r = 50.0f64;
        let spec3 = CorrelationSpec::new(vec![0], vec![3]).unwrap();
        let p = predictor_theorem1(n, r, &spec3, 10_000, &s).unwrap();
        assert!((p - 0.75 * n as f64 * r.ln().powi(2)).abs() < 1e-9);

        let spec5 = CorrelationSpec::new(vec![0], vec![5]).unwrap();
        let p = predictor_theorem1(n, r, &spec5, 10_000, &s).unwrap();
        assert!((p - 11065.0 / 16384.0 * n as f64 * r.ln().powi(4)).abs() < 1e-9);

        // odd shift kills the pair series
        let spec11 = CorrelationSpec::new(vec![0, 3], vec![1, 1]).unwrap();
        let p = predictor_theorem1(n, r, &spec11, 10_000, &s).unwrap();
        assert_eq!(p, 0.0);

        let spec7 = CorrelationSpec::new(vec![0], vec![7]).unwrap();
        assert!(predictor_theorem1(n, r, &spec7, 10_000, &s).is_err());
    }

    #[test]
    fn pair_main_cases() {
        let (s, c) = setup();
        let n = 1000u64;
        let r = 100.0;
        assert!((pair_main(0, n, r, &s, &c).unwrap() - 1000.0 * r.ln()).abs() < 1e-9);
        assert_eq!(pair_main(3, n, r, &s, &c).unwrap(), 0.0);
        let v = pair_main(2, n, r, &s, &c).unwrap();
        assert!((v - 2.0 * c.c2 * 1000.0).abs() < 1e-9);
        assert!(pair_main(101, n, r, &s, &c).is_err());
    }

    #[test]
    fn triple_main_cases() {
        let (s, c) = setup();
        let n = 1000u64;
        let r = 100.0;
        let v = triple_main(0, 0, n, r, &s, &c).unwrap();
        assert!((v - 0.75 * 1000.0 * r.ln() * r.ln()).abs() < 1e-9);
        let v = triple_main(2, 0, n, r, &s, &c).unwrap();
        assert!((v - 2.0 * c.c2 * 1000.0 * r.ln()).abs() < 1e-9);
        let v = triple_main(2, 6, n, r, &s, &c).unwrap();
        assert!((v - 6.0 * c.c2 * c.c3 * 1000.0).abs() < 1e-6);
        assert!(triple_main(2, 11, n, r, &s, &c).is_err()); // (k*)^2 >= R/2
    }

    #[test]
    fn w_r_single_shift_matches_lemma1_form() {
        let (s, c) = setup();
        let r = 10_000.0;
        let w = w_r_direct(r, &[2], &s).unwrap();
        let l = crate::lemmas::lemma1_sum(r, 2, 1, &s, &c).unwrap();
        assert!((w - l.lhs).abs() < 1e-12, "{w} vs {}", l.lhs);
        assert!(w_r_direct(r, &[0], &s).is_err());
    }

    #[test]
    fn w_r_trivial_r1() {
        let (s, _) = setup();
        assert_eq!(w_r_direct(1.0, &[2, 4], &s).unwrap(), 0.0);
    }

    #[test]
    fn w_r_direct_matches_naive_filter_loop() {
        let (s, _) = setup();
        let r = 200.0;
        let cut = 200u64;
        for jv in [[2i64, 4], [2, 2], [6, 2]] {
            let fast = w_r_direct(r, &jv, &s).unwrap();
            let mut naive = 0.0f64;
            for d1 in 1..=cut {
                for d2 in 1..=cut {
                    let (m1, m2) = (s.moebius(d1).unwrap(), s.moebius(d2).unwrap());
                    if m1 == 0 || m2 == 0 {
                        continue;
                    }
                    if gcd(d1, jv[0].unsigned_abs()) != 1 || gcd(d2, jv[1].unsigned_abs()) != 1 {
                        continue;
                    }
                    let g = gcd(d1, d2);
                    if (jv[1] - jv[0]) % g as i64 != 0 {
                        continue;
                    }
                    naive += (m1 * m2) as f64 / s.euler_phi(lcm(d1, d2)) as f64
                        * (r / d1 as f64).ln()
                        * (r / d2 as f64).ln();
                }
            }
            assert!(
                (fast - naive).abs() < 1e-10 * (1.0 + naive.abs()),
                "{jv:?}: {fast} vs {naive}"
            );
        }
    }

    #[test]
    fn w_r_closed_cases() {
        let (s, c) = setup();
        let r = 10_000.0;
        let v = w_r_closed(r, (2, 2), &s, &c).unwrap();
        assert!((v - 2.0 * c.c2 * r.ln()).abs() < 1e-9);
        assert_eq!(w_r_closed(r, (1, 2), &s, &c).unwrap(), 0.0); // kappa = 1 odd
        let v = w_r_closed(r, (2, 4), &s, &c).unwrap();
        assert_eq!(v, 0.0); // Delta = 16, no factor 3
        let v = w_r_closed(r, (2, 6), &s, &c).unwrap();
        assert!((v - 6.0 * c.c2 * c.c3).abs() < 1e-9);
        assert!(w_r_closed(r, (0, 2), &s, &c).is_err());
    }

    #[test]
    fn decomp_envelope_holds() {
        let (s, _) = setup();
        for (kk, n) in [([0i64, 0, 0], 10_000u64), ([0, 1, 2], 10_000), ([0, 2, 6], 5_000)] {
            let d = decomp_check_s3(n, 30.0, kk[0], kk[1], kk[2], &s).unwrap();
            assert!(
                (d.brute - d.n_times_t3).abs() <= d.bound,
                "{kk:?}: |{} - {}| > {}",
                d.brute,
                d.n_times_t3,
                d.bound
            );
        }
        let d = decomp_check_s3(0, 30.0, 0, 1, 2, &s).unwrap();
        assert_eq!(d.brute, 0.0);
        assert!(d.n_times_t3.abs() <= d.bound);
        assert!(decomp_check_s3(100, 400.0, 0, 1, 2, &s).is_err());
    }

    #[test]
    fn shift_invariance_within_boundary_slack() {
        let (s, _) = setup();
        let r = 50.0;
        let n = 50_000u64;
        let base = CorrelationSpec::new(vec![0, 2], vec![1, 1]).unwrap();
        let shifted = CorrelationSpec::new(vec![5, 7], vec![1, 1]).unwrap();
        let a = brute_corr(n, &base, r, &s).unwrap();
        let b = brute_corr(n, &shifted, r, &s).unwrap();
        // windows differ by at most |c| + max|j| boundary terms
        let max_term = (s.divisors(2).len() as f64 * r.ln()).powi(2) * 16.0;
        assert!((a - b).abs() <= 12.0 * max_term, "{a} vs {b}");
    }
}
