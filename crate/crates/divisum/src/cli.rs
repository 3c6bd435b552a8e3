//! Command-line front end: every module exposed as a reproducible batch
//! experiment emitting CSV or JSON.
//!
//! Configuration comes from flags and the DIVISUM_THREADS /
//! DIVISUM_PRIME_LIMIT environment variables only, so a logged command
//! line reproduces its report exactly. Exit codes: 0 success, 2 invalid
//! arguments, 3 violated range preconditions.

use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};

use crate::approx::{self};
use crate::bounds::BoundTable;
use crate::correlate::{self, CorrelationSpec};
use crate::error::{Error, Result};
use crate::lemmas;
use crate::moments::{self, MomentParams, MomentSource};
use crate::report::{fmt_sig, Report, ResultRow, Table};
use crate::series::{self, ConstantsTable};
use crate::sieve::FactorSieve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "divisum",
    about = "Numerical experiments with truncated divisor sums, singular series, and prime gaps",
    version
)]
struct Cli {
    /// Worker threads (default: DIVISUM_THREADS or all hardware threads)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Output path (default: stdout)
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    /// Euler-product truncation bound (default: DIVISUM_PRIME_LIMIT or 1e6)
    #[arg(long, global = true)]
    prime_limit: Option<u64>,

    /// Seed for randomized spot checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a factor sieve and summarize it
    SieveInfo {
        #[arg(long)]
        limit: u64,
    },
    /// Point values of the divisor-sum approximations at n
    Lambda {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        r: f64,
        /// lower: the phi-weighted approximation instead of the log-weighted one
        #[arg(long)]
        kind: Option<String>,
    },
    /// Singular series of a shift vector
    Series {
        /// Comma-separated distinct shifts, e.g. 0,2,6
        #[arg(long, value_delimiter = ',', required = true)]
        jvec: Vec<i64>,
        /// Also compute the exact rational form (r <= 3)
        #[arg(long)]
        exact: bool,
        /// Cross-check float vs exact on this many random triples
        #[arg(long)]
        samples: Option<u32>,
    },
    /// Truncated divisor sums with predicted main terms
    Lemma {
        /// One of: 1, 2, 2log, 3, 4, 4exact
        which: String,
        /// Truncation level R (for 4exact: the squarefree modulus r)
        #[arg(long)]
        r: f64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        j: u32,
    },
    /// Correlation sums against their predictors
    Correlate {
        #[arg(long, value_delimiter = ',', required = true)]
        shifts: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        powers: Vec<u32>,
        #[arg(long)]
        n: u64,
        /// Truncation exponent: R = N^r_exp
        #[arg(long, default_value_t = 0.2)]
        r_exp: f64,
        /// Override R directly
        #[arg(long)]
        r: Option<f64>,
        /// Replace the last factor by the von Mangoldt function
        #[arg(long)]
        mixed: bool,
        /// Run the exact congruence-count decomposition check (3 shifts)
        #[arg(long)]
        decomp_check: bool,
    },
    /// Short-interval moments
    Moments {
        #[arg(long)]
        n: u64,
        /// Window length as a multiple of log N
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        source: String,
        /// Truncation exponent: R = N^theta
        #[arg(long, default_value_t = 0.4)]
        theta: f64,
        /// Subtract C log N inside the power
        #[arg(long)]
        c_shift: Option<f64>,
        /// Also evaluate the combined quadratic at this rho
        #[arg(long)]
        rho: Option<f64>,
        /// Sum over (N, 2N] instead of [1, N]
        #[arg(long)]
        primed: bool,
    },
    /// Average of the singular series over r-tuples in [1, h]
    GallagherAvg {
        #[arg(long)]
        h: u64,
        #[arg(long)]
        r: u32,
    },
    /// Histogram of prime counts in sliding windows over (N, 2N]
    GapHist {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        lambda: f64,
        /// Also report the minimal normalized r-step prime gap
        #[arg(long)]
        xi: Option<u32>,
    },
    /// Tables of gap bounds
    GapBounds {
        #[arg(long, default_value_t = 4.0)]
        b: f64,
        #[arg(long, default_value_t = 0.5)]
        vartheta: f64,
        #[arg(long, default_value_t = 10)]
        rmax: u32,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version on stdout with success status
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli
        .threads
        .or_else(|| env_usize("DIVISUM_THREADS"))
        .unwrap_or(0);
    if threads > 0 {
        // ignore the error when a pool already exists (tests, repeat calls)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn env_usize(key: &str) -> Option<usize> {
    std::env::var(key).ok().and_then(|v| v.parse().ok())
}

fn env_u64(key: &str) -> Option<u64> {
    std::env::var(key).ok().and_then(|v| v.parse().ok())
}

fn execute(cli: &Cli) -> Result<()> {
    let prime_limit = cli
        .prime_limit
        .or_else(|| env_u64("DIVISUM_PRIME_LIMIT"))
        .unwrap_or(1_000_000);
    let started = Instant::now();
    let out = match &cli.command {
        Command::SieveInfo { limit } => sieve_info(*limit)?,
        Command::Lambda { n, r, kind } => lambda_cmd(*n, *r, kind.as_deref())?,
        Command::Series {
            jvec,
            exact,
            samples,
        } => series_cmd(jvec, *exact, *samples, prime_limit, cli.seed)?,
        Command::Lemma { which, r, k, j } => lemma_cmd(which, *r, *k, *j, prime_limit)?,
        Command::Correlate {
            shifts,
            powers,
            n,
            r_exp,
            r,
            mixed,
            decomp_check,
        } => correlate_cmd(
            shifts,
            powers,
            *n,
            *r_exp,
            *r,
            *mixed,
            *decomp_check,
            prime_limit,
        )?,
        Command::Moments {
            n,
            lambda,
            k,
            source,
            theta,
            c_shift,
            rho,
            primed,
        } => moments_cmd(*n, *lambda, *k, source, *theta, *c_shift, *rho, *primed)?,
        Command::GallagherAvg { h, r } => gallagher_cmd(*h, *r, prime_limit)?,
        Command::GapHist { n, lambda, xi } => gap_hist_cmd(*n, *lambda, *xi)?,
        Command::GapBounds { b, vartheta, rmax } => gap_bounds_cmd(*b, *vartheta, *rmax)?,
    };
    emit(cli, out, started)
}

/// A subcommand yields either a generic report or a custom CSV table plus
/// the report used for the JSON rendering.
enum Output {
    Plain(Report),
    Tabular(Table, Report),
}

fn emit(cli: &Cli, out: Output, started: Instant) -> Result<()> {
    let text = match (out, cli.format) {
        (Output::Plain(mut rep), Format::Json) | (Output::Tabular(_, mut rep), Format::Json) => {
            rep.runtime_ms = started.elapsed().as_millis() as u64;
            rep.to_json()
        }
        (Output::Plain(rep), Format::Csv) => rep.to_csv(),
        (Output::Tabular(tab, _), Format::Csv) => tab.to_csv(),
    };
    match &cli.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot open {path:?}: {e}")))?;
            f.write_all(text.as_bytes())
                .map_err(|e| Error::InvalidArgument(format!("write failed: {e}")))?;
            if !text.ends_with('\n') {
                let _ = f.write_all(b"\n");
            }
        }
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
    Ok(())
}

fn sieve_info(limit: u64) -> Result<Output> {
    let sieve = FactorSieve::new(limit)?;
    let mut rep = Report::new("sieve-info");
    rep.param("limit", limit);
    rep.push(ResultRow::integer("prime_count", sieve.prime_count()));
    let largest = sieve.primes_in(2, limit).last().unwrap_or(0);
    rep.push(ResultRow::integer("largest_prime", largest));
    let mertens: i64 = (1..=limit).map(|n| sieve.moebius(n).unwrap() as i64).sum();
    rep.push(ResultRow::number("mertens", mertens as f64));
    rep.push(ResultRow::number("psi", approx::psi(limit, &sieve)?));
    Ok(Output::Plain(rep))
}

fn lambda_cmd(n: i64, r: f64, kind: Option<&str>) -> Result<Output> {
    let limit = (n.max(1) as u64).max(approx::cutoff(r)).max(2);
    let sieve = FactorSieve::new(limit)?;
    let mut rep = Report::new("lambda");
    rep.param("n", n);
    rep.param("r", r);
    match kind {
        Some("lower") => {
            rep.param("kind", "lower");
            rep.push(ResultRow::number(
                "lambda_lower_r",
                approx::lambda_lower_r_point(n, r, &sieve)?,
            ));
        }
        None => {
            rep.push(ResultRow::number(
                "lambda_r",
                approx::lambda_r_point(n, r, &sieve)?,
            ));
        }
        Some(other) => {
            return Err(Error::InvalidArgument(format!(
                "unknown kind {other:?}, expected \"lower\""
            )));
        }
    }
    if n >= 1 {
        rep.push(ResultRow::number(
            "von_mangoldt",
            sieve.von_mangoldt(n as u64),
        ));
    }
    Ok(Output::Plain(rep))
}

fn series_cmd(
    jvec: &[i64],
    exact: bool,
    samples: Option<u32>,
    prime_limit: u64,
    seed: u64,
) -> Result<Output> {
    let span = jvec
        .iter()
        .map(|&a| a.unsigned_abs())
        .max()
        .unwrap_or(1)
        .max(1);
    let sieve = FactorSieve::new((4 * span).max(1000))?;
    let consts = ConstantsTable::with_prime_limit(prime_limit)?;
    let mut rep = Report::new("series");
    rep.param(
        "jvec",
        jvec.iter()
            .map(|j| j.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    rep.param("prime_limit", prime_limit);
    let float = series::sseries_vec(jvec, prime_limit, &sieve)?;
    rep.push(ResultRow::number("singular_series", float.value));
    rep.push(ResultRow::number("tail_bound", float.tail_bound));
    if exact {
        let ex = series::sseries_vec_exact(jvec, &sieve)?;
        let exact_f = ex.to_f64(&consts);
        rep.push(ResultRow::text("exact_form", ex.to_string()));
        rep.push(
            ResultRow::number("exact_value", exact_f)
                .with_check(1e-6, (exact_f - float.value).abs() <= 1e-6 * (1.0 + exact_f.abs())),
        );
    }
    if let Some(count) = samples {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        let mut done = 0;
        while done < count {
            let k1 = rng.gen_range(-200..=200i64);
            let k2 = rng.gen_range(-200..=200i64);
            if k1 == 0 || k2 == 0 || k1 == k2 {
                continue;
            }
            let v = [0, k1, k2];
            let f = series::sseries_vec(&v, prime_limit, &sieve)?.value;
            let e = series::sseries_vec_exact(&v, &sieve)?.to_f64(&consts);
            worst = worst.max((f - e).abs());
            done += 1;
        }
        rep.param("samples", count);
        rep.param("seed", seed);
        rep.push(ResultRow::number("max_float_exact_deviation", worst).with_check(1e-6, worst <= 1e-6));
    }
    Ok(Output::Plain(rep))
}

fn lemma_cmd(which: &str, r: f64, k: u64, j: u32, prime_limit: u64) -> Result<Output> {
    let cut = approx::cutoff(r).max(1000).max(k);
    let sieve = FactorSieve::new(cut)?;
    let consts = ConstantsTable::with_prime_limit(prime_limit)?;
    let mut rep = Report::new(format!("lemma {which}"));
    rep.param("r", r);
    rep.param("k", k);
    rep.param("j", j);
    match which {
        "1" => {
            let v = lemmas::lemma1_sum(r, k, j, &sieve, &consts)?;
            rep.push(ResultRow::number("lhs", v.lhs).with_predictor(v.main));
            rep.push(ResultRow::number("residual", v.residual));
            rep.push(ResultRow::number("plain_sum", lemmas::lemma1_plain(r, k, j, &sieve)?));
        }
        "2" => {
            let v = lemmas::lemma2_sum(r, k, j, &sieve, &consts)?;
            rep.push(ResultRow::number("lhs", v.lhs).with_predictor(v.main));
            rep.push(ResultRow::number("scaled_residual", v.scaled_residual));
        }
        "2log" => {
            let v = lemmas::lemma2_log_sum(r, k, j, &sieve, &consts)?;
            rep.push(ResultRow::number("lhs", v.lhs).with_predictor(v.main_without_e));
            rep.push(ResultRow::number("empirical_e", v.empirical_e));
        }
        "3" => {
            let v = lemmas::lemma3_sum(r, k, j, &sieve, &consts)?;
            let mut row = ResultRow::number("lhs", v.lhs);
            if let Some(m) = v.main {
                row = row.with_predictor(m);
            }
            rep.push(row);
        }
        "4" => {
            let v = lemmas::lemma4_truncated(r, k, j, &sieve, &consts)?;
            rep.push(ResultRow::number("lhs", v.lhs).with_predictor(v.main));
            rep.push(ResultRow::number("residual", v.lhs - v.main));
        }
        "4exact" => {
            let (lhs, rhs) = lemmas::lemma4_exact(r as u64, k, j, &sieve)?;
            rep.push(ResultRow::text("lhs", lhs.to_string()));
            rep.push(ResultRow::text("rhs", rhs.to_string()));
            rep.push(ResultRow::flag("equal", lhs == rhs));
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown lemma {other:?}; expected 1, 2, 2log, 3, 4 or 4exact"
            )));
        }
    }
    Ok(Output::Plain(rep))
}

#[allow(clippy::too_many_arguments)]
fn correlate_cmd(
    shifts: &[i64],
    powers: &[u32],
    n: u64,
    r_exp: f64,
    r_override: Option<f64>,
    mixed: bool,
    decomp_check: bool,
    prime_limit: u64,
) -> Result<Output> {
    let r = r_override.unwrap_or_else(|| (n as f64).powf(r_exp));
    let mut rep = Report::new("correlate");
    rep.param(
        "shifts",
        shifts.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(","),
    );
    rep.param(
        "powers",
        powers.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","),
    );
    rep.param("n", n);
    rep.param("r", r);

    if decomp_check {
        if shifts.len() != 3 {
            return Err(Error::InvalidArgument(
                "decomposition check takes exactly 3 shifts".into(),
            ));
        }
        let max_shift = shifts.iter().copied().max().unwrap_or(0).max(0) as u64;
        let sieve = FactorSieve::new((n + max_shift).max(1000))?;
        let d = correlate::decomp_check_s3(n, r, shifts[0], shifts[1], shifts[2], &sieve)?;
        rep.push(ResultRow::number("brute", d.brute));
        rep.push(ResultRow::number("n_times_t3", d.n_times_t3));
        rep.push(ResultRow::number("bound", d.bound));
        rep.push(ResultRow::flag(
            "within_envelope",
            (d.brute - d.n_times_t3).abs() <= d.bound,
        ));
        return Ok(Output::Plain(rep));
    }

    let mut spec = CorrelationSpec::new(shifts.to_vec(), powers.to_vec())?;
    if mixed {
        spec = spec.mixed()?;
        rep.param("mixed", true);
    }
    let max_shift = shifts.iter().copied().max().unwrap_or(0).max(0) as u64;
    let sieve = FactorSieve::new((n + max_shift).max(approx::cutoff(r)).max(1000))?;
    let brute = correlate::brute_corr(n, &spec, r, &sieve)?;
    let mut row = ResultRow::number("brute", brute);
    let mut predictor = None;
    if !mixed {
        if let Ok(p) = correlate::predictor_theorem1(n, r, &spec, prime_limit, &sieve) {
            predictor = Some(p);
            row = row.with_predictor(p);
        }
    } else if let Ok(p) = correlate::predictor_theorem1(n, r, &spec, prime_limit, &sieve) {
        // mixed correlations share the pure main term in range
        predictor = Some(p);
        row = row.with_predictor(p);
    }
    rep.push(row);
    if let Some(p) = predictor {
        if p != 0.0 {
            rep.push(ResultRow::number("ratio", brute / p));
        }
    }
    Ok(Output::Plain(rep))
}

#[allow(clippy::too_many_arguments)]
fn moments_cmd(
    n: u64,
    lambda: f64,
    k: u32,
    source: &str,
    theta: f64,
    c_shift: Option<f64>,
    rho: Option<f64>,
    primed: bool,
) -> Result<Output> {
    let source = match source {
        "psi" => MomentSource::Psi,
        "psir" => MomentSource::PsiR,
        "mixed" => MomentSource::Mixed,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown source {other:?}, expected psi, psir or mixed"
            )));
        }
    };
    let log_n = (n as f64).ln();
    let h = (lambda * log_n).round().max(0.0) as u64;
    let r = (n as f64).powf(theta);
    let c = c_shift.unwrap_or(0.0);
    let primed = primed || c_shift.is_some() || rho.is_some();
    let span = if primed { 2 * n + h } else { n + h };
    let sieve = FactorSieve::new(span.max(1000))?;
    let mut rep = Report::new("moments");
    rep.param("n", n);
    rep.param("lambda", lambda);
    rep.param("h", h);
    rep.param("k", k);
    rep.param("theta", theta);
    rep.param("c", c);
    rep.param("primed", primed);
    let m = moments::moment(
        MomentParams {
            n,
            h,
            k,
            source,
            r,
            c,
            primed,
        },
        &sieve,
    )?;
    let mut row = ResultRow::number("moment", m.value);
    if let Some(p) = m.predictor {
        row = row.with_predictor(p);
    }
    rep.push(row);
    rep.push(ResultRow::number("normalized", m.normalized));
    rep.push(ResultRow::number("lambda_realized", m.lambda));
    if let Some(rho) = rho {
        let direct = moments::m_h_rho(n, h, rho, r, c, &sieve)?;
        rep.param("rho", rho);
        let norm = direct / (n as f64 * log_n.powi(3));
        rep.push(ResultRow::number("m_h_rho", direct));
        rep.push(ResultRow::number("m_h_rho_normalized", norm));
        let lam = m.lambda;
        if lam != rho {
            rep.push(ResultRow::number(
                "m_h_rho_closed",
                moments::m_h_rho_closed(lam, rho, theta)?,
            ));
            rep.push(ResultRow::number(
                "optimal_c",
                moments::optimal_c(lam, rho, theta)?,
            ));
        }
    }
    Ok(Output::Plain(rep))
}

fn gallagher_cmd(h: u64, r: u32, prime_limit: u64) -> Result<Output> {
    let sieve = FactorSieve::new((2 * h).max(1000))?;
    let consts = ConstantsTable::with_prime_limit(prime_limit)?;
    let v = moments::singular_avg(h, r, &sieve, &consts)?;
    let mut rep = Report::new("gallagher-avg");
    rep.param("h", h);
    rep.param("r", r);
    rep.push(ResultRow::number("average", v).with_predictor(1.0));
    rep.push(ResultRow::number("deviation", (v - 1.0).abs()));
    Ok(Output::Plain(rep))
}

fn gap_hist_cmd(n: u64, lambda: f64, xi: Option<u32>) -> Result<Output> {
    let log_n = (n as f64).ln();
    let h = (lambda * log_n).round().max(1.0) as u64;
    let margin = 100_000u64;
    let sieve = FactorSieve::new(2 * n + h + margin)?;
    let hist = moments::gap_histogram(n, h, &sieve)?;
    let mut rep = Report::new("gap-hist");
    rep.param("n", n);
    rep.param("lambda", lambda);
    rep.param("h", h);
    let lam = h as f64 / log_n;
    for (&r, &count) in &hist.counts {
        // Poisson prediction for the window prime count
        let mut pred = (-lam).exp() * n as f64;
        for i in 1..=r {
            pred *= lam / i as f64;
        }
        rep.push(ResultRow::number(format!("count_{r}"), count as f64).with_predictor(pred));
    }
    rep.push(ResultRow::integer("total", hist.total()));
    for r in 0..=3 {
        rep.push(ResultRow::integer(format!("q_minus_{r}"), hist.q_minus(r)));
        rep.push(ResultRow::integer(format!("q_plus_{r}"), hist.q_plus(r)));
    }
    if let Some(r) = xi {
        rep.push(ResultRow::number(
            format!("empirical_xi_{r}"),
            moments::empirical_xi(n, r, &sieve)?,
        ));
    }
    Ok(Output::Plain(rep))
}

fn gap_bounds_cmd(b: f64, vartheta: f64, rmax: u32) -> Result<Output> {
    let table = BoundTable::generate(b, vartheta, rmax)?;
    let mut tab = Table::new(&["method", "r", "b", "vartheta", "value"]);
    let mut rep = Report::new("gap-bounds");
    rep.param("b", b);
    rep.param("vartheta", vartheta);
    rep.param("rmax", rmax);
    for row in &table.rows {
        tab.push(vec![
            row.method_label(),
            row.r.to_string(),
            row.b.map(|v| fmt_sig(v, 12)).unwrap_or_default(),
            row.vartheta.map(|v| fmt_sig(v, 12)).unwrap_or_default(),
            fmt_sig(row.value, 12),
        ]);
        rep.push(ResultRow::number(
            format!("{}[r={}]", row.method_label(), row.r),
            row.value,
        ));
    }
    Ok(Output::Tabular(tab, rep))
}
