//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage or parameter errors, 1 for
//! anything else. Results go to stdout, diagnostics to stderr.

pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::bounds::{q_half, BoundReport, QHalfMethod};
use crate::distinguish::{default_collision_threshold, DistinguisherKind, DistinguisherSpec};
use crate::error::Error;
use crate::exact::{alg1_exact_advantage, alg1_sharpness_checks, kl_perm_func, total_variation};
use crate::mc::{estimate_advantage, sweep, with_threads, AdvantageEstimate, MIN_TRIALS};
use crate::params::{log2_biguint, rational_to_f64, validate_params, Params};
use output::{write_rows, Format, OutputRecord, Value};

pub const SEED_ENV: &str = "TRUNC_DIST_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "truncdist",
    version,
    about = "Truncated random permutation vs. random function"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every closed-form advantage bound.
    Bounds(BoundsArgs),
    /// Exact total variation, KL and balance-test quantities (q <= 30).
    Exact(ExactArgs),
    /// Monte Carlo estimate of a distinguisher's advantage.
    Simulate(SimulateArgs),
    /// Monte Carlo estimates over a list of query budgets.
    Sweep(SweepArgs),
    /// Smallest q whose advantage (or advantage bound) reaches 1/2.
    Qhalf(QHalfArgs),
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Input/output width in bits.
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    /// Number of truncated low bits.
    #[arg(long, allow_negative_numbers = true)]
    m: i64,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Query budget; accepts decimal or `2^k`.
    #[arg(long, value_parser = parse_int, conflicts_with_all = ["q_min", "q_max"])]
    q: Option<BigInt>,
    #[arg(long, value_parser = parse_int, requires = "q_max")]
    q_min: Option<BigInt>,
    #[arg(long, value_parser = parse_int, requires = "q_min")]
    q_max: Option<BigInt>,
    /// Grid size for --q-min/--q-max.
    #[arg(long, default_value_t = 16)]
    points: usize,
    /// Geometric instead of linear grid.
    #[arg(long)]
    log_scale: bool,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Constant standing in for the O(n) factor of the Bellare-Impagliazzo bound.
    #[arg(long, default_value_t = 1.0)]
    bi_constant: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Query budget; accepts decimal or `2^k`.
    #[arg(long, value_parser = parse_int)]
    q: BigInt,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long, value_enum, default_value_t = DistinguisherArg::Collision)]
    distinguisher: DistinguisherArg,
    /// Collision threshold on colliding pairs (default: midpoint of the two means).
    #[arg(long)]
    threshold: Option<f64>,
    /// Trials per world.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Master seed.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores). Does not affect results.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Query budget; accepts decimal or `2^k`.
    #[arg(long, value_parser = parse_int)]
    q: BigInt,
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Comma-separated query budgets.
    #[arg(long = "q-list", value_delimiter = ',', value_parser = parse_int, conflicts_with_all = ["q_min", "q_max"])]
    q_list: Vec<BigInt>,
    #[arg(long, value_parser = parse_int, requires = "q_max")]
    q_min: Option<BigInt>,
    #[arg(long, value_parser = parse_int, requires = "q_min")]
    q_max: Option<BigInt>,
    #[arg(long, default_value_t = 16)]
    points: usize,
    #[arg(long)]
    log_scale: bool,
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Args)]
struct QHalfArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, default_value_t = 1.0)]
    bi_constant: f64,
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistinguisherArg {
    Collision,
    Balance,
    Bayes,
}

impl From<DistinguisherArg> for DistinguisherKind {
    fn from(d: DistinguisherArg) -> Self {
        match d {
            DistinguisherArg::Collision => DistinguisherKind::Collision,
            DistinguisherArg::Balance => DistinguisherKind::Balance,
            DistinguisherArg::Bayes => DistinguisherKind::Bayes,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Stam,
    Birthday,
    Combined,
    Hall,
    Gg,
    Bi,
    Exact,
    Montecarlo,
}

/// Decimal integer or `2^k`.
fn parse_int(s: &str) -> Result<BigInt, String> {
    let s = s.trim();
    if let Some(exp) = s.strip_prefix("2^") {
        let k: u32 = exp.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
        if k > 4096 {
            return Err(format!("exponent too large in {s:?}"));
        }
        return Ok(BigInt::one() << k as usize);
    }
    s.parse::<BigInt>()
        .map_err(|_| format!("not an integer: {s:?}"))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Exact(a) => cmd_exact(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Qhalf(a) => cmd_qhalf(a, out),
    }
}

fn params(instance: &InstanceArgs, q: &BigInt) -> Result<Params, Failure> {
    Ok(validate_params(instance.n, instance.m, q)?)
}

/// Integer grid between `lo` and `hi` inclusive, deduplicated.
fn q_grid(
    lo: &BigUint,
    hi: &BigUint,
    points: usize,
    log_scale: bool,
) -> Result<Vec<BigUint>, Failure> {
    if lo > hi {
        return Err(Failure::Usage("--q-min must be <= --q-max".into()));
    }
    if points == 0 {
        return Err(Failure::Usage("--points must be >= 1".into()));
    }
    if points == 1 || lo == hi {
        return Ok(vec![lo.clone()]);
    }
    let steps = points - 1;
    let mut out: Vec<BigUint> = Vec::with_capacity(points);
    for i in 0..=steps {
        let q = if i == 0 {
            lo.clone()
        } else if i == steps {
            hi.clone()
        } else if log_scale {
            if lo.is_zero() {
                return Err(Failure::Usage("--log-scale needs --q-min >= 1".into()));
            }
            let (a, b) = (log2_biguint(lo), log2_biguint(hi));
            let x = (a + (b - a) * i as f64 / steps as f64).exp2().round();
            BigUint::from_f64(x)
                .unwrap_or_else(|| lo.clone())
                .clamp(lo.clone(), hi.clone())
        } else {
            lo + (hi - lo) * BigUint::from(i) / BigUint::from(steps)
        };
        if out.last() != Some(&q) {
            out.push(q);
        }
    }
    Ok(out)
}

fn to_biguint(q: &BigInt, flag: &str) -> Result<BigUint, Failure> {
    q.to_biguint()
        .ok_or_else(|| Failure::Usage(format!("{flag} must be >= 0")))
}

fn bounds_record(r: &BoundReport) -> OutputRecord {
    let mut rec = OutputRecord::new();
    rec.set("n", r.n)
        .set("m", r.m)
        .set("q", &r.q)
        .set("birthday_exact", r.birthday_exact)
        .set("birthday_lower", r.birthday_lower)
        .set("birthday_lower_pow", r.chain.lower_pow)
        .set("birthday_upper_pow", r.chain.upper_pow)
        .set("birthday_upper", r.birthday_upper)
        .set("hall", r.hall)
        .set("bi", r.bi.value)
        .set("bi_applicable", r.bi.applicable)
        .set("bi_constant", r.bi_constant)
        .set("gg_branch", r.gg_branch.name())
        .set("gg_small_m", r.gg_small_m)
        .set("gg_small_m_applicable", r.gg_small_m_applicable)
        .set("gg_large_m", r.gg_large_m)
        .set("gg_large_m_applicable", r.gg_large_m_applicable)
        .set("stam", r.stam)
        .set("stam_relaxed", r.stam_relaxed)
        .set("stam_simplified", r.stam_simplified.value)
        .set("stam_simplified_applicable", r.stam_simplified.applicable)
        .set("combined", r.combined);
    rec
}

fn cmd_bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if a.bi_constant.is_nan() || a.bi_constant <= 0.0 {
        return Err(Failure::Usage("--bi-constant must be > 0".into()));
    }
    let qs = match (&a.grid.q, &a.grid.q_min, &a.grid.q_max) {
        (Some(q), _, _) => vec![q.clone()],
        (None, Some(lo), Some(hi)) => {
            let (lo, hi) = (to_biguint(lo, "--q-min")?, to_biguint(hi, "--q-max")?);
            q_grid(&lo, &hi, a.grid.points, a.grid.log_scale)?
                .into_iter()
                .map(BigInt::from)
                .collect()
        }
        _ => return Err(Failure::Usage("give --q or --q-min/--q-max".into())),
    };
    let rows = qs
        .iter()
        .map(|q| {
            Ok(bounds_record(&BoundReport::evaluate(
                &params(&a.instance, q)?,
                a.bi_constant,
            )))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    write_rows(out, a.format, "bounds", &rows)?;
    Ok(())
}

fn cmd_exact(a: ExactArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let p = params(&a.instance, &a.q)?;
    let tv = total_variation(&p)?;
    let kl = kl_perm_func(&p)?;
    let report = BoundReport::evaluate(&p, 1.0);
    let mut rec = OutputRecord::new();
    rec.set("n", p.n())
        .set("m", p.m())
        .set("q", p.q())
        .set("tv", rational_to_f64(&tv))
        .set("tv_exact", &tv)
        .set("kl", kl)
        .set("pinsker_rhs", (kl / 2.0).sqrt())
        .set("stam", report.stam)
        .set("combined", report.combined);
    if let Ok(adv) = alg1_exact_advantage(&p) {
        rec.set("alg1_advantage", rational_to_f64(&adv))
            .set("alg1_advantage_exact", &adv);
        match alg1_sharpness_checks(&p) {
            Ok(s) => {
                rec.set("alg1_scaled_advantage", s.scaled_advantage())
                    .set("alg1_lower_bound", rational_to_f64(&s.lower_bound()))
                    .set("alg1_lower_bound_holds", s.lower_bound_ok)
                    .set("alg1_eq_b_holds", s.checks.iter().all(|c| c.binomial_ok))
                    .set("alg1_eq_p_holds", s.checks.iter().all(|c| c.ratio_ok))
                    .set("alg1_counterexample_k", s.counterexample())
                    .set("alg1_anchor_b_holds", s.anchor_binomial_ok)
                    .set("alg1_anchor_p_holds", s.anchor_ratio_ok);
            }
            Err(_) => {
                for k in [
                    "alg1_scaled_advantage",
                    "alg1_lower_bound",
                    "alg1_lower_bound_holds",
                    "alg1_eq_b_holds",
                    "alg1_eq_p_holds",
                    "alg1_counterexample_k",
                    "alg1_anchor_b_holds",
                    "alg1_anchor_p_holds",
                ] {
                    rec.set(k, Value::Null);
                }
            }
        }
    }
    write_rows(out, a.format, "exact", &[rec])?;
    Ok(())
}

fn spec_of(sim: &SimArgs) -> DistinguisherSpec {
    DistinguisherSpec {
        kind: sim.distinguisher.into(),
        threshold: sim.threshold,
    }
}

fn check_sim(sim: &SimArgs) -> Result<(), Failure> {
    if sim.trials < MIN_TRIALS {
        return Err(Error::TooFewTrials {
            trials: sim.trials,
            min: MIN_TRIALS,
        }
        .into());
    }
    Ok(())
}

fn estimate_record(p: &Params, spec: &DistinguisherSpec, e: &AdvantageEstimate) -> OutputRecord {
    let report = BoundReport::evaluate(p, 1.0);
    let mut rec = OutputRecord::new();
    rec.set("n", p.n())
        .set("m", p.m())
        .set("q", p.q())
        .set("distinguisher", spec.kind.name())
        .set(
            "threshold",
            match spec.kind {
                DistinguisherKind::Collision => Value::Real(
                    spec.threshold
                        .unwrap_or_else(|| default_collision_threshold(p)),
                ),
                _ => Value::Null,
            },
        )
        .set("trials_per_world", e.trials_per_world)
        .set("seed", e.seed)
        .set("perm_hits", e.perm_hits)
        .set("func_hits", e.func_hits)
        .set("p_perm_guess_given_perm", e.p_perm_guess_given_perm)
        .set("p_perm_guess_given_func", e.p_perm_guess_given_func)
        .set("adv_hat", e.adv_hat)
        .set("ci_halfwidth_95", e.ci_halfwidth_95)
        .set("stam", report.stam)
        .set("combined", report.combined);
    rec
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    check_sim(&a.sim)?;
    let p = params(&a.instance, &a.q)?;
    let spec = spec_of(&a.sim);
    let (trials, seed) = (a.sim.trials, a.sim.seed);
    let e = with_threads(a.sim.threads, || {
        estimate_advantage(&p, &spec, trials, seed)
    })?;
    write_rows(out, a.format, "simulate", &[estimate_record(&p, &spec, &e)])?;
    Ok(())
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    check_sim(&a.sim)?;
    let qs: Vec<BigUint> = match (&a.q_min, &a.q_max) {
        (Some(lo), Some(hi)) => q_grid(
            &to_biguint(lo, "--q-min")?,
            &to_biguint(hi, "--q-max")?,
            a.points,
            a.log_scale,
        )?,
        _ => a
            .q_list
            .iter()
            .map(|q| to_biguint(q, "--q-list"))
            .collect::<Result<_, _>>()?,
    };
    // validate every q before spending time on simulation
    for q in &qs {
        params(&a.instance, &BigInt::from(q.clone()))?;
    }
    let qs: Vec<u64> = qs
        .iter()
        .map(|q| {
            q.to_u64()
                .ok_or_else(|| Failure::Usage(format!("q={q} is too large to simulate")))
        })
        .collect::<Result<_, _>>()?;
    let spec = spec_of(&a.sim);
    let (n, m) = (a.instance.n as u32, a.instance.m as u32);
    let (trials, seed) = (a.sim.trials, a.sim.seed);
    let rows = with_threads(a.sim.threads, || sweep(n, m, &qs, &spec, trials, seed))?;
    let records: Vec<OutputRecord> = rows
        .iter()
        .map(|r| estimate_record(&r.params, &spec, &r.estimate))
        .collect();
    write_rows(out, a.format, "sweep", &records)?;
    Ok(())
}

fn cmd_qhalf(a: QHalfArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let p = params(&a.instance, &BigInt::zero())?;
    let method = match a.method {
        MethodArg::Stam => QHalfMethod::Stam,
        MethodArg::Birthday => QHalfMethod::Birthday,
        MethodArg::Combined => QHalfMethod::Combined,
        MethodArg::Hall => QHalfMethod::Hall,
        MethodArg::Gg => QHalfMethod::Gg,
        MethodArg::Bi => {
            if a.bi_constant.is_nan() || a.bi_constant <= 0.0 {
                return Err(Failure::Usage("--bi-constant must be > 0".into()));
            }
            QHalfMethod::Bi {
                constant: a.bi_constant,
            }
        }
        MethodArg::Exact => QHalfMethod::Exact,
        MethodArg::Montecarlo => {
            check_sim(&a.sim)?;
            QHalfMethod::MonteCarlo {
                distinguisher: spec_of(&a.sim),
                trials: a.sim.trials,
                seed: a.sim.seed,
            }
        }
    };
    let (n, m) = (p.n(), p.m());
    let found = with_threads(a.sim.threads, || q_half(n, m, &method))?;
    let mut rec = OutputRecord::new();
    rec.set("n", n)
        .set("m", m)
        .set("method", method.name())
        .set(
            "q_half",
            match &found {
                Some(q) => Value::Int(q.clone()),
                None => Value::Text("not reached".into()),
            },
        );
    if let QHalfMethod::MonteCarlo {
        distinguisher,
        trials,
        seed,
    } = &method
    {
        rec.set("distinguisher", distinguisher.kind.name())
            .set("trials_per_world", *trials)
            .set("seed", *seed);
    }
    if let QHalfMethod::Bi { constant } = &method {
        rec.set("bi_constant", *constant);
    }
    write_rows(out, a.format, "qhalf", &[rec])?;
    Ok(())
}
