//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failure, 2 verification failure, 3 timeout,
//! 64 usage error.

mod bench;

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::Error;
use crate::ideals::Ideal;
use crate::ntkernel::{gen_prime_discriminant, Discriminant, FieldSign, FixedReal};
use crate::relgen::{read_cache, relation_stream, verify_relation, write_cache, CacheContents, StreamConfig};
use crate::secest::{mips_years, security_table, Anchor, Calibration, EstimateRow};
use crate::solver::{self, json_int, SolverConfig};

pub use bench::{bench, BenchRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_UNVERIFIED: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "qfdlog", version, about = "Index calculus in quadratic fields")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    cmd: Command,
}

/// Settings shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Seed for every random choice (default: $QFDLOG_SEED, else 0).
    #[arg(long, global = true, env = "QFDLOG_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Relation producer threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true)]
    pub fb_size: Option<usize>,
    /// Relations beyond the factor base size.
    #[arg(long, global = true, default_value_t = 20)]
    pub surplus: usize,
    /// Check h (or hR) against the Euler product window.
    #[arg(long, global = true, default_value_t = true, num_args = 0..=1, require_equals = true, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub certified: bool,
    /// Relation cache file.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Time budget in seconds.
    #[arg(long, global = true)]
    pub timeout: Option<f64>,
}

impl RunArgs {
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            seed: self.seed,
            fb_size: self.fb_size,
            surplus: self.surplus,
            certified: self.certified,
            jobs: self.jobs.max(1),
            timeout: self.timeout.map(Duration::from_secs_f64),
            cache: self.cache.clone(),
            ..SolverConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a prime discriminant of the given size.
    GenDisc {
        #[arg(long)]
        bits: u32,
        #[arg(long, conflicts_with = "real", required_unless_present = "real")]
        imaginary: bool,
        #[arg(long)]
        real: bool,
    },
    /// Class number and group structure (Δ < 0).
    Classgroup {
        #[arg(short = 'd', long = "delta", allow_hyphen_values = true)]
        delta: String,
    },
    /// Regulator and class number (Δ > 0).
    Regulator {
        #[arg(short = 'd', long = "delta", allow_hyphen_values = true)]
        delta: String,
    },
    /// Discrete logarithm of [a] to the base [g] (Δ < 0).
    Dlog {
        #[arg(short = 'd', long = "delta", allow_hyphen_values = true)]
        delta: String,
        #[arg(short = 'g', allow_hyphen_values = true)]
        g: String,
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: String,
    },
    /// Distance of a reduced principal ideal (Δ > 0).
    InfraDlog {
        #[arg(short = 'd', long = "delta", allow_hyphen_values = true)]
        delta: String,
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: String,
    },
    /// Security parameter estimates.
    Estimate(EstimateArgs),
    /// Time the pipeline over a range of discriminant sizes.
    Bench {
        /// LO:HI in bits.
        #[arg(long)]
        bits_range: String,
        #[arg(long, default_value_t = 4)]
        step: u32,
        /// Real discriminants (regulator) instead of imaginary (class group).
        #[arg(long)]
        real: bool,
    },
    /// Collect relations into the cache, or check the cached ones.
    Relations {
        #[arg(short = 'd', long = "delta", allow_hyphen_values = true)]
        delta: String,
        #[arg(long, default_value_t = 0)]
        count: usize,
        /// Recompose every cached relation.
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Print the full table.
    #[arg(long)]
    table: bool,
    /// Discriminant sizes matching one RSA modulus size.
    #[arg(long)]
    target_rsa: Option<u32>,
    /// Convert the measured times at face value instead of the back-solved anchors.
    #[arg(long, conflicts_with = "paper_calibrated")]
    literal_units: bool,
    #[arg(long)]
    paper_calibrated: bool,
    /// Custom anchor used for both columns; needs all three values.
    #[arg(long, requires_all = ["anchor_seconds", "anchor_mips"])]
    anchor_bits: Option<u32>,
    #[arg(long, requires = "anchor_bits")]
    anchor_seconds: Option<f64>,
    #[arg(long, requires = "anchor_bits")]
    anchor_mips: Option<f64>,
}

/// Run the command line and return the exit code.
pub fn dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As `dispatch`, writing to the given streams.
pub fn dispatch_to<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "qfdlog: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidDiscriminant(_) | Error::InvalidIdeal(_) => EXIT_USAGE,
        Error::Timeout => EXIT_TIMEOUT,
        Error::Unverified(_) | Error::LikelyNonPrincipal => EXIT_UNVERIFIED,
        _ => EXIT_FAILURE,
    }
}

fn parse_delta(s: &str) -> crate::Result<Discriminant> {
    let v = BigInt::from_str(s.trim()).map_err(|e| Error::Parse(format!("discriminant {s:?}: {e}")))?;
    Discriminant::new(v)
}

fn fixed_json(x: &FixedReal) -> Value {
    json!({ "mant": json_int(x.mant()), "err": json_int(&BigInt::from(x.err().clone())), "approx": x.to_f64() })
}

fn emit(out: &mut dyn Write, json_mode: bool, value: &Value, text: &str) -> crate::Result<()> {
    if json_mode {
        writeln!(out, "{}", serde_json::to_string(value).expect("JSON values serialize"))?;
    } else {
        write!(out, "{text}")?;
    }
    Ok(())
}

fn run(cli: &Cli, out: &mut dyn Write) -> crate::Result<i32> {
    let ra = &cli.run;
    let cfg = ra.solver_config();
    let seed = ra.seed;
    match &cli.cmd {
        Command::GenDisc { bits, real, .. } => {
            if *bits < 4 {
                return Err(Error::Parse("--bits must be at least 4".into()));
            }
            let sign = if *real { FieldSign::Real } else { FieldSign::Imaginary };
            let d = gen_prime_discriminant(*bits, sign, seed);
            let v = json!({ "delta": json_int(d.value()), "bits": bits, "seed": seed });
            emit(out, ra.json, &v, &format!("{}\n", d.value()))?;
            Ok(EXIT_OK)
        }
        Command::Classgroup { delta } => {
            let d = parse_delta(delta)?;
            let cg = solver::class_group(&d, &cfg)?;
            let inv: Vec<Value> = cg.invariants.iter().map(json_int).collect();
            let v = json!({
                "delta": json_int(d.value()),
                "h": json_int(&cg.h),
                "invariants": inv,
                "fb_size": cg.stats.fb_size,
                "relations_used": cg.stats.relations_used,
                "certified": cfg.certified,
                "seed": seed,
            });
            let inv_txt: Vec<String> = cg.invariants.iter().map(|x| x.to_string()).collect();
            let text = format!(
                "h = {}\ninvariants = ({})\nfb {} relations {} | {}\n",
                cg.h,
                inv_txt.join(", "),
                cg.stats.fb_size,
                cg.stats.relations_used,
                timing_line(&cg.stats.timings)
            );
            emit(out, ra.json, &v, &text)?;
            Ok(EXIT_OK)
        }
        Command::Regulator { delta } => {
            let d = parse_delta(delta)?;
            let re = solver::regulator(&d, &cfg)?;
            let v = json!({
                "delta": json_int(d.value()),
                "regulator": fixed_json(&re.r),
                "h": json_int(&re.h),
                "certified_window": re.certified_window,
                "fb_size": re.stats.fb_size,
                "relations_used": re.stats.relations_used,
                "seed": seed,
            });
            let text = format!(
                "R = {} (err {:.1e})\nh = {}\nin window: {}\nfb {} relations {} | {}\n",
                re.r,
                re.r.err_f64(),
                re.h,
                re.certified_window,
                re.stats.fb_size,
                re.stats.relations_used,
                timing_line(&re.stats.timings)
            );
            emit(out, ra.json, &v, &text)?;
            Ok(if cfg.certified && !re.certified_window { EXIT_UNVERIFIED } else { EXIT_OK })
        }
        Command::Dlog { delta, g, a } => {
            let d = parse_delta(delta)?;
            let (g, a) = (Ideal::parse(&d, g)?, Ideal::parse(&d, a)?);
            let r = solver::dlp_imaginary(&d, &g, &a, &cfg)?;
            let v = json!({
                "delta": json_int(d.value()),
                "g": g.to_string(),
                "a": a.to_string(),
                "dlog": json_int(&r.x),
                "order": r.order.as_ref().map(json_int),
                "verified": r.verified,
                "relations_used": r.stats.relations_used,
                "seed": seed,
            });
            let order = r.order.as_ref().map_or("?".to_string(), |o| o.to_string());
            let text = format!(
                "dlog = {}\norder = {}\nverified: {}\nrelations {} | {}\n",
                r.x,
                order,
                r.verified,
                r.stats.relations_used,
                timing_line(&r.stats.timings)
            );
            emit(out, ra.json, &v, &text)?;
            Ok(if r.verified { EXIT_OK } else { EXIT_UNVERIFIED })
        }
        Command::InfraDlog { delta, a } => {
            let d = parse_delta(delta)?;
            let a = Ideal::parse(&d, a)?;
            let r = solver::dlp_infrastructure(&d, &a, &cfg)?;
            let v = json!({
                "delta": json_int(d.value()),
                "a": a.to_string(),
                "dlog": fixed_json(&r.t),
                "regulator": fixed_json(&r.regulator),
                "residual": r.residual,
                "verified": r.verified,
                "relations_used": r.stats.relations_used,
                "seed": seed,
            });
            let text = format!(
                "dlog = {} (mod R = {})\nresidual {:.3e}\nverified: {}\nrelations {} | {}\n",
                r.t,
                r.regulator,
                r.residual,
                r.verified,
                r.stats.relations_used,
                timing_line(&r.stats.timings)
            );
            emit(out, ra.json, &v, &text)?;
            Ok(if r.verified { EXIT_OK } else { EXIT_UNVERIFIED })
        }
        Command::Estimate(ea) => estimate(ea, ra.json, out),
        Command::Bench { bits_range, step, real } => {
            let (lo, hi) = bits_range
                .split_once(':')
                .and_then(|(l, h)| Some((l.trim().parse::<u32>().ok()?, h.trim().parse::<u32>().ok()?)))
                .filter(|(l, h)| l <= h && *l >= 8)
                .ok_or_else(|| Error::Parse(format!("--bits-range expects LO:HI with 8 <= LO <= HI, got {bits_range:?}")))?;
            let sign = if *real { FieldSign::Real } else { FieldSign::Imaginary };
            let rows = bench(lo, hi, (*step).max(1), sign, &cfg);
            let v = json!({ "rows": rows, "seed": seed });
            emit(out, ra.json, &v, &bench::render(&rows))?;
            Ok(if rows.iter().any(|r| r.status == "timeout") { EXIT_TIMEOUT } else { EXIT_OK })
        }
        Command::Relations { delta, count, verify } => {
            let d = parse_delta(delta)?;
            let fb = solver::solver_factor_base(&d, &cfg);
            let mut contents = match &cfg.cache {
                Some(p) if p.exists() => read_cache(p, &fb)?,
                _ => CacheContents::default(),
            };
            let before = contents.relations.len();
            if *count > before {
                let sc = StreamConfig { seed, jobs: cfg.jobs, timeout: cfg.timeout, ..StreamConfig::default() };
                let set = relation_stream(&fb, *count - before, &sc)?;
                contents.relations.extend(set.relations);
            }
            let bad = if *verify { contents.relations.iter().filter(|r| !verify_relation(&fb, r)).count() } else { 0 };
            if let Some(p) = &cfg.cache {
                write_cache(p, &fb, &contents)?;
            }
            let v = json!({
                "delta": json_int(d.value()),
                "fb_size": fb.len(),
                "relations": contents.relations.len(),
                "added": contents.relations.len() - before,
                "failed_verification": bad,
                "seed": seed,
            });
            let text = format!(
                "fb {} relations {} (added {}){}\n",
                fb.len(),
                contents.relations.len(),
                contents.relations.len() - before,
                if *verify { format!(", {bad} failed verification") } else { String::new() }
            );
            emit(out, ra.json, &v, &text)?;
            Ok(if bad > 0 { EXIT_UNVERIFIED } else { EXIT_OK })
        }
    }
}

fn timing_line(t: &solver::Timings) -> String {
    format!("sieve {:.2}s elim {:.2}s la {:.2}s total {:.2}s", t.sieving, t.elimination, t.linear_algebra, t.total())
}

fn estimate(ea: &EstimateArgs, json_mode: bool, out: &mut dyn Write) -> crate::Result<i32> {
    let mut cal = if ea.literal_units { Calibration::literal() } else { Calibration::paper() };
    if let (Some(bits), Some(secs), Some(mips)) = (ea.anchor_bits, ea.anchor_seconds, ea.anchor_mips) {
        if secs <= 0.0 || mips <= 0.0 {
            return Err(Error::Parse("anchor seconds and MIPS must be positive".into()));
        }
        let a = Anchor::quadratic(bits, mips_years(secs, mips));
        cal = Calibration { imaginary: a, real: a };
    }
    let mode = if ea.literal_units { "literal-units" } else { "paper-calibrated" };
    let rows: Vec<EstimateRow> = match ea.target_rsa {
        Some(rsa) if !ea.table => {
            let t2 = crate::secest::extrapolate(
                crate::secest::NFS_ANCHOR.time,
                crate::secest::NFS_ANCHOR.bits,
                rsa,
                crate::secest::NFS_ANCHOR.e,
                crate::secest::NFS_ANCHOR.c,
            );
            vec![EstimateRow {
                rsa_bits: rsa,
                t2_mips_years: t2,
                bits_imaginary: crate::secest::min_bits(&cal.imaginary, t2),
                bits_real: crate::secest::min_bits(&cal.real, t2),
            }]
        }
        _ => security_table(&cal),
    };
    let v = json!({ "mode": mode, "calibration": cal, "rows": rows });
    let text = format!(
        "mode: {mode} (imaginary anchor {:.4e} MY at {} bits, real anchor {:.4e} MY at {} bits)\n{}",
        cal.imaginary.time,
        cal.imaginary.bits,
        cal.real.time,
        cal.real.bits,
        crate::secest::render_table(&rows)
    );
    emit(out, json_mode, &v, &text)?;
    Ok(EXIT_OK)
}
