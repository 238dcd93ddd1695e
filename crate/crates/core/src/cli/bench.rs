//! Timing runs over a range of discriminant sizes.

use serde::Serialize;

use crate::error::Error;
use crate::ntkernel::{gen_prime_discriminant, FieldSign};
use crate::solver::{self, RunStats, SolverConfig, Timings};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub bits: u32,
    pub delta: String,
    pub fb_size: usize,
    pub relations: usize,
    pub sieving: f64,
    pub elimination: f64,
    pub linear_algebra: f64,
    pub total: f64,
    /// "ok", "timeout" or the error message.
    pub status: String,
}

/// One class group (imaginary) or regulator (real) computation per size in
/// lo, lo + step, ..., hi, each on a prime discriminant drawn from the seed.
pub fn bench(lo: u32, hi: u32, step: u32, sign: FieldSign, cfg: &SolverConfig) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    let mut bits = lo;
    while bits <= hi {
        let d = gen_prime_discriminant(bits, sign, cfg.seed);
        let res: crate::Result<RunStats> = match sign {
            FieldSign::Imaginary => solver::class_group(&d, cfg).map(|c| c.stats),
            FieldSign::Real => solver::regulator(&d, cfg).map(|r| r.stats),
        };
        let (stats, status) = match res {
            Ok(s) => (s, "ok".to_string()),
            Err(Error::Timeout) => (RunStats::default(), "timeout".to_string()),
            Err(e) => (RunStats::default(), e.to_string()),
        };
        let Timings { sieving, elimination, linear_algebra } = stats.timings.clone();
        rows.push(BenchRow {
            bits,
            delta: d.value().to_string(),
            fb_size: stats.fb_size,
            relations: stats.relations_used,
            sieving,
            elimination,
            linear_algebra,
            total: stats.timings.total(),
            status,
        });
        bits += step;
    }
    rows
}

pub fn render(rows: &[BenchRow]) -> String {
    let mut s = format!(
        "{:>5}  {:>5}  {:>6}  {:>9}  {:>9}  {:>9}  {:>9}  status\n",
        "bits", "fb", "rels", "sieve", "elim", "linalg", "total"
    );
    for r in rows {
        s += &format!(
            "{:>5}  {:>5}  {:>6}  {:>8.3}s  {:>8.3}s  {:>8.3}s  {:>8.3}s  {}\n",
            r.bits, r.fb_size, r.relations, r.sieving, r.elimination, r.linear_algebra, r.total, r.status
        );
    }
    s
}
