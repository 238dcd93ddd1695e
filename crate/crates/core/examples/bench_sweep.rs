//! Timing split of the class group pipeline over a few sizes.
//!
//! cargo run --release --example bench_sweep -- [lo] [hi]

use qfdlog::cli::{bench, BenchRow};
use qfdlog::ntkernel::FieldSign;
use qfdlog::solver::SolverConfig;

fn main() {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (lo, hi) = (args.first().copied().unwrap_or(32), args.get(1).copied().unwrap_or(48));
    let rows: Vec<BenchRow> = bench(lo, hi, 8, FieldSign::Imaginary, &SolverConfig::default());
    for r in rows {
        println!(
            "{:>3} bits  fb {:>4}  rels {:>5}  sieve {:.2}s  elim {:.2}s  la {:.2}s  {}",
            r.bits, r.fb_size, r.relations, r.sieving, r.elimination, r.linear_algebra, r.status
        );
    }
}
