//! Regulator of a real quadratic field, compared with the full cycle walk
//! when Δ is small enough for it.
//!
//! cargo run --release --example regulator -- [Δ]

use qfdlog::ideals::cycle_regulator;
use qfdlog::ntkernel::Discriminant;
use qfdlog::solver::{regulator, SolverConfig};

fn main() {
    let delta: i64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1_000_033);
    let d = Discriminant::from_i64(delta).expect("a valid discriminant");
    let est = regulator(&d, &SolverConfig::default()).expect("regulator");
    println!("Δ = {delta}\nR = {} (± {:.1e})\nh = {}\nhR in Euler window: {}", est.r, est.r.err_f64(), est.h, est.certified_window);
    if delta < 10_000_000 {
        println!("cycle walk: {}", cycle_regulator(&d));
    }
}
