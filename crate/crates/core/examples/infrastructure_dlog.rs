//! Distance of a reduced principal ideal in a real quadratic field.
//!
//! cargo run --release --example infrastructure_dlog -- [bits] [seed]

use num_bigint::BigInt;
use qfdlog::ideals::principal_near;
use qfdlog::ntkernel::{gen_prime_discriminant, FieldSign, FixedReal};
use qfdlog::solver::{dlp_infrastructure, verify_infra, SolverConfig};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let bits = args.first().copied().unwrap_or(50) as u32;
    let seed = args.get(1).copied().unwrap_or(1);
    let d = gen_prime_discriminant(bits, FieldSign::Real, seed);
    let t0 = FixedReal::from_integer(BigInt::from(seed * 7919 + 12_345));
    let a = principal_near(&d, &t0);
    println!("Δ = {}\na = {} at distance {}", d.value(), a.ideal, a.dist);
    let start = std::time::Instant::now();
    let cfg = SolverConfig { seed, ..SolverConfig::default() }.uncertified();
    let res = dlp_infrastructure(&d, &a.ideal, &cfg).expect("infrastructure dlog");
    println!("R = {}\nt = {} (residual {:.3e}, deviation {:.3e})", res.regulator, res.t, res.residual, res.deviation);
    println!("verified: {}", verify_infra(&d, &a.ideal, &res.t));
    println!(
        "fb {} relations {} rounds {} | sieve {:.2}s elim {:.2}s la {:.2}s | total {:.2}s",
        res.stats.fb_size,
        res.stats.relations_used,
        res.stats.rounds,
        res.stats.timings.sieving,
        res.stats.timings.elimination,
        res.stats.timings.linear_algebra,
        start.elapsed().as_secs_f64()
    );
}
