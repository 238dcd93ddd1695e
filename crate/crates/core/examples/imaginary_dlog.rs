//! Discrete logarithm in the class group of an imaginary quadratic field.
//!
//! cargo run --release --example imaginary_dlog -- [bits] [seed]

use num_bigint::BigUint;
use qfdlog::ideals::ideal_pow;
use qfdlog::ntkernel::{gen_prime_discriminant, FieldSign};
use qfdlog::solver::{dlp_imaginary, random_nonprincipal_prime, verify_dlp, SolverConfig};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let bits = args.first().copied().unwrap_or(50) as u32;
    let seed = args.get(1).copied().unwrap_or(1);
    let d = gen_prime_discriminant(bits, FieldSign::Imaginary, seed);
    let g = random_nonprincipal_prime(&d, 1000, seed).expect("a non-principal prime ideal");
    let k = BigUint::from(seed * 1_000_003 + 17);
    let (a, _) = ideal_pow(&d, &g, &k);
    println!("Δ = {}\ng = {}\na = g^{} = {}", d.value(), g, k, a);
    let start = std::time::Instant::now();
    let cfg = SolverConfig { seed, ..SolverConfig::default() }.uncertified();
    let res = dlp_imaginary(&d, &g, &a, &cfg).expect("dlog");
    println!("x = {} (order of [g] = {:?})", res.x, res.order.as_ref().map(|o| o.to_string()));
    println!("verified: {}", verify_dlp(&d, &g, &a, &res.x));
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
