//! Smoothness of many values at once with product and remainder trees.
//!
//! cargo run --release --example batch_smoothness

use num_bigint::BigUint;
use qfdlog::ntkernel::primes_up_to;
use qfdlog::relgen::{batch_smooth, batch_smooth_parts};
use rand::{Rng, SeedableRng};

fn main() {
    let primes: Vec<u64> = primes_up_to(1000);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let vals: Vec<BigUint> = (0..100_000).map(|_| BigUint::from(rng.gen::<u64>() >> rng.gen_range(0..40))).collect();
    let t = std::time::Instant::now();
    let smooth = batch_smooth(&vals, &primes);
    let n = smooth.iter().filter(|&&s| s).count();
    println!("{n} of {} values are {}-smooth ({:.2}s)", vals.len(), primes.last().unwrap(), t.elapsed().as_secs_f64());
    let parts = batch_smooth_parts(&vals[..5], &primes);
    for (v, p) in vals.iter().zip(&parts) {
        println!("{v} = {p} (smooth) · {} (cofactor)", v / p);
    }
}
