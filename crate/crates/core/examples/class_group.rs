//! Class number and group structure of an imaginary quadratic field.
//!
//! cargo run --release --example class_group -- [Δ]

use qfdlog::ntkernel::{gen_prime_discriminant, Discriminant, FieldSign};
use qfdlog::solver::{class_group, SolverConfig};

fn main() {
    let d = match std::env::args().nth(1) {
        Some(a) => Discriminant::new(a.parse().expect("an integer")).expect("a valid discriminant"),
        None => gen_prime_discriminant(48, FieldSign::Imaginary, 1),
    };
    let delta = d.value();
    let cg = class_group(&d, &SolverConfig::default()).expect("class group");
    let inv: Vec<String> = cg.invariants.iter().map(|x| x.to_string()).collect();
    let shape = if inv.is_empty() { "1".to_string() } else { inv.iter().map(|m| format!("Z/{m}")).collect::<Vec<_>>().join(" × ") };
    println!("Δ = {delta}\nh = {}\nCl ≅ {shape}", cg.h);
    println!("fb {} relations {} rounds {}", cg.stats.fb_size, cg.stats.relations_used, cg.stats.rounds);
}
