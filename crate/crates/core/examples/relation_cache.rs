//! Collect relations, store them, and reload them for another run.
//!
//! cargo run --release --example relation_cache -- [path]

use qfdlog::ntkernel::{gen_prime_discriminant, FieldSign};
use qfdlog::relgen::{build_factor_base, read_cache, relation_stream, verify_relation, write_cache, CacheContents, StreamConfig};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("qfdlog-relations.txt").display().to_string());
    let d = gen_prime_discriminant(48, FieldSign::Real, 3);
    let fb = build_factor_base(&d, 80);
    let set = relation_stream(&fb, 100, &StreamConfig { seed: 3, ..StreamConfig::default() }).expect("relations");
    println!("Δ = {}: {} relations from {} seeds ({} merged from partials)", d.value(), set.relations.len(), set.stats.seeds, set.stats.merged);
    let contents = CacheContents { relations: set.relations, partials: Vec::new() };
    write_cache(path.as_ref(), &fb, &contents).expect("write");
    let back = read_cache(path.as_ref(), &fb).expect("read");
    let ok = back.relations.iter().filter(|r| verify_relation(&fb, r)).count();
    println!("{path}: {} relations read back, {ok} verified", back.relations.len());
}
