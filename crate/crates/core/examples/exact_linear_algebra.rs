//! Hermite and Smith forms, certified solving, and the effect of
//! structured elimination on a relation matrix.
//!
//! cargo run --release --example exact_linear_algebra

use num_bigint::BigInt;
use qfdlog::exactla::{graph_eliminate, hnf_with_det, snf, solve_certified, SparseIntMatrix};
use qfdlog::ntkernel::{gen_prime_discriminant, FieldSign};
use qfdlog::relgen::{build_factor_base, relation_stream, StreamConfig};

fn main() {
    let m = SparseIntMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16], vec![1, 0, 3]]);
    let (h, det) = hnf_with_det(&m).unwrap();
    println!("HNF {h:?}, det {det}, invariants {:?}", snf(&h));
    let rhs: Vec<BigInt> = [3, 2, 1].map(BigInt::from).to_vec();
    let x = solve_certified(&m, &rhs).unwrap();
    println!("x·M = (3, 2, 1) with x = {:?}", x.iter().map(|q| q.to_string()).collect::<Vec<_>>());

    let d = gen_prime_discriminant(42, FieldSign::Imaginary, 2);
    let fb = build_factor_base(&d, 150);
    let set = relation_stream(&fb, 200, &StreamConfig::default()).unwrap();
    let rel = SparseIntMatrix::from_i64_rows(fb.len(), &set.relations.iter().map(|r| r.exps.clone()).collect::<Vec<_>>(), None);
    let e = graph_eliminate(&rel);
    println!(
        "relations {}x{} -> {}x{} after {} pivots",
        rel.nrows(),
        rel.ncols(),
        e.reduced.nrows(),
        e.reduced.ncols(),
        e.pivots()
    );
    let (_, h) = hnf_with_det(&e.reduced).unwrap();
    println!("lattice determinant (class number) {h}");
}
