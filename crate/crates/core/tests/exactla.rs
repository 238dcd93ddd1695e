//! Exact linear algebra against fraction-free oracles.

mod common;

use common::{cramer, det, minor_gcd, rank, snf_oracle};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qfdlog::exactla::{graph_eliminate, hnf_with_det, rank_mod_p, snf, solve_certified, SparseIntMatrix};
use qfdlog::Error;

fn to_i64(m: &[Vec<i128>]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
}

fn matrix(rows: std::ops::RangeInclusive<usize>, cols: usize, lim: i128) -> impl Strategy<Value = Vec<Vec<i128>>> {
    rows.prop_flat_map(move |m| prop::collection::vec(prop::collection::vec(-lim..=lim, cols), m))
}

/// m×n with m ≥ n, both at most 8.
fn tall() -> impl Strategy<Value = Vec<Vec<i128>>> {
    (1usize..=8).prop_flat_map(|n| matrix(n..=8, n, 10))
}

fn sparse_row(v: &[i128]) -> Vec<(usize, BigInt)> {
    v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(c, &x)| (c, BigInt::from(x))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hnf_det_and_snf_match_minors(a in tall()) {
        let n = a[0].len();
        let m = SparseIntMatrix::from_dense(&to_i64(&a));
        let g = minor_gcd(&a, n);
        match hnf_with_det(&m) {
            Ok((h, d)) => {
                prop_assert_eq!(d, BigInt::from(g.abs()));
                let want: Vec<BigInt> = snf_oracle(&a).into_iter().map(|x| BigInt::from(x.abs())).collect();
                prop_assert_eq!(snf(&h), want);
            }
            Err(Error::RankDeficient { rank: r, cols }) => {
                prop_assert_eq!(g, 0);
                prop_assert_eq!(r, rank(&a));
                prop_assert_eq!(cols, n);
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn full_rank_mod_p_means_hnf_exists(a in tall()) {
        let m = SparseIntMatrix::from_dense(&to_i64(&a));
        if rank_mod_p(&m) == m.ncols() {
            prop_assert!(hnf_with_det(&m).is_ok());
        }
    }

    #[test]
    fn square_solve_is_cramer(a in (1usize..=8).prop_flat_map(|n| matrix(n..=n, n, 10)), seed in any::<u64>()) {
        prop_assume!(det(&a) != 0);
        let n = a.len();
        let rhs: Vec<i128> = (0..n).map(|i| ((seed >> (i * 4)) & 15) as i128 - 7).collect();
        let m = SparseIntMatrix::from_dense(&to_i64(&a));
        let x = solve_certified(&m, &rhs.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(x, cramer(&a, &rhs));
    }

    #[test]
    fn solvable_iff_rank_unchanged(a in (1usize..=6).prop_flat_map(|n| matrix(1..=8, n, 10)), r in prop::collection::vec(-10i128..=10, 6)) {
        let n = a[0].len();
        let rhs = r[..n].to_vec();
        let mut ext = a.clone();
        ext.push(rhs.clone());
        let consistent = rank(&ext) == rank(&a);
        let m = SparseIntMatrix::from_dense(&to_i64(&a));
        match solve_certified(&m, &rhs.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>()) {
            Ok(x) => {
                prop_assert!(consistent);
                prop_assert!(common::check_left_solution(&a, &x, &rhs));
            }
            Err(Error::NoSolution) => prop_assert!(!consistent),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn constructed_systems_are_solved(a in matrix(1..=8, 6, 10), x0 in prop::collection::vec(-5i128..=5, 8)) {
        let rhs: Vec<i128> = (0..6).map(|c| a.iter().zip(&x0).map(|(row, x)| row[c] * x).sum()).collect();
        let m = SparseIntMatrix::from_dense(&to_i64(&a));
        let x = solve_certified(&m, &rhs.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>()).unwrap();
        prop_assert!(common::check_left_solution(&a, &x, &rhs));
    }

    #[test]
    fn elimination_keeps_lattice(a in matrix(8..=12, 6, 1), bump in prop::collection::vec(0usize..72, 0..6), x0 in prop::collection::vec(-3i128..=3, 12)) {
        let mut a = a;
        for k in bump {
            let (i, j) = (k / 6 % a.len(), k % 6);
            a[i][j] *= 3;
        }
        prop_assume!(minor_gcd(&a, 6) != 0);
        let m = SparseIntMatrix::from_dense(&to_i64(&a));
        let e = graph_eliminate(&m);
        prop_assume!(e.zero_cols.is_empty());
        let (_, d0) = hnf_with_det(&m).unwrap();
        let (_, d1) = hnf_with_det(&e.reduced).unwrap();
        prop_assert_eq!(&d0, &d1);
        // a lattice vector stays in the reduced lattice after transport
        let v: Vec<i128> = (0..6).map(|c| a.iter().zip(&x0).map(|(row, x)| row[c] * x).sum()).collect();
        let (t, _) = e.transport(&sparse_row(&v), None).unwrap();
        let mut rows = e.reduced.rows().to_vec();
        rows.push(t);
        let ext = SparseIntMatrix::from_rows(e.reduced.ncols(), rows, None);
        prop_assert_eq!(hnf_with_det(&ext).unwrap().1, d1);
    }
}

#[test]
fn solutions_are_exact_rationals() {
    let a = vec![vec![2i128, 1], vec![1, 3]];
    let m = SparseIntMatrix::from_dense(&to_i64(&a));
    let x = solve_certified(&m, &[BigInt::from(1), BigInt::from(0)]).unwrap();
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    assert_eq!(x, vec![q(3, 5), q(-1, 5)]);
}
