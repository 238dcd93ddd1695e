//! Exact integer linear algebra on relation matrices.

mod dixon;
mod elim;
mod hnf;
mod lll;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::ntkernel::{inv_mod, is_prime_u64, mul_mod, FixedReal};

pub use dixon::{kernel_sample, solve_certified};
pub use elim::{graph_eliminate, graph_eliminate_capped, graph_eliminate_with, Elimination, GrowthCap};
pub use lll::{lll_reduce, short_kernel};
pub use hnf::{hnf_mod_d, hnf_with_det, snf};

/// Sparse integer row.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Integer matrix stored by rows, optionally paired with one real per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: Vec<SparseRow>,
    ncols: usize,
    reals: Option<Vec<FixedReal>>,
}

impl SparseIntMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseIntMatrix { rows: Vec::new(), ncols, reals: None }
    }

    pub fn with_reals(ncols: usize) -> Self {
        SparseIntMatrix { rows: Vec::new(), ncols, reals: Some(Vec::new()) }
    }

    /// Build from rows of (column, value) pairs in any order; zeros dropped.
    pub fn from_rows(ncols: usize, rows: Vec<SparseRow>, reals: Option<Vec<FixedReal>>) -> Self {
        if let Some(r) = &reals {
            assert_eq!(r.len(), rows.len(), "one real per row");
        }
        let rows = rows.into_iter().map(normalize_row).collect();
        let m = SparseIntMatrix { rows, ncols, reals };
        debug_assert!(m.rows.iter().flatten().all(|(c, _)| *c < ncols));
        m
    }

    pub fn from_i64_rows(ncols: usize, rows: &[Vec<(usize, i64)>], reals: Option<Vec<FixedReal>>) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&(c, v)| (c, BigInt::from(v))).collect()).collect();
        Self::from_rows(ncols, rows, reals)
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, &v)| (c, BigInt::from(v))).collect())
            .collect();
        SparseIntMatrix { rows, ncols, reals: None }
    }

    pub fn push_row(&mut self, row: SparseRow, real: Option<FixedReal>) {
        match (&mut self.reals, real) {
            (Some(rs), Some(r)) => rs.push(r),
            (None, None) => {}
            _ => panic!("row real does not match the matrix"),
        }
        self.rows.push(normalize_row(row));
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.rows[i]
    }

    pub fn reals(&self) -> Option<&[FixedReal]> {
        self.reals.as_deref()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        self.rows.iter().map(|r| dense_row(r, self.ncols)).collect()
    }

    /// Text dump: `nrows ncols` header followed by `r c val` triples.
    pub fn dump_sms(&self) -> String {
        let mut s = format!("{} {}\n", self.nrows(), self.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in r {
                s.push_str(&format!("{i} {c} {v}\n"));
            }
        }
        s
    }
}

pub(crate) fn normalize_row(mut row: SparseRow) -> SparseRow {
    row.sort_by_key(|e| e.0);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

pub(crate) fn dense_row(r: &SparseRow, n: usize) -> Vec<BigInt> {
    let mut d = vec![BigInt::zero(); n];
    for (c, v) in r {
        d[*c] = v.clone();
    }
    d
}

/// Largest prime below 2^62.
pub const WORD_PRIME: u64 = (1u64 << 62) - 57;

/// The k-th prime below 2^62, counting down from WORD_PRIME.
pub(crate) fn word_prime(k: usize) -> u64 {
    let mut p = WORD_PRIME;
    let mut found = 0;
    while found < k {
        p -= 2;
        if is_prime_u64(p) {
            found += 1;
        }
    }
    p
}

fn to_mod(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Rank profile mod p: (rank, pivot rows, pivot columns), pivots chosen greedily
/// in row order.
pub fn rank_profile_mod_p(m: &SparseIntMatrix, p: u64) -> (usize, Vec<usize>, Vec<usize>) {
    let n = m.ncols;
    // basis rows in echelon form keyed by pivot column, each normalized to lead 1
    let mut basis: Vec<Option<Vec<u64>>> = vec![None; n];
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    for (ri, r) in m.rows.iter().enumerate() {
        let mut v = vec![0u64; n];
        for (c, x) in r {
            v[*c] = to_mod(x, p);
        }
        let mut lead = None;
        for c in 0..n {
            if v[c] == 0 {
                continue;
            }
            match &basis[c] {
                Some(b) => {
                    let f = v[c];
                    for j in c..n {
                        if b[j] != 0 {
                            v[j] = (v[j] + p - mul_mod(f, b[j], p)) % p;
                        }
                    }
                }
                None => {
                    lead = Some(c);
                    break;
                }
            }
        }
        if let Some(c) = lead {
            let inv = inv_mod(v[c], p).unwrap();
            for x in v.iter_mut().skip(c) {
                *x = mul_mod(*x, inv, p);
            }
            basis[c] = Some(v);
            rows.push(ri);
            cols.push(c);
            if rows.len() == n {
                break;
            }
        }
    }
    (rows.len(), rows, cols)
}

/// Rank over GF(p) for the fixed 62-bit prime; a lower bound on the rank over Q.
pub fn rank_mod_p(m: &SparseIntMatrix) -> usize {
    rank_profile_mod_p(m, WORD_PRIME).0
}

/// Fraction-free Gaussian elimination; returns (rank, |det|) where det is the
/// determinant for square full-rank input and zero otherwise.
pub fn bareiss(dense: &[Vec<BigInt>]) -> (usize, BigInt) {
    let mut a: Vec<Vec<BigInt>> = dense.to_vec();
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for c in 0..n {
        if rank == m {
            break;
        }
        let Some(piv) = (rank..m).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(piv, rank);
        for r in rank + 1..m {
            for j in c + 1..n {
                let t = &a[rank][c] * &a[r][j] - &a[r][c] * &a[rank][j];
                a[r][j] = t / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    let det = if m == n && rank == n { prev.abs() } else { BigInt::zero() };
    (rank, det)
}

/// Exact rank over Q.
pub fn rank_exact(m: &SparseIntMatrix) -> usize {
    bareiss(&m.to_dense()).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_prime_is_prime() {
        assert!(is_prime_u64(WORD_PRIME));
        assert!(!(WORD_PRIME + 2..1u64 << 62).step_by(2).any(is_prime_u64));
        let q = word_prime(1);
        assert!(q < WORD_PRIME && is_prime_u64(q));
    }

    #[test]
    fn rank_examples() {
        let id: Vec<Vec<i64>> = (0..5).map(|i| (0..5).map(|j| i64::from(i == j)).collect()).collect();
        assert_eq!(rank_mod_p(&SparseIntMatrix::from_dense(&id)), 5);
        assert_eq!(rank_mod_p(&SparseIntMatrix::from_dense(&[vec![0, 0], vec![0, 0]])), 0);
        let m = vec![
            vec![1, 2, 3, 4, 5, 6],
            vec![0, 1, -1, 2, 0, 3],
            vec![1, 3, 2, 6, 5, 9],
            vec![2, 0, 1, 1, 1, 1],
            vec![0, 0, 3, 1, -4, 2],
            vec![5, 1, 0, 0, 2, 7],
        ];
        assert!(rank_mod_p(&SparseIntMatrix::from_dense(&m)) <= 5);
        assert_eq!(rank_exact(&SparseIntMatrix::from_dense(&m)), 5);
    }

    #[test]
    fn bareiss_det() {
        let m: Vec<Vec<BigInt>> = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        // 2(12-1) - 1(4-0) = 18
        assert_eq!(bareiss(&m), (3, BigInt::from(18)));
    }
}
