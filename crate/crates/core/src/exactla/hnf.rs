//! Hermite normal form modulo a determinant multiple, and Smith invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{bareiss, rank_exact, rank_profile_mod_p, word_prime, SparseIntMatrix};
use crate::error::{Error, Result};

fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Upper-triangular row HNF of the lattice spanned by `rows`, given a positive
/// multiple `d` of its determinant. The lattice must have full rank n.
///
/// Row version of the modular algorithm: working rows are kept reduced modulo
/// the running modulus R, which is divided by each diagonal entry found.
pub fn hnf_mod_d(rows: &[Vec<BigInt>], n: usize, d: &BigInt) -> Vec<Vec<BigInt>> {
    let mut work: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|x| x.mod_floor(d)).collect()).collect();
    let mut r = d.clone();
    let mut h: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut piv = work.pop().unwrap_or_else(|| vec![BigInt::zero(); n]);
        for row in work.iter_mut() {
            if row[i].is_zero() {
                continue;
            }
            let (g, u, v) = xgcd(&piv[i], &row[i]);
            let (pa, ra) = (&piv[i] / &g, &row[i] / &g);
            for j in i..n {
                let np = (&u * &piv[j] + &v * &row[j]).mod_floor(&r);
                let nr = (&pa * &row[j] - &ra * &piv[j]).mod_floor(&r);
                piv[j] = np;
                row[j] = nr;
            }
        }
        let (g, u, _) = xgcd(&piv[i], &r);
        let mut w: Vec<BigInt> = piv.iter().map(|x| (&u * x).mod_floor(&r)).collect();
        for x in w.iter_mut().take(i) {
            *x = BigInt::zero();
        }
        w[i] = if g == r { r.clone() } else { g.clone() };
        // reduce the column above the new pivot
        for prev in h.iter_mut() {
            let q = prev[i].div_floor(&w[i]);
            if !q.is_zero() {
                for j in i..n {
                    let t = &q * &w[j];
                    prev[j] -= t;
                }
            }
        }
        r = &r / &g;
        h.push(w);
        if r.is_zero() {
            r = BigInt::one();
        }
    }
    h
}

/// HNF of the row lattice and its determinant. Errors if the matrix does not
/// have full column rank.
pub fn hnf_with_det(m: &SparseIntMatrix) -> Result<(Vec<Vec<BigInt>>, BigInt)> {
    let n = m.ncols();
    if n == 0 {
        return Ok((Vec::new(), BigInt::one()));
    }
    let mut profile = None;
    for k in 0..3 {
        let (rank, rows, _) = rank_profile_mod_p(m, word_prime(k));
        if rank == n {
            profile = Some(rows);
            break;
        }
    }
    let Some(sel) = profile else {
        let rank = rank_exact(m);
        if rank < n {
            return Err(Error::RankDeficient { rank, cols: n });
        }
        unreachable!("three word primes all divide a nonzero minor");
    };
    let dense = m.to_dense();
    let sub: Vec<Vec<BigInt>> = sel.iter().map(|&i| dense[i].clone()).collect();
    let (_, d) = bareiss(&sub);
    debug_assert!(!d.is_zero());
    let h = hnf_mod_d(&dense, n, &d);
    let det = h.iter().enumerate().fold(BigInt::one(), |acc, (i, r)| acc * &r[i]);
    Ok((h, det))
}

/// Nontrivial invariant factors of Z^n / (row lattice of h), largest first,
/// so that m_{i+1} | m_i. Standard Smith form lists them in increasing order.
pub fn snf(h: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = h.len();
    let mut a: Vec<Vec<BigInt>> = h.to_vec();
    // Split off coordinates with unit diagonal when the input is triangular.
    let triangular = (0..n).all(|i| (0..i).all(|j| a[i][j].is_zero()));
    let keep: Vec<usize> = if triangular {
        for i in (0..n).rev() {
            if !a[i][i].abs().is_one() {
                continue;
            }
            let unit = a[i][i].clone();
            for j in i + 1..n {
                if a[i][j].is_zero() {
                    continue;
                }
                let f = &a[i][j] * &unit;
                for k in 0..=i {
                    let t = &f * &a[k][i];
                    a[k][j] -= t;
                }
            }
        }
        (0..n).filter(|&i| !a[i][i].abs().is_one()).collect()
    } else {
        (0..n).collect()
    };
    let mut b: Vec<Vec<BigInt>> = keep.iter().map(|&i| keep.iter().map(|&j| a[i][j].clone()).collect()).collect();
    let mut diag = smith_diagonal(&mut b);
    diag.retain(|x| !x.is_one());
    diag.sort_by(|x, y| y.cmp(x));
    diag
}

fn smith_diagonal(a: &mut [Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                out.push(BigInt::zero());
                break;
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in t..n {
                        let x = &q * &a[t][j];
                        a[i][j] -= x;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = a[t][j].div_floor(&p);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let x = &q * &row[t];
                        row[j] -= x;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the rest by the pivot
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let x = a[i][j].clone();
                        a[t][j] += x;
                    }
                }
                None => {
                    out.push(p.abs());
                    break;
                }
            }
        }
    }
    out
}
