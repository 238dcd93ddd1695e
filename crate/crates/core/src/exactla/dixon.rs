//! Certified rational solving of x·M = rhs by p-adic lifting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{dense_row, rank_exact, rank_profile_mod_p, word_prime, SparseIntMatrix, SparseRow};
use crate::error::{Error, Result};
use crate::ntkernel::{inv_mod, mul_mod};

fn to_mod(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Inverse of a square matrix mod p, or None if singular.
fn inverse_mod_p(a: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| m[r][c] != 0)?;
        m.swap(c, piv);
        let inv = inv_mod(m[c][c], p)?;
        for x in m[c].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for r in 0..n {
            if r == c || m[r][c] == 0 {
                continue;
            }
            let f = m[r][c];
            for j in 0..2 * n {
                let t = mul_mod(f, m[c][j], p);
                m[r][j] = (m[r][j] + p - t) % p;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// log2 of the Hadamard bound of the columns of `a` with `b` appended.
fn hadamard_bits(a: &[Vec<BigInt>], b: &[BigInt]) -> f64 {
    let n = a.len();
    let norm = |col: &mut dyn Iterator<Item = &BigInt>| -> f64 {
        let s: f64 = col.map(|x| crate::ntkernel::bigint_to_f64(x).powi(2)).sum();
        0.5 * s.max(1.0).log2()
    };
    let mut bits = 0.0;
    for j in 0..n {
        bits += norm(&mut a.iter().map(|r| &r[j]));
    }
    bits + norm(&mut b.iter())
}

/// Reconstruct n/d ≡ v (mod m) with |n|, d ≤ sqrt(m/2).
fn rational_reconstruct(v: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), v.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), &r0 - &q * &r1);
        (t0, t1) = (t1.clone(), &t0 - &q * &t1);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    if !n.gcd(&d).is_one() {
        return None;
    }
    Some((n, d))
}

/// Solve A z = b for square nonsingular A (mod p) by Dixon lifting.
fn dixon_square(a: &[Vec<BigInt>], b: &[BigInt], p: u64) -> Option<Vec<BigRational>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let amod: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| to_mod(x, p)).collect()).collect();
    let c = inverse_mod_p(&amod, p)?;
    let bits = 2.0 * hadamard_bits(a, b) + 4.0;
    let steps = (bits / (p as f64).log2()).ceil() as usize + 1;
    let pb = BigInt::from(p);
    let mut res: Vec<BigInt> = b.to_vec();
    let mut z: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut pk = BigInt::one();
    for _ in 0..steps {
        let rm: Vec<u64> = res.iter().map(|x| to_mod(x, p)).collect();
        let zk: Vec<u64> = c
            .iter()
            .map(|row| row.iter().zip(&rm).fold(0u64, |acc, (x, y)| (acc + mul_mod(*x, *y, p)) % p))
            .collect();
        for i in 0..n {
            z[i] += &pk * zk[i];
        }
        for i in 0..n {
            let mut s = res[i].clone();
            for j in 0..n {
                if zk[j] != 0 && !a[i][j].is_zero() {
                    s -= &a[i][j] * zk[j];
                }
            }
            debug_assert!(s.is_multiple_of(&pb));
            res[i] = s / &pb;
        }
        pk *= &pb;
    }
    // common denominator reconstruction
    let mut den = BigInt::one();
    for zi in &z {
        let v = (zi * &den).mod_floor(&pk);
        let (_, d) = rational_reconstruct(&v, &pk)?;
        den *= d;
    }
    let half = &pk >> 1u32;
    let nums: Vec<BigInt> = z
        .iter()
        .map(|zi| {
            let v = (zi * &den).mod_floor(&pk);
            if v > half {
                v - &pk
            } else {
                v
            }
        })
        .collect();
    // exact check A·nums = den·b
    for i in 0..n {
        let s: BigInt = (0..n).map(|j| &a[i][j] * &nums[j]).sum();
        if s != &den * &b[i] {
            return None;
        }
    }
    Some(nums.into_iter().map(|x| BigRational::new(x, den.clone())).collect())
}

/// x with x·M = rhs exactly, or NoSolution when rank(M) < rank(M; rhs).
pub fn solve_certified(m: &SparseIntMatrix, rhs: &[BigInt]) -> Result<Vec<BigRational>> {
    let n = m.ncols();
    assert_eq!(rhs.len(), n, "rhs length must equal the column count");
    let dense = m.to_dense();
    for k in 0..4 {
        let p = word_prime(k);
        let (r, rows, cols) = rank_profile_mod_p(m, p);
        // A = S^T restricted to the profile, solve A y = rhs[cols]
        let a: Vec<Vec<BigInt>> = cols.iter().map(|&c| rows.iter().map(|&ri| dense[ri][c].clone()).collect()).collect();
        let b: Vec<BigInt> = cols.iter().map(|&c| rhs[c].clone()).collect();
        let Some(y) = dixon_square(&a, &b, p) else { continue };
        let mut x = vec![BigRational::zero(); m.nrows()];
        for (k, &ri) in rows.iter().enumerate() {
            x[ri] = y[k].clone();
        }
        if verify(&dense, &x, rhs) {
            return Ok(x);
        }
        // either inconsistent or the profile missed rank over Q
        let mut ext = m.clone();
        let rrow: SparseRow = rhs.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone())).collect();
        ext.push_row(rrow, m.reals().map(|_| crate::ntkernel::FixedReal::zero()));
        let rm = rank_exact(m);
        if rank_exact(&ext) > rm {
            return Err(Error::NoSolution);
        }
        if r == rm {
            // consistent and profile complete: only an unlucky prime can land here
            continue;
        }
    }
    Err(Error::NoSolution)
}

fn verify(dense: &[Vec<BigInt>], x: &[BigRational], rhs: &[BigInt]) -> bool {
    let n = rhs.len();
    let den = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let xi: Vec<BigInt> = x.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    (0..n).all(|c| {
        let s: BigInt = dense.iter().zip(&xi).filter(|(_, v)| !v.is_zero()).map(|(r, v)| &r[c] * v).sum();
        s == &den * &rhs[c]
    })
}

/// For each extra row r_i, solve X·M = r_i and return X' = (X, 0.., -1, 0..)
/// which lies in the left kernel of M stacked with the extra rows.
pub fn kernel_sample(m: &SparseIntMatrix, extra_rows: &[SparseRow]) -> Result<Vec<Vec<BigRational>>> {
    let n = m.ncols();
    let k = extra_rows.len();
    let mut out = Vec::with_capacity(k);
    for (i, r) in extra_rows.iter().enumerate() {
        let rhs = dense_row(r, n);
        let mut x = solve_certified(m, &rhs)?;
        x.extend((0..k).map(|j| if j == i { -BigRational::one() } else { BigRational::zero() }));
        // X'·(M; extras) = X·M - r_i = 0
        let mut stacked = m.to_dense();
        stacked.extend(extra_rows.iter().map(|e| dense_row(e, n)));
        assert!(verify(&stacked, &x, &vec![BigInt::zero(); n]), "kernel vector failed exact check");
        out.push(x);
    }
    Ok(out)
}
