//! GCD of approximate integer multiples of an unknown real.
//!
//! For two multiples a = m_a·R and b = m_b·R the ratio a/b = m_a/m_b is a
//! rational number. It is recovered as the first continued-fraction
//! convergent inside the interval allowed by the error bounds, and then
//! b / q = gcd(m_a, m_b)·R where q is the convergent's denominator. Dividing
//! keeps the error small even when the multiples are large, which a plain
//! subtractive Euclid would not.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ntkernel::FixedReal;

/// Values below this are treated as zero multiples. Every regulator exceeds
/// ln((1 + √5)/2) ≈ 0.4812, so half of that separates 0 from any nonzero multiple.
pub const ZERO_THRESHOLD: f64 = 0.24;

/// Give up once the tracked error of the running gcd grows past this.
pub const MAX_ERR: f64 = 0.1;

/// gcd(m_1, m_2, ...)·R from approximations of m_i·R.
pub fn real_gcd(multiples: &[FixedReal]) -> Result<FixedReal> {
    let mut vals: Vec<FixedReal> = multiples.iter().map(|m| m.abs()).filter(|m| m.to_f64() >= ZERO_THRESHOLD).collect();
    if vals.is_empty() {
        return Err(Error::PrecisionLoss("no nonzero multiple".into()));
    }
    vals.sort_by(|a, b| a.mid_cmp(b));
    let mut cur = vals[0].clone();
    for a in &vals[1..] {
        let q = ratio_denominator(a, &cur)?;
        if !q.is_one() {
            cur = cur.div_int(&q);
        }
        if cur.err_f64() > MAX_ERR {
            return Err(Error::PrecisionLoss(format!("error bound {} exceeds {}", cur.err_f64(), MAX_ERR)));
        }
        if cur.to_f64() < 2.0 * ZERO_THRESHOLD {
            return Err(Error::PrecisionLoss(format!("gcd {} fell below the smallest regulator", cur.to_f64())));
        }
    }
    Ok(cur)
}

/// Denominator q of the reduced fraction p/q = a/b, taken as the first
/// convergent of the midpoint ratio that lies in the error interval.
fn ratio_denominator(a: &FixedReal, b: &FixedReal) -> Result<BigInt> {
    let (am, ae) = (a.mant(), BigInt::from(a.err().clone()));
    let (bm, be) = (b.mant(), BigInt::from(b.err().clone()));
    if &be >= bm {
        return Err(Error::PrecisionLoss("divisor indistinguishable from zero".into()));
    }
    let lo = BigRational::new(am - &ae, bm + &be);
    let hi = BigRational::new(am + &ae, bm - &be);
    let width = &hi - &lo;
    // continued fraction of am/bm
    let (mut x, mut y) = (am.clone(), bm.clone());
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    while !y.is_zero() {
        let (k, r) = x.div_mod_floor(&y);
        let p2 = &k * &p1 + &p0;
        let q2 = &k * &q1 + &q0;
        let c = BigRational::new(p2.clone(), q2.clone());
        if c >= lo && c <= hi {
            // no other fraction with denominator <= q fits in the interval
            if &width * BigRational::from_integer(&q2 * &q2 * 2) >= BigRational::one() {
                return Err(Error::PrecisionLoss(format!("ratio not determined (denominator {q2})")));
            }
            return Ok(q2.abs());
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        (x, y) = (y, r);
    }
    unreachable!("the last convergent equals the midpoint ratio")
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: f64 = 1.8184464592320668;

    fn m(k: f64) -> FixedReal {
        FixedReal::from_f64(R).mul_i64(k as i64)
    }

    #[test]
    fn examples() {
        assert!((real_gcd(&[m(1.0), m(2.0)]).unwrap().to_f64() - R).abs() < 1e-12);
        assert!((real_gcd(&[m(2.0), m(3.0)]).unwrap().to_f64() - R).abs() < 1e-12);
        assert!((real_gcd(&[m(7.0)]).unwrap().to_f64() - 7.0 * R).abs() < 1e-12);
        assert!((real_gcd(&[m(6.0), m(10.0), m(0.0)]).unwrap().to_f64() - 2.0 * R).abs() < 1e-12);
    }

    #[test]
    fn large_coprime_multiples() {
        let r = FixedReal::from_f64(123_456.789_012_345);
        let a = r.mul_i64(9_999_991);
        let b = r.mul_i64(-7_654_321);
        let g = real_gcd(&[a, b]).unwrap();
        assert!((g.to_f64() - r.to_f64()).abs() < 1e-6, "{g:?}");
    }

    #[test]
    fn all_zero_is_an_error() {
        assert!(real_gcd(&[m(0.0)]).is_err());
    }

    #[test]
    fn noisy_inputs_are_rejected() {
        let a = FixedReal::from_parts(m(1_000_003.0).mant().clone(), num_bigint::BigUint::one() << 60u32);
        let b = FixedReal::from_parts(m(999_983.0).mant().clone(), num_bigint::BigUint::one() << 60u32);
        assert!(matches!(real_gcd(&[a, b]), Err(Error::PrecisionLoss(_))));
    }
}
