//! Integer and numeric kernel: symbols, modular roots, primality, prime
//! discriminants and interval fixed-point logarithms.

mod fixed;
mod modarith;
mod primes;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub use fixed::{fr_ln_abs, fr_ln_int, fr_ln_rational, fr_ln_u64, sqrt_fixed, FixedReal, FRAC_BITS};
pub(crate) use fixed::bigint_to_f64;
pub use modarith::{big_mod_u64, gcd_u64, inv_mod, jacobi, kronecker, mul_mod, pow_mod, sqrt_mod};
pub use primes::{
    gen_prime_discriminant, is_prime_u64, is_probable_prime, next_probable_prime, primes_up_to, FieldSign,
    PrimeIter,
};

use crate::error::{Error, Result};

/// Discriminant of a quadratic order, with cached square roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discriminant {
    value: BigInt,
    fundamental: bool,
    /// floor(sqrt(|Δ|))
    isqrt: BigInt,
    /// floor(sqrt(|Δ|) * 2^64)
    sqrt_fx: BigInt,
}

impl Discriminant {
    /// Validates Δ ≡ 0, 1 (mod 4), Δ ≠ 0, and Δ not a square.
    pub fn new(value: BigInt) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::InvalidDiscriminant("zero".into()));
        }
        let r = big_mod_u64(&value, 4);
        if r != 0 && r != 1 {
            return Err(Error::InvalidDiscriminant(format!("{value} is {r} mod 4")));
        }
        let mag = value.magnitude().clone();
        let isq = mag.sqrt();
        if value.is_positive() && &isq * &isq == mag {
            return Err(Error::InvalidDiscriminant(format!("{value} is a square")));
        }
        let fundamental = is_fundamental(&value);
        Ok(Self::build(value, fundamental))
    }

    /// Δ = ±p for a prime p; skips the squarefree scan.
    pub(crate) fn new_prime(value: BigInt) -> Self {
        Self::build(value, true)
    }

    fn build(value: BigInt, fundamental: bool) -> Self {
        let mag = value.magnitude().clone();
        let isqrt = BigInt::from(mag.sqrt());
        let sqrt_fx = sqrt_fixed(&mag);
        Discriminant { value, fundamental, isqrt, sqrt_fx }
    }

    pub fn from_i64(v: i64) -> Result<Self> {
        Self::new(BigInt::from(v))
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn sign(&self) -> FieldSign {
        if self.value.is_negative() {
            FieldSign::Imaginary
        } else {
            FieldSign::Real
        }
    }

    pub fn is_real(&self) -> bool {
        self.value.is_positive()
    }

    pub fn is_imaginary(&self) -> bool {
        self.value.is_negative()
    }

    pub fn is_fundamental(&self) -> bool {
        self.fundamental
    }

    pub fn isqrt(&self) -> &BigInt {
        &self.isqrt
    }

    pub fn sqrt_fixed(&self) -> &BigInt {
        &self.sqrt_fx
    }

    pub fn bits(&self) -> u64 {
        self.value.bits()
    }

    /// Δ mod 2 as 0 or 1.
    pub fn parity(&self) -> u32 {
        if self.value.is_odd() {
            1
        } else {
            0
        }
    }
}

impl std::fmt::Display for Discriminant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Squarefree test used for fundamentality. Exact below 2^63 (trial division to
/// the cube root, then a perfect-square test on the cofactor); above that the
/// scan stops at 2^21 and a non-square cofactor is assumed squarefree.
fn is_squarefree(n: &BigUint) -> bool {
    let cube = n.cbrt().to_u64().unwrap_or(u64::MAX).min(1 << 21) + 1;
    let mut m = n.clone();
    let mut p = 2u64;
    while p <= cube {
        if (&m % p).is_zero() {
            m /= p;
            if (&m % p).is_zero() {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let s = m.sqrt();
    !(m > BigUint::from(1u32) && &s * &s == m)
}

fn is_fundamental(d: &BigInt) -> bool {
    let mag = d.magnitude();
    match big_mod_u64(d, 4) {
        1 => is_squarefree(mag),
        0 => {
            let m = d / 4;
            let r = big_mod_u64(&m, 4);
            (r == 2 || r == 3) && is_squarefree(m.magnitude())
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_values() {
        assert!(Discriminant::from_i64(0).is_err());
        assert!(Discriminant::from_i64(-5).is_err());
        assert!(Discriminant::from_i64(6).is_err());
        assert!(Discriminant::from_i64(9).is_err());
    }

    #[test]
    fn fundamental_flags() {
        for (d, f) in [(-23, true), (-84, true), (-4, true), (-3, true), (5, true), (40, true), (13, true)] {
            assert_eq!(Discriminant::from_i64(d).unwrap().is_fundamental(), f, "{d}");
        }
        for d in [-12i64, -27, 20, 45, -16, 8 * 4] {
            assert!(!Discriminant::from_i64(d).unwrap().is_fundamental(), "{d}");
        }
    }

    #[test]
    fn sign_and_roots() {
        let d = Discriminant::from_i64(13).unwrap();
        assert!(d.is_real());
        assert_eq!(d.isqrt(), &BigInt::from(3));
        let d = Discriminant::from_i64(-23).unwrap();
        assert_eq!(d.sign(), FieldSign::Imaginary);
        assert_eq!(d.parity(), 1);
    }
}
