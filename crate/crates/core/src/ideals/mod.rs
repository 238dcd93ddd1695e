//! Arithmetic on primitive ideals (a, b) = aZ + (b + √Δ)/2 Z of the maximal order.

mod infra;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ntkernel::{big_mod_u64, fr_ln_int, kronecker, sqrt_mod, Discriminant, FixedReal};
use crate::relgen::FactorBase;

pub use infra::{cycle_regulator, locate_near, principal_near, rho, rho_inverse, rho_step, DistIdeal};

/// Primitive integral ideal, stored with -a < b <= a.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    a: BigInt,
    b: BigInt,
}

impl Ideal {
    /// Validates 4a | b^2 - Δ and normalizes b.
    pub fn new(d: &Discriminant, a: BigInt, b: BigInt) -> Result<Ideal> {
        if !a.is_positive() {
            return Err(Error::InvalidIdeal(format!("norm {a} is not positive")));
        }
        let four_a: BigInt = &a << 2;
        if !(&b * &b - d.value()).is_multiple_of(&four_a) {
            return Err(Error::InvalidIdeal(format!("4*{a} does not divide {b}^2 - {}", d.value())));
        }
        Ok(Ideal::normalized(a, b))
    }

    pub(crate) fn normalized(a: BigInt, b: BigInt) -> Ideal {
        let two_a: BigInt = &a << 1;
        let mut r = b.mod_floor(&two_a);
        if r > a {
            r -= &two_a;
        }
        Ideal { a, b: r }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn norm(&self) -> &BigInt {
        &self.a
    }

    /// c = (b^2 - Δ) / 4a.
    pub fn c(&self, d: &Discriminant) -> BigInt {
        (&self.b * &self.b - d.value()) / (&self.a << 2)
    }

    pub fn is_valid(&self, d: &Discriminant) -> bool {
        self.a.is_positive()
            && (&self.b * &self.b - d.value()).is_multiple_of(&(&self.a << 2))
            && -&self.a < self.b
            && self.b <= self.a
    }

    pub fn is_unit(&self) -> bool {
        self.a.is_one()
    }

    /// Parse the "a,b" text form.
    pub fn parse(d: &Discriminant, s: &str) -> Result<Ideal> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected a,b but got {s:?}")))?;
        let a = BigInt::from_str(a.trim()).map_err(|e| Error::Parse(format!("{a:?}: {e}")))?;
        let b = BigInt::from_str(b.trim()).map_err(|e| Error::Parse(format!("{b:?}: {e}")))?;
        Ideal::new(d, a, b)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

pub fn unit_ideal(d: &Discriminant) -> Ideal {
    Ideal { a: BigInt::one(), b: BigInt::from(d.parity()) }
}

/// Canonical b_p: smallest b >= 0 with b^2 ≡ Δ (mod 4p) and b ≡ Δ (mod 2).
pub fn canonical_bp(d: &Discriminant, p: u64) -> Result<u64> {
    if kronecker(d.value(), p) == -1 {
        return Err(Error::Inert(p));
    }
    let par = d.parity() as u64;
    if p == 2 {
        let dm = big_mod_u64(d.value(), 8);
        return (0..4u64)
            .find(|b| b % 2 == par && (b * b) % 8 == dm)
            .ok_or(Error::Inert(2));
    }
    let r = sqrt_mod(d.value(), p)?;
    let cands = [r, p - r, p + r, 2 * p - r];
    Ok(*cands
        .iter()
        .filter(|&&b| b < 2 * p && b % 2 == par)
        .min()
        .expect("one candidate has the right parity"))
}

pub fn prime_ideal_above(d: &Discriminant, p: u64) -> Result<Ideal> {
    let b = canonical_bp(d, p)?;
    Ok(Ideal::normalized(BigInt::from(p), BigInt::from(b)))
}

/// Conjugate ideal (a, -b).
pub fn invert(i: &Ideal) -> Ideal {
    Ideal::normalized(i.a.clone(), -&i.b)
}

fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Gauss composition: IJ = (g) K with K primitive.
pub fn multiply(d: &Discriminant, i: &Ideal, j: &Ideal) -> (Ideal, BigInt) {
    let (a1, b1, a2, b2) = (&i.a, &i.b, &j.a, &j.b);
    if a1.is_one() {
        return (j.clone(), BigInt::one());
    }
    if a2.is_one() {
        return (i.clone(), BigInt::one());
    }
    let s: BigInt = (b1 + b2) >> 1u32;
    let (d1, y1, y2) = xgcd(a1, a2);
    let (g, x1, x2) = if (&s).is_multiple_of(&d1) {
        (d1.clone(), BigInt::one(), BigInt::zero())
    } else {
        xgcd(&d1, &s)
    };
    let a3 = (a1 * a2) / (&g * &g);
    let u = &x1 * &y1;
    let v = &x1 * &y2;
    let w = x2;
    let num = &u * a1 * b2 + &v * a2 * b1 + &w * ((b1 * b2 + d.value()) >> 1u32);
    debug_assert!(num.is_multiple_of(&g));
    let b3 = num / &g;
    let k = Ideal::normalized(a3, b3);
    debug_assert!(k.is_valid(d), "composition produced an invalid ideal");
    (k, g)
}

/// Whether I is reduced.
pub fn is_reduced(d: &Discriminant, i: &Ideal) -> bool {
    if d.is_imaginary() {
        let c = i.c(d);
        i.a < c || (i.a == c && !i.b.is_negative())
    } else {
        let s = d.isqrt();
        let two_a: BigInt = &i.a << 1;
        // representative b' in (√Δ - 2a, √Δ)
        let bp = s - (s - &i.b).mod_floor(&two_a);
        if !bp.is_positive() {
            return false;
        }
        // need √Δ > 2a - b'
        let t = &two_a - &bp;
        !t.is_positive() || &t * &t < *d.value()
    }
}

/// Reduced representative and ln|γ| with I = (γ)·reduced (zero when Δ < 0).
pub fn reduce(d: &Discriminant, i: &Ideal) -> (Ideal, FixedReal) {
    if d.is_imaginary() {
        return (reduce_imaginary(d, i), FixedReal::zero());
    }
    let mut cur = i.clone();
    let mut delta = FixedReal::zero();
    while !is_reduced(d, &cur) {
        let (next, inc) = rho_step(d, &cur);
        delta = delta.add(&inc);
        cur = next;
    }
    (cur, delta)
}

fn reduce_imaginary(d: &Discriminant, i: &Ideal) -> Ideal {
    let mut a = i.a.clone();
    let mut b = i.b.clone();
    let mut c = i.c(d);
    loop {
        // normalize b into (-a, a]
        let two_a: BigInt = &a << 1;
        let mut r = b.mod_floor(&two_a);
        if r > a {
            r -= &two_a;
        }
        if r != b {
            c = (&r * &r - d.value()) / (&a << 2);
            b = r;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b.is_negative() {
            b = -b;
        }
        return Ideal { a, b };
    }
}

/// Reduced representative of [I]^k and the accumulated generator log.
pub fn ideal_pow(d: &Discriminant, i: &Ideal, k: &BigUint) -> (Ideal, FixedReal) {
    let mut acc = unit_ideal(d);
    let mut log = FixedReal::zero();
    let real = d.is_real();
    for bit in (0..k.bits()).rev() {
        let (sq, g) = multiply(d, &acc, &acc);
        let (r, delta) = reduce(d, &sq);
        if real {
            log = log.add(&log).add(&fr_ln_int(g.magnitude())).add(&delta);
        }
        acc = r;
        if k.bit(bit) {
            let (pr, g) = multiply(d, &acc, i);
            let (r, delta) = reduce(d, &pr);
            if real {
                log = log.add(&fr_ln_int(g.magnitude())).add(&delta);
            }
            acc = r;
        }
    }
    (acc, log)
}

/// Reduced product of two ideals with the log of the relative generator:
/// IJ = (G)·K, returns (K, ln G).
pub fn mul_reduce(d: &Discriminant, i: &Ideal, j: &Ideal) -> (Ideal, FixedReal) {
    let (k, g) = multiply(d, i, j);
    let (r, delta) = reduce(d, &k);
    if d.is_imaginary() {
        return (r, FixedReal::zero());
    }
    (r, fr_ln_int(g.magnitude()).add(&delta))
}

/// Factorization over a factor base. Exponents are signed by orientation:
/// a negative exponent records the conjugate prime. `conj_norm` is the product
/// of p^|e| over negative exponents, so that as fractional ideals
/// I = (conj_norm) · ∏ 𝔭_i^{e_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub exps: Vec<(usize, i64)>,
    pub conj_norm: BigUint,
}

/// Trial-divide N(I) over the factor base and orient each prime power.
/// Returns the factorization of the smooth part and the remaining cofactor.
pub fn factor_partial(fb: &FactorBase, i: &Ideal) -> (Factorization, BigUint) {
    let mut n = i.a.magnitude().clone();
    let mut exps = Vec::new();
    let mut conj = BigUint::one();
    for (idx, fp) in fb.primes().iter().enumerate() {
        if n.is_one() {
            break;
        }
        let p = fp.p;
        let mut k = 0i64;
        while (&n % p).is_zero() {
            n /= p;
            k += 1;
        }
        if k == 0 {
            continue;
        }
        let sign = orientation(&i.b, p, fp.b);
        if sign < 0 {
            conj *= BigUint::from(p).pow(k as u32);
        }
        exps.push((idx, sign * k));
    }
    (Factorization { exps, conj_norm: conj }, n)
}

/// +1 when b ≡ b_p (mod 2p), -1 otherwise (conjugate prime).
pub(crate) fn orientation(b: &BigInt, p: u64, bp: u64) -> i64 {
    let m = 2 * p;
    if big_mod_u64(b, m) == bp % m {
        1
    } else {
        -1
    }
}

pub fn factor_over(fb: &FactorBase, i: &Ideal) -> Result<Factorization> {
    let (f, cof) = factor_partial(fb, i);
    if !cof.is_one() {
        return Err(Error::NotSmooth { cofactor: cof.to_string() });
    }
    Ok(f)
}

/// Reduced representative of ∏ 𝔭_i^{e_i} and ln G with ∏ 𝔭_i^{e_i} = (G)·result.
pub fn compose_exponents(fb: &FactorBase, exps: &[(usize, i64)]) -> (Ideal, FixedReal) {
    let d = fb.discriminant();
    let mut acc = unit_ideal(d);
    let mut log = FixedReal::zero();
    for &(idx, e) in exps {
        if e == 0 {
            continue;
        }
        let p = fb.ideal(idx);
        // 𝔭^{-k} = (p^{-k}) 𝔭̄^k
        let (base, shift) = if e > 0 {
            (p, FixedReal::zero())
        } else if d.is_real() {
            (invert(&p), fr_ln_int(&BigUint::from(fb.primes()[idx].p)).mul_i64(e))
        } else {
            (invert(&p), FixedReal::zero())
        };
        let (pw, l) = ideal_pow(d, &base, &BigUint::from(e.unsigned_abs()));
        let (r, l2) = mul_reduce(d, &acc, &pw);
        if d.is_real() {
            log = log.add(&l).add(&l2).add(&shift);
        }
        acc = r;
    }
    (acc, log)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(v: i64) -> Discriminant {
        Discriminant::from_i64(v).unwrap()
    }

    fn id(d: &Discriminant, a: i64, b: i64) -> Ideal {
        Ideal::new(d, BigInt::from(a), BigInt::from(b)).unwrap()
    }

    #[test]
    fn unit_ideals() {
        assert_eq!(unit_ideal(&disc(-23)).to_string(), "1,1");
        assert_eq!(unit_ideal(&disc(5)).to_string(), "1,1");
        assert_eq!(unit_ideal(&disc(-4)).to_string(), "1,0");
    }

    #[test]
    fn prime_ideals() {
        assert_eq!(prime_ideal_above(&disc(-23), 2).unwrap().to_string(), "2,1");
        assert_eq!(prime_ideal_above(&disc(5), 5).unwrap().to_string(), "5,5");
        assert_eq!(prime_ideal_above(&disc(-84), 2).unwrap().to_string(), "2,2");
        assert_eq!(prime_ideal_above(&disc(-84), 3).unwrap().to_string(), "3,0");
        assert_eq!(prime_ideal_above(&disc(-23), 5), Err(Error::Inert(5)));
    }

    #[test]
    fn composition_small() {
        let d = disc(-23);
        let (k, g) = multiply(&d, &id(&d, 2, 1), &id(&d, 3, 1));
        assert_eq!(k.a(), &BigInt::from(6));
        assert_eq!(g, BigInt::one());
        let (k, g) = multiply(&d, &id(&d, 2, 1), &id(&d, 2, -1));
        assert_eq!(k, unit_ideal(&d));
        assert_eq!(g, BigInt::from(2));
        let (k, g) = multiply(&d, &id(&d, 2, 1), &id(&d, 2, 1));
        assert_eq!((k.a().clone(), g), (BigInt::from(4), BigInt::one()));
        let (r, _) = reduce(&d, &k);
        assert_eq!(r, id(&d, 2, -1));
    }

    #[test]
    fn imaginary_reduction_ties() {
        let d = disc(-84);
        // forms of Δ=-84: (1,0,21), (3,0,7), (2,2,11), (5,4,5)
        let (r, _) = reduce(&d, &id(&d, 5, -4));
        assert_eq!(r, id(&d, 5, 4));
        assert!(is_reduced(&d, &id(&d, 2, 2)));
    }

    #[test]
    fn pow_order_three() {
        let d = disc(-23);
        let (r, _) = ideal_pow(&d, &id(&d, 2, 1), &BigUint::from(3u32));
        assert!(r.is_unit());
        let (r, _) = ideal_pow(&d, &id(&d, 2, 1), &BigUint::from(0u32));
        assert!(r.is_unit());
    }

    #[test]
    fn parse_roundtrip() {
        let d = disc(-23);
        let i = Ideal::parse(&d, "2,-1").unwrap();
        assert_eq!(i.to_string(), "2,-1");
        assert!(Ideal::parse(&d, "2,0").is_err());
        assert!(Ideal::parse(&d, "x").is_err());
    }
}
