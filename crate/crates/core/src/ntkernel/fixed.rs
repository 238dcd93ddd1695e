//! Interval fixed-point reals at scale 2^-64.
//!
//! Every value carries an absolute error bound `err` (in ulps); the true
//! value lies in `[(mant - err) * 2^-64, (mant + err) * 2^-64]`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fractional bits of the public representation.
pub const FRAC_BITS: u32 = 64;

/// Working precision of the logarithm kernel.
const WORK_BITS: u32 = 128;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FixedReal {
    mant: BigInt,
    err: BigUint,
}

impl fmt::Debug for FixedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}(±{} ulp)", self.to_f64(), self.err)
    }
}

impl fmt::Display for FixedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.9}", self.to_f64())
    }
}

impl Default for FixedReal {
    fn default() -> Self {
        Self::zero()
    }
}

impl FixedReal {
    pub fn zero() -> Self {
        FixedReal { mant: BigInt::zero(), err: BigUint::zero() }
    }

    pub fn from_parts(mant: BigInt, err: BigUint) -> Self {
        FixedReal { mant, err }
    }

    /// Exact integer value.
    pub fn from_integer<T: Into<BigInt>>(v: T) -> Self {
        FixedReal { mant: v.into() << FRAC_BITS, err: BigUint::zero() }
    }

    /// Nearest fixed-point value to `x`, err 1 ulp. Intended for tests and
    /// configuration knobs, never for bookkeeping.
    pub fn from_f64(x: f64) -> Self {
        let scaled = x * 2f64.powi(FRAC_BITS as i32);
        let mant = float_to_bigint(scaled);
        FixedReal { mant, err: BigUint::one() }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn err(&self) -> &BigUint {
        &self.err
    }

    pub fn is_exact_zero(&self) -> bool {
        self.mant.is_zero() && self.err.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        bigint_to_f64(&self.mant) / 2f64.powi(FRAC_BITS as i32)
    }

    pub fn err_f64(&self) -> f64 {
        biguint_to_f64(&self.err) / 2f64.powi(FRAC_BITS as i32)
    }

    pub fn lower(&self) -> BigInt {
        &self.mant - BigInt::from(self.err.clone())
    }

    pub fn upper(&self) -> BigInt {
        &self.mant + BigInt::from(self.err.clone())
    }

    /// True when the whole interval lies strictly above zero.
    pub fn is_definitely_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_definitely_negative(&self) -> bool {
        self.upper().is_negative()
    }

    /// Does `value * 2^-bits` lie in the interval?
    pub fn contains_scaled(&self, value: &BigInt, bits: u32) -> bool {
        let lo = self.lower() << bits;
        let hi = self.upper() << bits;
        let v = value << FRAC_BITS;
        lo <= v && v <= hi
    }

    pub fn add(&self, o: &FixedReal) -> FixedReal {
        FixedReal {
            mant: &self.mant + &o.mant,
            err: &self.err + &o.err + 1u32,
        }
    }

    pub fn sub(&self, o: &FixedReal) -> FixedReal {
        FixedReal {
            mant: &self.mant - &o.mant,
            err: &self.err + &o.err + 1u32,
        }
    }

    pub fn neg(&self) -> FixedReal {
        FixedReal { mant: -&self.mant, err: self.err.clone() }
    }

    pub fn abs(&self) -> FixedReal {
        FixedReal { mant: self.mant.abs(), err: self.err.clone() }
    }

    /// Exact scalar multiple; the error scales with |k|.
    pub fn mul_int(&self, k: &BigInt) -> FixedReal {
        FixedReal {
            mant: &self.mant * k,
            err: &self.err * k.magnitude(),
        }
    }

    pub fn mul_i64(&self, k: i64) -> FixedReal {
        self.mul_int(&BigInt::from(k))
    }

    /// Division by a nonzero integer with round-to-nearest.
    pub fn div_int(&self, k: &BigInt) -> FixedReal {
        assert!(!k.is_zero(), "division by zero");
        let q = round_div(&self.mant, k);
        let e = self.err.div_ceil(k.magnitude()) + 1u32;
        FixedReal { mant: q, err: e }
    }

    /// Integer nearest to the represented value.
    pub fn round(&self) -> BigInt {
        round_div(&self.mant, &(BigInt::one() << FRAC_BITS))
    }

    /// Nearest integer to self / other, computed from the midpoints.
    pub fn ratio_round(&self, other: &FixedReal) -> BigInt {
        round_div(&self.mant, &other.mant)
    }

    /// Value reduced into `[0, m)` by subtracting an integer multiple of `m`.
    /// Returns the reduced value and the multiple used.
    pub fn rem_euclid(&self, m: &FixedReal) -> (FixedReal, BigInt) {
        assert!(m.mant.is_positive(), "modulus must be positive");
        let q = self.mant.div_floor(&m.mant);
        let r = self.sub(&m.mul_int(&q));
        (r, q)
    }

    /// Loose one-sided comparison on midpoints.
    pub fn mid_cmp(&self, o: &FixedReal) -> std::cmp::Ordering {
        self.mant.cmp(&o.mant)
    }
}

impl std::ops::Add for &FixedReal {
    type Output = FixedReal;
    fn add(self, o: &FixedReal) -> FixedReal {
        FixedReal::add(self, o)
    }
}

impl std::ops::Sub for &FixedReal {
    type Output = FixedReal;
    fn sub(self, o: &FixedReal) -> FixedReal {
        FixedReal::sub(self, o)
    }
}

impl std::ops::Neg for &FixedReal {
    type Output = FixedReal;
    fn neg(self) -> FixedReal {
        FixedReal::neg(self)
    }
}

/// Nearest-integer division, halves rounded up.
pub(crate) fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (b, a) = if b.is_negative() { (-b, -a) } else { (b.clone(), a.clone()) };
    let twice: BigInt = (&a << 1) + &b;
    let den: BigInt = &b << 1;
    twice.div_floor(&den)
}

fn float_to_bigint(x: f64) -> BigInt {
    if x == 0.0 || !x.is_finite() {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let m = if exp == 0 { frac << 1 } else { frac | (1u64 << 52) };
    let e = exp - 1075;
    let mag = BigInt::from(m);
    let v = if e >= 0 { mag << e as usize } else { mag >> (-e) as usize };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

pub(crate) fn bigint_to_f64(v: &BigInt) -> f64 {
    let s = if v.is_negative() { -1.0 } else { 1.0 };
    s * biguint_to_f64(v.magnitude())
}

pub(crate) fn biguint_to_f64(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_u64().unwrap() as f64;
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().unwrap() as f64;
    top * 2f64.powi(shift as i32)
}

/// ln 2 at WORK_BITS fractional bits, via 2*atanh(1/3).
fn ln2_work() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    LN2.get_or_init(|| {
        let one = BigInt::one() << (WORK_BITS + 8);
        let y = &one / 3u32;
        atanh_series(&y, WORK_BITS + 8) << 1u32 >> 8u32
    })
}

/// atanh(y) for y given at `bits` fractional bits, |y| small.
fn atanh_series(y: &BigInt, bits: u32) -> BigInt {
    if y.is_negative() {
        return -atanh_series(&-y, bits);
    }
    let y2 = (y * y) >> bits;
    let mut pow = y.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !pow.is_zero() {
        sum += &pow / k;
        pow = (&pow * &y2) >> bits;
        k += 2;
    }
    sum
}

/// Natural log of num/den with err at most 4 ulps (at scale 2^-64).
pub fn fr_ln_rational(num: &BigUint, den: &BigUint) -> FixedReal {
    assert!(!num.is_zero() && !den.is_zero(), "ln of non-positive rational");
    if num == den {
        return FixedReal::zero();
    }
    // Bring num/den into [1/sqrt2, sqrt2) by a power of two.
    let mut k = num.bits() as i64 - den.bits() as i64;
    let scaled = |k: i64| -> BigInt {
        let (n, d) = if k >= 0 {
            (num << WORK_BITS, den << k as u64)
        } else {
            (num << (WORK_BITS as u64 + (-k) as u64), den.clone())
        };
        BigInt::from(n / d)
    };
    let mut m = scaled(k);
    // sqrt(2)/2 and sqrt(2) thresholds, crude integer comparison is enough
    // since the series converges anywhere in [1/2, 2).
    let one = BigInt::one() << WORK_BITS;
    let sqrt2 = BigInt::from(0x16A09E667F3BCC909u128) << (WORK_BITS - 64);
    if m >= sqrt2 {
        k += 1;
        m = scaled(k);
    } else if (&m << 1u32) < sqrt2 {
        k -= 1;
        m = scaled(k);
    }
    let y = ((&m - &one) << WORK_BITS) / (&m + &one);
    let lnm = atanh_series(&y, WORK_BITS) << 1u32;
    let total = lnm + ln2_work() * BigInt::from(k);
    let mant = round_div(&total, &(BigInt::one() << (WORK_BITS - FRAC_BITS)));
    FixedReal { mant, err: BigUint::from(2u32) }
}

/// ln of a positive integer.
pub fn fr_ln_int(n: &BigUint) -> FixedReal {
    fr_ln_rational(n, &BigUint::one())
}

pub fn fr_ln_u64(n: u64) -> FixedReal {
    fr_ln_int(&BigUint::from(n))
}

/// Interpret a signed integer ratio `num/den` with positive den.
pub fn fr_ln_abs(num: &BigInt, den: &BigInt) -> FixedReal {
    fr_ln_rational(num.magnitude(), den.magnitude())
}

/// Floor of sqrt(n) * 2^64.
pub fn sqrt_fixed(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, (n << (2 * FRAC_BITS)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(x: f64) -> FixedReal {
        FixedReal::from_f64(x)
    }

    #[test]
    fn ln_one_is_exact_zero() {
        let one = BigUint::one();
        let r = fr_ln_rational(&one, &one);
        assert!(r.is_exact_zero());
    }

    #[test]
    fn ln_two_reference() {
        // 128-bit reference of ln 2 (from a separate high-precision series run).
        let reference = BigInt::parse_bytes(b"b17217f7d1cf79abc9e3b39803f2f6af", 16).unwrap();
        let r = fr_ln_u64(2);
        assert!(r.contains_scaled(&reference, 128), "{r:?}");
        assert!((r.to_f64() - 0.6931471805599453).abs() < 1e-15);
    }

    #[test]
    fn log_additivity() {
        let a = fr_ln_rational(&BigUint::from(3u32), &BigUint::from(2u32));
        let b = fr_ln_u64(2);
        let c = fr_ln_u64(3);
        let s = a.add(&b);
        let diff = s.sub(&c);
        assert!(diff.mant().magnitude() <= diff.err());
    }

    #[test]
    fn add_propagates_one_ulp() {
        let a = FixedReal::from_parts(BigInt::from(10), BigUint::from(3u32));
        let b = FixedReal::from_parts(BigInt::from(-4), BigUint::from(5u32));
        let s = a.add(&b);
        assert_eq!(s.mant(), &BigInt::from(6));
        assert_eq!(s.err(), &BigUint::from(9u32));
        assert_eq!(a.sub(&b).err(), &BigUint::from(9u32));
    }

    #[test]
    fn div_and_round() {
        let x = fr(7.5);
        assert_eq!(x.round(), BigInt::from(8));
        let h = x.div_int(&BigInt::from(3));
        assert!((h.to_f64() - 2.5).abs() < 1e-15);
        assert_eq!(fr(-2.5).round(), BigInt::from(-2));
        assert_eq!(fr(-2.6).round(), BigInt::from(-3));
    }

    #[test]
    fn rem_euclid_reduces() {
        let (r, q) = fr(-1.25).rem_euclid(&fr(1.0));
        assert_eq!(q, BigInt::from(-2));
        assert!((r.to_f64() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn sqrt_fixed_of_five() {
        let s = sqrt_fixed(&BigUint::from(5u32));
        let v = bigint_to_f64(&s) / 2f64.powi(64);
        assert!((v - 5f64.sqrt()).abs() < 1e-15);
    }
}
