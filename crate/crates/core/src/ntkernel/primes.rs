//! Primality testing, prime enumeration and prime discriminants.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modarith::{mul_mod, pow_mod};

const MR_BASES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_64 {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &MR_BASES_64 {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin: deterministic below 2^64, 40 random rounds above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    for &p in &MR_BASES_64 {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    // Fixed seed keeps the test a deterministic function of n.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_9a11);
    let two = BigUint::from(2u32);
    'outer: for _ in 0..40 {
        let a = rng.gen_biguint_range(&two, &nm1);
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Smallest probable prime strictly greater than n.
pub fn next_probable_prime(n: &BigUint) -> BigUint {
    let two = BigUint::from(2u32);
    if *n < two {
        return two;
    }
    let mut c = n + 1u32;
    if c.is_even() && c != two {
        c += 1u32;
    }
    while !is_probable_prime(&c) {
        c += &two;
    }
    c
}

/// All primes <= limit (sieve of Eratosthenes).
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Incremental prime enumerator backed by a growing sieve.
pub struct PrimeIter {
    primes: Vec<u64>,
    pos: usize,
    limit: u64,
}

impl PrimeIter {
    pub fn new() -> Self {
        PrimeIter { primes: primes_up_to(1 << 12), pos: 0, limit: 1 << 12 }
    }
}

impl Default for PrimeIter {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeIter {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        if self.pos == self.primes.len() {
            self.limit *= 4;
            self.primes = primes_up_to(self.limit);
        }
        let p = self.primes[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// Sign of a discriminant request.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSign {
    Imaginary,
    Real,
}

/// Seeded prime discriminant: Δ = -p with p ≡ 3 (mod 4), or Δ = p with
/// p ≡ 1 (mod 4), with |Δ| of exactly `bits` bits.
pub fn gen_prime_discriminant(bits: u32, sign: FieldSign, seed: u64) -> super::Discriminant {
    assert!(bits >= 4, "need at least 4 bits");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = BigUint::one() << (bits - 1);
    let hi = BigUint::one() << bits;
    let mut c = rng.gen_biguint_range(&lo, &hi) | BigUint::one();
    let want = if sign == FieldSign::Imaginary { 3u32 } else { 1u32 };
    loop {
        if c >= hi {
            c = &lo + 1u32;
        }
        if (&c % 4u32).to_u32() == Some(want) && is_probable_prime(&c) {
            break;
        }
        c += 2u32;
    }
    let v = num_bigint::BigInt::from(c);
    let v = if sign == FieldSign::Imaginary { -v } else { v };
    super::Discriminant::new_prime(v)
}
