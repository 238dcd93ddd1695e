//! Relations from the quadratic form attached to a seed ideal.
//!
//! For S = (a, b) and x in [-M, M], α = ax + (b + √Δ)/2 lies in S and
//! (α) = S·𝔟 with 𝔟 = (|f(x)|, 2ax + b), f(x) = ax² + bx + c.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{batch_smooth_parts, sparse_axpy, FactorBase, PartialRelation, Relation, SieveSeed};
use crate::ideals::{canonical_bp, factor_partial, orientation, Ideal};
use crate::ntkernel::{fr_ln_int, fr_ln_rational, gcd_u64, is_prime_u64, mul_mod, Discriminant, FixedReal, FRAC_BITS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SieveHit {
    Full(Relation),
    Partial(PartialRelation),
}

/// Below this size candidates are batch-tested directly; above it a log sieve
/// preselects them.
const LOG_SIEVE_BITS: u64 = 80;

/// ln|(B + √Δ)/2| for a real discriminant, without cancellation.
pub(crate) fn alpha_log(d: &Discriminant, bb: &BigInt) -> FixedReal {
    let sq = d.sqrt_fixed();
    let r = if !bb.is_negative() {
        let num = sq + (bb << FRAC_BITS);
        fr_ln_rational(num.magnitude(), &(BigUint::one() << (FRAC_BITS + 1)))
    } else {
        // |B + √Δ| = |B² - Δ| / (√Δ - B)
        let n = (bb * bb - d.value()).abs() << FRAC_BITS;
        let den: BigInt = (sq - (bb << FRAC_BITS)) << 1u32;
        fr_ln_rational(n.magnitude(), den.magnitude())
    };
    FixedReal::from_parts(r.mant().clone(), r.err() + 1u32)
}

pub fn sieve_relations(fb: &FactorBase, seed: &SieveSeed, radius: i64) -> Vec<SieveHit> {
    let d = fb.discriminant();
    let a = seed.ideal.a().clone();
    let b = seed.ideal.b().clone();
    let c = seed.ideal.c(d);
    let xs: Vec<i64> = if d.bits() >= LOG_SIEVE_BITS {
        log_sieve_candidates(fb, &a, &b, &c, radius)
    } else {
        (-radius..=radius).collect()
    };
    let mut vals = Vec::with_capacity(xs.len());
    for &x in &xs {
        let xb = BigInt::from(x);
        let v: BigInt = (&a * &xb + &b) * &xb + &c;
        vals.push(v.magnitude().clone());
    }
    let parts = batch_smooth_parts(&vals, &fb.prime_values());
    let bound = fb.bound();
    let b2 = (bound as u128) * (bound as u128);
    let mut out = Vec::new();
    for ((x, n), smooth) in xs.iter().zip(&vals).zip(parts) {
        if n.is_zero() {
            continue;
        }
        let cof = n / &smooth;
        let large: Vec<u64> = if cof.is_one() {
            Vec::new()
        } else {
            match cof.to_u64() {
                Some(q) if (q as u128) <= b2 => vec![q],
                Some(q) if (q as u128) <= b2 * b2 && !is_prime_u64(q) => match split_semiprime(q) {
                    Some((q1, q2)) if q1 != q2 && q1 > bound && q2 > bound && (q1 as u128) <= b2 && (q2 as u128) <= b2 => {
                        vec![q1, q2]
                    }
                    _ => continue,
                },
                _ => continue,
            }
        };
        let bb = &a * BigInt::from(2 * *x) + &b;
        let ideal = Ideal::normalized(BigInt::from(n.clone()), bb.clone());
        let (f, rest) = factor_partial(fb, &ideal);
        debug_assert_eq!(rest, cof);
        let exps = sparse_axpy(&seed.exps, 1, &f.exps);
        let mut log = FixedReal::zero();
        if d.is_real() {
            log = seed.logpart.add(&alpha_log(d, &bb));
            if !f.conj_norm.is_one() {
                log = log.sub(&fr_ln_int(&f.conj_norm));
            }
        }
        if large.is_empty() {
            out.push(SieveHit::Full(Relation { exps, logpart: log }));
            continue;
        }
        let mut lp = Vec::with_capacity(2);
        let mut ok = true;
        for q in large {
            let Ok(bq) = canonical_bp(d, q) else {
                ok = false;
                break;
            };
            let s = orientation(ideal.b(), q, bq);
            if s < 0 && d.is_real() {
                // 𝔮̄ = (q)·𝔮^{-1}
                log = log.sub(&fr_ln_int(&BigUint::from(q)));
            }
            lp.push((q, s));
        }
        if ok {
            out.push(SieveHit::Partial(PartialRelation { exps, logpart: log, large: lp }));
        }
    }
    out
}

/// x values whose accumulated prime logs come close to ln|f(x)|.
fn log_sieve_candidates(fb: &FactorBase, a: &BigInt, b: &BigInt, c: &BigInt, radius: i64) -> Vec<i64> {
    let d = fb.discriminant();
    let width = (2 * radius + 1) as usize;
    let mut acc = vec![0f32; width];
    for fp in fb.primes() {
        let p = fp.p;
        if p == 2 {
            continue;
        }
        let am = crate::ntkernel::big_mod_u64(a, p);
        if am == 0 {
            continue;
        }
        let bm = crate::ntkernel::big_mod_u64(b, p);
        // roots of a x^2 + b x + c mod p: x = (-b ± r) / 2a with r^2 = Δ
        let r = crate::ntkernel::sqrt_mod(d.value(), p).unwrap_or(0);
        let inv = crate::ntkernel::inv_mod(mul_mod(2, am, p), p).unwrap();
        let lp = (p as f32).ln();
        let mut roots = vec![mul_mod((p - bm + r) % p, inv, p), mul_mod((2 * p - bm - r) % p, inv, p)];
        roots.dedup();
        for root in roots {
            // first index i with (i - radius) ≡ root (mod p)
            let start = ((root as i128 + radius as i128).rem_euclid(p as i128)) as usize;
            let mut i = start;
            while i < width {
                acc[i] += lp;
                i += p as usize;
            }
        }
    }
    let bound = fb.bound() as f32;
    let slack = 2.0 * bound.ln() + 2.0;
    (0..width)
        .filter_map(|i| {
            let x = i as i64 - radius;
            let xb = BigInt::from(x);
            let v: BigInt = (a * &xb + b) * &xb + c;
            if v.is_zero() {
                return None;
            }
            let lv = crate::ntkernel::bigint_to_f64(&v).abs().ln() as f32;
            (acc[i] >= lv - slack).then_some(x)
        })
        .collect()
}

/// Split a composite u64 into two factors by Pollard-Brent rho.
pub(crate) fn split_semiprime(n: u64) -> Option<(u64, u64)> {
    if n % 2 == 0 {
        return Some((2, n / 2));
    }
    for c in 1..20u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut steps = 0;
        while g == 1 && steps < 1 << 20 {
            x = f(x);
            y = f(f(y));
            q = mul_mod(q, x.abs_diff(y), n);
            steps += 1;
            if steps % 64 == 0 {
                g = gcd_u64(q, n);
            }
        }
        if g == 1 || g == n {
            // retry with the plain gcd walk
            let (mut x, mut y) = (2u64, 2u64);
            g = 1;
            let mut k = 0;
            while g == 1 && k < 1 << 20 {
                x = f(x);
                y = f(f(y));
                g = gcd_u64(x.abs_diff(y), n);
                k += 1;
            }
        }
        if g != 1 && g != n {
            let (p, q) = (g.min(n / g), g.max(n / g));
            return Some((p, q));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relgen::{build_factor_base, verify_relation};

    #[test]
    fn delta_minus_23_unit_seed() {
        let d = Discriminant::from_i64(-23).unwrap();
        let fb = build_factor_base(&d, 2);
        let hits = sieve_relations(&fb, &SieveSeed::unit(&d), 3);
        let fulls: Vec<&Relation> = hits
            .iter()
            .filter_map(|h| match h {
                SieveHit::Full(r) => Some(r),
                _ => None,
            })
            .collect();
        // x = 0: 6 = 2·3, x = 1: 8 = 2^3, x = 3: 18 = 2·3^2
        let norms: Vec<i64> = fulls
            .iter()
            .map(|r| r.exps.iter().map(|&(i, e)| [2i64, 3][i].pow(e.unsigned_abs() as u32)).product())
            .collect();
        for want in [6, 8, 18] {
            assert!(norms.contains(&want), "{norms:?}");
        }
        assert!(fulls.iter().all(|r| verify_relation(&fb, r)));
    }

    #[test]
    fn semiprime_split() {
        assert_eq!(split_semiprime(1009 * 2003), Some((1009, 2003)));
        assert_eq!(split_semiprime(65537 * 65539), Some((65537, 65539)));
    }
}
