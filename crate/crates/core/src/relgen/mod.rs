//! Factor bases and relation collection.

mod batch;
mod cache;
mod partials;
mod sieve;
mod stream;

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::ideals::{canonical_bp, compose_exponents, locate_near, unit_ideal, Ideal};
use crate::ntkernel::{kronecker, Discriminant, FixedReal, PrimeIter};

pub use batch::{batch_smooth, batch_smooth_parts};
pub use cache::{read_cache, write_cache, CacheContents};
pub use partials::{merge_partials, PartialMerger};
pub use sieve::{sieve_relations, SieveHit};
pub use stream::{find_target_relation, random_seed, relation_stream, RelationCollector, RelationSet, StreamConfig, StreamStats};

/// Sparse exponent vector, sorted by index, no zero entries.
pub type SparseExps = Vec<(usize, i64)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FbPrime {
    pub p: u64,
    pub b: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorBase {
    disc: Discriminant,
    primes: Vec<FbPrime>,
    index: HashMap<u64, usize>,
}

impl FactorBase {
    pub fn discriminant(&self) -> &Discriminant {
        &self.disc
    }

    pub fn primes(&self) -> &[FbPrime] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Largest prime in the base.
    pub fn bound(&self) -> u64 {
        self.primes.last().map_or(1, |f| f.p)
    }

    pub fn index_of(&self, p: u64) -> Option<usize> {
        self.index.get(&p).copied()
    }

    /// The prime ideal (p_i, b_i).
    pub fn ideal(&self, i: usize) -> Ideal {
        let f = self.primes[i];
        Ideal::normalized(BigInt::from(f.p), BigInt::from(f.b))
    }

    pub fn prime_values(&self) -> Vec<u64> {
        self.primes.iter().map(|f| f.p).collect()
    }
}

/// The first n non-inert primes with their canonical square roots.
pub fn build_factor_base(d: &Discriminant, n: usize) -> FactorBase {
    assert!(n >= 1, "factor base needs at least one prime");
    let mut primes = Vec::with_capacity(n);
    for p in PrimeIter::new() {
        if primes.len() == n {
            break;
        }
        if kronecker(d.value(), p) == -1 {
            continue;
        }
        let b = canonical_bp(d, p).expect("non-inert prime has a root");
        primes.push(FbPrime { p, b });
    }
    let index = primes.iter().enumerate().map(|(i, f)| (f.p, i)).collect();
    FactorBase { disc: d.clone(), primes, index }
}

/// Default factor base size for a discriminant of the given bit length.
///
/// Interpolates (140, 200), (160, 400), (180, 500), (200, 1100), (220, 1600),
/// scales linearly below 140 bits. Below 140 bits the size is also kept at
/// least the estimated count of non-inert primes up to ln^2 |Δ| (x / 2 ln x,
/// capped at the 140-bit value) and at least 6.
pub fn default_fb_size(bits: u64) -> usize {
    const TABLE: [(f64, f64); 5] = [(140.0, 200.0), (160.0, 400.0), (180.0, 500.0), (200.0, 1100.0), (220.0, 1600.0)];
    let b = bits as f64;
    let interp = if b <= TABLE[0].0 {
        TABLE[0].1 * b / TABLE[0].0
    } else if b >= TABLE[4].0 {
        TABLE[4].1 * b / TABLE[4].0
    } else {
        let w = TABLE.windows(2).find(|w| b <= w[1].0).unwrap();
        let t = (b - w[0].0) / (w[1].0 - w[0].0);
        w[0].1 + t * (w[1].1 - w[0].1)
    };
    if b >= TABLE[0].0 {
        return interp.ceil() as usize;
    }
    let x = (b * std::f64::consts::LN_2).powi(2);
    let floor = if x > 3.0 { (x / (2.0 * x.ln())).min(TABLE[0].1) } else { 0.0 };
    interp.max(floor).max(6.0).ceil() as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub exps: SparseExps,
    pub logpart: FixedReal,
}

/// Relation with one or two large primes; `large` holds (q, ±1) after the
/// conjugate orientation has been folded into `logpart`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialRelation {
    pub exps: SparseExps,
    pub logpart: FixedReal,
    pub large: Vec<(u64, i64)>,
}

/// Seed ideal S for sieving together with ∏ 𝔭^exps = (θ)·S, logpart = ln|θ|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveSeed {
    pub ideal: Ideal,
    pub exps: SparseExps,
    pub logpart: FixedReal,
}

impl SieveSeed {
    pub fn unit(d: &Discriminant) -> SieveSeed {
        SieveSeed { ideal: unit_ideal(d), exps: Vec::new(), logpart: FixedReal::zero() }
    }
}

/// a + k·b on sparse vectors.
pub fn sparse_axpy(a: &[(usize, i64)], k: i64, b: &[(usize, i64)]) -> SparseExps {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, k * b[j].1));
            j += 1;
        } else {
            let v = a[i].1 + k * b[j].1;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.retain(|&(_, v)| v != 0);
    out
}

/// Whether ∏ 𝔭^exps is principal with a generator of log `logpart` (real) or
/// principal at all (imaginary).
pub fn verify_relation(fb: &FactorBase, rel: &Relation) -> bool {
    verify_with_target(fb, None, &rel.exps, &rel.logpart)
}

/// Check T · ∏ 𝔭^exps = (θ) with ln|θ| = logpart.
pub fn verify_target_relation(fb: &FactorBase, target: &Ideal, exps: &[(usize, i64)], logpart: &FixedReal) -> bool {
    verify_with_target(fb, Some(target), exps, logpart)
}

fn verify_with_target(fb: &FactorBase, target: Option<&Ideal>, exps: &[(usize, i64)], logpart: &FixedReal) -> bool {
    let d = fb.discriminant();
    let (mut c, mut lambda) = compose_exponents(fb, exps);
    if let Some(t) = target {
        let (r, l) = crate::ideals::mul_reduce(d, &c, t);
        c = r;
        if d.is_real() {
            lambda = lambda.add(&l);
        }
    }
    if d.is_imaginary() {
        return c.is_unit();
    }
    // ∏ = (G)·c and ∏ = (α) with ln G = λ, ln|α| = logpart, so c sits at
    // distance λ - logpart on the principal cycle.
    let t = lambda.sub(logpart);
    let tol = 1e-6 + 4.0 * t.err_f64();
    locate_near(d, &c, &t, tol).is_some_and(|hit| (hit.dist.sub(&t)).to_f64().abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(v: i64) -> Discriminant {
        Discriminant::from_i64(v).unwrap()
    }

    #[test]
    fn factor_base_examples() {
        let fb = build_factor_base(&disc(-23), 2);
        assert_eq!(fb.primes(), &[FbPrime { p: 2, b: 1 }, FbPrime { p: 3, b: 1 }]);
        let fb = build_factor_base(&disc(5), 1);
        assert_eq!(fb.primes(), &[FbPrime { p: 5, b: 5 }]);
        let fb = build_factor_base(&disc(-1_000_003), 50);
        assert!(fb.primes().iter().all(|f| kronecker(&BigInt::from(-1_000_003), f.p) != -1));
        assert!(fb.primes().windows(2).all(|w| w[0].p < w[1].p));
    }

    #[test]
    fn fb_size_table() {
        assert_eq!(default_fb_size(140), 200);
        assert_eq!(default_fb_size(220), 1600);
        assert_eq!(default_fb_size(150), 300);
        assert_eq!(default_fb_size(3), 6);
        assert!(default_fb_size(60) >= 86);
    }

    #[test]
    fn axpy() {
        let a = vec![(0, 1), (3, 2)];
        let b = vec![(1, 1), (3, 1)];
        assert_eq!(sparse_axpy(&a, -2, &b), vec![(0, 1), (1, -2)]);
    }

    #[test]
    fn factor_over_examples() {
        use crate::ideals::{factor_over, multiply, prime_ideal_above};
        let d = disc(-23);
        let fb = build_factor_base(&d, 2);
        let u = factor_over(&fb, &unit_ideal(&d)).unwrap();
        assert!(u.exps.is_empty());
        let p3 = prime_ideal_above(&d, 3).unwrap();
        assert_eq!(factor_over(&fb, &p3).unwrap().exps, vec![(1, 1)]);
        let p2 = prime_ideal_above(&d, 2).unwrap();
        let (p4, _) = multiply(&d, &p2, &p2);
        let (p12, _) = multiply(&d, &p4, &p3);
        assert_eq!(p12.a(), &BigInt::from(12));
        assert_eq!(factor_over(&fb, &p12).unwrap().exps, vec![(0, 2), (1, 1)]);
        let bad = Ideal::new(&d, BigInt::from(6), BigInt::from(1)).unwrap();
        assert!(factor_over(&build_factor_base(&d, 1), &bad).is_err());
    }
}
