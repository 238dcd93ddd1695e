//! Relation collection driver: seed enumeration, sieving, partial merging,
//! verification and deduplication.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    sieve_relations, verify_relation, verify_target_relation, FactorBase, PartialMerger, Relation, SieveHit,
    SieveSeed, SparseExps,
};
use crate::error::{Error, Result};
use crate::ideals::{compose_exponents, factor_over, invert, mul_reduce, multiply, principal_near, Ideal};
use crate::ntkernel::{fr_ln_int, FixedReal};

#[derive(Clone, Debug)]
pub struct StreamConfig {
    pub seed: u64,
    /// Sieve radius; chosen from the factor base when `None`.
    pub radius: Option<i64>,
    /// Producer threads. Output order does not depend on this.
    pub jobs: usize,
    pub max_seeds: usize,
    pub large_primes: bool,
    pub max_partials: usize,
    pub timeout: Option<Duration>,
    /// Re-check every relation by recomposition before accepting it.
    pub verify: bool,
}

impl Default for StreamConfig {
    fn default() -> Self {
        StreamConfig {
            seed: 0,
            radius: None,
            jobs: 1,
            max_seeds: 200_000,
            large_primes: true,
            max_partials: 500_000,
            timeout: None,
            verify: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StreamStats {
    pub seeds: usize,
    pub full: usize,
    pub partials: usize,
    pub merged: usize,
    pub duplicates: usize,
    pub rejected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    pub relations: Vec<Relation>,
    pub ncols: usize,
    pub stats: StreamStats,
}

impl RelationSet {
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn rows(&self) -> Vec<SparseExps> {
        self.relations.iter().map(|r| r.exps.clone()).collect()
    }

    pub fn logs(&self) -> Vec<FixedReal> {
        self.relations.iter().map(|r| r.logpart.clone()).collect()
    }
}

/// Resumable collector; asking for more relations continues the same
/// deterministic seed sequence.
pub struct RelationCollector<'a> {
    fb: &'a FactorBase,
    cfg: StreamConfig,
    radius: i64,
    next_seed: u64,
    merger: PartialMerger,
    seen: HashSet<(SparseExps, BigInt)>,
    out: Vec<Relation>,
    stats: StreamStats,
    spent: Duration,
}

impl<'a> RelationCollector<'a> {
    pub fn new(fb: &'a FactorBase, cfg: StreamConfig) -> Self {
        let radius = cfg.radius.unwrap_or_else(|| default_radius(fb));
        RelationCollector {
            fb,
            cfg,
            radius,
            next_seed: 0,
            merger: PartialMerger::new(),
            seen: HashSet::new(),
            out: Vec::new(),
            stats: StreamStats::default(),
            spent: Duration::ZERO,
        }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    /// Add an externally obtained relation (e.g. from a cache file).
    pub fn push(&mut self, rel: Relation) -> bool {
        self.accept(rel)
    }

    fn accept(&mut self, rel: Relation) -> bool {
        let real = self.fb.discriminant().is_real();
        if rel.exps.is_empty() && (!real || rel.logpart.to_f64().abs() < 1e-6) {
            return false;
        }
        let key = (rel.exps.clone(), if real { rel.logpart.mant().clone() } else { BigInt::zero() });
        if !self.seen.insert(key) {
            self.stats.duplicates += 1;
            return false;
        }
        if self.cfg.verify && !verify_relation(self.fb, &rel) {
            self.stats.rejected += 1;
            return false;
        }
        self.out.push(rel);
        true
    }

    /// Run seeds until at least `count` relations are held.
    pub fn collect_until(&mut self, count: usize) -> Result<()> {
        let start = Instant::now();
        let jobs = self.cfg.jobs.max(1);
        while self.out.len() < count {
            if self.stats.seeds >= self.cfg.max_seeds {
                return Err(Error::Timeout);
            }
            if let Some(limit) = self.cfg.timeout {
                if self.spent + start.elapsed() > limit {
                    self.spent += start.elapsed();
                    return Err(Error::Timeout);
                }
            }
            let ids: Vec<u64> = (self.next_seed..self.next_seed + jobs as u64).collect();
            self.next_seed += jobs as u64;
            let batches: Vec<Vec<SieveHit>> = if jobs == 1 {
                vec![self.run_seed(ids[0])]
            } else {
                let this: &Self = self;
                std::thread::scope(|s| {
                    let handles: Vec<_> = ids.iter().map(|&i| s.spawn(move || this.run_seed(i))).collect();
                    handles.into_iter().map(|h| h.join().expect("producer panicked")).collect()
                })
            };
            for hits in batches {
                self.stats.seeds += 1;
                for hit in hits {
                    match hit {
                        SieveHit::Full(r) => {
                            if self.accept(r) {
                                self.stats.full += 1;
                            }
                        }
                        SieveHit::Partial(p) => {
                            if !self.cfg.large_primes || self.merger.len() >= self.cfg.max_partials {
                                continue;
                            }
                            self.stats.partials += 1;
                            if let Some(r) = self.merger.add(p) {
                                if self.accept(r) {
                                    self.stats.merged += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        self.spent += start.elapsed();
        Ok(())
    }

    fn run_seed(&self, id: u64) -> Vec<SieveHit> {
        let d = self.fb.discriminant();
        let seed = if id == 0 {
            SieveSeed::unit(d)
        } else {
            let mut rng = seeded_rng(self.cfg.seed, id);
            random_seed(self.fb, self.radius, id % 3 == 2, &mut rng)
        };
        sieve_relations(self.fb, &seed, self.radius)
    }

    pub fn relations(&self) -> &[Relation] {
        &self.out
    }

    pub fn stats(&self) -> &StreamStats {
        &self.stats
    }

    pub fn into_set(self) -> RelationSet {
        RelationSet { relations: self.out, ncols: self.fb.len(), stats: self.stats }
    }

    pub fn snapshot(&self) -> RelationSet {
        RelationSet { relations: self.out.clone(), ncols: self.fb.len(), stats: self.stats.clone() }
    }
}

fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sieve radius from the factor base size.
pub(crate) fn default_radius(fb: &FactorBase) -> i64 {
    (fb.len() as i64 * 8).clamp(64, 20_000)
}

/// Collect at least `target_count` verified relations.
pub fn relation_stream(fb: &FactorBase, target_count: usize, cfg: &StreamConfig) -> Result<RelationSet> {
    let mut c = RelationCollector::new(fb, cfg.clone());
    c.collect_until(target_count)?;
    Ok(c.into_set())
}

/// A seed ideal for sieving.
///
/// Normally an unreduced product of distinct factor base primes with norm
/// near √(|Δ|/2)/M, so that form values stay near M·√(|Δ|/2). When
/// `far` is set and Δ > 0 the product is moved to a random point of the
/// principal cycle, which gives relations with large generator logs.
pub fn random_seed(fb: &FactorBase, radius: i64, far: bool, rng: &mut impl Rng) -> SieveSeed {
    let d = fb.discriminant();
    let base = product_seed(fb, radius, rng);
    if !(far && d.is_real()) {
        return base;
    }
    let span = BigUint::one() << (d.bits() / 2 + 1);
    let t_int = rng.gen_biguint_below(&span);
    let frac: u64 = rng.gen();
    let t = FixedReal::from_parts((BigInt::from(t_int) << 64u32) + BigInt::from(frac), BigUint::zero());
    let p = principal_near(d, &t);
    let (s, lg) = mul_reduce(d, &base.ideal, &p.ideal);
    SieveSeed { ideal: s, exps: base.exps, logpart: base.logpart.add(&p.dist).add(&lg) }
}

fn product_seed(fb: &FactorBase, radius: i64, rng: &mut impl Rng) -> SieveSeed {
    let d = fb.discriminant();
    let n = fb.len();
    let ln_target = 0.5 * (crate::ntkernel::bigint_to_f64(d.value()).abs() / 2.0).ln() - (radius as f64).ln();
    let lo = n / 3;
    let ln_top = (fb.bound() as f64).ln();
    if n < 4 || ln_target < 2.0 * ln_top {
        return small_seed(fb, rng);
    }
    let mut picked: Vec<usize> = Vec::new();
    let mut acc = 0f64;
    // random primes from the upper two thirds until one more prime closes the gap
    while ln_target - acc > ln_top {
        let i = rng.gen_range(lo..n);
        if !picked.contains(&i) {
            picked.push(i);
            acc += (fb.primes()[i].p as f64).ln();
        }
    }
    let want = (ln_target - acc).exp();
    let mut best = None;
    for (i, f) in fb.primes().iter().enumerate() {
        if picked.contains(&i) {
            continue;
        }
        let dist = ((f.p as f64) - want).abs();
        if best.is_none_or(|(_, bd)| dist < bd) {
            best = Some((i, dist));
        }
    }
    if let Some((i, _)) = best {
        picked.push(i);
    }
    picked.sort_unstable();
    let mut ideal = crate::ideals::unit_ideal(d);
    let mut exps = Vec::with_capacity(picked.len());
    let mut log = FixedReal::zero();
    for &i in &picked {
        let neg = rng.gen_bool(0.5);
        let p = fb.ideal(i);
        let factor = if neg { invert(&p) } else { p };
        let (prod, _) = multiply(d, &ideal, &factor);
        ideal = prod;
        exps.push((i, if neg { -1 } else { 1 }));
        if neg && d.is_real() {
            // 𝔭^{-1} = (1/p)·𝔭̄
            log = log.sub(&fr_ln_int(&BigUint::from(fb.primes()[i].p)));
        }
    }
    SieveSeed { ideal, exps, logpart: log }
}

/// Reduced random power product, for discriminants too small for the
/// product construction.
fn small_seed(fb: &FactorBase, rng: &mut impl Rng) -> SieveSeed {
    let n = fb.len();
    let k = rng.gen_range(1..=3.min(n));
    let mut exps: SparseExps = Vec::new();
    for _ in 0..k {
        let i = rng.gen_range(0..n);
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        exps = super::sparse_axpy(&exps, e, &[(i, 1)]);
    }
    let (ideal, lg) = compose_exponents(fb, &exps);
    SieveSeed { ideal, exps, logpart: lg }
}

/// Decompose T over the factor base: returns (e, ℓ) with
/// T·∏ 𝔭_i^{e_i} = (θ) and ℓ = ln|θ| (zero for Δ < 0).
pub fn find_target_relation(
    fb: &FactorBase,
    target: &Ideal,
    seed: u64,
    max_attempts: usize,
) -> Result<(SparseExps, FixedReal)> {
    let d = fb.discriminant();
    if let Ok(f) = factor_over(fb, target) {
        let e: SparseExps = f.exps.iter().map(|&(i, k)| (i, -k)).collect();
        let l = if d.is_real() { fr_ln_int(&f.conj_norm) } else { FixedReal::zero() };
        return Ok((e, l));
    }
    let radius = default_radius(fb);
    let mut rng = seeded_rng(seed, u64::MAX);
    for _ in 0..max_attempts {
        let p = small_seed(fb, &mut rng);
        // T·∏𝔭^s = (θ_s)·R
        let (r, lg) = mul_reduce(d, target, &p.ideal);
        let s = SieveSeed { ideal: r, exps: p.exps, logpart: p.logpart.add(&lg) };
        for hit in sieve_relations(fb, &s, radius) {
            if let SieveHit::Full(rel) = hit {
                let l = if d.is_real() { rel.logpart } else { FixedReal::zero() };
                if verify_target_relation(fb, target, &rel.exps, &l) {
                    return Ok((rel.exps, l));
                }
            }
        }
    }
    Err(Error::Timeout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::prime_ideal_above;
    use crate::ntkernel::Discriminant;
    use crate::relgen::build_factor_base;

    #[test]
    fn stream_minus_23() {
        let d = Discriminant::from_i64(-23).unwrap();
        let fb = build_factor_base(&d, 2);
        let set = relation_stream(&fb, 4, &StreamConfig::default()).unwrap();
        assert!(set.len() >= 4);
        assert!(set.relations.iter().all(|r| verify_relation(&fb, r)));
        let again = relation_stream(&fb, 4, &StreamConfig::default()).unwrap();
        assert_eq!(set, again);
    }

    #[test]
    fn target_trivial_cases() {
        // 3 splits: -1000007 ≡ 1 (mod 3)
        let d = Discriminant::from_i64(-1_000_007).unwrap();
        let fb = build_factor_base(&d, 30);
        let (e, _) = find_target_relation(&fb, &crate::ideals::unit_ideal(&d), 1, 10).unwrap();
        assert!(e.is_empty());
        let p3 = prime_ideal_above(&d, 3).unwrap();
        let (e, _) = find_target_relation(&fb, &p3, 1, 10).unwrap();
        assert_eq!(e, vec![(fb.index_of(3).unwrap(), -1)]);
    }

    #[test]
    fn target_random_imaginary() {
        let d = crate::ntkernel::gen_prime_discriminant(40, crate::ntkernel::FieldSign::Imaginary, 7);
        let fb = build_factor_base(&d, 40);
        let t = prime_ideal_above(&d, crate::ntkernel::PrimeIter::new().find(|&p| p > 5000 && crate::ntkernel::kronecker(d.value(), p) == 1).unwrap()).unwrap();
        let (e, l) = find_target_relation(&fb, &t, 3, 200).unwrap();
        assert!(verify_target_relation(&fb, &t, &e, &l));
    }

    #[test]
    fn target_random_real() {
        let d = crate::ntkernel::gen_prime_discriminant(40, crate::ntkernel::FieldSign::Real, 7);
        let fb = build_factor_base(&d, 40);
        let t = prime_ideal_above(&d, crate::ntkernel::PrimeIter::new().find(|&p| p > 5000 && crate::ntkernel::kronecker(d.value(), p) == 1).unwrap()).unwrap();
        let (e, l) = find_target_relation(&fb, &t, 3, 200).unwrap();
        assert!(verify_target_relation(&fb, &t, &e, &l));
    }
}
