//! Index-calculus pipelines: class group, regulator, discrete logarithms in
//! the class group and in the infrastructure.

mod realgcd;
mod window;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{
    graph_eliminate, graph_eliminate_capped, hnf_mod_d, hnf_with_det, rank_mod_p, short_kernel, snf, Elimination, GrowthCap,
    SparseIntMatrix, SparseRow,
};
use crate::ideals::{ideal_pow, principal_near, reduce, Ideal};
use crate::ntkernel::{bigint_to_f64, kronecker, Discriminant, FixedReal, PrimeIter};
use crate::relgen::{
    build_factor_base, default_fb_size, find_target_relation, read_cache, write_cache, CacheContents, FactorBase,
    RelationCollector, SparseExps, StreamConfig, StreamStats,
};

pub use realgcd::{real_gcd, MAX_ERR, ZERO_THRESHOLD};
pub use window::{euler_window, l_one_chi, EulerWindow};

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub seed: u64,
    pub fb_size: Option<usize>,
    /// Relations collected beyond the factor base size before the first attempt.
    pub surplus: usize,
    /// Check h (or hR) against the Euler window and retry on failure.
    pub certified: bool,
    pub jobs: usize,
    pub timeout: Option<Duration>,
    /// Extra relations beyond full rank whose kernel vectors give multiples of R.
    pub kernel_samples: usize,
    pub max_retries: usize,
    pub euler_cutoff: Option<u64>,
    /// Relation cache read before and written after collection.
    pub cache: Option<PathBuf>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            fb_size: None,
            surplus: 20,
            certified: true,
            jobs: 1,
            timeout: None,
            kernel_samples: 10,
            max_retries: 5,
            euler_cutoff: None,
            cache: None,
        }
    }
}

impl SolverConfig {
    /// Same settings with the Euler window check switched off.
    pub fn uncertified(&self) -> SolverConfig {
        SolverConfig { certified: false, ..self.clone() }
    }
}

/// Wall-clock split of one pipeline run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub sieving: f64,
    pub elimination: f64,
    pub linear_algebra: f64,
}

impl Timings {
    pub fn total(&self) -> f64 {
        self.sieving + self.elimination + self.linear_algebra
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunStats {
    pub fb_size: usize,
    pub relations_used: usize,
    pub rounds: usize,
    pub stream: StreamStats,
    pub timings: Timings,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassGroup {
    pub h: BigInt,
    /// Invariant factors, each dividing the previous one.
    pub invariants: Vec<BigInt>,
    pub stats: RunStats,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegulatorEstimate {
    pub r: FixedReal,
    pub h: BigInt,
    pub certified_window: bool,
    pub stats: RunStats,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DlpResult {
    pub x: BigInt,
    /// Order of [g], when the lattice determined it.
    pub order: Option<BigInt>,
    pub verified: bool,
    pub stats: RunStats,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfraResult {
    /// Distance of the target, reduced into [0, R).
    pub t: FixedReal,
    pub regulator: FixedReal,
    /// |dist(a) - t| for the returned t, recomputed from scratch.
    pub residual: f64,
    /// Distance between the value assembled from relation logs and the
    /// located distance of a.
    pub deviation: f64,
    pub verified: bool,
    pub stats: RunStats,
}

fn require_fundamental(d: &Discriminant) -> Result<()> {
    if d.is_fundamental() {
        Ok(())
    } else {
        Err(Error::InvalidDiscriminant(format!("{} is not fundamental", d.value())))
    }
}

/// Default cutoff of the Euler product.
fn euler_cutoff(cfg: &SolverConfig, fb: &FactorBase) -> u64 {
    cfg.euler_cutoff.unwrap_or_else(|| fb.bound().max(1 << 16))
}

/// Number of non-inert primes up to min(6 ln²|Δ|, Minkowski bound), which
/// suffice to generate the class group under GRH.
pub fn generating_fb_size(d: &Discriminant) -> usize {
    let abs = bigint_to_f64(&d.value().abs());
    let ln = abs.ln();
    let mink = if d.is_imaginary() { (abs / 3.0).sqrt() } else { abs.sqrt() / 2.0 };
    let bound = (6.0 * ln * ln).min(mink);
    PrimeIter::new()
        .take_while(|&p| (p as f64) <= bound)
        .filter(|&p| kronecker(d.value(), p) != -1)
        .count()
}

/// Factor base used by the pipelines.
pub fn solver_factor_base(d: &Discriminant, cfg: &SolverConfig) -> FactorBase {
    build_factor_base(d, fb_schedule(d, cfg)[0])
}

/// Factor base sizes tried in turn: the configured size and, in certified
/// mode without an explicit size, doublings up to the generating size.
fn fb_schedule(d: &Discriminant, cfg: &SolverConfig) -> Vec<usize> {
    let base = cfg.fb_size.unwrap_or_else(|| default_fb_size(d.bits())).max(1);
    let mut sizes = vec![base];
    if cfg.certified && cfg.fb_size.is_none() {
        let gen = generating_fb_size(d);
        while *sizes.last().unwrap() < gen {
            let next = (sizes.last().unwrap() * 2).min(gen);
            sizes.push(next);
        }
    }
    sizes
}

enum Step<T> {
    Done(T),
    /// The lattice determinant fell below the window: the factor base does
    /// not generate the class group.
    Escalate,
}

/// Run `attempt` over the factor base schedule until it is done.
fn escalating<T>(
    d: &Discriminant,
    cfg: &SolverConfig,
    mut attempt: impl FnMut(&mut Pipeline, &EulerWindow) -> Result<Option<Step<T>>>,
) -> Result<(T, RunStats)> {
    let sizes = fb_schedule(d, cfg);
    let mut timings = Timings::default();
    for (i, &n) in sizes.iter().enumerate() {
        let fb = build_factor_base(d, n);
        let window = euler_window(d, euler_cutoff(cfg, &fb));
        // the cache belongs to the first factor base only
        let stage = if i == 0 { cfg.clone() } else { SolverConfig { cache: None, ..cfg.clone() } };
        let mut p = Pipeline::new(&fb, &stage)?;
        let res = p.run(|p| attempt(p, &window));
        timings.sieving += p.timings.sieving;
        timings.elimination += p.timings.elimination;
        timings.linear_algebra += p.timings.linear_algebra;
        match res? {
            Step::Done(x) => {
                let stats = RunStats { timings, ..p.stats() };
                return Ok((x, stats));
            }
            Step::Escalate if i + 1 < sizes.len() => continue,
            Step::Escalate => {
                return Err(Error::Unverified(format!("lattice determinant below the Euler window with {n} primes")))
            }
        }
    }
    unreachable!("the schedule is never empty")
}

fn secs(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Relations after structured elimination, with everything the pipelines
/// need downstream.
struct Lattice {
    elim: Elimination,
}

impl Lattice {
    fn ncols(&self) -> usize {
        self.elim.reduced.ncols()
    }

    fn transport(&self, v: &SparseExps, real: Option<&FixedReal>) -> Option<(SparseRow, Option<FixedReal>)> {
        let row: SparseRow = v.iter().map(|&(c, e)| (c, BigInt::from(e))).collect();
        self.elim.transport(&row, real)
    }
}

struct Pipeline<'a> {
    fb: &'a FactorBase,
    cfg: SolverConfig,
    collector: RelationCollector<'a>,
    timings: Timings,
    rounds: usize,
}

impl<'a> Pipeline<'a> {
    fn new(fb: &'a FactorBase, cfg: &SolverConfig) -> Result<Self> {
        let scfg = StreamConfig { seed: cfg.seed, jobs: cfg.jobs.max(1), timeout: cfg.timeout, ..StreamConfig::default() };
        let mut collector = RelationCollector::new(fb, scfg);
        if let Some(path) = &cfg.cache {
            if path.exists() {
                let cached = read_cache(path, fb)?;
                for r in cached.relations {
                    collector.push(r);
                }
            }
        }
        Ok(Pipeline { fb, cfg: cfg.clone(), collector, timings: Timings::default(), rounds: 0 })
    }

    fn grow(&mut self, count: usize) -> Result<()> {
        let t = Instant::now();
        let r = self.collector.collect_until(count);
        self.timings.sieving += secs(t);
        r
    }

    fn save_cache(&self) -> Result<()> {
        if let Some(path) = &self.cfg.cache {
            let contents = CacheContents { relations: self.collector.relations().to_vec(), partials: Vec::new() };
            write_cache(path, self.fb, &contents)?;
        }
        Ok(())
    }

    fn stats(&self) -> RunStats {
        RunStats {
            fb_size: self.fb.len(),
            relations_used: self.collector.relations().len(),
            rounds: self.rounds,
            stream: self.collector.stats().clone(),
            timings: self.timings.clone(),
        }
    }

    /// Eliminate the current relation matrix; None when some column is
    /// uncovered or the reduced matrix is not of full column rank.
    fn lattice(&mut self) -> Option<Lattice> {
        let real = self.fb.discriminant().is_real();
        let rels = self.collector.relations();
        let rows: Vec<SparseRow> =
            rels.iter().map(|r| r.exps.iter().map(|&(c, e)| (c, BigInt::from(e))).collect()).collect();
        let reals = real.then(|| rels.iter().map(|r| r.logpart.clone()).collect());
        let m = SparseIntMatrix::from_rows(self.fb.len(), rows, reals);
        let t = Instant::now();
        let elim = graph_eliminate(&m);
        self.timings.elimination += secs(t);
        if !elim.zero_cols.is_empty() {
            return None;
        }
        let t = Instant::now();
        let full = rank_mod_p(&elim.reduced) == elim.reduced.ncols();
        self.timings.linear_algebra += secs(t);
        full.then_some(Lattice { elim })
    }

    /// Collect, attempt, and grow the relation set until `attempt` succeeds.
    fn run<T>(&mut self, mut attempt: impl FnMut(&mut Self) -> Result<Option<T>>) -> Result<T> {
        let mut target = self.fb.len() + self.cfg.surplus;
        for round in 0..=self.cfg.max_retries {
            self.rounds = round + 1;
            self.grow(target)?;
            if let Some(out) = attempt(self)? {
                self.save_cache()?;
                return Ok(out);
            }
            target = self.collector.relations().len().max(target);
            target += (target / 10).max(5);
        }
        self.save_cache()?;
        Err(Error::RelationDeficit(format!(
            "{} relations over {} primes after {} rounds",
            self.collector.relations().len(),
            self.fb.len(),
            self.rounds
        )))
    }

    fn timed<T>(&mut self, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.linear_algebra += secs(t);
        out
    }
}

/// HNF of the reduced lattice; the determinant is the order of the subgroup
/// generated by the factor base.
fn lattice_hnf(p: &mut Pipeline, lat: &Lattice) -> Result<(Vec<Vec<BigInt>>, BigInt)> {
    let reduced = SparseIntMatrix::from_rows(lat.ncols(), lat.elim.reduced.rows().to_vec(), None);
    p.timed(|| hnf_with_det(&reduced))
}

/// Structure of the class group of an imaginary quadratic field.
pub fn class_group(d: &Discriminant, cfg: &SolverConfig) -> Result<ClassGroup> {
    if !d.is_imaginary() {
        return Err(Error::InvalidDiscriminant("class_group needs Δ < 0".into()));
    }
    require_fundamental(d)?;
    let ((h, invariants), stats) = escalating(d, cfg, |p, window| {
        let Some(lat) = p.lattice() else { return Ok(None) };
        let (hnf, det) = match lattice_hnf(p, &lat) {
            Ok(x) => x,
            Err(Error::RankDeficient { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        if p.cfg.certified {
            let x = bigint_to_f64(&det);
            if x <= window.hstar {
                return Ok(Some(Step::Escalate));
            }
            if !window.contains(x) {
                return Ok(None);
            }
        }
        let inv = p.timed(|| snf(&hnf));
        Ok(Some(Step::Done((det, inv))))
    })?;
    Ok(ClassGroup { h, invariants, stats })
}

/// Rows of a reduced block with their logs.
type Block = Vec<(Vec<i128>, FixedReal)>;

/// Pivots of the second elimination may not push a log's error bound past
/// this, nor an entry past `BLOCK_ENTRY`.
const BLOCK_ERR: f64 = 1e-9;
const BLOCK_ENTRY: u64 = 1 << 12;
/// Largest error a multiple of R may carry and still be snapped to the exact
/// distance of the unit ideal.
const SNAP_WINDOW: f64 = 1e4;

fn block_rows(m: &SparseIntMatrix) -> Option<Block> {
    let k = m.ncols();
    let reals = m.reals()?;
    let mut rows = Vec::with_capacity(m.nrows());
    for (r, x) in m.rows().iter().zip(reals) {
        let mut v = vec![0i128; k];
        for (c, e) in r {
            v[*c] = e.to_i128()?;
        }
        rows.push((v, x.clone()));
    }
    Some(rows)
}

fn sparse_to_i128(r: &SparseRow, n: usize) -> Option<Vec<i128>> {
    let mut v = vec![0i128; n];
    for (c, e) in r {
        v[*c] = e.to_i128()?;
    }
    Some(v)
}

/// The distance of the unit ideal nearest x, looked up within x's error.
/// Any such distance is an exact multiple of R.
fn snap_period(d: &Discriminant, x: &FixedReal) -> Option<FixedReal> {
    let window = x.err_f64() + 1e-3;
    if window > SNAP_WINDOW {
        return None;
    }
    let unit = crate::ideals::DistIdeal::unit(d).ideal;
    crate::ideals::locate_near(d, &unit, x, window).map(|f| f.dist)
}

/// The distance of the unit ideal near x, if x approximates a period of the
/// principal cycle.
fn exact_period(d: &Discriminant, x: &FixedReal) -> Option<FixedReal> {
    let near = principal_near(d, x);
    (near.ideal.is_unit() && near.dist.sub(x).to_f64().abs() < 1e-3).then_some(near.dist)
}

/// Divide out small factors m of a multiple mR as long as the quotient is
/// still a period.
fn refine_multiple(d: &Discriminant, r: FixedReal, limit: u64) -> FixedReal {
    let mut r = r;
    for p in PrimeIter::new().take_while(|&p| p <= limit) {
        loop {
            if r.to_f64() / (p as f64) < 2.0 * ZERO_THRESHOLD {
                break;
            }
            match exact_period(d, &r.div_int(&BigInt::from(p))) {
                Some(c) => r = c,
                None => break,
            }
        }
    }
    r
}

struct RealLattice {
    lat: Lattice,
    /// Second elimination on unit pivots under `BLOCK_ERR`.
    inner: Elimination,
    /// Selected rows of the leftover block: full rank plus the extra
    /// relations whose kernel vectors give the multiples of R.
    rows: Block,
    r: FixedReal,
    h: BigInt,
}

/// Rows of the block with the smallest errors, enough to reach full rank and
/// generate a lattice of determinant h, plus `extra` more.
fn select_rows(block: &Block, ncols: usize, h: &BigInt, extra: usize) -> Option<Block> {
    let mut sorted: Block = block.clone();
    sorted.sort_by(|a, b| a.1.err_f64().total_cmp(&b.1.err_f64()));
    let sparse = |rows: &[(Vec<i128>, FixedReal)]| {
        let rs: Vec<SparseRow> = rows
            .iter()
            .map(|(v, _)| v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(c, &x)| (c, BigInt::from(x))).collect())
            .collect();
        SparseIntMatrix::from_rows(ncols, rs, None)
    };
    let mut take = (ncols + extra).min(sorted.len());
    loop {
        let m = sparse(&sorted[..take]);
        if rank_mod_p(&m) == ncols && (ncols == 0 || hnf_with_det(&m).is_ok_and(|(_, det)| &det == h)) {
            return Some(sorted[..take].to_vec());
        }
        if take == sorted.len() {
            return None;
        }
        take = (take + extra.max(4)).min(sorted.len());
    }
}

fn real_lattice(p: &mut Pipeline, extra: usize) -> Result<Option<RealLattice>> {
    let d = p.fb.discriminant().clone();
    let Some(lat) = p.lattice() else { return Ok(None) };
    let h = match lattice_hnf(p, &lat) {
        Ok((_, h)) => h,
        Err(Error::RankDeficient { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let t = Instant::now();
    let cap = GrowthCap { err: BLOCK_ERR, entry: BLOCK_ENTRY };
    let inner = graph_eliminate_capped(&lat.elim.reduced, usize::MAX, Some(cap));
    p.timings.elimination += secs(t);
    let Some(block) = block_rows(&inner.reduced) else { return Ok(None) };
    let ncols = inner.reduced.ncols();
    let found = p.timed(|| {
        let rows = select_rows(&block, ncols, &h, extra)?;
        let ints: Vec<Vec<i128>> = rows.iter().map(|(v, _)| v.clone()).collect();
        let kernel = short_kernel(&ints, ncols)?;
        let mut mults: Vec<FixedReal> = lat.elim.null_reals.iter().chain(&inner.null_reals).cloned().collect();
        for c in &kernel {
            mults.push(c.iter().zip(&rows).fold(FixedReal::zero(), |acc, (&x, (_, v))| acc.add(&v.mul_i64(x as i64))));
        }
        let snapped: Vec<FixedReal> = mults
            .iter()
            .filter(|m| m.to_f64().abs() >= ZERO_THRESHOLD)
            .filter_map(|m| snap_period(&d, &m.abs()))
            .collect();
        Some((rows, snapped))
    });
    let Some((rows, mults)) = found else { return Ok(None) };
    let r = match real_gcd(&mults) {
        Ok(r) => r,
        Err(Error::PrecisionLoss(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let Some(r) = p.timed(|| exact_period(&d, &r).map(|r| refine_multiple(&d, r, 1000))) else {
        return Ok(None);
    };
    Ok(Some(RealLattice { lat, inner, rows, r, h }))
}

/// Regulator of a real quadratic field (and the class number as a by-product).
pub fn regulator(d: &Discriminant, cfg: &SolverConfig) -> Result<RegulatorEstimate> {
    if !d.is_real() {
        return Err(Error::InvalidDiscriminant("regulator needs Δ > 0".into()));
    }
    require_fundamental(d)?;
    let extra = cfg.kernel_samples;
    let ((r, h, in_window), stats) = escalating(d, cfg, |p, window| {
        let Some(rl) = real_lattice(p, extra)? else { return Ok(None) };
        let hr = bigint_to_f64(&rl.h) * rl.r.to_f64();
        let in_window = window.contains(hr);
        if p.cfg.certified {
            if hr <= window.hstar {
                return Ok(Some(Step::Escalate));
            }
            if !in_window {
                return Ok(None);
            }
        }
        Ok(Some(Step::Done((rl.r, rl.h, in_window))))
    })?;
    Ok(RegulatorEstimate { r, h, certified_window: in_window, stats })
}

/// [g]^x = [a] in the class group of an imaginary quadratic field.
pub fn dlp_imaginary(d: &Discriminant, g: &Ideal, a: &Ideal, cfg: &SolverConfig) -> Result<DlpResult> {
    if !d.is_imaginary() {
        return Err(Error::InvalidDiscriminant("dlp_imaginary needs Δ < 0".into()));
    }
    require_fundamental(d)?;
    let g = reduce(d, g).0;
    let a = reduce(d, a).0;
    if a.is_unit() {
        return Ok(DlpResult { x: BigInt::zero(), order: None, verified: true, stats: RunStats::default() });
    }
    if a == g {
        return Ok(DlpResult { x: BigInt::one(), order: None, verified: true, stats: RunStats::default() });
    }
    if g.is_unit() {
        return Err(Error::NoSolution);
    }
    let fb = solver_factor_base(d, cfg);
    let mut p = Pipeline::new(&fb, cfg)?;
    let t = Instant::now();
    let (eg, _) = find_target_relation(&fb, &g, cfg.seed ^ 0x67, 10_000)?;
    let (ea, _) = find_target_relation(&fb, &a, cfg.seed ^ 0x61, 10_000)?;
    p.timings.sieving += secs(t);
    let mut unsolvable = 0;
    let res = p.run(|p| {
        let Some(lat) = p.lattice() else { return Ok(None) };
        let (Some((eg, _)), Some((ea, _))) = (lat.transport(&eg, None), lat.transport(&ea, None)) else {
            return Ok(None);
        };
        let (_, det) = match lattice_hnf(p, &lat) {
            Ok(x) => x,
            Err(Error::RankDeficient { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let sol = p.timed(|| solve_in_lattice(&lat, &eg, &ea, &det));
        let Some((x, order)) = sol else {
            unsolvable += 1;
            return Ok(None);
        };
        if verify_dlp(d, &g, &a, &x) {
            return Ok(Some((x, order)));
        }
        Ok(None)
    });
    match res {
        Ok((x, order)) => Ok(DlpResult { x, order: Some(order), verified: true, stats: p.stats() }),
        Err(Error::RelationDeficit(_)) if unsolvable > 0 => Err(Error::NoSolution),
        Err(Error::RelationDeficit(msg)) => Err(Error::Unverified(msg)),
        Err(e) => Err(e),
    }
}

/// Solve f ≡ x·e (mod L) in reduced coordinates through the HNF of the
/// lattice spanned by (L, 0) and (e, 1); returns x modulo the order of [g]
/// together with that order.
fn solve_in_lattice(lat: &Lattice, e: &SparseRow, f: &SparseRow, det: &BigInt) -> Option<(BigInt, BigInt)> {
    let n = lat.ncols();
    let mut rows: Vec<Vec<BigInt>> = lat.elim.reduced.rows().iter().map(|r| dense(r, n + 1)).collect();
    let mut last = dense(e, n + 1);
    last[n] = BigInt::one();
    rows.push(last);
    let h = hnf_mod_d(&rows, n + 1, det);
    let target = dense(f, n);
    let mut w: Vec<BigInt> = Vec::with_capacity(n);
    for j in 0..n {
        let s: BigInt = (0..j).map(|i| &w[i] * &h[i][j]).sum();
        let num = &target[j] - s;
        if !num.is_multiple_of(&h[j][j]) {
            return None;
        }
        w.push(num / &h[j][j]);
    }
    let order = h[n][n].clone();
    let x: BigInt = (0..n).map(|i| &w[i] * &h[i][n]).sum();
    Some((x.mod_floor(&order), order))
}

fn dense(r: &SparseRow, n: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    for (c, x) in r {
        v[*c] = x.clone();
    }
    v
}

/// Distance of a reduced principal ideal modulo R.
pub fn dlp_infrastructure(d: &Discriminant, a: &Ideal, cfg: &SolverConfig) -> Result<InfraResult> {
    if !d.is_real() {
        return Err(Error::InvalidDiscriminant("dlp_infrastructure needs Δ > 0".into()));
    }
    require_fundamental(d)?;
    let fb = solver_factor_base(d, cfg);
    let mut p = Pipeline::new(&fb, cfg)?;
    let t = Instant::now();
    let (ea, la) = find_target_relation(&fb, a, cfg.seed ^ 0x61, 10_000)?;
    p.timings.sieving += secs(t);
    let mut misses = 0;
    let extra = cfg.kernel_samples;
    let res = p.run(|p| {
        let Some(rl) = real_lattice(p, extra)? else { return Ok(None) };
        let xv = match p.timed(|| express_target(&rl, &ea)) {
            Expressed::Value(v) => v,
            Expressed::NotInLattice => {
                misses += 1;
                return Ok(None);
            }
            Expressed::Failed => return Ok(None),
        };
        // a·∏𝔭^e = (θ) and ∏ α_i^{x_i} = ∏𝔭^{-e}, so a = (θ ∏ α_i^{x_i}).
        let (raw, _) = la.add(&xv).neg().rem_euclid(&rl.r);
        let window = xv.err_f64().clamp(1.0, 1e4);
        let Some(found) = p.timed(|| crate::ideals::locate_near(d, a, &raw, window)) else {
            return Ok(None);
        };
        let (t, _) = found.dist.rem_euclid(&rl.r);
        let deviation = found.dist.sub(&raw).to_f64().abs();
        Ok(Some((t, rl.r, deviation)))
    });
    match res {
        Ok((t, r, deviation)) => {
            let residual = infra_residual(d, a, &t).unwrap_or(f64::INFINITY);
            let verified = residual < 1e-6;
            Ok(InfraResult { t, regulator: r, residual, deviation, verified, stats: p.stats() })
        }
        Err(Error::RelationDeficit(_)) if misses > 0 => Err(Error::LikelyNonPrincipal),
        Err(Error::RelationDeficit(msg)) => Err(Error::Unverified(msg)),
        Err(e) => Err(e),
    }
}

enum Expressed {
    Value(FixedReal),
    NotInLattice,
    Failed,
}

/// x·v for an integer x with x·A = -e, where A is the relation matrix and v
/// the vector of relation logs. The target is carried through both
/// eliminations and then written in terms of the selected block rows, using a
/// reduced relation among those rows and the target that involves the target
/// exactly once.
fn express_target(rl: &RealLattice, e: &SparseExps) -> Expressed {
    let neg: SparseExps = e.iter().map(|&(c, x)| (c, -x)).collect();
    let Some((u1, r1)) = rl.lat.transport(&neg, Some(&FixedReal::zero())) else { return Expressed::Failed };
    let Some((u2, Some(r2))) = rl.inner.transport(&u1, r1.as_ref()) else { return Expressed::Failed };
    let ncols = rl.inner.reduced.ncols();
    if u2.is_empty() {
        return Expressed::Value(r2.neg());
    }
    let Some(target) = sparse_to_i128(&u2, ncols) else { return Expressed::Failed };
    let mut ints: Vec<Vec<i128>> = rl.rows.iter().map(|(v, _)| v.clone()).collect();
    ints.push(target);
    let Some(kernel) = short_kernel(&ints, ncols) else { return Expressed::Failed };
    // combine kernel vectors until the target coefficient is ±1
    let last = ints.len() - 1;
    let mut acc: Option<Vec<i128>> = None;
    for v in kernel.into_iter().filter(|v| v[last] != 0) {
        acc = Some(match acc {
            None => v,
            Some(a) => {
                let e = BigInt::from(a[last]).extended_gcd(&BigInt::from(v[last]));
                let (Some(x), Some(y)) = (e.x.to_i128(), e.y.to_i128()) else { return Expressed::Failed };
                let mut out = Vec::with_capacity(a.len());
                for (p, q) in a.iter().zip(&v) {
                    match x.checked_mul(*p).zip(y.checked_mul(*q)).and_then(|(s, t)| s.checked_add(t)) {
                        Some(z) => out.push(z),
                        None => return Expressed::Failed,
                    }
                }
                out
            }
        });
        if acc.as_ref().is_some_and(|a| a[last].abs() == 1) {
            break;
        }
    }
    let Some(c) = acc.filter(|a| a[last].abs() == 1) else { return Expressed::NotInLattice };
    // Σ c_i row_i + c_last·u2 = 0, so u2 = Σ x_i row_i with x = -c_last·c
    let sign = -c[last];
    let mut s = FixedReal::zero();
    for (&ci, (_, v)) in c[..last].iter().zip(&rl.rows) {
        let Some(k) = ci.checked_mul(sign).and_then(|k| i64::try_from(k).ok()) else { return Expressed::Failed };
        s = s.add(&v.mul_i64(k));
    }
    Expressed::Value(s.sub(&r2))
}

/// Check [g]^x = [a] by recomputation (Δ < 0, where reduced forms are unique
/// in their class).
pub fn verify_dlp(d: &Discriminant, g: &Ideal, a: &Ideal, x: &BigInt) -> bool {
    if !d.is_imaginary() {
        return false;
    }
    let base = if x.is_negative() { crate::ideals::invert(g) } else { g.clone() };
    let (gx, _) = ideal_pow(d, &base, x.magnitude());
    gx == reduce(d, a).0
}

/// |dist - t| for the principal ideal nearest to t, if that ideal is `a`.
pub fn infra_residual(d: &Discriminant, a: &Ideal, t: &FixedReal) -> Option<f64> {
    let near = principal_near(d, t);
    (&near.ideal == a).then(|| near.dist.sub(t).to_f64().abs())
}

/// Check that the reduced principal ideal nearest to distance t is `a`.
pub fn verify_infra(d: &Discriminant, a: &Ideal, t: &FixedReal) -> bool {
    infra_residual(d, a, t).is_some_and(|r| r < 1e-6)
}

/// Random split prime ideal of norm at most `bound`, excluding principal ones.
pub fn random_nonprincipal_prime(d: &Discriminant, bound: u64, seed: u64) -> Option<Ideal> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let cands: Vec<u64> = PrimeIter::new().take_while(|&p| p <= bound).filter(|&p| kronecker(d.value(), p) == 1).collect();
    for _ in 0..64 {
        if cands.is_empty() {
            return None;
        }
        let p = cands[rng.gen_range(0..cands.len())];
        let i = crate::ideals::prime_ideal_above(d, p).ok()?;
        if !reduce(d, &i).0.is_unit() {
            return Some(i);
        }
    }
    None
}

/// Serialize a nonnegative integer as a JSON number when it fits in 53 bits,
/// else as a decimal string.
pub fn json_int(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) if x.unsigned_abs() < (1u64 << 53) => serde_json::Value::from(x),
        _ => serde_json::Value::from(v.to_string()),
    }
}
