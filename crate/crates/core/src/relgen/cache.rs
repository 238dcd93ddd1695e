//! Line-oriented relation cache.
//!
//! ```text
//! QFREL v1 delta=<dec> fb=<n>
//! R p:e p:e ... | <mant_hex>:<err_hex>
//! P q[,q2] p:e ... | <mant_hex>:<err_hex>
//! ```
//!
//! Exponents are keyed by the prime, not the index. On `P` lines a large
//! prime written as `-q` stands for the conjugate prime above q.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_traits::Num;

use super::{FactorBase, PartialRelation, Relation, SparseExps};
use crate::error::{Error, Result};
use crate::ntkernel::FixedReal;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheContents {
    pub relations: Vec<Relation>,
    pub partials: Vec<PartialRelation>,
}

fn fmt_exps(fb: &FactorBase, exps: &SparseExps, out: &mut String) {
    for &(i, e) in exps {
        let _ = write!(out, " {}:{}", fb.primes()[i].p, e);
    }
}

fn fmt_log(l: &FixedReal, out: &mut String) {
    let m = l.mant();
    let sign = if m.sign() == num_bigint::Sign::Minus { "-" } else { "" };
    let _ = write!(out, " | {}{:x}:{:x}", sign, m.magnitude(), l.err());
}

pub fn write_cache(path: &Path, fb: &FactorBase, contents: &CacheContents) -> Result<()> {
    let mut s = format!("QFREL v1 delta={} fb={}\n", fb.discriminant().value(), fb.len());
    for r in &contents.relations {
        s.push('R');
        fmt_exps(fb, &r.exps, &mut s);
        fmt_log(&r.logpart, &mut s);
        s.push('\n');
    }
    for p in &contents.partials {
        let qs: Vec<String> = p.large.iter().map(|&(q, o)| if o < 0 { format!("-{q}") } else { q.to_string() }).collect();
        let _ = write!(s, "P {}", qs.join(","));
        fmt_exps(fb, &p.exps, &mut s);
        fmt_log(&p.logpart, &mut s);
        s.push('\n');
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(s.as_bytes())?;
    Ok(())
}

fn parse_exps(fb: &FactorBase, toks: &[&str]) -> Result<SparseExps> {
    let mut v = Vec::with_capacity(toks.len());
    for t in toks {
        let (p, e) = t.split_once(':').ok_or_else(|| Error::Parse(format!("bad exponent token {t}")))?;
        let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad prime {p}")))?;
        let e: i64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent {e}")))?;
        let i = fb.index_of(p).ok_or_else(|| Error::Parse(format!("{p} is not in the factor base")))?;
        v.push((i, e));
    }
    v.sort_unstable();
    Ok(super::sparse_axpy(&[], 1, &v))
}

fn parse_log(s: &str) -> Result<FixedReal> {
    let (m, e) = s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("bad log {s}")))?;
    let mant = BigInt::from_str_radix(m, 16).map_err(|_| Error::Parse(format!("bad mantissa {m}")))?;
    let err = BigUint::from_str_radix(e, 16).map_err(|_| Error::Parse(format!("bad error {e}")))?;
    Ok(FixedReal::from_parts(mant, err))
}

/// Read a cache written for the same discriminant and factor base size.
pub fn read_cache(path: &Path, fb: &FactorBase) -> Result<CacheContents> {
    let f = std::fs::File::open(path)?;
    let mut lines = BufReader::new(f).lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty cache".into()))??;
    let want = format!("QFREL v1 delta={} fb={}", fb.discriminant().value(), fb.len());
    if header.trim() != want {
        return Err(Error::Parse(format!("cache header mismatch: {header}")));
    }
    let mut out = CacheContents::default();
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (body, log) = line.split_once('|').ok_or_else(|| Error::Parse(format!("missing log: {line}")))?;
        let logpart = parse_log(log)?;
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks.first() {
            Some(&"R") => out.relations.push(Relation { exps: parse_exps(fb, &toks[1..])?, logpart }),
            Some(&"P") => {
                let qs = toks.get(1).ok_or_else(|| Error::Parse(format!("missing large primes: {line}")))?;
                let mut large = Vec::new();
                for q in qs.split(',') {
                    let (o, q) = match q.strip_prefix('-') {
                        Some(r) => (-1, r),
                        None => (1, q),
                    };
                    let q: u64 = q.parse().map_err(|_| Error::Parse(format!("bad large prime {q}")))?;
                    large.push((q, o));
                }
                out.partials.push(PartialRelation { exps: parse_exps(fb, &toks[2..])?, logpart, large });
            }
            _ => return Err(Error::Parse(format!("unknown line: {line}"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntkernel::Discriminant;
    use crate::relgen::build_factor_base;

    #[test]
    fn round_trip() {
        let d = Discriminant::from_i64(-1_000_003).unwrap();
        let fb = build_factor_base(&d, 10);
        let c = CacheContents {
            relations: vec![
                Relation { exps: vec![(0, 2), (3, -1)], logpart: FixedReal::zero() },
                Relation { exps: vec![(1, 1)], logpart: FixedReal::from_parts(BigInt::from(-0x1234567), BigUint::from(3u32)) },
            ],
            partials: vec![PartialRelation { exps: vec![(2, 1)], logpart: FixedReal::zero(), large: vec![(1009, 1), (2003, -1)] }],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rel.txt");
        write_cache(&path, &fb, &c).unwrap();
        assert_eq!(read_cache(&path, &fb).unwrap(), c);
        let other = build_factor_base(&d, 11);
        assert!(read_cache(&path, &other).is_err());
    }
}
