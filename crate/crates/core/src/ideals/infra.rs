//! Infrastructure of a real quadratic order: ρ-steps with distances and
//! navigation to a reduced principal ideal near a prescribed distance.
//!
//! Distance convention: if 𝔞 = (γ)𝔟 then dist(𝔟) = dist(𝔞) + ln|γ|, and the
//! unit ideal sits at distance 0.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::{invert, mul_reduce, unit_ideal, Ideal};
use crate::ntkernel::{fr_ln_rational, Discriminant, FixedReal, FRAC_BITS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistIdeal {
    pub ideal: Ideal,
    pub dist: FixedReal,
}

impl DistIdeal {
    pub fn unit(d: &Discriminant) -> DistIdeal {
        DistIdeal { ideal: unit_ideal(d), dist: FixedReal::zero() }
    }
}

/// One reduction step 𝔞 -> 𝔟 = (ψ̄/a)𝔞 with ψ = (b' + √Δ)/2, returning 𝔟 and
/// ln|a/ψ̄| = ln(2a / |√Δ - b'|).
pub fn rho_step(d: &Discriminant, i: &Ideal) -> (Ideal, FixedReal) {
    assert!(d.is_real(), "rho needs a real discriminant");
    let s = d.isqrt();
    let a = i.a();
    let two_a: BigInt = a << 1;
    let bp = if a > s {
        let mut r = i.b().mod_floor(&two_a);
        if &r > a {
            r -= &two_a;
        }
        r
    } else {
        s - (s - i.b()).mod_floor(&two_a)
    };
    let c: BigInt = (&bp * &bp - d.value()) / (a << 2);
    let next = Ideal::normalized(c.abs(), -&bp);
    let sq = d.sqrt_fixed();
    let inc = if bp.is_positive() {
        // ln((√Δ + b') / 2|c|)
        let num = sq + (&bp << FRAC_BITS);
        let den = c.abs() << (FRAC_BITS + 1);
        fr_ln_rational(num.magnitude(), den.magnitude())
    } else {
        // ln(2a / (√Δ - b'))
        let num = &two_a << FRAC_BITS;
        let den = sq - (&bp << FRAC_BITS);
        fr_ln_rational(num.magnitude(), den.magnitude())
    };
    // √Δ is known to within one ulp from below; relative effect < 1 ulp.
    let inc = FixedReal::from_parts(inc.mant().clone(), inc.err() + 1u32);
    (next, inc)
}

pub fn rho(d: &Discriminant, x: &DistIdeal) -> DistIdeal {
    let (next, inc) = rho_step(d, &x.ideal);
    DistIdeal { ideal: next, dist: x.dist.add(&inc) }
}

/// ρ^{-1} = conj ∘ ρ ∘ conj on reduced ideals.
pub fn rho_inverse(d: &Discriminant, x: &DistIdeal) -> DistIdeal {
    let (c, _) = rho_step(d, &invert(&x.ideal));
    let prev = invert(&c);
    let (back, inc) = rho_step(d, &prev);
    debug_assert_eq!(back, x.ideal, "rho_inverse on a non-reduced ideal");
    DistIdeal { ideal: prev, dist: x.dist.sub(&inc) }
}

/// Below this magnitude principal_near walks directly from the unit ideal.
fn walk_span(d: &Discriminant) -> FixedReal {
    let bits = d.bits().max(8);
    // about ln Δ
    FixedReal::from_integer(BigInt::from(bits * 7 / 10 + 2))
}

/// Reduced principal ideal whose distance is nearest to t (any sign).
pub fn principal_near(d: &Discriminant, t: &FixedReal) -> DistIdeal {
    assert!(d.is_real(), "principal_near needs a real discriminant");
    let span = walk_span(d);
    let start = if t.abs().mid_cmp(&span).is_le() {
        DistIdeal::unit(d)
    } else {
        let half = principal_near(d, &t.div_int(&BigInt::from(2)));
        let (sq, lg) = mul_reduce(d, &half.ideal, &half.ideal);
        DistIdeal { ideal: sq, dist: half.dist.add(&half.dist).add(&lg) }
    };
    walk_to(d, start, t)
}

/// Walk along the cycle from `cur` and return the ideal nearest to t.
pub(crate) fn walk_to(d: &Discriminant, mut cur: DistIdeal, t: &FixedReal) -> DistIdeal {
    if cur.dist.mid_cmp(t).is_le() {
        loop {
            let next = rho(d, &cur);
            if next.dist.mid_cmp(t).is_gt() {
                return nearer(cur, next, t);
            }
            cur = next;
        }
    } else {
        loop {
            let prev = rho_inverse(d, &cur);
            if prev.dist.mid_cmp(t).is_le() {
                return nearer(prev, cur, t);
            }
            cur = prev;
        }
    }
}

fn nearer(lo: DistIdeal, hi: DistIdeal, t: &FixedReal) -> DistIdeal {
    let dl = t.mant() - lo.dist.mant();
    let dh = hi.dist.mant() - t.mant();
    if dl <= dh {
        lo
    } else {
        hi
    }
}

/// Find the reduced ideal `a` among the principal ideals whose distance lies
/// within `window` of t.
pub fn locate_near(d: &Discriminant, a: &Ideal, t: &FixedReal, window: f64) -> Option<DistIdeal> {
    let near = principal_near(d, t);
    if &near.ideal == a {
        return Some(near);
    }
    let mut fwd = near.clone();
    loop {
        fwd = rho(d, &fwd);
        if fwd.dist.sub(t).to_f64() > window {
            break;
        }
        if &fwd.ideal == a {
            return Some(fwd);
        }
    }
    let mut back = near;
    loop {
        back = rho_inverse(d, &back);
        if t.sub(&back.dist).to_f64() > window {
            break;
        }
        if &back.ideal == a {
            return Some(back);
        }
    }
    None
}

/// Regulator by a full walk of the principal cycle. Only sensible for small Δ.
pub fn cycle_regulator(d: &Discriminant) -> FixedReal {
    let start = DistIdeal::unit(d);
    let mut cur = rho(d, &start);
    while cur.ideal != start.ideal {
        cur = rho(d, &cur);
    }
    cur.dist
}
