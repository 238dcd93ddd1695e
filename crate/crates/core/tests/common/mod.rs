//! Independent oracles for the integration tests. Nothing in here calls into
//! the library beyond plain data types.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

// ---------------------------------------------------------------- forms

/// Binary quadratic form (a, b, c) with b² - 4ac = Δ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1i128, 0i128, 0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

impl Form {
    pub fn from_ab(delta: i128, a: i128, b: i128) -> Form {
        assert_eq!((b * b - delta).rem_euclid(4 * a), 0);
        Form { a, b, c: (b * b - delta) / (4 * a) }
    }

    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn identity(delta: i128) -> Form {
        let b = delta.rem_euclid(2);
        Form::from_ab(delta, 1, b)
    }

    pub fn inverse(&self) -> Form {
        Form { a: self.a, b: -self.b, c: self.c }
    }

    /// Reduced representative of a positive definite form.
    pub fn reduce(self) -> Form {
        let delta = self.disc();
        let mut f = self;
        loop {
            // b into (-a, a]
            let two_a = 2 * f.a;
            let mut b = f.b.rem_euclid(two_a);
            if b > f.a {
                b -= two_a;
            }
            f = Form::from_ab(delta, f.a, b);
            if f.a > f.c {
                f = Form { a: f.c, b: -f.b, c: f.a };
                continue;
            }
            if f.a == f.c && f.b < 0 {
                f.b = -f.b;
            }
            return f;
        }
    }

    /// Gaussian composition followed by reduction.
    pub fn compose(&self, o: &Form) -> Form {
        let delta = self.disc();
        let (f1, f2) = if self.a > o.a { (o, self) } else { (self, o) };
        let s = (f1.b + f2.b) / 2;
        let n = f2.b - s;
        let (d, y1) = if f2.a % f1.a == 0 {
            (f1.a, 0)
        } else {
            let (d, u, _) = xgcd(f2.a, f1.a);
            (d, u)
        };
        let (d1, x2, y2) = if s % d == 0 {
            (d, 0, -1)
        } else {
            let (d1, x2, y2) = xgcd(s, d);
            (d1, x2, -y2)
        };
        let v1 = f1.a / d1;
        let v2 = f2.a / d1;
        let r = (y1 * y2 * n - x2 * f2.c).rem_euclid(v1);
        let b3 = f2.b + 2 * v2 * r;
        let a3 = v1 * v2;
        Form::from_ab(delta, a3, b3).reduce()
    }

    pub fn pow(&self, mut k: u128) -> Form {
        let mut acc = Form::identity(self.disc());
        let mut base = *self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }
}

/// All reduced primitive forms of discriminant Δ < 0.
pub fn reduced_forms(delta: i128) -> Vec<Form> {
    assert!(delta < 0);
    let mut out = Vec::new();
    let mut a = 1i128;
    while 3 * a * a <= -delta {
        for b in -a + 1..=a {
            if (b - delta).rem_euclid(2) != 0 || (b * b - delta) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - delta) / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            out.push(Form { a, b, c });
        }
        a += 1;
    }
    out
}

/// Class number and invariant factors (largest first, each dividing the
/// previous) from the reduced forms and the orders of their classes.
pub fn class_group_oracle(delta: i128) -> (u64, Vec<u64>) {
    let forms = reduced_forms(delta);
    let h = forms.len() as u64;
    let id = Form::identity(delta);
    let order = |f: &Form| {
        let mut g = *f;
        let mut k = 1u64;
        while g != id {
            g = g.compose(f);
            k += 1;
        }
        k
    };
    let orders: Vec<u64> = forms.iter().map(order).collect();
    // for each prime p | h, #{x : p^k x = 0} = p^{Σ min(k, e_i)}
    let mut parts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for p in prime_factors(h) {
        let mut exps = Vec::new();
        let mut prev = 0u32;
        let mut pk = 1u64;
        loop {
            pk *= p;
            let cnt = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let s = ilog(cnt, p);
            if s == prev {
                break;
            }
            exps.push(s - prev);
            prev = s;
        }
        // exps[k-1] = #{i : e_i >= k}
        let mut e = vec![0u32; exps[0] as usize];
        for (k, &m) in exps.iter().enumerate() {
            for x in e.iter_mut().take(m as usize) {
                *x = k as u32 + 1;
            }
        }
        parts.insert(p, e);
    }
    let len = parts.values().map(|v| v.len()).max().unwrap_or(0);
    let mut inv = vec![1u64; len];
    for (p, e) in &parts {
        for (i, &x) in e.iter().enumerate() {
            inv[i] *= p.pow(x);
        }
    }
    (h, inv)
}

fn ilog(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        assert_eq!(n % p, 0);
        n /= p;
        k += 1;
    }
    k
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Discrete log of `a` to base `g` by baby-step giant-step over [0, bound).
pub fn bsgs(g: &Form, a: &Form, bound: u64) -> Option<u64> {
    let m = (bound as f64).sqrt().ceil() as u64 + 1;
    let mut baby = HashMap::new();
    let mut x = Form::identity(g.disc());
    for j in 0..m {
        baby.entry(x).or_insert(j);
        x = x.compose(g);
    }
    let giant = g.pow(m as u128).inverse().reduce();
    let mut y = *a;
    for i in 0..=m {
        if let Some(j) = baby.get(&y) {
            return Some(i * m + j);
        }
        y = y.compose(&giant);
    }
    None
}

// ---------------------------------------------------------------- discriminants

pub fn squarefree(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Fundamental discriminant test by definition.
pub fn is_fundamental(d: i64) -> bool {
    let m = d.rem_euclid(4);
    let abs = d.unsigned_abs();
    if m == 1 {
        return d != 1 && squarefree(abs);
    }
    if m == 0 {
        let q = d / 4;
        let qm = q.rem_euclid(4);
        return (qm == 2 || qm == 3) && squarefree(q.unsigned_abs());
    }
    false
}

// ---------------------------------------------------------------- regulator

/// Regulator of the maximal order from the continued fraction of ω:
/// the sum of ln of the complete quotients over one period.
pub fn cf_regulator(delta: u64) -> f64 {
    let sd = (delta as f64).sqrt();
    let dd = delta as i128;
    let (mut p, mut q) = if delta % 4 == 1 { (1i128, 2i128) } else { (0, 2) };
    let step = |p: i128, q: i128| {
        let a = ((p as f64 + sd) / q as f64).floor() as i128;
        let p2 = a * q - p;
        (p2, (dd - p2 * p2) / q)
    };
    (p, q) = step(p, q);
    let start = (p, q);
    let mut r = 0.0;
    loop {
        r += ((p as f64 + sd) / q as f64).ln();
        (p, q) = step(p, q);
        if (p, q) == start {
            return r;
        }
    }
}

// ---------------------------------------------------------------- linear algebra

/// Determinant by fraction-free elimination.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// gcd of all k×k minors.
pub fn minor_gcd(m: &[Vec<i128>], k: usize) -> i128 {
    let (rows, cols) = (m.len(), m.first().map_or(0, |r| r.len()));
    let cs = subsets(cols, k);
    let mut g = 0i128;
    for rs in subsets(rows, k) {
        for c in &cs {
            let sub: Vec<Vec<i128>> = rs.iter().map(|&i| c.iter().map(|&j| m[i][j]).collect()).collect();
            g = g.gcd(&det(&sub));
            if g == 1 {
                return 1;
            }
        }
    }
    g
}

pub fn rank(m: &[Vec<i128>]) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    (1..=m.len().min(cols)).rev().find(|&k| minor_gcd(m, k) != 0).unwrap_or(0)
}

/// Nontrivial invariant factors of Z^cols / rowspace, largest first, from
/// determinantal divisors. Requires full column rank.
pub fn snf_oracle(m: &[Vec<i128>]) -> Vec<i128> {
    let cols = m[0].len();
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=cols {
        let dk = minor_gcd(m, k);
        let f = dk / prev;
        if f != 1 {
            out.push(f);
        }
        prev = dk;
    }
    out.reverse();
    out
}

/// Unique x with x·M = rhs for square nonsingular M, by Cramer's rule.
pub fn cramer(m: &[Vec<i128>], rhs: &[i128]) -> Vec<BigRational> {
    let n = m.len();
    let d = det(m);
    assert_ne!(d, 0);
    (0..n)
        .map(|j| {
            let mut mj = m.to_vec();
            mj[j] = rhs.to_vec();
            BigRational::new(BigInt::from(det(&mj)), BigInt::from(d))
        })
        .collect()
}

pub fn check_left_solution(m: &[Vec<i128>], x: &[BigRational], rhs: &[i128]) -> bool {
    (0..rhs.len()).all(|c| {
        let s: BigRational =
            m.iter().zip(x).fold(BigRational::zero(), |acc, (row, xi)| acc + xi * BigRational::from_integer(row[c].into()));
        s == BigRational::from_integer(rhs[c].into())
    })
}

pub fn is_one(x: &BigRational) -> bool {
    x.is_one()
}

// ---------------------------------------------------------------- smoothness

/// Whether n factors completely over `primes`, by trial division.
pub fn trial_smooth(mut n: u128, primes: &[u64]) -> bool {
    if n == 0 {
        return false;
    }
    for &p in primes {
        let p = p as u128;
        while n % p == 0 {
            n /= p;
        }
    }
    n == 1
}

pub fn small_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = 2u64;
    while out.len() < count {
        if (2..n).take_while(|p| p * p <= n).all(|p| n % p != 0) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Jacobi symbol by the definition through Euler's criterion on each prime
/// factor of n.
pub fn naive_jacobi(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1);
    let mut r = 1;
    let mut m = n;
    let mut p = 3;
    while m > 1 {
        if p * p > m {
            p = m;
        }
        while m % p == 0 {
            m /= p;
            r *= legendre_euler(a, p);
        }
        p += 2;
    }
    r
}

fn legendre_euler(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u128;
    if a == 0 {
        return 0;
    }
    let (mut b, mut e, mut acc) = (a, (p as u128 - 1) / 2, 1u128);
    let p = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}
