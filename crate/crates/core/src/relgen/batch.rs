//! Batch smoothness detection with product and remainder trees.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Levels of a product tree, leaves first.
fn product_tree(values: &[BigUint]) -> Vec<Vec<BigUint>> {
    let mut levels = vec![values.to_vec()];
    while levels.last().unwrap().len() > 1 {
        let prev = levels.last().unwrap();
        let next: Vec<BigUint> = prev
            .chunks(2)
            .map(|c| if c.len() == 2 { &c[0] * &c[1] } else { c[0].clone() })
            .collect();
        levels.push(next);
    }
    levels
}

fn product(values: &[BigUint]) -> BigUint {
    if values.is_empty() {
        return BigUint::one();
    }
    product_tree(values).pop().unwrap().pop().unwrap()
}

/// For every value v, the largest divisor of v composed of the given primes.
/// Zero maps to zero.
pub fn batch_smooth_parts(values: &[BigUint], primes: &[u64]) -> Vec<BigUint> {
    if values.is_empty() {
        return Vec::new();
    }
    let pvals: Vec<BigUint> = primes.iter().map(|&p| BigUint::from(p)).collect();
    let big_p = product(&pvals);
    // zeros would collapse the tree
    let safe: Vec<BigUint> = values
        .iter()
        .map(|v| if v.is_zero() { BigUint::one() } else { v.clone() })
        .collect();
    let tree = product_tree(&safe);
    let mut rems = vec![&big_p % &tree.last().unwrap()[0]];
    for level in tree.iter().rev().skip(1) {
        rems = level
            .iter()
            .enumerate()
            .map(|(i, node)| &rems[i / 2] % node)
            .collect();
    }
    values
        .iter()
        .zip(rems)
        .map(|(v, r)| {
            if v.is_zero() {
                return BigUint::zero();
            }
            // square until the exponent 2^e covers every prime multiplicity
            let mut y = r;
            let mut e = 1u64;
            while e < v.bits() {
                y = (&y * &y) % v;
                e *= 2;
            }
            if y.is_zero() {
                v.clone()
            } else {
                y.gcd(v)
            }
        })
        .collect()
}

/// Smoothness flags: true iff the value factors completely over `primes`.
pub fn batch_smooth(values: &[BigUint], primes: &[u64]) -> Vec<bool> {
    batch_smooth_parts(values, primes)
        .iter()
        .zip(values)
        .map(|(s, v)| !v.is_zero() && s == v)
        .collect()
}
