//! LLL reduction of integer row bases, exact vectors with floating-point
//! Gram-Schmidt data.

/// Exact dot product, `None` on overflow.
fn dot(a: &[i128], b: &[i128]) -> Option<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| acc.checked_add(x.checked_mul(*y)?))
}

struct Gso {
    mu: Vec<Vec<f64>>,
    r: Vec<f64>,
}

impl Gso {
    /// Recompute row k from exact inner products, assuming rows < k are current.
    fn row(&mut self, b: &[Vec<i128>], k: usize) -> Option<()> {
        let mut rk = vec![0f64; k];
        for j in 0..k {
            let mut x = dot(&b[k], &b[j])? as f64;
            for i in 0..j {
                x -= self.mu[j][i] * rk[i];
            }
            rk[j] = x;
            self.mu[k][j] = x / self.r[j];
        }
        let mut x = dot(&b[k], &b[k])? as f64;
        for j in 0..k {
            x -= self.mu[k][j] * rk[j];
        }
        self.r[k] = x;
        Some(())
    }
}

/// LLL-reduce the rows of `b` in place with parameter `delta`. The rows must
/// be linearly independent. Returns `None` if an entry overflows.
pub fn lll_reduce(b: &mut [Vec<i128>], delta: f64) -> Option<()> {
    let n = b.len();
    if n == 0 {
        return Some(());
    }
    let mut g = Gso { mu: vec![vec![0f64; n]; n], r: vec![0f64; n] };
    g.row(b, 0)?;
    let mut k = 1;
    while k < n {
        // size reduction, repeated until the recomputed coefficients are small
        for _ in 0..64 {
            g.row(b, k)?;
            let mut changed = false;
            for j in (0..k).rev() {
                let q = g.mu[k][j].round();
                if q == 0.0 || g.mu[k][j].abs() <= 0.51 {
                    continue;
                }
                if q.abs() > 1e30 {
                    return None;
                }
                let qi = q as i128;
                let (head, tail) = b.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x = x.checked_sub(qi.checked_mul(*y)?)?;
                }
                for i in 0..j {
                    g.mu[k][i] -= q * g.mu[j][i];
                }
                g.mu[k][j] -= q;
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let m = g.mu[k][k - 1];
        if g.r[k] < (delta - m * m) * g.r[k - 1] {
            b.swap(k, k - 1);
            if k == 1 {
                g.row(b, 0)?;
            } else {
                k -= 1;
            }
        } else {
            k += 1;
        }
    }
    Some(())
}

/// A reduced basis of the integer relations among `rows`: vectors c with
/// Σ c_i rows_i = 0, as many as `rows.len() - rank`. Uses the embedding
/// (C·rows_i | e_i) with a growing weight C until enough reduced vectors have
/// a vanishing first part.
pub fn short_kernel(rows: &[Vec<i128>], rank: usize) -> Option<Vec<Vec<i128>>> {
    let m = rows.len();
    let want = m.checked_sub(rank)?;
    if want == 0 {
        return Some(Vec::new());
    }
    let n = rows.first().map_or(0, |r| r.len());
    for shift in [16u32, 28, 40] {
        let c = 1i128 << shift;
        let mut basis: Vec<Vec<i128>> = Vec::with_capacity(m);
        for (i, r) in rows.iter().enumerate() {
            let mut v = Vec::with_capacity(n + m);
            for x in r {
                v.push(x.checked_mul(c)?);
            }
            v.extend((0..m).map(|j| i128::from(i == j)));
            basis.push(v);
        }
        if lll_reduce(&mut basis, 0.99).is_none() {
            continue;
        }
        let kernel: Vec<Vec<i128>> =
            basis.into_iter().filter(|v| v[..n].iter().all(|&x| x == 0)).map(|v| v[n..].to_vec()).collect();
        if kernel.len() == want {
            return Some(kernel);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn gram_det(v: &[Vec<i128>]) -> BigInt {
        let g: Vec<Vec<BigInt>> = v.iter().map(|a| v.iter().map(|b| BigInt::from(dot(a, b).unwrap())).collect()).collect();
        crate::exactla::bareiss(&g).1
    }

    #[test]
    fn reduces_classic_example() {
        let mut b = vec![vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]];
        let before = gram_det(&b);
        lll_reduce(&mut b, 0.75).unwrap();
        assert_eq!(gram_det(&b), before);
        assert!(b.iter().all(|v| dot(v, v).unwrap() <= 9), "{b:?}");
    }

    #[test]
    fn kernel_of_rank_one() {
        let rows = vec![vec![1, 2], vec![2, 4], vec![3, 6]];
        let k = short_kernel(&rows, 1).unwrap();
        assert_eq!(k.len(), 2);
        for c in &k {
            for col in 0..2 {
                assert_eq!(c.iter().zip(&rows).map(|(x, r)| x * r[col]).sum::<i128>(), 0);
            }
        }
        // the relation lattice is spanned by (2,-1,0) and (3,0,-1)
        assert_eq!(gram_det(&k), gram_det(&[vec![2, -1, 0], vec![3, 0, -1]]));
    }
}
