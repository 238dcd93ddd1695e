//! Structured elimination on unit pivots.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{normalize_row, SparseIntMatrix, SparseRow};
use crate::ntkernel::FixedReal;

/// One eliminated column: the pivot row (entry ±1 at `col`) as it stood when
/// it was removed.
#[derive(Clone, Debug)]
struct Pivot {
    col: usize,
    unit: BigInt,
    row: SparseRow,
    real: Option<FixedReal>,
}

#[derive(Clone, Debug)]
pub struct Elimination {
    /// Surviving rows over the surviving columns, renumbered by `colmap`.
    pub reduced: SparseIntMatrix,
    /// reduced column index -> original column index
    pub colmap: Vec<usize>,
    /// Columns without any entry; the lattice is not of full rank if non-empty.
    pub zero_cols: Vec<usize>,
    /// Reals of rows that became zero (units in the real case).
    pub null_reals: Vec<FixedReal>,
    pub null_rows: usize,
    pivots: Vec<Pivot>,
}

impl Elimination {
    pub fn pivots(&self) -> usize {
        self.pivots.len()
    }

    /// Rewrite a vector over the original columns into reduced coordinates by
    /// subtracting the recorded pivot rows. Returns `None` if the vector has an
    /// entry on a zero column. The real is adjusted by the same combination.
    pub fn transport(&self, v: &SparseRow, real: Option<&FixedReal>) -> Option<(SparseRow, Option<FixedReal>)> {
        let mut cur: HashMap<usize, BigInt> = v.iter().filter(|e| !e.1.is_zero()).cloned().collect();
        let mut real = real.cloned();
        for p in &self.pivots {
            let Some(x) = cur.get(&p.col).cloned() else { continue };
            let k = &x * &p.unit;
            for (c, y) in &p.row {
                let e = cur.entry(*c).or_insert_with(BigInt::zero);
                *e -= &k * y;
                if e.is_zero() {
                    cur.remove(c);
                }
            }
            if let (Some(r), Some(pr)) = (real.as_mut(), p.real.as_ref()) {
                *r = r.sub(&pr.mul_int(&k));
            }
        }
        let inv: HashMap<usize, usize> = self.colmap.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut out = Vec::with_capacity(cur.len());
        for (c, x) in cur {
            out.push((*inv.get(&c)?, x));
        }
        Some((normalize_row(out), real))
    }
}

/// Eliminate columns of weight at most 2 on unit pivots, drop zero columns and
/// prune zero and duplicate rows.
pub fn graph_eliminate(m: &SparseIntMatrix) -> Elimination {
    graph_eliminate_with(m, 2)
}

/// As `graph_eliminate`, pivoting on unit entries in columns of weight up to
/// `max_weight`, choosing the lightest row.
pub fn graph_eliminate_with(m: &SparseIntMatrix, max_weight: usize) -> Elimination {
    graph_eliminate_capped(m, max_weight, None)
}

/// Limits on what a pivot may produce: error bound of a row's real and the
/// largest entry of a row.
#[derive(Clone, Copy, Debug)]
pub struct GrowthCap {
    pub err: f64,
    pub entry: u64,
}

impl GrowthCap {
    fn admits(&self, row: &SparseRow, real: Option<&FixedReal>) -> bool {
        let small = row.iter().all(|(_, v)| v.magnitude() <= &self.entry.into());
        small && real.is_none_or(|r| r.err_f64() <= self.err)
    }
}

/// As `graph_eliminate_with`, skipping any pivot whose result would break `cap`.
pub fn graph_eliminate_capped(m: &SparseIntMatrix, max_weight: usize, cap: Option<GrowthCap>) -> Elimination {
    let n = m.ncols();
    let mut rows: Vec<Option<SparseRow>> = m.rows().iter().cloned().map(Some).collect();
    let mut reals: Option<Vec<FixedReal>> = m.reals().map(|r| r.to_vec());
    let mut colrows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r.as_ref().unwrap() {
            colrows[*c].insert(i);
        }
    }
    let mut alive_col = vec![true; n];
    let mut pivots = Vec::new();
    let mut null_reals = Vec::new();
    let mut null_rows = 0;

    prune_duplicates(&mut rows, &mut reals, &mut colrows, &mut null_reals, &mut null_rows);
    loop {
        let mut progress = false;
        for c in 0..n {
            if !alive_col[c] {
                continue;
            }
            let w = colrows[c].len();
            if w == 0 || w > max_weight {
                continue;
            }
            let members: Vec<usize> = colrows[c].iter().copied().collect();
            let entry = |rows: &Vec<Option<SparseRow>>, r: usize| -> BigInt { get(rows[r].as_ref().unwrap(), c) };
            let mut unit_rows: Vec<usize> = members.iter().copied().filter(|&r| entry(&rows, r).abs().is_one()).collect();
            if unit_rows.is_empty() && w == 2 {
                let (r1, r2) = (members[0], members[1]);
                let (a, b) = (entry(&rows, r1), entry(&rows, r2));
                let e = a.extended_gcd(&b);
                if !e.gcd.abs().is_one() {
                    continue;
                }
                // [u v; -b/g a/g] is unimodular and sends (a, b) to (g, 0)
                let (u, v, g) = (e.x, e.y, e.gcd);
                let row1 = rows[r1].clone().unwrap();
                let row2 = rows[r2].clone().unwrap();
                let new1 = combine(&u, &row1, &v, &row2);
                let new2 = combine(&(-(&b / &g)), &row1, &(&a / &g), &row2);
                let new_reals = reals.as_ref().map(|rs| {
                    let (x1, x2) = (&rs[r1], &rs[r2]);
                    (x1.mul_int(&u).add(&x2.mul_int(&v)), x1.mul_int(&(-(&b / &g))).add(&x2.mul_int(&(&a / &g))))
                });
                if let Some(cap) = &cap {
                    let (x1, x2) = new_reals.as_ref().map_or((None, None), |(x, y)| (Some(x), Some(y)));
                    if !cap.admits(&new1, x1) || !cap.admits(&new2, x2) {
                        continue;
                    }
                }
                if let (Some(rs), Some((x1, x2))) = (reals.as_mut(), new_reals) {
                    rs[r1] = x1;
                    rs[r2] = x2;
                }
                replace_row(&mut rows, &mut colrows, r1, new1);
                replace_row(&mut rows, &mut colrows, r2, new2);
                unit_rows = vec![r1];
            }
            let Some(&pr) = unit_rows.iter().min_by_key(|&&r| rows[r].as_ref().unwrap().len()) else {
                continue;
            };
            let prow = rows[pr].clone().unwrap();
            let unit = get(&prow, c);
            let preal = reals.as_ref().map(|rs| rs[pr].clone());
            if let Some(cap) = &cap {
                let fits = colrows[c].iter().filter(|&&r| r != pr).all(|&r| {
                    let k = get(rows[r].as_ref().unwrap(), c) * &unit;
                    let newr = combine(&BigInt::one(), rows[r].as_ref().unwrap(), &(-&k), &prow);
                    let x = reals.as_ref().zip(preal.as_ref()).map(|(rs, p)| rs[r].sub(&p.mul_int(&k)));
                    cap.admits(&newr, x.as_ref())
                });
                if !fits {
                    continue;
                }
            }
            for &r in colrows[c].clone().iter() {
                if r == pr {
                    continue;
                }
                let k = get(rows[r].as_ref().unwrap(), c) * &unit;
                let newr = combine(&BigInt::one(), rows[r].as_ref().unwrap(), &(-&k), &prow);
                if let (Some(rs), Some(p)) = (reals.as_mut(), preal.as_ref()) {
                    rs[r] = rs[r].sub(&p.mul_int(&k));
                }
                replace_row(&mut rows, &mut colrows, r, newr);
                if rows[r].as_ref().unwrap().is_empty() {
                    rows[r] = None;
                    null_rows += 1;
                    if let Some(rs) = reals.as_ref() {
                        null_reals.push(rs[r].clone());
                    }
                }
            }
            for (cc, _) in &prow {
                colrows[*cc].remove(&pr);
            }
            rows[pr] = None;
            alive_col[c] = false;
            pivots.push(Pivot { col: c, unit, row: prow, real: preal });
            progress = true;
        }
        if !progress {
            break;
        }
        prune_duplicates(&mut rows, &mut reals, &mut colrows, &mut null_reals, &mut null_rows);
    }

    let zero_cols: Vec<usize> = (0..n).filter(|&c| alive_col[c] && colrows[c].is_empty()).collect();
    let colmap: Vec<usize> = (0..n).filter(|&c| alive_col[c] && !colrows[c].is_empty()).collect();
    let inv: HashMap<usize, usize> = colmap.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut out_rows = Vec::new();
    let mut out_reals = reals.as_ref().map(|_| Vec::new());
    for (i, r) in rows.iter().enumerate() {
        let Some(r) = r else { continue };
        out_rows.push(r.iter().map(|(c, v)| (inv[c], v.clone())).collect());
        if let (Some(o), Some(rs)) = (out_reals.as_mut(), reals.as_ref()) {
            o.push(rs[i].clone());
        }
    }
    Elimination {
        reduced: SparseIntMatrix::from_rows(colmap.len(), out_rows, out_reals),
        colmap,
        zero_cols,
        null_reals,
        null_rows,
        pivots,
    }
}

fn get(r: &SparseRow, c: usize) -> BigInt {
    r.binary_search_by_key(&c, |e| e.0).map_or_else(|_| BigInt::zero(), |i| r[i].1.clone())
}

fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out: SparseRow = Vec::with_capacity(x.len() + y.len());
    out.extend(x.iter().map(|(c, v)| (*c, a * v)));
    out.extend(y.iter().map(|(c, v)| (*c, b * v)));
    normalize_row(out)
}

fn replace_row(rows: &mut [Option<SparseRow>], colrows: &mut [BTreeSet<usize>], i: usize, new: SparseRow) {
    if let Some(old) = &rows[i] {
        for (c, _) in old {
            colrows[*c].remove(&i);
        }
    }
    for (c, _) in &new {
        colrows[*c].insert(i);
    }
    rows[i] = Some(new);
}

/// Turn rows equal to an earlier row (up to sign) into zero rows.
fn prune_duplicates(
    rows: &mut [Option<SparseRow>],
    reals: &mut Option<Vec<FixedReal>>,
    colrows: &mut [BTreeSet<usize>],
    null_reals: &mut Vec<FixedReal>,
    null_rows: &mut usize,
) {
    let mut seen: HashMap<SparseRow, usize> = HashMap::new();
    for i in 0..rows.len() {
        let Some(r) = rows[i].clone() else { continue };
        if r.is_empty() {
            rows[i] = None;
            *null_rows += 1;
            if let Some(rs) = reals.as_ref() {
                null_reals.push(rs[i].clone());
            }
            continue;
        }
        let negate = r[0].1.is_negative();
        let key: SparseRow = if negate { r.iter().map(|(c, v)| (*c, -v)).collect() } else { r.clone() };
        match seen.get(&key) {
            Some(&j) => {
                if let Some(rs) = reals.as_ref() {
                    let jneg = rows[j].as_ref().unwrap()[0].1.is_negative();
                    let x = if negate == jneg { rs[i].sub(&rs[j]) } else { rs[i].add(&rs[j]) };
                    null_reals.push(x);
                }
                for (c, _) in &r {
                    colrows[*c].remove(&i);
                }
                rows[i] = None;
                *null_rows += 1;
            }
            None => {
                seen.insert(key, i);
            }
        }
    }
    let _ = reals;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{hnf_with_det, rank_exact};

    #[test]
    fn zero_column_dropped() {
        let m = SparseIntMatrix::from_dense(&[vec![2, 0, 4], vec![4, 0, 2], vec![6, 0, 10]]);
        let e = graph_eliminate(&m);
        assert_eq!(e.zero_cols, vec![1]);
        assert_eq!(e.reduced.nrows(), 3);
        assert_eq!(e.colmap, vec![0, 2]);
    }

    #[test]
    fn weight_one_unit_column() {
        // column 2 only in row 0 with entry 1
        let m = SparseIntMatrix::from_dense(&[vec![3, 1, 1], vec![2, 5, 0], vec![4, 1, 0]]);
        let e = graph_eliminate(&m);
        assert!(!e.colmap.contains(&2));
        // column 1 then has weight 2 with a unit entry, leaving one 1x1 block
        assert_eq!(e.pivots(), 2);
        assert_eq!(e.reduced.nrows(), 1);
        assert_eq!(e.reduced.row(0)[0].1.abs(), BigInt::from(18));
    }

    #[test]
    fn duplicate_rows_give_null_reals() {
        let m = SparseIntMatrix::from_rows(
            2,
            vec![vec![(0, BigInt::from(3)), (1, BigInt::from(5))], vec![(0, BigInt::from(-3)), (1, BigInt::from(-5))]],
            Some(vec![FixedReal::from_f64(1.5), FixedReal::from_f64(2.0)]),
        );
        let e = graph_eliminate(&m);
        assert_eq!(e.null_rows, 1);
        assert!((e.null_reals[0].to_f64() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn det_preserved_on_fixture() {
        let m = SparseIntMatrix::from_dense(&[
            vec![1, 2, 0, 0, 3, 0],
            vec![0, 1, 1, 0, 0, 2],
            vec![2, 0, 3, 1, 0, 0],
            vec![0, 0, 0, 2, 1, 1],
            vec![3, 1, 0, 0, 0, 4],
            vec![0, 2, 0, 1, 1, 0],
            vec![1, 0, 1, 0, 2, 1],
            vec![0, 3, 2, 0, 0, 1],
        ]);
        let (_, d0) = hnf_with_det(&m).unwrap();
        let e = graph_eliminate(&m);
        assert!(e.zero_cols.is_empty());
        assert_eq!(rank_exact(&e.reduced), e.reduced.ncols());
        let (_, d1) = hnf_with_det(&e.reduced).unwrap();
        assert_eq!(d0, d1);
    }
}
