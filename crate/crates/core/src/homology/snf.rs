//! Smith normal form over the integers.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::SparseMatrix;

const DENSE_LIMIT: usize = 256;

/// Nonzero invariant factors `d_1 | d_2 | ...` of `m`, all positive.
pub fn smith_normal_form(m: &SparseMatrix) -> Vec<BigInt> {
    if m.rows() < DENSE_LIMIT && m.cols() < DENSE_LIMIT {
        return dense_invariants(m.to_dense_big());
    }
    let (units, rest) = match eliminate_units::<i64>(m) {
        Some(out) => out,
        None => eliminate_units::<BigInt>(m).expect("bigint elimination cannot overflow"),
    };
    let mut factors = vec![BigInt::one(); units];
    factors.extend(dense_invariants(rest));
    factors
}

/// Invariant factors of a dense matrix (row-major).
pub fn dense_invariants(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&m, t, |_, _| true) else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            for i in t + 1..rows {
                if Zero::is_zero(&m[i][t]) {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let delta = &q * &m[t][j];
                    m[i][j] -= delta;
                }
            }
            for j in t + 1..cols {
                if Zero::is_zero(&m[t][j]) {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let delta = &q * &row[t];
                    row[j] -= delta;
                }
            }
            let cross = |i: usize, j: usize| (i == t) != (j == t);
            match smallest_entry(&m, t, cross) {
                None => break,
                Some((pi, pj)) => {
                    m.swap(t, pi);
                    for row in m.iter_mut() {
                        row.swap(t, pj);
                    }
                }
            }
        }
        diag.push(m[t][t].abs());
    }
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

/// Smallest nonzero entry by magnitude in the block `[t.., t..]` among
/// positions accepted by `allow`; ties go to the first in row-major order.
fn smallest_entry(
    m: &[Vec<BigInt>],
    t: usize,
    allow: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if Zero::is_zero(v) || !allow(i, j) {
                continue;
            }
            if best.map_or(true, |(bi, bj)| v.abs() < m[bi][bj].abs()) {
                best = Some((i, j));
                if v.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

pub(crate) trait Coef: Clone + PartialEq {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn mul(&self, other: &Self) -> Option<Self>;
    /// `self - f * x`
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Coef for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(f.checked_mul(*x)?)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        Some(self - f * x)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Eliminates unit pivots with unimodular column operations. Returns the
/// number of pivots and the dense leftover block, or `None` on overflow.
pub(crate) fn eliminate_units<T: Coef>(m: &SparseMatrix) -> Option<(usize, Vec<Vec<BigInt>>)> {
    let mut cols: Vec<Vec<(u32, T)>> = m
        .columns()
        .iter()
        .map(|c| c.iter().map(|&(r, v)| (r, T::from_i64(v))).collect())
        .collect();
    let mut alive = vec![true; cols.len()];
    let mut row_occ: Vec<Vec<u32>> = vec![Vec::new(); m.rows()];
    for (j, c) in cols.iter().enumerate() {
        for &(r, _) in c {
            row_occ[r as usize].push(j as u32);
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = cols
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty())
        .map(|(j, c)| Reverse((c.len(), j as u32)))
        .collect();
    let mut stamp = vec![u32::MAX; cols.len()];
    let mut pivots = 0usize;
    while let Some(Reverse((len, c))) = heap.pop() {
        let cu = c as usize;
        if !alive[cu] || cols[cu].len() != len || len == 0 {
            continue;
        }
        let Some(&(r, ref u)) = cols[cu]
            .iter()
            .filter(|(_, v)| v.is_unit())
            .min_by_key(|(r, _)| (row_occ[*r as usize].len(), *r))
        else {
            continue;
        };
        let u = u.clone();
        let pivot_col = std::mem::take(&mut cols[cu]);
        alive[cu] = false;
        pivots += 1;
        let occ = std::mem::take(&mut row_occ[r as usize]);
        for &other in &occ {
            let o = other as usize;
            if o == cu || !alive[o] || stamp[o] == c {
                continue;
            }
            stamp[o] = c;
            let Ok(pos) = cols[o].binary_search_by_key(&r, |e| e.0) else {
                continue;
            };
            // Clear row r: col_o -= (a / u) col_c, and 1/u = u for units.
            let f = cols[o][pos].1.mul(&u)?;
            let merged = sub_scaled(&cols[o], &f, &pivot_col, |row| {
                row_occ[row as usize].push(other)
            })?;
            cols[o] = merged;
            if !cols[o].is_empty() {
                heap.push(Reverse((cols[o].len(), other)));
            }
        }
    }
    let rest_cols: Vec<usize> = (0..cols.len())
        .filter(|&j| alive[j] && !cols[j].is_empty())
        .collect();
    let mut rest_rows: Vec<u32> = rest_cols
        .iter()
        .flat_map(|&j| cols[j].iter().map(|e| e.0))
        .collect();
    rest_rows.sort_unstable();
    rest_rows.dedup();
    let mut dense = vec![vec![BigInt::zero(); rest_cols.len()]; rest_rows.len()];
    for (jj, &j) in rest_cols.iter().enumerate() {
        for (r, v) in &cols[j] {
            let ii = rest_rows.binary_search(r).expect("row present");
            dense[ii][jj] = v.to_big();
        }
    }
    Some((pivots, dense))
}

/// `a - f * b` on sorted sparse columns; `on_new` sees rows that appear in
/// the result but not in `a`.
fn sub_scaled<T: Coef>(
    a: &[(u32, T)],
    f: &T,
    b: &[(u32, T)],
    mut on_new: impl FnMut(u32),
) -> Option<Vec<(u32, T)>> {
    let zero = T::from_i64(0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(u32::MAX, |e| e.0);
        let rb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ra < rb {
            out.push(a[i].clone());
            i += 1;
        } else if rb < ra {
            let v = zero.sub_mul(f, &b[j].1)?;
            if !v.is_zero() {
                on_new(rb);
                out.push((rb, v));
            }
            j += 1;
        } else {
            let v = a[i].1.sub_mul(f, &b[j].1)?;
            if !v.is_zero() {
                out.push((ra, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn dense(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| big(r)).collect()
    }

    #[test]
    fn diagonal_is_normalized() {
        assert_eq!(dense_invariants(dense(&[&[2, 0], &[0, 3]])), big(&[1, 6]));
        assert_eq!(dense_invariants(dense(&[&[4, 0], &[0, 6]])), big(&[2, 12]));
    }

    #[test]
    fn zero_and_empty() {
        assert!(dense_invariants(dense(&[&[0, 0], &[0, 0]])).is_empty());
        assert!(dense_invariants(Vec::new()).is_empty());
        assert!(smith_normal_form(&SparseMatrix::zeros(3, 0)).is_empty());
    }

    #[test]
    fn non_diagonal_examples() {
        assert_eq!(dense_invariants(dense(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), big(&[2, 6, 12]));
        assert_eq!(dense_invariants(dense(&[&[6, 4], &[4, 6]])), big(&[2, 10]));
    }

    #[test]
    fn sparse_path_matches_dense() {
        // A long cycle boundary plus a 2x2 block with torsion, large enough for the sparse path.
        let n = 300;
        let mut m = SparseMatrix::zeros(n + 2, n + 2);
        for j in 0..n {
            m.push(j as u32, j, -1);
            m.push(((j + 1) % n) as u32, j, 1);
        }
        m.push(n as u32, n, 2);
        m.push(n as u32 + 1, n + 1, 3);
        m.normalize();
        let f = smith_normal_form(&m);
        let mut expected = vec![BigInt::one(); n];
        expected.push(BigInt::from(6));
        assert_eq!(f, expected);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big_entry = i64::MAX / 2 + 7;
        let mut m = SparseMatrix::zeros(300, 300);
        for j in 0..300 {
            m.push(j as u32, j, 1);
        }
        m.push(0, 1, big_entry);
        m.push(1, 0, big_entry);
        m.normalize();
        let (units, rest) = eliminate_units::<BigInt>(&m).unwrap();
        assert_eq!(units + dense_invariants(rest).len(), smith_normal_form(&m).len());
    }
}
