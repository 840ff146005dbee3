use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

/// Integer matrix stored as sorted columns of `(row, value)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.columns[j].push((i as u32, v));
                }
            }
        }
        m
    }

    /// Appends an entry; call [`normalize`](Self::normalize) afterwards.
    pub fn push(&mut self, row: u32, col: usize, value: i64) {
        self.columns[col].push((row, value));
    }

    /// Sorts each column, merges duplicate rows, drops zeros.
    pub fn normalize(&mut self) {
        for c in &mut self.columns {
            c.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(u32, i64)> = Vec::with_capacity(c.len());
            for &(r, v) in c.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *c = merged;
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<(u32, i64)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.columns[col]
            .binary_search_by_key(&(row as u32), |e| e.0)
            .map_or(0, |p| self.columns[col][p].1)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols()]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for &(r, v) in c {
                d[r as usize][j] = v;
            }
        }
        d
    }

    pub(crate) fn to_dense_big(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols()]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for &(r, v) in c {
                d[r as usize][j] = BigInt::from(v);
            }
        }
        d
    }

    /// `self * other`, or `None` if the shapes do not match or an entry overflows.
    pub fn mul(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        if self.cols() != other.rows {
            return None;
        }
        let mut out = SparseMatrix::zeros(self.rows, other.cols());
        for (j, col) in other.columns.iter().enumerate() {
            let mut acc: HashMap<u32, i64> = HashMap::new();
            for &(k, b) in col {
                for &(i, a) in &self.columns[k as usize] {
                    let e = acc.entry(i).or_insert(0);
                    *e = e.checked_add(a.checked_mul(b)?)?;
                }
            }
            out.columns[j] = acc.into_iter().filter(|e| e.1 != 0).collect();
            out.columns[j].sort_unstable_by_key(|e| e.0);
        }
        Some(out)
    }
}

/// Rank over the prime field `F_p`.
pub fn rank_mod_p(m: &SparseMatrix, p: u32) -> usize {
    assert!(p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0), "p must be prime");
    let p64 = p as i64;
    let mut pivot_of_row: HashMap<u32, Vec<(u32, i64)>> = HashMap::new();
    let mut rank = 0;
    for col in m.columns() {
        let mut c: Vec<(u32, i64)> = col
            .iter()
            .map(|&(r, v)| (r, v.rem_euclid(p64)))
            .filter(|e| e.1 != 0)
            .collect();
        while let Some(&(low, v)) = c.last() {
            match pivot_of_row.get(&low) {
                None => {
                    pivot_of_row.insert(low, c);
                    rank += 1;
                    break;
                }
                Some(piv) => {
                    let pv = piv.last().expect("pivot column nonempty").1;
                    let f = v * inverse_mod(pv, p64) % p64;
                    c = sub_scaled_mod(&c, f, piv, p64);
                }
            }
        }
    }
    rank
}

fn inverse_mod(a: i64, p: i64) -> i64 {
    let (mut result, mut base, mut e) = (1i64, a.rem_euclid(p), p - 2);
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn sub_scaled_mod(a: &[(u32, i64)], f: i64, b: &[(u32, i64)], p: i64) -> Vec<(u32, i64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(u32::MAX, |e| e.0);
        let rb = b.get(j).map_or(u32::MAX, |e| e.0);
        let (r, v) = if ra < rb {
            i += 1;
            (ra, a[i - 1].1)
        } else if rb < ra {
            j += 1;
            (rb, (-f * b[j - 1].1).rem_euclid(p))
        } else {
            i += 1;
            j += 1;
            (ra, (a[i - 1].1 - f * b[j - 1].1).rem_euclid(p))
        };
        if v != 0 {
            out.push((r, v));
        }
    }
    out
}
