//! Dense linear algebra over the coefficient field.
//!
//! Used wherever a computation is linear over k but not over the base
//! algebra: invariants, equivariant maps, dimensions of cohomology.

use std::collections::BTreeMap;

use crate::ring::{Field, Scalar};

/// Row-reduces `rows` in place and returns the pivot column of each
/// nonzero row, in order.
fn rref(rows: &mut Vec<Vec<Scalar>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    if !rows[r][j].is_zero() {
                        let t = &rows[r][j] * &f;
                        rows[i][j] = &rows[i][j] - &t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// A dense matrix over a field, stored as rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KMatrix {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Scalar>>,
}

impl KMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        KMatrix {
            field,
            rows,
            cols,
            data: vec![vec![field.zero(); cols]; rows],
        }
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zero(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                m.data[r][c] = x.clone();
            }
        }
        m
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        self.data.iter().map(|row| row[c].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        rref(&mut rows, self.cols).len()
    }

    /// A basis of `{ x : M·x = 0 }`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut rows = self.data.clone();
        let pivots = rref(&mut rows, self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&rows[r][f];
                }
                v
            })
            .collect()
    }

    /// Some `x` with `M·x = b`.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut rows: Vec<Vec<Scalar>> = self
            .data
            .iter()
            .zip(b)
            .map(|(r, x)| {
                let mut r = r.clone();
                r.push(x.clone());
                r
            })
            .collect();
        let pivots = rref(&mut rows, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rows[r][self.cols].clone();
        }
        Some(x)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }
}

/// Columns given as sparse maps from arbitrary ordered keys; the row set is
/// the union of keys.
pub fn keyed_matrix<K: Ord + Clone>(field: Field, columns: &[BTreeMap<K, Scalar>]) -> KMatrix {
    let mut keys: BTreeMap<K, usize> = BTreeMap::new();
    for col in columns {
        for k in col.keys() {
            let next = keys.len();
            keys.entry(k.clone()).or_insert(next);
        }
    }
    let mut m = KMatrix::zero(field, keys.len(), columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (k, v) in col {
            m.data[keys[k]][c] = v.clone();
        }
    }
    m
}

/// Rank of a list of vectors.
pub fn rank_of(vectors: &[Vec<Scalar>]) -> usize {
    let n = vectors.first().map_or(0, |v| v.len());
    let mut rows = vectors.to_vec();
    rref(&mut rows, n).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_and_solve() {
        let f = Field::Rationals;
        let s = |n: i64| f.from_i64(n);
        let m = KMatrix::from_columns(f, 2, &[vec![s(1), s(2)], vec![s(2), s(4)], vec![s(0), s(1)]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
        let x = m.solve(&[s(3), s(7)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![s(3), s(7)]);
    }

    #[test]
    fn inconsistent_system() {
        let f = Field::prime(2).unwrap();
        let m = KMatrix::from_columns(f, 2, &[vec![f.one(), f.one()]]);
        assert!(m.solve(&[f.one(), f.zero()]).is_none());
    }
}
