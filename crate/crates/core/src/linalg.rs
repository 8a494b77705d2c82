//! Dense linear algebra over the prime field F_b.

use crate::algebra::Field;

/// Row-major dense matrix over F_b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FbMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FbMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, field.reduce(v as u64));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                let factor = self.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{v : A v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u8>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u8; self.cols];
            v[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        let b = self.field.order() as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(&a, &c)| a as u64 * c as u64).sum();
                (s % b) as u8
            })
            .collect()
    }

    /// Columns restricted to `keep`, in the given order.
    pub fn select_cols(&self, keep: &[usize]) -> FbMatrix {
        let mut out = FbMatrix::zeros(self.field, self.rows, keep.len());
        for i in 0..self.rows {
            for (k, &j) in keep.iter().enumerate() {
                out.set(i, k, self.get(i, j));
            }
        }
        out
    }

    pub fn transpose(&self) -> FbMatrix {
        let mut out = FbMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }
}

/// Row space built one vector at a time, kept in reduced echelon form.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    len: usize,
    rows: Vec<(usize, Vec<u8>)>,
}

impl EchelonBasis {
    pub fn new(field: Field, len: usize) -> Self {
        Self { field, len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    fn reduce(&self, v: &mut [u8]) {
        let f = self.field;
        for (p, row) in &self.rows {
            let c = v[*p];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        assert_eq!(v.len(), self.len);
        let f = self.field;
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = f.inv(v[p]).expect("nonzero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|&c| c == 0)
    }

    pub fn vectors(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    pub fn to_matrix(&self) -> FbMatrix {
        FbMatrix::from_rows(self.field, self.len, &self.vectors())
    }
}

/// Rank of a list of vectors of equal length.
pub fn rank_of(field: Field, vectors: &[Vec<u8>], len: usize) -> usize {
    FbMatrix::from_rows(field, len, vectors).rank()
}
