//! Exact integer matrices with arbitrary-precision entries.
//!
//! Matrices smaller than 64x64 are stored densely; everything else keeps a
//! sparse triplet map. Boundary matrices of nerves and tuple complexes are
//! sparse, while Smith-form elimination densifies small blocks, so both
//! representations earn their keep.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

const DENSE_LIMIT: usize = 64;

#[derive(Clone)]
enum Storage {
    Dense(Vec<BigInt>),
    Sparse(BTreeMap<(usize, usize), BigInt>),
}

/// Dense-or-sparse matrix over the integers. Entries are `BigInt`; no
/// fixed-width overflow is possible anywhere in the crate.
#[derive(Clone)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Storage,
}

impl IntMatrix {
    fn prefer_dense(rows: usize, cols: usize) -> bool {
        rows < DENSE_LIMIT && cols < DENSE_LIMIT
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        let data = if Self::prefer_dense(rows, cols) {
            Storage::Dense(vec![BigInt::zero(); rows * cols])
        } else {
            Storage::Sparse(BTreeMap::new())
        };
        IntMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if !v.is_zero() {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Standard basis column vector e_i of length n.
    pub fn basis_column(n: usize, i: usize) -> Self {
        let mut m = Self::zero(n, 1);
        m.set(i, 0, BigInt::one());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        match &self.data {
            Storage::Dense(v) => v[r * self.cols + c].clone(),
            Storage::Sparse(map) => map.get(&(r, c)).cloned().unwrap_or_else(BigInt::zero),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        match &mut self.data {
            Storage::Dense(d) => d[r * self.cols + c] = v,
            Storage::Sparse(map) => {
                if v.is_zero() {
                    map.remove(&(r, c));
                } else {
                    map.insert((r, c), v);
                }
            }
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    /// Nonzero entries in row-major order.
    pub fn nonzeros(&self) -> Vec<(usize, usize, BigInt)> {
        match &self.data {
            Storage::Dense(d) => {
                let mut out = Vec::new();
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        let v = &d[i * self.cols + j];
                        if !v.is_zero() {
                            out.push((i, j, v.clone()));
                        }
                    }
                }
                out
            }
            Storage::Sparse(map) => map.iter().map(|(&(i, j), v)| (i, j, v.clone())).collect(),
        }
    }

    pub fn nnz(&self) -> usize {
        match &self.data {
            Storage::Dense(d) => d.iter().filter(|v| !v.is_zero()).count(),
            Storage::Sparse(map) => map.len(),
        }
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.nnz() == 0
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for (i, j, v) in self.nonzeros() {
            out.set(j, i, v);
        }
        out
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        let mut out = self.clone();
        for (i, j, v) in rhs.nonzeros() {
            out.add_at(i, j, &v);
        }
        out
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        let mut out = self.clone();
        for (i, j, v) in rhs.nonzeros() {
            out.add_at(i, j, &(-v));
        }
        out
    }

    pub fn neg(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for (i, j, v) in self.nonzeros() {
            out.set(i, j, -v);
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, self.cols);
        if c.is_zero() {
            return out;
        }
        for (i, j, v) in self.nonzeros() {
            out.set(i, j, v * c);
        }
        out
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        // Group rhs nonzeros by row once, then accumulate per lhs entry.
        let mut rhs_rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); rhs.rows];
        for (k, j, v) in rhs.nonzeros() {
            rhs_rows[k].push((j, v));
        }
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (i, k, v) in self.nonzeros() {
            for (j, w) in &rhs_rows[k] {
                let e = acc.entry((i, *j)).or_insert_with(BigInt::zero);
                *e += &v * w;
            }
        }
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for ((i, j), v) in acc {
            if !v.is_zero() {
                out.set(i, j, v);
            }
        }
        out
    }

    /// Column j as a rows x 1 matrix.
    pub fn column(&self, j: usize) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, 1);
        for i in 0..self.rows {
            let v = self.get(i, j);
            if !v.is_zero() {
                out.set(i, 0, v);
            }
        }
        out
    }

    /// Glue columns of `rhs` to the right of `self`.
    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows, "shape mismatch in hstack");
        let mut out = IntMatrix::zero(self.rows, self.cols + rhs.cols);
        for (i, j, v) in self.nonzeros() {
            out.set(i, j, v);
        }
        for (i, j, v) in rhs.nonzeros() {
            out.set(i, j + self.cols, v);
        }
        out
    }

    /// Sub-block of rows `r0..r1`, all columns.
    pub fn row_block(&self, r0: usize, r1: usize) -> IntMatrix {
        assert!(r0 <= r1 && r1 <= self.rows);
        let mut out = IntMatrix::zero(r1 - r0, self.cols);
        for (i, j, v) in self.nonzeros() {
            if i >= r0 && i < r1 {
                out.set(i - r0, j, v);
            }
        }
        out
    }

    /// Sub-block of columns `c0..c1`, all rows.
    pub fn col_block(&self, c0: usize, c1: usize) -> IntMatrix {
        assert!(c0 <= c1 && c1 <= self.cols);
        let mut out = IntMatrix::zero(self.rows, c1 - c0);
        for (i, j, v) in self.nonzeros() {
            if j >= c0 && j < c1 {
                out.set(i, j - c0, v);
            }
        }
        out
    }

    /// First entry where the two matrices differ, as (row, col, lhs, rhs).
    pub fn first_difference(&self, rhs: &IntMatrix) -> Option<(usize, usize, BigInt, BigInt)> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Some((0, 0, BigInt::from(self.rows as i64), BigInt::from(rhs.rows as i64)));
        }
        let mut keys: Vec<(usize, usize)> = Vec::new();
        for (i, j, _) in self.nonzeros() {
            keys.push((i, j));
        }
        for (i, j, _) in rhs.nonzeros() {
            keys.push((i, j));
        }
        keys.sort_unstable();
        keys.dedup();
        for (i, j) in keys {
            let a = self.get(i, j);
            let b = rhs.get(i, j);
            if a != b {
                return Some((i, j, a, b));
            }
        }
        None
    }

    pub fn max_abs(&self) -> BigInt {
        self.nonzeros()
            .into_iter()
            .map(|(_, _, v)| v.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl PartialEq for IntMatrix {
    fn eq(&self, other: &Self) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.first_difference(other).is_none()
    }
}

impl Eq for IntMatrix {}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        if self.rows * self.cols <= 400 {
            for i in 0..self.rows {
                let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        } else {
            writeln!(f, "  nnz = {}", self.nnz())?;
        }
        write!(f, "]")
    }
}
