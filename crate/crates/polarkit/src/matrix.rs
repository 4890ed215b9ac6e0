//! Dense matrices and row reduction over a small finite field.
//!
//! Vectors are coordinate slices `&[u16]`; matrices act on column vectors,
//! so `apply(M, x)[i] = sum_j M[i][j] x[j]` and composition corresponds to
//! the matrix product.

use std::sync::Arc;

use crate::gf::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub field: Arc<Field>,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u16>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} over GF({})", self.rows, self.cols, self.field.size())?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zero(field: Arc<Field>, rows: usize, cols: usize) -> Mat {
        Mat {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, rows: &[Vec<u16>]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Mat {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u16] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<u16>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let f = &self.field;
        let mut out = Mat::zero(self.field.clone(), self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs[(k, j)];
                    if b != 0 {
                        out[(i, j)] = f.add(out[(i, j)], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// y = M x (column-vector convention).
    pub fn apply(&self, x: &[u16]) -> Vec<u16> {
        assert_eq!(x.len(), self.cols);
        let f = &self.field;
        let mut out = vec![0u16; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0u16;
            for j in 0..self.cols {
                if row[j] != 0 && x[j] != 0 {
                    acc = f.add(acc, f.mul(row[j], x[j]));
                }
            }
            out[i] = acc;
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot column list.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self[(i, c)] != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self[(r, c)]);
            for j in c..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i != r && self[(i, c)] != 0 {
                    let factor = self[(i, c)];
                    for j in c..self.cols {
                        let sub = f.mul(factor, self[(r, j)]);
                        self[(i, j)] = f.sub(self[(i, j)], sub);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let t = self[(a, j)];
            self[(a, j)] = self[(b, j)];
            self[(b, j)] = t;
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(self.field.clone(), n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = 1;
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut out = Mat::zero(self.field.clone(), n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(out)
    }

    /// Basis of the right kernel {x : M x = 0}, one vector per row.
    pub fn right_kernel(&self) -> Vec<Vec<u16>> {
        let f = &self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![0u16; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[(r, free)]);
            }
            basis.push(v);
        }
        basis
    }

    /// One solution x of M x = b, if consistent.
    pub fn solve(&self, b: &[u16]) -> Option<Vec<u16>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zero(self.field.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![0u16; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(r, self.cols)];
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = u16;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &u16 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u16 {
        &mut self.data[r * self.cols + c]
    }
}

/// Componentwise sum of two vectors.
pub fn vec_add(f: &Field, a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

/// Scalar multiple of a vector.
pub fn vec_scale(f: &Field, c: u16, a: &[u16]) -> Vec<u16> {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let f = Field::new(2, 2).unwrap();
        let m = Mat::from_rows(
            f.clone(),
            &[vec![1, 2, 0], vec![0, 1, 3], vec![2, 0, 1]],
        );
        let inv = m.inverse().expect("invertible");
        assert_eq!(m.mul(&inv), Mat::identity(f, 3));
    }

    #[test]
    fn kernel_and_solve() {
        let f = Field::new(2, 1).unwrap();
        let m = Mat::from_rows(f, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let ker = m.right_kernel();
        assert_eq!(ker.len(), 1);
        assert_eq!(m.apply(&ker[0]), vec![0, 0]);
        let x = m.solve(&[1, 0]).unwrap();
        assert_eq!(m.apply(&x), vec![1, 0]);
    }

    #[test]
    fn rref_is_idempotent() {
        let f = Field::new(2, 1).unwrap();
        let mut m = Mat::from_rows(
            f,
            &[vec![1, 1, 1, 0], vec![1, 0, 1, 1], vec![0, 1, 0, 1]],
        );
        m.rref();
        let snapshot = m.clone();
        m.rref();
        assert_eq!(m, snapshot);
    }
}
