//! Dense matrices over either scalar backend.

mod block;
mod numeric;

pub use block::{block_residual_log2, is_block_lower_triangular, snap_to_blocks, BlockStructure};
pub use numeric::{
    canonical_span, consistent_solve, deviation_log2, eigenvalues, expm, max_log2, nullspace_numeric, numeric_rank,
    rank_profile, NumericRank,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::Field;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

fn mismatch(what: &str, a: (usize, usize), b: (usize, usize)) -> Error {
    Error::DimensionMismatch(format!("{what}: {}x{} vs {}x{}", a.0, a.1, b.0, b.1))
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are `cols`.
    pub fn from_cols(cols: &[Vec<T>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for col in cols {
                data.push(col[i].clone());
            }
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn block(&self, r0: usize, c0: usize, r: usize, c: usize) -> Self {
        Matrix::from_fn(r, c, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix<T>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn hstack(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(mismatch("hstack", self.shape(), rhs.shape()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(mismatch("vstack", self.shape(), rhs.shape()));
        }
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        })
    }
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        Matrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(mismatch("add", self.shape(), rhs.shape()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(mismatch("sub", self.shape(), rhs.shape()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(mismatch("mul", self.shape(), rhs.shape()));
        }
        let mut out = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                out.push(acc);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if self.cols != v.len() {
            return Err(mismatch("mul_vec", self.shape(), (v.len(), 1)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect())
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    /// Exact entrywise equality via `a - b == 0`.
    pub fn field_eq(&self, rhs: &Self) -> bool {
        self.shape() == rhs.shape()
            && self.data.iter().zip(&rhs.data).all(|(a, b)| a.sub(b).is_zero())
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut acc = Matrix::identity(self.rows);
        let mut sq = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Inverse by Gauss-Jordan elimination. `negligible` decides when a pivot
    /// candidate counts as zero.
    pub fn inverse_with(&self, negligible: impl Fn(&T) -> bool) -> Result<Self> {
        if !self.is_square() {
            return Err(mismatch("inverse of non-square", self.shape(), self.shape()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::<T>::identity(n);
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| {
                    a.get(i, c)
                        .pivot_weight()
                        .partial_cmp(&a.get(j, c).pivot_weight())
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(j.cmp(&i))
                })
                .expect("nonempty range");
            if a.get(p, c).is_zero() || negligible(a.get(p, c)) {
                return Err(Error::Singular);
            }
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pinv = a.get(c, c).inv()?;
            a.scale_row(c, &pinv);
            inv.scale_row(c, &pinv);
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                a.axpy_row(r, c, &f);
                inv.axpy_row(r, c, &f);
            }
        }
        Ok(inv)
    }

    /// Exact inverse (zero pivots detected by [`Field::is_zero`]).
    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with(|_| false)
    }

    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(mismatch("determinant of non-square", self.shape(), self.shape()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
                return Ok(T::zero());
            };
            if p != c {
                a.swap_rows(p, c);
                det = det.neg();
            }
            let pv = a.get(c, c).clone();
            det = det.mul(&pv);
            let pinv = pv.inv()?;
            for r in c + 1..n {
                if a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).mul(&pinv);
                a.axpy_row(r, c, &f);
            }
        }
        Ok(det)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: &T) {
        for j in 0..self.cols {
            let v = self.get(r, j).mul(s);
            self.set(r, j, v);
        }
    }

    /// `row[r] -= f * row[src]`.
    fn axpy_row(&mut self, r: usize, src: usize, f: &T) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = self.get(r, j).sub(&f.mul(s));
            self.set(r, j, v);
        }
    }

    /// Reduced row echelon form with exact zero tests. Returns the reduced
    /// matrix and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..self.cols {
            if row == self.rows {
                break;
            }
            let best = (row..self.rows)
                .filter(|&i| !a.get(i, c).is_zero())
                .max_by(|&i, &j| {
                    a.get(i, c)
                        .pivot_weight()
                        .partial_cmp(&a.get(j, c).pivot_weight())
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(j.cmp(&i))
                });
            let Some(p) = best else { continue };
            a.swap_rows(p, row);
            let pinv = a.get(row, c).inv().expect("nonzero pivot");
            a.scale_row(row, &pinv);
            for r in 0..self.rows {
                if r != row && !a.get(r, c).is_zero() {
                    let f = a.get(r, c).clone();
                    a.axpy_row(r, row, &f);
                }
            }
            pivots.push(c);
            row += 1;
        }
        (a, pivots)
    }
}

/// Exact rank and a nullspace basis (one vector per free column).
pub fn exact_rank_nullspace<T: Field>(m: &Matrix<T>) -> (usize, Vec<Vec<T>>) {
    let (r, pivots) = m.rref();
    let rank = pivots.len();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![T::zero(); m.cols];
            v[f] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = r.get(i, f).neg();
            }
            v
        })
        .collect();
    (rank, basis)
}

pub fn exact_rank<T: Field>(m: &Matrix<T>) -> usize {
    m.rref().1.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{ExactComplex, ExactReal};

    fn ec(re: ExactReal, im: ExactReal) -> ExactComplex {
        ExactComplex::new(re, im)
    }

    fn er(v: i64) -> ExactComplex {
        ExactComplex::from_i64(v)
    }

    #[test]
    fn identity_and_products() {
        let m = Matrix::from_rows(vec![vec![er(1), er(2)], vec![er(3), er(4)]]).unwrap();
        let i = Matrix::<ExactComplex>::identity(2);
        assert_eq!(m.mul(&i).unwrap(), m);
        assert!(m.mul(&Matrix::identity(3)).is_err());
    }

    #[test]
    fn inverse_of_diagonal() {
        let d = Matrix::diag(&[er(2), ec(ExactReal::one(), ExactReal::one())]);
        let inv = d.inverse().unwrap();
        let expected = Matrix::diag(&[
            ExactComplex::real(ExactReal::from_ratio(1, 2)),
            ec(ExactReal::from_ratio(1, 2), ExactReal::from_ratio(-1, 2)),
        ]);
        assert_eq!(inv, expected);
        assert_eq!(inv.mul(&d).unwrap(), Matrix::identity(2));
        let sing = Matrix::diag(&[er(0), er(1)]);
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn rank_nullspace_examples() {
        let (r, n) = exact_rank_nullspace(&Matrix::<ExactComplex>::identity(3));
        assert_eq!((r, n.len()), (3, 0));

        let s2 = ExactComplex::real(ExactReal::sqrt_of(2));
        let s3 = ExactComplex::real(ExactReal::sqrt_of(3));
        let m = Matrix::from_rows(vec![
            vec![er(1), er(0), s2.clone()],
            vec![er(0), er(1), s3.clone()],
        ])
        .unwrap();
        let (r, n) = exact_rank_nullspace(&m);
        assert_eq!(r, 2);
        assert_eq!(n, vec![vec![s2.neg(), s3.neg(), er(1)]]);
        assert!(m.mul_vec(&n[0]).unwrap().iter().all(Field::is_zero));

        let (r, n) = exact_rank_nullspace(&Matrix::<ExactComplex>::zeros(2, 3));
        assert_eq!((r, n.len()), (0, 3));
    }

    #[test]
    fn determinant_matches_cofactor() {
        let pi = ExactComplex::real(ExactReal::pi());
        let m = Matrix::from_rows(vec![vec![pi.clone(), er(1)], vec![er(2), pi.clone()]]).unwrap();
        let det = m.determinant().unwrap();
        assert_eq!(det, pi.mul(&pi).sub(&er(2)));
    }
}
