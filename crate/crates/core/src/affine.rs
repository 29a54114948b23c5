//! Affine maps `x -> A x + a` and their homogeneous embeddings.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::Field;

/// The affine map `x -> A x + a` on `K^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap<T> {
    linear: Matrix<T>,
    translation: Vec<T>,
}

impl<T: Field> AffineMap<T> {
    pub fn new(linear: Matrix<T>, translation: Vec<T>) -> Result<Self> {
        if !linear.is_square() || linear.rows() != translation.len() {
            return Err(Error::DimensionMismatch(format!(
                "linear part {}x{} with translation of length {}",
                linear.rows(),
                linear.cols(),
                translation.len()
            )));
        }
        Ok(AffineMap { linear, translation })
    }

    pub fn identity(n: usize) -> Self {
        AffineMap {
            linear: Matrix::identity(n),
            translation: vec![T::zero(); n],
        }
    }

    pub fn translation_by(a: Vec<T>) -> Self {
        AffineMap {
            linear: Matrix::identity(a.len()),
            translation: a,
        }
    }

    pub fn n(&self) -> usize {
        self.translation.len()
    }

    pub fn linear(&self) -> &Matrix<T> {
        &self.linear
    }

    pub fn translation(&self) -> &[T] {
        &self.translation
    }

    /// `self ∘ g`, i.e. `(AB, Ab + a)`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if self.n() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "composing maps of dimension {} and {}",
                self.n(),
                g.n()
            )));
        }
        let lin = self.linear.mul(&g.linear)?;
        let t = self.apply(&g.translation)?;
        Ok(AffineMap {
            linear: lin,
            translation: t,
        })
    }

    /// `A x + a`, accumulated as `a_i * 1 + sum_j A_ij x_j` (the same order as
    /// the homogeneous product `Phi(f) (1, x)`).
    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "point of dimension {} for a map on dimension {}",
                x.len(),
                self.n()
            )));
        }
        let one = T::one();
        Ok((0..self.n())
            .map(|i| {
                let mut acc = T::zero();
                let a = &self.translation[i];
                if !a.is_zero() {
                    acc = acc.add(&a.mul(&one));
                }
                for (c, v) in self.linear.row(i).iter().zip(x) {
                    if !c.is_zero() && !v.is_zero() {
                        acc = acc.add(&c.mul(v));
                    }
                }
                acc
            })
            .collect())
    }

    fn embed(&self, corner: T) -> Matrix<T> {
        let n = self.n();
        Matrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
            (0, 0) => corner.clone(),
            (0, _) => T::zero(),
            (_, 0) => self.translation[i - 1].clone(),
            _ => self.linear.get(i - 1, j - 1).clone(),
        })
    }

    /// `[[1, 0], [a, A]]`.
    pub fn phi(&self) -> Matrix<T> {
        self.embed(T::one())
    }

    /// `[[0, 0], [a, A]]`.
    pub fn psi(&self) -> Matrix<T> {
        self.embed(T::zero())
    }

    fn from_embedding(m: &Matrix<T>, corner: &T, name: &str) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::DimensionMismatch(format!("{name}: matrix must be square")));
        }
        if !m.get(0, 0).sub(corner).is_zero() || (1..m.cols()).any(|j| !m.get(0, j).is_zero()) {
            return Err(Error::DimensionMismatch(format!("{name}: first row has the wrong pattern")));
        }
        let n = m.rows() - 1;
        Ok(AffineMap {
            linear: m.block(1, 1, n, n),
            translation: (1..=n).map(|i| m.get(i, 0).clone()).collect(),
        })
    }

    /// Inverse of [`AffineMap::psi`]; the first row must vanish exactly.
    pub fn from_psi(m: &Matrix<T>) -> Result<Self> {
        Self::from_embedding(m, &T::zero(), "psi")
    }

    /// Inverse of [`AffineMap::phi`]; the first row must be `(1, 0, ..., 0)` exactly.
    pub fn from_phi(m: &Matrix<T>) -> Result<Self> {
        Self::from_embedding(m, &T::one(), "phi")
    }

    pub fn inverse_with(&self, negligible: impl Fn(&T) -> bool) -> Result<Self> {
        let inv = self.linear.inverse_with(negligible)?;
        let t: Vec<T> = inv.mul_vec(&self.translation)?.iter().map(Field::neg).collect();
        Ok(AffineMap {
            linear: inv,
            translation: t,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with(|_| false)
    }

    /// `f^e`; negative powers use `inverse`.
    pub fn pow_with(&self, e: i64, inverse: Option<&Self>) -> Result<Self> {
        let base = if e < 0 {
            match inverse {
                Some(i) => i.clone(),
                None => self.inverse()?,
            }
        } else {
            self.clone()
        };
        let mut acc = Self::identity(self.n());
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&sq)?;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.compose(&sq)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        self.pow_with(e, None)
    }

    pub fn map_scalars<U: Field>(&self, mut f: impl FnMut(&T) -> U) -> AffineMap<U> {
        AffineMap {
            linear: self.linear.map(&mut f),
            translation: self.translation.iter().map(f).collect(),
        }
    }

    /// Exact equality via differences (see [`Field::is_zero`]).
    pub fn field_eq(&self, rhs: &Self) -> bool {
        self.linear.field_eq(&rhs.linear)
            && self.translation.len() == rhs.translation.len()
            && self.translation.iter().zip(&rhs.translation).all(|(a, b)| a.sub(b).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{ExactComplex, ExactReal};

    fn c(re: i64, im: i64) -> ExactComplex {
        ExactComplex::new(ExactReal::from_i64(re), ExactReal::from_i64(im))
    }

    #[test]
    fn translations_add() {
        let f = AffineMap::translation_by(vec![c(1, 0), c(0, 2)]);
        let g = AffineMap::translation_by(vec![c(3, 1), c(0, -1)]);
        assert_eq!(f.compose(&g).unwrap(), AffineMap::translation_by(vec![c(4, 1), c(0, 1)]));
    }

    #[test]
    fn phi_is_a_homomorphism_on_an_example() {
        let f = AffineMap::new(
            Matrix::from_rows(vec![vec![c(1, 1), c(0, 0)], vec![c(2, 0), c(0, -1)]]).unwrap(),
            vec![c(1, 0), c(-1, 3)],
        )
        .unwrap();
        let g = AffineMap::new(
            Matrix::from_rows(vec![vec![c(0, 1), c(1, 0)], vec![c(5, 0), c(1, 1)]]).unwrap(),
            vec![c(2, 2), c(0, 0)],
        )
        .unwrap();
        assert_eq!(f.compose(&g).unwrap().phi(), f.phi().mul(&g.phi()).unwrap());
        let id = f.compose(&f.inverse().unwrap()).unwrap();
        assert_eq!(id, AffineMap::identity(2));
    }

    #[test]
    fn embeddings() {
        let two_pi_i = ExactComplex::new(ExactReal::zero(), ExactReal::pi().mul(&ExactReal::from_i64(2)));
        let f4 = AffineMap::translation_by(vec![two_pi_i.clone(), c(0, 0)]);
        let expected = Matrix::from_rows(vec![
            vec![c(1, 0), c(0, 0), c(0, 0)],
            vec![two_pi_i, c(1, 0), c(0, 0)],
            vec![c(0, 0), c(0, 0), c(1, 0)],
        ])
        .unwrap();
        assert_eq!(f4.phi(), expected);
        assert_eq!(AffineMap::<ExactComplex>::identity(2).phi(), Matrix::identity(3));

        let b1 = AffineMap::new(Matrix::zeros(2, 2), vec![c(1, 1), c(0, 0)]).unwrap();
        let psi = b1.psi();
        assert_eq!(
            psi,
            Matrix::from_rows(vec![
                vec![c(0, 0), c(0, 0), c(0, 0)],
                vec![c(1, 1), c(0, 0), c(0, 0)],
                vec![c(0, 0), c(0, 0), c(0, 0)],
            ])
            .unwrap()
        );
        assert_eq!(AffineMap::from_psi(&psi).unwrap(), b1);
        assert!(AffineMap::from_psi(&Matrix::<ExactComplex>::identity(3)).is_err());
    }

    #[test]
    fn powers() {
        let f = AffineMap::new(Matrix::diag(&[c(2, 0)]), vec![c(1, 0)]).unwrap();
        let f3 = f.pow(3).unwrap();
        assert_eq!(f3.apply(&[c(0, 0)]).unwrap(), vec![c(7, 0)]);
        let back = f.pow(-3).unwrap().compose(&f3).unwrap();
        assert_eq!(back, AffineMap::identity(1));
    }
}
