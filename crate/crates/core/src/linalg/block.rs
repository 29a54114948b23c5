use super::Matrix;
use crate::error::{Error, Result};
use crate::scalars::{BigComplex, Field};

/// Partition `eta = (n_1, ..., n_r)` of a matrix order into diagonal blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockStructure {
    sizes: Vec<usize>,
}

impl BlockStructure {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Schema(vec![
                "eta must be a non-empty list of positive block sizes".into(),
            ]));
        }
        Ok(BlockStructure { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of blocks `r`.
    pub fn r(&self) -> usize {
        self.sizes.len()
    }

    pub fn order(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Index of the first row of every block.
    pub fn starts(&self) -> Vec<usize> {
        let mut acc = 0;
        self.sizes
            .iter()
            .map(|s| {
                let st = acc;
                acc += s;
                st
            })
            .collect()
    }

    pub fn block_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (k, s) in self.sizes.iter().enumerate() {
            acc += s;
            if i < acc {
                return k;
            }
        }
        panic!("index {i} outside block structure of order {}", self.order());
    }

    /// Position `(i, j)` may be nonzero in `K_{eta,r}`.
    pub fn allows(&self, i: usize, j: usize) -> bool {
        j <= i && self.block_of(i) == self.block_of(j)
    }

    /// Indicator vector of the block starts (`u0`).
    pub fn start_indicator<T: Field>(&self) -> Vec<T> {
        let starts = self.starts();
        (0..self.order())
            .map(|i| if starts.contains(&i) { T::one() } else { T::zero() })
            .collect()
    }
}

/// `M` is block diagonal with lower triangular blocks of constant diagonal.
pub fn is_block_lower_triangular<T: Field>(m: &Matrix<T>, eta: &BlockStructure) -> bool {
    if !m.is_square() || m.rows() != eta.order() {
        return false;
    }
    let starts = eta.starts();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !eta.allows(i, j) && !m.get(i, j).is_zero() {
                return false;
            }
        }
        let s = starts[eta.block_of(i)];
        if !m.get(i, i).sub(m.get(s, s)).is_zero() {
            return false;
        }
    }
    true
}

/// `log2` of the largest deviation of a numeric matrix from the `K_{eta,r}`
/// pattern (off-pattern entries and diagonal spread), `-inf` if none.
pub fn block_residual_log2(m: &Matrix<BigComplex>, eta: &BlockStructure) -> f64 {
    let starts = eta.starts();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !eta.allows(i, j) {
                worst = worst.max(m.get(i, j).log2_abs());
            }
        }
        let s = starts[eta.block_of(i)];
        worst = worst.max(m.get(i, i).sub(m.get(s, s)).log2_abs());
    }
    worst
}

/// Forces the `K_{eta,r}` pattern: zeros off-pattern, and each block's
/// diagonal replaced by its mean (or by `first_diag` for block 0 when given).
pub fn snap_to_blocks(
    m: &Matrix<BigComplex>,
    eta: &BlockStructure,
    first_diag: Option<&BigComplex>,
) -> Matrix<BigComplex> {
    let n = m.rows();
    let prec = m.entries().iter().map(BigComplex::prec).max().unwrap_or(64);
    let mut out = m.clone();
    for (k, (&s, &size)) in eta.starts().iter().zip(eta.sizes()).enumerate() {
        let mean = match (k, first_diag) {
            (0, Some(d)) => d.clone(),
            _ => {
                let mut acc = BigComplex::zero_prec(prec);
                for t in s..s + size {
                    acc = acc.add(m.get(t, t));
                }
                acc.div(&BigComplex::from_int(size as i64, prec)).expect("nonzero size")
            }
        };
        for t in s..s + size {
            out.set(t, t, mean.clone());
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !eta.allows(i, j) {
                out.set(i, j, BigComplex::zero_prec(prec));
            }
        }
    }
    out
}

impl<T: Field> Matrix<T> {
    pub fn is_block_lower_triangular(&self, eta: &BlockStructure) -> bool {
        is_block_lower_triangular(self, eta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::ExactComplex;

    #[test]
    fn block_pattern() {
        let eta = BlockStructure::new(vec![2, 1]).unwrap();
        assert_eq!(eta.starts(), vec![0, 2]);
        let lam = ExactComplex::from_i64(5);
        let m = Matrix::diag(&[ExactComplex::one(), ExactComplex::one(), lam]);
        assert!(m.is_block_lower_triangular(&eta));

        let upper = Matrix::from_rows(vec![
            vec![ExactComplex::one(), ExactComplex::one()],
            vec![ExactComplex::zero(), ExactComplex::one()],
        ])
        .unwrap();
        assert!(!upper.is_block_lower_triangular(&BlockStructure::new(vec![2]).unwrap()));
        assert!(upper.transpose().is_block_lower_triangular(&BlockStructure::new(vec![2]).unwrap()));

        let one = Matrix::diag(&[ExactComplex::from_i64(7)]);
        assert!(one.is_block_lower_triangular(&BlockStructure::new(vec![1]).unwrap()));

        // unequal diagonal inside a block
        let d = Matrix::diag(&[ExactComplex::one(), ExactComplex::from_i64(2)]);
        assert!(!d.is_block_lower_triangular(&BlockStructure::new(vec![2]).unwrap()));
        assert!(d.is_block_lower_triangular(&BlockStructure::new(vec![1, 1]).unwrap()));
    }

    #[test]
    fn invalid_eta() {
        assert!(BlockStructure::new(vec![]).is_err());
        assert!(BlockStructure::new(vec![1, 0]).is_err());
    }
}
