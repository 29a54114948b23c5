//! LLL reduction of lattices `{(s, C N^T s) : s in Z^m}` with exact integer
//! coordinates and a floating tail recomputed from `s`.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalars::{bf_from_bigint, bf_log2_abs, bf_round_to_bigint, bf_zero, RM};

/// Lattice generated by the rows `(e_i, C * N^T e_i)`.
pub struct RelationLattice {
    /// `m x k` real matrix (the nullspace basis).
    pub n: Vec<Vec<BigFloat>>,
    /// `log2 C`.
    pub scale_log2: i64,
    pub prec: usize,
}

/// Reduced basis with its Gram-Schmidt norms.
pub struct Reduced {
    pub coords: Vec<Vec<BigInt>>,
    /// `N^T s` for each basis vector (unscaled).
    pub tails: Vec<Vec<BigFloat>>,
    /// `log2 ||b*_i||`.
    pub gs_log2: Vec<f64>,
}

impl RelationLattice {
    fn m(&self) -> usize {
        self.n.len()
    }

    fn k(&self) -> usize {
        self.n.first().map_or(0, Vec::len)
    }

    /// `N^T s` at working precision.
    pub fn tail(&self, s: &[BigInt]) -> Vec<BigFloat> {
        let p = self.prec;
        (0..self.k())
            .map(|c| {
                let mut acc = bf_zero(p);
                for (row, x) in self.n.iter().zip(s) {
                    if !x.is_zero() {
                        acc = acc.add(&row[c].mul(&bf_from_bigint(x), p, RM), p, RM);
                    }
                }
                acc
            })
            .collect()
    }

    fn embed(&self, s: &[BigInt], tail: &[BigFloat]) -> Vec<BigFloat> {
        let p = self.prec;
        let c = BigFloat::from_word(1, p);
        let mut c = c;
        c.set_exponent(c.exponent().unwrap_or(1) + self.scale_log2 as i32);
        s.iter()
            .map(|x| {
                let mut f = bf_from_bigint(x);
                if f.precision().unwrap_or(0) > p {
                    f.set_precision(p, RM).expect("precision");
                }
                f
            })
            .chain(tail.iter().map(|t| t.mul(&c, p, RM)))
            .collect()
    }

    /// LLL with `delta = 0.99`.
    pub fn reduce(&self) -> Reduced {
        let m = self.m();
        let p = self.prec;
        let mut coords: Vec<Vec<BigInt>> = (0..m)
            .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let mut tails: Vec<Vec<BigFloat>> = coords.iter().map(|s| self.tail(s)).collect();
        let delta = BigFloat::from_f64(0.99, p);
        let half = BigFloat::from_f64(0.5, p);
        let dot = |a: &[BigFloat], b: &[BigFloat]| -> BigFloat {
            let mut acc = bf_zero(p);
            for (x, y) in a.iter().zip(b) {
                acc = acc.add(&x.mul(y, p, RM), p, RM);
            }
            acc
        };
        let gram_schmidt = |coords: &[Vec<BigInt>], tails: &[Vec<BigFloat>]| -> (Vec<Vec<BigFloat>>, Vec<BigFloat>) {
            let b: Vec<Vec<BigFloat>> = coords.iter().zip(tails).map(|(s, t)| self.embed(s, t)).collect();
            let mut star: Vec<Vec<BigFloat>> = Vec::with_capacity(m);
            let mut norms: Vec<BigFloat> = Vec::with_capacity(m);
            let mut mu = vec![vec![bf_zero(p); m]; m];
            for i in 0..m {
                let mut v = b[i].clone();
                for j in 0..i {
                    let mij = if norms[j].is_zero() { bf_zero(p) } else { dot(&b[i], &star[j]).div(&norms[j], p, RM) };
                    for (x, y) in v.iter_mut().zip(&star[j]) {
                        *x = x.sub(&mij.mul(y, p, RM), p, RM);
                    }
                    mu[i][j] = mij;
                }
                norms.push(dot(&v, &v));
                star.push(v);
            }
            (mu, norms)
        };

        let (mut mu, mut norms) = gram_schmidt(&coords, &tails);
        let mut k = 1;
        let mut guard = 0usize;
        while k < m && guard < 100_000 {
            guard += 1;
            for j in (0..k).rev() {
                if mu[k][j].abs().cmp(&half).is_some_and(|c| c > 0) {
                    let q = bf_round_to_bigint(&mu[k][j]);
                    let (head, tail) = coords.split_at_mut(k);
                    for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                        *x -= &q * y;
                    }
                    tails[k] = self.tail(&coords[k]);
                    let r = gram_schmidt(&coords, &tails);
                    mu = r.0;
                    norms = r.1;
                }
            }
            let lhs = norms[k].clone();
            let mk = mu[k][k - 1].mul(&mu[k][k - 1], p, RM);
            let rhs = delta.sub(&mk, p, RM).mul(&norms[k - 1], p, RM);
            if lhs.cmp(&rhs).is_some_and(|c| c >= 0) {
                k += 1;
            } else {
                coords.swap(k, k - 1);
                tails.swap(k, k - 1);
                let r = gram_schmidt(&coords, &tails);
                mu = r.0;
                norms = r.1;
                k = (k - 1).max(1);
            }
        }
        let gs_log2 = norms.iter().map(|x| bf_log2_abs(x) / 2.0).collect();
        Reduced { coords, tails, gs_log2 }
    }
}
