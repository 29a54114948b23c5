use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::numtheory::{gcd_u64, is_squarefree, prime_factors};
use crate::error::{Error, Result};

/// A squarefree positive integer `m`, standing for `sqrt(m)`. `1` is the unit monomial.
pub type Surd = u64;

/// Declared square-root constants of an input file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurdBasis {
    radicands: Vec<u64>,
}

impl SurdBasis {
    pub fn new(radicands: Vec<u64>) -> Result<Self> {
        for (idx, &d) in radicands.iter().enumerate() {
            if d < 2 {
                return Err(Error::InvalidBasis(format!("radicand {d} must be at least 2")));
            }
            if !is_squarefree(d) {
                return Err(Error::InvalidBasis(format!("radicand {d} is not squarefree")));
            }
            if idx > 0 && radicands[idx - 1] >= d {
                return Err(Error::InvalidBasis(
                    "radicands must be strictly increasing".into(),
                ));
            }
        }
        let basis = SurdBasis { radicands };
        // products of distinct sqrt(d_i) must stay distinct
        let mut reduced: Vec<u64> = Vec::new();
        for &d in &basis.radicands {
            let r = reduce_against(&reduced, d);
            if r == 1 {
                return Err(Error::InvalidBasis(format!(
                    "sqrt({d}) is a rational multiple of a product of the other radicands"
                )));
            }
            insert_reduced(&mut reduced, r);
        }
        Ok(basis)
    }

    pub fn radicands(&self) -> &[u64] {
        &self.radicands
    }

    pub fn len(&self) -> usize {
        self.radicands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radicands.is_empty()
    }

    /// True when `sqrt(m)` is a rational multiple of a product of declared radicands.
    pub fn generates(&self, m: Surd) -> bool {
        let mut reduced: Vec<u64> = Vec::new();
        for &d in &self.radicands {
            let r = reduce_against(&reduced, d);
            insert_reduced(&mut reduced, r);
        }
        reduce_against(&reduced, m) == 1
    }

    /// All `2^k` monomials of the basis, as squarefree integers.
    pub fn monomials(&self) -> Vec<Surd> {
        let mut out = vec![1u64];
        for &d in &self.radicands {
            let extra: Vec<u64> = out.iter().map(|&m| surd_product(m, d).1).collect();
            out.extend(extra);
        }
        out.sort_unstable();
        out
    }
}

// Squarefree integers under (a, b) -> ab / gcd(a,b)^2 form a GF(2) vector space
// indexed by primes. `reduced` holds an echelon basis keyed by largest prime.
fn reduce_against(reduced: &[u64], mut m: u64) -> u64 {
    loop {
        if m == 1 {
            return 1;
        }
        let top = *prime_factors(m).last().unwrap();
        match reduced
            .iter()
            .find(|&&r| *prime_factors(r).last().unwrap() == top)
        {
            Some(&r) => m = surd_product(m, r).1,
            None => return m,
        }
    }
}

fn insert_reduced(reduced: &mut Vec<u64>, r: u64) {
    if r != 1 {
        reduced.push(r);
    }
}

/// `sqrt(a) * sqrt(b) = g * sqrt(ab / g^2)` with `g = gcd(a, b)`.
pub(crate) fn surd_product(a: Surd, b: Surd) -> (u64, Surd) {
    let g = gcd_u64(a, b);
    (g, (a / g) * (b / g))
}

/// Element of a multiquadratic field `Q(sqrt m1, sqrt m2, ...)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiquadElem {
    coords: BTreeMap<Surd, BigRational>,
}

impl MultiquadElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(q: BigRational) -> Self {
        Self::monomial(1, q)
    }

    pub fn from_int(v: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `q * sqrt(m)`; `m` must be squarefree.
    pub fn monomial(m: Surd, q: BigRational) -> Self {
        let mut coords = BTreeMap::new();
        if !q.is_zero() {
            coords.insert(m, q);
        }
        MultiquadElem { coords }
    }

    pub fn sqrt(m: Surd) -> Self {
        Self::monomial(m, BigRational::one())
    }

    pub fn coords(&self) -> &BTreeMap<Surd, BigRational> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coords.len() == 1 && self.coords.get(&1).is_some_and(|c| c.is_one())
    }

    /// The rational value, when the element has no surd part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coords.len() {
            0 => Some(BigRational::zero()),
            1 => self.coords.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn rational_part(&self) -> BigRational {
        self.coords.get(&1).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(coords: &mut BTreeMap<Surd, BigRational>, m: Surd, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let entry = coords.entry(m).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            coords.remove(&m);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut coords = self.coords.clone();
        for (&m, q) in &rhs.coords {
            Self::add_term(&mut coords, m, q.clone());
        }
        MultiquadElem { coords }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        MultiquadElem {
            coords: self.coords.iter().map(|(&m, q)| (m, -q)).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        MultiquadElem {
            coords: self.coords.iter().map(|(&m, c)| (m, c * q)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q);
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q);
        }
        let mut coords = BTreeMap::new();
        for (&a, qa) in &self.coords {
            for (&b, qb) in &rhs.coords {
                let (g, m) = surd_product(a, b);
                Self::add_term(&mut coords, m, qa * qb * BigRational::from_integer(g.into()));
            }
        }
        MultiquadElem { coords }
    }

    /// The automorphism `sqrt(p) -> -sqrt(p)` for a prime `p`.
    pub fn conjugate_prime(&self, p: u64) -> Self {
        MultiquadElem {
            coords: self
                .coords
                .iter()
                .map(|(&m, q)| (m, if m % p == 0 { -q } else { q.clone() }))
                .collect(),
        }
    }

    fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.coords.keys().flat_map(|&m| prime_factors(m)).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut norm = self.clone();
        let mut cofactor = Self::one();
        for p in self.primes() {
            let c = norm.conjugate_prime(p);
            cofactor = cofactor.mul(&c);
            norm = norm.mul(&c);
        }
        let q = norm
            .as_rational()
            .expect("norm of a multiquadratic element is rational");
        Ok(cofactor.scale(&q.recip()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Sum of coefficient heights, a rough complexity measure.
    pub fn height(&self) -> u64 {
        self.coords
            .values()
            .map(|q| q.numer().bits() + q.denom().bits())
            .sum()
    }

    /// Floating approximation, for diagnostics and pivot heuristics only.
    pub fn approx_f64(&self) -> f64 {
        self.coords
            .iter()
            .map(|(&m, q)| rational_f64(q) * (m as f64).sqrt())
            .sum()
    }

    pub fn is_negative_leading(&self) -> bool {
        self.coords.values().next().is_some_and(|q| q.is_negative())
    }
}

pub(crate) fn rational_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Debug for MultiquadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiquadElem {
    /// Renders in the scalar literal grammar, e.g. `1/2 - 3*sqrt(2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return f.write_str("0");
        }
        for (idx, (&m, q)) in self.coords.iter().enumerate() {
            let neg = q.is_negative();
            let a = q.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m == 1 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "sqrt({m})")?;
            } else {
                write!(f, "{a}*sqrt({m})")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn surd_squares_are_rational() {
        let s2 = MultiquadElem::sqrt(2);
        assert_eq!(s2.mul(&s2), MultiquadElem::from_int(2));
        let s6 = MultiquadElem::sqrt(6);
        let s3 = MultiquadElem::sqrt(3);
        assert_eq!(s6.mul(&s3), MultiquadElem::monomial(2, q(3, 1)));
    }

    #[test]
    fn inverse_of_sum_of_surds() {
        let x = MultiquadElem::sqrt(2).add(&MultiquadElem::sqrt(3));
        let inv = x.inv().unwrap();
        assert_eq!(inv, MultiquadElem::sqrt(3).sub(&MultiquadElem::sqrt(2)));
        assert!(x.mul(&inv).is_one());
    }

    #[test]
    fn inverse_three_generators() {
        let x = MultiquadElem::from_int(1)
            .add(&MultiquadElem::sqrt(2))
            .add(&MultiquadElem::monomial(15, q(1, 3)))
            .add(&MultiquadElem::monomial(30, q(-2, 7)));
        assert!(x.mul(&x.inv().unwrap()).is_one());
        assert_eq!(MultiquadElem::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn basis_validation() {
        assert!(SurdBasis::new(vec![2, 3, 5, 7]).is_ok());
        assert!(SurdBasis::new(vec![2, 3, 6]).is_err());
        assert!(SurdBasis::new(vec![4]).is_err());
        assert!(SurdBasis::new(vec![3, 2]).is_err());
        assert!(SurdBasis::new(vec![1]).is_err());
        let b = SurdBasis::new(vec![2, 15]).unwrap();
        assert!(b.generates(30));
        assert!(b.generates(1));
        assert!(!b.generates(3));
        assert_eq!(b.monomials(), vec![1, 2, 15, 30]);
    }

    #[test]
    fn display() {
        let x = MultiquadElem::rational(q(1, 2)).sub(&MultiquadElem::monomial(2, q(3, 1)));
        assert_eq!(x.to_string(), "1/2 - 3*sqrt(2)");
    }
}
