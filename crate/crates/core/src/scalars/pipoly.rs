use std::fmt;

use super::multiquad::MultiquadElem;
use crate::error::Result;

/// Polynomial in the symbol `pi` with multiquadratic coefficients.
///
/// `coeffs[j]` is the coefficient of `pi^j`; trailing zeros are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PiPoly {
    coeffs: Vec<MultiquadElem>,
}

impl PiPoly {
    pub fn zero() -> Self {
        PiPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(MultiquadElem::one())
    }

    pub fn constant(c: MultiquadElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * pi^k`.
    pub fn monomial(k: usize, c: MultiquadElem) -> Self {
        let mut coeffs = vec![MultiquadElem::zero(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    pub fn pi() -> Self {
        Self::monomial(1, MultiquadElem::one())
    }

    pub fn from_coeffs(mut coeffs: Vec<MultiquadElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PiPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[MultiquadElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&MultiquadElem> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `Some((k, c))` when the polynomial is the single term `c * pi^k`.
    pub fn as_monomial(&self) -> Option<(usize, &MultiquadElem)> {
        let v = self.valuation()?;
        (v + 1 == self.coeffs.len()).then(|| (v, &self.coeffs[v]))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = MultiquadElem::zero();
        let coeffs = (0..len)
            .map(|j| {
                let a = self.coeffs.get(j).unwrap_or(&zero);
                let b = rhs.coeffs.get(j).unwrap_or(&zero);
                a.add(b)
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        PiPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![MultiquadElem::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &MultiquadElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    /// Multiply by `pi^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![MultiquadElem::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PiPoly { coeffs }
    }

    /// Divide by `pi^k`; the low `k` coefficients must vanish.
    pub fn unshift(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        PiPoly {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        }
    }

    /// Euclidean division; `rhs` must be nonzero.
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self)> {
        let d = rhs.degree().ok_or(crate::error::Error::DivisionByZero)?;
        let lead_inv = rhs.coeffs[d].inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![MultiquadElem::zero(); rem.len().saturating_sub(d)];
        while rem.len() > d {
            let top = rem.len() - 1;
            let c = rem[top].mul(&lead_inv);
            if !c.is_zero() {
                let shift = top - d;
                for (j, b) in rhs.coeffs.iter().enumerate() {
                    rem[shift + j] = rem[shift + j].sub(&c.mul(b));
                }
                quot[shift] = c;
            }
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Exact division; panics in debug builds if there is a remainder.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self> {
        if let Some((k, c)) = rhs.as_monomial() {
            let cinv = c.inv()?;
            return Ok(self.unshift(k).scale(&cinv));
        }
        let (q, r) = self.div_rem(rhs)?;
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Ok(q)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Result<Self> {
        match self.leading() {
            None => Ok(Self::zero()),
            Some(l) if l.is_one() => Ok(self.clone()),
            Some(l) => Ok(self.scale(&l.inv()?)),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, rhs: &Self) -> Result<Self> {
        if self.is_zero() {
            return rhs.monic();
        }
        if rhs.is_zero() {
            return self.monic();
        }
        // a monomial c*pi^k divides into the other operand's pi-adic valuation
        for (a, b) in [(self, rhs), (rhs, self)] {
            if let Some((k, _)) = a.as_monomial() {
                let v = b.valuation().unwrap_or(0);
                return Ok(Self::monomial(k.min(v), MultiquadElem::one()));
            }
        }
        let (mut a, mut b) = if self.degree() >= rhs.degree() {
            (self.clone(), rhs.clone())
        } else {
            (rhs.clone(), self.clone())
        };
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r.monic()?;
        }
        a.monic()
    }
}

impl fmt::Debug for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*pi")?,
                _ => write!(f, "({c})*pi^{j}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> PiPoly {
        PiPoly::from_coeffs(cs.iter().map(|&c| MultiquadElem::from_int(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (pi + 1)(pi - 2) and (pi + 1)(pi + 3)
        let a = p(&[-2, -1, 1]);
        let b = p(&[3, 4, 1]);
        assert_eq!(a.gcd(&b).unwrap(), p(&[1, 1]));
        let (q, r) = a.div_rem(&p(&[1, 1])).unwrap();
        assert_eq!(q, p(&[-2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn gcd_with_surd_coefficients() {
        let root = PiPoly::from_coeffs(vec![MultiquadElem::sqrt(2).neg(), MultiquadElem::one()]);
        let a = root.mul(&p(&[1, 1]));
        let b = root.mul(&p(&[0, 5]));
        assert_eq!(a.gcd(&b).unwrap(), root);
    }

    #[test]
    fn monomial_gcd_fast_path() {
        let a = PiPoly::monomial(3, MultiquadElem::from_int(2));
        let b = p(&[0, 0, 1, 7]);
        assert_eq!(a.gcd(&b).unwrap(), PiPoly::monomial(2, MultiquadElem::one()));
    }
}
