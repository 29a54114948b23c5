use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use super::multiquad::{MultiquadElem, Surd};
use super::numtheory::prime_factors;
use super::pipoly::PiPoly;
use super::{ComplexField, Field};
use crate::error::{Error, Result};

/// Element of `Q(sqrt d1, ..., sqrt dk)(pi)` stored as a reduced fraction of
/// pi-polynomials with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactReal {
    num: PiPoly,
    den: PiPoly,
}

impl ExactReal {
    pub fn new(num: PiPoly, den: PiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if den.is_one() {
            return Ok(ExactReal { num, den });
        }
        let g = num.gcd(&den)?;
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let lead = den.leading().expect("nonzero denominator");
        if !lead.is_one() {
            let inv = lead.inv()?;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(ExactReal { num, den })
    }

    pub fn from_poly(num: PiPoly) -> Self {
        ExactReal {
            num,
            den: PiPoly::one(),
        }
    }

    pub fn from_multiquad(c: MultiquadElem) -> Self {
        Self::from_poly(PiPoly::constant(c))
    }

    pub fn rational(q: BigRational) -> Self {
        Self::from_multiquad(MultiquadElem::rational(q))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(n.into(), d.into()))
    }

    pub fn sqrt_of(m: Surd) -> Self {
        Self::from_multiquad(MultiquadElem::sqrt(m))
    }

    pub fn pi() -> Self {
        Self::from_poly(PiPoly::pi())
    }

    pub fn num(&self) -> &PiPoly {
        &self.num
    }

    pub fn den(&self) -> &PiPoly {
        &self.den
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.den.is_one() || self.num.degree().unwrap_or(0) > 0 {
            return None;
        }
        match self.num.coeffs().first() {
            None => Some(<BigRational as Zero>::zero()),
            Some(c) => c.as_rational(),
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// Squarefree radicands appearing anywhere in the value.
    pub fn surds(&self) -> Vec<Surd> {
        let mut out: Vec<Surd> = self
            .num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .flat_map(|c| c.coords().keys().copied())
            .filter(|&m| m != 1)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    fn complexity(&self) -> u64 {
        let deg = self.num.degree().unwrap_or(0) + self.den.degree().unwrap_or(0);
        let h: u64 = self
            .num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .map(|c| c.height() + c.coords().len() as u64)
            .sum();
        h + 16 * deg as u64
    }

    /// Lossy double approximation for diagnostics.
    pub fn approx_f64(&self) -> f64 {
        let eval = |p: &PiPoly| {
            p.coeffs()
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * std::f64::consts::PI + c.approx_f64())
        };
        eval(&self.num) / eval(&self.den)
    }

    /// JSON form `{num: [[pi_power, [primes], "p/q"], ...], den: [...]}`.
    pub fn to_json(&self) -> Value {
        let terms = |p: &PiPoly| -> Value {
            let mut out = Vec::new();
            for (j, c) in p.coeffs().iter().enumerate() {
                for (&m, q) in c.coords() {
                    out.push(json!([j, prime_factors(m), q.to_string()]));
                }
            }
            Value::Array(out)
        };
        json!({ "num": terms(&self.num), "den": terms(&self.den) })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Schema(vec![format!("exact real: {msg}")]);
        let terms = |key: &str| -> Result<PiPoly> {
            let arr = v
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(&format!("missing array '{key}'")))?;
            let mut poly = PiPoly::zero();
            for t in arr {
                let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("term must be a triple"))?;
                let j = t[0].as_u64().ok_or_else(|| bad("pi power must be a non-negative integer"))?;
                let primes = t[1].as_array().ok_or_else(|| bad("surd must be a prime list"))?;
                let mut m: u64 = 1;
                for p in primes {
                    let p = p.as_u64().ok_or_else(|| bad("surd prime must be an integer"))?;
                    if prime_factors(p) != vec![p] || m.is_multiple_of(p) {
                        return Err(bad("surd must be a list of distinct primes"));
                    }
                    m = m.checked_mul(p).ok_or_else(|| bad("surd too large"))?;
                }
                let q: BigRational = t[2]
                    .as_str()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("coefficient must be a rational string"))?;
                poly = poly.add(&PiPoly::monomial(j as usize, MultiquadElem::monomial(m, q)));
            }
            Ok(poly)
        };
        Self::new(terms("num")?, terms("den")?)
    }
}

impl Field for ExactReal {
    fn zero() -> Self {
        Self::from_poly(PiPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(PiPoly::one())
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.num.is_zero() {
            return rhs.clone();
        }
        if rhs.num.is_zero() {
            return self.clone();
        }
        let res = if self.den == rhs.den {
            Self::new(self.num.add(&rhs.num), self.den.clone())
        } else {
            Self::new(
                self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
                self.den.mul(&rhs.den),
            )
        };
        res.expect("denominators are nonzero")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(self.num.mul(&rhs.num));
        }
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("denominators are nonzero")
    }
    fn neg(&self) -> Self {
        ExactReal {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn pivot_weight(&self) -> f64 {
        if self.num.is_zero() {
            f64::NEG_INFINITY
        } else {
            -(self.complexity() as f64)
        }
    }
    fn from_i64(v: i64) -> Self {
        Self::from_multiquad(MultiquadElem::from_int(v))
    }
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactReal {
    /// Renders in the scalar literal grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Key of a basis monomial `pi^j * sqrt(m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialKey {
    pub pi_power: i64,
    pub surd: Surd,
}

/// Rational coordinates of `x` in the basis `pi^j * sqrt(m)`.
///
/// `x` must have a pure power of pi as denominator (negative powers are allowed
/// and show up as negative `pi_power`).
pub fn monomial_coords(
    x: &ExactReal,
    window: RangeInclusive<i64>,
) -> Result<BTreeMap<MonomialKey, BigRational>> {
    let (shift, _) = x.den.as_monomial().ok_or(Error::NotPolynomial)?;
    let mut out = BTreeMap::new();
    for (j, c) in x.num.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let power = j as i64 - shift as i64;
        if !window.contains(&power) {
            return Err(Error::WindowExceeded {
                power,
                lo: *window.start(),
                hi: *window.end(),
            });
        }
        for (&m, q) in c.coords() {
            out.insert(MonomialKey { pi_power: power, surd: m }, q.clone());
        }
    }
    Ok(out)
}

/// `re + i*im` over the exact real tower.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactComplex {
    pub re: ExactReal,
    pub im: ExactReal,
}

impl ExactComplex {
    pub fn new(re: ExactReal, im: ExactReal) -> Self {
        ExactComplex { re, im }
    }

    pub fn real(re: ExactReal) -> Self {
        ExactComplex {
            re,
            im: ExactReal::zero(),
        }
    }

    pub fn i() -> Self {
        ExactComplex {
            re: ExactReal::zero(),
            im: ExactReal::one(),
        }
    }

    pub fn conj(&self) -> Self {
        ExactComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn surds(&self) -> Vec<Surd> {
        let mut v = self.re.surds();
        v.extend(self.im.surds());
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        json!({ "re": self.re.to_json(), "im": self.im.to_json() })
    }
}

impl Field for ExactComplex {
    fn zero() -> Self {
        Self::real(ExactReal::zero())
    }
    fn one() -> Self {
        Self::real(ExactReal::one())
    }
    fn add(&self, rhs: &Self) -> Self {
        ExactComplex {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        ExactComplex {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(self.re.mul(&rhs.re));
        }
        ExactComplex {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }
    fn neg(&self) -> Self {
        ExactComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
    fn inv(&self) -> Result<Self> {
        if self.im.is_zero() {
            return Ok(Self::real(self.re.inv()?));
        }
        let norm = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let ninv = norm.inv()?;
        Ok(ExactComplex {
            re: self.re.mul(&ninv),
            im: self.im.neg().mul(&ninv),
        })
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            let w = |x: &ExactReal| if x.is_zero() { 0.0 } else { x.pivot_weight() };
            w(&self.re) + w(&self.im)
        }
    }
    fn from_i64(v: i64) -> Self {
        Self::real(ExactReal::from_i64(v))
    }
}

impl ComplexField for ExactComplex {
    type Real = ExactReal;

    fn re(&self) -> ExactReal {
        self.re.clone()
    }
    fn im(&self) -> ExactReal {
        self.im.clone()
    }
    fn from_real_parts(re: ExactReal, im: ExactReal) -> Self {
        ExactComplex { re, im }
    }
    fn two_pi_i_like(&self) -> Self {
        ExactComplex {
            re: ExactReal::zero(),
            im: ExactReal::pi().mul(&ExactReal::from_i64(2)),
        }
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactComplex {
    /// Renders in the scalar literal grammar, e.g. `(1) + (2)*i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => f.write_str("0"),
            (false, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "({})*i", self.im),
            (false, false) => write!(f, "{} + ({})*i", self.re, self.im),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_pi() -> ExactReal {
        ExactReal::pi().mul(&ExactReal::from_i64(2))
    }

    #[test]
    fn surd_square() {
        let s2 = ExactReal::sqrt_of(2);
        assert_eq!(s2.mul(&s2), ExactReal::from_i64(2));
    }

    #[test]
    fn rational_function_addition() {
        let x = two_pi().inv().unwrap();
        assert_eq!(x.add(&x), ExactReal::pi().inv().unwrap());
    }

    #[test]
    fn inverse_via_conjugates() {
        let x = ExactReal::sqrt_of(2).add(&ExactReal::sqrt_of(3));
        let expected = ExactReal::sqrt_of(3).sub(&ExactReal::sqrt_of(2));
        assert_eq!(x.inv().unwrap(), expected);
        assert_eq!(x.mul(&expected), ExactReal::one());
    }

    #[test]
    fn canonical_form_cancels_common_factors() {
        // (pi^2 - 2) / (pi - sqrt 2) = pi + sqrt 2
        let num = PiPoly::from_coeffs(vec![MultiquadElem::from_int(-2), MultiquadElem::zero(), MultiquadElem::one()]);
        let den = PiPoly::from_coeffs(vec![MultiquadElem::sqrt(2).neg(), MultiquadElem::one()]);
        let x = ExactReal::new(num, den).unwrap();
        assert_eq!(x, ExactReal::pi().add(&ExactReal::sqrt_of(2)));
        // scaling the denominator does not change the canonical form
        let y = ExactReal::new(PiPoly::constant(MultiquadElem::from_int(3)), PiPoly::monomial(1, MultiquadElem::from_int(6))).unwrap();
        assert_eq!(y, two_pi().inv().unwrap());
        assert!(y.den().is_one() || y.den().leading().unwrap().is_one());
    }

    #[test]
    fn coords_examples() {
        let x = ExactReal::pi().mul(&ExactReal::from_i64(4));
        let c = monomial_coords(&x, -4..=4).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&MonomialKey { pi_power: 1, surd: 1 }], BigRational::from_integer(4.into()));

        let y = ExactReal::sqrt_of(3)
            .mul(&ExactReal::from_i64(2))
            .sub(&ExactReal::sqrt_of(2).mul(&ExactReal::from_i64(2)));
        let c = monomial_coords(&y, 0..=0).unwrap();
        assert_eq!(c[&MonomialKey { pi_power: 0, surd: 3 }], BigRational::from_integer(2.into()));
        assert_eq!(c[&MonomialKey { pi_power: 0, surd: 2 }], BigRational::from_integer((-2).into()));

        let z = ExactReal::sqrt_of(3).div(&two_pi()).unwrap();
        let c = monomial_coords(&z, -1..=1).unwrap();
        assert_eq!(c[&MonomialKey { pi_power: -1, surd: 3 }], BigRational::new(1.into(), 2.into()));
        assert!(matches!(monomial_coords(&z, 0..=1), Err(Error::WindowExceeded { power: -1, .. })));

        let w = ExactReal::pi().add(&ExactReal::one()).inv().unwrap();
        assert_eq!(monomial_coords(&w, -5..=5), Err(Error::NotPolynomial));
    }

    #[test]
    fn json_round_trip() {
        let x = ExactReal::sqrt_of(6)
            .add(&ExactReal::from_ratio(-3, 7))
            .div(&ExactReal::pi().add(&ExactReal::sqrt_of(5)))
            .unwrap();
        let v = x.to_json();
        assert_eq!(ExactReal::from_json(&v).unwrap(), x);
    }

    #[test]
    fn complex_inverse() {
        let z = ExactComplex::new(ExactReal::from_i64(1), ExactReal::from_i64(1));
        let inv = z.inv().unwrap();
        assert_eq!(inv, ExactComplex::new(ExactReal::from_ratio(1, 2), ExactReal::from_ratio(-1, 2)));
        assert_eq!(z.conj().conj(), z);
    }
}
