use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::exact::{ExactComplex, ExactReal};
use super::hexfloat::hex_bigfloat;
use super::multiquad::MultiquadElem;
use super::pipoly::PiPoly;
use super::{ComplexField, Field};
use crate::error::{Error, Result};

/// Smallest supported working precision in bits.
pub const MIN_PREC: usize = 64;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

pub(crate) fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

pub(crate) fn bf_zero(prec: usize) -> BigFloat {
    BigFloat::from_word(0, prec)
}

pub(crate) fn bf_pi(prec: usize) -> BigFloat {
    with_consts(|cc| cc.pi(prec, RM))
}

pub(crate) fn bf_from_bigint(n: &BigInt) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    if digits.is_empty() {
        return bf_zero(MIN_PREC);
    }
    let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
    BigFloat::from_words(&digits, s, (64 * digits.len()) as i32)
}

pub(crate) fn bf_from_rational(q: &BigRational, prec: usize) -> BigFloat {
    let n = bf_from_bigint(q.numer());
    if q.denom() == &BigInt::from(1) {
        let mut n = n;
        if n.precision().unwrap_or(0) > prec {
            n.set_precision(prec, RM).expect("valid precision");
        }
        return n;
    }
    n.div(&bf_from_bigint(q.denom()), prec, RM)
}

/// Nearest integer of a finite float.
pub(crate) fn bf_round_to_bigint(x: &BigFloat) -> BigInt {
    let r = x.round(0, RM);
    bf_integer_to_bigint(&r)
}

fn bf_integer_to_bigint(x: &BigFloat) -> BigInt {
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return BigInt::zero();
    };
    if words.iter().all(|w| *w == 0) {
        return BigInt::zero();
    }
    let m = BigInt::from_slice(
        BigSign::Plus,
        &words
            .iter()
            .flat_map(|w| [*w as u32, (*w >> 32) as u32])
            .collect::<Vec<u32>>(),
    );
    let total = (64 * words.len()) as i64;
    let e = exp as i64;
    let v = if e >= total { m << (e - total) as usize } else { m >> (total - e) as usize };
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Double approximation of a finite float (flushes below the f64 range).
pub(crate) fn bf_to_f64(x: &BigFloat) -> f64 {
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *words.last().unwrap_or(&0);
    if top == 0 {
        return 0.0;
    }
    let e = exp as i64 - 64;
    let v = if e < -1200 { 0.0 } else { top as f64 * 2f64.powi(e as i32) };
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// `log2 |x|`, `-inf` for zero; accurate to about 1e-15 relative.
pub(crate) fn bf_log2_abs(x: &BigFloat) -> f64 {
    let Some((words, _, _, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *words.last().unwrap_or(&0);
    if top == 0 {
        return f64::NEG_INFINITY;
    }
    (top as f64).log2() - 64.0 + exp as f64
}

/// Complex number with arbitrary-precision binary floating parts.
///
/// Binary operations round to the larger of the operand precisions.
#[derive(Clone)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
    prec: usize,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        BigComplex { re, im, prec }
    }

    pub fn zero_prec(prec: usize) -> Self {
        BigComplex::new(bf_zero(prec), bf_zero(prec), prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        BigComplex::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec), prec)
    }

    pub fn from_int(v: i64, prec: usize) -> Self {
        BigComplex::new(BigFloat::from_i64(v, prec), bf_zero(prec), prec)
    }

    pub fn from_rational(q: &BigRational, prec: usize) -> Self {
        BigComplex::new(bf_from_rational(q, prec), bf_zero(prec), prec)
    }

    pub fn real(re: BigFloat, prec: usize) -> Self {
        BigComplex::new(re, bf_zero(prec), prec)
    }

    pub fn i(prec: usize) -> Self {
        BigComplex::new(bf_zero(prec), BigFloat::from_word(1, prec), prec)
    }

    pub fn pi(prec: usize) -> Self {
        BigComplex::real(bf_pi(prec), prec)
    }

    pub fn two_pi_i(prec: usize) -> Self {
        let two_pi = bf_pi(prec).mul(&BigFloat::from_word(2, prec), prec, RM);
        BigComplex::new(bf_zero(prec), two_pi, prec)
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Same value rounded (or widened) to `prec` bits.
    pub fn with_prec(&self, prec: usize) -> Self {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        re.set_precision(prec, RM).expect("valid precision");
        im.set_precision(prec, RM).expect("valid precision");
        BigComplex { re, im, prec }
    }

    fn p2(&self, rhs: &Self) -> usize {
        self.prec.max(rhs.prec)
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), self.im.neg(), self.prec)
    }

    pub fn scale_real(&self, s: &BigFloat) -> Self {
        let p = self.prec;
        BigComplex::new(self.re.mul(s, p, RM), self.im.mul(s, p, RM), p)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec, RM)
    }

    /// `log2 |z|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        let a = bf_log2_abs(&self.re);
        let b = bf_log2_abs(&self.im);
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + 2f64.powf(2.0 * (lo - hi))).log2()
    }

    /// `|z| <= 2^e`, decided on the log2 magnitude.
    pub fn below_pow2(&self, e: f64) -> bool {
        self.log2_abs() <= e
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(bf_to_f64(&self.re), bf_to_f64(&self.im))
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        let g = p + 32;
        let (m, c, s) = with_consts(|cc| {
            (
                self.re.exp(g, RM, cc),
                self.im.cos(g, RM, cc),
                self.im.sin(g, RM, cc),
            )
        });
        BigComplex::new(m.mul(&c, p, RM), m.mul(&s, p, RM), p)
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> BigFloat {
        let p = self.prec;
        let g = p + 32;
        if self.re.is_zero() {
            if self.im.is_zero() {
                return bf_zero(p);
            }
            let half_pi = bf_pi(g).div(&BigFloat::from_word(2, g), p, RM);
            return if self.im.is_negative() { half_pi.neg() } else { half_pi };
        }
        let t = with_consts(|cc| self.im.div(&self.re, g, RM).atan(g, RM, cc));
        if self.re.is_positive() {
            let mut t = t;
            t.set_precision(p, RM).expect("valid precision");
            t
        } else if self.im.is_negative() {
            t.sub(&bf_pi(g), p, RM)
        } else {
            t.add(&bf_pi(g), p, RM)
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Result<Self> {
        if Field::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec;
        let g = p + 32;
        let wide = self.with_prec(g);
        let half = BigFloat::from_f64(0.5, g);
        let lnr = with_consts(|cc| wide.norm_sqr().ln(g, RM, cc)).mul(&half, p, RM);
        Ok(BigComplex::new(lnr, self.arg(), p))
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec;
        if Field::is_zero(self) {
            return self.clone();
        }
        let g = p + 32;
        let w = self.with_prec(g);
        let r = w.abs();
        let two = BigFloat::from_word(2, g);
        if !w.re.is_negative() {
            let t = r.add(&w.re, g, RM).div(&two, g, RM).sqrt(g, RM);
            let im = w.im.div(&t.mul(&two, g, RM), p, RM);
            let mut t = t;
            t.set_precision(p, RM).expect("valid precision");
            BigComplex::new(t, im, p)
        } else {
            let t = r.sub(&w.re, g, RM).div(&two, g, RM).sqrt(g, RM);
            let re = w.im.abs().div(&t.mul(&two, g, RM), p, RM);
            let mut t = t;
            t.set_precision(p, RM).expect("valid precision");
            let im = if w.im.is_negative() { t.neg() } else { t };
            BigComplex::new(re, im, p)
        }
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = BigComplex::from_int(1, self.prec);
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

    pub fn hex_re(&self) -> String {
        hex_bigfloat(&self.re)
    }

    pub fn hex_im(&self) -> String {
        hex_bigfloat(&self.im)
    }
}

impl Field for BigComplex {
    fn zero() -> Self {
        BigComplex::zero_prec(MIN_PREC)
    }
    fn one() -> Self {
        BigComplex::from_int(1, MIN_PREC)
    }
    fn add(&self, rhs: &Self) -> Self {
        let p = self.p2(rhs);
        BigComplex::new(self.re.add(&rhs.re, p, RM), self.im.add(&rhs.im, p, RM), p)
    }
    fn sub(&self, rhs: &Self) -> Self {
        let p = self.p2(rhs);
        BigComplex::new(self.re.sub(&rhs.re, p, RM), self.im.sub(&rhs.im, p, RM), p)
    }
    fn mul(&self, rhs: &Self) -> Self {
        let p = self.p2(rhs);
        if self.im.is_zero() && rhs.im.is_zero() {
            return BigComplex::new(self.re.mul(&rhs.re, p, RM), bf_zero(p), p);
        }
        let g = p + 8;
        let re = self.re.mul(&rhs.re, g, RM).sub(&self.im.mul(&rhs.im, g, RM), p, RM);
        let im = self.re.mul(&rhs.im, g, RM).add(&self.im.mul(&rhs.re, g, RM), p, RM);
        BigComplex::new(re, im, p)
    }
    fn neg(&self) -> Self {
        BigComplex::new(self.re.neg(), self.im.neg(), self.prec)
    }
    fn inv(&self) -> Result<Self> {
        if Field::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec;
        if self.im.is_zero() {
            return Ok(BigComplex::new(self.re.reciprocal(p, RM), bf_zero(p), p));
        }
        let g = p + 16;
        let w = self.with_prec(g);
        let n = w.norm_sqr();
        Ok(BigComplex::new(
            w.re.div(&n, p, RM),
            w.im.neg().div(&n, p, RM),
            p,
        ))
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.im.is_zero() && !rhs.re.is_zero() {
            let p = self.p2(rhs);
            return Ok(BigComplex::new(
                self.re.div(&rhs.re, p, RM),
                self.im.div(&rhs.re, p, RM),
                p,
            ));
        }
        Ok(self.mul(&rhs.inv()?))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn pivot_weight(&self) -> f64 {
        self.log2_abs()
    }
    fn from_i64(v: i64) -> Self {
        BigComplex::from_int(v, MIN_PREC)
    }
}

impl ComplexField for BigComplex {
    type Real = BigComplex;

    fn re(&self) -> BigComplex {
        BigComplex::real(self.re.clone(), self.prec)
    }
    fn im(&self) -> BigComplex {
        BigComplex::real(self.im.clone(), self.prec)
    }
    fn from_real_parts(re: BigComplex, im: BigComplex) -> Self {
        let p = re.prec.max(im.prec);
        BigComplex::new(re.re, im.re, p)
    }
    fn two_pi_i_like(&self) -> Self {
        BigComplex::two_pi_i(self.prec)
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_c64();
        write!(f, "({:e}{:+e}i)@{}", z.re, z.im, self.prec)
    }
}

fn eval_multiquad(c: &MultiquadElem, prec: usize) -> BigFloat {
    let mut acc = bf_zero(prec);
    for (&m, q) in c.coords() {
        let qf = bf_from_rational(q, prec);
        let term = if m == 1 {
            qf
        } else {
            qf.mul(&BigFloat::from_u64(m, prec).sqrt(prec, RM), prec, RM)
        };
        acc = acc.add(&term, prec, RM);
    }
    acc
}

fn eval_poly(p: &PiPoly, pi: &BigFloat, prec: usize) -> BigFloat {
    let mut acc = bf_zero(prec);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(pi, prec, RM).add(&eval_multiquad(c, prec), prec, RM);
    }
    acc
}

fn eval_real(x: &ExactReal, prec: usize) -> BigFloat {
    if x.is_zero() {
        return bf_zero(prec);
    }
    let pi = bf_pi(prec);
    let n = eval_poly(x.num(), &pi, prec);
    if x.den().is_one() {
        n
    } else {
        n.div(&eval_poly(x.den(), &pi, prec), prec, RM)
    }
}

fn eval_real_adaptive(x: &ExactReal, prec: usize) -> BigFloat {
    if x.is_zero() {
        return bf_zero(prec);
    }
    if let Some(q) = x.as_rational() {
        return bf_from_rational(&q, prec);
    }
    let mut w = prec + 32;
    let mut prev = eval_real(x, w);
    loop {
        let next = eval_real(x, w + 64);
        let diff = next.sub(&prev, w + 64, RM);
        // stop once the answer is stable well below the target precision
        if diff.is_zero() || bf_log2_abs(&diff) < bf_log2_abs(&next) - prec as f64 - 8.0 || w > 64 * prec {
            let mut out = next;
            out.set_precision(prec, RM).expect("valid precision");
            return out;
        }
        prev = next;
        w *= 2;
    }
}

/// Numeric value of an exact scalar at `prec` bits (`prec >= MIN_PREC`).
pub fn to_numeric(x: &ExactComplex, prec: usize) -> BigComplex {
    let prec = prec.max(MIN_PREC);
    BigComplex::new(
        eval_real_adaptive(&x.re, prec),
        eval_real_adaptive(&x.im, prec),
        prec,
    )
}

impl ExactComplex {
    pub fn to_numeric(&self, prec: usize) -> BigComplex {
        to_numeric(self, prec)
    }
}

impl ExactReal {
    pub fn to_numeric(&self, prec: usize) -> BigComplex {
        to_numeric(&ExactComplex::real(self.clone()), prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_and_convert() {
        let x = BigFloat::from_f64(-2.5, 128);
        assert_eq!(bf_round_to_bigint(&x), BigInt::from(-2));
        let y = BigFloat::from_f64(1e20, 128);
        assert_eq!(bf_round_to_bigint(&y), BigInt::from(100_000_000_000_000_000_000u128));
        let big = BigInt::from(12345678901234567890u64) * BigInt::from(98765432109876543210u128);
        assert_eq!(bf_round_to_bigint(&bf_from_bigint(&big)), big);
        assert_eq!(bf_to_f64(&BigFloat::from_f64(0.1, 128)), 0.1);
    }

    #[test]
    fn complex_field_ops() {
        let p = 128;
        let z = BigComplex::from_f64(2.0, 1.0, p);
        let w = z.inv().unwrap();
        let one = z.mul(&w);
        assert!(one.sub(&BigComplex::from_int(1, p)).below_pow2(-120.0));
        let c = BigComplex::from_f64(0.5, -0.5, p);
        assert!(z.mul(&c).to_c64() == Complex64::new(1.5, -0.5));
    }

    #[test]
    fn exp_ln_sqrt() {
        let p = 192;
        let z = BigComplex::from_f64(-2.0, 1.0, p);
        let back = z.exp().ln().unwrap();
        assert!(back.sub(&z).below_pow2(-180.0));
        let neg = BigComplex::from_f64(-1.0, 0.0, p);
        let l = neg.ln().unwrap();
        assert!(l.sub(&BigComplex::pi(p).mul(&BigComplex::i(p))).below_pow2(-185.0));
        let s = BigComplex::from_f64(-4.0, 0.0, p).sqrt();
        assert_eq!(s.to_c64(), Complex64::new(0.0, 2.0));
        let t = BigComplex::from_f64(3.0, -4.0, p).sqrt();
        assert_eq!(t.to_c64(), Complex64::new(2.0, -1.0));
    }

    #[test]
    fn log2_magnitude() {
        let z = BigComplex::from_f64(3.0, 4.0, 128);
        assert!((z.log2_abs() - 5f64.log2()).abs() < 1e-12);
        assert_eq!(BigComplex::zero_prec(64).log2_abs(), f64::NEG_INFINITY);
    }
}
