use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::instance::DensityInstance;
use super::verdict::{Certificate, DensityStatus, DensityVerdict};
use crate::error::Result;
use crate::linalg::{exact_rank, exact_rank_nullspace, Matrix};
use crate::presentation::Backend;
use crate::scalars::{monomial_coords, ExactComplex, ExactReal, Field, MonomialKey, PiPoly};

const PI_WINDOW: std::ops::RangeInclusive<i64> = -4096..=4096;

/// Scales a nonzero rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(BigInt::one(), |x| if x.is_negative() { -BigInt::one() } else { BigInt::one() });
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|x| x / &g * &sign).collect()
}

fn poly_lcm(a: &PiPoly, b: &PiPoly) -> Result<PiPoly> {
    let g = a.gcd(b)?;
    a.mul(b).div_exact(&g)?.monic()
}

/// Multiplies a vector by the lcm of its denominators, leaving polynomial entries.
fn clear_denominators(v: &[ExactReal]) -> Result<Vec<ExactReal>> {
    let mut l = PiPoly::one();
    for x in v {
        l = poly_lcm(&l, x.den())?;
    }
    v.iter()
        .map(|x| Ok(ExactReal::from_poly(x.num().mul(&l.div_exact(x.den())?))))
        .collect()
}

/// Rational matrix whose kernel is `{ s in Q^m : N^T s = 0 }` for the given
/// nullspace basis `N` (each vector of length `m`).
pub fn rational_system(null_basis: &[Vec<ExactReal>], m: usize) -> Result<Matrix<BigRational>> {
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for v in null_basis {
        let cleared = clear_denominators(v)?;
        let mut by_key: BTreeMap<MonomialKey, Vec<BigRational>> = BTreeMap::new();
        for (j, x) in cleared.iter().enumerate() {
            for (key, q) in monomial_coords(x, PI_WINDOW)? {
                by_key.entry(key).or_insert_with(|| vec![<BigRational as Zero>::zero(); m])[j] = q;
            }
        }
        rows.extend(by_key.into_values());
    }
    if rows.is_empty() {
        return Ok(Matrix::from_fn(0, m, |_, _| <BigRational as Zero>::zero()));
    }
    Matrix::from_rows(rows)
}

/// Exact density test: `DENSE` iff `rank_F V = 2n` and no nonzero rational
/// vector lies in the row space of `V = [Re u; Im u]`.
pub fn waldschmidt_exact(inst: &DensityInstance<ExactComplex>) -> Result<DensityVerdict> {
    let n = inst.n;
    let m = inst.m();
    let v = inst.real_matrix();
    let (rank, null) = exact_rank_nullspace(&v);
    if rank < 2 * n {
        let mut s = vec![BigInt::zero(); m];
        s[0] = BigInt::one();
        return Ok(DensityVerdict {
            status: DensityStatus::NotDense,
            certificate: Certificate::IntegerRelation { s, rank_deficient: true, residual_log2: None },
            backend: Backend::Exact,
        });
    }
    let mq = rational_system(&null, m)?;
    let (qrank, qnull) = if mq.rows() == 0 {
        (0, (0..m).map(|j| (0..m).map(|i| if i == j { <BigRational as One>::one() } else { <BigRational as Zero>::zero() }).collect()).collect())
    } else {
        exact_rank_nullspace(&mq)
    };
    match qnull.first() {
        None => Ok(DensityVerdict {
            status: DensityStatus::Dense,
            certificate: Certificate::ExactRankProof { rank, q_rows: mq.rows(), q_cols: qrank },
            backend: Backend::Exact,
        }),
        Some(s) => Ok(DensityVerdict {
            status: DensityStatus::NotDense,
            certificate: Certificate::IntegerRelation {
                s: primitive_integer(s),
                rank_deficient: false,
                residual_log2: None,
            },
            backend: Backend::Exact,
        }),
    }
}

/// `rank [Re u; Im u; s]` computed exactly, eliminating rows in the given order.
pub fn relation_rank_exact(inst: &DensityInstance<ExactComplex>, s: &[BigInt], row_order: &[usize]) -> usize {
    let v = inst.real_matrix();
    let srow: Vec<ExactReal> = s.iter().map(|x| ExactReal::rational(BigRational::from(x.clone()))).collect();
    let mut rows = v.to_rows();
    rows.push(srow);
    let permuted: Vec<Vec<ExactReal>> = row_order.iter().map(|&i| rows[i].clone()).collect();
    exact_rank(&Matrix::from_rows(permuted).expect("rectangular"))
}

/// For `m = 2n + 1`: coefficients `c_j` with
/// `det [Re u; Im u; s] = sum_j c_j s_j` (cofactor expansion along the last row).
pub fn square_determinant_form(inst: &DensityInstance<ExactComplex>) -> Result<Vec<ExactReal>> {
    let n = inst.n;
    let m = inst.m();
    if m != 2 * n + 1 {
        return Err(crate::error::Error::DimensionMismatch(format!(
            "square determinant needs m = 2n + 1 = {}, got {m}",
            2 * n + 1
        )));
    }
    let v = inst.real_matrix();
    let rows: Vec<usize> = (0..2 * n).collect();
    (0..m)
        .map(|j| {
            let cols: Vec<usize> = (0..m).filter(|&c| c != j).collect();
            let minor = v.select(&rows, &cols).determinant()?;
            let sign = if (2 * n + j).is_multiple_of(2) { ExactReal::one() } else { ExactReal::one().neg() };
            Ok(minor.mul(&sign))
        })
        .collect()
}
