use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::instance::DensityInstance;
use super::lll::RelationLattice;
use super::verdict::{Certificate, DensityStatus, DensityVerdict};
use crate::error::{Error, Result};
use crate::linalg::{nullspace_numeric, NumericRank};
use crate::presentation::Backend;
use crate::scalars::{bf_log2_abs, BigComplex};

/// Smallest precision accepted by [`waldschmidt_numeric`].
pub const NUMERIC_MIN_PREC: usize = 128;

/// Numeric density test by lattice reduction.
///
/// The lattice `{(s, C N^T s)}` with `C = 2^(3 prec / 4)` is LLL-reduced. A
/// reduced vector with `|N^T s| <= 2^(-2 prec / 3)` and `max |s_j| <= bound` is
/// reported as an integer relation. `DENSE` requires every Gram-Schmidt norm to
/// exceed `bound * sqrt(m)`, which rules out all relations up to `bound`.
pub fn waldschmidt_numeric(inst: &DensityInstance<BigComplex>, max_relation_norm: u64, prec: usize) -> Result<DensityVerdict> {
    if prec < NUMERIC_MIN_PREC {
        return Err(Error::PrecisionTooLow(prec, NUMERIC_MIN_PREC));
    }
    let n = inst.n;
    let m = inst.m();
    let verdict = |status, certificate| DensityVerdict {
        status,
        certificate,
        backend: Backend::Numeric,
    };
    let v = inst.real_matrix().map(|x| x.with_prec(prec));
    let rank = NumericRank::of(&v, prec);
    if rank.ambiguous {
        return Ok(verdict(
            DensityStatus::Inconclusive,
            Certificate::Undecided {
                reason: format!("rank of [Re u; Im u] is ambiguous at {prec} bits (profile {:?})", rank.profile),
            },
        ));
    }
    if rank.rank < 2 * n {
        let mut s = vec![BigInt::zero(); m];
        s[0] = BigInt::one();
        return Ok(verdict(
            DensityStatus::NotDense,
            Certificate::IntegerRelation { s, rank_deficient: true, residual_log2: None },
        ));
    }
    let null = nullspace_numeric(&v, 2 * n);
    let work = 2 * prec;
    let lattice = RelationLattice {
        n: (0..m)
            .map(|i| (0..null.cols()).map(|c| {
                let mut x = null.get(i, c).re().clone();
                x.set_precision(work, crate::scalars::RM).expect("precision");
                x
            }).collect())
            .collect(),
        scale_log2: (3 * prec / 4) as i64,
        prec: work,
    };
    let reduced = lattice.reduce();
    let accept = -(2.0 * prec as f64) / 3.0;
    let bound = BigInt::from(max_relation_norm);
    for (s, tail) in reduced.coords.iter().zip(&reduced.tails) {
        let res = tail.iter().map(bf_log2_abs).fold(f64::NEG_INFINITY, f64::max);
        let small = s.iter().all(|x| x.abs() <= bound);
        if res <= accept && small && s.iter().any(|x| !x.is_zero()) {
            let sign = if s.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) { -1 } else { 1 };
            return Ok(verdict(
                DensityStatus::NotDense,
                Certificate::IntegerRelation {
                    s: s.iter().map(|x| x * sign).collect(),
                    rank_deficient: false,
                    residual_log2: Some(res),
                },
            ));
        }
    }
    let min_gs = reduced.gs_log2.iter().copied().fold(f64::INFINITY, f64::min);
    let needed = max_relation_norm.to_f64().unwrap_or(f64::MAX).log2() + (m as f64).log2() / 2.0;
    if min_gs > needed {
        Ok(verdict(
            DensityStatus::Dense,
            Certificate::LatticeConfidence {
                bound: max_relation_norm,
                min_gram_schmidt_log2: min_gs,
            },
        ))
    } else {
        Ok(verdict(
            DensityStatus::Inconclusive,
            Certificate::Undecided {
                reason: format!(
                    "no relation found, but the reduced lattice does not exclude relations up to {max_relation_norm} (min Gram-Schmidt norm 2^{min_gs:.1})"
                ),
            },
        ))
    }
}
