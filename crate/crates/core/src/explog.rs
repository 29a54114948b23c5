//! Exponential and branch-corrected logarithm on `K_{eta,r}`, and the log
//! generators `f'_k` with `exp(Psi(f'_k)) = Phi(f_k)`.

use serde::Serialize;

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::linalg::{expm, max_log2, BlockStructure, Matrix};
use crate::normal_form::{approx_eq, cluster_tolerance_log2, NormalForm};
use crate::presentation::GroupPresentation;
use crate::scalars::{BigComplex, ExactComplex, Field};

fn prec_of(m: &Matrix<BigComplex>) -> usize {
    m.entries().iter().map(BigComplex::prec).max().unwrap_or(64)
}

fn diag_value(m: &Matrix<BigComplex>) -> BigComplex {
    m.get(0, 0).clone()
}

/// `e^N` for `N` lower triangular with constant diagonal `mu`:
/// `e^mu * sum_{j<m} X^j / j!` with `X = N - mu I` nilpotent.
pub fn block_exp(n: &Matrix<BigComplex>) -> Result<Matrix<BigComplex>> {
    let m = n.rows();
    let prec = prec_of(n);
    let mu = diag_value(n);
    let x = n.sub(&Matrix::identity(m).scale(&mu))?;
    let mut term = Matrix::<BigComplex>::identity(m).map(|v| v.with_prec(prec));
    let mut sum = term.clone();
    for j in 1..m {
        term = term.mul(&x)?.scale(&BigComplex::from_int(1, prec).div(&BigComplex::from_int(j as i64, prec))?);
        sum = sum.add(&term)?;
    }
    Ok(sum.scale(&mu.exp()))
}

/// Logarithm of a lower triangular `M` with constant nonzero diagonal `mu`:
/// `log(mu) I + sum_{j<m} (-1)^{j+1} X^j / j` with `X = M / mu - I`. The
/// diagonal uses the principal branch, or exactly 0 when `force_zero` is set
/// and `mu` is within tolerance of 1.
pub fn block_log(m: &Matrix<BigComplex>, force_zero: bool) -> Result<Matrix<BigComplex>> {
    let size = m.rows();
    let prec = prec_of(m);
    let mu = diag_value(m);
    if mu.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let one = BigComplex::from_int(1, prec);
    let log_mu = if force_zero && approx_eq(&mu, &one, cluster_tolerance_log2(prec)) {
        BigComplex::zero_prec(prec)
    } else {
        mu.ln()?
    };
    let x = m.scale(&mu.inv()?).sub(&Matrix::identity(size))?;
    let mut power = Matrix::<BigComplex>::identity(size).map(|v| v.with_prec(prec));
    let mut sum = Matrix::<BigComplex>::identity(size).scale(&log_mu);
    for j in 1..size {
        power = power.mul(&x)?;
        let c = BigComplex::from_int(if j % 2 == 1 { 1 } else { -1 }, prec).div(&BigComplex::from_int(j as i64, prec))?;
        sum = sum.add(&power.scale(&c))?;
    }
    // forced pattern: strictly upper part and diagonal spread vanish
    for i in 0..size {
        sum.set(i, i, log_mu.clone());
        for j in i + 1..size {
            sum.set(i, j, BigComplex::zero_prec(prec));
        }
    }
    Ok(sum)
}

/// A log generator `f'_k = (B_k, b_k)`.
#[derive(Clone, Debug)]
pub struct LogGenerator {
    /// 1-based generator index.
    pub index: usize,
    pub map: AffineMap<BigComplex>,
    /// Present when the log was supplied exactly.
    pub exact: Option<AffineMap<ExactComplex>>,
    /// Per block, the `k` in `2 i pi k` separating the chosen diagonal log from
    /// the principal one (from 0 on the first block).
    pub branch_shifts: Vec<i64>,
    /// `max |exp(Psi(f')) - Phi(f)|`.
    pub residual: f64,
}

fn pow2(l: f64) -> f64 {
    if l == f64::NEG_INFINITY {
        0.0
    } else {
        l.exp2()
    }
}

fn blocks_of(m: &Matrix<BigComplex>, eta: &BlockStructure) -> Vec<Matrix<BigComplex>> {
    eta.starts()
        .iter()
        .zip(eta.sizes())
        .map(|(&s, &d)| m.block(s, s, d, d))
        .collect()
}

/// `k` with `chosen - reference = 2 i pi k`, when that difference is (numerically) such a multiple.
fn branch_shift(chosen: &BigComplex, reference: &BigComplex) -> Option<i64> {
    let prec = chosen.prec().max(reference.prec());
    let d = chosen.sub(reference);
    let k = d.to_c64().im / (2.0 * std::f64::consts::PI);
    let kr = k.round();
    let back = BigComplex::two_pi_i(prec).mul(&BigComplex::from_int(kr as i64, prec));
    approx_eq(&d, &back, cluster_tolerance_log2(prec)).then_some(kr as i64)
}

fn shifts_for(log_conj: &Matrix<BigComplex>, conj: &Matrix<BigComplex>, eta: &BlockStructure) -> Result<Vec<i64>> {
    let prec = prec_of(conj);
    eta.starts()
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let reference = if j == 0 { BigComplex::zero_prec(prec) } else { conj.get(s, s).ln()? };
            branch_shift(log_conj.get(s, s), &reference)
                .ok_or_else(|| Error::BranchFailure(format!("block {} diagonal is not a logarithm of its eigenvalue", j + 1)))
        })
        .collect()
}

fn residual_log2(log: &AffineMap<BigComplex>, f: &AffineMap<BigComplex>) -> Result<(f64, f64)> {
    let e = expm(&log.psi())?;
    let target = f.phi();
    Ok((max_log2(&e.sub(&target)?), max_log2(&target).max(0.0)))
}

/// Log generators for every generator: supplied ones are verified and passed
/// through, otherwise they are computed blockwise in the normal-form basis.
pub fn compute_log_generators(nf: &NormalForm, g: &GroupPresentation) -> Result<Vec<LogGenerator>> {
    let prec = nf.prec;
    let tol = -(prec as f64) / 2.0;
    let gens = g.generators_numeric(prec)?;
    let supplied = g.logs_numeric(prec).transpose()?;
    let exact = g.logs_exact();
    let mut out = Vec::new();
    for (k, f) in gens.iter().enumerate() {
        let conj = &nf.conjugated[k];
        let map = match &supplied {
            Some(logs) => logs[k].clone(),
            None => {
                let first = conj.get(0, 0);
                if !approx_eq(first, &BigComplex::from_int(1, prec), cluster_tolerance_log2(prec)) {
                    return Err(Error::BranchFailure(format!("generator {}: first block diagonal is not 1", k + 1)));
                }
                let mut nprime = Matrix::from_fn(conj.rows(), conj.cols(), |_, _| BigComplex::zero_prec(prec));
                for (j, (b, &s)) in blocks_of(conj, &nf.eta).iter().zip(&nf.eta.starts()).enumerate() {
                    nprime.set_block(s, s, &block_log(b, j == 0)?);
                }
                let mut n = nf.p.mul(&nprime)?.mul(&nf.p_inv)?;
                let scale = max_log2(&n).max(0.0);
                let row = (0..n.cols()).map(|j| n.get(0, j).log2_abs()).fold(f64::NEG_INFINITY, f64::max);
                if row > scale + tol {
                    return Err(Error::BranchFailure(format!(
                        "generator {}: log leaves F_(n+1) (first row 2^{row:.1})",
                        k + 1
                    )));
                }
                for j in 0..n.cols() {
                    n.set(0, j, BigComplex::zero_prec(prec));
                }
                AffineMap::from_psi(&n)?
            }
        };
        let log_conj = nf.p_inv.mul(&map.psi())?.mul(&nf.p)?;
        let branch_shifts = shifts_for(&log_conj, conj, &nf.eta)?;
        let (res, scale) = residual_log2(&map, f)?;
        if res > scale + tol {
            return Err(Error::ResidualTooLarge {
                index: k + 1,
                residual: pow2(res),
            });
        }
        out.push(LogGenerator {
            index: k + 1,
            map,
            exact: exact.as_ref().map(|e| e[k].clone()),
            branch_shifts,
            residual: pow2(res),
        });
    }
    Ok(out)
}

/// Per-generator findings of [`verify_g1_decomposition`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct G1Entry {
    pub index: usize,
    /// `Psi(f') + 2 i pi I` has a nonzero first row, so it is not in `F_(n+1)`.
    pub shifted_outside_f: bool,
    /// `max |exp(Psi(f') + 2 i pi I) - exp(Psi(f'))|`.
    pub shifted_exp_residual: f64,
    /// Recomputed branch shifts match the recorded ones.
    pub shifts_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct G1Report {
    pub entries: Vec<G1Entry>,
    pub ok: bool,
}

/// Checks `g_1 = g + 2 i pi Z I` on the generators.
pub fn verify_g1_decomposition(logs: &[LogGenerator], nf: &NormalForm) -> Result<G1Report> {
    let prec = nf.prec;
    let tol = -(prec as f64) / 2.0;
    let mut entries = Vec::new();
    for (k, l) in logs.iter().enumerate() {
        let psi = l.map.psi();
        let size = psi.rows();
        let shifted = psi.add(&Matrix::identity(size).scale(&BigComplex::two_pi_i(prec)))?;
        let outside = (0..size).any(|j| !shifted.get(0, j).is_zero());
        let a = expm(&psi)?;
        let b = expm(&shifted)?;
        let res = max_log2(&b.sub(&a)?);
        let log_conj = nf.p_inv.mul(&psi)?.mul(&nf.p)?;
        let again = shifts_for(&log_conj, &nf.conjugated[k], &nf.eta).ok();
        entries.push(G1Entry {
            index: l.index,
            shifted_outside_f: outside,
            shifted_exp_residual: pow2(res),
            shifts_consistent: again.as_deref() == Some(&l.branch_shifts[..]),
        });
    }
    let ok = entries
        .iter()
        .all(|e| e.shifted_outside_f && e.shifts_consistent && (e.shifted_exp_residual == 0.0 || e.shifted_exp_residual.log2() <= tol + 8.0));
    Ok(G1Report { entries, ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(re, im, 128)
    }

    #[test]
    fn exp_of_nilpotent() {
        let n = Matrix::from_rows(vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(3.0, 1.0), c(0.0, 0.0)]]).unwrap();
        let e = block_exp(&n).unwrap();
        assert!(e.get(0, 0).sub(&c(1.0, 0.0)).is_zero());
        assert!(e.get(1, 0).sub(&c(3.0, 1.0)).is_zero());
        assert!(block_exp(&Matrix::zeros(3, 3).map(|x: &BigComplex| x.with_prec(128))).unwrap().field_eq(&Matrix::identity(3)));
    }

    #[test]
    fn log_of_unipotent_and_scalar() {
        let m = Matrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 1.0), c(1.0, 0.0)]]).unwrap();
        let l = block_log(&m, true).unwrap();
        assert!(l.get(0, 0).is_zero() && l.get(1, 1).is_zero());
        assert!(l.get(1, 0).sub(&c(1.0, 1.0)).is_zero());

        let mu = c(-2.0, 1.0).exp();
        let l = block_log(&Matrix::diag(&[mu]), false).unwrap();
        assert!(l.get(0, 0).sub(&c(-2.0, 1.0)).log2_abs() < -100.0);
    }

    #[test]
    fn round_trip_on_a_jordan_block() {
        let n = Matrix::from_rows(vec![
            vec![c(0.5, 2.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, -1.0), c(0.5, 2.0), c(0.0, 0.0)],
            vec![c(0.25, 3.0), c(-2.0, 0.0), c(0.5, 2.0)],
        ])
        .unwrap();
        let back = block_log(&block_exp(&n).unwrap(), false).unwrap();
        assert!(max_log2(&back.sub(&n).unwrap()) < -110.0);
    }

    #[test]
    fn branch_shift_detection() {
        let z = c(0.3, 1.0);
        let shifted = z.add(&BigComplex::two_pi_i(128).mul(&BigComplex::from_int(-2, 128)));
        assert_eq!(branch_shift(&shifted, &z), Some(-2));
        assert_eq!(branch_shift(&c(0.3, 2.0), &z), None);
    }
}
