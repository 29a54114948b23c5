#![allow(dead_code)]

use hyperorbit::explog::compute_log_generators;
use hyperorbit::linalg::{deviation_log2, expm, max_log2, Matrix};
use hyperorbit::normal_form::normal_form;
use hyperorbit::orbit::{sample_orbit, sample_orbit_homogeneous, CoverageConfig};
use hyperorbit::scalars::{BigComplex, ExactComplex, Field};
use hyperorbit::AffineMap;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::random_abelian;

pub const PREC: usize = 192;

/// Seeds and shapes for random abelian groups: `n` in 1..=3, `p` in 1..=3.
pub fn group_params() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..=3, 1usize..=3)
}

/// `Phi(f o g) = Phi(f) Phi(g)`, `Phi(id) = I`, and `Phi(h^-1) = Phi(h)^-1`, exactly.
pub fn phi_homomorphism(f: &AffineMap<ExactComplex>, g: &AffineMap<ExactComplex>, h: &AffineMap<ExactComplex>) -> Result<(), TestCaseError> {
    let lhs = f.compose(g).unwrap().phi();
    let rhs = f.phi().mul(&g.phi()).unwrap();
    prop_assert!(lhs.field_eq(&rhs));
    let n = f.n();
    prop_assert!(AffineMap::<ExactComplex>::identity(n).phi().field_eq(&Matrix::identity(n + 1)));
    let hi = h.inverse().unwrap();
    prop_assert!(hi.phi().field_eq(&h.phi().inverse().unwrap()));
    prop_assert!(h.compose(&hi).unwrap().field_eq(&AffineMap::identity(h.n())));
    Ok(())
}

/// `Psi(f') (1, w) = (0, f'(w))`, exactly.
pub fn psi_on_lifted_point_exact(f: &AffineMap<ExactComplex>, w: &[ExactComplex]) -> Result<(), TestCaseError> {
    let lifted: Vec<ExactComplex> = std::iter::once(ExactComplex::one()).chain(w.iter().cloned()).collect();
    let lhs = f.psi().mul_vec(&lifted).unwrap();
    let rhs: Vec<ExactComplex> = std::iter::once(ExactComplex::zero()).chain(f.apply(w).unwrap()).collect();
    prop_assert!(lhs.iter().zip(&rhs).all(|(a, b)| a.sub(b).is_zero()));
    Ok(())
}

/// For the computed logs and `v0 = P u0`: `Psi(f') v0 = (0, f'(w0))`.
pub fn psi_on_v0(seed: u64, n: usize, p: usize) -> Result<(), TestCaseError> {
    let s = random_abelian(seed, n, p);
    let nf = normal_form(&s.presentation, PREC).map_err(|e| TestCaseError::fail(format!("normal form: {e}")))?;
    let logs = compute_log_generators(&nf, &s.presentation).map_err(|e| TestCaseError::fail(format!("logs: {e}")))?;
    prop_assert!(nf.v0[0].sub(&BigComplex::from_int(1, PREC)).is_zero());
    for l in &logs {
        let lhs = l.map.psi().mul_vec(&nf.v0).unwrap();
        let rhs: Vec<BigComplex> = std::iter::once(BigComplex::zero_prec(PREC)).chain(l.map.apply(&nf.w0).unwrap()).collect();
        prop_assert!(lhs[0].is_zero());
        let a = Matrix::from_cols(&[lhs]).unwrap();
        let b = Matrix::from_cols(&[rhs]).unwrap();
        let dev = deviation_log2(&a, &b);
        prop_assert!(dev <= -(PREC as f64) / 2.0, "deviation 2^{dev}");
    }
    Ok(())
}

/// `exp(Psi(f'_k)) = Phi(f_k)` for every computed log, relative to `|Phi(f_k)|`.
pub fn exp_of_logs(seed: u64, n: usize, p: usize) -> Result<(), TestCaseError> {
    let s = random_abelian(seed, n, p);
    let nf = normal_form(&s.presentation, PREC).map_err(|e| TestCaseError::fail(format!("normal form: {e}")))?;
    let logs = compute_log_generators(&nf, &s.presentation).map_err(|e| TestCaseError::fail(format!("logs: {e}")))?;
    prop_assert_eq!(logs.len(), p);
    for (l, f) in logs.iter().zip(&s.maps) {
        let target = f.map_scalars(|z| hyperorbit::scalars::to_numeric(z, PREC)).phi();
        let e = expm(&l.map.psi()).unwrap();
        let dev = max_log2(&e.sub(&target).unwrap()) - max_log2(&target).max(0.0);
        prop_assert!(dev <= -80.0, "exp/log residual 2^{dev} for generator {}", l.index);
        prop_assert!((0..=n).all(|j| l.map.psi().get(0, j).is_zero()));
    }
    Ok(())
}

/// Orbit through `x` equals the orbit of `(1, x)` under `Phi`, bit for bit.
pub fn homogeneous_orbit(seed: u64, n: usize, p: usize, x: &[(f64, f64)]) -> Result<(), TestCaseError> {
    let s = random_abelian(seed, n, p);
    let x: Vec<Complex64> = x.iter().take(n).map(|&(a, b)| Complex64::new(a, b)).collect();
    let cfg = CoverageConfig::symmetric(n, 2.0, 0.25, 2, 1000, seed);
    let a = sample_orbit(&s.presentation, &x, &cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let b = sample_orbit_homogeneous(&s.presentation, &x, &cfg).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(a.points.len() + a.overflowed.len(), 5usize.pow(p as u32));
    prop_assert_eq!(a, b);
    Ok(())
}
