//! Tolerance-based algorithms for matrices over [`BigComplex`].
//!
//! Tolerances are expressed as `log2` values relative to a scale, so that a
//! tolerance of `-96.0` means "below `2^-96` times the matrix scale".

use astro_float::BigFloat;

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalars::{BigComplex, Field, RM};

type Vector = Vec<BigComplex>;

fn prec_of(m: &Matrix<BigComplex>) -> usize {
    m.entries().iter().map(BigComplex::prec).max().unwrap_or(64)
}

/// Largest `log2 |m_ij|`, `-inf` for the zero matrix.
pub fn max_log2(m: &Matrix<BigComplex>) -> f64 {
    m.entries()
        .iter()
        .map(BigComplex::log2_abs)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn dot_h(a: &[BigComplex], b: &[BigComplex], prec: usize) -> BigComplex {
    let mut acc = BigComplex::zero_prec(prec);
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.conj().mul(y));
    }
    acc
}

fn norm2(a: &[BigComplex], prec: usize) -> BigFloat {
    let mut acc = crate::scalars::bf_zero(prec);
    for x in a {
        acc = acc.add(&x.norm_sqr(), prec, RM);
    }
    acc.sqrt(prec, RM)
}

/// Worst entrywise `log2 |a_ij - b_ij| - log2(1 + max(|a_ij|, |b_ij|))` (up to a
/// factor 2 in the denominator), `-inf` when the matrices agree.
pub fn deviation_log2(a: &Matrix<BigComplex>, b: &Matrix<BigComplex>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "deviation of differently shaped matrices");
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| {
            let scale = x.log2_abs().max(y.log2_abs()).max(0.0);
            x.sub(y).log2_abs() - scale
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `log2` of the pivot norms of a column-pivoted Gram-Schmidt QR, in pivot order.
pub fn rank_profile(m: &Matrix<BigComplex>) -> Vec<f64> {
    let prec = prec_of(m) + 32;
    let mut cols: Vec<Vector> = (0..m.cols()).map(|j| m.col(j)).collect();
    let mut profile = Vec::new();
    for _ in 0..m.rows().min(m.cols()) {
        let norms: Vec<BigFloat> = cols.iter().map(|c| norm2(c, prec)).collect();
        let Some((best, _)) = norms
            .iter()
            .enumerate()
            .map(|(i, n)| (i, crate::scalars::bf_log2_abs(n)))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal).then(b.0.cmp(&a.0)))
        else {
            break;
        };
        let nrm = norms[best].clone();
        if nrm.is_zero() {
            profile.push(f64::NEG_INFINITY);
            break;
        }
        profile.push(crate::scalars::bf_log2_abs(&nrm));
        let q: Vector = cols
            .remove(best)
            .iter()
            .map(|x| BigComplex::new(x.re().div(&nrm, prec, RM), x.im().div(&nrm, prec, RM), prec))
            .collect();
        for c in cols.iter_mut() {
            for _ in 0..2 {
                let h = dot_h(&q, c, prec);
                for (ci, qi) in c.iter_mut().zip(&q) {
                    *ci = ci.sub(&qi.mul(&h));
                }
            }
        }
    }
    profile
}

/// Number of QR pivots above `2^tol_log2` times the largest column norm.
pub fn numeric_rank(m: &Matrix<BigComplex>, tol_log2: f64) -> usize {
    let profile = rank_profile(m);
    let Some(&scale) = profile.first() else { return 0 };
    if scale == f64::NEG_INFINITY {
        return 0;
    }
    profile.iter().take_while(|&&v| v > scale + tol_log2).count()
}

/// Rank decision at working precision `prec`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericRank {
    /// Pivots above `2^(-prec/2)` relative.
    pub rank: usize,
    /// Some pivot lies in the band `2^(-3prec/4) .. 2^(-prec/4)`.
    pub ambiguous: bool,
    /// Pivot norms in `log2`, relative to the largest.
    pub profile: Vec<f64>,
}

impl NumericRank {
    pub fn of(m: &Matrix<BigComplex>, prec: usize) -> Self {
        let raw = rank_profile(m);
        let scale = raw.first().copied().unwrap_or(f64::NEG_INFINITY);
        let profile: Vec<f64> = if scale == f64::NEG_INFINITY {
            vec![]
        } else {
            raw.iter().map(|v| v - scale).collect()
        };
        let p = prec as f64;
        let rank = profile.iter().take_while(|&&v| v > -p / 2.0).count();
        let ambiguous = profile.iter().any(|&v| v > -0.75 * p && v < -0.25 * p);
        NumericRank {
            rank,
            ambiguous,
            profile,
        }
    }
}

/// Gauss-Jordan elimination with complete pivoting for exactly `rank` steps.
/// Returns the reduced pivot rows `[I | F]` in permuted column order and the
/// column permutation.
fn reduce_complete(m: &Matrix<BigComplex>, rank: usize) -> (Matrix<BigComplex>, Vec<usize>) {
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..m.cols()).collect();
    let (rows, cols) = m.shape();
    for k in 0..rank.min(rows).min(cols) {
        let mut best = (k, k, f64::NEG_INFINITY);
        for i in k..rows {
            for j in k..cols {
                let w = a.get(i, j).log2_abs();
                if w > best.2 {
                    best = (i, j, w);
                }
            }
        }
        let (pi, pj, _) = best;
        a.swap_rows(pi, k);
        if pj != k {
            for i in 0..rows {
                let t = a.get(i, pj).clone();
                a.set(i, pj, a.get(i, k).clone());
                a.set(i, k, t);
            }
            perm.swap(pj, k);
        }
        let piv = a.get(k, k).clone();
        let Ok(pinv) = piv.inv() else { break };
        for j in 0..cols {
            let v = a.get(k, j).mul(&pinv);
            a.set(k, j, v);
        }
        for i in 0..rows {
            if i == k {
                continue;
            }
            let f = a.get(i, k).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..cols {
                let v = a.get(i, j).sub(&f.mul(a.get(k, j)));
                a.set(i, j, v);
            }
        }
    }
    (a.block(0, 0, rank.min(rows), cols), perm)
}

/// Basis (as columns) of the nullspace of `m`, assuming `rank(m) = rank`.
pub fn nullspace_numeric(m: &Matrix<BigComplex>, rank: usize) -> Matrix<BigComplex> {
    let cols = m.cols();
    let prec = prec_of(m);
    let (red, perm) = reduce_complete(m, rank);
    let r = red.rows();
    let free = cols - r;
    let mut out = Matrix::from_fn(cols, free, |_, _| BigComplex::zero_prec(prec));
    for f in 0..free {
        out.set(perm[r + f], f, BigComplex::from_int(1, prec));
        for i in 0..r {
            out.set(perm[i], f, red.get(i, r + f).neg());
        }
    }
    out
}

/// Canonical basis of the column span of `v`: the transpose of the reduced row
/// echelon form of `v^T`, so the returned basis restricted to its pivot rows is
/// the identity. Entries below `2^tol_log2` times the scale count as zero.
pub fn canonical_span(v: &Matrix<BigComplex>, tol_log2: f64) -> (Matrix<BigComplex>, Vec<usize>) {
    let prec = prec_of(v);
    let mut a = v.transpose();
    let (rows, cols) = a.shape();
    let thresh = max_log2(&a) + tol_log2;
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        if row == rows {
            break;
        }
        let (p, w) = (row..rows)
            .map(|i| (i, a.get(i, c).log2_abs()))
            .fold((row, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        if w <= thresh {
            continue;
        }
        a.swap_rows(p, row);
        let pinv = a.get(row, c).inv().expect("pivot above threshold");
        for j in 0..cols {
            let v = a.get(row, j).mul(&pinv);
            a.set(row, j, v);
        }
        for i in 0..rows {
            if i == row {
                continue;
            }
            let f = a.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..cols {
                let v = a.get(i, j).sub(&f.mul(a.get(row, j)));
                a.set(i, j, v);
            }
        }
        // exact pivot column
        for i in 0..rows {
            let v = if i == row { BigComplex::from_int(1, prec) } else { BigComplex::zero_prec(prec) };
            a.set(i, c, v);
        }
        pivots.push(c);
        row += 1;
    }
    (a.block(0, 0, row, cols).transpose(), pivots)
}

/// Solves `a x = b` in the least-pivot sense (free variables zero) and returns
/// `x` with `log2 ||a x - b||_max`.
pub fn consistent_solve(a: &Matrix<BigComplex>, b: &[BigComplex], tol_log2: f64) -> Result<(Vector, f64)> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch("consistent_solve: rhs length".into()));
    }
    let prec = prec_of(a);
    let rank = NumericRank::of(a, prec).profile.iter().take_while(|&&v| v > tol_log2).count();
    let bm = Matrix::from_cols(&[b.to_vec()])?;
    let aug = a.hstack(&bm)?;
    // eliminate only over the coefficient columns
    let (red, perm) = reduce_restricted(&aug, rank, a.cols());
    let mut x = vec![BigComplex::zero_prec(prec); a.cols()];
    for i in 0..red.rows() {
        x[perm[i]] = red.get(i, a.cols()).clone();
    }
    let ax = a.mul_vec(&x)?;
    let res = ax
        .iter()
        .zip(b)
        .map(|(u, v)| u.sub(v).log2_abs())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((x, res))
}

fn reduce_restricted(m: &Matrix<BigComplex>, rank: usize, ncoef: usize) -> (Matrix<BigComplex>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = m.shape();
    let mut perm: Vec<usize> = (0..ncoef).collect();
    let steps = rank.min(rows).min(ncoef);
    for k in 0..steps {
        let mut best = (k, k, f64::NEG_INFINITY);
        for i in k..rows {
            for j in k..ncoef {
                let w = a.get(i, j).log2_abs();
                if w > best.2 {
                    best = (i, j, w);
                }
            }
        }
        let (pi, pj, _) = best;
        a.swap_rows(pi, k);
        if pj != k {
            for i in 0..rows {
                let t = a.get(i, pj).clone();
                a.set(i, pj, a.get(i, k).clone());
                a.set(i, k, t);
            }
            perm.swap(pj, k);
        }
        let Ok(pinv) = a.get(k, k).inv() else { break };
        for j in 0..cols {
            let v = a.get(k, j).mul(&pinv);
            a.set(k, j, v);
        }
        for i in 0..rows {
            if i == k {
                continue;
            }
            let f = a.get(i, k).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..cols {
                let v = a.get(i, j).sub(&f.mul(a.get(k, j)));
                a.set(i, j, v);
            }
        }
    }
    (a.block(0, 0, steps, cols), perm)
}

/// Complex Givens rotation `(c, s)` with `[[c, s], [-conj(s), c]] (a, b)^T = (r, 0)^T`.
fn givens(a: &BigComplex, b: &BigComplex, prec: usize) -> (BigComplex, BigComplex) {
    if b.is_zero() {
        return (BigComplex::from_int(1, prec), BigComplex::zero_prec(prec));
    }
    if a.is_zero() {
        return (BigComplex::zero_prec(prec), BigComplex::from_int(1, prec));
    }
    let na = a.abs();
    let r = a.norm_sqr().add(&b.norm_sqr(), prec, RM).sqrt(prec, RM);
    let c = BigComplex::real(na.div(&r, prec, RM), prec);
    let phase = BigComplex::new(a.re().div(&na, prec, RM), a.im().div(&na, prec, RM), prec);
    let cb = b.conj();
    let s = phase.mul(&cb);
    let s = BigComplex::new(s.re().div(&r, prec, RM), s.im().div(&r, prec, RM), prec);
    (c, s)
}

fn rotate_rows(h: &mut Matrix<BigComplex>, p: usize, q: usize, c: &BigComplex, s: &BigComplex, from: usize) {
    let sc = s.conj();
    for j in from..h.cols() {
        let x = h.get(p, j).clone();
        let y = h.get(q, j).clone();
        h.set(p, j, c.mul(&x).add(&s.mul(&y)));
        h.set(q, j, c.mul(&y).sub(&sc.mul(&x)));
    }
}

fn rotate_cols(h: &mut Matrix<BigComplex>, p: usize, q: usize, c: &BigComplex, s: &BigComplex, to: usize) {
    let sc = s.conj();
    for i in 0..to {
        let x = h.get(i, p).clone();
        let y = h.get(i, q).clone();
        h.set(i, p, c.mul(&x).add(&sc.mul(&y)));
        h.set(i, q, c.mul(&y).sub(&s.mul(&x)));
    }
}

/// Eigenvalues of a square matrix by Hessenberg reduction and shifted QR.
pub fn eigenvalues(m: &Matrix<BigComplex>) -> Result<Vec<BigComplex>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("eigenvalues of a non-square matrix".into()));
    }
    let n = m.rows();
    let prec = prec_of(m) + 32;
    let mut h = m.map(|x| x.with_prec(prec));
    // Hessenberg form
    for k in 0..n.saturating_sub(2) {
        for i in k + 2..n {
            if h.get(i, k).is_zero() {
                continue;
            }
            let (c, s) = givens(&h.get(k + 1, k).clone(), &h.get(i, k).clone(), prec);
            rotate_rows(&mut h, k + 1, i, &c, &s, 0);
            rotate_cols(&mut h, k + 1, i, &c, &s, n);
        }
    }
    let eps = -(prec as f64) + 8.0;
    let scale = max_log2(&h).max(-(prec as f64));
    let mut out: Vec<Option<BigComplex>> = vec![None; n];
    let mut hi = n;
    let mut iters = 0usize;
    let mut since = 0usize;
    while hi > 0 {
        if hi == 1 {
            out[0] = Some(h.get(0, 0).clone());
            break;
        }
        // find the active window [lo, hi)
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h.get(lo, lo - 1).log2_abs();
            let diag = h.get(lo, lo).log2_abs().max(h.get(lo - 1, lo - 1).log2_abs()).max(scale);
            if sub <= diag + eps {
                h.set(lo, lo - 1, BigComplex::zero_prec(prec));
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            out[hi - 1] = Some(h.get(hi - 1, hi - 1).clone());
            hi -= 1;
            since = 0;
            continue;
        }
        iters += 1;
        since += 1;
        if iters > 200 * n {
            return Err(Error::EigenSplitFailure("QR iteration did not converge".into()));
        }
        // Wilkinson shift from the trailing 2x2 block
        let a = h.get(hi - 2, hi - 2).clone();
        let b = h.get(hi - 2, hi - 1).clone();
        let c = h.get(hi - 1, hi - 2).clone();
        let d = h.get(hi - 1, hi - 1).clone();
        let half = BigComplex::from_f64(0.5, 0.0, prec);
        let tr2 = a.add(&d).mul(&half);
        let diff = a.sub(&d).mul(&half);
        let disc = diff.mul(&diff).add(&b.mul(&c)).sqrt();
        let l1 = tr2.add(&disc);
        let l2 = tr2.sub(&disc);
        let mut mu = if l1.sub(&d).log2_abs() <= l2.sub(&d).log2_abs() { l1 } else { l2 };
        if since % 11 == 10 {
            // exceptional shift
            mu = mu.add(&BigComplex::real(h.get(hi - 1, hi - 2).abs(), prec).mul(&BigComplex::from_f64(0.75, 0.3, prec)));
        }
        for i in lo..hi {
            let v = h.get(i, i).sub(&mu);
            h.set(i, i, v);
        }
        let mut rots = Vec::with_capacity(hi - lo - 1);
        for k in lo..hi - 1 {
            let (cc, ss) = givens(&h.get(k, k).clone(), &h.get(k + 1, k).clone(), prec);
            rotate_rows(&mut h, k, k + 1, &cc, &ss, lo);
            h.set(k + 1, k, BigComplex::zero_prec(prec));
            rots.push((k, cc, ss));
        }
        for (k, cc, ss) in rots {
            rotate_cols(&mut h, k, k + 1, &cc, &ss, hi);
        }
        for i in lo..hi {
            let v = h.get(i, i).add(&mu);
            h.set(i, i, v);
        }
    }
    let p0 = prec_of(m);
    Ok(out.into_iter().map(|z| z.expect("all eigenvalues deflated").with_prec(p0)).collect())
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(m: &Matrix<BigComplex>) -> Result<Matrix<BigComplex>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("expm of a non-square matrix".into()));
    }
    let n = m.rows();
    let prec = prec_of(m);
    let work = prec + 32;
    let a = m.map(|x| x.with_prec(work));
    let norm = max_log2(&a) + (n as f64).log2();
    let s = if norm > -1.0 { (norm + 1.0).ceil() as u32 } else { 0 };
    let scale = BigComplex::real(BigFloat::from_word(1, work).div(&BigFloat::from_word(2, work).powi(s as usize, work, RM), work, RM), work);
    let a = a.scale(&scale);
    let mut term = Matrix::<BigComplex>::identity(n).map(|x| x.with_prec(work));
    let mut sum = term.clone();
    for k in 1..10_000 {
        term = term.mul(&a)?.scale(&BigComplex::from_int(1, work).div(&BigComplex::from_int(k, work))?);
        sum = sum.add(&term)?;
        if max_log2(&term) < -(work as f64) - 4.0 {
            break;
        }
    }
    for _ in 0..s {
        sum = sum.mul(&sum)?;
    }
    Ok(sum.map(|x| x.with_prec(prec)))
}
