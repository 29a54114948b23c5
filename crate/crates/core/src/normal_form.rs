//! Conjugation of the group into block lower-triangular form: a matrix
//! `P = Phi(g)` and a partition `eta` of `n + 1` with every `P^-1 Phi(f_k) P`
//! in `K*_{eta,r}`, together with the witness vectors `u0`, `v0`, `w0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::linalg::{
    block_residual_log2, canonical_span, consistent_solve, eigenvalues, max_log2, nullspace_numeric, rank_profile,
    snap_to_blocks, BlockStructure, Matrix,
};
use crate::presentation::{numeric_inverse, GroupPresentation, OrbitEvaluator};
use crate::scalars::{BigComplex, ExactComplex, Field};

const GUARD: usize = 64;

/// Two eigenvalues are identified when they differ by at most this (relative, `log2`).
pub fn cluster_tolerance_log2(prec: usize) -> f64 {
    -(prec as f64) / 3.0
}

fn span_tolerance_log2(prec: usize) -> f64 {
    -(prec as f64) / 2.0
}

/// `|a - b| <= 2^tol * max(1, |a|, |b|)`.
pub fn approx_eq(a: &BigComplex, b: &BigComplex, tol_log2: f64) -> bool {
    let scale = a.log2_abs().max(b.log2_abs()).max(0.0);
    a.sub(b).log2_abs() <= scale + tol_log2
}

/// Result of [`linear_normal_form`].
#[derive(Clone, Debug)]
pub struct LinearNormalForm {
    /// Columns: concatenated triangularizing bases of the common blocks.
    pub q: Matrix<BigComplex>,
    pub blocks: BlockStructure,
    /// `eigenvalues[j][k]`: eigenvalue of generator `k` on block `j`.
    pub eigenvalues: Vec<Vec<BigComplex>>,
}

fn restriction(a: &Matrix<BigComplex>, v: &Matrix<BigComplex>, pivots: &[usize]) -> Result<(Matrix<BigComplex>, f64)> {
    let av = a.mul(v)?;
    let all: Vec<usize> = (0..av.cols()).collect();
    let r = av.select(pivots, &all);
    let back = v.mul(&r)?;
    let dev = max_log2(&av.sub(&back)?) - max_log2(a).max(0.0);
    Ok((r, dev))
}

fn clusters(values: &[BigComplex], tol: f64) -> Vec<(BigComplex, usize)> {
    let mut label: Vec<usize> = (0..values.len()).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while l[i] != i {
            l[i] = l[l[i]];
            i = l[i];
        }
        i
    }
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if approx_eq(&values[i], &values[j], tol) {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<(usize, BigComplex, usize)> = Vec::new();
    for i in 0..values.len() {
        let root = find(&mut label, i);
        match out.iter_mut().find(|c| c.0 == root) {
            Some(c) => {
                c.1 = c.1.add(&values[i]);
                c.2 += 1;
            }
            None => out.push((root, values[i].clone(), 1)),
        }
    }
    out.into_iter()
        .map(|(_, sum, m)| {
            let prec = sum.prec();
            (sum.div(&BigComplex::from_int(m as i64, prec)).expect("nonzero"), m)
        })
        .collect()
}

/// Picks `count` of `candidates` that are independent modulo `current`,
/// greedily by largest residual after orthogonal projection.
fn extend_basis(current: &[Vec<BigComplex>], candidates: &[Vec<BigComplex>], count: usize, prec: usize) -> Vec<Vec<BigComplex>> {
    let mut ortho: Vec<Vec<BigComplex>> = Vec::new();
    let project = |ortho: &[Vec<BigComplex>], v: &[BigComplex]| -> Vec<BigComplex> {
        let mut r = v.to_vec();
        for _ in 0..2 {
            for q in ortho {
                let mut dot = BigComplex::zero_prec(prec);
                for (a, b) in q.iter().zip(&r) {
                    dot = dot.add(&a.conj().mul(b));
                }
                for (x, a) in r.iter_mut().zip(q) {
                    *x = x.sub(&dot.mul(a));
                }
            }
        }
        r
    };
    let normalize = |v: Vec<BigComplex>| -> Vec<BigComplex> {
        let mut s = BigComplex::zero_prec(prec);
        for x in &v {
            s = s.add(&BigComplex::real(x.norm_sqr(), prec));
        }
        let inv = s.sqrt().inv().expect("nonzero residual");
        v.iter().map(|x| x.mul(&inv)).collect()
    };
    for v in current {
        let r = project(&ortho, v);
        ortho.push(normalize(r));
    }
    let mut chosen = Vec::new();
    let mut used = vec![false; candidates.len()];
    for _ in 0..count {
        let mut best: Option<(usize, f64, Vec<BigComplex>)> = None;
        for (i, c) in candidates.iter().enumerate() {
            if used[i] {
                continue;
            }
            let r = project(&ortho, c);
            let w = r.iter().map(BigComplex::log2_abs).fold(f64::NEG_INFINITY, f64::max)
                - c.iter().map(BigComplex::log2_abs).fold(f64::NEG_INFINITY, f64::max);
            if best.as_ref().is_none_or(|b| w > b.1 + 1e-6) {
                best = Some((i, w, r));
            }
        }
        let (i, _, r) = best.expect("enough candidates");
        used[i] = true;
        ortho.push(normalize(r));
        chosen.push(candidates[i].clone());
    }
    chosen
}

/// Nilpotent commuting `d x d` matrices: a basis (as columns) in which all of
/// them are strictly lower triangular.
fn triangularize(nils: &[Matrix<BigComplex>], d: usize, ref_log2: f64, prec: usize) -> Result<Matrix<BigComplex>> {
    let tol = span_tolerance_log2(prec);
    let mut monomials: Vec<(usize, Matrix<BigComplex>)> = vec![(0, Matrix::identity(d).map(|x: &BigComplex| x.with_prec(prec)))];
    let mut flag: Vec<Vec<BigComplex>> = Vec::new();
    let mut groups: Vec<Vec<Vec<BigComplex>>> = Vec::new();
    for j in 1..=d {
        if flag.len() == d {
            break;
        }
        let mut next = Vec::new();
        for (last, m) in &monomials {
            for (k, nk) in nils.iter().enumerate().skip(*last) {
                next.push((k, nk.mul(m)?));
            }
        }
        monomials = next;
        let stacked = monomials
            .iter()
            .map(|(_, m)| m.clone())
            .reduce(|a, b| a.vstack(&b).expect("same width"))
            .unwrap_or_else(|| Matrix::from_fn(1, d, |_, _| BigComplex::zero_prec(prec)));
        let cut = (j as f64) * ref_log2.max(0.0) + tol;
        let rank = rank_profile(&stacked).iter().take_while(|&&v| v > cut).count();
        let kernel = nullspace_numeric(&stacked, rank);
        let (w, _) = canonical_span(&kernel, tol);
        let dim = w.cols();
        if dim <= flag.len() {
            return Err(Error::EigenSplitFailure(format!(
                "kernel flag stalled at dimension {} of {d}",
                flag.len()
            )));
        }
        let cands: Vec<Vec<BigComplex>> = (0..dim).map(|c| w.col(c)).collect();
        let new = extend_basis(&flag, &cands, dim - flag.len(), prec);
        flag.extend(new.iter().cloned());
        groups.push(new);
    }
    if flag.len() != d {
        return Err(Error::EigenSplitFailure("restrictions are not nilpotent".into()));
    }
    let ordered: Vec<Vec<BigComplex>> = groups.into_iter().rev().flatten().collect();
    Matrix::from_cols(&ordered)
}

/// Common generalized eigenspaces of commuting matrices, each triangularized.
pub fn linear_normal_form(linear_parts: &[Matrix<BigComplex>], prec: usize) -> Result<LinearNormalForm> {
    let n = linear_parts.first().map(Matrix::rows).ok_or(Error::NotCommuting)?;
    let work = prec + GUARD;
    let mats: Vec<Matrix<BigComplex>> = linear_parts.iter().map(|m| m.map(|x| x.with_prec(work))).collect();
    let tol = span_tolerance_log2(prec);
    let ctol = cluster_tolerance_log2(prec);

    let mut spaces: Vec<(Matrix<BigComplex>, Vec<usize>)> =
        vec![(Matrix::identity(n).map(|x: &BigComplex| x.with_prec(work)), (0..n).collect())];
    for a in &mats {
        let mut next = Vec::new();
        for (v, piv) in spaces {
            let d = v.cols();
            let (r, dev) = restriction(a, &v, &piv)?;
            if dev > tol {
                return Err(Error::NotCommuting);
            }
            let eig = eigenvalues(&r)?;
            let cl = clusters(&eig, ctol);
            if cl.len() == 1 {
                next.push((v, piv));
                continue;
            }
            let mut total = 0;
            for (lambda, m) in cl {
                let shifted = r.sub(&Matrix::identity(d).scale(&lambda))?;
                let power = shifted.pow(m as u64)?;
                let k = nullspace_numeric(&power, d - m);
                let (sub, spiv) = canonical_span(&v.mul(&k)?, tol);
                if sub.cols() != m {
                    return Err(Error::EigenSplitFailure(format!(
                        "eigenvalue cluster of multiplicity {m} spans dimension {}",
                        sub.cols()
                    )));
                }
                total += m;
                next.push((sub, spiv));
            }
            if total != d {
                return Err(Error::EigenSplitFailure("cluster multiplicities do not add up".into()));
            }
        }
        spaces = next;
    }
    spaces.sort_by(|a, b| a.1.cmp(&b.1));

    let mut cols = Vec::new();
    let mut sizes = Vec::new();
    let mut table = Vec::new();
    for (v, piv) in &spaces {
        let d = v.cols();
        let mut nils = Vec::new();
        let mut mus = Vec::new();
        let mut ref_log2 = f64::NEG_INFINITY;
        for a in &mats {
            let (r, dev) = restriction(a, v, piv)?;
            if dev > tol {
                return Err(Error::NotCommuting);
            }
            let mut tr = BigComplex::zero_prec(work);
            for i in 0..d {
                tr = tr.add(r.get(i, i));
            }
            let mu = tr.div(&BigComplex::from_int(d as i64, work))?;
            ref_log2 = ref_log2.max(max_log2(&r));
            nils.push(r.sub(&Matrix::identity(d).scale(&mu))?);
            mus.push(mu.with_prec(prec));
        }
        let t = triangularize(&nils, d, ref_log2, work)?;
        let basis = v.mul(&t)?;
        for c in 0..d {
            cols.push(basis.col(c));
        }
        sizes.push(d);
        table.push(mus);
    }
    Ok(LinearNormalForm {
        q: Matrix::from_cols(&cols)?,
        blocks: BlockStructure::new(sizes)?,
        eigenvalues: table,
    })
}

/// How the normal form was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type")]
pub enum NormalFormMethod {
    /// User-supplied `P` and `eta`, verified.
    Hint,
    /// Some blocks carry eigenvalue 1 for every generator; `separating` is the
    /// exponent vector of the element used to clear the other translations.
    Case1 { unipotent_dim: usize, separating: Option<Vec<i64>> },
    /// No common eigenvalue-1 block: conjugation by the common fixed point.
    Case2,
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    pub prec: usize,
    pub p: Matrix<BigComplex>,
    pub p_inv: Matrix<BigComplex>,
    pub p_exact: Option<Matrix<ExactComplex>>,
    pub eta: BlockStructure,
    pub u0: Vec<BigComplex>,
    pub v0: Vec<BigComplex>,
    pub w0: Vec<BigComplex>,
    pub w0_exact: Option<Vec<ExactComplex>>,
    /// `P^-1 Phi(f_k) P`, snapped onto the `K_{eta,r}` pattern.
    pub conjugated: Vec<Matrix<BigComplex>>,
    /// Worst relative deviation from the pattern before snapping (`log2`).
    pub residual_log2: f64,
    pub method: NormalFormMethod,
}

impl NormalForm {
    pub fn r(&self) -> usize {
        self.eta.r()
    }

    /// `p2(P e^(k))` for 1-based block index `k`: column `start_k` of `P` without its first entry.
    pub fn lattice_direction(&self, k: usize) -> Vec<BigComplex> {
        let s = self.eta.starts()[k - 1];
        (1..self.p.rows()).map(|i| self.p.get(i, s).clone()).collect()
    }

    pub fn lattice_direction_exact(&self, k: usize) -> Option<Vec<ExactComplex>> {
        let p = self.p_exact.as_ref()?;
        let s = self.eta.starts()[k - 1];
        Some((1..p.rows()).map(|i| p.get(i, s).clone()).collect())
    }
}

fn phi_numeric(g: &GroupPresentation, prec: usize) -> Result<Vec<Matrix<BigComplex>>> {
    Ok(g.generators_numeric(prec)?.iter().map(AffineMap::phi).collect())
}

fn finish(
    g: &GroupPresentation,
    p: Matrix<BigComplex>,
    p_exact: Option<Matrix<ExactComplex>>,
    eta: BlockStructure,
    method: NormalFormMethod,
    prec: usize,
) -> Result<NormalForm> {
    let size = g.n + 1;
    if p.shape() != (size, size) || eta.order() != size {
        return Err(Error::BadNormalForm(format!("P must be {size}x{size} and eta must sum to {size}")));
    }
    let first_row_ok = p.get(0, 0).sub(&BigComplex::from_int(1, prec)).is_zero() && (1..size).all(|j| p.get(0, j).is_zero());
    if !first_row_ok {
        return Err(Error::BadNormalForm("P must have first row (1, 0, ..., 0)".into()));
    }
    let p_inv = numeric_inverse(&p, prec).map_err(|_| Error::BadNormalForm("P is singular".into()))?;
    let tol = span_tolerance_log2(prec);
    let one = BigComplex::from_int(1, prec);
    let mut conjugated = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for (k, phi) in phi_numeric(g, prec)?.iter().enumerate() {
        let m = p_inv.mul(phi)?.mul(&p)?;
        let dev = block_residual_log2(&m, &eta) - max_log2(&m).max(0.0);
        worst = worst.max(dev);
        if dev > tol {
            return Err(Error::BadNormalForm(format!(
                "generator {} is not block lower triangular after conjugation (deviation 2^{dev:.1})",
                k + 1
            )));
        }
        conjugated.push(snap_to_blocks(&m, &eta, Some(&one)));
    }
    let u0: Vec<BigComplex> = eta.start_indicator::<BigComplex>().iter().map(|x| x.with_prec(prec)).collect();
    let v0 = p.mul_vec(&u0)?;
    if !v0[0].sub(&one).is_zero() {
        return Err(Error::BadNormalForm("P u0 is not in {1} x C^n".into()));
    }
    let w0 = v0[1..].to_vec();
    let w0_exact = p_exact.as_ref().map(|pe| {
        let u: Vec<ExactComplex> = eta.start_indicator();
        pe.mul_vec(&u).expect("conformable")[1..].to_vec()
    });
    Ok(NormalForm {
        prec,
        p,
        p_inv,
        p_exact,
        eta,
        u0,
        v0,
        w0,
        w0_exact,
        conjugated,
        residual_log2: worst,
        method,
    })
}

/// Verifies a user-supplied `(P, eta)`.
pub fn normal_form_from_hint(g: &GroupPresentation, prec: usize) -> Result<NormalForm> {
    let (Some(p), Some(eta)) = (g.p_hint_numeric(prec), g.eta()) else {
        return Err(Error::BadNormalForm("no normal form hint supplied".into()));
    };
    let p_exact = g.p_hint_exact();
    if let Some(pe) = &p_exact {
        let ok = pe.get(0, 0).sub(&ExactComplex::one()).is_zero() && (1..pe.cols()).all(|j| pe.get(0, j).is_zero());
        if !ok {
            return Err(Error::BadNormalForm("P must have first row (1, 0, ..., 0)".into()));
        }
    }
    finish(g, p?, p_exact, eta, NormalFormMethod::Hint, prec)
}

/// Exponent vector of a group element whose eigenvalue differs from 1 on every
/// block listed in `table` (`table[j][k]`: eigenvalue of generator `k` on block `j`).
/// Single generators are tried first, then seeded random words with exponents in `[-3, 3]`.
pub fn separating_element_search(table: &[Vec<BigComplex>], budget: usize, seed: u64, prec: usize) -> Result<Vec<i64>> {
    let p = table.first().map_or(0, Vec::len);
    let tol = cluster_tolerance_log2(prec);
    let one = BigComplex::from_int(1, prec);
    let separates = |e: &[i64]| -> Result<bool> {
        for row in table {
            let mut prod = one.clone();
            for (mu, &k) in row.iter().zip(e) {
                if k != 0 {
                    prod = prod.mul(&mu.powi(k)?);
                }
            }
            if approx_eq(&prod, &one, tol) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for k in 0..p {
        let mut e = vec![0; p];
        e[k] = 1;
        if separates(&e)? {
            return Ok(e);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let e: Vec<i64> = (0..p).map(|_| rng.gen_range(-3..=3)).collect();
        if e.iter().any(|&x| x != 0) && separates(&e)? {
            return Ok(e);
        }
    }
    Err(Error::NoSeparatingElement)
}

/// Search budget for [`separating_element_search`].
pub const SEPARATING_BUDGET: usize = 2000;

/// Computes `P` and `eta` from the generators (Case 1 or Case 2).
pub fn affine_normal_form(g: &GroupPresentation, prec: usize) -> Result<NormalForm> {
    let n = g.n;
    let work = prec + GUARD;
    let maps = g.generators_numeric(work)?;
    let linear: Vec<Matrix<BigComplex>> = maps.iter().map(|f| f.linear().clone()).collect();
    let lnf = linear_normal_form(&linear, prec)?;
    let one = BigComplex::from_int(1, work);
    let ctol = cluster_tolerance_log2(prec);

    let is_j: Vec<bool> = lnf
        .eigenvalues
        .iter()
        .map(|row| row.iter().all(|mu| approx_eq(mu, &one, ctol)))
        .collect();
    let starts = lnf.blocks.starts();
    let mut order = Vec::new();
    let mut h_sizes = Vec::new();
    let mut h_table = Vec::new();
    let mut j_dim = 0;
    for (b, &size) in lnf.blocks.sizes().iter().enumerate() {
        if is_j[b] {
            order.extend(starts[b]..starts[b] + size);
            j_dim += size;
        }
    }
    for (b, &size) in lnf.blocks.sizes().iter().enumerate() {
        if !is_j[b] {
            order.extend(starts[b]..starts[b] + size);
            h_sizes.push(size);
            h_table.push(lnf.eigenvalues[b].clone());
        }
    }
    let all_rows: Vec<usize> = (0..n).collect();
    let q = lnf.q.select(&all_rows, &order);
    let q_inv = numeric_inverse(&q, work)?;

    let tol = span_tolerance_log2(prec);
    let (shift, eta, method) = if j_dim == 0 {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for f in &maps {
            let m = f.linear().sub(&Matrix::identity(n).map(|x: &BigComplex| x.with_prec(work)))?;
            rows.extend(m.to_rows());
            rhs.extend(f.translation().iter().map(Field::neg));
        }
        let stacked = Matrix::from_rows(rows)?;
        let (v1, res) = consistent_solve(&stacked, &rhs, tol)?;
        let scale = max_log2(&stacked).max(rhs.iter().map(BigComplex::log2_abs).fold(0.0, f64::max));
        if res > scale + tol {
            return Err(Error::FixedPointSolveFailure(format!("residual 2^{res:.1}")));
        }
        let mut sizes = vec![1];
        sizes.extend(h_sizes);
        (v1, BlockStructure::new(sizes)?, NormalFormMethod::Case2)
    } else {
        let h_dim = n - j_dim;
        let (x, separating) = if h_dim == 0 {
            (vec![], None)
        } else {
            let word = separating_element_search(&h_table, SEPARATING_BUDGET, 0, prec)?;
            let eval = OrbitEvaluator::with_inverter(maps.clone(), |f| {
                let prec = f.translation().iter().map(BigComplex::prec).max().unwrap_or(64);
                let inv = numeric_inverse(f.linear(), prec)?;
                let t: Vec<BigComplex> = inv.mul_vec(f.translation())?.iter().map(Field::neg).collect();
                AffineMap::new(inv, t)
            });
            let f0 = eval.word(&word)?;
            let b = q_inv.mul(f0.linear())?.mul(&q)?;
            let bt = q_inv.mul_vec(f0.translation())?;
            let h: Vec<usize> = (j_dim..n).collect();
            let bh = b.select(&h, &h).sub(&Matrix::identity(h_dim).map(|x: &BigComplex| x.with_prec(work)))?;
            let rhs: Vec<BigComplex> = h.iter().map(|&i| bt[i].neg()).collect();
            let (x, res) = consistent_solve(&bh, &rhs, tol)?;
            let scale = max_log2(&bh).max(rhs.iter().map(BigComplex::log2_abs).fold(0.0, f64::max));
            if res > scale + tol {
                return Err(Error::NoSeparatingElement);
            }
            (x, Some(word))
        };
        let mut y = vec![BigComplex::zero_prec(work); j_dim];
        y.extend(x);
        let shift = q.mul_vec(&y)?;
        let mut sizes = vec![1 + j_dim];
        sizes.extend(h_sizes);
        (
            shift,
            BlockStructure::new(sizes)?,
            NormalFormMethod::Case1 {
                unipotent_dim: j_dim,
                separating,
            },
        )
    };

    let p = Matrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (0, 0) => one.clone(),
        (0, _) => BigComplex::zero_prec(work),
        (_, 0) => shift[i - 1].clone(),
        _ => q.get(i - 1, j - 1).clone(),
    })
    .map(|x| x.with_prec(prec));
    finish(g, p, None, eta, method, prec)
}

/// Uses the hint when present, otherwise computes the normal form.
pub fn normal_form(g: &GroupPresentation, prec: usize) -> Result<NormalForm> {
    if g.p_hint.is_some() {
        normal_form_from_hint(g, prec)
    } else {
        affine_normal_form(g, prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(doc: &str) -> GroupPresentation {
        GroupPresentation::from_json_str(doc).unwrap()
    }

    fn close(a: &BigComplex, re: f64, im: f64) -> bool {
        let z = a.to_c64();
        (z.re - re).abs() < 1e-30 && (z.im - im).abs() < 1e-30
    }

    #[test]
    fn identity_linear_parts() {
        let i2 = Matrix::<BigComplex>::identity(2).map(|x| x.with_prec(128));
        let lnf = linear_normal_form(&[i2.clone(), i2], 128).unwrap();
        assert_eq!(lnf.blocks.sizes(), &[2]);
        assert!(lnf.q.field_eq(&Matrix::identity(2).map(|x: &BigComplex| x.with_prec(128 + GUARD))));
    }

    #[test]
    fn rotation_splits() {
        let rot = Matrix::from_rows(vec![
            vec![BigComplex::from_int(0, 128), BigComplex::from_int(-1, 128)],
            vec![BigComplex::from_int(1, 128), BigComplex::from_int(0, 128)],
        ])
        .unwrap();
        let lnf = linear_normal_form(&[rot.clone(), Matrix::identity(2)], 128).unwrap();
        assert_eq!(lnf.blocks.sizes(), &[1, 1]);
        let mut ev: Vec<f64> = lnf.eigenvalues.iter().map(|r| r[0].to_c64().im).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 1.0).abs() < 1e-30 && (ev[1] - 1.0).abs() < 1e-30);
        let qi = numeric_inverse(&lnf.q, 128).unwrap();
        let d = qi.mul(&rot).unwrap().mul(&lnf.q).unwrap();
        assert!(d.get(0, 1).log2_abs() < -100.0 && d.get(1, 0).log2_abs() < -100.0);
    }

    #[test]
    fn jordan_block_is_lower_triangularized() {
        let j = Matrix::from_rows(vec![
            vec![BigComplex::from_int(2, 128), BigComplex::from_int(1, 128)],
            vec![BigComplex::from_int(0, 128), BigComplex::from_int(2, 128)],
        ])
        .unwrap();
        let lnf = linear_normal_form(std::slice::from_ref(&j), 128).unwrap();
        assert_eq!(lnf.blocks.sizes(), &[2]);
        let qi = numeric_inverse(&lnf.q, 128).unwrap();
        let t = qi.mul(&j).unwrap().mul(&lnf.q).unwrap();
        assert!(t.get(0, 1).log2_abs() < -100.0);
        assert!(!t.get(1, 0).is_zero());
    }

    #[test]
    fn pure_translation_is_case1() {
        let g = pres(r#"{"n": 1, "generators": [{"A": [[1]], "a": [1]}]}"#);
        let nf = affine_normal_form(&g, 128).unwrap();
        assert_eq!(nf.eta.sizes(), &[2]);
        assert_eq!(nf.method, NormalFormMethod::Case1 { unipotent_dim: 1, separating: None });
        assert!(nf.p.field_eq(&Matrix::identity(2).map(|x: &BigComplex| x.with_prec(128))));
        assert!(nf.w0[0].is_zero());
    }

    #[test]
    fn dilation_is_case2() {
        let g = pres(r#"{"n": 1, "generators": [{"A": [[2]], "a": [0]}]}"#);
        let nf = affine_normal_form(&g, 128).unwrap();
        assert_eq!(nf.method, NormalFormMethod::Case2);
        assert_eq!(nf.eta.sizes(), &[1, 1]);
        assert!(nf.p.get(1, 0).is_zero());
        assert!(close(nf.p.get(1, 1), 1.0, 0.0));
    }

    #[test]
    fn case2_moves_the_fixed_point() {
        let g = pres(r#"{"n": 1, "generators": [{"A": [[2]], "a": [3]}, {"A": [[4]], "a": [9]}]}"#);
        let nf = affine_normal_form(&g, 128).unwrap();
        assert!(close(nf.p.get(1, 0), -3.0, 0.0));
        assert!(close(&nf.w0[0], -2.0, 0.0));
        assert!(nf.conjugated.iter().all(|m| m.get(1, 0).is_zero()));
    }

    #[test]
    fn separating_search_prefers_single_generators() {
        let one = BigComplex::from_int(1, 128);
        let two = BigComplex::from_int(2, 128);
        let half = BigComplex::from_f64(0.5, 0.0, 128);
        assert_eq!(separating_element_search(&[vec![one.clone(), two.clone()]], 10, 0, 128).unwrap(), vec![0, 1]);
        assert_eq!(separating_element_search(&[vec![two, half]], 10, 0, 128).unwrap(), vec![1, 0]);
        assert!(separating_element_search(&[vec![one.clone(), one]], 50, 0, 128).is_err());
    }
}
