use serde::Serialize;

use crate::error::{Error, Result};
use crate::explog::LogGenerator;
use crate::linalg::Matrix;
use crate::normal_form::NormalForm;
use crate::scalars::{BigComplex, ExactComplex, ExactReal, Field};

/// Origin of a generator of the additive group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// `f'_k(w0)`.
    LogGenerator { k: usize },
    /// `2 i pi p2(P e^(k))`.
    Lattice { k: usize },
}

/// Vectors `u_1, ..., u_m` of `C^n` generating the additive group `g_{w0}`.
#[derive(Clone, Debug)]
pub struct DensityInstance<T> {
    pub n: usize,
    pub vectors: Vec<Vec<T>>,
    pub provenance: Vec<Provenance>,
}

impl<T: Field> DensityInstance<T> {
    pub fn new(n: usize, vectors: Vec<Vec<T>>, provenance: Vec<Provenance>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::DimensionMismatch("a density instance needs at least one vector".into()));
        }
        if vectors.iter().any(|v| v.len() != n) || provenance.len() != vectors.len() {
            return Err(Error::DimensionMismatch("instance vectors must all lie in C^n".into()));
        }
        Ok(DensityInstance { n, vectors, provenance })
    }

    /// Instance without provenance (all vectors tagged as log generators).
    pub fn from_vectors(n: usize, vectors: Vec<Vec<T>>) -> Result<Self> {
        let provenance = (1..=vectors.len()).map(|k| Provenance::LogGenerator { k }).collect();
        Self::new(n, vectors, provenance)
    }

    pub fn m(&self) -> usize {
        self.vectors.len()
    }

    /// Zero vectors contribute nothing.
    pub fn redundant(&self) -> Vec<bool> {
        self.vectors.iter().map(|v| v.iter().all(Field::is_zero)).collect()
    }

    pub fn negate(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.vectors[k] = out.vectors[k].iter().map(Field::neg).collect();
        out
    }

    pub fn with_vector(&self, v: Vec<T>) -> Result<Self> {
        let mut out = self.clone();
        let k = out.m() + 1;
        out.vectors.push(v);
        out.provenance.push(Provenance::LogGenerator { k });
        Self::new(out.n, out.vectors, out.provenance)
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        DensityInstance {
            n: self.n,
            vectors: order.iter().map(|&i| self.vectors[i].clone()).collect(),
            provenance: order.iter().map(|&i| self.provenance[i]).collect(),
        }
    }
}

impl DensityInstance<ExactComplex> {
    /// Real `2n x m` matrix `[Re u; Im u]`.
    pub fn real_matrix(&self) -> Matrix<ExactReal> {
        let n = self.n;
        Matrix::from_fn(2 * n, self.m(), |i, j| {
            let z = &self.vectors[j][i % n];
            if i < n {
                z.re.clone()
            } else {
                z.im.clone()
            }
        })
    }

    pub fn to_numeric(&self, prec: usize) -> DensityInstance<BigComplex> {
        DensityInstance {
            n: self.n,
            vectors: self.vectors.iter().map(|v| v.iter().map(|z| z.to_numeric(prec)).collect()).collect(),
            provenance: self.provenance.clone(),
        }
    }
}

impl DensityInstance<BigComplex> {
    /// Real `2n x m` matrix `[Re u; Im u]` (entries with zero imaginary part).
    pub fn real_matrix(&self) -> Matrix<BigComplex> {
        let n = self.n;
        Matrix::from_fn(2 * n, self.m(), |i, j| {
            let z = &self.vectors[j][i % n];
            let prec = z.prec();
            let part = if i < n { z.re() } else { z.im() };
            BigComplex::real(part.clone(), prec)
        })
    }
}

fn lattice_range(r: usize, include_first_block: bool) -> std::ops::RangeInclusive<usize> {
    (if include_first_block { 1 } else { 2 })..=r
}

/// `u_k = f'_k(w0)` for every log generator, then `2 i pi p2(P e^(k))` for
/// `k = 2..r` (or `1..r` with `include_first_block`).
pub fn build_instance(logs: &[LogGenerator], nf: &NormalForm, include_first_block: bool) -> Result<DensityInstance<BigComplex>> {
    let prec = nf.prec;
    let mut vectors = Vec::new();
    let mut provenance = Vec::new();
    for l in logs {
        vectors.push(l.map.apply(&nf.w0)?);
        provenance.push(Provenance::LogGenerator { k: l.index });
    }
    let two_pi_i = BigComplex::two_pi_i(prec);
    for k in lattice_range(nf.r(), include_first_block) {
        vectors.push(nf.lattice_direction(k).iter().map(|x| x.mul(&two_pi_i)).collect());
        provenance.push(Provenance::Lattice { k });
    }
    DensityInstance::new(nf.w0.len(), vectors, provenance)
}

/// Exact counterpart of [`build_instance`]; `None` unless the logs, `P` and
/// `w0` are all in the field tower.
pub fn build_instance_exact(
    logs: &[LogGenerator],
    nf: &NormalForm,
    include_first_block: bool,
) -> Option<Result<DensityInstance<ExactComplex>>> {
    let w0 = nf.w0_exact.as_ref()?;
    let maps: Vec<_> = logs.iter().map(|l| l.exact.clone()).collect::<Option<_>>()?;
    let build = || -> Result<DensityInstance<ExactComplex>> {
        let mut vectors = Vec::new();
        let mut provenance = Vec::new();
        for (l, f) in logs.iter().zip(&maps) {
            vectors.push(f.apply(w0)?);
            provenance.push(Provenance::LogGenerator { k: l.index });
        }
        let two_pi_i = ExactComplex::new(ExactReal::zero(), ExactReal::pi().mul(&ExactReal::from_i64(2)));
        for k in lattice_range(nf.r(), include_first_block) {
            let dir = nf.lattice_direction_exact(k).expect("exact P");
            vectors.push(dir.iter().map(|x| x.mul(&two_pi_i)).collect());
            provenance.push(Provenance::Lattice { k });
        }
        DensityInstance::new(w0.len(), vectors, provenance)
    };
    Some(build())
}
