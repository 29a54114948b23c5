#![allow(dead_code)]

pub mod lemmas;

use hyperorbit::linalg::{BlockStructure, Matrix};
use hyperorbit::presentation::GroupPresentation;
use hyperorbit::scalars::{ExactComplex, ExactReal, Field, SurdBasis};
use hyperorbit::AffineMap;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(a: i64, b: i64) -> ExactReal {
    ExactReal::from_ratio(a, b)
}

pub fn cx(re: ExactReal, im: ExactReal) -> ExactComplex {
    ExactComplex::new(re, im)
}

pub fn gauss(a: i64, b: i64) -> ExactComplex {
    cx(q(a, 1), q(b, 1))
}

/// Small Gaussian rationals, occasionally with a `sqrt(2)` or `pi` factor.
pub fn exact_scalar() -> impl Strategy<Value = ExactComplex> + Clone {
    scalar_with(true)
}

/// As [`exact_scalar`] without `pi`, so inverses stay cheap.
pub fn algebraic_scalar() -> impl Strategy<Value = ExactComplex> + Clone {
    scalar_with(false)
}

fn scalar_with(pi: bool) -> impl Strategy<Value = ExactComplex> + Clone {
    (-4i64..=4, -4i64..=4, 1i64..=3, 0u8..4).prop_map(move |(a, b, d, kind)| {
        let base = cx(q(a, d), q(b, d));
        match kind {
            0 => base.mul(&ExactComplex::real(ExactReal::sqrt_of(2))),
            1 if pi => base.mul(&ExactComplex::real(ExactReal::pi())),
            _ => base,
        }
    })
}

pub fn exact_affine(n: usize) -> impl Strategy<Value = AffineMap<ExactComplex>> {
    affine_from(n, exact_scalar())
}

fn affine_from(n: usize, entries: impl Strategy<Value = ExactComplex> + Clone) -> impl Strategy<Value = AffineMap<ExactComplex>> {
    (prop::collection::vec(entries.clone(), n * n), prop::collection::vec(entries, n)).prop_map(move |(a, t)| {
        let rows = a.chunks(n).map(<[_]>::to_vec).collect();
        AffineMap::new(Matrix::from_rows(rows).unwrap(), t).unwrap()
    })
}

/// Invertible maps with entries in `Q(i, sqrt 2)`.
pub fn invertible_affine(n: usize) -> impl Strategy<Value = AffineMap<ExactComplex>> {
    affine_from(n, algebraic_scalar()).prop_filter("invertible", |f| !f.linear().determinant().unwrap().is_zero())
}

fn shift(d: usize) -> Matrix<ExactComplex> {
    Matrix::from_fn(d, d, |i, j| if i == j + 1 { ExactComplex::one() } else { ExactComplex::zero() })
}

/// `lambda I + c_1 N + c_2 N^2 + ...` for the lower shift `N` of size `d`.
fn block_poly(d: usize, lambda: &ExactComplex, coeffs: &[i64]) -> Matrix<ExactComplex> {
    let n = shift(d);
    let mut acc = Matrix::identity(d).scale(lambda);
    let mut power = Matrix::identity(d);
    for &c in coeffs.iter().take(d.saturating_sub(1)) {
        power = power.mul(&n).unwrap();
        acc = acc.add(&power.scale(&ExactComplex::from_i64(c))).unwrap();
    }
    acc
}

const EIGENVALUES: [(i64, i64, i64); 10] = [(2, 0, 1), (3, 0, 1), (1, 0, 2), (-1, 0, 1), (0, 1, 1), (1, 1, 1), (-2, 0, 1), (1, 0, 3), (0, 2, 1), (-1, 1, 2)];

fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> Matrix<ExactComplex> {
    let l = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => ExactComplex::one(),
        std::cmp::Ordering::Greater => ExactComplex::from_i64(rng.gen_range(-2..=2)),
        std::cmp::Ordering::Less => ExactComplex::zero(),
    });
    let u = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => ExactComplex::one(),
        std::cmp::Ordering::Less => ExactComplex::from_i64(rng.gen_range(-1..=1)),
        std::cmp::Ordering::Greater => ExactComplex::zero(),
    });
    l.mul(&u).unwrap()
}

/// A random composition of `total` into positive parts.
fn composition(rng: &mut ChaCha8Rng, total: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut left = total;
    while left > 0 {
        let s = rng.gen_range(1..=left.min(3));
        sizes.push(s);
        left -= s;
    }
    sizes
}

/// Random abelian group: `Phi(f_j) = P K_j P^-1` with `K_j` block diagonal,
/// each block a polynomial in the shift with a fixed eigenvalue. The first
/// block has eigenvalue 1 for every generator.
pub struct AbelianSample {
    pub presentation: GroupPresentation,
    pub maps: Vec<AffineMap<ExactComplex>>,
    pub eta: BlockStructure,
    pub p: Matrix<ExactComplex>,
}

pub fn random_abelian(seed: u64, n: usize, p: usize) -> AbelianSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes = composition(&mut rng, n + 1);
    let eta = BlockStructure::new(sizes.clone()).unwrap();
    let q_mat = unimodular(&mut rng, n);
    let v: Vec<ExactComplex> = (0..n).map(|_| ExactComplex::from_i64(rng.gen_range(-2..=2))).collect();
    let mut pm = Matrix::<ExactComplex>::identity(n + 1);
    for i in 0..n {
        pm.set(i + 1, 0, v[i].clone());
        for j in 0..n {
            pm.set(i + 1, j + 1, q_mat.get(i, j).clone());
        }
    }
    let p_inv = pm.inverse().unwrap();
    let starts = eta.starts();
    let mut maps = Vec::new();
    for _ in 0..p {
        let mut k = Matrix::<ExactComplex>::zeros(n + 1, n + 1);
        for (b, (&s, &d)) in starts.iter().zip(&sizes).enumerate() {
            let lambda = if b == 0 {
                ExactComplex::one()
            } else {
                let &(a, bi, den) = EIGENVALUES.choose(&mut rng).unwrap();
                cx(q(a, den), q(bi, den))
            };
            let coeffs: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
            k.set_block(s, s, &block_poly(d, &lambda, &coeffs));
        }
        let phi = pm.mul(&k).unwrap().mul(&p_inv).unwrap();
        maps.push(AffineMap::from_phi(&phi).unwrap());
    }
    let presentation = GroupPresentation::from_exact(SurdBasis::new(vec![]).unwrap(), &maps, None, None).unwrap();
    AbelianSample { presentation, maps, eta, p: pm }
}

/// `Q(sqrt 2, sqrt 3)` as integer coordinates on `(1, sqrt 2, sqrt 3, sqrt 6)`.
/// Kept independent of the library's field tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Q23(pub [i64; 4]);

impl Q23 {
    pub const ZERO: Q23 = Q23([0; 4]);

    pub fn add(self, o: Q23) -> Q23 {
        Q23(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }

    pub fn sub(self, o: Q23) -> Q23 {
        Q23(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }

    pub fn scale(self, k: i64) -> Q23 {
        Q23(self.0.map(|x| x * k))
    }

    pub fn mul(self, o: Q23) -> Q23 {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = o.0;
        Q23([
            a0 * b0 + 2 * a1 * b1 + 3 * a2 * b2 + 6 * a3 * b3,
            a0 * b1 + a1 * b0 + 3 * (a2 * b3 + a3 * b2),
            a0 * b2 + a2 * b0 + 2 * (a1 * b3 + a3 * b1),
            a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
        ])
    }

    pub fn is_zero(self) -> bool {
        self.0 == [0; 4]
    }

    pub fn to_exact(self) -> ExactReal {
        let terms = [(1, self.0[0]), (2, self.0[1]), (3, self.0[2]), (6, self.0[3])];
        terms
            .iter()
            .fold(ExactReal::zero(), |acc, &(m, c)| {
                let unit = if m == 1 { ExactReal::one() } else { ExactReal::sqrt_of(m) };
                acc.add(&unit.mul(&ExactReal::from_i64(c)))
            })
    }
}

/// The values `0, 1, sqrt 2, sqrt 3, sqrt 2 + sqrt 3`.
pub const CORPUS_REALS: [Q23; 5] = [Q23([0, 0, 0, 0]), Q23([1, 0, 0, 0]), Q23([0, 1, 0, 0]), Q23([0, 0, 1, 0]), Q23([0, 1, 1, 0])];

/// Every `a + i b` with `a, b` from [`CORPUS_REALS`].
pub fn corpus_vectors() -> Vec<(Q23, Q23)> {
    CORPUS_REALS.iter().flat_map(|&a| CORPUS_REALS.iter().map(move |&b| (a, b))).collect()
}

/// Cofactors `c_j` with `det [Re u; Im u; s] = sum c_j s_j` for `n = 1, m = 3`.
pub fn cofactors(u: &[(Q23, Q23); 3]) -> [Q23; 3] {
    let [(a1, b1), (a2, b2), (a3, b3)] = *u;
    [
        a2.mul(b3).sub(a3.mul(b2)),
        a3.mul(b1).sub(a1.mul(b3)),
        a1.mul(b2).sub(a2.mul(b1)),
    ]
}

/// Brute force over `|s_j| <= bound`: a nonzero `s` with `sum c_j s_j = 0`.
pub fn brute_force_relation(c: &[Q23; 3], bound: i64) -> Option<[i64; 3]> {
    for s1 in -bound..=bound {
        for s2 in -bound..=bound {
            let partial = c[0].scale(s1).add(c[1].scale(s2));
            if c[2].is_zero() {
                if partial.is_zero() {
                    return Some(if s1 == 0 && s2 == 0 { [0, 0, 1] } else { [s1, s2, 0] });
                }
                continue;
            }
            // s3 * c3 = -partial, coordinate by coordinate.
            let mut s3 = None;
            let mut ok = true;
            for i in 0..4 {
                let (num, den) = (-partial.0[i], c[2].0[i]);
                if den == 0 {
                    ok &= num == 0;
                } else if num % den != 0 {
                    ok = false;
                } else {
                    let v = num / den;
                    ok &= s3.is_none_or(|x| x == v);
                    s3 = Some(v);
                }
            }
            if let (true, Some(s3)) = (ok, s3) {
                if s3.abs() <= bound && (s1, s2, s3) != (0, 0, 0) {
                    return Some([s1, s2, s3]);
                }
            }
        }
    }
    None
}

/// `sum c_j s_j == 0` in the oracle's own arithmetic.
pub fn oracle_annihilates(c: &[Q23; 3], s: &[i64]) -> bool {
    c.iter().zip(s).fold(Q23::ZERO, |acc, (c, &s)| acc.add(c.scale(s))).is_zero()
}
