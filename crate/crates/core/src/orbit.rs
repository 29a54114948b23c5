//! Bounded-word orbit sampling and epsilon-grid coverage, in double precision.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::presentation::{numeric_inverse, GroupPresentation};
use crate::scalars::{BigComplex, Field};

/// Points with a coordinate of magnitude above this are dropped.
pub const OVERFLOW_LIMIT: f64 = 1e30;

/// Precision used to form the generators and their inverses before rounding to `f64`.
const SETUP_PREC: usize = 128;

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageConfig {
    /// One interval per real coordinate `(Re x_1, Im x_1, Re x_2, ...)`.
    pub bounds: Vec<(f64, f64)>,
    pub epsilon: f64,
    pub exponent_bound: i64,
    pub sample_budget: usize,
    pub seed: u64,
}

impl CoverageConfig {
    /// The box `[-h, h]^(2n)`.
    pub fn symmetric(n: usize, half_width: f64, epsilon: f64, exponent_bound: i64, sample_budget: usize, seed: u64) -> Self {
        CoverageConfig {
            bounds: vec![(-half_width, half_width); 2 * n],
            epsilon,
            exponent_bound,
            sample_budget,
            seed,
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::Schema(vec!["orbit: epsilon must be positive".into()]));
        }
        if self.exponent_bound < 1 {
            return Err(Error::Schema(vec!["orbit: exponent bound must be at least 1".into()]));
        }
        if self.bounds.len() != 2 * n {
            return Err(Error::DimensionMismatch(format!("orbit box needs {} intervals, got {}", 2 * n, self.bounds.len())));
        }
        if self.bounds.iter().any(|&(lo, hi)| !(lo < hi)) {
            return Err(Error::Schema(vec!["orbit: every box interval needs lo < hi".into()]));
        }
        Ok(())
    }

    fn cells_per_axis(&self) -> Vec<usize> {
        self.bounds.iter().map(|&(lo, hi)| ((hi - lo) / self.epsilon).ceil().max(1.0) as usize).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.cells_per_axis().iter().product()
    }

    /// Grid cell containing `x`, if `x` lies in the box.
    pub fn cell_of(&self, x: &[Complex64]) -> Option<Vec<usize>> {
        let per_axis = self.cells_per_axis();
        let reals = x.iter().flat_map(|z| [z.re, z.im]);
        reals
            .zip(&self.bounds)
            .zip(per_axis)
            .map(|((v, &(lo, hi)), count)| {
                if !(lo..=hi).contains(&v) {
                    return None;
                }
                Some((((v - lo) / self.epsilon) as usize).min(count - 1))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPoint {
    pub exponents: Vec<i64>,
    pub point: Vec<Complex64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OrbitSample {
    /// Sorted by exponent vector.
    pub points: Vec<OrbitPoint>,
    /// Words whose image exceeded [`OVERFLOW_LIMIT`].
    pub overflowed: Vec<Vec<i64>>,
    pub exhaustive: bool,
}

/// `f_k^e` for `e` in `[-N, N]`, indexed by `e + N`.
struct PowerTable {
    bound: i64,
    powers: Vec<Vec<AffineMap<Complex64>>>,
}

impl PowerTable {
    fn new(g: &GroupPresentation, bound: i64) -> Result<Self> {
        let maps = g.generators_numeric(SETUP_PREC)?;
        let mut powers = Vec::with_capacity(maps.len());
        for f in &maps {
            let inv_linear = numeric_inverse(f.linear(), SETUP_PREC)?;
            let inv_translation: Vec<BigComplex> = inv_linear.mul_vec(f.translation())?.iter().map(|x| x.neg()).collect();
            let to_c64 = |m: &AffineMap<BigComplex>| m.map_scalars(BigComplex::to_c64);
            let f64_map = to_c64(f);
            let inv = to_c64(&AffineMap::new(inv_linear, inv_translation)?);
            let row = (-bound..=bound).map(|e| f64_map.pow_with(e, Some(&inv))).collect::<Result<Vec<_>>>()?;
            powers.push(row);
        }
        Ok(PowerTable { bound, powers })
    }

    fn get(&self, k: usize, e: i64) -> &AffineMap<Complex64> {
        &self.powers[k][(e + self.bound) as usize]
    }

    /// `f_1^{e_1}(... f_p^{e_p}(x))`.
    fn apply(&self, exponents: &[i64], x: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut y = x.to_vec();
        for (k, &e) in exponents.iter().enumerate().rev() {
            y = self.get(k, e).apply(&y)?;
        }
        Ok(y)
    }

    /// Same word through the homogeneous matrices `Phi(f_k^{e_k})` acting on `(1, x)`.
    fn apply_homogeneous(&self, exponents: &[i64], x: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut y: Vec<Complex64> = std::iter::once(Complex64::new(1.0, 0.0)).chain(x.iter().copied()).collect();
        for (k, &e) in exponents.iter().enumerate().rev() {
            y = self.get(k, e).phi().mul_vec(&y)?;
        }
        Ok(y)
    }
}

fn words(p: usize, cfg: &CoverageConfig) -> (Vec<Vec<i64>>, bool) {
    let n = cfg.exponent_bound;
    let side = (2 * n + 1) as u128;
    let total = side.checked_pow(p as u32);
    if total.is_some_and(|t| t <= cfg.sample_budget as u128) {
        let mut out = vec![Vec::new()];
        for _ in 0..p {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (-n..=n).map(move |e| {
                        let mut v = w.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        return (out, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut seen = BTreeSet::new();
    let mut draws = 0usize;
    let max_draws = cfg.sample_budget.saturating_mul(20).max(1000);
    while seen.len() < cfg.sample_budget && draws < max_draws {
        draws += 1;
        let w: Vec<i64> = (0..p).map(|_| rng.gen_range(-n..=n)).collect();
        seen.insert(w);
    }
    (seen.into_iter().collect(), false)
}

fn evaluate<F>(words: Vec<Vec<i64>>, eval: F) -> Result<(Vec<OrbitPoint>, Vec<Vec<i64>>)>
where
    F: Fn(&[i64]) -> Result<Vec<Complex64>> + Sync,
{
    let threads = std::thread::available_parallelism().map_or(1, |t| t.get()).min(16);
    let chunk = words.len().div_ceil(threads).max(1);
    let results: Vec<Result<Vec<(Vec<i64>, Vec<Complex64>)>>> = std::thread::scope(|s| {
        let handles: Vec<_> = words
            .chunks(chunk)
            .map(|part| {
                let eval = &eval;
                s.spawn(move || part.iter().map(|w| Ok((w.clone(), eval(w)?))).collect())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("orbit worker panicked")).collect()
    });
    let mut points = Vec::new();
    let mut overflowed = Vec::new();
    for part in results {
        for (w, y) in part? {
            if y.iter().all(|z| z.re.abs() <= OVERFLOW_LIMIT && z.im.abs() <= OVERFLOW_LIMIT) {
                points.push(OrbitPoint { exponents: w, point: y });
            } else {
                overflowed.push(w);
            }
        }
    }
    points.sort_by(|a, b| a.exponents.cmp(&b.exponents));
    overflowed.sort();
    Ok((points, overflowed))
}

/// Images of `x` under words `f_1^{e_1} ... f_p^{e_p}` with `|e_k| <= N`: every
/// word when `(2N + 1)^p <= sample_budget`, otherwise `sample_budget` distinct
/// words drawn uniformly with the given seed.
pub fn sample_orbit(g: &GroupPresentation, x: &[Complex64], cfg: &CoverageConfig) -> Result<OrbitSample> {
    cfg.check(g.n)?;
    if x.len() != g.n {
        return Err(Error::DimensionMismatch(format!("start point has {} coordinates, expected {}", x.len(), g.n)));
    }
    let table = PowerTable::new(g, cfg.exponent_bound)?;
    let (ws, exhaustive) = words(g.p(), cfg);
    let (points, overflowed) = evaluate(ws, |w| table.apply(w, x))?;
    Ok(OrbitSample { points, overflowed, exhaustive })
}

/// [`sample_orbit`] computed through `Phi` on `(1, x)` instead; the first
/// coordinate of every image must stay 1 and is removed.
pub fn sample_orbit_homogeneous(g: &GroupPresentation, x: &[Complex64], cfg: &CoverageConfig) -> Result<OrbitSample> {
    cfg.check(g.n)?;
    let table = PowerTable::new(g, cfg.exponent_bound)?;
    let (ws, exhaustive) = words(g.p(), cfg);
    let (points, overflowed) = evaluate(ws, |w| {
        let y = table.apply_homogeneous(w, x)?;
        if y[0] != Complex64::new(1.0, 0.0) {
            return Err(Error::Numeric("homogeneous coordinate left 1".into()));
        }
        Ok(y[1..].to_vec())
    })?;
    Ok(OrbitSample { points, overflowed, exhaustive })
}

/// Number of points in each occupied cell.
pub fn histogram(points: &[OrbitPoint], cfg: &CoverageConfig) -> BTreeMap<Vec<usize>, usize> {
    let mut h = BTreeMap::new();
    for p in points {
        if let Some(c) = cfg.cell_of(&p.point) {
            *h.entry(c).or_insert(0) += 1;
        }
    }
    h
}

/// Fraction of the grid cells of the box that contain at least one point.
pub fn coverage(points: &[OrbitPoint], cfg: &CoverageConfig) -> f64 {
    histogram(points, cfg).len() as f64 / cfg.cell_count() as f64
}

/// Coverage computed without keeping the orbit points.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageSummary {
    pub coverage: f64,
    pub occupied_cells: usize,
    pub words: usize,
    pub in_box: usize,
    pub overflowed: usize,
    pub exhaustive: bool,
}

fn flat_cell(cell: &[usize], per_axis: &[usize]) -> usize {
    cell.iter().zip(per_axis).fold(0, |acc, (&c, &k)| acc * k + c)
}

/// The word with mixed-radix index `i` over `[-N, N]^p`, last exponent fastest.
fn word_at(mut i: u128, p: usize, bound: i64) -> Vec<i64> {
    let side = (2 * bound + 1) as u128;
    let mut w = vec![0; p];
    for e in w.iter_mut().rev() {
        *e = (i % side) as i64 - bound;
        i /= side;
    }
    w
}

/// Same words and grid as [`sample_orbit`] followed by [`coverage`], but only
/// the set of occupied cells is kept, so exhaustive runs over many millions of
/// words fit in memory.
pub fn orbit_coverage(g: &GroupPresentation, x: &[Complex64], cfg: &CoverageConfig) -> Result<CoverageSummary> {
    cfg.check(g.n)?;
    if x.len() != g.n {
        return Err(Error::DimensionMismatch(format!("start point has {} coordinates, expected {}", x.len(), g.n)));
    }
    let table = PowerTable::new(g, cfg.exponent_bound)?;
    let p = g.p();
    let side = (2 * cfg.exponent_bound + 1) as u128;
    let total = side.checked_pow(p as u32).filter(|&t| t <= cfg.sample_budget as u128);
    let sampled = if total.is_none() { Some(words(p, cfg).0) } else { None };
    let count = total.unwrap_or_else(|| sampled.as_ref().map_or(0, Vec::len) as u128);
    let per_axis = cfg.cells_per_axis();
    let threads = std::thread::available_parallelism().map_or(1, |t| t.get()).min(16) as u128;
    let chunk = count.div_ceil(threads).max(1);
    let parts: Vec<Result<(HashSet<usize>, usize, usize)>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let (table, sampled, per_axis) = (&table, &sampled, &per_axis);
                s.spawn(move || {
                    let mut cells = HashSet::new();
                    let (mut in_box, mut overflowed) = (0, 0);
                    for i in (t * chunk)..((t + 1) * chunk).min(count) {
                        let y = match sampled {
                            Some(ws) => table.apply(&ws[i as usize], x)?,
                            None => table.apply(&word_at(i, p, cfg.exponent_bound), x)?,
                        };
                        if y.iter().any(|z| z.re.abs() > OVERFLOW_LIMIT || z.im.abs() > OVERFLOW_LIMIT) {
                            overflowed += 1;
                        } else if let Some(c) = cfg.cell_of(&y) {
                            in_box += 1;
                            cells.insert(flat_cell(&c, per_axis));
                        }
                    }
                    Ok((cells, in_box, overflowed))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("orbit worker panicked")).collect()
    });
    let mut cells = HashSet::new();
    let (mut in_box, mut overflowed) = (0, 0);
    for part in parts {
        let (c, b, o) = part?;
        cells.extend(c);
        in_box += b;
        overflowed += o;
    }
    Ok(CoverageSummary {
        coverage: cells.len() as f64 / cfg.cell_count() as f64,
        occupied_cells: cells.len(),
        words: count as usize,
        in_box,
        overflowed,
        exhaustive: total.is_some(),
    })
}

/// One row per point: exponents, then `Re`/`Im` of each coordinate in hex-float.
pub fn write_points_csv(w: &mut impl Write, sample: &OrbitSample) -> std::io::Result<()> {
    let (p, n) = sample.points.first().map_or((0, 0), |pt| (pt.exponents.len(), pt.point.len()));
    let mut header: Vec<String> = (1..=p).map(|k| format!("e{k}")).collect();
    for i in 1..=n {
        header.push(format!("re{i}"));
        header.push(format!("im{i}"));
    }
    writeln!(w, "{}", header.join(","))?;
    for pt in &sample.points {
        let mut row: Vec<String> = pt.exponents.iter().map(i64::to_string).collect();
        for z in &pt.point {
            row.push(crate::scalars::hex_f64(z.re));
            row.push(crate::scalars::hex_f64(z.im));
        }
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// One row per occupied cell: cell indices, lower corner of the cell, count.
pub fn write_histogram_csv(w: &mut impl Write, points: &[OrbitPoint], cfg: &CoverageConfig) -> std::io::Result<()> {
    let d = cfg.bounds.len();
    let mut header: Vec<String> = (1..=d).map(|i| format!("cell{i}")).collect();
    header.extend((1..=d).map(|i| format!("lo{i}")));
    header.push("count".into());
    writeln!(w, "{}", header.join(","))?;
    for (cell, count) in histogram(points, cfg) {
        let mut row: Vec<String> = cell.iter().map(usize::to_string).collect();
        row.extend(cell.iter().zip(&cfg.bounds).map(|(&c, &(lo, _))| (lo + c as f64 * cfg.epsilon).to_string()));
        row.push(count.to_string());
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn translations(n: usize, vs: &[&str]) -> GroupPresentation {
        let id: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| if i == j { "1".into() } else { "0".into() }).collect()).collect();
        let gens: Vec<serde_json::Value> = vs.iter().map(|v| serde_json::json!({"A": id, "a": [v]})).collect();
        GroupPresentation::from_value(&serde_json::json!({"n": n, "constants": [2, 3], "generators": gens})).unwrap()
    }

    #[test]
    fn identity_group_gives_one_point() {
        let g = translations(1, &["0"]);
        let cfg = CoverageConfig::symmetric(1, 1.0, 0.1, 3, 100, 0);
        let x = [Complex64::new(0.25, -0.5)];
        let s = sample_orbit(&g, &x, &cfg).unwrap();
        let distinct: BTreeSet<(u64, u64)> = s.points.iter().map(|p| (p.point[0].re.to_bits(), p.point[0].im.to_bits())).collect();
        assert_eq!(distinct.len(), 1);
        assert_eq!(s.points[0].point, x.to_vec());
    }

    #[test]
    fn unit_translations_fill_a_grid() {
        let g = translations(1, &["1", "i"]);
        let cfg = CoverageConfig::symmetric(1, 3.0, 0.5, 2, 1000, 0);
        let s = sample_orbit(&g, &[Complex64::new(0.0, 0.0)], &cfg).unwrap();
        assert!(s.exhaustive);
        assert_eq!(s.points.len(), 25);
        for p in &s.points {
            assert_eq!(p.point[0], Complex64::new(p.exponents[0] as f64, p.exponents[1] as f64));
        }
    }

    #[test]
    fn coverage_extremes() {
        let cfg = CoverageConfig::symmetric(1, 1.0, 0.5, 1, 1, 0);
        assert_eq!(coverage(&[], &cfg), 0.0);
        let centers: Vec<OrbitPoint> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| OrbitPoint {
                exponents: vec![],
                point: vec![Complex64::new(-0.75 + 0.5 * i as f64, -0.75 + 0.5 * j as f64)],
            })
            .collect();
        assert_eq!(coverage(&centers, &cfg), 1.0);
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = translations(1, &["1", "i", "sqrt(2)"]);
        let cfg = CoverageConfig::symmetric(1, 1.0, 0.1, 50, 500, 7);
        let a = sample_orbit(&g, &[Complex64::new(0.0, 0.0)], &cfg).unwrap();
        let b = sample_orbit(&g, &[Complex64::new(0.0, 0.0)], &cfg).unwrap();
        assert!(!a.exhaustive);
        assert_eq!(a.points.len(), 500);
        assert_eq!(a, b);
    }

    #[test]
    fn streaming_coverage_matches_sampled_points() {
        let g = translations(1, &["1", "i", "sqrt(2) + i*sqrt(3)"]);
        for (bound, budget) in [(6, 10_000), (40, 2_000)] {
            let cfg = CoverageConfig::symmetric(1, 1.0, 0.1, bound, budget, 3);
            let x = [Complex64::new(0.1, 0.2)];
            let s = sample_orbit(&g, &x, &cfg).unwrap();
            let c = orbit_coverage(&g, &x, &cfg).unwrap();
            assert_eq!(c.exhaustive, s.exhaustive);
            assert_eq!(c.words, s.points.len() + s.overflowed.len());
            assert_eq!(c.occupied_cells, histogram(&s.points, &cfg).len());
            assert_eq!(c.coverage, coverage(&s.points, &cfg));
        }
    }

    #[test]
    fn overflow_is_reported() {
        let g = GroupPresentation::from_value(&serde_json::json!({"n": 1, "generators": [{"A": [["100000000000000000000"]], "a": ["0"]}]})).unwrap();
        let cfg = CoverageConfig::symmetric(1, 1.0, 0.1, 3, 100, 0);
        let s = sample_orbit(&g, &[Complex64::new(1.0, 0.0)], &cfg).unwrap();
        assert_eq!(s.overflowed, vec![vec![2], vec![3]]);
        assert_eq!(s.points.len(), 5);
    }

    #[test]
    fn csv_shapes() {
        let g = translations(1, &["1", "i"]);
        let cfg = CoverageConfig::symmetric(1, 3.0, 0.5, 1, 100, 0);
        let s = sample_orbit(&g, &[Complex64::new(0.0, 0.0)], &cfg).unwrap();
        let mut out = Vec::new();
        write_points_csv(&mut out, &s).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next(), Some("e1,e2,re1,im1"));
        assert_eq!(text.lines().count(), 10);
        let mut hist = Vec::new();
        write_histogram_csv(&mut hist, &s.points, &cfg).unwrap();
        assert_eq!(String::from_utf8(hist).unwrap().lines().count(), 10);
    }
}
