//! Group presentations: the JSON input format, accessors for both scalar
//! backends, structural validation and orbit-word evaluation.

use std::sync::OnceLock;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::linalg::{deviation_log2, expm, max_log2, BlockStructure, Matrix};
use crate::scalars::{BigComplex, ExactComplex, Field, ScalarLiteral, SurdBasis};

/// Scalar backend a computation ran on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Numeric,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Numeric => "numeric",
        })
    }
}

/// An affine map as written in an input file.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineLiteral {
    pub linear: Vec<Vec<ScalarLiteral>>,
    pub translation: Vec<ScalarLiteral>,
}

impl AffineLiteral {
    pub fn from_exact(f: &AffineMap<ExactComplex>) -> Self {
        AffineLiteral {
            linear: f
                .linear()
                .to_rows()
                .iter()
                .map(|r| r.iter().map(ScalarLiteral::from_exact).collect())
                .collect(),
            translation: f.translation().iter().map(ScalarLiteral::from_exact).collect(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.literals().all(ScalarLiteral::is_exact)
    }

    fn literals(&self) -> impl Iterator<Item = &ScalarLiteral> {
        self.linear.iter().flatten().chain(&self.translation)
    }

    pub fn exact(&self) -> Option<AffineMap<ExactComplex>> {
        let rows = self
            .linear
            .iter()
            .map(|r| r.iter().map(|x| x.exact().cloned()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let t = self.translation.iter().map(|x| x.exact().cloned()).collect::<Option<Vec<_>>>()?;
        AffineMap::new(Matrix::from_rows(rows).ok()?, t).ok()
    }

    pub fn numeric(&self, prec: usize) -> Result<AffineMap<BigComplex>> {
        let rows = self
            .linear
            .iter()
            .map(|r| r.iter().map(|x| x.numeric(prec)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let t = self.translation.iter().map(|x| x.numeric(prec)).collect::<Result<Vec<_>>>()?;
        AffineMap::new(Matrix::from_rows(rows)?, t)
    }

    fn to_json(&self) -> Value {
        json!({
            "A": self.linear.iter().map(|r| r.iter().map(|x| x.text()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "a": self.translation.iter().map(|x| x.text()).collect::<Vec<_>>(),
        })
    }
}

/// A finitely generated abelian affine group, as read from an input file.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPresentation {
    pub n: usize,
    pub constants: SurdBasis,
    pub generators: Vec<AffineLiteral>,
    pub log_generators: Option<Vec<AffineLiteral>>,
    pub p_hint: Option<Vec<Vec<ScalarLiteral>>>,
    pub eta_hint: Option<Vec<usize>>,
    pub description: Option<String>,
}

const KEYS: [&str; 7] = ["n", "constants", "generators", "log_generators", "P", "eta", "description"];

struct SchemaWalk<'a> {
    violations: Vec<String>,
    basis: Option<&'a SurdBasis>,
}

impl SchemaWalk<'_> {
    fn scalar(&mut self, v: &Value, path: &str) -> Option<ScalarLiteral> {
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Number(x) => x.to_string(),
            _ => {
                self.violations.push(format!("{path}: expected a scalar literal (string or number)"));
                return None;
            }
        };
        match ScalarLiteral::parse(&text) {
            Ok(lit) => {
                if let Some(basis) = self.basis {
                    for m in lit.radicands() {
                        if !basis.generates(m) {
                            self.violations.push(format!(
                                "{path}: sqrt({m}) is not generated by the declared constants"
                            ));
                        }
                    }
                }
                Some(lit)
            }
            Err(Error::Parse { column, message, .. }) => {
                self.violations.push(format!("{path}: column {column}: {message}"));
                None
            }
            Err(e) => {
                self.violations.push(format!("{path}: {e}"));
                None
            }
        }
    }

    fn vector(&mut self, v: &Value, len: usize, path: &str) -> Option<Vec<ScalarLiteral>> {
        let Some(items) = v.as_array() else {
            self.violations.push(format!("{path}: expected an array of {len} scalars"));
            return None;
        };
        if items.len() != len {
            self.violations.push(format!("{path}: expected {len} entries, found {}", items.len()));
        }
        let out: Vec<Option<ScalarLiteral>> = items
            .iter()
            .enumerate()
            .map(|(i, x)| self.scalar(x, &format!("{path}[{i}]")))
            .collect();
        if items.len() != len {
            return None;
        }
        out.into_iter().collect()
    }

    fn matrix(&mut self, v: &Value, n: usize, path: &str) -> Option<Vec<Vec<ScalarLiteral>>> {
        let Some(rows) = v.as_array() else {
            self.violations.push(format!("{path}: expected a {n}x{n} matrix (array of rows)"));
            return None;
        };
        if rows.len() != n {
            self.violations.push(format!("{path}: expected {n} rows, found {}", rows.len()));
        }
        let out: Vec<Option<Vec<ScalarLiteral>>> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| self.vector(r, n, &format!("{path}[{i}]")))
            .collect();
        if rows.len() != n {
            return None;
        }
        out.into_iter().collect()
    }

    fn affine(&mut self, v: &Value, n: usize, path: &str) -> Option<AffineLiteral> {
        let Some(obj) = v.as_object() else {
            self.violations.push(format!("{path}: expected an object with keys \"A\" and \"a\""));
            return None;
        };
        for k in obj.keys() {
            if k != "A" && k != "a" {
                self.violations.push(format!("{path}: unknown key \"{k}\""));
            }
        }
        let lin = match obj.get("A") {
            Some(a) => self.matrix(a, n, &format!("{path}.A")),
            None => {
                self.violations.push(format!("{path}: missing \"A\""));
                None
            }
        };
        let t = match obj.get("a") {
            Some(a) => self.vector(a, n, &format!("{path}.a")),
            None => {
                self.violations.push(format!("{path}: missing \"a\""));
                None
            }
        };
        Some(AffineLiteral {
            linear: lin?,
            translation: t?,
        })
    }

    fn maps(&mut self, v: &Value, n: usize, key: &str) -> Option<Vec<AffineLiteral>> {
        let Some(items) = v.as_array() else {
            self.violations.push(format!("{key}: expected an array of affine maps"));
            return None;
        };
        if items.is_empty() {
            self.violations.push(format!("{key}: at least one map is required"));
        }
        let out: Vec<Option<AffineLiteral>> = items
            .iter()
            .enumerate()
            .map(|(i, x)| self.affine(x, n, &format!("{key}[{i}]")))
            .collect();
        out.into_iter().collect()
    }
}

fn parse_error(e: &serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

impl GroupPresentation {
    /// Parses and schema-checks an input document. Syntax errors carry a
    /// line and column; schema problems are reported all at once.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| parse_error(&e))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self> {
        let Some(obj) = value.as_object() else {
            return Err(Error::Schema(vec!["top level: expected an object".into()]));
        };
        let mut violations = Vec::new();
        for k in obj.keys() {
            if !KEYS.contains(&k.as_str()) {
                violations.push(format!("unknown key \"{k}\""));
            }
        }
        let n = match obj.get("n") {
            Some(Value::Number(x)) if x.as_u64().is_some_and(|n| n >= 1) => x.as_u64().map(|n| n as usize),
            Some(_) => {
                violations.push("n: expected a positive integer".into());
                None
            }
            None => {
                violations.push("missing \"n\"".into());
                None
            }
        };
        let constants = match obj.get("constants") {
            None => Some(SurdBasis::default()),
            Some(Value::Array(ds)) => {
                let parsed: Option<Vec<u64>> = ds.iter().map(Value::as_u64).collect();
                match parsed {
                    None => {
                        violations.push("constants: expected an array of positive integers".into());
                        None
                    }
                    Some(ds) => match SurdBasis::new(ds) {
                        Ok(b) => Some(b),
                        Err(e) => {
                            violations.push(format!("constants: {e}"));
                            None
                        }
                    },
                }
            }
            Some(_) => {
                violations.push("constants: expected an array of positive integers".into());
                None
            }
        };
        let description = match obj.get("description") {
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => {
                violations.push("description: expected a string".into());
                None
            }
        };
        let Some(n) = n else {
            if !obj.contains_key("generators") {
                violations.push("missing \"generators\"".into());
            }
            return Err(Error::Schema(violations));
        };

        let mut walk = SchemaWalk {
            violations,
            basis: constants.as_ref(),
        };
        let generators = match obj.get("generators") {
            Some(v) => walk.maps(v, n, "generators"),
            None => {
                walk.violations.push("missing \"generators\"".into());
                None
            }
        };
        let log_generators = obj.get("log_generators").map(|v| walk.maps(v, n, "log_generators"));
        if let (Some(g), Some(Some(l))) = (&generators, &log_generators) {
            if g.len() != l.len() {
                walk.violations.push(format!(
                    "log_generators: expected {} maps (one per generator), found {}",
                    g.len(),
                    l.len()
                ));
            }
        }
        let p_hint = obj.get("P").map(|v| walk.matrix(v, n + 1, "P"));
        let eta_hint = obj.get("eta").map(|v| match v.as_array().and_then(|a| {
            a.iter().map(|x| x.as_u64().filter(|&s| s >= 1).map(|s| s as usize)).collect::<Option<Vec<_>>>()
        }) {
            Some(sizes) if !sizes.is_empty() => {
                let total: usize = sizes.iter().sum();
                if total != n + 1 {
                    walk.violations.push(format!("eta: block sizes sum to {total}, expected n+1 = {}", n + 1));
                }
                Some(sizes)
            }
            _ => {
                walk.violations.push("eta: expected a non-empty array of positive integers".into());
                None
            }
        });
        if p_hint.is_some() != eta_hint.is_some() {
            walk.violations.push("\"P\" and \"eta\" must be given together".into());
        }

        if !walk.violations.is_empty() {
            return Err(Error::Schema(walk.violations));
        }
        Ok(GroupPresentation {
            n,
            constants: constants.expect("checked"),
            generators: generators.expect("checked"),
            log_generators: log_generators.map(|l| l.expect("checked")),
            p_hint: p_hint.map(|p| p.expect("checked")),
            eta_hint: eta_hint.map(|e| e.expect("checked")),
            description,
        })
    }

    /// Builds a presentation from exact maps.
    pub fn from_exact(
        constants: SurdBasis,
        generators: &[AffineMap<ExactComplex>],
        log_generators: Option<&[AffineMap<ExactComplex>]>,
        hint: Option<(&Matrix<ExactComplex>, &BlockStructure)>,
    ) -> Result<Self> {
        let n = generators
            .first()
            .map(AffineMap::n)
            .ok_or_else(|| Error::Schema(vec!["generators: at least one map is required".into()]))?;
        let text = GroupPresentation {
            n,
            constants,
            generators: generators.iter().map(AffineLiteral::from_exact).collect(),
            log_generators: log_generators.map(|l| l.iter().map(AffineLiteral::from_exact).collect()),
            p_hint: hint.map(|(p, _)| {
                p.to_rows()
                    .iter()
                    .map(|r| r.iter().map(ScalarLiteral::from_exact).collect())
                    .collect()
            }),
            eta_hint: hint.map(|(_, eta)| eta.sizes().to_vec()),
            description: None,
        }
        .to_json_string();
        Self::from_json_str(&text)
    }

    pub fn p(&self) -> usize {
        self.generators.len()
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        if let Some(d) = &self.description {
            obj.insert("description".into(), json!(d));
        }
        obj.insert("n".into(), json!(self.n));
        obj.insert("constants".into(), json!(self.constants.radicands()));
        obj.insert(
            "generators".into(),
            Value::Array(self.generators.iter().map(AffineLiteral::to_json).collect()),
        );
        if let Some(l) = &self.log_generators {
            obj.insert("log_generators".into(), Value::Array(l.iter().map(AffineLiteral::to_json).collect()));
        }
        if let Some(p) = &self.p_hint {
            obj.insert(
                "P".into(),
                json!(p.iter().map(|r| r.iter().map(|x| x.text()).collect::<Vec<_>>()).collect::<Vec<_>>()),
            );
        }
        if let Some(eta) = &self.eta_hint {
            obj.insert("eta".into(), json!(eta));
        }
        Value::Object(obj)
    }

    /// Deterministic pretty-printed JSON, ending with a newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("presentation serializes");
        s.push('\n');
        s
    }

    /// All generator entries are in the field tower.
    pub fn is_exact(&self) -> bool {
        self.generators.iter().all(AffineLiteral::is_exact)
    }

    pub fn generators_exact(&self) -> Option<Vec<AffineMap<ExactComplex>>> {
        self.generators.iter().map(AffineLiteral::exact).collect()
    }

    pub fn generators_numeric(&self, prec: usize) -> Result<Vec<AffineMap<BigComplex>>> {
        self.generators.iter().map(|g| g.numeric(prec)).collect()
    }

    pub fn logs_exact(&self) -> Option<Vec<AffineMap<ExactComplex>>> {
        self.log_generators.as_ref()?.iter().map(AffineLiteral::exact).collect()
    }

    pub fn logs_numeric(&self, prec: usize) -> Option<Result<Vec<AffineMap<BigComplex>>>> {
        self.log_generators
            .as_ref()
            .map(|l| l.iter().map(|g| g.numeric(prec)).collect())
    }

    pub fn eta(&self) -> Option<BlockStructure> {
        self.eta_hint.as_ref().and_then(|e| BlockStructure::new(e.clone()).ok())
    }

    pub fn p_hint_exact(&self) -> Option<Matrix<ExactComplex>> {
        let rows = self
            .p_hint
            .as_ref()?
            .iter()
            .map(|r| r.iter().map(|x| x.exact().cloned()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Matrix::from_rows(rows).ok()
    }

    pub fn p_hint_numeric(&self, prec: usize) -> Option<Result<Matrix<BigComplex>>> {
        let rows = self.p_hint.as_ref()?;
        Some(
            rows.iter()
                .map(|r| r.iter().map(|x| x.numeric(prec)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
                .and_then(Matrix::from_rows),
        )
    }
}

/// Outcome of [`validate_presentation`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub p: usize,
    pub backend: Backend,
    /// Worst relative commutator deviation (`log2`); `-inf` on the exact backend.
    pub commutator_log2: f64,
    /// `max |exp(Psi(f'_k)) - Phi(f_k)|` per log generator.
    pub log_residuals: Vec<f64>,
}

/// Tolerance (`log2`, relative) for numeric equality checks at `prec` bits.
pub fn numeric_tolerance_log2(prec: usize) -> f64 {
    -(prec as f64) / 2.0
}

fn pow2(l: f64) -> f64 {
    if l == f64::NEG_INFINITY {
        0.0
    } else {
        l.exp2()
    }
}

/// Relative pivot threshold used when inverting numeric linear parts.
pub fn numeric_inverse(m: &Matrix<BigComplex>, prec: usize) -> Result<Matrix<BigComplex>> {
    let cut = max_log2(m) + numeric_tolerance_log2(prec);
    m.inverse_with(|x| x.log2_abs() < cut)
}

/// Checks invertibility, pairwise commutativity and (when present) that the
/// log generators exponentiate to the generators. Indices in errors are 1-based.
pub fn validate_presentation(g: &GroupPresentation, prec: usize) -> Result<ValidationReport> {
    let p = g.p();
    let (backend, commutator_log2) = match g.generators_exact() {
        Some(maps) => {
            for (k, f) in maps.iter().enumerate() {
                if f.linear().determinant()?.is_zero() {
                    return Err(Error::NotInvertible(k + 1));
                }
            }
            for j in 0..p {
                for k in j + 1..p {
                    if !maps[j].compose(&maps[k])?.field_eq(&maps[k].compose(&maps[j])?) {
                        return Err(Error::NotAbelian(j + 1, k + 1));
                    }
                }
            }
            (Backend::Exact, f64::NEG_INFINITY)
        }
        None => {
            let maps = g.generators_numeric(prec)?;
            for (k, f) in maps.iter().enumerate() {
                if numeric_inverse(f.linear(), prec).is_err() {
                    return Err(Error::NotInvertible(k + 1));
                }
            }
            let tol = numeric_tolerance_log2(prec);
            let mut worst = f64::NEG_INFINITY;
            for j in 0..p {
                for k in j + 1..p {
                    let a = maps[j].compose(&maps[k])?.phi();
                    let b = maps[k].compose(&maps[j])?.phi();
                    let d = deviation_log2(&a, &b);
                    if d > tol {
                        return Err(Error::NotAbelian(j + 1, k + 1));
                    }
                    worst = worst.max(d);
                }
            }
            (Backend::Numeric, worst)
        }
    };

    let mut log_residuals = Vec::new();
    if let Some(logs) = g.logs_numeric(prec) {
        let logs = logs?;
        let gens = g.generators_numeric(prec)?;
        for (k, (l, f)) in logs.iter().zip(&gens).enumerate() {
            let e = expm(&l.psi())?;
            let target = f.phi();
            let residual = max_log2(&e.sub(&target)?);
            let allowed = numeric_tolerance_log2(prec) + max_log2(&target).max(0.0);
            let value = pow2(residual);
            if residual > allowed {
                return Err(Error::LogMismatch {
                    index: k + 1,
                    residual: value,
                });
            }
            log_residuals.push(value);
        }
    }

    Ok(ValidationReport {
        n: g.n,
        p,
        backend,
        commutator_log2,
        log_residuals,
    })
}

/// Evaluates group words `f_1^{e_1} ∘ ... ∘ f_p^{e_p}` on points, caching
/// inverses of the generators on first use.
pub struct OrbitEvaluator<T> {
    maps: Vec<AffineMap<T>>,
    inverses: Vec<OnceLock<Result<AffineMap<T>>>>,
    invert: fn(&AffineMap<T>) -> Result<AffineMap<T>>,
}

impl<T: Field> OrbitEvaluator<T> {
    pub fn new(maps: Vec<AffineMap<T>>) -> Self {
        Self::with_inverter(maps, |f| f.inverse())
    }

    pub fn with_inverter(maps: Vec<AffineMap<T>>, invert: fn(&AffineMap<T>) -> Result<AffineMap<T>>) -> Self {
        let inverses = (0..maps.len()).map(|_| OnceLock::new()).collect();
        OrbitEvaluator { maps, inverses, invert }
    }

    pub fn maps(&self) -> &[AffineMap<T>] {
        &self.maps
    }

    pub fn inverse(&self, k: usize) -> Result<&AffineMap<T>> {
        self.inverses[k]
            .get_or_init(|| (self.invert)(&self.maps[k]))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn check_len(&self, exponents: &[i64]) -> Result<()> {
        if exponents.len() != self.maps.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} exponents for {} generators",
                exponents.len(),
                self.maps.len()
            )));
        }
        Ok(())
    }

    /// `(f_1^{e_1} ∘ ... ∘ f_p^{e_p})(x)` by repeated application, innermost `f_p`.
    pub fn apply_word(&self, exponents: &[i64], x: &[T]) -> Result<Vec<T>> {
        self.check_len(exponents)?;
        let mut y = x.to_vec();
        for (k, &e) in exponents.iter().enumerate().rev() {
            let f = if e < 0 { self.inverse(k)? } else { &self.maps[k] };
            for _ in 0..e.unsigned_abs() {
                y = f.apply(&y)?;
            }
        }
        Ok(y)
    }

    /// The group element `f_1^{e_1} ∘ ... ∘ f_p^{e_p}`.
    pub fn word(&self, exponents: &[i64]) -> Result<AffineMap<T>> {
        self.check_len(exponents)?;
        let n = self.maps.first().map_or(0, AffineMap::n);
        let mut acc = AffineMap::identity(n);
        for (k, &e) in exponents.iter().enumerate() {
            let inv = if e < 0 { Some(self.inverse(k)?) } else { None };
            acc = acc.compose(&self.maps[k].pow_with(e, inv)?)?;
        }
        Ok(acc)
    }
}

/// `(f_1^{e_1} ∘ ... ∘ f_p^{e_p})(x)` evaluated at `prec` bits.
pub fn apply_orbit_word(g: &GroupPresentation, exponents: &[i64], x: &[BigComplex], prec: usize) -> Result<Vec<BigComplex>> {
    let maps = g.generators_numeric(prec)?;
    let eval = OrbitEvaluator::with_inverter(maps, |f| {
        let prec = f.translation().iter().map(BigComplex::prec).max().unwrap_or(64);
        let inv = numeric_inverse(f.linear(), prec)?;
        let t: Vec<BigComplex> = inv.mul_vec(f.translation())?.iter().map(Field::neg).collect();
        AffineMap::new(inv, t)
    });
    eval.apply_word(exponents, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROTATION: &str = r#"{"n": 2, "generators": [
        {"A": [[1,0],[0,1]], "a": [1, 0]},
        {"A": [["i",0],[0,"i"]], "a": [0, 0]}
    ]}"#;

    #[test]
    fn parse_errors_have_positions() {
        let err = GroupPresentation::from_json_str("{\n  \"n\": 1,\n  \"generators\": [}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn schema_violations_are_exhaustive() {
        let doc = r#"{"n": 2, "constants": [2, 4], "bogus": 1, "generators": [
            {"A": [[1,0]], "a": [1, "sqrt(2"]},
            {"A": [[1,0],[0,1]], "a": [1, "sqrt(3)"]}
        ], "eta": [1, 1]}"#;
        let Error::Schema(v) = GroupPresentation::from_json_str(doc).unwrap_err() else {
            panic!("expected schema error")
        };
        let joined = v.join("\n");
        for needle in ["bogus", "constants", "generators[0].A", "generators[0].a[1]", "\"P\" and \"eta\""] {
            assert!(joined.contains(needle), "missing {needle} in {joined}");
        }
    }

    #[test]
    fn undeclared_radicand() {
        let doc = r#"{"n": 1, "constants": [2], "generators": [{"A": [[1]], "a": ["sqrt(3)"]}]}"#;
        let Error::Schema(v) = GroupPresentation::from_json_str(doc).unwrap_err() else {
            panic!()
        };
        assert!(v[0].contains("sqrt(3)"));
    }

    #[test]
    fn rotation_does_not_commute_with_translation() {
        let g = GroupPresentation::from_json_str(ROTATION).unwrap();
        assert_eq!(validate_presentation(&g, 128).unwrap_err(), Error::NotAbelian(1, 2));
    }

    #[test]
    fn singular_generator() {
        let doc = r#"{"n": 2, "generators": [{"A": [[0,0],[0,1]], "a": [0, 0]}]}"#;
        let g = GroupPresentation::from_json_str(doc).unwrap();
        assert_eq!(validate_presentation(&g, 128).unwrap_err(), Error::NotInvertible(1));
        let doc = r#"{"n": 1, "generators": [{"A": [["exp(1) - exp(1)"]], "a": [0]}]}"#;
        let g = GroupPresentation::from_json_str(doc).unwrap();
        assert_eq!(validate_presentation(&g, 128).unwrap_err(), Error::NotInvertible(1));
    }

    #[test]
    fn round_trip_is_stable() {
        let g = GroupPresentation::from_json_str(ROTATION).unwrap();
        let s = g.to_json_string();
        let again = GroupPresentation::from_json_str(&s).unwrap();
        assert_eq!(again.to_json_string(), s);
        assert_eq!(again.generators.len(), 2);
    }

    #[test]
    fn words() {
        let doc = r#"{"n": 1, "generators": [{"A": [[2]], "a": [1]}, {"A": [[1]], "a": [0]}]}"#;
        let g = GroupPresentation::from_json_str(doc).unwrap();
        let eval = OrbitEvaluator::new(g.generators_exact().unwrap());
        let x = vec![ExactComplex::from_i64(3)];
        assert_eq!(eval.apply_word(&[0, 0], &x).unwrap(), x);
        let y = eval.apply_word(&[2, 5], &x).unwrap();
        assert_eq!(y, vec![ExactComplex::from_i64(15)]);
        assert_eq!(eval.word(&[2, 5]).unwrap().apply(&x).unwrap(), y);
        assert_eq!(eval.apply_word(&[-2, 0], &y).unwrap(), x);
    }
}
