//! The full decision pipeline: validate, normal form, logs, density instance,
//! count shortcut, density test.

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{BackendChoice, RunConfig};
use crate::density::{
    build_instance, build_instance_exact, count_shortcut, waldschmidt_exact, waldschmidt_numeric, Certificate, DensityInstance,
    DensityStatus, DensityVerdict,
};
use crate::error::{Error, Result, Stage};
use crate::explog::{compute_log_generators, LogGenerator};
use crate::normal_form::{normal_form, NormalForm};
use crate::presentation::{validate_presentation, Backend, GroupPresentation, ValidationReport};
use crate::scalars::{hex_bigfloat, BigComplex, ExactComplex, Field, ScalarLiteral};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HypercyclicStatus {
    Hypercyclic,
    NotHypercyclic,
    Inconclusive,
}

impl std::fmt::Display for HypercyclicStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HypercyclicStatus::Hypercyclic => "HYPERCYCLIC",
            HypercyclicStatus::NotHypercyclic => "NOT_HYPERCYCLIC",
            HypercyclicStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

impl From<DensityStatus> for HypercyclicStatus {
    fn from(s: DensityStatus) -> Self {
        match s {
            DensityStatus::Dense => HypercyclicStatus::Hypercyclic,
            DensityStatus::NotDense => HypercyclicStatus::NotHypercyclic,
            DensityStatus::Inconclusive => HypercyclicStatus::Inconclusive,
        }
    }
}

/// Everything the pipeline computed on the way to its verdict.
#[derive(Clone, Debug)]
pub struct HypercyclicityReport {
    pub status: HypercyclicStatus,
    pub verdict: DensityVerdict,
    pub validation: ValidationReport,
    pub normal_form: Option<NormalForm>,
    pub logs: Vec<LogGenerator>,
    pub instance: Option<DensityInstance<BigComplex>>,
    pub instance_exact: Option<DensityInstance<ExactComplex>>,
    pub notes: Vec<String>,
    pub config: RunConfig,
}

impl HypercyclicityReport {
    pub fn witness(&self) -> Option<&[BigComplex]> {
        self.normal_form.as_ref().map(|nf| nf.w0.as_slice())
    }

    pub fn witness_exact(&self) -> Option<&[ExactComplex]> {
        self.normal_form.as_ref().and_then(|nf| nf.w0_exact.as_deref())
    }

    pub fn to_json(&self) -> Value {
        let witness = match (self.witness_exact(), self.witness()) {
            (Some(w), _) => Value::Array(w.iter().map(exact_json).collect()),
            (None, Some(w)) => Value::Array(w.iter().map(complex_hex_json).collect()),
            (None, None) => Value::Null,
        };
        let witness_w0 = self.witness().map_or(Value::Null, |w| Value::Array(w.iter().map(complex_hex_json).collect()));
        let nf = self.normal_form.as_ref();
        json!({
            "status": self.status.to_string(),
            "certificate": self.verdict.certificate.to_json(),
            "density": self.verdict.status.to_string(),
            "witness": witness,
            "witness_w0": witness_w0,
            "backend": self.verdict.backend.to_string(),
            "n": self.validation.n,
            "p": self.validation.p,
            "r": nf.map(NormalForm::r),
            "eta": nf.map(|f| f.eta.sizes().to_vec()),
            "m": self.instance.as_ref().map(DensityInstance::m).or(self.instance_exact.as_ref().map(DensityInstance::m)),
            "residuals": {
                "commutator_log2": finite_or_null(self.validation.commutator_log2),
                "supplied_logs": self.validation.log_residuals.iter().map(|&x| hex_or_null(x)).collect::<Vec<_>>(),
                "normal_form_log2": nf.map_or(Value::Null, |f| finite_or_null(f.residual_log2)),
                "log_generators": self.logs.iter().map(|l| hex_or_null(l.residual)).collect::<Vec<_>>(),
            },
            "notes": self.notes,
            "config": self.config.to_json(),
        })
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn hex_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(crate::scalars::hex_f64(x))
    } else {
        Value::Null
    }
}

/// Integers as JSON numbers, anything else as a scalar literal string.
pub fn exact_json(z: &ExactComplex) -> Value {
    if z.im.is_zero() {
        if let Some(v) = z.re.as_integer().and_then(|v| i64::try_from(v).ok()) {
            return json!(v);
        }
    }
    json!(ScalarLiteral::from_exact(z).text())
}

pub fn complex_hex_json(z: &BigComplex) -> Value {
    json!([hex_bigfloat(z.re()), hex_bigfloat(z.im())])
}

/// Describes the set `V = p2(P U)` of points with dense orbit, where `U` fixes
/// the first homogeneous coordinate to 1 and requires every later block start
/// to be nonzero. Rendered as a product when `P` is the identity.
pub fn dense_orbit_set(nf: &NormalForm) -> String {
    let n = nf.w0.len();
    let starts = nf.eta.starts();
    let is_identity = (0..=n).all(|i| {
        (0..=n).all(|j| {
            let target = BigComplex::from_int(i64::from(i == j), nf.prec);
            nf.p.get(i, j).sub(&target).is_zero()
        })
    });
    if is_identity {
        let factors: Vec<&str> = (1..=n).map(|i| if starts[1..].contains(&i) { "C*" } else { "C" }).collect();
        return factors.join(" x ");
    }
    let coords: Vec<String> = starts[1..].iter().map(|s| format!("x_{s}")).collect();
    if coords.is_empty() {
        "p2(P U) with U = {x : x_0 = 1}".into()
    } else {
        format!("p2(P U) with U = {{x : x_0 = 1, {} != 0}}", coords.join(", "))
    }
}

fn constants_note(g: &GroupPresentation) -> String {
    let surds: Vec<String> = g.constants.radicands().iter().map(|m| format!("sqrt({m})")).collect();
    if surds.is_empty() {
        "verdict assumes pi is transcendental".into()
    } else {
        format!(
            "verdict assumes pi is transcendental and the declared constants {} generate the field exactly as declared",
            surds.join(", ")
        )
    }
}

fn choose_backend(choice: BackendChoice, exact_available: bool) -> Result<Backend> {
    match choice {
        BackendChoice::Auto => Ok(if exact_available { Backend::Exact } else { Backend::Numeric }),
        BackendChoice::Numeric => Ok(Backend::Numeric),
        BackendChoice::Exact if exact_available => Ok(Backend::Exact),
        BackendChoice::Exact => Err(Error::NotExact(
            "the exact backend needs exact logs, an exact P and an exact witness".into(),
        )),
    }
}

/// Runs the pipeline. Errors carry the stage that raised them.
pub fn decide_hypercyclic(g: &GroupPresentation, config: &RunConfig) -> Result<HypercyclicityReport> {
    let prec = config.prec;
    let validation = validate_presentation(g, prec).map_err(|e| e.at(Stage::Validate))?;
    let n = g.n;
    let p = g.p();
    let mut notes = vec![constants_note(g)];

    // m = p + r - 1 <= p + n, so p <= n already rules out density.
    if p <= n {
        let backend = if g.is_exact() && config.backend != BackendChoice::Numeric { Backend::Exact } else { Backend::Numeric };
        let verdict = DensityVerdict {
            status: DensityStatus::NotDense,
            certificate: Certificate::CountShortfall { m: p + n, required: 2 * n + 1 },
            backend,
        };
        notes.push(format!("p = {p} <= n = {n}: at most {} generators for the additive group, {} needed", p + n, 2 * n + 1));
        return Ok(HypercyclicityReport {
            status: HypercyclicStatus::NotHypercyclic,
            verdict,
            validation,
            normal_form: None,
            logs: Vec::new(),
            instance: None,
            instance_exact: None,
            notes,
            config: config.clone(),
        });
    }

    let nf = normal_form(g, prec).map_err(|e| e.at(Stage::NormalForm))?;
    let logs = compute_log_generators(&nf, g).map_err(|e| e.at(Stage::Logs))?;
    let exact = match build_instance_exact(&logs, &nf, config.include_first_block) {
        Some(r) => Some(r.map_err(|e| e.at(Stage::Instance))?),
        None => None,
    };
    let backend = choose_backend(config.backend, exact.is_some()).map_err(|e| e.at(Stage::Instance))?;
    let numeric = match (&exact, backend) {
        (Some(inst), Backend::Exact) => inst.to_numeric(prec),
        _ => build_instance(&logs, &nf, config.include_first_block).map_err(|e| e.at(Stage::Instance))?,
    };
    let m = numeric.m();

    let verdict = match count_shortcut(m, n, backend) {
        Some(v) => {
            notes.push(format!("m = {m} <= 2n = {}: rank 2n + 1 is out of reach", 2 * n));
            v
        }
        None => match (backend, &exact) {
            (Backend::Exact, Some(inst)) => waldschmidt_exact(inst),
            _ => waldschmidt_numeric(&numeric, config.max_relation_norm, prec),
        }
        .map_err(|e| e.at(Stage::Density))?,
    };

    if verdict.status == DensityStatus::Dense {
        notes.push(format!("the orbit of w0 is dense; so is every orbit in V = {}", dense_orbit_set(&nf)));
    }
    let complex_direction = (2..=nf.r()).any(|k| nf.lattice_direction(k).iter().any(|x| !x.im().is_zero()));
    if complex_direction {
        notes.push("some lattice direction p2(P e^(k)) is not real; the general real/imaginary split of 2 i pi p2(P e^(k)) was used".into());
    }

    Ok(HypercyclicityReport {
        status: verdict.status.into(),
        verdict,
        validation,
        normal_form: Some(nf),
        logs,
        instance: Some(numeric),
        instance_exact: if backend == Backend::Exact { exact } else { None },
        notes,
        config: config.clone(),
    })
}
