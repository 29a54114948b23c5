//! Command-line frontend.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::{BackendChoice, RunConfig, DEFAULT_MAX_RELATION_NORM, DEFAULT_PREC, PREC_ENV};
use crate::error::{Error, Result, Stage};
use crate::example::{ayadi_exact, ayadi_numeric};
use crate::explog::compute_log_generators;
use crate::linalg::Matrix;
use crate::normal_form::normal_form;
use crate::orbit::{coverage, orbit_coverage, sample_orbit, write_histogram_csv, write_points_csv, CoverageConfig};
use crate::pipeline::{complex_hex_json, decide_hypercyclic, exact_json, HypercyclicStatus};
use crate::presentation::{validate_presentation, GroupPresentation};
use crate::scalars::{hex_f64, BigComplex, ExactComplex};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hyperorbit", version, about = "Decide whether an abelian group of affine maps of C^n has a dense orbit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Working precision in bits.
    #[arg(long, env = PREC_ENV, default_value_t = DEFAULT_PREC)]
    pub prec: usize,
    #[arg(long, value_enum, default_value_t = BackendChoice::Auto)]
    pub backend: BackendChoice,
    /// Largest `max |s_j|` excluded by a numeric DENSE verdict.
    #[arg(long, default_value_t = DEFAULT_MAX_RELATION_NORM)]
    pub max_relation_norm: u64,
    /// Also add the lattice direction of the first block.
    #[arg(long)]
    pub include_first_block: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl RunArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            prec: self.prec,
            max_relation_norm: self.max_relation_norm,
            include_first_block: self.include_first_block,
            backend: self.backend,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check invertibility, commutativity and supplied logarithms.
    Validate {
        /// Presentation JSON file, or `-` for stdin.
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Conjugating matrix P, block sizes and witness w0.
    Normalize {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Branch-corrected logarithms of the generators.
    Logs {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Density verdict for the additive group attached to w0.
    Density {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Full hypercyclicity decision. Several inputs are processed concurrently.
    Check {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Sample an orbit by bounded words and measure grid coverage of a box.
    Orbit {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Start point as `re1,im1,re2,im2,...`; defaults to w0.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
        /// The box is `[-h, h]` on every real coordinate.
        #[arg(long, default_value_t = 1.0)]
        half_width: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Exponents range over `[-N, N]`.
        #[arg(long, default_value_t = 20)]
        exponent_bound: i64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// Write the points as CSV.
        #[arg(long)]
        csv_out: Option<PathBuf>,
        /// Write per-cell counts as CSV.
        #[arg(long)]
        histogram_out: Option<PathBuf>,
    },
    /// Print the built-in two-dimensional example presentation.
    Example {
        /// Generators only, as exponentials, without logs or normal form.
        #[arg(long)]
        numeric: bool,
    },
}

/// JSON description of an error, with its stage and details.
pub fn error_json(e: &Error) -> Value {
    let mut obj = json!({
        "kind": e.kind(),
        "stage": e.stage().map(|s| s.to_string()),
        "message": e.root().to_string(),
    });
    match e.root() {
        Error::Parse { line, column, .. } => {
            obj["line"] = json!(line);
            obj["column"] = json!(column);
        }
        Error::Schema(v) => obj["violations"] = json!(v),
        _ => {}
    }
    json!({ "error": obj })
}

pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_input_error() {
        EXIT_INVALID
    } else {
        EXIT_FAILURE
    }
}

fn load(path: &Path) -> Result<GroupPresentation> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Schema(vec![format!("stdin: {e}")]))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Schema(vec![format!("{}: {e}", path.display())]))?
    };
    GroupPresentation::from_json_str(&text).map_err(|e| e.at(Stage::Parse))
}

fn matrix_json(m: &Matrix<BigComplex>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| complex_hex_json(m.get(i, j))).collect())).collect())
}

fn exact_matrix_json(m: &Matrix<ExactComplex>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| exact_json(m.get(i, j))).collect())).collect())
}

fn hex_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(hex_f64(x))
    } else {
        Value::Null
    }
}

fn cmd_validate(input: &Path, run: &RunArgs) -> Result<(Value, i32)> {
    let g = load(input)?;
    let report = validate_presentation(&g, run.prec).map_err(|e| e.at(Stage::Validate))?;
    Ok((
        json!({
            "valid": true,
            "n": report.n,
            "p": report.p,
            "backend": report.backend.to_string(),
            "commutator_log2": hex_or_null(report.commutator_log2),
            "log_residuals": report.log_residuals.iter().map(|&x| hex_or_null(x)).collect::<Vec<_>>(),
        }),
        EXIT_OK,
    ))
}

fn cmd_normalize(input: &Path, run: &RunArgs) -> Result<(Value, i32)> {
    let g = load(input)?;
    validate_presentation(&g, run.prec).map_err(|e| e.at(Stage::Validate))?;
    let nf = normal_form(&g, run.prec).map_err(|e| e.at(Stage::NormalForm))?;
    Ok((
        json!({
            "P": matrix_json(&nf.p),
            "P_exact": nf.p_exact.as_ref().map_or(Value::Null, exact_matrix_json),
            "eta": nf.eta.sizes(),
            "r": nf.r(),
            "w0": nf.w0.iter().map(complex_hex_json).collect::<Vec<_>>(),
            "w0_exact": nf.w0_exact.as_ref().map_or(Value::Null, |w| Value::Array(w.iter().map(exact_json).collect())),
            "residual_log2": hex_or_null(nf.residual_log2),
            "method": serde_json::to_value(&nf.method).unwrap_or(Value::Null),
        }),
        EXIT_OK,
    ))
}

fn cmd_logs(input: &Path, run: &RunArgs) -> Result<(Value, i32)> {
    let g = load(input)?;
    validate_presentation(&g, run.prec).map_err(|e| e.at(Stage::Validate))?;
    let nf = normal_form(&g, run.prec).map_err(|e| e.at(Stage::NormalForm))?;
    let logs = compute_log_generators(&nf, &g).map_err(|e| e.at(Stage::Logs))?;
    let out: Vec<Value> = logs
        .iter()
        .map(|l| {
            json!({
                "k": l.index,
                "B": matrix_json(l.map.linear()),
                "b": l.map.translation().iter().map(complex_hex_json).collect::<Vec<_>>(),
                "branch_shifts": l.branch_shifts,
                "residual": hex_f64(l.residual),
            })
        })
        .collect();
    Ok((Value::Array(out), EXIT_OK))
}

fn status_code(s: HypercyclicStatus) -> i32 {
    if s == HypercyclicStatus::Inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn cmd_density(input: &Path, run: &RunArgs) -> Result<(Value, i32)> {
    let g = load(input)?;
    let report = decide_hypercyclic(&g, &run.config())?;
    let full = report.to_json();
    let mut out = report.verdict.to_json();
    out["witness_w0"] = full["witness_w0"].clone();
    out["config"] = full["config"].clone();
    Ok((out, status_code(report.status)))
}

fn check_one(input: &Path, config: &RunConfig) -> Result<(Value, i32)> {
    let g = load(input)?;
    let report = decide_hypercyclic(&g, config)?;
    Ok((report.to_json(), status_code(report.status)))
}

fn cmd_check(inputs: &[PathBuf], run: &RunArgs) -> (Value, i32) {
    let config = run.config();
    let results: Vec<(Value, i32)> = std::thread::scope(|s| {
        let handles: Vec<_> = inputs
            .iter()
            .map(|p| {
                let config = &config;
                s.spawn(move || check_one(p, config).unwrap_or_else(|e| (error_json(&e), exit_code_for(&e))))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| (json!({"error": {"kind": "Panic"}}), EXIT_FAILURE)))
            .collect()
    });
    if let [single] = results.as_slice() {
        return single.clone();
    }
    let code = [EXIT_INVALID, EXIT_FAILURE, EXIT_INCONCLUSIVE]
        .into_iter()
        .find(|c| results.iter().any(|(_, r)| r == c))
        .unwrap_or(EXIT_OK);
    let items = inputs
        .iter()
        .zip(results)
        .map(|(p, (v, c))| json!({"input": p.display().to_string(), "exit_code": c, "result": v}))
        .collect();
    (Value::Array(items), code)
}

#[allow(clippy::too_many_arguments)]
fn cmd_orbit(
    input: &Path,
    run: &RunArgs,
    point: Option<&[f64]>,
    half_width: f64,
    epsilon: f64,
    exponent_bound: i64,
    budget: usize,
    csv_out: Option<&Path>,
    histogram_out: Option<&Path>,
) -> Result<(Value, i32)> {
    let g = load(input)?;
    validate_presentation(&g, run.prec).map_err(|e| e.at(Stage::Validate))?;
    let x: Vec<Complex64> = match point {
        Some(v) => {
            if v.len() != 2 * g.n {
                return Err(Error::DimensionMismatch(format!("--point needs {} numbers, got {}", 2 * g.n, v.len())).at(Stage::Orbit));
            }
            v.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
        }
        None => normal_form(&g, run.prec).map_err(|e| e.at(Stage::NormalForm))?.w0.iter().map(BigComplex::to_c64).collect(),
    };
    let cfg = CoverageConfig::symmetric(g.n, half_width, epsilon, exponent_bound, budget, run.seed);
    let io = |path: &Path, e: std::io::Error| Error::Schema(vec![format!("{}: {e}", path.display())]).at(Stage::Orbit);
    let (points, overflowed, exhaustive, cov) = if csv_out.is_none() && histogram_out.is_none() {
        let c = orbit_coverage(&g, &x, &cfg).map_err(|e| e.at(Stage::Orbit))?;
        (c.words - c.overflowed, c.overflowed, c.exhaustive, c.coverage)
    } else {
        let sample = sample_orbit(&g, &x, &cfg).map_err(|e| e.at(Stage::Orbit))?;
        if let Some(path) = csv_out {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(|e| io(path, e))?);
            write_points_csv(&mut f, &sample).and_then(|_| f.flush()).map_err(|e| io(path, e))?;
        }
        if let Some(path) = histogram_out {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(|e| io(path, e))?);
            write_histogram_csv(&mut f, &sample.points, &cfg).and_then(|_| f.flush()).map_err(|e| io(path, e))?;
        }
        (sample.points.len(), sample.overflowed.len(), sample.exhaustive, coverage(&sample.points, &cfg))
    };
    Ok((
        json!({
            "start": x.iter().map(|z| json!([hex_f64(z.re), hex_f64(z.im)])).collect::<Vec<_>>(),
            "points": points,
            "overflowed": overflowed,
            "exhaustive": exhaustive,
            "cells": cfg.cell_count(),
            "coverage": hex_f64(cov),
            "coverage_decimal": cov,
            "config": {
                "half_width": half_width,
                "epsilon": epsilon,
                "exponent_bound": exponent_bound,
                "sample_budget": budget,
                "seed": run.seed,
                "prec": run.prec,
            },
        }),
        EXIT_OK,
    ))
}

/// Runs a parsed command, writing JSON to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result: Result<(Value, i32)> = match &cli.command {
        Command::Validate { input, run } => cmd_validate(input, run),
        Command::Normalize { input, run } => cmd_normalize(input, run),
        Command::Logs { input, run } => cmd_logs(input, run),
        Command::Density { input, run } => cmd_density(input, run),
        Command::Check { inputs, run } => Ok(cmd_check(inputs, run)),
        Command::Orbit { input, run, point, half_width, epsilon, exponent_bound, budget, csv_out, histogram_out } => cmd_orbit(
            input,
            run,
            point.as_deref(),
            *half_width,
            *epsilon,
            *exponent_bound,
            *budget,
            csv_out.as_deref(),
            histogram_out.as_deref(),
        ),
        Command::Example { numeric } => {
            let g = if *numeric { ayadi_numeric() } else { ayadi_exact() };
            return match out.write_all(g.to_json_string().as_bytes()) {
                Ok(()) => EXIT_OK,
                Err(_) => EXIT_FAILURE,
            };
        }
    };
    let (value, code) = match result {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            (error_json(&e), exit_code_for(&e))
        }
    };
    let text = serde_json::to_string_pretty(&value).unwrap_or_else(|_| "{}".into());
    if writeln!(out, "{text}").is_err() {
        return EXIT_FAILURE;
    }
    code
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&cli, &mut stdout.lock(), &mut stderr.lock())
}
