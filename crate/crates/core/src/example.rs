//! The worked example: a group of four commuting affine maps of `C^2` with a
//! dense orbit through `w0 = (0, 1)`.

use serde_json::json;

use crate::presentation::GroupPresentation;

const A1: &str = "1 + i";
const L2: &str = "-2 + i";
const L3: &str = "-sqrt(2)/pi + i*(sqrt(2)/(2*pi) - sqrt(7)/2)";
const A3: &str = "-sqrt(3)/(2*pi) + i*(sqrt(5)/2 - sqrt(3)/(2*pi))";
const A4: &str = "2*i*pi";

fn generators() -> serde_json::Value {
    json!([
        {"A": [["1", "0"], ["0", "1"]], "a": [A1, "0"]},
        {"A": [["1", "0"], ["0", format!("exp({L2})")]], "a": ["0", "0"]},
        {"A": [["1", "0"], ["0", format!("exp({L3})")]], "a": [A3, "0"]},
        {"A": [["1", "0"], ["0", "1"]], "a": [A4, "0"]},
    ])
}

fn logs() -> serde_json::Value {
    json!([
        {"A": [["0", "0"], ["0", "0"]], "a": [A1, "0"]},
        {"A": [["0", "0"], ["0", L2]], "a": ["0", "0"]},
        {"A": [["0", "0"], ["0", L3]], "a": [A3, "0"]},
        {"A": [["0", "0"], ["0", "0"]], "a": [A4, "0"]},
    ])
}

/// Exact form: generators, their logarithms, `P = I_3` and `eta = (2, 1)`.
pub fn ayadi_exact() -> GroupPresentation {
    GroupPresentation::from_value(&json!({
        "description": "Four commuting affine maps of C^2; every orbit in C x C* is dense",
        "n": 2,
        "constants": [2, 3, 5, 7],
        "generators": generators(),
        "log_generators": logs(),
        "P": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "eta": [2, 1],
    }))
    .expect("embedded example is well formed")
}

/// Numeric form: only the (exponentiated) generators.
pub fn ayadi_numeric() -> GroupPresentation {
    GroupPresentation::from_value(&json!({
        "description": "Four commuting affine maps of C^2 (generators only)",
        "n": 2,
        "constants": [2, 3, 5, 7],
        "generators": generators(),
    }))
    .expect("embedded example is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::validate_presentation;

    #[test]
    fn exact_form_round_trips() {
        let g = ayadi_exact();
        let s = g.to_json_string();
        assert_eq!(GroupPresentation::from_json_str(&s).unwrap().to_json_string(), s);
        assert!(g.logs_exact().is_some());
        assert!(g.p_hint_exact().is_some());
        assert!(!g.is_exact());
    }

    #[test]
    fn validates() {
        let r = validate_presentation(&ayadi_exact(), 192).unwrap();
        assert_eq!(r.p, 4);
        assert!(r.log_residuals.iter().all(|&x| x < 2f64.powi(-150)));
        validate_presentation(&ayadi_numeric(), 192).unwrap();
    }
}

#[cfg(test)]
mod pipeline_tests {
    use super::*;
    use crate::scalars::Field;
    use crate::explog::compute_log_generators;
    use crate::normal_form::{affine_normal_form, normal_form};

    #[test]
    fn computed_normal_form_is_the_identity() {
        let g = ayadi_numeric();
        let nf = affine_normal_form(&g, 192).unwrap();
        assert_eq!(nf.eta.sizes(), &[2, 1]);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                let z = nf.p.get(i, j).to_c64();
                assert!((z.re - want).abs() < 1e-40 && z.im.abs() < 1e-40, "P[{i}][{j}] = {z}");
            }
        }
        let w0: Vec<_> = nf.w0.iter().map(|z| z.to_c64()).collect();
        assert!(w0[0].norm() < 1e-40 && (w0[1].re - 1.0).abs() < 1e-40);
        let logs = compute_log_generators(&nf, &g).unwrap();
        assert!(logs.iter().all(|l| l.residual < 2f64.powi(-80)));
        let b2 = logs[1].map.linear().get(1, 1).to_c64();
        assert!((b2.re + 2.0).abs() < 1e-40 && (b2.im - 1.0).abs() < 1e-40);
    }

    #[test]
    fn hinted_normal_form() {
        let nf = normal_form(&ayadi_exact(), 192).unwrap();
        let w0 = nf.w0_exact.unwrap();
        assert!(w0[0].is_zero());
        assert_eq!(w0[1], crate::scalars::ExactComplex::from_i64(1));
    }
}
