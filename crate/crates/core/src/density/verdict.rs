use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::presentation::Backend;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DensityStatus {
    Dense,
    NotDense,
    Inconclusive,
}

impl std::fmt::Display for DensityStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DensityStatus::Dense => "DENSE",
            DensityStatus::NotDense => "NOT_DENSE",
            DensityStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// `rank_F [Re u; Im u] = 2n` and the rational system `M_Q s = 0` has only
    /// the trivial solution (`q_rows x q_cols`, rank `q_cols`).
    ExactRankProof { rank: usize, q_rows: usize, q_cols: usize },
    /// Nonzero `s` in `Z^m` with `rank [Re u; Im u; s] <= 2n`. `rank_deficient`
    /// marks the case `rank [Re u; Im u] < 2n`, where any `s` works.
    IntegerRelation { s: Vec<BigInt>, rank_deficient: bool, residual_log2: Option<f64> },
    /// `m <= 2n` generators cannot reach rank `2n + 1`.
    CountShortfall { m: usize, required: usize },
    /// No relation with `max |s_j| <= bound` exists in the reduced lattice.
    LatticeConfidence { bound: u64, min_gram_schmidt_log2: f64 },
    /// The numeric evidence decides nothing.
    Undecided { reason: String },
}

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ExactRankProof { .. } => "ExactRankProof",
            Certificate::IntegerRelation { .. } => "IntegerRelation",
            Certificate::CountShortfall { .. } => "CountShortfall",
            Certificate::LatticeConfidence { .. } => "LatticeConfidence",
            Certificate::Undecided { .. } => "Undecided",
        }
    }

    pub fn relation(&self) -> Option<&[BigInt]> {
        match self {
            Certificate::IntegerRelation { s, .. } => Some(s),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let data = match self {
            Certificate::ExactRankProof { rank, q_rows, q_cols } => {
                json!({"rank": rank, "rational_system": [q_rows, q_cols]})
            }
            Certificate::IntegerRelation { s, rank_deficient, residual_log2 } => json!({
                "s": s.iter().map(int_json).collect::<Vec<_>>(),
                "rank_deficient": rank_deficient,
                "residual_log2": residual_log2.map_or(Value::Null, finite_or_null),
            }),
            Certificate::CountShortfall { m, required } => json!({"m": m, "required": required}),
            Certificate::LatticeConfidence { bound, min_gram_schmidt_log2 } => {
                json!({"max_relation_norm": bound, "min_gram_schmidt_log2": finite_or_null(*min_gram_schmidt_log2)})
            }
            Certificate::Undecided { reason } => json!({"reason": reason}),
        };
        json!({"type": self.kind(), "data": data})
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityVerdict {
    pub status: DensityStatus,
    pub certificate: Certificate,
    pub backend: Backend,
}

impl DensityVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status.to_string(),
            "certificate": self.certificate.to_json(),
            "backend": self.backend.to_string(),
        })
    }
}

/// `NOT_DENSE` when `m <= 2n`.
pub fn count_shortcut(m: usize, n: usize, backend: Backend) -> Option<DensityVerdict> {
    (m <= 2 * n).then(|| DensityVerdict {
        status: DensityStatus::NotDense,
        certificate: Certificate::CountShortfall { m, required: 2 * n + 1 },
        backend,
    })
}
