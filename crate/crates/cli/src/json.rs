//! JSON renderings of exact values. Rationals are written as strings.

use dirac_core::linalg::{fmt_q, Q};
use dirac_core::roots::Weight;
use serde_json::Value;

pub fn q_json(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

/// Simple-root coordinates.
pub fn w_json(w: &Weight) -> Value {
    Value::Array(w.0.iter().map(q_json).collect())
}

pub fn w_str(w: &Weight) -> String {
    w.to_string()
}
