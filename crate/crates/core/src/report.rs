//! JSON reports and their CSV/text views.
//!
//! Degree-indexed maps use string integer keys in ascending numeric order.
//! Every report carries `"schema"` and the convention fingerprint.

use std::collections::BTreeMap;

use num_traits::One;
use serde_json::{json, Map, Value};

use crate::linalg::{format_rational, Rational};
use crate::series::PoincareSeries;

pub const SCHEMA: &str = "rephom/1";

/// Sign choices and normalizations that affect reported values.
pub fn fingerprint() -> Value {
    json!({
        "rep_differential": "d(ξ_k* v) = ρ_k(dv), ρ(v) = Σ_i (ξ_i* v) ⊗ ξ_i",
        "ce_differential": "d y_γ = −Σ (−1)^{|y_α|} D^γ_α y_α − ½ Σ (−1)^{|x_α||y_β|} c^γ_{αβ} y_α y_β",
        "forms": "deg g = −|g|, deg dg = 1 − |g|, ∂(dg) = −d(∂g)",
        "loop_degree": "n ↦ −n − 1",
        "psi": "1/(m+1)! Σ_σ Koszul sign on suspended factors; Ψ∘d = −∂∘Ψ",
        "psi_mixed_factor": "−[f₀′ ∏ f_i dz s (ds)^{m−1}]",
        "trace_check": "classes spanned by trace images of symmetric words",
        "macdonald": "χ = (1/|W|) ∏ (1 − q^j)^l · CT",
    })
}

/// Wraps a report body with schema, command and fingerprint.
pub fn envelope(command: &str, body: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    for (k, v) in body {
        m.insert(k, v);
    }
    m.insert("conventions".into(), fingerprint());
    Value::Object(m)
}

pub fn rational_json(r: &Rational) -> Value {
    if r.denom().is_one() {
        match i64::try_from(r.numer().clone()) {
            Ok(n) => json!(n),
            Err(_) => json!(r.numer().to_string()),
        }
    } else {
        json!(format_rational(r))
    }
}

/// `{"0": 1, "5": 1, …}` with keys ascending.
pub fn dims_json(dims: &BTreeMap<i64, usize>) -> Value {
    let mut m = Map::new();
    for (k, v) in dims {
        m.insert(k.to_string(), json!(v));
    }
    Value::Object(m)
}

/// Univariate series as degree map of nonzero coefficients.
pub fn series_coeffs_json(s: &PoincareSeries) -> Value {
    let mut m = Map::new();
    for (k, c) in s.univariate_coeffs() {
        m.insert(k.to_string(), rational_json(&c));
    }
    Value::Object(m)
}

/// Series with its display string and coefficients. Multivariate series list
/// terms as `[exponents…, coefficient]`.
pub fn series_json(s: &PoincareSeries) -> Value {
    if s.vars().len() == 1 {
        json!({"text": s.to_string(), "bound": s.bounds()[0], "coeffs": series_coeffs_json(s)})
    } else {
        let terms: Vec<Value> = s
            .terms()
            .map(|(e, c)| {
                let mut row: Vec<Value> = e.iter().map(|x| json!(x)).collect();
                row.push(rational_json(c));
                Value::Array(row)
            })
            .collect();
        json!({"text": s.to_string(), "vars": s.vars(), "bounds": s.bounds(), "terms": terms})
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn render(v: &Value, f: Format) -> String {
    match f {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("path,value\n");
            for (p, val) in flatten(v) {
                out.push_str(&csv_field(&p));
                out.push(',');
                out.push_str(&csv_field(&val));
                out.push('\n');
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (p, val) in flatten(v) {
                if p.starts_with("conventions.") {
                    continue;
                }
                out.push_str(&format!("{p}: {val}\n"));
            }
            out
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Leaf values keyed by dotted paths, in document order.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn rec(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    rec(&join(k), x, out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    rec(&join(&i.to_string()), x, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    rec("", v, &mut out);
    out
}
