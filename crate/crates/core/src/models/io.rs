//! JSON model files.
//!
//! ```json
//! {"type": "quillen",
//!  "generators": [{"name": "v1", "degree": 1, "weight": 1}, …],
//!  "diff": {"v2": [{"coeff": "1/2", "term": ["b", "v1", "v1"]}]}}
//! ```
//! Sullivan files use `"type": "sullivan"`, weights as integers or integer
//! lists, and monomial terms such as `{"z": 3}`.

use serde_json::{json, Map, Value};

use super::lie_expr::{LieExpr, LieTree};
use super::quillen::{QuillenGenerator, QuillenModel};
use super::sullivan::{SullivanGenerator, SullivanModel};
use super::{Model, ModelError};
use crate::gca::{add_into, Element};
use crate::linalg::{format_rational, parse_rational, Rational};

fn perr(pointer: &str, message: impl Into<String>) -> ModelError {
    ModelError::Parse { pointer: pointer.to_string(), message: message.into() }
}

struct RawGen {
    name: String,
    degree: i64,
    weight: Option<Vec<i64>>,
}

fn parse_generators(v: &Value) -> Result<Vec<RawGen>, ModelError> {
    let list = v.get("generators").and_then(Value::as_array).ok_or_else(|| perr("/generators", "expected array"))?;
    let mut out: Vec<RawGen> = Vec::new();
    for (i, g) in list.iter().enumerate() {
        let p = format!("/generators/{i}");
        let name = g
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| perr(&format!("{p}/name"), "expected string"))?
            .to_string();
        if out.iter().any(|r| r.name == name) {
            return Err(perr(&format!("{p}/name"), format!("duplicate generator `{name}`")));
        }
        let degree = g.get("degree").and_then(Value::as_i64).ok_or_else(|| perr(&format!("{p}/degree"), "expected integer"))?;
        let weight = match g.get("weight") {
            None | Some(Value::Null) => None,
            Some(Value::Number(n)) => {
                Some(vec![n.as_i64().ok_or_else(|| perr(&format!("{p}/weight"), "expected integer"))?])
            }
            Some(Value::Array(a)) => {
                let w: Option<Vec<i64>> = a.iter().map(Value::as_i64).collect();
                Some(w.ok_or_else(|| perr(&format!("{p}/weight"), "expected integer list"))?)
            }
            Some(_) => return Err(perr(&format!("{p}/weight"), "expected integer or list")),
        };
        out.push(RawGen { name, degree, weight });
    }
    Ok(out)
}

fn parse_coeff(v: Option<&Value>, p: &str) -> Result<Rational, ModelError> {
    match v {
        None => Ok(crate::linalg::q(1)),
        Some(Value::String(s)) => parse_rational(s).ok_or_else(|| perr(p, format!("`{s}` is not a decimal-free rational"))),
        Some(Value::Number(n)) if n.is_i64() => Ok(crate::linalg::q(n.as_i64().unwrap())),
        Some(_) => Err(perr(p, "expected rational string")),
    }
}

fn parse_tree(v: &Value, names: &[String], p: &str) -> Result<LieTree, ModelError> {
    match v {
        Value::String(s) => names
            .iter()
            .position(|n| n == s)
            .map(LieTree::Gen)
            .ok_or_else(|| ModelError::UnknownGenerator { name: s.clone(), pointer: p.to_string() }),
        Value::Array(a) if a.len() == 3 && a[0] == "b" => Ok(LieTree::bracket(
            parse_tree(&a[1], names, &format!("{p}/1"))?,
            parse_tree(&a[2], names, &format!("{p}/2"))?,
        )),
        _ => Err(perr(p, "expected generator name or [\"b\", left, right]")),
    }
}

fn diff_entries<'a>(v: &'a Value, names: &[String]) -> Result<Vec<(usize, &'a Vec<Value>, String)>, ModelError> {
    let mut out = Vec::new();
    let Some(d) = v.get("diff") else { return Ok(out) };
    let d = d.as_object().ok_or_else(|| perr("/diff", "expected object"))?;
    for (k, terms) in d {
        let p = format!("/diff/{k}");
        let i = names
            .iter()
            .position(|n| n == k)
            .ok_or_else(|| ModelError::UnknownGenerator { name: k.clone(), pointer: p.clone() })?;
        let terms = terms.as_array().ok_or_else(|| perr(&p, "expected array of terms"))?;
        out.push((i, terms, p));
    }
    Ok(out)
}

pub fn quillen_from_json(v: &Value) -> Result<QuillenModel, ModelError> {
    let raw = parse_generators(v)?;
    let names: Vec<String> = raw.iter().map(|r| r.name.clone()).collect();
    let mut generators = Vec::new();
    for (i, r) in raw.iter().enumerate() {
        let weight = match &r.weight {
            None => None,
            Some(w) if w.len() == 1 => Some(w[0]),
            Some(_) => return Err(perr(&format!("/generators/{i}/weight"), "Quillen weights are single integers")),
        };
        generators.push(QuillenGenerator { label: r.name.clone(), degree: r.degree, weight });
    }
    let mut diff = vec![LieExpr::zero(); generators.len()];
    for (i, terms, p) in diff_entries(v, &names)? {
        for (n, t) in terms.iter().enumerate() {
            let tp = format!("{p}/{n}");
            let c = parse_coeff(t.get("coeff"), &format!("{tp}/coeff"))?;
            let term = t.get("term").ok_or_else(|| perr(&format!("{tp}/term"), "missing term"))?;
            diff[i].terms.push((c, parse_tree(term, &names, &format!("{tp}/term"))?));
        }
    }
    let valid_below = v.get("valid_below").and_then(Value::as_i64);
    let m = QuillenModel { generators, diff, valid_below };
    m.validate()?;
    Ok(m)
}

pub fn sullivan_from_json(v: &Value) -> Result<SullivanModel, ModelError> {
    let raw = parse_generators(v)?;
    let names: Vec<String> = raw.iter().map(|r| r.name.clone()).collect();
    let generators: Vec<SullivanGenerator> = raw
        .iter()
        .map(|r| SullivanGenerator { label: r.name.clone(), degree: r.degree, weight: r.weight.clone().unwrap_or_default() })
        .collect();
    let mut diff = vec![Element::new(); generators.len()];
    let alg = SullivanModel { generators: generators.clone(), diff: diff.clone() }.algebra();
    for (i, terms, p) in diff_entries(v, &names)? {
        for (n, t) in terms.iter().enumerate() {
            let tp = format!("{p}/{n}");
            let c = parse_coeff(t.get("coeff"), &format!("{tp}/coeff"))?;
            let term = t
                .get("term")
                .and_then(Value::as_object)
                .ok_or_else(|| perr(&format!("{tp}/term"), "expected monomial object"))?;
            let mut m = alg.one();
            for (g, e) in term {
                let gi = names
                    .iter()
                    .position(|x| x == g)
                    .ok_or_else(|| ModelError::UnknownGenerator { name: g.clone(), pointer: format!("{tp}/term/{g}") })?;
                let e = e.as_u64().ok_or_else(|| perr(&format!("{tp}/term/{g}"), "expected exponent"))?;
                m[gi] = e as u32;
            }
            if m.iter().zip(&generators).any(|(e, g)| g.degree % 2 != 0 && *e > 1) {
                // A squared odd generator is zero.
                continue;
            }
            add_into(&mut diff[i], m, c);
        }
    }
    let model = SullivanModel { generators, diff };
    model.validate()?;
    Ok(model)
}

pub fn model_from_json(v: &Value) -> Result<Model, ModelError> {
    match v.get("type").and_then(Value::as_str) {
        Some("quillen") => Ok(Model::Quillen(quillen_from_json(v)?)),
        Some("sullivan") => Ok(Model::Sullivan(sullivan_from_json(v)?)),
        Some(t) => Err(perr("/type", format!("unknown model type `{t}`"))),
        None => Err(perr("/type", "missing \"quillen\" or \"sullivan\"")),
    }
}

pub fn model_from_str(s: &str) -> Result<Model, ModelError> {
    let v: Value = serde_json::from_str(s).map_err(|e| perr("", e.to_string()))?;
    model_from_json(&v)
}

fn tree_json(t: &LieTree, m: &QuillenModel) -> Value {
    match t {
        LieTree::Gen(i) => Value::from(m.generators[*i].label.clone()),
        LieTree::Bracket(a, b) => json!(["b", tree_json(a, m), tree_json(b, m)]),
    }
}

pub fn quillen_to_json(m: &QuillenModel) -> Value {
    let gens: Vec<Value> = m
        .generators
        .iter()
        .map(|g| {
            let mut o = json!({"name": g.label, "degree": g.degree});
            if let Some(w) = g.weight {
                o["weight"] = json!(w);
            }
            o
        })
        .collect();
    let mut diff = Map::new();
    for (g, e) in m.generators.iter().zip(&m.diff) {
        if e.terms.is_empty() {
            continue;
        }
        let terms: Vec<Value> = e
            .terms
            .iter()
            .map(|(c, t)| json!({"coeff": format_rational(c), "term": tree_json(t, m)}))
            .collect();
        diff.insert(g.label.clone(), Value::Array(terms));
    }
    let mut out = json!({"type": "quillen", "generators": gens, "diff": diff});
    if let Some(b) = m.valid_below {
        out["valid_below"] = json!(b);
    }
    out
}

pub fn sullivan_to_json(m: &SullivanModel) -> Value {
    let gens: Vec<Value> = m
        .generators
        .iter()
        .map(|g| json!({"name": g.label, "degree": g.degree, "weight": g.weight}))
        .collect();
    let mut diff = Map::new();
    for (g, e) in m.generators.iter().zip(&m.diff) {
        if e.is_empty() {
            continue;
        }
        let terms: Vec<Value> = e
            .iter()
            .map(|(mono, c)| {
                let mut t = Map::new();
                for (x, gg) in mono.iter().zip(&m.generators) {
                    if *x > 0 {
                        t.insert(gg.label.clone(), json!(x));
                    }
                }
                json!({"coeff": format_rational(c), "term": t})
            })
            .collect();
        diff.insert(g.label.clone(), Value::Array(terms));
    }
    json!({"type": "sullivan", "generators": gens, "diff": diff})
}

pub fn model_to_json(m: &Model) -> Value {
    match m {
        Model::Quillen(q) => quillen_to_json(q),
        Model::Sullivan(s) => sullivan_to_json(s),
    }
}
