//! Command-line jobs. Each job yields a JSON report and a verdict; input
//! problems are errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::acceptance::{run_suite, Fixture};
use crate::ce::{required_weight, CeComplex};
use crate::drinfeld::{drinfeld_freeness_check, trace_generator_checks};
use crate::hodge::{loop_degree, weight_cutoff_for, FormComplex};
use crate::lie::{builtin, invariant_generators, LieAlgebraData, BUILTIN_NAMES};
use crate::macdonald::{verify_q_identity, verify_qt_identity, RootSystem, NORMALIZATION_NOTE, ROOT_SYSTEMS};
use crate::models::{full_catalog, model_from_str, model_to_json, Model, QuillenModel, Space, SullivanModel};
use crate::rep::RepComplex;
use crate::report::{dims_json, envelope, rational_json, render, series_json, Format};
use crate::series::PoincareSeries;

#[derive(Debug, Parser)]
#[command(name = "rephom", version, about = "Exact representation homology of simply connected spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: FormatArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Target {
    /// Catalog space (`cp:2`, `sphere(3)`, …) or a model file.
    #[arg(long)]
    pub space: Option<String>,
    /// Model file (Quillen or Sullivan JSON).
    #[arg(long, conflicts_with = "space")]
    pub model: Option<PathBuf>,
    /// Built-in Lie algebra or an algebra file.
    #[arg(long, default_value = "sl2")]
    pub group: String,
    #[arg(long, default_value_t = 12)]
    pub max_degree: i64,
    /// Weight cutoff for Sullivan-side computations; defaults to the required bound.
    #[arg(long)]
    pub weight_cutoff: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology of the representation complex (or the CE complex for Sullivan-only input).
    Compute(Target),
    /// Invariant part `HR^G` and the degrees of the invariant polynomials.
    Invariants(Target),
    /// Compare the representation route with the Chevalley–Eilenberg route.
    CeCheck {
        #[command(flatten)]
        target: Target,
        /// Sullivan model file paired with a Quillen `--model`.
        #[arg(long)]
        sullivan: Option<PathBuf>,
    },
    /// Hodge pieces of cyclic homology, reported in loop-space degrees.
    Hodge {
        #[command(flatten)]
        target: Target,
        /// Only this Hodge index.
        #[arg(long)]
        form_degree: Option<u32>,
    },
    /// Trace images of invariant polynomials in each Hodge degree.
    Trace(Target),
    /// Freeness of `HR^G` against the Hodge prediction.
    DrinfeldCheck(Target),
    /// Constant-term identities.
    Macdonald {
        #[arg(long = "type")]
        type_rank: String,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Check the two-parameter identity instead.
        #[arg(long)]
        qt: bool,
        #[arg(long, default_value_t = 5)]
        nq: usize,
        #[arg(long, default_value_t = 5)]
        nt: usize,
    },
    /// Free graded-commutative series on `--degrees`, or the Betti series of `--space`.
    Series {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        degrees: Vec<i64>,
        #[arg(long)]
        space: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_degree: i64,
    },
    /// Spaces and Lie algebras known to the tool.
    Catalog,
    /// Validate a model file or a Lie algebra file.
    Validate {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        group: Option<String>,
    },
    /// Run the acceptance criteria.
    Acceptance {
        /// Criterion ids or names; repeatable or comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

/// Input problems: exit status 2.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

fn input<E: ToString>(e: E) -> InputError {
    InputError(e.to_string())
}

pub struct JobResult {
    pub report: Value,
    pub passed: bool,
}

impl JobResult {
    fn ok(report: Value) -> Self {
        JobResult { report, passed: true }
    }
}

/// A catalog space or a named model.
#[derive(Clone, Debug)]
pub enum Input {
    Space(Space),
    File(String, Model),
}

impl Input {
    pub fn name(&self) -> String {
        match self {
            Input::Space(s) => s.to_string(),
            Input::File(p, _) => p.clone(),
        }
    }

    pub fn quillen(&self, max_degree: i64) -> Option<QuillenModel> {
        match self {
            Input::Space(s) => s.quillen(max_degree),
            Input::File(_, Model::Quillen(m)) => Some(m.clone()),
            Input::File(..) => None,
        }
    }

    pub fn sullivan(&self) -> Option<SullivanModel> {
        match self {
            Input::Space(s) => Some(s.sullivan()),
            Input::File(_, Model::Sullivan(m)) => Some(m.clone()),
            Input::File(..) => None,
        }
    }
}

pub fn read_model(path: &Path) -> Result<Model, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let m = model_from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    m.validate().map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(m)
}

fn resolve_input(t: &Target) -> Result<Input, InputError> {
    if let Some(p) = &t.model {
        return Ok(Input::File(p.display().to_string(), read_model(p)?));
    }
    let s = t.space.as_deref().ok_or_else(|| InputError("one of --space or --model is required".into()))?;
    match s.parse::<Space>() {
        Ok(sp) => Ok(Input::Space(sp)),
        Err(e) if Path::new(s).is_file() => {
            let _ = e;
            Ok(Input::File(s.to_string(), read_model(Path::new(s))?))
        }
        Err(e) => Err(input(e)),
    }
}

pub fn resolve_group(s: &str) -> Result<LieAlgebraData, InputError> {
    if Path::new(s).is_file() {
        let text = std::fs::read_to_string(s).map_err(|e| InputError(format!("{s}: {e}")))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| InputError(format!("{s}: {e}")))?;
        let g = LieAlgebraData::from_json(&v).map_err(|e| InputError(format!("{s}: {e}")))?;
        g.validate().map_err(|e| InputError(format!("{s}: {e}")))?;
        return Ok(g);
    }
    builtin(s).map_err(input)
}

fn check_degree(max_degree: i64) -> Result<(), InputError> {
    if max_degree < 1 {
        return Err(InputError(format!("--max-degree must be at least 1, got {max_degree}")));
    }
    Ok(())
}

fn ce_complex(g: &LieAlgebraData, a: &SullivanModel, t: &Target) -> Result<CeComplex, InputError> {
    let required = required_weight(a, t.max_degree).map_err(input)?;
    let w = match t.weight_cutoff {
        Some(w) if w < required => {
            return Err(InputError(format!(
                "weight cutoff {w} is insufficient for degree {}: need at least {required}",
                t.max_degree
            )))
        }
        Some(w) => w,
        None => required,
    };
    CeComplex::build(g, a, w, t.max_degree).map_err(input)
}

fn head(t: &Target, inp: &Input, g: &LieAlgebraData) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("space".into(), json!(inp.name()));
    m.insert("group".into(), json!(g.name));
    m.insert("max_degree".into(), json!(t.max_degree));
    m
}

fn compute(t: &Target, invariants_only: bool) -> Result<JobResult, InputError> {
    check_degree(t.max_degree)?;
    let inp = resolve_input(t)?;
    let g = resolve_group(&t.group)?;
    compute_with(&inp, &g, t.max_degree, t.weight_cutoff, invariants_only)
}

/// The `compute` and `invariants` jobs on resolved inputs.
pub fn compute_with(
    inp: &Input,
    g: &LieAlgebraData,
    max_degree: i64,
    weight_cutoff: Option<i64>,
    invariants_only: bool,
) -> Result<JobResult, InputError> {
    check_degree(max_degree)?;
    let t = &Target { space: None, model: None, group: g.name.clone(), max_degree, weight_cutoff };
    let n = t.max_degree;
    let mut body = head(t, inp, g);
    let (full, inv) = if let Some(model) = inp.quillen(n) {
        if t.weight_cutoff.is_some() {
            return Err(InputError("--weight-cutoff applies to Sullivan-side input only".into()));
        }
        let rc = RepComplex::build(&model, g, n).map_err(input)?;
        body.insert("route".into(), json!("representation complex"));
        body.insert("generators".into(), json!(rc.complex.alg.ngens()));
        body.insert("chain_dims".into(), dims_json(&rc.chain_dims(n)));
        let full = if invariants_only { None } else { Some(rc.homology_dims(n).map_err(input)?) };
        let inv = if g.reductive { Some(rc.invariant_homology_dims(n).map_err(input)?) } else { None };
        (full, inv)
    } else {
        let a = inp.sullivan().expect("model is Quillen or Sullivan");
        let ce = ce_complex(g, &a, t)?;
        body.insert("route".into(), json!("Chevalley–Eilenberg"));
        body.insert("weight_cutoff".into(), json!(ce.weight_cutoff));
        let full = if invariants_only { None } else { Some(ce.homology_dims(n).map_err(input)?) };
        let inv = if g.reductive { Some(ce.relative_homology_dims(n).map_err(input)?) } else { None };
        (full, inv)
    };
    if let Some(d) = &full {
        body.insert("homology_dims".into(), dims_json(d));
        body.insert("series".into(), series_json(&PoincareSeries::from_dims(d, n as u32)));
    }
    match &inv {
        Some(d) => {
            body.insert("invariant_homology_dims".into(), dims_json(d));
            body.insert("invariant_series".into(), series_json(&PoincareSeries::from_dims(d, n as u32)));
        }
        None if invariants_only => return Err(InputError(format!("`{}` is not reductive", g.name))),
        None => {}
    }
    let command = if invariants_only {
        let polys = invariant_generators(g).map_err(input)?;
        body.insert("invariant_polynomial_degrees".into(), json!(polys.iter().map(|p| p.degree).collect::<Vec<_>>()));
        "invariants"
    } else {
        "compute"
    };
    Ok(JobResult::ok(envelope(command, body)))
}

fn ce_check(t: &Target, sullivan: Option<&PathBuf>) -> Result<JobResult, InputError> {
    check_degree(t.max_degree)?;
    let inp = resolve_input(t)?;
    let g = resolve_group(&t.group)?;
    let n = t.max_degree;
    let model = inp.quillen(n).ok_or_else(|| InputError(format!("{} has no Quillen model", inp.name())))?;
    let a = match sullivan {
        Some(p) => match read_model(p)? {
            Model::Sullivan(a) => a,
            Model::Quillen(_) => return Err(InputError(format!("{}: expected a Sullivan model", p.display()))),
        },
        None => inp.sullivan().ok_or_else(|| InputError("--sullivan is required with a Quillen model file".into()))?,
    };
    let rc = RepComplex::build(&model, &g, n).map_err(input)?;
    let ce = ce_complex(&g, &a, t)?;
    let mut body = head(t, &inp, &g);
    let rep_full = rc.homology_series(n).map_err(input)?;
    let ce_full = ce.series(n, false).map_err(input)?;
    let mut passed = rep_full.agrees_with(&ce_full);
    let mut routes = Map::new();
    routes.insert("full".into(), compare_json(&rep_full, &ce_full));
    if g.reductive {
        let a = rc.invariant_homology_series(n).map_err(input)?;
        let b = ce.series(n, true).map_err(input)?;
        passed &= a.agrees_with(&b);
        routes.insert("invariant".into(), compare_json(&a, &b));
    }
    body.insert("weight_cutoff".into(), json!(ce.weight_cutoff));
    body.insert("comparison".into(), Value::Object(routes));
    body.insert("verdict".into(), verdict(passed));
    Ok(JobResult { report: envelope("ce-check", body), passed })
}

fn compare_json(rep: &PoincareSeries, ce: &PoincareSeries) -> Value {
    let mismatch = rep.first_difference(ce).map(|(e, x, y)| json!({"degree": e[0], "rep": rational_json(&x), "ce": rational_json(&y)}));
    json!({"rep": series_json(rep), "ce": series_json(ce), "first_mismatch": mismatch})
}

fn verdict(passed: bool) -> Value {
    json!(if passed { "PASS" } else { "FAIL" })
}

fn hodge(t: &Target, only: Option<u32>) -> Result<JobResult, InputError> {
    check_degree(t.max_degree)?;
    let inp = resolve_input(t)?;
    let a = inp.sullivan().ok_or_else(|| InputError("hodge needs a Sullivan model".into()))?;
    let required = weight_cutoff_for(&a, t.max_degree);
    let w = match t.weight_cutoff {
        Some(w) if w < required => {
            return Err(InputError(format!(
                "weight cutoff {w} is insufficient for loop degree {}: need at least {required}",
                t.max_degree
            )))
        }
        Some(w) => w,
        None => required,
    };
    let fc = FormComplex::new(&a, w).map_err(input)?;
    fc.check_relations().map_err(input)?;
    let ms: Vec<u32> = match only {
        Some(m) => vec![m],
        None => (0..=t.max_degree.max(0) as u32).collect(),
    };
    let mut pieces = Map::new();
    for m in ms {
        let mut loops = BTreeMap::new();
        let mut blocks = Vec::new();
        for b in fc.hodge_cyclic(m) {
            let n = loop_degree(b.degree);
            if n > t.max_degree {
                continue;
            }
            *loops.entry(n).or_insert(0) += b.dim();
            let reps: Vec<String> = b.representatives.iter().map(|r| fc.format_element(r)).collect();
            blocks.push(json!({"weight": b.weight, "degree": b.degree, "loop_degree": n, "dim": b.dim(), "representatives": reps}));
        }
        if only.is_none() && loops.is_empty() {
            continue;
        }
        pieces.insert(m.to_string(), json!({"loop_dims": dims_json(&loops), "blocks": blocks}));
    }
    let mut body = Map::new();
    body.insert("space".into(), json!(inp.name()));
    body.insert("max_degree".into(), json!(t.max_degree));
    body.insert("weight_cutoff".into(), json!(w));
    body.insert("pieces".into(), Value::Object(pieces));
    Ok(JobResult::ok(envelope("hodge", body)))
}

fn catalog_space(t: &Target) -> Result<Space, InputError> {
    match resolve_input(t)? {
        Input::Space(s) => Ok(s),
        Input::File(p, _) => Err(InputError(format!("{p}: this command needs a catalog space"))),
    }
}

fn trace(t: &Target) -> Result<JobResult, InputError> {
    check_degree(t.max_degree)?;
    let sp = catalog_space(t)?;
    let g = resolve_group(&t.group)?;
    let model = sp.quillen(t.max_degree).ok_or_else(|| InputError(format!("{sp} has no Quillen model")))?;
    let rc = RepComplex::build(&model, &g, t.max_degree).map_err(input)?;
    let checks = trace_generator_checks(&rc, &sp.sullivan(), &g, t.max_degree).map_err(input)?;
    let passed = checks.iter().all(|c| c.passed());
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({"polynomial_degree": c.polynomial_degree, "degree": c.degree, "expected_classes": c.expected_classes,
                   "found_classes": c.found_classes, "words": c.words, "verdict": verdict(c.passed())})
        })
        .collect();
    let mut body = Map::new();
    body.insert("space".into(), json!(sp.to_string()));
    body.insert("group".into(), json!(g.name));
    body.insert("max_degree".into(), json!(t.max_degree));
    body.insert("checks".into(), json!(rows));
    body.insert("verdict".into(), verdict(passed));
    Ok(JobResult { report: envelope("trace", body), passed })
}

fn drinfeld(t: &Target) -> Result<JobResult, InputError> {
    check_degree(t.max_degree)?;
    let sp = catalog_space(t)?;
    let g = resolve_group(&t.group)?;
    let r = drinfeld_freeness_check(&sp, &g, t.max_degree).map_err(input)?;
    let mut body = Map::new();
    body.insert("space".into(), json!(r.space));
    body.insert("group".into(), json!(r.group));
    body.insert("max_degree".into(), json!(r.max_degree));
    body.insert("route".into(), json!(r.route));
    body.insert("generator_degrees".into(), json!(r.generators));
    body.insert("free_series".into(), series_json(&r.free_series));
    body.insert("invariant_series".into(), series_json(&r.invariant_series));
    body.insert(
        "first_mismatch".into(),
        json!(r.first_mismatch.as_ref().map(|(n, x, y)| json!({"degree": n, "free": rational_json(x), "invariant": rational_json(y)}))),
    );
    let checks: Vec<Value> = r
        .trace_checks
        .iter()
        .map(|c| json!({"polynomial_degree": c.polynomial_degree, "degree": c.degree, "expected_classes": c.expected_classes, "found_classes": c.found_classes}))
        .collect();
    body.insert("trace_checks".into(), json!(checks));
    body.insert("verdict".into(), verdict(r.passed()));
    Ok(JobResult { report: envelope("drinfeld-check", body), passed: r.passed() })
}

fn macdonald(type_rank: &str, r: usize, qt: bool, nq: usize, nt: usize) -> Result<JobResult, InputError> {
    let rs = RootSystem::new(type_rank).map_err(input)?;
    let mut body = Map::new();
    body.insert("type".into(), json!(rs.type_rank));
    body.insert("weyl_order".into(), json!(rs.weyl_order));
    body.insert("exponents".into(), json!(rs.exponents));
    let passed = if qt {
        let rep = verify_qt_identity(&rs, nq, nt).map_err(input)?;
        body.insert("nq".into(), json!(nq));
        body.insert("nt".into(), json!(nt));
        body.insert("product_side".into(), series_json(&rep.lhs));
        body.insert("constant_term_side".into(), series_json(&rep.rhs));
        body.insert(
            "first_mismatch".into(),
            json!(rep.first_mismatch.as_ref().map(|(a, b, x, y)| json!({"q": a, "t": b, "product": rational_json(x), "constant_term": rational_json(y)}))),
        );
        rep.passed()
    } else {
        if r == 0 {
            return Err(InputError("--r must be at least 1".into()));
        }
        let rep = verify_q_identity(&rs, r);
        body.insert("r".into(), json!(r));
        body.insert("chi_ct_q".into(), series_json(&rep.lhs));
        body.insert("chi_product_q".into(), series_json(&rep.rhs));
        body.insert("constant_term".into(), series_json(&rep.ct));
        body.insert("normalization".into(), json!(NORMALIZATION_NOTE));
        rep.passed()
    };
    body.insert("verdict".into(), verdict(passed));
    Ok(JobResult { report: envelope("macdonald", body), passed })
}

fn series(degrees: &[i64], space: Option<&str>, max_degree: i64) -> Result<JobResult, InputError> {
    check_degree(max_degree)?;
    let mut body = Map::new();
    body.insert("max_degree".into(), json!(max_degree));
    match (degrees.is_empty(), space) {
        (false, None) => {
            if let Some(d) = degrees.iter().find(|&&d| d <= 0) {
                return Err(InputError(format!("generator degrees must be positive, got {d}")));
            }
            body.insert("degrees".into(), json!(degrees));
            body.insert("series".into(), series_json(&PoincareSeries::free_graded_commutative(degrees, max_degree as u32)));
        }
        (true, Some(s)) => {
            let sp: Space = s.parse().map_err(input)?;
            let mut betti = sp.reduced_betti(max_degree);
            betti.insert(0, 1);
            body.insert("space".into(), json!(sp.to_string()));
            body.insert("betti".into(), dims_json(&betti));
            body.insert("series".into(), series_json(&PoincareSeries::from_dims(&betti, max_degree as u32)));
        }
        _ => return Err(InputError("give exactly one of --degrees or --space".into())),
    }
    Ok(JobResult::ok(envelope("series", body)))
}

fn catalog() -> JobResult {
    let spaces: Vec<Value> = full_catalog()
        .into_iter()
        .map(|sp| {
            let mut betti = sp.reduced_betti(16);
            betti.insert(0, 1);
            let q = sp.quillen(16);
            json!({
                "name": sp.to_string(),
                "betti_to_16": dims_json(&betti),
                "quillen": q.as_ref().map(|m| model_to_json(&Model::Quillen(m.clone()))),
                "sullivan": model_to_json(&Model::Sullivan(sp.sullivan())),
            })
        })
        .collect();
    let mut body = Map::new();
    body.insert("spaces".into(), json!(spaces));
    body.insert("groups".into(), json!(BUILTIN_NAMES));
    body.insert("root_systems".into(), json!(ROOT_SYSTEMS));
    JobResult::ok(envelope("catalog", body))
}

fn validate(model: Option<&PathBuf>, group: Option<&str>) -> Result<JobResult, InputError> {
    if model.is_none() && group.is_none() {
        return Err(InputError("give --model and/or --group".into()));
    }
    let mut body = Map::new();
    if let Some(p) = model {
        let m = read_model(p)?;
        let kind = match &m {
            Model::Quillen(_) => "quillen",
            Model::Sullivan(_) => "sullivan",
        };
        body.insert("model".into(), json!({"path": p.display().to_string(), "type": kind, "parsed": model_to_json(&m)}));
    }
    if let Some(s) = group {
        let g = resolve_group(s)?;
        body.insert("group".into(), json!({"name": g.name, "dim": g.dim, "reductive": g.reductive, "exponents": g.exponents}));
    }
    body.insert("verdict".into(), json!("valid"));
    Ok(JobResult::ok(envelope("validate", body)))
}

fn acceptance(only: &[String]) -> JobResult {
    let rows = run_suite(only, &Fixture::default());
    let passed = rows.iter().all(|r| r.passed);
    let table: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({"id": r.id, "name": r.name, "verdict": verdict(r.passed), "computed": r.computed,
                   "expected": r.expected, "runtime_s": r.runtime.as_secs_f64(),
                   "budget_s": r.budget.map(|b| b.as_secs())})
        })
        .collect();
    let mut body = Map::new();
    body.insert("rows".into(), json!(table));
    body.insert("verdict".into(), verdict(passed));
    JobResult { report: envelope("acceptance", body), passed }
}

pub fn run(cmd: &Command) -> Result<JobResult, InputError> {
    match cmd {
        Command::Compute(t) => compute(t, false),
        Command::Invariants(t) => compute(t, true),
        Command::CeCheck { target, sullivan } => ce_check(target, sullivan.as_ref()),
        Command::Hodge { target, form_degree } => hodge(target, *form_degree),
        Command::Trace(t) => trace(t),
        Command::DrinfeldCheck(t) => drinfeld(t),
        Command::Macdonald { type_rank, r, qt, nq, nt } => macdonald(type_rank, *r, *qt, *nq, *nt),
        Command::Series { degrees, space, max_degree } => series(degrees, space.as_deref(), *max_degree),
        Command::Catalog => Ok(catalog()),
        Command::Validate { model, group } => validate(model.as_ref(), group.as_deref()),
        Command::Acceptance { only } => Ok(acceptance(only)),
    }
}

/// Runs a parsed command line and returns the exit status.
pub fn main_with(cli: Cli) -> i32 {
    let result = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let text = match (&cli.command, cli.format) {
        (Command::Acceptance { .. }, FormatArg::Text) => acceptance_text(&result.report),
        _ => render(&result.report, cli.format.into()),
    };
    match &cli.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("error: {}: {e}", p.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    if result.passed {
        0
    } else {
        1
    }
}

fn acceptance_text(v: &Value) -> String {
    let mut out = String::new();
    for r in v["rows"].as_array().into_iter().flatten() {
        out.push_str(&format!(
            "{} {:>2} {:<14} {:>8.3}s  computed: {}  expected: {}\n",
            r["verdict"].as_str().unwrap_or("?"),
            r["id"].as_u64().unwrap_or(0),
            r["name"].as_str().unwrap_or(""),
            r["runtime_s"].as_f64().unwrap_or(0.0),
            r["computed"].as_str().unwrap_or(""),
            r["expected"].as_str().unwrap_or("")
        ));
    }
    out
}

/// Caps the global rayon pool at `REPHOM_THREADS` when set.
pub fn configure_threads() -> Result<(), InputError> {
    if let Ok(s) = std::env::var("REPHOM_THREADS") {
        let n: usize = s.trim().parse().map_err(|_| InputError(format!("REPHOM_THREADS must be a positive integer, got `{s}`")))?;
        if n == 0 {
            return Err(InputError("REPHOM_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(input)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("rephom").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn compute_cp2() {
        let cli = parse(&["compute", "--space", "cp:2", "--group", "sl2", "--max-degree", "12"]);
        let r = run(&cli.command).unwrap();
        assert_eq!(r.report["invariant_series"]["text"], "1 + z^5 + z^7 + z^12");
        assert_eq!(r.report["schema"], "rephom/1");
    }

    #[test]
    fn macdonald_a1() {
        let cli = parse(&["macdonald", "--type", "A1", "--r", "1"]);
        let r = run(&cli.command).unwrap();
        assert!(r.passed);
        assert_eq!(r.report["chi_ct_q"]["text"], "1 - q^3");
        assert_eq!(r.report["chi_product_q"]["text"], "1 - q^3");
    }

    #[test]
    fn insufficient_cutoff_reports_bound() {
        let cli = parse(&["hodge", "--space", "cp:2", "--max-degree", "12", "--weight-cutoff", "1"]);
        let e = run(&cli.command).err().unwrap();
        assert!(e.0.contains("need at least"), "{e}");
        let cli = parse(&["compute", "--space", "kzxs:2,3", "--max-degree", "6", "--weight-cutoff", "1"]);
        assert!(run(&cli.command).err().unwrap().0.contains("need at least"));
    }

    #[test]
    fn unknown_inputs() {
        assert!(run(&parse(&["compute", "--space", "klein"]).command).is_err());
        assert!(run(&parse(&["compute", "--space", "cp:2", "--group", "e8"]).command).is_err());
        assert!(run(&parse(&["compute", "--space", "cp:2", "--max-degree", "0"]).command).is_err());
    }

    #[test]
    fn sullivan_only_space_uses_ce() {
        let r = run(&parse(&["compute", "--space", "kzxs:2,3", "--max-degree", "5"]).command).unwrap();
        assert_eq!(r.report["route"], "Chevalley–Eilenberg");
    }
}
