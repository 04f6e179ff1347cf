use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::Value;

use super::LieError;
use crate::linalg::{parse_rational, q, solve_in_span, Rational, SparseMatrix, SparseVec};

/// How generators of the invariant ring are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantSpec {
    /// `tr(ρ(x)^{m_i+1})` in the defining representation.
    PowerTraces,
    /// Coordinate functionals (abelian algebras).
    Coordinates,
    /// Greedy selection from the kernel of the invariance equations.
    Generic,
}

/// A finite-dimensional Lie algebra over ℚ given by structure constants.
#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    pub name: String,
    pub dim: usize,
    pub basis_labels: Vec<String>,
    /// `brackets[i][j]` holds the coordinates of `[ξ_i, ξ_j]`.
    brackets: Vec<Vec<SparseVec>>,
    pub exponents: Vec<u32>,
    pub rank: usize,
    pub defining_rep: Option<Vec<Vec<Vec<Rational>>>>,
    pub root_system_id: Option<String>,
    pub reductive: bool,
    pub invariant_spec: InvariantSpec,
}

type Mat = Vec<Vec<Rational>>;

fn mat_zero(n: usize) -> Mat {
    vec![vec![Rational::zero(); n]; n]
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = mat_zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    c[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    c
}

fn mat_comm(a: &Mat, b: &Mat) -> Mat {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

fn flatten(m: &Mat) -> SparseVec {
    m.iter()
        .flatten()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

pub(crate) fn mat_trace(m: &Mat) -> Rational {
    (0..m.len()).fold(Rational::zero(), |s, i| s + &m[i][i])
}

pub(crate) fn mat_product(a: &Mat, b: &Mat) -> Mat {
    mat_mul(a, b)
}

fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = mat_zero(n);
    m[i][j] = q(1);
    m
}

fn add_m(a: &Mat, b: &Mat, sb: i64) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y * q(sb)).collect())
        .collect()
}

/// Block matrix `[[a, b], [c, d]]` of 2×2 blocks into a 4×4 matrix.
fn block4(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
    let mut m = mat_zero(4);
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][j].clone();
            m[i][j + 2] = b[i][j].clone();
            m[i + 2][j] = c[i][j].clone();
            m[i + 2][j + 2] = d[i][j].clone();
        }
    }
    m
}

impl LieAlgebraData {
    /// Builds an algebra from a basis of matrices closed under commutators.
    pub fn from_matrix_basis(name: &str, labels: Vec<String>, basis: Vec<Mat>) -> Result<Self, LieError> {
        let n = basis.len();
        let size = basis.first().map_or(0, |m| m.len());
        let flat: Vec<SparseVec> = basis.iter().map(flatten).collect();
        let mut brackets = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let c = mat_comm(&basis[i], &basis[j]);
                let coords = solve_in_span(size * size, &flat, &flatten(&c))
                    .ok_or_else(|| LieError::Invalid(format!("{name}: basis not closed under brackets")))?;
                brackets[i][j] =
                    coords.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
            }
        }
        Ok(LieAlgebraData {
            name: name.to_string(),
            dim: n,
            basis_labels: labels,
            brackets,
            exponents: Vec::new(),
            rank: 0,
            defining_rep: Some(basis),
            root_system_id: None,
            reductive: true,
            invariant_spec: InvariantSpec::PowerTraces,
        })
    }

    /// Builds an algebra from a full bracket table.
    pub fn from_brackets(
        name: &str,
        labels: Vec<String>,
        brackets: Vec<Vec<SparseVec>>,
        exponents: Vec<u32>,
    ) -> Self {
        let dim = labels.len();
        LieAlgebraData {
            name: name.to_string(),
            dim,
            basis_labels: labels,
            brackets,
            rank: exponents.len(),
            exponents,
            defining_rep: None,
            root_system_id: None,
            reductive: true,
            invariant_spec: InvariantSpec::Generic,
        }
    }

    pub fn bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.brackets[i][j]
    }

    /// Coefficient of `ξ_k` in `[ξ_i, ξ_j]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.brackets[i][j]
            .iter()
            .find(|(c, _)| *c == k)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Bracket of two vectors in basis coordinates.
    pub fn bracket_vec(&self, x: &[(usize, Rational)], y: &[(usize, Rational)]) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                for (k, c) in &self.brackets[*i][*j] {
                    *acc.entry(*k).or_insert_with(Rational::zero) += a * b * c;
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().flatten().all(Vec::is_empty)
    }

    pub fn check_antisymmetry(&self) -> Result<(), LieError> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let neg: SparseVec = self.brackets[j][i].iter().map(|(k, v)| (*k, -v.clone())).collect();
                if self.brackets[i][j] != neg {
                    return Err(LieError::Invalid(format!("antisymmetry fails for ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn check_jacobi(&self) -> Result<(), LieError> {
        let e = |i: usize| vec![(i, q(1))];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let a = self.bracket_vec(&self.bracket_vec(&e(i), &e(j)), &e(k));
                    let b = self.bracket_vec(&self.bracket_vec(&e(j), &e(k)), &e(i));
                    let c = self.bracket_vec(&self.bracket_vec(&e(k), &e(i)), &e(j));
                    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                    for (x, v) in a.into_iter().chain(b).chain(c) {
                        *acc.entry(x).or_insert_with(Rational::zero) += v;
                    }
                    if acc.values().any(|v| !v.is_zero()) {
                        return Err(LieError::Invalid(format!("Jacobi fails for ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that the defining representation respects brackets.
    pub fn check_defining_rep(&self) -> Result<(), LieError> {
        let Some(rep) = &self.defining_rep else { return Ok(()) };
        if rep.len() != self.dim {
            return Err(LieError::Invalid("defining_rep has wrong number of matrices".into()));
        }
        let n = rep.first().map_or(0, Vec::len);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = mat_comm(&rep[i], &rep[j]);
                let mut rhs = mat_zero(n);
                for (k, c) in &self.brackets[i][j] {
                    for r in 0..n {
                        for s in 0..n {
                            rhs[r][s] += c * &rep[*k][r][s];
                        }
                    }
                }
                if lhs != rhs {
                    return Err(LieError::Invalid(format!("defining_rep is not a homomorphism at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), LieError> {
        if self.basis_labels.len() != self.dim || self.brackets.len() != self.dim {
            return Err(LieError::Invalid("dimension mismatch".into()));
        }
        if self.brackets.iter().any(|r| r.len() != self.dim) {
            return Err(LieError::Invalid("bracket table is not square".into()));
        }
        self.check_antisymmetry()?;
        self.check_jacobi()?;
        self.check_defining_rep()?;
        if self.rank != self.exponents.len() {
            return Err(LieError::Invalid("rank differs from number of exponents".into()));
        }
        Ok(())
    }

    /// `δ(ξ^k) = Σ_{i<j} c^k_{ij} ξ^i ∧ ξ^j`, as `((i, j), c)` with `i < j`.
    pub fn cobracket(&self, k: usize) -> Result<Vec<((usize, usize), Rational)>, LieError> {
        if k >= self.dim {
            return Err(LieError::IndexOutOfRange { index: k, dim: self.dim });
        }
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let c = self.structure_constant(i, j, k);
                if !c.is_zero() {
                    out.push(((i, j), c));
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad ξ_a` on `g` (columns are images of basis vectors).
    pub fn ad_matrix(&self, a: usize) -> SparseMatrix {
        let cols: Vec<SparseVec> = (0..self.dim).map(|j| self.brackets[a][j].clone()).collect();
        SparseMatrix::from_columns(self.dim, &cols)
    }

    /// Basis elements whose adjoint action is diagonal in the stored basis,
    /// with their eigenvalues `[ξ_a, ξ_j] = λ_j ξ_j`.
    pub fn diagonal_elements(&self) -> Vec<(usize, Vec<Rational>)> {
        (0..self.dim)
            .filter_map(|a| {
                let mut eig = Vec::with_capacity(self.dim);
                for j in 0..self.dim {
                    match self.brackets[a][j].as_slice() {
                        [] => eig.push(Rational::zero()),
                        [(k, v)] if *k == j => eig.push(v.clone()),
                        _ => return None,
                    }
                }
                Some((a, eig))
            })
            .collect()
    }

    /// Parses the JSON document
    /// `{"name"?, "dim", "basis", "brackets": [{"i","j","coords"}], "exponents", "defining_rep"?}`.
    /// Brackets not listed are zero; `[ξ_j, ξ_i]` is filled in by antisymmetry.
    pub fn from_json(v: &Value) -> Result<Self, LieError> {
        let err = |p: &str, m: &str| LieError::Parse { pointer: p.to_string(), message: m.to_string() };
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| err("/dim", "expected integer"))? as usize;
        let basis: Vec<String> = v
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| err("/basis", "expected array"))?
            .iter()
            .enumerate()
            .map(|(i, x)| x.as_str().map(str::to_string).ok_or_else(|| err(&format!("/basis/{i}"), "expected string")))
            .collect::<Result<_, _>>()?;
        if basis.len() != dim {
            return Err(err("/basis", "length differs from dim"));
        }
        let mut brackets = vec![vec![Vec::new(); dim]; dim];
        if let Some(list) = v.get("brackets") {
            let list = list.as_array().ok_or_else(|| err("/brackets", "expected array"))?;
            for (n, b) in list.iter().enumerate() {
                let p = format!("/brackets/{n}");
                let i = b.get("i").and_then(Value::as_u64).ok_or_else(|| err(&format!("{p}/i"), "expected integer"))? as usize;
                let j = b.get("j").and_then(Value::as_u64).ok_or_else(|| err(&format!("{p}/j"), "expected integer"))? as usize;
                if i >= dim || j >= dim {
                    return Err(err(&p, "index out of range"));
                }
                let coords = b
                    .get("coords")
                    .and_then(Value::as_array)
                    .ok_or_else(|| err(&format!("{p}/coords"), "expected array"))?;
                if coords.len() != dim {
                    return Err(err(&format!("{p}/coords"), "length differs from dim"));
                }
                let mut vec: SparseVec = Vec::new();
                for (k, c) in coords.iter().enumerate() {
                    let r = json_rational(c).ok_or_else(|| err(&format!("{p}/coords/{k}"), "expected rational"))?;
                    if !r.is_zero() {
                        vec.push((k, r));
                    }
                }
                brackets[j][i] = vec.iter().map(|(k, x)| (*k, -x.clone())).collect();
                brackets[i][j] = vec;
            }
        }
        let exponents: Vec<u32> = v
            .get("exponents")
            .and_then(Value::as_array)
            .ok_or_else(|| err("/exponents", "expected array"))?
            .iter()
            .enumerate()
            .map(|(i, x)| x.as_u64().map(|e| e as u32).ok_or_else(|| err(&format!("/exponents/{i}"), "expected integer")))
            .collect::<Result<_, _>>()?;
        let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
        let mut g = LieAlgebraData::from_brackets(name, basis, brackets, exponents);
        if let Some(rep) = v.get("defining_rep") {
            let mats = rep.as_array().ok_or_else(|| err("/defining_rep", "expected array"))?;
            let mut out = Vec::new();
            for (a, m) in mats.iter().enumerate() {
                let rows = m.as_array().ok_or_else(|| err(&format!("/defining_rep/{a}"), "expected matrix"))?;
                let mut mm = Vec::new();
                for (r, row) in rows.iter().enumerate() {
                    let row = row.as_array().ok_or_else(|| err(&format!("/defining_rep/{a}/{r}"), "expected row"))?;
                    let vals: Option<Vec<Rational>> = row.iter().map(json_rational).collect();
                    mm.push(vals.ok_or_else(|| err(&format!("/defining_rep/{a}/{r}"), "expected rationals"))?);
                }
                out.push(mm);
            }
            g.defining_rep = Some(out);
            g.invariant_spec = InvariantSpec::PowerTraces;
        }
        if g.is_abelian() {
            g.invariant_spec = InvariantSpec::Coordinates;
        }
        g.validate()?;
        Ok(g)
    }

    pub fn to_json(&self) -> Value {
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                if self.brackets[i][j].is_empty() {
                    continue;
                }
                let mut dense = vec![Value::from("0"); self.dim];
                for (k, v) in &self.brackets[i][j] {
                    dense[*k] = Value::from(crate::linalg::format_rational(v));
                }
                brackets.push(serde_json::json!({"i": i, "j": j, "coords": dense}));
            }
        }
        let mut out = serde_json::json!({
            "name": self.name,
            "dim": self.dim,
            "basis": self.basis_labels,
            "brackets": brackets,
            "exponents": self.exponents,
        });
        if let Some(rep) = &self.defining_rep {
            let mats: Vec<Vec<Vec<String>>> = rep
                .iter()
                .map(|m| m.iter().map(|r| r.iter().map(crate::linalg::format_rational).collect()).collect())
                .collect();
            out["defining_rep"] = serde_json::json!(mats);
        }
        out
    }
}

fn json_rational(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().map(q),
        _ => None,
    }
}

/// `sl_n` with basis `E_ij (i<j)`, `H_i = E_ii − E_{i+1,i+1}`, `E_ij (i>j)`.
fn sl_n(n: usize) -> Result<LieAlgebraData, LieError> {
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            labels.push(format!("E{}{}", i + 1, j + 1));
            basis.push(unit(n, i, j));
        }
    }
    for i in 0..n - 1 {
        labels.push(format!("H{}", i + 1));
        basis.push(add_m(&unit(n, i, i), &unit(n, i + 1, i + 1), -1));
    }
    for i in 0..n {
        for j in 0..i {
            labels.push(format!("E{}{}", i + 1, j + 1));
            basis.push(unit(n, i, j));
        }
    }
    if n == 2 {
        labels = vec!["e".into(), "h".into(), "f".into()];
    }
    let mut g = LieAlgebraData::from_matrix_basis(&format!("sl{n}"), labels, basis)?;
    g.exponents = (1..n as u32).collect();
    g.rank = n - 1;
    g.root_system_id = Some(format!("A{}", n - 1));
    Ok(g)
}

fn gl2() -> Result<LieAlgebraData, LieError> {
    let labels = vec!["E12".into(), "E11".into(), "E22".into(), "E21".into()];
    let basis = vec![unit(2, 0, 1), unit(2, 0, 0), unit(2, 1, 1), unit(2, 1, 0)];
    let mut g = LieAlgebraData::from_matrix_basis("gl2", labels, basis)?;
    g.exponents = vec![0, 1];
    g.rank = 2;
    Ok(g)
}

fn torus(n: usize) -> Result<LieAlgebraData, LieError> {
    if n == 0 {
        return Err(LieError::UnknownAlgebra("torus(0)".into()));
    }
    let labels = (1..=n).map(|i| format!("x{i}")).collect();
    let basis = (0..n).map(|i| unit(n, i, i)).collect();
    let mut g = LieAlgebraData::from_matrix_basis(&format!("torus({n})"), labels, basis)?;
    g.exponents = vec![0; n];
    g.rank = n;
    g.invariant_spec = InvariantSpec::Coordinates;
    Ok(g)
}

/// Matrices `[[A, B], [C, −Aᵀ]]` with `B, C` symmetric (`sp4`) or
/// antisymmetric (`so4`, for the split form `[[0, I], [I, 0]]`).
fn classical4(symmetric: bool) -> Result<LieAlgebraData, LieError> {
    let z = mat_zero(2);
    let neg_t = |a: &Mat| -> Mat { (0..2).map(|i| (0..2).map(|j| -a[j][i].clone()).collect()).collect() };
    let off: Vec<(String, Mat)> = if symmetric {
        vec![
            ("11".into(), unit(2, 0, 0)),
            ("22".into(), unit(2, 1, 1)),
            ("12".into(), add_m(&unit(2, 0, 1), &unit(2, 1, 0), 1)),
        ]
    } else {
        vec![("12".into(), add_m(&unit(2, 0, 1), &unit(2, 1, 0), -1))]
    };
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for (l, b) in &off {
        labels.push(format!("B{l}"));
        basis.push(block4(&z, b, &z, &z));
    }
    for i in 0..2 {
        for j in 0..2 {
            let a = unit(2, i, j);
            labels.push(format!("A{}{}", i + 1, j + 1));
            basis.push(block4(&a, &z, &z, &neg_t(&a)));
        }
    }
    for (l, c) in &off {
        labels.push(format!("C{l}"));
        basis.push(block4(&z, &z, c, &z));
    }
    let name = if symmetric { "sp4" } else { "so4" };
    let mut g = LieAlgebraData::from_matrix_basis(name, labels, basis)?;
    if symmetric {
        g.exponents = vec![1, 3];
        g.root_system_id = Some("B2".into());
    } else {
        g.exponents = vec![1, 1];
        g.invariant_spec = InvariantSpec::Generic;
    }
    g.rank = 2;
    Ok(g)
}

/// Built-in algebras: `sl2`, `sl3`, `sl4`, `so4`, `sp4`, `gl2`, `torus(n)`.
pub fn builtin(name: &str) -> Result<LieAlgebraData, LieError> {
    let name = name.trim();
    let g = match name {
        "sl2" => sl_n(2),
        "sl3" => sl_n(3),
        "sl4" => sl_n(4),
        "so4" => classical4(false),
        "sp4" => classical4(true),
        "gl2" => gl2(),
        _ => {
            let n = name
                .strip_prefix("torus(")
                .and_then(|s| s.strip_suffix(')'))
                .or_else(|| name.strip_prefix("torus:"))
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| LieError::UnknownAlgebra(name.to_string()))?;
            torus(n)
        }
    }?;
    g.validate()?;
    Ok(g)
}

pub const BUILTIN_NAMES: &[&str] = &["sl2", "sl3", "sl4", "so4", "sp4", "gl2", "torus(n)"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_chevalley_relations() {
        let g = builtin("sl2").unwrap();
        assert_eq!(g.dim, 3);
        assert_eq!(g.basis_labels, vec!["e", "h", "f"]);
        assert_eq!(g.bracket(1, 0), &vec![(0, q(2))]);
        assert_eq!(g.bracket(1, 2), &vec![(2, q(-2))]);
        assert_eq!(g.bracket(0, 2), &vec![(1, q(1))]);
        assert_eq!(g.exponents, vec![1]);
    }

    #[test]
    fn torus_is_abelian() {
        let g = builtin("torus(2)").unwrap();
        assert_eq!(g.dim, 2);
        assert!(g.is_abelian());
        assert_eq!(g.exponents, vec![0, 0]);
    }

    #[test]
    fn sl3_dims_and_exponents() {
        let g = builtin("sl3").unwrap();
        assert_eq!(g.dim, 8);
        assert_eq!(g.exponents, vec![1, 2]);
    }

    #[test]
    fn builtins_satisfy_kostant_and_jacobi() {
        for name in ["sl2", "sl3", "sl4", "so4", "sp4", "gl2", "torus(1)", "torus(3)"] {
            let g = builtin(name).unwrap();
            let s: u32 = g.exponents.iter().map(|m| 2 * m + 1).sum();
            assert_eq!(s as usize, g.dim, "{name}");
            assert_eq!(g.rank, g.exponents.len());
        }
        assert_eq!(builtin("sp4").unwrap().dim, 10);
        assert_eq!(builtin("so4").unwrap().dim, 6);
    }

    #[test]
    fn cobracket_examples() {
        let g = builtin("sl2").unwrap();
        // h* ↦ e*∧f*
        assert_eq!(g.cobracket(1).unwrap(), vec![((0, 2), q(1))]);
        // e* ↦ −2 e*∧h*
        assert_eq!(g.cobracket(0).unwrap(), vec![((0, 1), q(-2))]);
        let t = builtin("torus(1)").unwrap();
        assert!(t.cobracket(0).unwrap().is_empty());
        assert!(g.cobracket(3).is_err());
    }

    #[test]
    fn cobracket_is_co_jacobi() {
        // Dual statement: Σ_cyc c^m_{ij} c^k_{ml} = 0 for every k.
        for name in ["sl2", "sl3", "sp4"] {
            let g = builtin(name).unwrap();
            let n = g.dim;
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        for l in 0..n {
                            let mut s = Rational::zero();
                            for m in 0..n {
                                s += g.structure_constant(i, j, m) * g.structure_constant(m, l, k);
                                s += g.structure_constant(j, l, m) * g.structure_constant(m, i, k);
                                s += g.structure_constant(l, i, m) * g.structure_constant(m, j, k);
                            }
                            assert!(s.is_zero(), "{name}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_elements_of_sl2() {
        let g = builtin("sl2").unwrap();
        let d = g.diagonal_elements();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].0, 1);
        assert_eq!(d[0].1, vec![q(2), q(0), q(-2)]);
    }

    #[test]
    fn json_round_trip() {
        let g = builtin("sl3").unwrap();
        let h = LieAlgebraData::from_json(&g.to_json()).unwrap();
        assert_eq!(h.dim, 8);
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(g.bracket(i, j), h.bracket(i, j));
            }
        }
    }

    #[test]
    fn unknown_name_is_rejected() {
        assert!(matches!(builtin("e8"), Err(LieError::UnknownAlgebra(_))));
    }
}
