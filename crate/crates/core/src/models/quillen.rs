use super::lie_expr::{LieExpr, LieTree};
use super::{ModelError, Violation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuillenGenerator {
    pub label: String,
    pub degree: i64,
    pub weight: Option<i64>,
}

/// A free graded Lie algebra `L(V)` with a differential given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuillenModel {
    pub generators: Vec<QuillenGenerator>,
    /// `diff[i] = d(v_i)`.
    pub diff: Vec<LieExpr>,
    /// Homology computed from the model is exact in degrees `< valid_below`.
    pub valid_below: Option<i64>,
}

impl QuillenModel {
    pub fn degrees(&self) -> Vec<i64> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn weight_of(&self, t: &LieTree) -> Option<i64> {
        let mut leaves = Vec::new();
        t.leaves(&mut leaves);
        leaves.iter().map(|&i| self.generators[i].weight).sum()
    }

    /// Graded Leibniz extension `d[x, y] = [dx, y] + (−1)^{|x|}[x, dy]`.
    pub fn apply_diff(&self, x: &LieExpr) -> LieExpr {
        let mut out = LieExpr::zero();
        for (c, t) in &x.terms {
            out = out.add(&self.diff_tree(t).scale(c));
        }
        out
    }

    fn diff_tree(&self, t: &LieTree) -> LieExpr {
        match t {
            LieTree::Gen(i) => self.diff[*i].clone(),
            LieTree::Bracket(a, b) => {
                let da = self.diff_tree(a);
                let db = self.diff_tree(b);
                let sa = LieExpr { terms: vec![(crate::linalg::q(1), (**a).clone())] };
                let sb = LieExpr { terms: vec![(crate::linalg::q(1), (**b).clone())] };
                let sign = if a.degree(&self.degrees()) % 2 == 0 { 1 } else { -1 };
                da.bracket(&sb).add(&sa.bracket(&db).scale(&crate::linalg::q(sign)))
            }
        }
    }

    /// Multiplies every generator's differential by `c` (for `c ≠ 0` the
    /// result is isomorphic as a DG Lie algebra when `d` is quadratic).
    pub fn scaled(&self, c: &crate::linalg::Rational) -> Self {
        QuillenModel { diff: self.diff.iter().map(|e| e.scale(c)).collect(), ..self.clone() }
    }

    /// Checks degrees, weights and `d² = 0` on every generator.
    pub fn validate(&self) -> Result<(), ModelError> {
        let degrees = self.degrees();
        let mut violations = Vec::new();
        if self.diff.len() != self.generators.len() {
            return Err(ModelError::Invalid(vec![Violation::new("model", "diff/generator count mismatch")]));
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.degree < 1 {
                violations.push(Violation::new(&g.label, "Quillen generators need degree ≥ 1"));
            }
            let dv = &self.diff[i];
            for (_, t) in &dv.terms {
                if t.degree(&degrees) != g.degree - 1 {
                    violations.push(Violation::new(&g.label, &format!("summand of d has degree {}", t.degree(&degrees))));
                }
                if g.weight.is_some() && self.weight_of(t) != g.weight {
                    violations.push(Violation::new(&g.label, "differential does not preserve weight"));
                }
            }
            let dd = self.apply_diff(dv).tensor_normal_form(&degrees);
            if !dd.is_empty() {
                let residue = format_tensor(&dd, self);
                violations.push(Violation { generator: g.label.clone(), message: "d² ≠ 0".into(), residue: Some(residue) });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(violations))
        }
    }

    pub fn format_expr(&self, x: &LieExpr) -> String {
        if x.terms.is_empty() {
            return "0".into();
        }
        x.terms
            .iter()
            .map(|(c, t)| format!("{}·{}", crate::linalg::format_rational(c), self.format_tree(t)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn format_tree(&self, t: &LieTree) -> String {
        match t {
            LieTree::Gen(i) => self.generators[*i].label.clone(),
            LieTree::Bracket(a, b) => format!("[{},{}]", self.format_tree(a), self.format_tree(b)),
        }
    }
}

fn format_tensor(t: &super::lie_expr::TensorElement, m: &QuillenModel) -> String {
    t.iter()
        .map(|(w, c)| {
            let word: Vec<&str> = w.iter().map(|&i| m.generators[i].label.as_str()).collect();
            format!("{}·{}", crate::linalg::format_rational(c), word.join("⊗"))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}
