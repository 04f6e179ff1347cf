use crate::gca::{Element, FreeGca, GcGenerator, Monomial};

use super::{ModelError, Violation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SullivanGenerator {
    pub label: String,
    /// Cohomological degree.
    pub degree: i64,
    pub weight: Vec<i64>,
}

/// A free graded-commutative cochain algebra with differential of degree +1.
#[derive(Clone, Debug)]
pub struct SullivanModel {
    pub generators: Vec<SullivanGenerator>,
    /// `diff[i] = d(x_i)` in the algebra [`SullivanModel::algebra`].
    pub diff: Vec<Element>,
}

impl PartialEq for SullivanModel {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.diff == other.diff
    }
}

impl SullivanModel {
    /// Underlying algebra, graded by cohomological degree.
    pub fn algebra(&self) -> FreeGca {
        FreeGca::new(
            self.generators
                .iter()
                .map(|g| GcGenerator { label: g.label.clone(), degree: g.degree, weight: g.weight.clone(), torus: vec![] })
                .collect(),
        )
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn weight_len(&self) -> usize {
        self.generators.first().map_or(0, |g| g.weight.len())
    }

    pub fn monomial_weight(&self, m: &Monomial) -> Vec<i64> {
        let mut w = vec![0; self.weight_len()];
        for (e, g) in m.iter().zip(&self.generators) {
            for (a, b) in w.iter_mut().zip(&g.weight) {
                *a += *e as i64 * b;
            }
        }
        w
    }

    pub fn d(&self, x: &Element) -> Element {
        self.algebra().derive(&self.diff, true, x)
    }

    /// Whether every generator has zero differential.
    pub fn is_formal_free(&self) -> bool {
        self.diff.iter().all(|e| e.is_empty())
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let alg = self.algebra();
        let mut violations = Vec::new();
        if self.diff.len() != self.generators.len() {
            return Err(ModelError::Invalid(vec![Violation::new("model", "diff/generator count mismatch")]));
        }
        let nw = self.weight_len();
        for (i, g) in self.generators.iter().enumerate() {
            if g.degree < 1 {
                violations.push(Violation::new(&g.label, "Sullivan generators need degree ≥ 1"));
            }
            if g.weight.len() != nw {
                violations.push(Violation::new(&g.label, "weight tuples of different lengths"));
                continue;
            }
            for m in self.diff[i].keys() {
                if alg.degree(m) != g.degree + 1 {
                    violations.push(Violation::new(&g.label, "differential does not raise degree by one"));
                }
                if self.monomial_weight(m) != g.weight {
                    violations.push(Violation::new(&g.label, "differential does not preserve weight"));
                }
            }
            let dd = alg.derive(&self.diff, true, &self.diff[i]);
            if !dd.is_empty() {
                violations.push(Violation {
                    generator: g.label.clone(),
                    message: "d² ≠ 0".into(),
                    residue: Some(self.format_element(&dd)),
                });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(violations))
        }
    }

    pub fn format_element(&self, x: &Element) -> String {
        if x.is_empty() {
            return "0".into();
        }
        x.iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .zip(&self.generators)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, g)| if *e == 1 { g.label.clone() } else { format!("{}^{}", g.label, e) })
                    .collect();
                let mono = if mono.is_empty() { "1".to_string() } else { mono.join("·") };
                format!("{}·{}", crate::linalg::format_rational(c), mono)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
