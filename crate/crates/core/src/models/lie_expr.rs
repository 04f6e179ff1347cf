//! Bracket expressions in a free graded Lie algebra and their tensor
//! normal form.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::linalg::{q, Rational};

/// A bracket tree over generator indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LieTree {
    Gen(usize),
    Bracket(Box<LieTree>, Box<LieTree>),
}

impl LieTree {
    pub fn bracket(a: LieTree, b: LieTree) -> LieTree {
        LieTree::Bracket(Box::new(a), Box::new(b))
    }

    pub fn degree(&self, degrees: &[i64]) -> i64 {
        match self {
            LieTree::Gen(i) => degrees[*i],
            LieTree::Bracket(a, b) => a.degree(degrees) + b.degree(degrees),
        }
    }

    pub fn leaves(&self, out: &mut Vec<usize>) {
        match self {
            LieTree::Gen(i) => out.push(*i),
            LieTree::Bracket(a, b) => {
                a.leaves(out);
                b.leaves(out);
            }
        }
    }
}

/// A ℚ-linear combination of bracket trees.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LieExpr {
    pub terms: Vec<(Rational, LieTree)>,
}

/// An element of the free associative algebra: words over generator indices.
pub type TensorElement = BTreeMap<Vec<usize>, Rational>;

impl LieExpr {
    pub fn zero() -> Self {
        LieExpr { terms: Vec::new() }
    }

    pub fn gen(i: usize) -> Self {
        LieExpr { terms: vec![(q(1), LieTree::Gen(i))] }
    }

    pub fn is_trivially_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LieExpr { terms: self.terms.iter().map(|(a, t)| (a * c, t.clone())).filter(|(a, _)| !a.is_zero()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        LieExpr { terms }
    }

    /// Bilinear extension of the bracket.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                terms.push((a * b, LieTree::bracket(x.clone(), y.clone())));
            }
        }
        LieExpr { terms }
    }

    /// Common degree of all summands, `None` for the empty expression or a
    /// non-homogeneous one.
    pub fn degree(&self, degrees: &[i64]) -> Option<i64> {
        let mut it = self.terms.iter().map(|(_, t)| t.degree(degrees));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Expands brackets via `[x, y] = xy − (−1)^{|x||y|} yx`.
    pub fn tensor_normal_form(&self, degrees: &[i64]) -> TensorElement {
        let mut out = TensorElement::new();
        for (c, t) in &self.terms {
            for (w, v) in tree_tensor(t, degrees) {
                let slot = out.entry(w).or_insert_with(Rational::zero);
                *slot += c * v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Equality in the free Lie algebra, decided by the normal form.
    pub fn equals(&self, other: &Self, degrees: &[i64]) -> bool {
        self.add(&other.scale(&q(-1))).tensor_normal_form(degrees).is_empty()
    }
}

fn tree_tensor(t: &LieTree, degrees: &[i64]) -> TensorElement {
    match t {
        LieTree::Gen(i) => [(vec![*i], q(1))].into_iter().collect(),
        LieTree::Bracket(a, b) => {
            let x = tree_tensor(a, degrees);
            let y = tree_tensor(b, degrees);
            let sign = if (a.degree(degrees) * b.degree(degrees)) % 2 == 0 { q(-1) } else { q(1) };
            let mut out = TensorElement::new();
            for (wx, cx) in &x {
                for (wy, cy) in &y {
                    let mut xy = wx.clone();
                    xy.extend(wy);
                    *out.entry(xy).or_insert_with(Rational::zero) += cx * cy;
                    let mut yx = wy.clone();
                    yx.extend(wx);
                    *out.entry(yx).or_insert_with(Rational::zero) += cx * cy * &sign;
                }
            }
            out.retain(|_, v| !v.is_zero());
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_self_bracket_doubles() {
        let deg = [1];
        let x = LieExpr::gen(0).bracket(&LieExpr::gen(0));
        let nf = x.tensor_normal_form(&deg);
        assert_eq!(nf, [(vec![0, 0], q(2))].into_iter().collect());
    }

    #[test]
    fn even_self_bracket_vanishes() {
        let x = LieExpr::gen(0).bracket(&LieExpr::gen(0));
        assert!(x.tensor_normal_form(&[2]).is_empty());
    }

    #[test]
    fn graded_jacobi_kills_triple_odd_bracket() {
        let v = LieExpr::gen(0);
        let x = v.bracket(&v.bracket(&v));
        assert!(x.tensor_normal_form(&[1]).is_empty());
    }

    #[test]
    fn graded_antisymmetry() {
        let deg = [1, 2];
        let a = LieExpr::gen(0).bracket(&LieExpr::gen(1));
        let b = LieExpr::gen(1).bracket(&LieExpr::gen(0));
        // [x, y] = −(−1)^{|x||y|}[y, x] = −[y, x] here.
        assert!(a.equals(&b.scale(&q(-1)), &deg));
    }
}
