use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::algebra::{mat_product, mat_trace, InvariantSpec, LieAlgebraData};
use super::LieError;
use crate::linalg::{q, Echelon, Rational, SparseVec};

/// A polynomial on `g`, an element of `Sym(g*)`, keyed by sorted index multisets.
pub type SymPoly = BTreeMap<Vec<usize>, Rational>;

/// A fully symmetric multilinear form on `g`.
///
/// `tensor[(i₁ ≤ … ≤ i_d)] = T(ξ_{i₁}, …, ξ_{i_d})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantPolynomial {
    pub degree: usize,
    pub tensor: BTreeMap<Vec<usize>, Rational>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Number of distinct orderings of a sorted multiset.
fn multinomial(ms: &[usize]) -> BigInt {
    let mut out = factorial(ms.len());
    let mut i = 0;
    while i < ms.len() {
        let j = (i..ms.len()).find(|&j| ms[j] != ms[i]).unwrap_or(ms.len());
        out /= factorial(j - i);
        i = j;
    }
    out
}

/// All sorted multisets of size `d` from `0..n`.
pub fn multisets(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, d, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, 0, &mut Vec::new(), &mut out);
    out
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

impl InvariantPolynomial {
    pub fn from_polynomial(degree: usize, p: &SymPoly) -> Self {
        let tensor = p
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(ms, v)| (ms.clone(), v / Rational::from_integer(multinomial(ms))))
            .collect();
        InvariantPolynomial { degree, tensor }
    }

    pub fn to_polynomial(&self) -> SymPoly {
        self.tensor
            .iter()
            .map(|(ms, v)| (ms.clone(), v * Rational::from_integer(multinomial(ms))))
            .collect()
    }

    /// `T(ξ_{i₁}, …, ξ_{i_d})` for an arbitrary index tuple.
    pub fn entry(&self, idx: &[usize]) -> Rational {
        let mut s = idx.to_vec();
        s.sort_unstable();
        self.tensor.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    /// Multilinear evaluation on vectors in basis coordinates.
    pub fn eval(&self, args: &[SparseVec]) -> Rational {
        assert_eq!(args.len(), self.degree, "arity mismatch");
        fn rec(p: &InvariantPolynomial, args: &[SparseVec], k: usize, idx: &mut Vec<usize>, c: Rational) -> Rational {
            if k == args.len() {
                return c * p.entry(idx);
            }
            let mut s = Rational::zero();
            for (i, v) in &args[k] {
                idx.push(*i);
                s += rec(p, args, k + 1, idx, &c * v);
                idx.pop();
            }
            s
        }
        rec(self, args, 0, &mut Vec::new(), q(1))
    }

    /// `P(x) = T(x, …, x)`.
    pub fn eval_diagonal(&self, x: &SparseVec) -> Rational {
        self.eval(&vec![x.clone(); self.degree])
    }

    /// `Σ_k T(x₁, …, [y, x_k], …, x_d) = 0` for all basis `y` and tuples.
    pub fn check_ad_invariance(&self, g: &LieAlgebraData) -> bool {
        for y in 0..g.dim {
            for ms in multisets(g.dim, self.degree) {
                let mut s = Rational::zero();
                for k in 0..self.degree {
                    let mut args: Vec<SparseVec> = ms.iter().map(|&i| vec![(i, q(1))]).collect();
                    args[k] = g.bracket(y, ms[k]).clone();
                    s += self.eval(&args);
                }
                if !s.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// `T(x₁, …, x_k) = (1/k!) Σ_σ tr(ρ(x_{σ1}) ⋯ ρ(x_{σk}))` in the defining representation.
pub fn power_trace_invariant(g: &LieAlgebraData, k: usize) -> Result<InvariantPolynomial, LieError> {
    let rep = g.defining_rep.as_ref().ok_or(LieError::MissingDefiningRep)?;
    let kf = Rational::from_integer(factorial(k));
    let mut tensor = BTreeMap::new();
    for ms in multisets(g.dim, k) {
        let mut s = Rational::zero();
        for p in permutations(&ms) {
            let mut m = rep[p[0]].clone();
            for &i in &p[1..] {
                m = mat_product(&m, &rep[i]);
            }
            s += mat_trace(&m);
        }
        // `permutations` lists repeated orderings; the sum over S_k is exactly that.
        let v = s / &kf;
        if !v.is_zero() {
            tensor.insert(ms, v);
        }
    }
    Ok(InvariantPolynomial { degree: k, tensor })
}

/// The coordinate functional `ξ_i*` as a degree-1 form.
pub fn coordinate_invariant(i: usize) -> InvariantPolynomial {
    InvariantPolynomial { degree: 1, tensor: [(vec![i], q(1))].into_iter().collect() }
}

fn poly_mul(a: &SymPoly, b: &SymPoly) -> SymPoly {
    let mut out = SymPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m: Vec<usize> = ma.iter().chain(mb).copied().collect();
            m.sort_unstable();
            *out.entry(m).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Basis of degree-`d` invariants in `Sym(g*)`, as polynomials.
pub fn invariant_space(g: &LieAlgebraData, d: usize) -> Vec<SymPoly> {
    let monos = multisets(g.dim, d);
    let index: BTreeMap<&Vec<usize>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<SparseVec> = Vec::new();
    for y in 0..g.dim {
        // (y·ξ_j*) = −Σ_k c^j_{y k} ξ_k*, extended as a derivation of Sym(g*).
        let mut out: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
        for (col, ms) in monos.iter().enumerate() {
            for pos in 0..d {
                let j = ms[pos];
                for k in 0..g.dim {
                    let c = g.structure_constant(y, k, j);
                    if c.is_zero() {
                        continue;
                    }
                    let mut m = ms.clone();
                    m[pos] = k;
                    m.sort_unstable();
                    let r = index[&m];
                    *out.entry(r).or_default().entry(col).or_insert_with(Rational::zero) -= c;
                }
            }
        }
        for (_, row) in out {
            let r: SparseVec = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if !r.is_empty() {
                rows.push(r);
            }
        }
    }
    Echelon::from_rows(monos.len(), rows.iter())
        .kernel()
        .into_iter()
        .map(|v| v.into_iter().map(|(i, c)| (monos[i].clone(), c)).collect())
        .collect()
}

fn to_coords(p: &SymPoly, index: &BTreeMap<Vec<usize>, usize>) -> SparseVec {
    let mut v: SparseVec = p.iter().map(|(m, c)| (index[m], c.clone())).collect();
    v.sort_by_key(|(i, _)| *i);
    v
}

/// Picks generators of degrees `m_i + 1` greedily: at each degree, kernel
/// vectors not in the span of products of previously chosen generators.
fn generic_generators(g: &LieAlgebraData) -> Result<Vec<InvariantPolynomial>, LieError> {
    let mut degrees: Vec<usize> = g.exponents.iter().map(|&m| m as usize + 1).collect();
    degrees.sort_unstable();
    let mut chosen: Vec<(usize, SymPoly)> = Vec::new();
    let mut i = 0;
    while i < degrees.len() {
        let d = degrees[i];
        let need = degrees.iter().filter(|&&x| x == d).count();
        let monos = multisets(g.dim, d);
        let index: BTreeMap<Vec<usize>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ech = Echelon::new(monos.len());
        for p in decomposables(&chosen, d) {
            ech.insert(&to_coords(&p, &index));
        }
        let mut found = 0;
        for p in invariant_space(g, d) {
            if found == need {
                break;
            }
            if ech.insert(&to_coords(&p, &index)) {
                chosen.push((d, p));
                found += 1;
            }
        }
        if found < need {
            return Err(LieError::Invalid(format!("{}: found {found} of {need} invariant generators in degree {d}", g.name)));
        }
        i += need;
    }
    Ok(chosen.iter().map(|(d, p)| InvariantPolynomial::from_polynomial(*d, p)).collect())
}

/// Products of chosen generators with total degree exactly `d`.
fn decomposables(chosen: &[(usize, SymPoly)], d: usize) -> Vec<SymPoly> {
    fn rec(chosen: &[(usize, SymPoly)], start: usize, left: usize, acc: &SymPoly, out: &mut Vec<SymPoly>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for k in start..chosen.len() {
            let (dk, p) = &chosen[k];
            if *dk <= left {
                rec(chosen, k, left - dk, &poly_mul(acc, p), out);
            }
        }
    }
    let mut out = Vec::new();
    let one: SymPoly = [(Vec::new(), q(1))].into_iter().collect();
    rec(chosen, 0, d, &one, &mut out);
    out
}

/// Generators `P_1, …, P_l` of the invariant ring, `deg P_i = m_i + 1`, in
/// the order of `g.exponents`.
pub fn invariant_generators(g: &LieAlgebraData) -> Result<Vec<InvariantPolynomial>, LieError> {
    match g.invariant_spec {
        InvariantSpec::Coordinates => Ok((0..g.dim).map(coordinate_invariant).collect()),
        InvariantSpec::PowerTraces => {
            g.exponents.iter().map(|&m| power_trace_invariant(g, m as usize + 1)).collect()
        }
        InvariantSpec::Generic => generic_generators(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::builtin;

    #[test]
    fn sl2_trace_form() {
        let g = builtin("sl2").unwrap();
        let b = power_trace_invariant(&g, 2).unwrap();
        assert_eq!(b.entry(&[0, 2]), q(1));
        assert_eq!(b.entry(&[2, 0]), q(1));
        assert_eq!(b.entry(&[1, 1]), q(2));
        assert_eq!(b.entry(&[0, 0]), q(0));
        assert_eq!(b.entry(&[0, 1]), q(0));
        assert_eq!(b.entry(&[1, 2]), q(0));
        // a·e + b·h + c·f ↦ 2b² + 2ac
        let (a, bb, c) = (q(3), q(5), q(7));
        let x = vec![(0, a.clone()), (1, bb.clone()), (2, c.clone())];
        assert_eq!(b.eval_diagonal(&x), q(2) * &bb * &bb + q(2) * &a * &c);
    }

    #[test]
    fn torus_degree_one_is_coordinate() {
        let g = builtin("torus(1)").unwrap();
        let p = power_trace_invariant(&g, 1).unwrap();
        assert_eq!(p, coordinate_invariant(0));
        let p3 = power_trace_invariant(&g, 3).unwrap();
        assert_eq!(p3.eval_diagonal(&vec![(0, q(2))]), q(8));
    }

    #[test]
    fn generators_are_invariant_with_right_degrees() {
        for name in ["sl2", "sl3", "sp4", "so4", "gl2", "torus(2)"] {
            let g = builtin(name).unwrap();
            let gens = invariant_generators(&g).unwrap();
            let mut got: Vec<usize> = gens.iter().map(|p| p.degree).collect();
            let mut want: Vec<usize> = g.exponents.iter().map(|m| *m as usize + 1).collect();
            got.sort_unstable();
            want.sort_unstable();
            assert_eq!(got, want, "{name}");
            for p in &gens {
                assert!(p.check_ad_invariance(&g), "{name} degree {}", p.degree);
            }
        }
    }

    #[test]
    fn sl3_has_one_cubic_invariant() {
        let g = builtin("sl3").unwrap();
        assert_eq!(invariant_space(&g, 2).len(), 1);
        assert_eq!(invariant_space(&g, 3).len(), 1);
    }

    #[test]
    fn polarization_restricts_to_power_trace() {
        let g = builtin("sl3").unwrap();
        let p = power_trace_invariant(&g, 3).unwrap();
        let x: SparseVec = (0..8).map(|i| (i, q(i as i64 - 3))).filter(|(_, v)| !v.is_zero()).collect();
        let rep = g.defining_rep.as_ref().unwrap();
        let mut m = vec![vec![Rational::zero(); 3]; 3];
        for (i, c) in &x {
            for r in 0..3 {
                for s in 0..3 {
                    m[r][s] += c * &rep[*i][r][s];
                }
            }
        }
        let m3 = mat_product(&mat_product(&m, &m), &m);
        assert_eq!(p.eval_diagonal(&x), mat_trace(&m3));
    }
}
