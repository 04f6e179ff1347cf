//! Hodge pieces of reduced cyclic homology of Sullivan models via Kähler
//! forms.
//!
//! For a free model `A = ℚ[g_1, …]`, `Ω(A)` is the free graded-commutative
//! algebra on `g_i` and `dg_i`, with homological degrees `−|g_i|` and
//! `1 − |g_i|`. De Rham `d` and the internal differential `∂` (induced by
//! `d_A`, with `∂(dg) = −d(∂g)`) are odd derivations. The `m`-th Hodge
//! piece is the `∂`-homology of `Ω^m / dΩ^{m−1}`, reduced by discarding
//! weight 0.
//!
//! A class of homological degree `n` corresponds to loop-space degree
//! `−n − 1` on the dual side.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::gca::{add_into, BlockBasis, BlockKey, Element, FreeGca, GcGenerator, Monomial};
use crate::linalg::{frac, q, Echelon, Rational, SparseVec};
use crate::models::SullivanModel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HodgeError {
    #[error("generator `{0}` has non-positive total weight")]
    UnboundedWeight(String),
    #[error("{0} fails on generator `{1}`")]
    Relation(&'static str, String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("monomial outside the enumerated weight range (cutoff {0})")]
    OutsideCutoff(i64),
}

/// Homology of one `(weight, form degree, degree)` block of the quotient.
#[derive(Clone, Debug)]
pub struct HodgeBlock {
    pub weight: Vec<i64>,
    pub degree: i64,
    /// Cycle representatives in `Ω^m` of a basis of the block's homology.
    pub representatives: Vec<Element>,
}

impl HodgeBlock {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

/// `Ω(A)` with both differentials and a weight-truncated block basis.
#[derive(Clone, Debug)]
pub struct FormComplex {
    pub a: SullivanModel,
    pub alg: FreeGca,
    pub weight_cutoff: i64,
    de_rham: Vec<Element>,
    boundary: Vec<Element>,
    basis: BlockBasis,
    ngen: usize,
}

fn total_weight(w: &[i64]) -> i64 {
    w.iter().sum()
}

impl FormComplex {
    /// Generators are ordered `g_1, …, g_k, dg_1, …, dg_k`. Block weights are
    /// the model weights followed by the form degree.
    pub fn new(a: &SullivanModel, weight_cutoff: i64) -> Result<Self, HodgeError> {
        let k = a.generators.len();
        let mut gens = Vec::with_capacity(2 * k);
        for g in &a.generators {
            if total_weight(&g.weight) <= 0 {
                return Err(HodgeError::UnboundedWeight(g.label.clone()));
            }
            let mut w = g.weight.clone();
            w.push(0);
            gens.push(GcGenerator { label: g.label.clone(), degree: -g.degree, weight: w, torus: vec![] });
        }
        for g in &a.generators {
            let mut w = g.weight.clone();
            w.push(1);
            gens.push(GcGenerator { label: format!("d{}", g.label), degree: 1 - g.degree, weight: w, torus: vec![] });
        }
        let alg = FreeGca::new(gens);
        let mut de_rham = vec![Element::new(); 2 * k];
        for i in 0..k {
            de_rham[i] = alg.gen_element(k + i);
        }
        // The model's differential, transported to the first k generators.
        let lift = |e: &Element| -> Element {
            e.iter()
                .map(|(m, c)| {
                    let mut mm = alg.one();
                    mm[..k].copy_from_slice(m);
                    (mm, c.clone())
                })
                .collect()
        };
        let mut boundary = vec![Element::new(); 2 * k];
        for i in 0..k {
            boundary[i] = lift(&a.diff[i]);
        }
        for i in 0..k {
            let d_of = alg.derive(&de_rham, true, &boundary[i]);
            boundary[k + i] = crate::gca::scale(&d_of, &q(-1));
        }
        let costs: Vec<i64> = alg.generators().iter().map(|g| total_weight(&g.weight[..g.weight.len() - 1])).collect();
        let basis = BlockBasis::new(&alg, alg.enumerate(&costs, weight_cutoff));
        Ok(FormComplex { a: a.clone(), alg, weight_cutoff, de_rham, boundary, basis, ngen: k })
    }

    /// Index of `g_i` (`differential = false`) or `dg_i`.
    pub fn gen(&self, label: &str, differential: bool) -> usize {
        let i = self.a.index_of(label).unwrap_or_else(|| panic!("no generator `{label}`"));
        if differential {
            self.ngen + i
        } else {
            i
        }
    }

    /// Product of generator powers taken in the given order, with signs.
    pub fn word(&self, factors: &[(&str, bool, u32)]) -> Element {
        let mut out = self.alg.unit_element();
        for &(l, dif, e) in factors {
            for _ in 0..e {
                out = self.alg.mul(&out, &self.alg.gen_element(self.gen(l, dif)));
            }
        }
        out
    }

    /// `c·z^2·dz·s` style, with `dg` factors named after their generator.
    pub fn format_element(&self, x: &Element) -> String {
        if x.is_empty() {
            return "0".into();
        }
        let name = |i: usize| {
            if i < self.ngen {
                self.a.generators[i].label.clone()
            } else {
                format!("d{}", self.a.generators[i - self.ngen].label)
            }
        };
        x.iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| if *e == 1 { name(i) } else { format!("{}^{}", name(i), e) })
                    .collect();
                let mono = if mono.is_empty() { "1".to_string() } else { mono.join("·") };
                format!("{}·{}", crate::linalg::format_rational(c), mono)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn d(&self, x: &Element) -> Element {
        self.alg.derive(&self.de_rham, true, x)
    }

    pub fn boundary(&self, x: &Element) -> Element {
        self.alg.derive(&self.boundary, true, x)
    }

    /// `d² = 0`, `∂² = 0` and `d∂ + ∂d = 0`, checked on generators.
    pub fn check_relations(&self) -> Result<(), HodgeError> {
        for i in 0..self.alg.ngens() {
            let x = self.alg.gen_element(i);
            let label = self.alg.generators()[i].label.clone();
            if !self.d(&self.d(&x)).is_empty() {
                return Err(HodgeError::Relation("d² = 0", label));
            }
            if !self.boundary(&self.boundary(&x)).is_empty() {
                return Err(HodgeError::Relation("∂² = 0", label));
            }
            let anti = crate::gca::add(&self.d(&self.boundary(&x)), &self.boundary(&self.d(&x)));
            if !anti.is_empty() {
                return Err(HodgeError::Relation("d∂ + ∂d = 0", label));
            }
        }
        Ok(())
    }

    pub fn form_degree(&self, m: &Monomial) -> u32 {
        m[self.ngen..].iter().sum()
    }

    fn key_of(&self, x: &Element) -> Result<BlockKey, HodgeError> {
        let mut keys = x.keys().map(|m| self.alg.block_key(m));
        let k = keys.next().ok_or(HodgeError::NotHomogeneous)?;
        if keys.any(|j| j != k) {
            return Err(HodgeError::NotHomogeneous);
        }
        Ok(k)
    }

    fn exact_echelon(&self, key: &BlockKey) -> Echelon {
        let m = *key.weight.last().expect("form degree present");
        let mut ech = Echelon::new(self.basis.dim(key));
        if m > 0 {
            let mut src = key.clone();
            *src.weight.last_mut().unwrap() -= 1;
            src.degree -= 1;
            for mono in self.basis.basis(&src) {
                let dm = self.alg.derive_mono(&self.de_rham, true, mono);
                let v = self.basis.coords(key, &dm).expect("d preserves weight");
                ech.insert(&v);
            }
        }
        ech.reduce_pivots();
        ech
    }

    fn check_in_range(&self, x: &Element) -> Result<(), HodgeError> {
        for m in x.keys() {
            let w: i64 = self.alg.block_key(m).weight[..self.ngen_weights()].iter().sum();
            if w > self.weight_cutoff {
                return Err(HodgeError::OutsideCutoff(self.weight_cutoff));
            }
        }
        Ok(())
    }

    fn ngen_weights(&self) -> usize {
        self.a.weight_len()
    }

    /// Whether `x − y ∈ dΩ^{m−1}` for homogeneous `x, y` in the same block.
    pub fn equivalent_mod_exact(&self, x: &Element, y: &Element) -> Result<bool, HodgeError> {
        let diff = crate::gca::add(x, &crate::gca::scale(y, &q(-1)));
        if diff.is_empty() {
            return Ok(true);
        }
        self.check_in_range(&diff)?;
        let key = self.key_of(&diff)?;
        let ech = self.exact_echelon(&key);
        Ok(ech.contains(&self.basis.coords(&key, &diff).expect("in range")))
    }

    /// Canonical representative of `x` modulo `dΩ^{m−1}`.
    pub fn normal_form(&self, x: &Element) -> Result<Element, HodgeError> {
        if x.is_empty() {
            return Ok(Element::new());
        }
        self.check_in_range(x)?;
        let key = self.key_of(x)?;
        let ech = self.exact_echelon(&key);
        let r = ech.reduce_fully(&self.basis.coords(&key, x).expect("in range"));
        Ok(self.element_from(&key, &r))
    }

    fn element_from(&self, key: &BlockKey, v: &SparseVec) -> Element {
        let b = self.basis.basis(key);
        let mut out = Element::new();
        for (i, c) in v {
            add_into(&mut out, b[*i].clone(), c.clone());
        }
        out
    }

    /// Homology of `(Ω^m / dΩ^{m−1}, ∂)` in positive weight, per block.
    pub fn hodge_cyclic(&self, m: u32) -> Vec<HodgeBlock> {
        let keys: Vec<BlockKey> = self
            .basis
            .blocks
            .keys()
            .filter(|k| *k.weight.last().unwrap() == m as i64 && k.weight[..self.ngen_weights()].iter().sum::<i64>() > 0)
            .cloned()
            .collect();
        keys.par_iter()
            .map(|k| self.block_homology(k))
            .filter(|b| b.dim() > 0)
            .collect()
    }

    /// Quotient data of a block: echelon of exact forms and the positions of
    /// non-pivot monomials, which index a basis of the quotient.
    fn quotient(&self, key: &BlockKey) -> (Echelon, Vec<usize>) {
        let ech = self.exact_echelon(key);
        let piv: std::collections::BTreeSet<usize> = ech.pivot_columns().collect();
        let free = (0..self.basis.dim(key)).filter(|i| !piv.contains(i)).collect();
        (ech, free)
    }

    /// Matrix of `∂̄` from block `key` (quotient coordinates) to one degree lower.
    fn boundary_columns(&self, key: &BlockKey, src: &[usize]) -> Vec<SparseVec> {
        let tgt = BlockKey { degree: key.degree - 1, ..key.clone() };
        let (ech, free) = self.quotient(&tgt);
        let pos: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let b = self.basis.basis(key);
        src.iter()
            .map(|&j| {
                let img = self.alg.derive_mono(&self.boundary, true, &b[j]);
                if img.is_empty() {
                    return Vec::new();
                }
                let v = self.basis.coords(&tgt, &img).expect("∂ preserves weight and form degree");
                ech.reduce_fully(&v).into_iter().map(|(c, x)| (pos[&c], x)).collect()
            })
            .collect()
    }

    fn block_homology(&self, key: &BlockKey) -> HodgeBlock {
        let (_, free) = self.quotient(key);
        let weight = key.weight[..self.ngen_weights()].to_vec();
        if free.is_empty() {
            return HodgeBlock { weight, degree: key.degree, representatives: vec![] };
        }
        // Cycles: kernel of ∂̄ on the quotient.
        let cols = self.boundary_columns(key, &free);
        let tgt = BlockKey { degree: key.degree - 1, ..key.clone() };
        let ntgt = self.quotient(&tgt).1.len();
        let mat = crate::linalg::SparseMatrix::from_columns(ntgt, &cols);
        let cycles = crate::linalg::kernel_matrix(&mat);
        // Boundaries: image of ∂̄ from one degree up.
        let up = BlockKey { degree: key.degree + 1, ..key.clone() };
        let (_, free_up) = self.quotient(&up);
        let mut image = Echelon::new(free.len());
        for c in self.boundary_columns(&up, &free_up) {
            image.insert(&c);
        }
        let mut reps = Vec::new();
        for z in cycles {
            if image.insert(&z) {
                let lifted: SparseVec = z.iter().map(|(i, c)| (free[*i], c.clone())).collect();
                reps.push(self.element_from(key, &lifted));
            }
        }
        HodgeBlock { weight, degree: key.degree, representatives: reps }
    }

    /// Dimensions of the `m`-th Hodge piece by homological degree.
    pub fn hodge_dims(&self, m: u32) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for b in self.hodge_cyclic(m) {
            *out.entry(b.degree).or_insert(0) += b.dim();
        }
        out
    }
}

/// Converts a homological degree in `Ω(A)` to the loop-space degree.
pub fn loop_degree(form_degree: i64) -> i64 {
    -form_degree - 1
}

/// Smallest weight cutoff covering all forms of loop degree `≤ max_degree`:
/// each factor `g` or `dg` adds at least `|g| − 1` to the loop degree.
pub fn weight_cutoff_for(a: &SullivanModel, max_degree: i64) -> i64 {
    let c = a
        .generators
        .iter()
        .map(|g| frac(total_weight(&g.weight), (g.degree - 1).max(1)))
        .max()
        .unwrap_or_else(|| q(0));
    (c * q(max_degree + 1)).ceil().to_integer().try_into().expect("cutoff fits")
}

/// Loop-space Hodge dimensions `dim H̄^{S¹,(m)}_n(LX)` for `n ≤ max_degree`.
pub fn loop_hodge_dims(a: &SullivanModel, m: u32, max_degree: i64) -> Result<BTreeMap<i64, usize>, HodgeError> {
    let fc = FormComplex::new(a, weight_cutoff_for(a, max_degree))?;
    Ok(fc
        .hodge_dims(m)
        .into_iter()
        .map(|(n, d)| (loop_degree(n), d))
        .filter(|(n, _)| *n <= max_degree)
        .collect())
}

/// Closed-form loop-space degree lists for the catalog spaces.
pub mod expected {
    /// `A = ℚ[z]`, `|z| = d`: `m = 0` only, degrees `dj − 1`.
    pub fn case_polynomial(d: i64, m: u32, max: i64) -> Vec<i64> {
        if m > 0 {
            return vec![];
        }
        (1..).map(|j| d * j - 1).take_while(|&n| n <= max).collect()
    }

    /// `A = ℚ[z, s]`, zero differential: `ν_j` at `(p−1)m + dj − 1` and
    /// `η_j` at `(p−1)(m+1) + d(j−1)`, `j ≥ 1`.
    pub fn case_free_two(d: i64, p: i64, m: u32, max: i64) -> Vec<i64> {
        let m = m as i64;
        let mut out: Vec<i64> = Vec::new();
        for j in 1.. {
            let nu = (p - 1) * m + d * j - 1;
            let eta = (p - 1) * (m + 1) + d * (j - 1);
            if nu > max && eta > max {
                break;
            }
            if nu <= max {
                out.push(nu);
            }
            if eta <= max {
                out.push(eta);
            }
        }
        out.sort_unstable();
        out
    }

    /// `A_r = (ℚ[z, s], ds = z^{r+1})`, `m ≥ 1`: `(d(r+1)−2)m + dj − 1`, `1 ≤ j ≤ r`.
    /// For `m = 0` the classes `z^j` give `dj − 1`.
    pub fn case_truncated(d: i64, r: i64, m: u32, max: i64) -> Vec<i64> {
        let m = m as i64;
        (1..=r).map(|j| (d * (r + 1) - 2) * m + d * j - 1).filter(|&n| n <= max).collect()
    }

    /// `A = ℚ[s]`, `|s| = p` odd: one class at `(p−1)(m+1)`.
    pub fn case_odd_sphere(p: i64, m: u32, max: i64) -> Vec<i64> {
        let n = (p - 1) * (m as i64 + 1);
        if n <= max {
            vec![n]
        } else {
            vec![]
        }
    }
}

/// Expected loop degrees for a catalog model, as a multiset.
pub fn expected_loop_degrees(space: &crate::models::Space, m: u32, max: i64) -> Vec<i64> {
    use crate::models::Space;
    if let Some((d, r)) = space.truncated_polynomial_data() {
        return expected::case_truncated(d as i64, r as i64, m, max);
    }
    if let Some(p) = space.odd_sphere_degree() {
        return expected::case_odd_sphere(p as i64, m, max);
    }
    match *space {
        Space::Kz(d) => expected::case_polynomial(d as i64, m, max),
        Space::KzTimesSphere(d, p) => expected::case_free_two(d as i64, p as i64, m, max),
        _ => unreachable!(),
    }
}

/// `∂[z^k s (ds)^m] = c · [z^{k+r} dz s (ds)^{m−1}]` in `A_r`; returns `c`
/// when the two sides are proportional modulo exact forms.
pub fn truncated_boundary_coefficient(fc: &FormComplex, r: u32, k: u32, m: u32) -> Result<Option<Rational>, HodgeError> {
    let x = fc.word(&[("z", false, k), ("s", false, 1), ("s", true, m)]);
    let y = fc.word(&[("z", false, k + r), ("z", true, 1), ("s", false, 1), ("s", true, m - 1)]);
    let bx = fc.normal_form(&fc.boundary(&x))?;
    let ny = fc.normal_form(&y)?;
    // Compare normal forms: bx = c · ny.
    let Some((mono, cy)) = ny.iter().next() else { return Ok(None) };
    let c = bx.get(mono).cloned().unwrap_or_else(|| q(0)) / cy;
    let scaled = crate::gca::scale(&ny, &c);
    Ok((scaled == bx).then_some(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Space;

    fn loop_list(sp: Space, m: u32, max: i64) -> Vec<i64> {
        let dims = loop_hodge_dims(&sp.sullivan(), m, max).unwrap();
        dims.into_iter().flat_map(|(n, d)| std::iter::repeat_n(n, d)).collect()
    }

    #[test]
    fn relations_hold_for_catalog() {
        for sp in crate::models::full_catalog() {
            let fc = FormComplex::new(&sp.sullivan(), 6).unwrap();
            fc.check_relations().unwrap();
        }
    }

    #[test]
    fn free_two_generator_basis() {
        // ℚ[z, s] zero differential: classes z^k s (ds)^m and z^k dz s (ds)^{m−1}.
        let a = Space::KzTimesSphere(2, 3).sullivan();
        let fc = FormComplex::new(&a, 5).unwrap();
        for m in 0..3u32 {
            for b in fc.hodge_cyclic(m) {
                let mut expected = Vec::new();
                for k in 0..=5u32 {
                    expected.push(fc.word(&[("z", false, k), ("s", false, 1), ("s", true, m)]));
                    if m >= 1 {
                        expected.push(fc.word(&[("z", false, k), ("z", true, 1), ("s", false, 1), ("s", true, m - 1)]));
                    } else if k > 0 {
                        expected.push(fc.word(&[("z", false, k)]));
                    }
                }
                let hits = expected
                    .iter()
                    .filter(|e| {
                        let mono = e.keys().next().unwrap();
                        let key = fc.alg.block_key(mono);
                        key.degree == b.degree && key.weight[..b.weight.len()] == b.weight[..]
                    })
                    .count();
                assert_eq!(b.dim(), hits, "m={m} weight={:?} degree={}", b.weight, b.degree);
                for rep in &b.representatives {
                    assert!(fc.boundary(rep).is_empty());
                }
            }
        }
    }

    #[test]
    fn polynomial_hodge_pieces() {
        let a = Space::Kz(2).sullivan();
        let fc = FormComplex::new(&a, 6).unwrap();
        let d0 = fc.hodge_dims(0);
        assert_eq!(d0.values().sum::<usize>(), 6);
        assert!(fc.hodge_dims(1).is_empty());
        assert!(fc.hodge_dims(2).is_empty());
    }

    #[test]
    fn truncated_boundary_formula() {
        for r in 1..=3u32 {
            let a = crate::models::truncated_polynomial_sullivan(2, r);
            let fc = FormComplex::new(&a, 20).unwrap();
            for m in 1..=2u32 {
                for k in 0..3u32 {
                    let c = truncated_boundary_coefficient(&fc, r, k, m).unwrap().expect("proportional");
                    assert_eq!(c, -q((k + (m + 1) * (r + 1)) as i64), "r={r} m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn reduction_relation() {
        // f(z)(ds)^m ≡ −f′(z) dz s (ds)^{m−1}
        let fc = FormComplex::new(&crate::models::truncated_polynomial_sullivan(2, 2), 20).unwrap();
        for k in 1..4u32 {
            for m in 1..3u32 {
                let lhs = fc.word(&[("z", false, k), ("s", true, m)]);
                let rhs = crate::gca::scale(
                    &fc.word(&[("z", false, k - 1), ("z", true, 1), ("s", false, 1), ("s", true, m - 1)]),
                    &q(-(k as i64)),
                );
                assert!(fc.equivalent_mod_exact(&lhs, &rhs).unwrap());
            }
        }
    }

    #[test]
    fn truncated_classes_are_low_powers() {
        let fc = FormComplex::new(&crate::models::truncated_polynomial_sullivan(2, 2), 12).unwrap();
        let blocks = fc.hodge_cyclic(1);
        assert_eq!(blocks.iter().map(HodgeBlock::dim).sum::<usize>(), 2);
    }

    #[test]
    fn loop_degree_lists() {
        assert_eq!(loop_list(Space::Cp(2), 1, 12), vec![5, 7]);
        assert_eq!(loop_list(Space::Kz(2), 0, 9), vec![1, 3, 5, 7, 9]);
        assert!(loop_list(Space::Kz(2), 1, 9).is_empty());
        assert_eq!(loop_list(Space::KzTimesSphere(2, 3), 1, 9), expected::case_free_two(2, 3, 1, 9));
        assert_eq!(loop_list(Space::Sphere(3), 1, 9), vec![4]);
    }
}
