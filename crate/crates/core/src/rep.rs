//! The representation complex `Λ(g* ⊗ V)` of a Quillen model and its homology.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::gca::{add_into, Action, BlockBasis, BlockKey, DgComplex, Element, FreeGca, GcGenerator, GcaError};
use crate::lie::{coadjoint_image, LieAlgebraData};
use crate::linalg::{Echelon, SparseVec};
use crate::models::{LieExpr, LieTree, QuillenModel};
use crate::series::PoincareSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error(transparent)]
    Gca(#[from] GcaError),
    #[error("degree cap {cap} exceeds the model's validity bound (exact below {bound})")]
    BeyondValidity { cap: i64, bound: i64 },
    #[error("invariants need a reductive Lie algebra; `{0}` is not flagged reductive")]
    NotReductive(String),
    #[error("degree cap must be at least 1")]
    BadCap,
}

/// `Σ_k x_k ⊗ ξ_k` with `x_k` in the representation algebra.
pub type CurrentElement = Vec<Element>;

/// The representation complex together with its enumerated block basis.
#[derive(Clone, Debug)]
pub struct RepComplex {
    pub model: QuillenModel,
    pub g: LieAlgebraData,
    pub degree_cap: i64,
    pub complex: DgComplex,
    pub basis: BlockBasis,
    /// `gen_index[v][i]` is the algebra generator `(ξ_i*, v)`.
    gen_index: Vec<Vec<usize>>,
}

fn generator_order(model: &QuillenModel, g: &LieAlgebraData) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> =
        (0..model.generators.len()).flat_map(|v| (0..g.dim).map(move |i| (v, i))).collect();
    pairs.sort_by(|a, b| {
        let ka = (model.generators[a.0].degree, a.1, &model.generators[a.0].label);
        let kb = (model.generators[b.0].degree, b.1, &model.generators[b.0].label);
        ka.cmp(&kb)
    });
    pairs
}

impl RepComplex {
    /// Builds `Λ(g* ⊗ V)` with `∂(ξ_k* v) = ⟨ξ_k*, ρ(dv)⟩` and checks `∂² = 0`.
    pub fn build(model: &QuillenModel, g: &LieAlgebraData, degree_cap: i64) -> Result<Self, RepError> {
        if degree_cap < 1 {
            return Err(RepError::BadCap);
        }
        if let Some(b) = model.valid_below {
            if degree_cap >= b {
                return Err(RepError::BeyondValidity { cap: degree_cap, bound: b });
            }
        }
        let diag = g.diagonal_elements();
        let order = generator_order(model, g);
        let mut gen_index = vec![vec![0; g.dim]; model.generators.len()];
        let weighted = model.generators.iter().all(|q| q.weight.is_some());
        let gens: Vec<GcGenerator> = order
            .iter()
            .enumerate()
            .map(|(n, &(v, i))| {
                gen_index[v][i] = n;
                let qg = &model.generators[v];
                GcGenerator {
                    label: format!("{}*{}", g.basis_labels[i], qg.label),
                    degree: qg.degree,
                    weight: if weighted { vec![qg.weight.unwrap()] } else { vec![] },
                    // ξ_a · ξ_i* = −λ_i ξ_i* for ad-diagonal ξ_a.
                    torus: diag.iter().map(|(_, eig)| -eig[i].clone()).collect(),
                }
            })
            .collect();
        let alg = FreeGca::new(gens);
        let mut rc = RepComplex {
            model: model.clone(),
            g: g.clone(),
            degree_cap,
            complex: DgComplex::new(alg.clone(), vec![Element::new(); alg.ngens()], None)?,
            basis: BlockBasis::default(),
            gen_index,
        };
        let mut diff = vec![Element::new(); alg.ngens()];
        for (v, dv) in model.diff.iter().enumerate() {
            let rho = rc.universal_rep(dv);
            for k in 0..g.dim {
                diff[rc.gen_index[v][k]] = rho[k].clone();
            }
        }
        let images: Vec<Vec<Element>> = (0..g.dim)
            .map(|a| {
                order
                    .iter()
                    .map(|&(v, i)| {
                        let mut e = Element::new();
                        for (k, c) in coadjoint_image(g, a, i) {
                            add_into(&mut e, alg.generator(rc.gen_index[v][k]), c);
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        let action = Action { images, diagonal: diag.iter().map(|(a, _)| *a).collect() };
        rc.complex = DgComplex::new(alg.clone(), diff, Some(action))?;
        rc.complex.check_square_zero()?;
        let costs: Vec<i64> = alg.generators().iter().map(|x| x.degree).collect();
        rc.basis = BlockBasis::new(&alg, alg.enumerate(&costs, degree_cap + 1));
        Ok(rc)
    }

    pub fn generator(&self, v: usize, i: usize) -> usize {
        self.gen_index[v][i]
    }

    /// `ρ(v) = Σ_i (ξ_i* v) ⊗ ξ_i`, extended by `ρ([x, y]) = [ρ(x), ρ(y)]`.
    pub fn universal_rep(&self, x: &LieExpr) -> CurrentElement {
        let mut out = vec![Element::new(); self.g.dim];
        for (c, t) in &x.terms {
            let r = self.rep_tree(t);
            for k in 0..self.g.dim {
                for (m, v) in &r[k] {
                    add_into(&mut out[k], m.clone(), v * c);
                }
            }
        }
        out
    }

    fn rep_tree(&self, t: &LieTree) -> CurrentElement {
        let alg = &self.complex.alg;
        match t {
            LieTree::Gen(v) => (0..self.g.dim).map(|i| alg.gen_element(self.gen_index[*v][i])).collect(),
            LieTree::Bracket(a, b) => {
                let ra = self.rep_tree(a);
                let rb = self.rep_tree(b);
                let mut out = vec![Element::new(); self.g.dim];
                for i in 0..self.g.dim {
                    if ra[i].is_empty() {
                        continue;
                    }
                    for j in 0..self.g.dim {
                        if rb[j].is_empty() || self.g.bracket(i, j).is_empty() {
                            continue;
                        }
                        let prod = alg.mul(&ra[i], &rb[j]);
                        for (k, c) in self.g.bracket(i, j) {
                            for (m, v) in &prod {
                                add_into(&mut out[*k], m.clone(), v * c);
                            }
                        }
                    }
                }
                out
            }
        }
    }

    fn keys_up_to(&self, max_degree: i64) -> Vec<BlockKey> {
        self.basis.blocks.keys().filter(|k| k.degree <= max_degree).cloned().collect()
    }

    /// `dim HR_n` for `0 ≤ n ≤ max_degree`.
    pub fn homology_dims(&self, max_degree: i64) -> Result<BTreeMap<i64, usize>, RepError> {
        let max_degree = max_degree.min(self.degree_cap);
        let per_block = self.complex.block_homology(&self.basis, &self.keys_up_to(max_degree))?;
        Ok(collapse(per_block, max_degree))
    }

    /// `dim (HR_n)^G` for `0 ≤ n ≤ max_degree`.
    pub fn invariant_homology_dims(&self, max_degree: i64) -> Result<BTreeMap<i64, usize>, RepError> {
        if !self.g.reductive {
            return Err(RepError::NotReductive(self.g.name.clone()));
        }
        let max_degree = max_degree.min(self.degree_cap);
        let keys: Vec<BlockKey> =
            self.keys_up_to(max_degree).into_iter().filter(|k| k.torus.iter().all(Zero::is_zero)).collect();
        let per_block = self.complex.invariant_block_homology(&self.basis, &keys)?;
        Ok(collapse(per_block, max_degree))
    }

    pub fn homology_series(&self, max_degree: i64) -> Result<PoincareSeries, RepError> {
        Ok(PoincareSeries::from_dims(&self.homology_dims(max_degree)?, max_degree.min(self.degree_cap) as u32))
    }

    pub fn invariant_homology_series(&self, max_degree: i64) -> Result<PoincareSeries, RepError> {
        Ok(PoincareSeries::from_dims(
            &self.invariant_homology_dims(max_degree)?,
            max_degree.min(self.degree_cap) as u32,
        ))
    }

    /// Chain dimensions `dim C_n` for `0 ≤ n ≤ max_degree`.
    pub fn chain_dims(&self, max_degree: i64) -> BTreeMap<i64, usize> {
        let mut out: BTreeMap<i64, usize> = (0..=max_degree).map(|n| (n, 0)).collect();
        for (k, v) in &self.basis.blocks {
            if k.degree <= max_degree {
                *out.entry(k.degree).or_insert(0) += v.len();
            }
        }
        out
    }

    /// Whether `x` is annihilated by every acting basis element of `g`.
    pub fn is_invariant(&self, x: &Element) -> bool {
        (0..self.g.dim).all(|a| self.complex.act(a, x).is_empty())
    }

    pub fn is_cycle(&self, x: &Element) -> bool {
        self.complex.d(x).is_empty()
    }

    /// Whether a homogeneous cycle represents a nonzero homology class.
    pub fn is_nonzero_class(&self, x: &Element) -> Result<bool, RepError> {
        let mut by_block: BTreeMap<BlockKey, Element> = BTreeMap::new();
        for (m, c) in x {
            by_block.entry(self.complex.alg.block_key(m)).or_default().insert(m.clone(), c.clone());
        }
        // A sum over several blocks is a boundary iff each block part is.
        for (k, part) in by_block {
            if !self.is_boundary_in_block(&k, &part)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn is_boundary_in_block(&self, key: &BlockKey, x: &Element) -> Result<bool, RepError> {
        let up = BlockKey { degree: key.degree + 1, ..key.clone() };
        let d = self.complex.differential_matrix(&self.basis, &up)?;
        let cols: Vec<SparseVec> = d.transpose().row_iter().cloned().collect();
        let ech = Echelon::from_rows(self.basis.dim(key), cols.iter());
        let v = self.basis.coords(key, x)?;
        Ok(ech.contains(&v))
    }
}

fn collapse(per_block: BTreeMap<BlockKey, usize>, max_degree: i64) -> BTreeMap<i64, usize> {
    let mut out: BTreeMap<i64, usize> = (0..=max_degree).map(|n| (n, 0)).collect();
    for (k, d) in per_block {
        *out.entry(k.degree).or_insert(0) += d;
    }
    out
}

/// One row of the low-degree comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowDegreeRow {
    pub degree: i64,
    pub computed: usize,
    pub expected: usize,
}

/// Compares `HR_i` with `H_{i+1}(X; g*)` for `n ≤ i ≤ 2n − 1`, `HR_i = 0`
/// for `1 ≤ i < n` and `HR_0 = ℚ`, for an `n`-connected space with the
/// given reduced Betti numbers.
pub fn low_degree_check(
    model: &QuillenModel,
    g: &LieAlgebraData,
    connectivity: i64,
    reduced_betti: &BTreeMap<i64, usize>,
) -> Result<Vec<LowDegreeRow>, RepError> {
    let top = 2 * connectivity - 1;
    let rc = RepComplex::build(model, g, top.max(1))?;
    let dims = rc.homology_dims(top.max(0))?;
    Ok((0..=top.max(0))
        .map(|i| {
            let expected = if i == 0 {
                1
            } else if i < connectivity {
                0
            } else {
                reduced_betti.get(&(i + 1)).copied().unwrap_or(0) * g.dim
            };
            LowDegreeRow { degree: i, computed: dims.get(&i).copied().unwrap_or(0), expected }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::builtin;
    use crate::linalg::{frac, q};
    use crate::models::Space;

    fn rc(space: Space, g: &str, cap: i64) -> RepComplex {
        RepComplex::build(&space.quillen(cap).unwrap(), &builtin(g).unwrap(), cap).unwrap()
    }

    #[test]
    fn s2_sl2_exterior_algebra() {
        let r = rc(Space::Sphere(2), "sl2", 4);
        let h = r.homology_dims(4).unwrap();
        assert_eq!(h, [(0, 1), (1, 3), (2, 3), (3, 1), (4, 0)].into_iter().collect());
        assert_eq!(r.homology_series(3).unwrap().to_string(), "1 + 3z + 3z^2 + z^3");
    }

    #[test]
    fn s3_sl2_polynomial_algebra() {
        let r = rc(Space::Sphere(3), "sl2", 6);
        let want = PoincareSeries::free_graded_commutative(&[2, 2, 2], 6);
        assert_eq!(r.homology_series(6).unwrap(), want);
        assert_eq!(r.invariant_homology_series(6).unwrap().to_string(), "1 + z^4");
    }

    #[test]
    fn universal_rep_on_generator() {
        let r = rc(Space::Sphere(3), "sl2", 4);
        let rho = r.universal_rep(&LieExpr::gen(0));
        for i in 0..3 {
            assert_eq!(rho[i], r.complex.alg.gen_element(r.generator(0, i)));
        }
        let t = rc(Space::Sphere(3), "torus(1)", 4);
        let rho = t.universal_rep(&LieExpr::gen(0));
        assert_eq!(rho.len(), 1);
    }

    #[test]
    fn universal_rep_of_odd_self_bracket() {
        // ρ([v,v]) = Σ_{i,j} (ξ_i* v)(ξ_j* v) ⊗ [ξ_i, ξ_j], expanded directly.
        let r = rc(Space::Sphere(2), "sl2", 3);
        let v = LieExpr::gen(0);
        let rho = r.universal_rep(&v.bracket(&v));
        let alg = &r.complex.alg;
        let g = &r.g;
        let mut want = vec![Element::new(); 3];
        for i in 0..3 {
            for j in 0..3 {
                let p = alg.mul(&alg.gen_element(r.generator(0, i)), &alg.gen_element(r.generator(0, j)));
                for k in 0..3 {
                    let c = g.structure_constant(i, j, k);
                    for (m, x) in &p {
                        add_into(&mut want[k], m.clone(), x * &c);
                    }
                }
            }
        }
        assert_eq!(rho, want);
        // h-component: 2 (e*v)(f*v).
        let ef = alg.mul(&alg.gen_element(r.generator(0, 0)), &alg.gen_element(r.generator(0, 2)));
        assert_eq!(rho[1], crate::gca::scale(&ef, &q(2)));
    }

    #[test]
    fn cp2_differential_matches_example() {
        let r = rc(Space::Cp(2), "sl2", 6);
        let alg = &r.complex.alg;
        let dh = &r.complex.diff[r.generator(1, 1)];
        let ef = alg.mul(&alg.gen_element(r.generator(0, 0)), &alg.gen_element(r.generator(0, 2)));
        assert_eq!(dh, &ef);
        assert_eq!(alg.ngens(), 6);
    }

    #[test]
    fn cp2_sl2_invariants_and_top_class() {
        let r = rc(Space::Cp(2), "sl2", 12);
        let inv = r.invariant_homology_series(12).unwrap();
        assert_eq!(inv.to_string(), "1 + z^5 + z^7 + z^12");
        let full = r.homology_dims(12).unwrap();
        assert_eq!(full[&12], 1);
        assert!(r.homology_dims(12).unwrap().values().sum::<usize>() > 0);
    }

    #[test]
    fn s2_chain_dims_and_euler() {
        let r = rc(Space::Cp(2), "sl2", 12);
        let c = r.chain_dims(12);
        let h = r.homology_dims(12).unwrap();
        let chi = |m: &BTreeMap<i64, usize>| m.iter().map(|(n, d)| if n % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum::<i64>();
        assert_eq!(chi(&c), chi(&h));
        assert_eq!(c.values().sum::<usize>(), 64);
    }

    #[test]
    fn differential_scaling_leaves_homology() {
        let m = Space::Cp(2).quillen(12).unwrap();
        let g = builtin("sl2").unwrap();
        let a = RepComplex::build(&m, &g, 12).unwrap().homology_dims(12).unwrap();
        let b = RepComplex::build(&m.scaled(&frac(2, 1)), &g, 12).unwrap().homology_dims(12).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn equivariance_holds() {
        let r = rc(Space::Cp(2), "sl3", 5);
        assert!(r.complex.check_equivariance());
    }

    #[test]
    fn low_degree_examples() {
        let g = builtin("sl2").unwrap();
        let sp = Space::Sphere(4);
        let rows = low_degree_check(&sp.quillen(8).unwrap(), &g, sp.connectivity(), &sp.reduced_betti(10)).unwrap();
        assert!(rows.iter().all(|r| r.computed == r.expected), "{rows:?}");
        assert_eq!(rows[3].computed, 3);
        let sp = Space::Sphere(2);
        let rows = low_degree_check(&sp.quillen(8).unwrap(), &g, sp.connectivity(), &sp.reduced_betti(10)).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].computed, 3);
        assert_eq!(rows[0].computed, 1);
    }
}
