//! Chevalley–Eilenberg cochains of current Lie algebras `g ⊗ Ā`.
//!
//! For a Sullivan model `A` with augmentation ideal `Ā`, the current Lie
//! algebra `g ⊗ Ā` has basis `x_α = ξ_k ⊗ a` over monomials `a ∈ Ā`. Its
//! cochains are the free graded-commutative algebra on dual generators
//! `y_α` of homological degree `|a| − 1`, with
//!
//! `d y_γ = −Σ_α (−1)^{|y_α|} D^γ_α y_α − ½ Σ_{α,β} (−1)^{|x_α||y_β|} c^γ_{αβ} y_α y_β`
//!
//! where `D` is the internal differential and `c` the structure constants.
//! Everything preserves the weight of `A`, so each weight block is finite.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::gca::{add_into, Action, BlockBasis, BlockKey, DgComplex, Element, FreeGca, GcGenerator, GcaError, Monomial};
use crate::lie::{coadjoint_image, LieAlgebraData};
use crate::linalg::{frac, q, Rational};
use crate::models::SullivanModel;
use crate::series::PoincareSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CeError {
    #[error(transparent)]
    Gca(#[from] GcaError),
    #[error("generator `{0}` has non-positive total weight, so weight blocks of Ā are unbounded")]
    UnboundedWeight(String),
    #[error("weight cutoff {given} is insufficient for degree {degree}: need at least {required}")]
    InsufficientCutoff { given: i64, required: i64, degree: i64 },
    #[error("degree {degree} exceeds the complex's degree cap {cap}")]
    BeyondDegreeCap { degree: i64, cap: i64 },
    #[error("relative cohomology needs a reductive Lie algebra; `{0}` is not flagged reductive")]
    NotReductive(String),
}

fn total_weight(w: &[i64]) -> i64 {
    w.iter().sum()
}

/// Smallest cutoff `W` such that every cochain of homological degree
/// `≤ max_degree` has total weight `≤ W`.
///
/// A generator `y_a` has degree `|a| − 1` and weight `w(a)`, so the bound is
/// `⌊c · max_degree⌋` with `c = sup_a w(a)/(|a| − 1)`. The supremum is taken
/// over an explicit enumeration of `Ā` up to weight `W₀` together with the
/// tail estimate `w/(r₀ w − 1)` for `w > W₀`, where `r₀ = min |g|/w(g)`
/// over the generators of `A`.
pub fn required_weight(a: &SullivanModel, max_degree: i64) -> Result<i64, CeError> {
    for g in &a.generators {
        if total_weight(&g.weight) <= 0 {
            return Err(CeError::UnboundedWeight(g.label.clone()));
        }
    }
    let r0 = a
        .generators
        .iter()
        .map(|g| frac(g.degree, total_weight(&g.weight)))
        .min()
        .expect("models have generators");
    let w0: i64 = 24;
    let alg = a.algebra();
    let wcost: Vec<i64> = a.generators.iter().map(|g| total_weight(&g.weight)).collect();
    let mut c = Rational::zero();
    for m in alg.enumerate(&wcost, w0) {
        let deg = alg.degree(&m);
        if deg == 0 {
            continue;
        }
        let w: i64 = m.iter().zip(&wcost).map(|(e, c)| *e as i64 * c).sum();
        c = c.max(frac(w, deg - 1));
    }
    // The tail estimate is decreasing in w once r₀ w > 1.
    let wt = q(w0 + 1);
    let denom = &r0 * &wt - q(1);
    assert!(denom > Rational::zero(), "tail estimate needs r₀·(W₀+1) > 1");
    c = c.max(wt / denom);
    Ok((c * q(max_degree)).floor().to_integer().try_into().expect("weight bound fits in i64"))
}

/// The cochain complex of `g ⊗ Ā` truncated at a total weight.
#[derive(Clone, Debug)]
pub struct CeComplex {
    pub g: LieAlgebraData,
    pub a: SullivanModel,
    pub weight_cutoff: i64,
    pub degree_cap: i64,
    /// Monomials of `Ā` with total weight `≤ weight_cutoff`.
    pub abar: Vec<Monomial>,
    pub complex: DgComplex,
    pub basis: BlockBasis,
}

impl CeComplex {
    /// Builds the complex on `(g ⊗ Ā_{≤W})^∨` and enumerates cochains of
    /// degree `≤ degree_cap + 1` and weight `≤ W`.
    pub fn build(g: &LieAlgebraData, a: &SullivanModel, weight_cutoff: i64, degree_cap: i64) -> Result<Self, CeError> {
        for gen in &a.generators {
            if total_weight(&gen.weight) <= 0 {
                return Err(CeError::UnboundedWeight(gen.label.clone()));
            }
        }
        let aalg = a.algebra();
        let wcost: Vec<i64> = a.generators.iter().map(|x| total_weight(&x.weight)).collect();
        let abar: Vec<Monomial> =
            aalg.enumerate(&wcost, weight_cutoff).into_iter().filter(|m| m.iter().any(|&e| e > 0)).collect();
        let abar_index: BTreeMap<&Monomial, usize> = abar.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let diag = g.diagonal_elements();
        let n = g.dim;
        let idx = |k: usize, ai: usize| ai * n + k;
        let mut gens = Vec::with_capacity(abar.len() * n);
        for m in &abar {
            for k in 0..n {
                gens.push(GcGenerator {
                    label: format!("y[{}⊗{}]", g.basis_labels[k], a.format_element(&crate::gca::singleton(m.clone()))),
                    degree: aalg.degree(m) - 1,
                    weight: a.monomial_weight(m),
                    torus: diag.iter().map(|(_, eig)| -eig[k].clone()).collect(),
                });
            }
        }
        let alg = FreeGca::new(gens);
        let yodd: Vec<bool> = alg.generators().iter().map(|x| x.is_odd()).collect();
        let mut diff = vec![Element::new(); alg.ngens()];
        // Internal part: x_α = ξ_k ⊗ a ↦ ξ_k ⊗ da.
        for (ai, m) in abar.iter().enumerate() {
            let da = aalg.derive_mono(&a.diff, true, m);
            for (mm, c) in da {
                let Some(&gi) = abar_index.get(&mm) else { continue };
                for k in 0..n {
                    let alpha = idx(k, ai);
                    let sign = if yodd[alpha] { q(1) } else { q(-1) };
                    add_into(&mut diff[idx(k, gi)], alg.generator(alpha), &c * sign);
                }
            }
        }
        // Bracket part: [ξ_i ⊗ a, ξ_j ⊗ b] = [ξ_i, ξ_j] ⊗ ab.
        let half = frac(-1, 2);
        for (ai, ma) in abar.iter().enumerate() {
            let xa_odd = aalg.degree(ma) % 2 != 0;
            for (bi, mb) in abar.iter().enumerate() {
                let Some((prod, neg)) = aalg.mul_mono(ma, mb) else { continue };
                let Some(&gi) = abar_index.get(&prod) else { continue };
                for i in 0..n {
                    for j in 0..n {
                        let (alpha, beta) = (idx(i, ai), idx(j, bi));
                        let Some((yy, yneg)) = alg.mul_mono(&alg.generator(alpha), &alg.generator(beta)) else {
                            continue;
                        };
                        let koszul = xa_odd && yodd[beta];
                        for (k, c) in g.bracket(i, j) {
                            let flip = neg ^ yneg ^ koszul;
                            let v = &half * c;
                            add_into(&mut diff[idx(*k, gi)], yy.clone(), if flip { -v } else { v });
                        }
                    }
                }
            }
        }
        let images: Vec<Vec<Element>> = (0..n)
            .map(|b| {
                (0..alg.ngens())
                    .map(|gidx| {
                        let (ai, k) = (gidx / n, gidx % n);
                        let mut e = Element::new();
                        for (j, c) in coadjoint_image(g, b, k) {
                            add_into(&mut e, alg.generator(idx(j, ai)), c);
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        let action = Action { images, diagonal: diag.iter().map(|(a, _)| *a).collect() };
        let complex = DgComplex::new(alg.clone(), diff, Some(action))?;
        complex.check_square_zero()?;
        let ycost_w: Vec<i64> = alg.generators().iter().map(|x| total_weight(&x.weight)).collect();
        let ycost_d: Vec<i64> = alg.generators().iter().map(|x| x.degree).collect();
        let basis =
            BlockBasis::new(&alg, alg.enumerate_bounded(&[(&ycost_w, weight_cutoff), (&ycost_d, degree_cap + 1)]));
        Ok(CeComplex {
            g: g.clone(),
            a: a.clone(),
            weight_cutoff,
            degree_cap,
            abar,
            complex,
            basis,
        })
    }

    /// Builds with the smallest cutoff valid through `max_degree`.
    pub fn for_degree(g: &LieAlgebraData, a: &SullivanModel, max_degree: i64) -> Result<Self, CeError> {
        let w = required_weight(a, max_degree)?;
        Self::build(g, a, w, max_degree)
    }

    fn check_window(&self, max_degree: i64) -> Result<(), CeError> {
        if max_degree > self.degree_cap {
            return Err(CeError::BeyondDegreeCap { degree: max_degree, cap: self.degree_cap });
        }
        let required = required_weight(&self.a, max_degree)?;
        if required > self.weight_cutoff {
            return Err(CeError::InsufficientCutoff { given: self.weight_cutoff, required, degree: max_degree });
        }
        Ok(())
    }

    fn keys_up_to(&self, max_degree: i64) -> Vec<BlockKey> {
        self.basis.blocks.keys().filter(|k| k.degree <= max_degree).cloned().collect()
    }

    /// `dim H^{−n}(g ⊗ Ā)` for `0 ≤ n ≤ max_degree`.
    pub fn homology_dims(&self, max_degree: i64) -> Result<BTreeMap<i64, usize>, CeError> {
        self.check_window(max_degree)?;
        let per_block = self.complex.block_homology(&self.basis, &self.keys_up_to(max_degree))?;
        Ok(collapse(per_block, max_degree))
    }

    /// `dim H^{−n}(g ⊗ A, g)`, the ad-invariant part.
    pub fn relative_homology_dims(&self, max_degree: i64) -> Result<BTreeMap<i64, usize>, CeError> {
        self.check_window(max_degree)?;
        if !self.g.reductive {
            return Err(CeError::NotReductive(self.g.name.clone()));
        }
        let keys: Vec<BlockKey> =
            self.keys_up_to(max_degree).into_iter().filter(|k| k.torus.iter().all(Zero::is_zero)).collect();
        let per_block = self.complex.invariant_block_homology(&self.basis, &keys)?;
        Ok(collapse(per_block, max_degree))
    }

    /// Per-weight homology dimensions, keyed by `(weight, degree)`.
    pub fn weighted_homology(&self, max_degree: i64, relative: bool) -> Result<BTreeMap<(Vec<i64>, i64), usize>, CeError> {
        self.check_window(max_degree)?;
        let keys: Vec<BlockKey> = self
            .keys_up_to(max_degree)
            .into_iter()
            .filter(|k| !relative || k.torus.iter().all(Zero::is_zero))
            .collect();
        let per_block = if relative {
            self.complex.invariant_block_homology(&self.basis, &keys)?
        } else {
            self.complex.block_homology(&self.basis, &keys)?
        };
        let mut out = BTreeMap::new();
        for (k, d) in per_block {
            *out.entry((k.weight.clone(), k.degree)).or_insert(0) += d;
        }
        Ok(out)
    }

    pub fn series(&self, max_degree: i64, relative: bool) -> Result<PoincareSeries, CeError> {
        let dims = if relative { self.relative_homology_dims(max_degree)? } else { self.homology_dims(max_degree)? };
        Ok(PoincareSeries::from_dims(&dims, max_degree as u32))
    }

    /// Number of cochain generators in each weight of `Ā`.
    pub fn generator_count_by_weight(&self) -> BTreeMap<Vec<i64>, usize> {
        let mut out = BTreeMap::new();
        for x in self.complex.alg.generators() {
            *out.entry(x.weight.clone()).or_insert(0) += 1;
        }
        out
    }
}

fn collapse(per_block: BTreeMap<BlockKey, usize>, max_degree: i64) -> BTreeMap<i64, usize> {
    let mut out: BTreeMap<i64, usize> = (0..=max_degree).map(|n| (n, 0)).collect();
    for (k, d) in per_block {
        *out.entry(k.degree).or_insert(0) += d;
    }
    out
}
