//! Finite-dimensional Lie algebras over ℚ, their invariant polynomials and
//! coadjoint actions.

mod algebra;
mod invariant;

pub use algebra::{builtin, InvariantSpec, LieAlgebraData, BUILTIN_NAMES};
pub use invariant::{
    coordinate_invariant, invariant_generators, invariant_space, multisets, power_trace_invariant,
    InvariantPolynomial, SymPoly,
};

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{Rational, SparseMatrix, SparseVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("unknown Lie algebra `{0}` (builtins: sl2, sl3, sl4, so4, sp4, gl2, torus(n))")]
    UnknownAlgebra(String),
    #[error("invalid Lie algebra: {0}")]
    Invalid(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("power traces need a defining representation")]
    MissingDefiningRep,
    #[error("{pointer}: {message}")]
    Parse { pointer: String, message: String },
}

/// Matrices of the coadjoint action on `g*` in the dual basis:
/// `ξ_a · ξ_j* = −Σ_k c^j_{ak} ξ_k*`.
pub fn coadjoint_matrices(g: &LieAlgebraData) -> Vec<SparseMatrix> {
    (0..g.dim)
        .map(|a| {
            let cols: Vec<SparseVec> = (0..g.dim).map(|j| coadjoint_image(g, a, j)).collect();
            SparseMatrix::from_columns(g.dim, &cols)
        })
        .collect()
}

/// `ξ_a · ξ_j*` in coordinates of the dual basis.
pub fn coadjoint_image(g: &LieAlgebraData, a: usize, j: usize) -> SparseVec {
    (0..g.dim)
        .filter_map(|k| {
            let c = g.structure_constant(a, k, j);
            (!c.is_zero()).then(|| (k, -c))
        })
        .collect()
}

/// Checks `[M_a, M_b] = Σ_k c^k_{ab} M_k` for a family of action matrices.
pub fn is_representation(g: &LieAlgebraData, mats: &[SparseMatrix]) -> bool {
    if mats.len() != g.dim {
        return false;
    }
    let n = mats.first().map_or(0, SparseMatrix::rows);
    for a in 0..g.dim {
        for b in 0..g.dim {
            let ab = mats[a].mul(&mats[b]);
            let ba = mats[b].mul(&mats[a]);
            let mut trip: Vec<(usize, usize, Rational)> = ab.entries().map(|(r, c, v)| (r, c, v.clone())).collect();
            trip.extend(ba.entries().map(|(r, c, v)| (r, c, -v.clone())));
            for (k, c) in g.bracket(a, b) {
                trip.extend(mats[*k].entries().map(|(r, cc, v)| (r, cc, -(v * c))));
            }
            if !SparseMatrix::from_triplets(n, n, trip).is_zero() {
                return false;
            }
        }
    }
    true
}
