use std::collections::BTreeMap;

use thiserror::Error;

use super::{rank, SparseMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("d∘d is nonzero from degree {degree} to {}", degree - 2)]
    NotAComplex { degree: i64 },
    #[error("differential in degree {degree} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch { degree: i64, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
}

/// A chain complex concentrated in `[min_degree, max_degree]`, with
/// `d_n: C_n → C_{n−1}` stored as a `dim C_{n−1} × dim C_n` matrix.
#[derive(Clone, Debug)]
pub struct BoundedChainComplex {
    min_degree: i64,
    max_degree: i64,
    dims: BTreeMap<i64, usize>,
    differentials: BTreeMap<i64, SparseMatrix>,
}

impl BoundedChainComplex {
    /// Missing differentials are zero. Shapes are checked against `dims`.
    pub fn new(
        min_degree: i64,
        max_degree: i64,
        dims: BTreeMap<i64, usize>,
        differentials: BTreeMap<i64, SparseMatrix>,
    ) -> Result<Self, LinalgError> {
        let c = BoundedChainComplex { min_degree, max_degree, dims, differentials };
        for (&n, d) in &c.differentials {
            let (er, ec) = (c.dim(n - 1), c.dim(n));
            if d.rows() != er || d.cols() != ec {
                return Err(LinalgError::ShapeMismatch {
                    degree: n,
                    rows: d.rows(),
                    cols: d.cols(),
                    expected_rows: er,
                    expected_cols: ec,
                });
            }
        }
        Ok(c)
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.min_degree || n > self.max_degree {
            return 0;
        }
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn differential(&self, n: i64) -> SparseMatrix {
        self.differentials
            .get(&n)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim(n - 1), self.dim(n)))
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_degree..=self.max_degree
    }

    /// Returns the lowest degree `n` with `d_{n−1} d_n ≠ 0`, if any.
    pub fn check_square_zero(&self) -> Result<(), LinalgError> {
        for n in self.degrees() {
            let (Some(a), Some(b)) = (self.differentials.get(&(n - 1)), self.differentials.get(&n)) else {
                continue;
            };
            if !a.mul(b).is_zero() {
                return Err(LinalgError::NotAComplex { degree: n });
            }
        }
        Ok(())
    }

    /// `dim H_n = dim C_n − rank d_n − rank d_{n+1}` for every degree in range.
    pub fn homology_dims(&self) -> Result<BTreeMap<i64, usize>, LinalgError> {
        self.check_square_zero()?;
        let ranks: BTreeMap<i64, usize> = self
            .degrees()
            .chain(std::iter::once(self.max_degree + 1))
            .map(|n| (n, self.differentials.get(&n).map_or(0, rank)))
            .collect();
        Ok(self
            .degrees()
            .map(|n| (n, self.dim(n) - ranks[&n] - ranks.get(&(n + 1)).copied().unwrap_or(0)))
            .collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|n| if n % 2 == 0 { 1 } else { -1 } * self.dim(n) as i64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(v: &[(i64, usize)]) -> BTreeMap<i64, usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn isomorphism_differential_kills_homology() {
        let c = BoundedChainComplex::new(
            0,
            1,
            dims(&[(0, 1), (1, 1)]),
            [(1, SparseMatrix::identity(1))].into_iter().collect(),
        )
        .unwrap();
        assert!(c.homology_dims().unwrap().values().all(|&h| h == 0));
    }

    #[test]
    fn zero_differentials_give_chain_dims() {
        let d = dims(&[(0, 1), (1, 3), (2, 3), (3, 1)]);
        let c = BoundedChainComplex::new(0, 3, d.clone(), BTreeMap::new()).unwrap();
        assert_eq!(c.homology_dims().unwrap(), d);
    }

    #[test]
    fn detects_nonzero_square() {
        let c = BoundedChainComplex::new(
            0,
            2,
            dims(&[(0, 1), (1, 1), (2, 1)]),
            [(1, SparseMatrix::identity(1)), (2, SparseMatrix::identity(1))].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(c.homology_dims(), Err(LinalgError::NotAComplex { degree: 2 }));
    }

    #[test]
    fn shape_is_checked() {
        let r = BoundedChainComplex::new(
            0,
            1,
            dims(&[(0, 2), (1, 1)]),
            [(1, SparseMatrix::identity(1))].into_iter().collect(),
        );
        assert!(matches!(r, Err(LinalgError::ShapeMismatch { degree: 1, .. })));
    }

    #[test]
    fn euler_characteristic_matches_homology() {
        // C_0 = Q^2, C_1 = Q^3, d_1 of rank 1.
        let d1 = SparseMatrix::from_i64(&[&[1, 1, 0], &[2, 2, 0]]);
        let c = BoundedChainComplex::new(0, 1, dims(&[(0, 2), (1, 3)]), [(1, d1)].into_iter().collect())
            .unwrap();
        let h = c.homology_dims().unwrap();
        let chi_h: i64 = h.iter().map(|(n, d)| if n % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum();
        assert_eq!(chi_h, c.euler_characteristic());
        assert_eq!(h, dims(&[(0, 1), (1, 2)]));
    }
}
