use std::collections::BTreeMap;

use num_traits::Zero;

use super::Rational;

/// A sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

/// Row-major sparse matrix over ℚ.
///
/// Rows are kept sorted by column with no duplicate positions and no zero
/// entries, so two matrices with the same entries compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, super::q(1))]).collect();
        SparseMatrix { rows: n, cols: n, data }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated positions
    /// are summed and zero results dropped.
    ///
    /// Panics if an index is out of range.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            if v.is_zero() {
                continue;
            }
            let slot = acc[r].entry(c).or_insert_with(Rational::zero);
            *slot += v;
        }
        let data = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows, cols, data }
    }

    /// Builds a matrix from its columns, each given as a sparse vector.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let triplets = columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone())));
        Self::from_triplets(rows, columns.len(), triplets)
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let triplets = rows.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            row.iter().enumerate().map(move |(c, v)| (r, c, v.clone()))
        });
        Self::from_triplets(rows.len(), cols, triplets)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| super::q(x)).collect()).collect();
        Self::from_dense(&dense)
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[SparseMatrix]) -> Self {
        let cols = parts.first().map_or(0, |m| m.cols);
        let mut data = Vec::new();
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            data.extend(p.data.iter().cloned());
        }
        SparseMatrix { rows: data.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &SparseVec> {
        self.data.iter()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r]
            .binary_search_by_key(&c, |(cc, _)| *cc)
            .map(|i| self.data[r][i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn transpose(&self) -> Self {
        let triplets = self.entries().map(|(r, c, v)| (c, r, v.clone()));
        Self::from_triplets(self.cols, self.rows, triplets)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &other.data[*k] {
                        *acc.entry(*c).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: other.cols, data }
    }

    /// Applies the matrix to a sparse vector.
    pub fn apply(&self, v: &[(usize, Rational)]) -> SparseVec {
        let dense: BTreeMap<usize, &Rational> = v.iter().map(|(i, x)| (*i, x)).collect();
        let mut out = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            let mut s = Rational::zero();
            for (c, a) in row {
                if let Some(x) = dense.get(c) {
                    s += a * *x;
                }
            }
            if !s.is_zero() {
                out.push((r, s));
            }
        }
        out
    }

    /// Applies the matrix to a dense vector.
    pub fn apply_dense(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |s, (c, a)| s + a * &v[*c]))
            .collect()
    }
}
