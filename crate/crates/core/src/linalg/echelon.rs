//! Fraction-free row echelon forms.
//!
//! Rows are scaled to primitive integer vectors on entry. Elimination of a
//! leading entry `x` against a pivot with leading entry `y` replaces the row
//! by `(y/g)·row − (x/g)·pivot` with `g = gcd(x, y)` and then divides out the
//! row content, which keeps coefficient growth in check without ever
//! introducing fractions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rational, SparseMatrix, SparseVec};

type IntRow = Vec<(usize, BigInt)>;

fn to_int_row(row: &[(usize, Rational)]) -> (IntRow, Rational) {
    let mut l = BigInt::one();
    for (_, v) in row {
        l = l.lcm(v.denom());
    }
    let out = row
        .iter()
        .map(|(c, v)| (*c, v.numer() * (&l / v.denom())))
        .collect();
    (out, Rational::from_integer(l))
}

fn content(row: &IntRow) -> BigInt {
    let mut g = BigInt::zero();
    for (_, v) in row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

/// `a·x − b·y` on sparse integer rows.
fn axpy(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Divides out the content; returns the divisor used.
fn make_primitive(row: &mut IntRow) -> BigInt {
    let g = content(row);
    if g.is_zero() || g.is_one() {
        return BigInt::one();
    }
    for (_, v) in row.iter_mut() {
        *v /= &g;
    }
    g
}

/// Incremental row echelon form keyed by leading column.
///
/// Pivot rows are primitive integer vectors. With [`Echelon::reduce_fully`]
/// the structure doubles as a normal form for vectors modulo the row space.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivots: BTreeMap::new() }
    }

    pub fn from_rows<'a, I>(ncols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec>,
    {
        let mut rows: Vec<&SparseVec> = rows.into_iter().collect();
        rows.sort_by_key(|r| r.len());
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Eliminates leading entries only. Returns the reduced row (zero iff
    /// the input lies in the row space).
    fn reduce_leading(&self, mut row: IntRow) -> IntRow {
        loop {
            let Some((lead, x)) = row.first().cloned() else { return row };
            let Some(p) = self.pivots.get(&lead) else { return row };
            let y = &p[0].1;
            let g = x.gcd(y);
            let (a, b) = (y / &g, &x / &g);
            row = axpy(&a, &row, &b, p);
            make_primitive(&mut row);
        }
    }

    /// Adds a row; returns `true` if it was independent of the existing rows.
    pub fn insert(&mut self, row: &[(usize, Rational)]) -> bool {
        let (r, _) = to_int_row(row);
        let mut r = self.reduce_leading(r);
        if r.is_empty() {
            return false;
        }
        make_primitive(&mut r);
        if r[0].1.is_negative() {
            for (_, v) in r.iter_mut() {
                *v = -&*v;
            }
        }
        let lead = r[0].0;
        self.pivots.insert(lead, r);
        true
    }

    pub fn contains(&self, row: &[(usize, Rational)]) -> bool {
        let (r, _) = to_int_row(row);
        self.reduce_leading(r).is_empty()
    }

    /// Brings the pivot rows into reduced form: every pivot column is zero in
    /// all other pivot rows.
    pub fn reduce_pivots(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &c in &cols {
            let p = self.pivots[&c].clone();
            let y = p[0].1.clone();
            let others: Vec<usize> = self.pivots.range(..c).map(|(k, _)| *k).collect();
            for k in others {
                let row = &self.pivots[&k];
                let Ok(pos) = row.binary_search_by_key(&c, |(cc, _)| *cc) else { continue };
                let x = row[pos].1.clone();
                let g = x.gcd(&y);
                let (a, b) = (&y / &g, &x / &g);
                let mut new = axpy(&a, row, &b, &p);
                make_primitive(&mut new);
                if new[0].1.is_negative() {
                    for (_, v) in new.iter_mut() {
                        *v = -&*v;
                    }
                }
                self.pivots.insert(k, new);
            }
        }
    }

    /// Exact remainder of `row` modulo the row space, normalized so that it
    /// has no component in any pivot column. Requires [`Echelon::reduce_pivots`]
    /// to have been called for the remainder to be canonical.
    pub fn reduce_fully(&self, row: &[(usize, Rational)]) -> SparseVec {
        let (mut r, mut scale) = to_int_row(row);
        // r / scale == row throughout.
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        for c in cols {
            let Ok(pos) = r.binary_search_by_key(&c, |(cc, _)| *cc) else { continue };
            let p = &self.pivots[&c];
            let x = r[pos].1.clone();
            let y = &p[0].1;
            let g = x.gcd(y);
            let (a, b) = (y / &g, &x / &g);
            r = axpy(&a, &r, &b, p);
            scale *= Rational::from_integer(a);
            let d = make_primitive(&mut r);
            scale /= Rational::from_integer(d);
        }
        r.into_iter()
            .map(|(c, v)| (c, Rational::from_integer(v) / &scale))
            .collect()
    }

    /// Basis of the null space `{x : A x = 0}` where `A` has these rows.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut red = self.clone();
        red.reduce_pivots();
        let pivot_set: std::collections::BTreeSet<usize> = red.pivots.keys().copied().collect();
        let mut out = Vec::new();
        for f in (0..self.ncols).filter(|c| !pivot_set.contains(c)) {
            let mut v: SparseVec = Vec::new();
            for (c, row) in &red.pivots {
                if let Ok(pos) = row.binary_search_by_key(&f, |(cc, _)| *cc) {
                    let val = -Rational::new(row[pos].1.clone(), row[0].1.clone());
                    v.push((*c, val));
                }
            }
            v.push((f, super::q(1)));
            v.sort_by_key(|(c, _)| *c);
            out.push(v);
        }
        out
    }
}

/// Rank over ℚ.
pub fn rank(m: &SparseMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    // Eliminating along the shorter side keeps the echelon smaller.
    if m.rows() > 2 * m.cols() {
        let t = m.transpose();
        return Echelon::from_rows(t.cols(), t.row_iter()).rank();
    }
    Echelon::from_rows(m.cols(), m.row_iter()).rank()
}

/// Null-space basis as sparse vectors of length `m.cols()`.
pub fn kernel_matrix(m: &SparseMatrix) -> Vec<SparseVec> {
    Echelon::from_rows(m.cols(), m.row_iter()).kernel()
}

/// Null-space basis as dense vectors; `len = cols − rank`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    kernel_matrix(m)
        .into_iter()
        .map(|v| {
            let mut d = vec![Rational::zero(); m.cols()];
            for (i, x) in v {
                d[i] = x;
            }
            d
        })
        .collect()
}

/// Coordinates `c` with `Σ c_i basis_i = target`, if the target lies in the
/// span. Vectors are sparse over `ncols` coordinates; the basis must be
/// linearly independent for the answer to be unique.
pub fn solve_in_span(ncols: usize, basis: &[SparseVec], target: &[(usize, Rational)]) -> Option<Vec<Rational>> {
    let k = basis.len();
    // Columns are the basis vectors followed by −target; a kernel vector
    // with nonzero last entry gives the coordinates.
    let mut cols: Vec<SparseVec> = basis.to_vec();
    cols.push(target.iter().map(|(i, v)| (*i, -v.clone())).collect());
    let m = SparseMatrix::from_columns(ncols, &cols);
    for v in kernel_matrix(&m) {
        if let Some((_, last)) = v.iter().find(|(i, _)| *i == k) {
            let last = last.clone();
            let mut out = vec![Rational::zero(); k];
            for (i, x) in &v {
                if *i < k {
                    out[*i] = x / &last;
                }
            }
            return Some(out);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use proptest::prelude::*;

    #[test]
    fn rank_trivial_cases() {
        assert_eq!(rank(&SparseMatrix::identity(3)), 3);
        assert_eq!(rank(&SparseMatrix::zeros(5, 7)), 0);
        assert_eq!(rank(&SparseMatrix::from_i64(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_trivial_cases() {
        assert!(kernel_basis(&SparseMatrix::identity(2)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zeros(2, 3)).len(), 3);
        let k = kernel_basis(&SparseMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(&k[0][0] + &k[0][1], q(0));
        assert_ne!(k[0][0], q(0));
    }

    #[test]
    fn reduce_fully_gives_exact_remainder() {
        let mut e = Echelon::new(3);
        e.insert(&[(0, q(2)), (1, q(4))]);
        e.reduce_pivots();
        // (1,1,5) - 1/2 (2,4,0) = (0,-1,5)
        let r = e.reduce_fully(&[(0, q(1)), (1, q(1)), (2, q(5))]);
        assert_eq!(r, vec![(1, q(-1)), (2, q(5))]);
    }

    #[test]
    fn solve_in_span_finds_coordinates() {
        let b = vec![vec![(0, q(1)), (1, q(1))], vec![(1, q(1))]];
        let c = solve_in_span(2, &b, &[(0, q(2)), (1, q(5))]).unwrap();
        assert_eq!(c, vec![q(2), q(3)]);
        assert!(solve_in_span(3, &b, &[(2, q(1))]).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r)
        })
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose(rows in small_matrix()) {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let m = SparseMatrix::from_i64(&refs);
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn kernel_vectors_are_annihilated(rows in small_matrix()) {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let m = SparseMatrix::from_i64(&refs);
            let k = kernel_basis(&m);
            prop_assert_eq!(k.len(), m.cols() - rank(&m));
            for v in &k {
                prop_assert!(m.apply_dense(v).iter().all(|x| x.is_zero()));
            }
        }
    }
}
