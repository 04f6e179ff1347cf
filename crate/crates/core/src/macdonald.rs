//! Root systems, the constant-term map on the group ring of the root
//! lattice, and the q- and (q,t)-constant-term identities.
//!
//! Lattice vectors are integer coordinates in the basis of simple roots.
//! Coefficients are integer series in `q` (and `t`) truncated at
//! `q^{N_q}`, `t^{N_t}`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{Rational, q};
use crate::series::PoincareSeries;

pub const ROOT_SYSTEMS: &[&str] = &["A1", "A2", "A3", "B2", "G2", "B3"];

/// Stated alongside every constant-term value.
pub const NORMALIZATION_NOTE: &str = "the raw constant term CT{∏_{j=0}^r ∏_α (1 − q^j e^α)} equals |W| · ∏_i ∏_{j=1}^r (1 − q^{j+m_i(r+1)})/(1 − q^j); the verified identity is χ = (1/|W|) ∏_j (1 − q^j)^l · CT = ∏_i ∏_j (1 − q^{j+m_i(r+1)})";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MacdonaldError {
    #[error("unknown root system `{0}` (expected one of A1, A2, A3, B2, G2, B3)")]
    Unknown(String),
    #[error("truncation orders must be at least 1")]
    BadTruncation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub type_rank: String,
    pub rank: usize,
    /// `cartan[i][j] = ⟨α_i, α_j^∨⟩`.
    pub cartan: Vec<Vec<i64>>,
    pub roots: Vec<Vec<i64>>,
    pub weyl_order: usize,
    pub exponents: Vec<u32>,
}

fn cartan_for(name: &str) -> Option<(Vec<Vec<i64>>, Vec<u32>)> {
    let a = |n: usize| -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
            .collect()
    };
    Some(match name {
        "A1" => (a(1), vec![1]),
        "A2" => (a(2), vec![1, 2]),
        "A3" => (a(3), vec![1, 2, 3]),
        // α₁ long, α₂ short.
        "B2" => (vec![vec![2, -2], vec![-1, 2]], vec![1, 3]),
        "B3" => (vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]], vec![1, 3, 5]),
        // α₁ short, α₂ long.
        "G2" => (vec![vec![2, -1], vec![-3, 2]], vec![1, 5]),
        _ => return None,
    })
}

impl RootSystem {
    pub fn new(name: &str) -> Result<Self, MacdonaldError> {
        let (cartan, exponents) = cartan_for(name).ok_or_else(|| MacdonaldError::Unknown(name.to_string()))?;
        let rank = cartan.len();
        let mut rs = RootSystem { type_rank: name.to_string(), rank, cartan, roots: vec![], weyl_order: 0, exponents };
        // Every root is a Weyl conjugate of a simple root.
        let simple: Vec<Vec<i64>> =
            (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        rs.roots = rs.orbit_closure(simple).into_iter().collect();
        // 2ρ has trivial stabiliser, so its orbit has |W| points.
        let two_rho: Vec<i64> = (0..rank).map(|j| rs.positive_roots().iter().map(|r| r[j]).sum()).collect();
        rs.weyl_order = rs.orbit_closure(vec![two_rho]).len();
        Ok(rs)
    }

    fn orbit_closure(&self, seeds: Vec<Vec<i64>>) -> BTreeSet<Vec<i64>> {
        let mut seen: BTreeSet<Vec<i64>> = seeds.iter().cloned().collect();
        let mut queue: VecDeque<Vec<i64>> = seeds.into();
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank {
                let w = self.reflect(i, &v);
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// `⟨β, α_i^∨⟩`.
    pub fn pairing(&self, beta: &[i64], i: usize) -> i64 {
        beta.iter().enumerate().map(|(j, b)| b * self.cartan[j][i]).sum()
    }

    /// Simple reflection `s_i(β) = β − ⟨β, α_i^∨⟩ α_i`.
    pub fn reflect(&self, i: usize, beta: &[i64]) -> Vec<i64> {
        let p = self.pairing(beta, i);
        let mut out = beta.to_vec();
        out[i] -= p;
        out
    }

    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        self.roots.iter().filter(|r| r.iter().all(|&x| x >= 0)).cloned().collect()
    }

    /// Builtin Lie algebra with this root system.
    pub fn lie_algebra_name(&self) -> Option<&'static str> {
        match self.type_rank.as_str() {
            "A1" => Some("sl2"),
            "A2" => Some("sl3"),
            "A3" => Some("sl4"),
            "B2" => Some("sp4"),
            _ => None,
        }
    }
}

/// Dense integer series in `q, t` modulo `(q^{nq}, t^{nt})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    pub nq: usize,
    pub nt: usize,
    coeffs: Vec<BigInt>,
}

impl TruncSeries {
    pub fn zero(nq: usize, nt: usize) -> Self {
        TruncSeries { nq, nt, coeffs: vec![BigInt::zero(); nq * nt] }
    }

    pub fn monomial(nq: usize, nt: usize, qe: usize, te: usize, c: i64) -> Self {
        let mut s = Self::zero(nq, nt);
        if qe < nq && te < nt {
            s.coeffs[qe * nt + te] = BigInt::from(c);
        }
        s
    }

    pub fn coeff(&self, qe: usize, te: usize) -> &BigInt {
        &self.coeffs[qe * self.nt + te]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nq, self.nt);
        let nt = self.nt;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (qa, ta) = (i / nt, i % nt);
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (qb, tb) = (j / nt, j % nt);
                if qa + qb < self.nq && ta + tb < nt {
                    out.coeffs[(qa + qb) * nt + ta + tb] += a * b;
                }
            }
        }
        out
    }

    /// Rational series with variables `q` (and `t` when `nt > 1`).
    pub fn to_series(&self, scale: &Rational) -> PoincareSeries {
        let nq = self.nq as u32 - 1;
        let mut s = if self.nt > 1 {
            PoincareSeries::zero(&["q", "t"], &[nq, self.nt as u32 - 1])
        } else {
            PoincareSeries::zero(&["q"], &[nq])
        };
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = Rational::from_integer(c.clone()) * scale;
            if self.nt > 1 {
                s.add_term(&[(i / self.nt) as u32, (i % self.nt) as u32], v);
            } else {
                s.add_term(&[i as u32], v);
            }
        }
        s
    }
}

/// Finite sums `Σ_β c_β(q, t) e^β` over the root lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSeries {
    pub rank: usize,
    pub nq: usize,
    pub nt: usize,
    pub terms: BTreeMap<Vec<i64>, TruncSeries>,
}

impl LatticeSeries {
    pub fn zero(rank: usize, nq: usize, nt: usize) -> Self {
        LatticeSeries { rank, nq, nt, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize, nq: usize, nt: usize) -> Self {
        Self::term(rank, nq, nt, &vec![0; rank], 0, 0, 1)
    }

    /// `c q^a t^b e^β`.
    pub fn term(rank: usize, nq: usize, nt: usize, beta: &[i64], qe: usize, te: usize, c: i64) -> Self {
        let mut s = Self::zero(rank, nq, nt);
        s.add_term(beta, &TruncSeries::monomial(nq, nt, qe, te, c));
        s
    }

    pub fn add_term(&mut self, beta: &[i64], c: &TruncSeries) {
        let e = self.terms.entry(beta.to_vec()).or_insert_with(|| TruncSeries::zero(self.nq, self.nt));
        e.add_assign(c);
        if e.is_zero() {
            self.terms.remove(beta);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &o.terms {
            out.add_term(b, c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.rank, self.nq, self.nt);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &o.terms {
                let b: Vec<i64> = b1.iter().zip(b2).map(|(x, y)| x + y).collect();
                let c = c1.mul(c2);
                if !c.is_zero() {
                    out.add_term(&b, &c);
                }
            }
        }
        out
    }

    /// Product of many factors by a parallel tree reduction.
    pub fn product(rank: usize, nq: usize, nt: usize, factors: &[LatticeSeries]) -> Self {
        factors
            .par_iter()
            .cloned()
            .reduce(|| LatticeSeries::one(rank, nq, nt), |a, b| a.mul(&b))
    }

    /// Applies the simple reflection `s_i` to every lattice vector.
    pub fn reflect(&self, rs: &RootSystem, i: usize) -> Self {
        let mut out = Self::zero(self.rank, self.nq, self.nt);
        for (b, c) in &self.terms {
            out.add_term(&rs.reflect(i, b), c);
        }
        out
    }
}

/// Coefficient of `e^0`.
pub fn constant_term(s: &LatticeSeries) -> TruncSeries {
    s.terms.get(&vec![0; s.rank]).cloned().unwrap_or_else(|| TruncSeries::zero(s.nq, s.nt))
}

fn poly_product(factors: &[(i64, usize)], nq: usize) -> TruncSeries {
    // Π (1 + c q^e) over the given (c, e).
    let mut out = TruncSeries::monomial(nq, 1, 0, 0, 1);
    for &(c, e) in factors {
        let mut f = TruncSeries::monomial(nq, 1, 0, 0, 1);
        f.add_assign(&TruncSeries::monomial(nq, 1, e, 0, c));
        out = out.mul(&f);
    }
    out
}

fn q_bound(rs: &RootSystem, r: usize) -> usize {
    // Highest q-power in either side, plus one.
    let roots = rs.roots.len();
    let ct = roots * r * (r + 1) / 2;
    let pre = rs.rank * r * (r + 1) / 2;
    let prod: usize = rs.exponents.iter().map(|&m| (1..=r).map(|j| j + m as usize * (r + 1)).sum::<usize>()).sum();
    ct.max(prod) + pre + 1
}

/// `∏_i ∏_{j=1}^r (1 − q^{j+m_i(r+1)})`.
pub fn chi_product_q(rs: &RootSystem, r: usize) -> PoincareSeries {
    let nq = q_bound(rs, r);
    let mut f = Vec::new();
    for &m in &rs.exponents {
        for j in 1..=r {
            f.push((-1, j + m as usize * (r + 1)));
        }
    }
    poly_product(&f, nq).to_series(&q(1))
}

/// Raw `CT{∏_{j=0}^r ∏_α (1 − q^j e^α)}`.
pub fn ct_q(rs: &RootSystem, r: usize) -> TruncSeries {
    let nq = q_bound(rs, r);
    let mut factors = Vec::new();
    for j in 0..=r {
        for a in &rs.roots {
            let f = LatticeSeries::one(rs.rank, nq, 1).add(&LatticeSeries::term(rs.rank, nq, 1, a, j, 0, -1));
            factors.push(f);
        }
    }
    constant_term(&LatticeSeries::product(rs.rank, nq, 1, &factors))
}

/// `(1/|W|) ∏_{j=1}^r (1 − q^j)^l · CT{∏_{j=0}^r ∏_α (1 − q^j e^α)}`.
pub fn chi_ct_q(rs: &RootSystem, r: usize) -> PoincareSeries {
    let ct = ct_q(rs, r);
    let pre: Vec<(i64, usize)> = (1..=r).flat_map(|j| std::iter::repeat_n((-1, j), rs.rank)).collect();
    let full = poly_product(&pre, ct.nq).mul(&ct);
    full.to_series(&Rational::new(BigInt::one(), BigInt::from(rs.weyl_order)))
}

/// `∏_i ∏_{j=1}^r (1 − q^{j+m_i(r+1)})/(1 − q^j)`, the right-hand side of the
/// unnormalized q-identity, expanded to the same order as [`ct_q`].
pub fn macdonald_q_rhs(rs: &RootSystem, r: usize) -> PoincareSeries {
    let nq = q_bound(rs, r);
    let mut f = Vec::new();
    for &m in &rs.exponents {
        for j in 1..=r {
            f.push((-1, j + m as usize * (r + 1)));
        }
    }
    let mut s = poly_product(&f, nq);
    for _ in &rs.exponents {
        for j in 1..=r {
            s = s.mul(&geometric(nq, 1, j, 0, 1));
        }
    }
    s.to_series(&q(1))
}

/// `1/(1 − c q^a t^b) = Σ_k c^k q^{ka} t^{kb}` truncated; requires `a + b > 0`.
fn geometric(nq: usize, nt: usize, a: usize, b: usize, c: i64) -> TruncSeries {
    let mut s = TruncSeries::zero(nq, nt);
    let mut k = 0usize;
    let mut ck = BigInt::one();
    while k * a < nq && k * b < nt {
        s.coeffs[k * a * nt + k * b] += &ck;
        ck *= c;
        k += 1;
    }
    s
}

#[derive(Clone, Debug)]
pub struct QReport {
    pub type_rank: String,
    pub r: usize,
    pub lhs: PoincareSeries,
    pub rhs: PoincareSeries,
    pub ct: PoincareSeries,
    pub weyl_order: usize,
}

impl QReport {
    pub fn passed(&self) -> bool {
        self.lhs.agrees_with(&self.rhs)
    }
}

/// Compares the two Euler characteristic formulas at level `r`.
pub fn verify_q_identity(rs: &RootSystem, r: usize) -> QReport {
    QReport {
        type_rank: rs.type_rank.clone(),
        r,
        lhs: chi_ct_q(rs, r),
        rhs: chi_product_q(rs, r),
        ct: ct_q(rs, r).to_series(&q(1)),
        weyl_order: rs.weyl_order,
    }
}

#[derive(Clone, Debug)]
pub struct QtReport {
    pub type_rank: String,
    pub nq: usize,
    pub nt: usize,
    /// Product side `∏_i ∏_j (1 − q^j t^{m_i})/(1 − q^{j−1} t^{m_i+1})`.
    pub lhs: PoincareSeries,
    /// Constant-term side.
    pub rhs: PoincareSeries,
    /// First differing `(q-exponent, t-exponent, lhs, rhs)`.
    pub first_mismatch: Option<(u32, u32, Rational, Rational)>,
}

impl QtReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Both sides of the (q,t) Euler characteristic modulo `(q^{nq}, t^{nt})`.
/// `nt = 1` is the specialization `t = 0`.
pub fn verify_qt_identity(rs: &RootSystem, nq: usize, nt: usize) -> Result<QtReport, MacdonaldError> {
    if nq < 1 || nt < 1 {
        return Err(MacdonaldError::BadTruncation);
    }
    let one = TruncSeries::monomial(nq, nt, 0, 0, 1);
    // Product side; factors with j > nq are 1 modulo q^{nq}.
    let mut lhs = one.clone();
    for &m in &rs.exponents {
        let m = m as usize;
        for j in 1..=nq {
            let mut num = one.clone();
            num.add_assign(&TruncSeries::monomial(nq, nt, j, m, -1));
            lhs = lhs.mul(&num).mul(&geometric(nq, nt, j - 1, m + 1, 1));
        }
    }
    // Constant-term side.
    let mut pre = one.clone();
    for _ in 0..rs.rank {
        for j in 1..=nq {
            let mut num = one.clone();
            num.add_assign(&TruncSeries::monomial(nq, nt, j, 0, -1));
            pre = pre.mul(&num).mul(&geometric(nq, nt, j - 1, 1, 1));
        }
    }
    let mut factors = Vec::new();
    for j in 1..=nq {
        for a in &rs.roots {
            let num = LatticeSeries::one(rs.rank, nq, nt).add(&LatticeSeries::term(rs.rank, nq, nt, a, j - 1, 0, -1));
            let mut den = LatticeSeries::zero(rs.rank, nq, nt);
            let mut k = 0usize;
            while k * (j - 1) < nq && k < nt {
                let beta: Vec<i64> = a.iter().map(|x| x * k as i64).collect();
                den.add_term(&beta, &TruncSeries::monomial(nq, nt, k * (j - 1), k, 1));
                k += 1;
            }
            factors.push(num.mul(&den));
        }
    }
    let ct = constant_term(&LatticeSeries::product(rs.rank, nq, nt, &factors));
    let rhs = pre.mul(&ct);
    let w = Rational::new(BigInt::one(), BigInt::from(rs.weyl_order));
    let lhs_s = lhs.to_series(&q(1));
    let rhs_s = rhs.to_series(&w);
    let first_mismatch = lhs_s.first_difference(&rhs_s).map(|(e, a, b)| (e[0], e.get(1).copied().unwrap_or(0), a, b));
    Ok(QtReport { type_rank: rs.type_rank.clone(), nq, nt, lhs: lhs_s, rhs: rhs_s, first_mismatch })
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.type_rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rs(n: &str) -> RootSystem {
        RootSystem::new(n).unwrap()
    }

    #[test]
    fn root_system_data() {
        for (n, roots, w) in [("A1", 2, 2), ("A2", 6, 6), ("A3", 12, 24), ("B2", 8, 8), ("G2", 12, 12), ("B3", 18, 48)] {
            let r = rs(n);
            assert_eq!(r.roots.len(), roots, "{n}");
            assert_eq!(r.weyl_order, w, "{n}");
            assert_eq!(r.exponents.iter().map(|&m| m as usize).sum::<usize>(), roots / 2, "{n}");
            assert_eq!(r.exponents.iter().map(|&m| m as usize + 1).product::<usize>(), w, "{n}");
            for a in &r.roots {
                let neg: Vec<i64> = a.iter().map(|x| -x).collect();
                assert!(r.roots.contains(&neg));
                assert!(a.iter().all(|&x| x >= 0) || a.iter().all(|&x| x <= 0));
            }
        }
        assert!(RootSystem::new("E8").is_err());
    }

    #[test]
    fn matches_builtin_lie_algebras() {
        for n in ROOT_SYSTEMS {
            let r = rs(n);
            if let Some(name) = r.lie_algebra_name() {
                let g = crate::lie::builtin(name).unwrap();
                assert_eq!(r.roots.len(), g.dim - g.rank, "{n}");
                assert_eq!(r.exponents, g.exponents, "{n}");
            }
        }
    }

    #[test]
    fn constant_terms() {
        let a1 = rs("A1");
        let a = &a1.roots;
        let f = LatticeSeries::one(1, 1, 1).add(&LatticeSeries::term(1, 1, 1, &a[0], 0, 0, -1));
        let g = LatticeSeries::one(1, 1, 1).add(&LatticeSeries::term(1, 1, 1, &a[1], 0, 0, -1));
        assert_eq!(constant_term(&f.mul(&g)).coeff(0, 0), &BigInt::from(2));
        assert!(constant_term(&LatticeSeries::term(1, 1, 1, &[3], 0, 0, 5)).is_zero());
        assert_eq!(ct_q(&a1, 1).to_series(&q(1)).to_string(), "2 + 2q + 2q^2");
    }

    #[test]
    fn ct_oracle_full_expansion() {
        // Direct expansion of the four factors (1 − q^j x^{±1}), j = 0, 1.
        let mut poly: BTreeMap<(i64, usize), i64> = [((0, 0), 1)].into_iter().collect();
        for (e, j) in [(1, 0), (-1, 0), (1, 1), (-1, 1)] {
            let mut next = BTreeMap::new();
            for (&(x, qq), &c) in &poly {
                *next.entry((x, qq)).or_insert(0) += c;
                *next.entry((x + e, qq + j)).or_insert(0) -= c;
            }
            poly = next;
        }
        let ct: Vec<i64> = (0..3).map(|k| poly.get(&(0, k)).copied().unwrap_or(0)).collect();
        let got = ct_q(&rs("A1"), 1);
        for k in 0..3 {
            assert_eq!(got.coeff(k, 0), &BigInt::from(ct[k]));
        }
    }

    #[test]
    fn chi_products() {
        assert_eq!(chi_product_q(&rs("A1"), 1).to_string(), "1 - q^3");
        assert_eq!(chi_product_q(&rs("A1"), 2).to_string(), "1 - q^4 - q^5 + q^9");
        assert_eq!(chi_product_q(&rs("A2"), 1).to_string(), "1 - q^3 - q^5 + q^8");
        assert_eq!(chi_ct_q(&rs("A1"), 1).to_string(), "1 - q^3");
        assert_eq!(chi_ct_q(&rs("A1"), 0).to_string(), "1");
    }

    #[test]
    fn q_identity_small() {
        for (n, rmax) in [("A1", 3), ("A2", 2), ("B2", 1), ("A3", 1)] {
            for r in 0..=rmax {
                let rep = verify_q_identity(&rs(n), r);
                assert!(rep.passed(), "{n} r={r}: {} vs {}", rep.lhs, rep.rhs);
            }
        }
    }

    #[test]
    fn raw_ct_carries_weyl_order() {
        for (n, r) in [("A1", 1), ("A1", 2), ("A2", 1), ("B2", 1)] {
            let s = rs(n);
            let ct = ct_q(&s, r).to_series(&q(1));
            let rhs = macdonald_q_rhs(&s, r).scale(&q(s.weyl_order as i64));
            assert!(ct.agrees_with(&rhs), "{n} r={r}");
        }
    }

    #[test]
    fn qt_identity() {
        assert!(verify_qt_identity(&rs("A1"), 5, 5).unwrap().passed());
        assert!(verify_qt_identity(&rs("A2"), 4, 4).unwrap().passed());
        // t = 0.
        assert!(verify_qt_identity(&rs("A1"), 6, 1).unwrap().passed());
    }

    fn sample(rank: usize, nq: usize, nt: usize, raw: &[(i64, i64, usize, usize, i64)]) -> LatticeSeries {
        let mut s = LatticeSeries::zero(rank, nq, nt);
        for &(a, b, qe, te, c) in raw {
            let beta: Vec<i64> = [a, b][..rank].to_vec();
            s.add_term(&beta, &TruncSeries::monomial(nq, nt, qe, te, c));
        }
        s
    }

    fn term_strategy() -> impl Strategy<Value = Vec<(i64, i64, usize, usize, i64)>> {
        prop::collection::vec((-2i64..=2, -2i64..=2, 0usize..4, 0usize..3, -3i64..=3), 0..6)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mul_associative_commutative(a in term_strategy(), b in term_strategy(), c in term_strategy()) {
            let (x, y, z) = (sample(2, 4, 3, &a), sample(2, 4, 3, &b), sample(2, 4, 3, &c));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }

        #[test]
        fn ct_is_weyl_invariant(a in term_strategy(), which in 0usize..3) {
            let name = ["A2", "B2", "G2"][which];
            let r = rs(name);
            let x = sample(2, 4, 3, &a);
            // Symmetrize over W-orbits of a product of root factors times x.
            let f = LatticeSeries::one(2, 4, 3).add(&LatticeSeries::term(2, 4, 3, &r.roots[0], 1, 0, -1));
            let y = x.mul(&f);
            for i in 0..2 {
                prop_assert_eq!(constant_term(&y), constant_term(&y.reflect(&r, i)));
            }
        }
    }
}
