//! Truncated multivariate power series with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{format_rational, q, Rational};

/// A power series in named variables, truncated per variable: exponents
/// above `bounds[i]` are dropped. Exponents are non-negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareSeries {
    vars: Vec<String>,
    bounds: Vec<u32>,
    coeffs: BTreeMap<Vec<u32>, Rational>,
}

impl PoincareSeries {
    pub fn zero(vars: &[&str], bounds: &[u32]) -> Self {
        assert_eq!(vars.len(), bounds.len());
        PoincareSeries {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            bounds: bounds.to_vec(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(vars: &[&str], bounds: &[u32]) -> Self {
        let mut s = Self::zero(vars, bounds);
        s.coeffs.insert(vec![0; vars.len()], q(1));
        s
    }

    /// Univariate series in `z` from a degree → dimension table.
    pub fn from_dims(dims: &BTreeMap<i64, usize>, bound: u32) -> Self {
        let mut s = Self::zero(&["z"], &[bound]);
        for (&n, &d) in dims {
            assert!(n >= 0, "negative degree in a Poincaré series");
            s.add_term(&[n as u32], q(d as i64));
        }
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn in_range(&self, exps: &[u32]) -> bool {
        exps.iter().zip(&self.bounds).all(|(e, b)| e <= b)
    }

    pub fn add_term(&mut self, exps: &[u32], c: Rational) {
        assert_eq!(exps.len(), self.vars.len());
        if !self.in_range(exps) || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exps.to_vec()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(exps);
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.coeffs.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.coeffs.iter()
    }

    /// Coefficients of a univariate series as degree → value.
    pub fn univariate_coeffs(&self) -> BTreeMap<u32, Rational> {
        assert_eq!(self.vars.len(), 1);
        self.coeffs.iter().map(|(e, c)| (e[0], c.clone())).collect()
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "series in different variables");
    }

    /// Both operands must share variables; the result uses the smaller bounds.
    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let bounds: Vec<u32> = self.bounds.iter().zip(&other.bounds).map(|(a, b)| *a.min(b)).collect();
        let mut out = PoincareSeries { vars: self.vars.clone(), bounds, coeffs: BTreeMap::new() };
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = PoincareSeries { coeffs: BTreeMap::new(), ..self.clone() };
        for (e, v) in &self.coeffs {
            out.add_term(e, v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let bounds: Vec<u32> = self.bounds.iter().zip(&other.bounds).map(|(a, b)| *a.min(b)).collect();
        let mut out = PoincareSeries { vars: self.vars.clone(), bounds, coeffs: BTreeMap::new() };
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(&e, ca * cb);
            }
        }
        out
    }

    /// Multiplicative inverse; requires constant term ±1 or any nonzero
    /// rational. Computed degree by degree in the total order of exponents.
    pub fn inverse(&self) -> Option<Self> {
        let zero = vec![0; self.vars.len()];
        let c0 = self.coeff(&zero);
        if c0.is_zero() {
            return None;
        }
        let inv0 = Rational::one() / &c0;
        let mut out = PoincareSeries { coeffs: BTreeMap::new(), ..self.clone() };
        // Enumerate all exponent vectors in the box ordered by total degree.
        let mut exps = all_exponents(&self.bounds);
        exps.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
        for e in exps {
            let mut s = if e == zero { q(1) } else { q(0) };
            for (ea, ca) in &self.coeffs {
                if *ea == zero {
                    continue;
                }
                if ea.iter().zip(&e).any(|(a, b)| a > b) {
                    continue;
                }
                let rest: Vec<u32> = e.iter().zip(ea).map(|(b, a)| b - a).collect();
                s -= ca * out.coeff(&rest);
            }
            out.add_term(&e, s * &inv0);
        }
        Some(out)
    }

    /// `∏ (1 + z^d)` over odd degrees and `∏ 1/(1 − z^d)` over even degrees:
    /// the Poincaré series of the free graded-commutative algebra on
    /// generators of the given positive degrees.
    pub fn free_graded_commutative(degrees: &[i64], bound: u32) -> Self {
        let mut s = Self::one(&["z"], &[bound]);
        for &d in degrees {
            assert!(d > 0, "generator degrees must be positive");
            let mut f = Self::one(&["z"], &[bound]);
            if d % 2 == 1 {
                f.add_term(&[d as u32], q(1));
            } else {
                let mut k = d as u32;
                while k <= bound {
                    f.add_term(&[k], q(1));
                    k += d as u32;
                }
            }
            s = s.mul(&f);
        }
        s
    }

    /// First exponent (in ascending order) where the two series differ,
    /// within the common bounds.
    pub fn first_difference(&self, other: &Self) -> Option<(Vec<u32>, Rational, Rational)> {
        self.check_compatible(other);
        let bounds: Vec<u32> = self.bounds.iter().zip(&other.bounds).map(|(a, b)| *a.min(b)).collect();
        let keys: std::collections::BTreeSet<&Vec<u32>> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        for k in keys {
            if k.iter().zip(&bounds).any(|(e, b)| e > b) {
                continue;
            }
            let (a, b) = (self.coeff(k), other.coeff(k));
            if a != b {
                return Some((k.clone(), a, b));
            }
        }
        None
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

fn all_exponents(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |e| {
                    let mut v = p.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

fn monomial_string(vars: &[String], exps: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(exps)
        .filter(|(_, e)| **e > 0)
        .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    parts.join("*")
}

impl fmt::Display for PoincareSeries {
    /// `1 + 3z + 3z^2 + z^3`, ascending by exponent vector.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut order: Vec<(&Vec<u32>, &Rational)> = self.coeffs.iter().collect();
        order.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), (*e).clone()));
        for (e, c) in order {
            let mono = monomial_string(&self.vars, e);
            let neg = c.is_negative();
            let abs = c.abs();
            let body = if mono.is_empty() {
                format_rational(&abs)
            } else if abs.is_one() {
                mono
            } else {
                format!("{}{}", format_rational(&abs), mono)
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_on_three_odd_generators() {
        let s = PoincareSeries::free_graded_commutative(&[1, 1, 1], 10);
        assert_eq!(s.to_string(), "1 + 3z + 3z^2 + z^3");
    }

    #[test]
    fn inverse_of_one_minus_z() {
        let mut s = PoincareSeries::one(&["z"], &[5]);
        s.add_term(&[1], q(-1));
        let inv = s.inverse().unwrap();
        assert_eq!(inv.to_string(), "1 + z + z^2 + z^3 + z^4 + z^5");
        assert_eq!(inv.mul(&s), PoincareSeries::one(&["z"], &[5]));
    }

    #[test]
    fn polynomial_on_even_generators() {
        let s = PoincareSeries::free_graded_commutative(&[4], 8);
        assert_eq!(s.to_string(), "1 + z^4 + z^8");
        let t = PoincareSeries::free_graded_commutative(&[2, 2, 2], 4);
        assert_eq!(t.coeff(&[4]), q(6));
    }

    #[test]
    fn bivariate_display() {
        let mut s = PoincareSeries::zero(&["q", "t"], &[3, 3]);
        s.add_term(&[1, 2], q(-2));
        s.add_term(&[0, 0], q(1));
        assert_eq!(s.to_string(), "1 - 2q*t^2");
    }
}
