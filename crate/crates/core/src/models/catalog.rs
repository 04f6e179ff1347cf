use std::collections::BTreeMap;
use std::fmt;

use super::lie_expr::{LieExpr, LieTree};
use super::quillen::{QuillenGenerator, QuillenModel};
use super::sullivan::{SullivanGenerator, SullivanModel};
use super::ModelError;
use crate::gca::Element;
use crate::linalg::{frac, q};

/// Spaces with known models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    Sphere(u32),
    Cp(u32),
    Hp(u32),
    Op2,
    /// Eilenberg–MacLane space `K(ℤ, d)`.
    Kz(u32),
    /// `K(ℤ, d) × S^p` with `d` even and `p` odd.
    KzTimesSphere(u32, u32),
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Sphere(n) => write!(f, "sphere({n})"),
            Space::Cp(r) => write!(f, "cp({r})"),
            Space::Hp(r) => write!(f, "hp({r})"),
            Space::Op2 => write!(f, "op2"),
            Space::Kz(d) => write!(f, "kz({d})"),
            Space::KzTimesSphere(d, p) => write!(f, "kzxs({d},{p})"),
        }
    }
}

fn parse_args(s: &str, prefix: &str) -> Option<Vec<u32>> {
    let rest = s.strip_prefix(prefix)?;
    let inner = if let Some(r) = rest.strip_prefix(':') {
        r
    } else {
        rest.strip_prefix('(')?.strip_suffix(')')?
    };
    inner.split(',').map(|x| x.trim().parse().ok()).collect()
}

impl std::str::FromStr for Space {
    type Err = ModelError;

    /// Accepts `sphere:n`, `cp:r`, `hp:r`, `op2`, `kz:d`, `kzxs:d,p`,
    /// `cpinf`, and the parenthesised forms `sphere(n)` etc.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || ModelError::UnsupportedSpace(s.clone());
        let one = |v: Vec<u32>| if v.len() == 1 { Ok(v[0]) } else { Err(bad()) };
        let sp = if s == "op2" {
            Space::Op2
        } else if s == "cpinf" {
            Space::Kz(2)
        } else if let Some(v) = parse_args(&s, "sphere") {
            Space::Sphere(one(v)?)
        } else if let Some(v) = parse_args(&s, "cp") {
            Space::Cp(one(v)?)
        } else if let Some(v) = parse_args(&s, "hp") {
            Space::Hp(one(v)?)
        } else if let Some(v) = parse_args(&s, "kzxs") {
            if v.len() != 2 {
                return Err(bad());
            }
            Space::KzTimesSphere(v[0], v[1])
        } else if let Some(v) = parse_args(&s, "kz") {
            Space::Kz(one(v)?)
        } else {
            return Err(bad());
        };
        sp.check()?;
        Ok(sp)
    }
}

/// `L(v_1, …, v_R)` with `|v_i| = d·i − 1`, weight `i`, and
/// `d v_i = ½ Σ_{j+k=i} [v_j, v_k]`.
pub fn truncated_polynomial_quillen(d: u32, r: u32) -> QuillenModel {
    let generators: Vec<QuillenGenerator> = (1..=r)
        .map(|i| QuillenGenerator { label: format!("v{i}"), degree: (d * i) as i64 - 1, weight: Some(i as i64) })
        .collect();
    let diff = (1..=r as usize)
        .map(|i| {
            let mut e = LieExpr::zero();
            for j in 1..i {
                let k = i - j;
                e.terms.push((frac(1, 2), LieTree::bracket(LieTree::Gen(j - 1), LieTree::Gen(k - 1))));
            }
            e
        })
        .collect();
    QuillenModel { generators, diff, valid_below: None }
}

/// `(ℚ[z, s], ds = z^{r+1})` with `|z| = d`, weights `z ↦ 1`, `s ↦ r+1`.
pub fn truncated_polynomial_sullivan(d: u32, r: u32) -> SullivanModel {
    let generators = vec![
        SullivanGenerator { label: "z".into(), degree: d as i64, weight: vec![1] },
        SullivanGenerator { label: "s".into(), degree: (d * (r + 1)) as i64 - 1, weight: vec![(r + 1) as i64] },
    ];
    let ds: Element = [(vec![r + 1, 0], q(1))].into_iter().collect();
    SullivanModel { generators, diff: vec![Element::new(), ds] }
}

fn free_lie_on_one(degree: i64) -> QuillenModel {
    QuillenModel {
        generators: vec![QuillenGenerator { label: "u".into(), degree, weight: Some(1) }],
        diff: vec![LieExpr::zero()],
        valid_below: None,
    }
}

fn single_generator_sullivan(label: &str, degree: i64) -> SullivanModel {
    SullivanModel {
        generators: vec![SullivanGenerator { label: label.into(), degree, weight: vec![1] }],
        diff: vec![Element::new()],
    }
}

impl Space {
    fn check(&self) -> Result<(), ModelError> {
        let bad = || ModelError::UnsupportedSpace(self.to_string());
        match *self {
            Space::Sphere(n) if n >= 2 => Ok(()),
            Space::Cp(r) | Space::Hp(r) if r >= 1 => Ok(()),
            Space::Op2 => Ok(()),
            Space::Kz(d) if d >= 2 => Ok(()),
            Space::KzTimesSphere(d, p) if d >= 2 && d % 2 == 0 && p >= 3 && p % 2 == 1 => Ok(()),
            _ => Err(bad()),
        }
    }

    /// `(d, r)` when the rational cohomology is `ℚ[z]/(z^{r+1})`, `|z| = d` even.
    pub fn truncated_polynomial_data(&self) -> Option<(u32, u32)> {
        match *self {
            Space::Sphere(n) if n % 2 == 0 => Some((n, 1)),
            Space::Cp(r) => Some((2, r)),
            Space::Hp(r) => Some((4, r)),
            Space::Op2 => Some((8, 2)),
            _ => None,
        }
    }

    /// Odd degree `n` when the space is rationally `S^n`.
    pub fn odd_sphere_degree(&self) -> Option<u32> {
        match *self {
            Space::Sphere(n) | Space::Kz(n) if n % 2 == 1 => Some(n),
            _ => None,
        }
    }

    /// Quillen model valid for homology in degrees `≤ max_degree`.
    /// `None` for spaces only modelled on the Sullivan side.
    pub fn quillen(&self, max_degree: i64) -> Option<QuillenModel> {
        if let Some((d, r)) = self.truncated_polynomial_data() {
            return Some(truncated_polynomial_quillen(d, r));
        }
        if let Some(n) = self.odd_sphere_degree() {
            return Some(free_lie_on_one(n as i64 - 1));
        }
        match *self {
            Space::Kz(d) => {
                // v_{R+1} first affects degree d(R+1) − 2.
                let d = d as i64;
                let mut r = 1;
                while d * (r + 1) - 2 <= max_degree {
                    r += 1;
                }
                let mut m = truncated_polynomial_quillen(d as u32, r as u32);
                m.valid_below = Some(d * (r + 1) - 2);
                Some(m)
            }
            _ => None,
        }
    }

    pub fn sullivan(&self) -> SullivanModel {
        if let Some((d, r)) = self.truncated_polynomial_data() {
            return truncated_polynomial_sullivan(d, r);
        }
        if let Some(n) = self.odd_sphere_degree() {
            return single_generator_sullivan("s", n as i64);
        }
        match *self {
            Space::Kz(d) => single_generator_sullivan("z", d as i64),
            Space::KzTimesSphere(d, p) => SullivanModel {
                generators: vec![
                    SullivanGenerator { label: "z".into(), degree: d as i64, weight: vec![1, 0] },
                    SullivanGenerator { label: "s".into(), degree: p as i64, weight: vec![0, 1] },
                ],
                diff: vec![Element::new(), Element::new()],
            },
            _ => unreachable!("all spaces are covered above"),
        }
    }

    /// Reduced rational Betti numbers in degrees `≤ max_degree`.
    pub fn reduced_betti(&self, max_degree: i64) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        let mut put = |n: i64| {
            if n >= 1 && n <= max_degree {
                *out.entry(n).or_insert(0) += 1;
            }
        };
        if let Some((d, r)) = self.truncated_polynomial_data() {
            for i in 1..=r {
                put((d * i) as i64);
            }
        } else if let Some(n) = self.odd_sphere_degree() {
            put(n as i64);
        } else {
            match *self {
                Space::Kz(d) => {
                    let mut k = d as i64;
                    while k <= max_degree {
                        put(k);
                        k += d as i64;
                    }
                }
                Space::KzTimesSphere(d, p) => {
                    let (d, p) = (d as i64, p as i64);
                    let mut k = 0;
                    while k <= max_degree {
                        if k > 0 {
                            put(k);
                        }
                        put(k + p);
                        k += d;
                    }
                }
                _ => unreachable!(),
            }
        }
        out
    }

    /// Largest `n` such that the space is `n`-connected.
    pub fn connectivity(&self) -> i64 {
        self.reduced_betti(64).keys().next().map_or(64, |&k| k - 1)
    }

    pub fn is_simply_connected(&self) -> bool {
        self.connectivity() >= 1
    }
}

/// Spaces exercised by the property suites.
pub fn full_catalog() -> Vec<Space> {
    vec![
        Space::Sphere(2),
        Space::Sphere(3),
        Space::Sphere(4),
        Space::Sphere(5),
        Space::Cp(2),
        Space::Cp(3),
        Space::Hp(2),
        Space::Op2,
        Space::Kz(2),
        Space::Kz(3),
        Space::KzTimesSphere(2, 3),
    ]
}
