//! Reduced cyclic homology of small Sullivan algebras computed on the
//! Connes complex `C^λ(Ā)`, compared with the sum over Hodge pieces of the
//! Kähler-form computation.

use std::collections::{BTreeMap, BTreeSet};

use rephom::gca::{FreeGca, Monomial};
use rephom::hodge::FormComplex;
use rephom::linalg::{q, rank, Rational, SparseMatrix};
use rephom::models::{truncated_polynomial_sullivan, Space, SullivanModel};

type Word = Vec<Monomial>;
type Chain = BTreeMap<Word, Rational>;

struct Connes {
    alg: FreeGca,
    model: SullivanModel,
    max_weight: i64,
}

fn push(c: &mut Chain, w: Word, x: Rational) {
    let e = c.entry(w.clone()).or_insert_with(|| q(0));
    *e += x;
    if *e == q(0) {
        c.remove(&w);
    }
}

impl Connes {
    fn parity(&self, m: &Monomial) -> bool {
        self.alg.is_odd_monomial(m)
    }

    fn weight(&self, m: &Monomial) -> i64 {
        self.model.monomial_weight(m).iter().sum()
    }

    fn word_weight(&self, w: &Word) -> i64 {
        w.iter().map(|m| self.weight(m)).sum()
    }

    /// Homological degree: letters sit in degree `−|a|`, plus word length − 1.
    fn degree(&self, w: &Word) -> i64 {
        w.iter().map(|m| -self.alg.degree(m)).sum::<i64>() + w.len() as i64 - 1
    }

    fn letters(&self) -> Vec<Monomial> {
        let costs: Vec<i64> = self.model.generators.iter().map(|g| g.weight.iter().sum()).collect();
        self.alg.enumerate(&costs, self.max_weight).into_iter().filter(|m| self.weight(m) > 0).collect()
    }

    fn words(&self) -> Vec<Word> {
        let letters = self.letters();
        let mut out = Vec::new();
        let mut frontier: Vec<Word> = letters.iter().map(|l| vec![l.clone()]).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                let ww = self.word_weight(w);
                for l in &letters {
                    if ww + self.weight(l) <= self.max_weight {
                        let mut v = w.clone();
                        v.push(l.clone());
                        next.push(v);
                    }
                }
            }
            out.extend(frontier);
            frontier = next;
        }
        out
    }

    /// Cyclic operator `t(a_0…a_n) = ± a_n a_0 … a_{n−1}` with the sign
    /// `(−1)^{n + |a_n|(|a_0|+…+|a_{n−1}|)}`.
    fn rotate(&self, w: &Word) -> (Word, bool) {
        let n = w.len() - 1;
        let last = self.parity(&w[n]);
        let rest = w[..n].iter().filter(|m| self.parity(m)).count() % 2 == 1;
        let neg = (n % 2 == 1) ^ (last && rest);
        let mut v = vec![w[n].clone()];
        v.extend_from_slice(&w[..n]);
        (v, neg)
    }

    /// Class of a word in `C/(1 − t)`: the orbit minimum with its sign, or
    /// `None` when the word is identified with its own negative.
    fn canonical(&self, w: &Word) -> Option<(Word, bool)> {
        let mut seen: BTreeMap<Word, bool> = BTreeMap::new();
        let mut cur = (w.clone(), false);
        loop {
            if let Some(&s) = seen.get(&cur.0) {
                if s != cur.1 {
                    return None;
                }
                break;
            }
            seen.insert(cur.0.clone(), cur.1);
            let (v, neg) = self.rotate(&cur.0);
            cur = (v, cur.1 ^ neg);
        }
        let (m, s) = seen.into_iter().next().unwrap();
        Some((m, s))
    }

    fn reduce(&self, c: &Chain) -> Chain {
        let mut out = Chain::new();
        for (w, x) in c {
            if let Some((m, neg)) = self.canonical(w) {
                push(&mut out, m, if neg { -x.clone() } else { x.clone() });
            }
        }
        out
    }

    /// Hochschild boundary.
    fn b(&self, w: &Word) -> Chain {
        let mut out = Chain::new();
        let n = w.len() - 1;
        for i in 0..n {
            if let Some((p, neg)) = self.alg.mul_mono(&w[i], &w[i + 1]) {
                let mut v = w[..i].to_vec();
                v.push(p);
                v.extend_from_slice(&w[i + 2..]);
                let s = (i % 2 == 1) ^ neg;
                push(&mut out, v, if s { q(-1) } else { q(1) });
            }
        }
        if n >= 1 {
            let last = self.parity(&w[n]);
            let rest = w[..n].iter().filter(|m| self.parity(m)).count() % 2 == 1;
            if let Some((p, neg)) = self.alg.mul_mono(&w[n], &w[0]) {
                let mut v = vec![p];
                v.extend_from_slice(&w[1..n]);
                let s = (n % 2 == 1) ^ (last && rest) ^ neg;
                push(&mut out, v, if s { q(-1) } else { q(1) });
            }
        }
        out
    }

    /// Internal differential with the Koszul sign of passing earlier letters.
    fn delta(&self, w: &Word) -> Chain {
        let mut out = Chain::new();
        let mut sign_odd = false;
        for i in 0..w.len() {
            let e = rephom::gca::singleton(w[i].clone());
            let d = self.model.d(&e);
            for (m, c) in d {
                if self.weight(&m) == 0 {
                    continue;
                }
                let mut v = w.clone();
                v[i] = m;
                push(&mut out, v, if sign_odd { -c } else { c });
            }
            sign_odd ^= self.parity(&w[i]);
        }
        out
    }

    fn total(&self, w: &Word) -> Chain {
        // b and δ commute, so δ is twisted by the tensor length.
        let mut out = self.b(w);
        let odd = (w.len() - 1) % 2 == 1;
        for (v, c) in self.delta(w) {
            push(&mut out, v, if odd { -c } else { c });
        }
        out
    }

    /// Dimensions of `HC̄` by (weight, homological degree).
    fn homology(&self) -> BTreeMap<(i64, i64), usize> {
        let mut classes: BTreeMap<(i64, i64), BTreeSet<Word>> = BTreeMap::new();
        for w in self.words() {
            if let Some((m, _)) = self.canonical(&w) {
                classes.entry((self.word_weight(&m), self.degree(&m))).or_default().insert(m);
            }
        }
        let index: BTreeMap<(i64, i64), Vec<Word>> = classes.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect();
        let mat = |k: &(i64, i64)| -> Option<SparseMatrix> {
            let src = index.get(k)?;
            let tgt_key = (k.0, k.1 - 1);
            let empty = Vec::new();
            let tgt = index.get(&tgt_key).unwrap_or(&empty);
            let pos: BTreeMap<&Word, usize> = tgt.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let mut trip = Vec::new();
            for (j, w) in src.iter().enumerate() {
                for (v, c) in self.reduce(&self.total(w)) {
                    trip.push((pos[&v], j, c));
                }
            }
            Some(SparseMatrix::from_triplets(tgt.len(), src.len(), trip))
        };
        let mut out = BTreeMap::new();
        for (k, basis) in &index {
            let r_out = mat(k).map(|m| rank(&m)).unwrap_or(0);
            let r_in = mat(&(k.0, k.1 + 1)).map(|m| rank(&m)).unwrap_or(0);
            let h = basis.len() - r_out - r_in;
            if h > 0 {
                out.insert(*k, h);
            }
        }
        out
    }

    fn square_is_zero(&self) -> bool {
        self.words().iter().all(|w| {
            let once = self.reduce(&self.total(w));
            let mut twice = Chain::new();
            for (v, c) in once {
                for (u, x) in self.total(&v) {
                    push(&mut twice, u, c.clone() * x);
                }
            }
            self.reduce(&twice).is_empty()
        })
    }
}

fn hodge_total(model: &SullivanModel, max_weight: i64) -> BTreeMap<(i64, i64), usize> {
    let fc = FormComplex::new(model, max_weight).unwrap();
    let mut out = BTreeMap::new();
    for m in 0..=(max_weight as u32) {
        for b in fc.hodge_cyclic(m) {
            *out.entry((b.weight.iter().sum(), b.degree)).or_insert(0) += b.dim();
        }
    }
    out
}

fn compare(model: SullivanModel, max_weight: i64) {
    let c = Connes { alg: model.algebra(), model: model.clone(), max_weight };
    assert!(c.square_is_zero());
    let connes = c.homology();
    let hodge = hodge_total(&model, max_weight);
    assert_eq!(connes, hodge);
}

#[test]
fn free_even_polynomial() {
    compare(Space::Kz(2).sullivan(), 4);
}

#[test]
fn free_two_generators() {
    compare(Space::KzTimesSphere(2, 3).sullivan(), 4);
}

#[test]
fn truncated_a1() {
    compare(truncated_polynomial_sullivan(2, 1), 4);
}

#[test]
fn odd_sphere() {
    compare(Space::Sphere(3).sullivan(), 4);
}
