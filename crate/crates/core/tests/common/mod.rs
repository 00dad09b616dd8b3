//! Literal oracles, written against the definitions and sharing no code with
//! the library beyond its data types.

#![allow(dead_code)]

use std::collections::BTreeMap;

use provtop::space::FiniteSpace;
use provtop::{Formula, Ordinal};

pub type Mask = u64;

pub fn bits(n: usize) -> impl Iterator<Item = usize> + Clone {
    0..n
}

pub fn full(n: usize) -> Mask {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn opens_of(x: &FiniteSpace) -> Vec<Mask> {
    x.opens().iter().map(|o| o.0).collect()
}

/// `x in d(A)` iff every open around `x` meets `A \ {x}`.
pub fn literal_derivative(n: usize, opens: &[Mask], a: Mask) -> Mask {
    let mut out = 0;
    for x in bits(n) {
        let b = 1u64 << x;
        if opens.iter().filter(|&&u| u & b != 0).all(|&u| u & a & !b != 0) {
            out |= b;
        }
    }
    out
}

pub fn is_open(opens: &[Mask], s: Mask) -> bool {
    opens.contains(&s)
}

/// Closes a family under finite unions and intersections, adding the empty and full sets.
pub fn topology_generated(n: usize, family: &[Mask]) -> Vec<Mask> {
    let mut meets: Vec<Mask> = vec![full(n)];
    for &s in family {
        let extra: Vec<Mask> = meets.iter().map(|&m| m & s).collect();
        meets.extend(extra);
        meets.sort_unstable();
        meets.dedup();
    }
    let mut opens: Vec<Mask> = vec![0];
    for &m in &meets {
        let extra: Vec<Mask> = opens.iter().map(|&o| o | m).collect();
        opens.extend(extra);
        opens.sort_unstable();
        opens.dedup();
    }
    opens
}

/// The primality condition read literally, over all pairs of opens.
pub fn literal_primal(n: usize, opens: &[Mask]) -> bool {
    bits(n).all(|x| {
        let b = 1u64 << x;
        opens.iter().all(|&u| {
            opens.iter().all(|&v| !is_open(opens, b | u | v) || is_open(opens, b | u) || is_open(opens, b | v))
        })
    })
}

/// Truth set of a formula in a polytopological space with a named valuation.
pub fn eval_sets(n: usize, tops: &[Vec<Mask>], v: &BTreeMap<String, Mask>, phi: &Formula) -> Mask {
    let all = full(n);
    let e = |f: &Formula| eval_sets(n, tops, v, f);
    match phi {
        Formula::Top => all,
        Formula::Bot => 0,
        Formula::Var(p) => v[p],
        Formula::Not(a) => all & !e(a),
        Formula::And(a, b) => e(a) & e(b),
        Formula::Or(a, b) => e(a) | e(b),
        Formula::Imp(a, b) => all & (!e(a) | e(b)),
        Formula::Dia(i, a) => literal_derivative(n, &tops[*i as usize], e(a)),
        Formula::Box(i, a) => all & !literal_derivative(n, &tops[*i as usize], all & !e(a)),
    }
}

/// Whether `phi` holds everywhere under every valuation of its variables.
pub fn literal_valid(n: usize, tops: &[Vec<Mask>], phi: &Formula) -> bool {
    let vars = phi.variables();
    let total = n * vars.len();
    assert!(total <= 24, "valuation scan too large");
    (0..1u64 << total).all(|code| {
        let v: BTreeMap<String, Mask> = vars
            .iter()
            .enumerate()
            .map(|(k, name)| (name.clone(), (code >> (k * n)) & full(n)))
            .collect();
        eval_sets(n, tops, &v, phi) == full(n)
    })
}

/// Trees as parent arrays with `parent[i] < i`; every finite rooted tree has such a labelling.
pub fn parent_arrays(n: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![vec![None]];
    for size in 1..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..size).map(move |q| {
                    let mut p = p.clone();
                    p.push(Some(q));
                    p
                })
            })
            .collect();
    }
    out
}

/// Proper descendants of each node.
pub fn descendants(parent: &[Option<usize>]) -> Vec<Mask> {
    let n = parent.len();
    let mut desc = vec![0u64; n];
    for x in (0..n).rev() {
        if let Some(p) = parent[x] {
            let add = desc[x] | 1 << x;
            let mut cur = Some(p);
            while let Some(c) = cur {
                desc[c] |= add;
                cur = parent[c];
            }
        }
    }
    desc
}

/// Kripke truth set over a tree given by proper descendants.
pub fn eval_tree(desc: &[Mask], v: &BTreeMap<String, Mask>, phi: &Formula) -> Mask {
    let n = desc.len();
    let all = full(n);
    let e = |f: &Formula| eval_tree(desc, v, f);
    let dia = |m: Mask| (0..n).filter(|&x| desc[x] & m != 0).fold(0, |acc, x| acc | 1 << x);
    match phi {
        Formula::Top => all,
        Formula::Bot => 0,
        Formula::Var(p) => v[p],
        Formula::Not(a) => all & !e(a),
        Formula::And(a, b) => e(a) & e(b),
        Formula::Or(a, b) => e(a) | e(b),
        Formula::Imp(a, b) => all & (!e(a) | e(b)),
        Formula::Dia(_, a) => dia(e(a)),
        Formula::Box(_, a) => all & !dia(all & !e(a)),
    }
}

/// A tree of at most `max_nodes` nodes and a valuation refuting `phi`.
pub fn tree_refutation(phi: &Formula, max_nodes: usize) -> Option<(Vec<Option<usize>>, BTreeMap<String, Mask>)> {
    let vars = phi.variables();
    for n in 1..=max_nodes {
        for parent in parent_arrays(n) {
            let desc = descendants(&parent);
            for code in 0..1u64 << (n * vars.len()) {
                let v: BTreeMap<String, Mask> = vars
                    .iter()
                    .enumerate()
                    .map(|(k, name)| (name.clone(), (code >> (k * n)) & full(n)))
                    .collect();
                if eval_tree(&desc, &v, phi) != full(n) {
                    return Some((parent, v));
                }
            }
        }
    }
    None
}

/// Ordinals below `w^w` as coefficient vectors indexed by exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Small(pub Vec<u128>);

impl Small {
    pub fn from_ordinal(a: &Ordinal) -> Option<Small> {
        let mut coefs = Vec::new();
        for t in a.terms() {
            let e = t.exp.as_u64()? as usize;
            let c: u128 = t.coef.to_string().parse().ok()?;
            if coefs.len() <= e {
                coefs.resize(e + 1, 0);
            }
            coefs[e] = c;
        }
        Some(Small(coefs))
    }

    fn trimmed(mut self) -> Small {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn cmp(&self, other: &Small) -> std::cmp::Ordering {
        let len = self.0.len().max(other.0.len());
        for e in (0..len).rev() {
            let (a, b) = (self.0.get(e).copied().unwrap_or(0), other.0.get(e).copied().unwrap_or(0));
            if a != b {
                return a.cmp(&b);
            }
        }
        std::cmp::Ordering::Equal
    }

    pub fn add(&self, other: &Small) -> Small {
        let Some(lead) = other.0.iter().rposition(|&c| c != 0) else {
            return self.clone();
        };
        let mut out: Vec<u128> = other.0.clone();
        if self.0.len() > out.len() {
            out.resize(self.0.len(), 0);
        }
        out[lead] += self.0.get(lead).copied().unwrap_or(0);
        for e in lead + 1..self.0.len() {
            out[e] = self.0[e];
        }
        Small(out).trimmed()
    }

    /// Exponent of the last term; 0 for 0.
    pub fn ell(&self) -> u64 {
        self.0.iter().position(|&c| c != 0).unwrap_or(0) as u64
    }
}
