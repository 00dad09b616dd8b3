//! GL.3 via finite strict linear orders.
//!
//! Truth at a point of a chain depends only on its own valuation and on which
//! closure formulas are true, and which false, somewhere above it. That
//! "seen above" state only grows towards the root, so a breadth-first search
//! over reachable states from the top point down is exhaustive.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::{model_check_tree, KripkeCountermodel, Tree};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::space::{PointSet, Valuation};

const MAX_VARS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gl3Verdict {
    pub provable: bool,
    /// Chain length bound `|closure| + 1`.
    pub chain_bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<KripkeCountermodel>,
}

type State = BTreeSet<usize>;

struct Closure {
    forms: Vec<Formula>,
    index: HashMap<Formula, usize>,
    vars: Vec<String>,
}

impl Closure {
    fn new(phi: &Formula) -> Result<Closure> {
        if let Some(k) = phi.max_index().filter(|&k| k > 0) {
            return Err(Error::NonZeroIndex(k));
        }
        let mut forms: Vec<Formula> = phi.closure().into_iter().collect();
        forms.sort_by_key(|f| f.size());
        let index = forms.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let vars = phi.variables();
        if vars.len() > MAX_VARS {
            return Err(Error::CapExceeded { what: "variables", value: vars.len(), cap: MAX_VARS });
        }
        Ok(Closure { forms, index, vars })
    }

    /// Truth of every closure formula at a point with valuation bits `val` and state `above`.
    fn point_type(&self, above: &State, val: u32) -> Vec<bool> {
        let mut truth = vec![false; self.forms.len()];
        for (i, f) in self.forms.iter().enumerate() {
            let t = |g: &Formula| truth[self.index[g]];
            truth[i] = match f {
                Formula::Top => true,
                Formula::Bot => false,
                Formula::Var(v) => {
                    let k = self.vars.iter().position(|x| x == v).expect("closure variable");
                    val >> k & 1 == 1
                }
                Formula::Not(a) => !t(a),
                Formula::And(a, b) => t(a) && t(b),
                Formula::Or(a, b) => t(a) || t(b),
                Formula::Imp(a, b) => !t(a) || t(b),
                Formula::Dia(_, a) => above.contains(&(2 * self.index[&**a] + 1)),
                Formula::Box(_, a) => !above.contains(&(2 * self.index[&**a])),
            };
        }
        truth
    }
}

fn chain_model(cl: &Closure, vals: &[u32]) -> Result<KripkeCountermodel> {
    let tree = Tree::chain(vals.len())?;
    let mut valuation = Valuation::new();
    for (k, name) in cl.vars.iter().enumerate() {
        let set = PointSet::from_points((0..vals.len()).filter(|&i| vals[i] >> k & 1 == 1));
        valuation = valuation.with(name, set);
    }
    Ok(KripkeCountermodel { tree, valuation, node: 0 })
}

/// Decides validity of `phi` on all finite strict linear orders.
pub fn gl3_decide(phi: &Formula) -> Result<Gl3Verdict> {
    let cl = Closure::new(phi)?;
    let goal = cl.index[phi];
    let chain_bound = cl.forms.len() + 1;
    let n_vals = 1u32 << cl.vars.len();
    // state -> (predecessor state, valuation of the point that produced it)
    let mut back: HashMap<State, Option<(State, u32)>> = HashMap::new();
    let mut queue = VecDeque::new();
    back.insert(State::new(), None);
    queue.push_back(State::new());
    while let Some(above) = queue.pop_front() {
        for val in 0..n_vals {
            let ty = cl.point_type(&above, val);
            if !ty[goal] {
                // root first, then the points above it from nearest to topmost
                let mut vals = vec![val];
                let mut cur = above.clone();
                while let Some(Some((prev, v))) = back.get(&cur) {
                    vals.push(*v);
                    cur = prev.clone();
                }
                let m = chain_model(&cl, &vals)?;
                if model_check_tree(&m.tree, &m.valuation, phi)?.contains(0) {
                    return Err(Error::Internal(format!("chain does not refute {phi}")));
                }
                return Ok(Gl3Verdict { provable: false, chain_bound, countermodel: Some(m) });
            }
            let mut next = above.clone();
            next.extend(ty.iter().enumerate().map(|(i, &b)| 2 * i + b as usize));
            if !back.contains_key(&next) {
                back.insert(next.clone(), Some((above.clone(), val)));
                queue.push_back(next);
            }
        }
    }
    Ok(Gl3Verdict { provable: true, chain_bound, countermodel: None })
}

/// Tries every chain of length at most `max_len` under every valuation.
pub fn gl3_brute_force(phi: &Formula, max_len: usize, max_bits: usize) -> Result<Option<KripkeCountermodel>> {
    let cl = Closure::new(phi)?;
    for len in 1..=max_len {
        let bits = len * cl.vars.len();
        if bits > max_bits {
            return Err(Error::CapExceeded { what: "valuation bits", value: bits, cap: max_bits });
        }
        let per = cl.vars.len();
        for code in 0..1u64 << bits {
            let vals: Vec<u32> = (0..len).map(|i| ((code >> (i * per)) & ((1 << per) - 1)) as u32).collect();
            let m = chain_model(&cl, &vals)?;
            if !model_check_tree(&m.tree, &m.valuation, phi)?.contains(0) {
                return Ok(Some(m));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::super::gl_decide;
    use super::*;
    use crate::formula::{dot3, lob, parse};

    #[test]
    fn linearity_is_a_theorem() {
        let f = dot3(Formula::var("p"), Formula::var("q"));
        assert!(gl3_decide(&f).unwrap().provable);
        assert!(!gl_decide(&f).unwrap().provable);
        assert!(gl3_decide(&lob(0, Formula::var("p"))).unwrap().provable);
    }

    #[test]
    fn refutations_are_chains() {
        let v = gl3_decide(&parse("p -> [0]p").unwrap()).unwrap();
        let m = v.countermodel.unwrap();
        assert_eq!(m.tree, Tree::chain(2).unwrap());
        let v = gl3_decide(&parse("<0><0>T -> <0><0><0>T").unwrap()).unwrap();
        assert_eq!(v.countermodel.unwrap().tree.n_nodes(), 3);
    }

    #[test]
    fn agrees_with_brute_force() {
        for text in ["<0>p & <0>q -> <0>(p & q)", "[0]p | [0]~p", "<0>T -> <0>[0]F", "[0]([0]p -> q) | [0]([0]q -> p)"] {
            let f = parse(text).unwrap();
            let v = gl3_decide(&f).unwrap();
            let b = gl3_brute_force(&f, v.chain_bound.min(5), 24).unwrap();
            assert_eq!(v.provable, b.is_none(), "{text}");
        }
    }
}
