//! Tableau for GL over negation normal forms.
//!
//! A saturated label `S` gets, for every `<>a` in `S`, a child labelled
//! `{a, [](~a)} u {b, []b : []b in S}`. The child's boxes strictly extend the
//! parent's (a parent already holding `[](~a)` next to `<>a` closes), so
//! branches are bounded by the number of boxed subformulas.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use serde::Serialize;

use super::{model_check_tree, Tree};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::space::{PointSet, Valuation, MAX_POINTS};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Nnf {
    Top,
    Bot,
    Lit(String, bool),
    And(usize, usize),
    Or(usize, usize),
    Dia(usize),
    Box(usize),
}

#[derive(Default)]
struct Interner {
    nodes: Vec<Nnf>,
    ids: HashMap<Nnf, usize>,
    negs: HashMap<usize, usize>,
}

impl Interner {
    fn intern(&mut self, n: Nnf) -> usize {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(n.clone());
        self.ids.insert(n, id);
        id
    }

    fn nnf(&mut self, phi: &Formula, positive: bool) -> Result<usize> {
        let node = match (phi, positive) {
            (Formula::Top, true) | (Formula::Bot, false) => Nnf::Top,
            (Formula::Top, false) | (Formula::Bot, true) => Nnf::Bot,
            (Formula::Var(v), s) => Nnf::Lit(v.clone(), s),
            (Formula::Not(a), s) => return self.nnf(a, !s),
            (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
                Nnf::And(self.nnf(a, positive)?, self.nnf(b, positive)?)
            }
            (Formula::Or(a, b), true) | (Formula::And(a, b), false) => {
                Nnf::Or(self.nnf(a, positive)?, self.nnf(b, positive)?)
            }
            (Formula::Imp(a, b), true) => Nnf::Or(self.nnf(a, false)?, self.nnf(b, true)?),
            (Formula::Imp(a, b), false) => Nnf::And(self.nnf(a, true)?, self.nnf(b, false)?),
            (Formula::Dia(0, a), true) | (Formula::Box(0, a), false) => Nnf::Dia(self.nnf(a, positive)?),
            (Formula::Box(0, a), true) | (Formula::Dia(0, a), false) => Nnf::Box(self.nnf(a, positive)?),
            (Formula::Dia(k, _), _) | (Formula::Box(k, _), _) => return Err(Error::NonZeroIndex(*k)),
        };
        Ok(self.intern(node))
    }

    fn neg(&mut self, id: usize) -> usize {
        if let Some(&n) = self.negs.get(&id) {
            return n;
        }
        let node = match self.nodes[id].clone() {
            Nnf::Top => Nnf::Bot,
            Nnf::Bot => Nnf::Top,
            Nnf::Lit(v, s) => Nnf::Lit(v, !s),
            Nnf::And(a, b) => Nnf::Or(self.neg(a), self.neg(b)),
            Nnf::Or(a, b) => Nnf::And(self.neg(a), self.neg(b)),
            Nnf::Dia(a) => Nnf::Box(self.neg(a)),
            Nnf::Box(a) => Nnf::Dia(self.neg(a)),
        };
        let n = self.intern(node);
        self.negs.insert(id, n);
        self.negs.insert(n, id);
        n
    }
}

/// A model node: its saturated label and its children.
struct MNode {
    label: BTreeSet<usize>,
    children: Vec<Rc<MNode>>,
}

impl MNode {
    fn holds_below(&self, id: usize) -> bool {
        self.children.iter().any(|c| c.label.contains(&id) || c.holds_below(id))
    }

    fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }
}

struct Prover {
    terms: Interner,
    memo: HashMap<Vec<usize>, Option<Rc<MNode>>>,
}

impl Prover {
    fn clashes(&self, set: &BTreeSet<usize>, id: usize) -> bool {
        match &self.terms.nodes[id] {
            Nnf::Bot => true,
            Nnf::Lit(v, s) => self.terms.ids.get(&Nnf::Lit(v.clone(), !s)).is_some_and(|o| set.contains(o)),
            _ => false,
        }
    }

    /// Propositional saturation followed by the modal step; first open branch wins.
    fn satisfy(&mut self, init: BTreeSet<usize>) -> Option<Rc<MNode>> {
        let key: Vec<usize> = init.iter().copied().collect();
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        if init.iter().any(|&id| self.clashes(&init, id)) {
            self.memo.insert(key, None);
            return None;
        }
        let todo: Vec<usize> = init.iter().copied().collect();
        let result = self.expand(init, todo);
        self.memo.insert(key, result.clone());
        result
    }

    fn expand(&mut self, mut set: BTreeSet<usize>, mut todo: Vec<usize>) -> Option<Rc<MNode>> {
        while let Some(id) = todo.pop() {
            match self.terms.nodes[id].clone() {
                Nnf::And(a, b) => {
                    for x in [a, b] {
                        if set.insert(x) {
                            if self.clashes(&set, x) {
                                return None;
                            }
                            todo.push(x);
                        }
                    }
                }
                Nnf::Or(a, b) => {
                    if set.contains(&a) || set.contains(&b) {
                        continue;
                    }
                    for x in [a, b] {
                        let mut branch = set.clone();
                        branch.insert(x);
                        if self.clashes(&branch, x) {
                            continue;
                        }
                        let mut t = todo.clone();
                        t.push(x);
                        if let Some(m) = self.expand(branch, t) {
                            return Some(m);
                        }
                    }
                    return None;
                }
                _ => {}
            }
        }
        self.modal_step(set)
    }

    fn modal_step(&mut self, set: BTreeSet<usize>) -> Option<Rc<MNode>> {
        let mut boxes = Vec::new();
        let mut dias = Vec::new();
        for &id in &set {
            match self.terms.nodes[id] {
                Nnf::Box(a) => boxes.push(a),
                Nnf::Dia(a) => dias.push(a),
                _ => {}
            }
        }
        let mut children: Vec<Rc<MNode>> = Vec::new();
        for a in dias {
            let done = children.iter().any(|c| c.label.contains(&a) || c.holds_below(a));
            if done {
                continue;
            }
            let not_a = self.terms.neg(a);
            let guard = self.terms.intern(Nnf::Box(not_a));
            if set.contains(&guard) {
                return None;
            }
            let mut child: BTreeSet<usize> = [a, guard].into();
            for &b in &boxes {
                child.insert(b);
                child.insert(self.terms.intern(Nnf::Box(b)));
            }
            children.push(self.satisfy(child)?);
        }
        Some(Rc::new(MNode { label: set, children }))
    }
}

/// A tree model falsifying (or, from [`gl_satisfy`], satisfying) a formula at `node`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KripkeCountermodel {
    pub tree: Tree,
    pub valuation: Valuation,
    pub node: usize,
}

impl KripkeCountermodel {
    /// DOT rendering; each node lists the subformulas of `phi` true there.
    pub fn to_dot(&self, phi: &Formula) -> Result<String> {
        let mut labels = vec![Vec::new(); self.tree.n_nodes()];
        let mut subs: Vec<Formula> = phi.closure().into_iter().collect();
        subs.sort_by_key(|f| (f.size(), f.to_string()));
        for f in subs.iter().filter(|f| !matches!(f, Formula::Top | Formula::Bot)) {
            for x in model_check_tree(&self.tree, &self.valuation, f)?.iter() {
                labels[x].push(f.to_string());
            }
        }
        let labels: Vec<String> = labels.into_iter().map(|l| format!("{{{}}}", l.join(", "))).collect();
        Ok(self.tree.to_dot(&labels))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlVerdict {
    pub provable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<KripkeCountermodel>,
}

fn flatten(m: &MNode, up: Option<usize>, parent: &mut Vec<Option<usize>>, labels: &mut Vec<BTreeSet<usize>>) {
    let me = parent.len();
    parent.push(up);
    labels.push(m.label.clone());
    for c in &m.children {
        flatten(c, Some(me), parent, labels);
    }
}

fn check_single_modality(phi: &Formula) -> Result<()> {
    match phi.max_index() {
        Some(k) if k > 0 => Err(Error::NonZeroIndex(k)),
        _ => Ok(()),
    }
}

/// A finite irreflexive tree model of `phi` at its root, or `None` if `phi` is GL-inconsistent.
pub fn gl_satisfy(phi: &Formula) -> Result<Option<KripkeCountermodel>> {
    check_single_modality(phi)?;
    let mut prover = Prover { terms: Interner::default(), memo: HashMap::new() };
    let goal = prover.terms.nnf(phi, true)?;
    let Some(model) = prover.satisfy([goal].into()) else {
        return Ok(None);
    };
    if model.size() > MAX_POINTS {
        return Err(Error::CapExceeded { what: "model nodes", value: model.size(), cap: MAX_POINTS });
    }
    let mut parent = Vec::new();
    let mut labels = Vec::new();
    flatten(&model, None, &mut parent, &mut labels);
    let tree = Tree::new(parent)?;
    let mut valuation = Valuation::new();
    for name in phi.variables() {
        let lit = prover.terms.ids.get(&Nnf::Lit(name.clone(), true)).copied();
        let set = PointSet::from_points((0..labels.len()).filter(|&x| lit.is_some_and(|l| labels[x].contains(&l))));
        valuation = valuation.with(&name, set);
    }
    let found = KripkeCountermodel { tree, valuation, node: 0 };
    let truth = model_check_tree(&found.tree, &found.valuation, phi)?;
    if !truth.contains(0) {
        return Err(Error::Internal(format!("tableau model does not satisfy {phi}")));
    }
    Ok(Some(minimise(found, phi)?))
}

/// Drops leaves while the root still satisfies `phi`.
fn minimise(mut m: KripkeCountermodel, phi: &Formula) -> Result<KripkeCountermodel> {
    'outer: loop {
        for leaf in m.tree.leaves() {
            if leaf == m.tree.root() {
                continue;
            }
            let keep: Vec<usize> = (0..m.tree.n_nodes()).filter(|&x| x != leaf).collect();
            let mut index = vec![usize::MAX; m.tree.n_nodes()];
            for (i, &x) in keep.iter().enumerate() {
                index[x] = i;
            }
            let parent = keep.iter().map(|&x| m.tree.parent(x).map(|p| index[p])).collect();
            let tree = Tree::new(parent)?;
            let mut valuation = Valuation::new();
            for (name, set) in &m.valuation.0 {
                valuation = valuation.with(name, PointSet::from_points(set.iter().filter(|&x| x != leaf).map(|x| index[x])));
            }
            let node = index[m.node];
            if model_check_tree(&tree, &valuation, phi)?.contains(node) {
                m = KripkeCountermodel { tree, valuation, node };
                continue 'outer;
            }
        }
        return Ok(m);
    }
}

/// Decides GL-provability; refutations come with a verified tree countermodel.
pub fn gl_decide(phi: &Formula) -> Result<GlVerdict> {
    check_single_modality(phi)?;
    let neg = phi.clone().not();
    Ok(match gl_satisfy(&neg)? {
        None => GlVerdict { provable: true, countermodel: None },
        Some(m) => {
            if model_check_tree(&m.tree, &m.valuation, phi)?.contains(m.node) {
                return Err(Error::Internal(format!("countermodel does not refute {phi}")));
            }
            GlVerdict { provable: false, countermodel: Some(m) }
        }
    })
}
