//! Finite irreflexive trees as Kripke frames, and the tree calculus built
//! from points, forks and d-sums.
//!
//! A tree is read as the strict order "is a proper ancestor of"; its
//! topological counterpart is the upset space, where a node's minimal
//! neighbourhood is the node together with its descendants.

mod gl;
mod gl3;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::space::{FiniteSpace, OrderMode, PointSet, StrictOrder, Valuation, MAX_POINTS};

pub use gl::{gl_decide, gl_satisfy, GlVerdict, KripkeCountermodel};
pub use gl3::{gl3_brute_force, gl3_decide, Gl3Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct Tree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    parent: Vec<Option<usize>>,
}

impl TryFrom<TreeJson> for Tree {
    type Error = Error;
    fn try_from(j: TreeJson) -> Result<Tree> {
        Tree::new(j.parent)
    }
}

impl From<Tree> for TreeJson {
    fn from(t: Tree) -> TreeJson {
        TreeJson { parent: t.parent }
    }
}

/// Unlabelled rooted tree: the sorted list of child shapes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape(pub Vec<Shape>);

impl Shape {
    pub fn size(&self) -> usize {
        1 + self.0.iter().map(Shape::size).sum::<usize>()
    }
}

/// A tree written with the three constructors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeTerm {
    Point,
    Fork(usize),
    /// Plug the given terms into leaves of the base, keyed by leaf index in the base.
    DSum(Box<TreeTerm>, Vec<(usize, TreeTerm)>),
}

impl TreeTerm {
    pub fn build(&self) -> Result<Tree> {
        match self {
            TreeTerm::Point => Ok(Tree::point()),
            TreeTerm::Fork(n) => Tree::fork(*n),
            TreeTerm::DSum(base, plugs) => {
                let base = base.build()?;
                let mut map = BTreeMap::new();
                for (leaf, term) in plugs {
                    map.insert(*leaf, term.build()?);
                }
                base.dsum(&map)
            }
        }
    }
}

impl Tree {
    /// `parent[x]` is `None` for the root only.
    pub fn new(parent: Vec<Option<usize>>) -> Result<Tree> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::InvalidTree("no nodes".into()));
        }
        if n > MAX_POINTS {
            return Err(Error::CapExceeded { what: "tree nodes", value: n, cap: MAX_POINTS });
        }
        let roots: Vec<usize> = (0..n).filter(|&x| parent[x].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidTree(format!("expected one root, found {}", roots.len())));
        }
        let mut children = vec![Vec::new(); n];
        for (x, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::PointOutOfRange { point: p, n_points: n });
                }
                children[p].push(x);
            }
        }
        let tree = Tree { parent, children, root: roots[0] };
        // every node must reach the root
        for x in 0..n {
            let mut cur = x;
            let mut steps = 0;
            while let Some(p) = tree.parent[cur] {
                cur = p;
                steps += 1;
                if steps > n {
                    return Err(Error::InvalidTree(format!("cycle through node {x}")));
                }
            }
        }
        Ok(tree)
    }

    pub fn point() -> Tree {
        Tree { parent: vec![None], children: vec![vec![]], root: 0 }
    }

    /// Root `0` with leaves `1..=n`.
    pub fn fork(n: usize) -> Result<Tree> {
        if n == 0 {
            return Err(Error::InvalidInput("a fork needs at least one leaf".into()));
        }
        let mut parent = vec![None];
        parent.extend(std::iter::repeat(Some(0)).take(n));
        Tree::new(parent)
    }

    /// Nodes `0 < 1 < ... < n-1`, root `0`.
    pub fn chain(n: usize) -> Result<Tree> {
        Tree::new((0..n).map(|i| i.checked_sub(1)).collect())
    }

    pub fn n_nodes(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, x: usize) -> &[usize] {
        &self.children[x]
    }

    pub fn is_leaf(&self, x: usize) -> bool {
        self.children[x].is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n_nodes()).filter(|&x| self.is_leaf(x)).collect()
    }

    pub fn node_height(&self, x: usize) -> usize {
        self.children[x].iter().map(|&c| 1 + self.node_height(c)).max().unwrap_or(0)
    }

    pub fn height(&self) -> usize {
        self.node_height(self.root)
    }

    pub fn depth(&self, x: usize) -> usize {
        let mut d = 0;
        let mut cur = x;
        while let Some(p) = self.parent[cur] {
            cur = p;
            d += 1;
        }
        d
    }

    /// Proper descendants of `x`.
    pub fn descendants(&self, x: usize) -> PointSet {
        let mut out = PointSet::EMPTY;
        let mut stack = self.children[x].clone();
        while let Some(y) = stack.pop() {
            out.insert(y);
            stack.extend_from_slice(&self.children[y]);
        }
        out
    }

    pub fn strict_order(&self) -> StrictOrder {
        let pairs: Vec<(usize, usize)> = (0..self.n_nodes())
            .flat_map(|x| self.descendants(x).iter().map(move |y| (x, y)))
            .collect();
        StrictOrder::new(self.n_nodes(), &pairs).expect("ancestor relation is a strict order")
    }

    pub fn upset_space(&self) -> FiniteSpace {
        FiniteSpace::upset_topology(&self.strict_order(), OrderMode::Upset).expect("at most 64 nodes")
    }

    /// Replaces each keyed leaf by the root of its plugin. Nodes are numbered
    /// block by block in base order, matching [`FiniteSpace::dsum`].
    pub fn dsum(&self, plugins: &BTreeMap<usize, Tree>) -> Result<Tree> {
        for &leaf in plugins.keys() {
            if leaf >= self.n_nodes() {
                return Err(Error::PointOutOfRange { point: leaf, n_points: self.n_nodes() });
            }
            if !self.is_leaf(leaf) {
                return Err(Error::NotLeaf(leaf));
            }
        }
        let mut offset = Vec::with_capacity(self.n_nodes());
        let mut total = 0;
        for j in 0..self.n_nodes() {
            offset.push(total);
            total += plugins.get(&j).map_or(1, Tree::n_nodes);
        }
        if total > MAX_POINTS {
            return Err(Error::CapExceeded { what: "tree nodes", value: total, cap: MAX_POINTS });
        }
        let mut parent = vec![None; total];
        for j in 0..self.n_nodes() {
            // the node standing for j: itself, or the root of its plugin
            let up = self.parent[j].map(|p| offset[p] + plugins.get(&p).map_or(0, |t| t.root));
            match plugins.get(&j) {
                None => parent[offset[j]] = up,
                Some(t) => {
                    for (i, p) in t.parent.iter().enumerate() {
                        parent[offset[j] + i] = match p {
                            Some(p) => Some(offset[j] + p),
                            None => up,
                        };
                    }
                }
            }
        }
        Tree::new(parent)
    }

    pub fn shape(&self) -> Shape {
        self.shape_at(self.root)
    }

    fn shape_at(&self, x: usize) -> Shape {
        let mut kids: Vec<Shape> = self.children[x].iter().map(|&c| self.shape_at(c)).collect();
        kids.sort();
        Shape(kids)
    }

    /// Root `0`, nodes in preorder.
    pub fn from_shape(shape: &Shape) -> Tree {
        fn go(s: &Shape, up: Option<usize>, parent: &mut Vec<Option<usize>>) {
            let me = parent.len();
            parent.push(up);
            for c in &s.0 {
                go(c, Some(me), parent);
            }
        }
        let mut parent = Vec::new();
        go(shape, None, &mut parent);
        Tree::new(parent).expect("shapes are trees")
    }

    pub fn is_isomorphic(&self, other: &Tree) -> bool {
        self.shape() == other.shape()
    }

    /// The root-pruning decomposition: a root with subtrees `T_i` is a fork
    /// with each non-point `T_i` plugged into leaf `i`.
    pub fn decompose(&self) -> TreeTerm {
        self.term_at(self.root)
    }

    fn term_at(&self, x: usize) -> TreeTerm {
        let kids = &self.children[x];
        if kids.is_empty() {
            return TreeTerm::Point;
        }
        let plugs: Vec<(usize, TreeTerm)> = kids
            .iter()
            .enumerate()
            .filter(|(_, &c)| !self.is_leaf(c))
            .map(|(i, &c)| (i + 1, self.term_at(c)))
            .collect();
        let fork = TreeTerm::Fork(kids.len());
        if plugs.is_empty() {
            fork
        } else {
            TreeTerm::DSum(Box::new(fork), plugs)
        }
    }

    /// DOT rendering; `labels[x]` is appended to node `x` when present.
    pub fn to_dot(&self, labels: &[String]) -> String {
        let mut out = String::from("digraph tree {\n  node [shape=box];\n");
        for x in 0..self.n_nodes() {
            let label = labels.get(x).map(|l| format!("{x}: {l}")).unwrap_or_else(|| x.to_string());
            let _ = writeln!(out, "  n{x} [label=\"{}\"];", label.replace('"', "\\\""));
        }
        for x in 0..self.n_nodes() {
            for c in &self.children[x] {
                let _ = writeln!(out, "  n{x} -> n{c};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Every rooted tree with exactly `n` nodes, one per isomorphism class.
pub fn all_shapes(n: usize) -> Vec<Shape> {
    if n == 0 {
        return vec![];
    }
    let mut level: BTreeSet<Shape> = [Shape(vec![])].into();
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for s in &level {
            for grown in add_leaf_everywhere(s) {
                next.insert(grown);
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

fn add_leaf_everywhere(s: &Shape) -> Vec<Shape> {
    let mut out = Vec::new();
    let mut here = s.0.clone();
    here.push(Shape(vec![]));
    here.sort();
    out.push(Shape(here));
    for (i, c) in s.0.iter().enumerate() {
        for g in add_leaf_everywhere(c) {
            let mut kids = s.0.clone();
            kids[i] = g;
            kids.sort();
            out.push(Shape(kids));
        }
    }
    out
}

/// Every tree with at most `n` nodes, up to isomorphism.
pub fn all_trees(n: usize) -> Vec<Tree> {
    (1..=n).flat_map(all_shapes).map(|s| Tree::from_shape(&s)).collect()
}

/// Uniform random parent choice: node `i` hangs below a node in `0..i`.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Tree {
    let parent = (0..n.max(1)).map(|i| if i == 0 { None } else { Some(rng.gen_range(0..i)) }).collect();
    Tree::new(parent).expect("recursive trees are trees")
}

fn eval_tree(t: &Tree, v: &Valuation, phi: &Formula, below: &[PointSet]) -> Result<PointSet> {
    let n = t.n_nodes();
    let full = PointSet::full(n);
    Ok(match phi {
        Formula::Top => full,
        Formula::Bot => PointSet::EMPTY,
        Formula::Var(name) => v.get(name)?,
        Formula::Not(a) => eval_tree(t, v, a, below)?.complement(n),
        Formula::And(a, b) => eval_tree(t, v, a, below)? & eval_tree(t, v, b, below)?,
        Formula::Or(a, b) => eval_tree(t, v, a, below)? | eval_tree(t, v, b, below)?,
        Formula::Imp(a, b) => eval_tree(t, v, a, below)?.complement(n) | eval_tree(t, v, b, below)?,
        Formula::Dia(0, a) => {
            let s = eval_tree(t, v, a, below)?;
            PointSet::from_points((0..n).filter(|&x| below[x].intersects(s)))
        }
        Formula::Box(0, a) => {
            let s = eval_tree(t, v, a, below)?;
            PointSet::from_points((0..n).filter(|&x| below[x].is_subset(s)))
        }
        Formula::Dia(k, _) | Formula::Box(k, _) => return Err(Error::NonZeroIndex(*k)),
    })
}

/// Relational evaluation: `<0>a` holds at `x` when some proper descendant satisfies `a`.
pub fn model_check_tree(t: &Tree, v: &Valuation, phi: &Formula) -> Result<PointSet> {
    v.check_range(t.n_nodes())?;
    let below: Vec<PointSet> = (0..t.n_nodes()).map(|x| t.descendants(x)).collect();
    eval_tree(t, v, phi, &below)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn forks() {
        let f1 = Tree::fork(1).unwrap();
        assert_eq!(f1, Tree::chain(2).unwrap());
        let f2 = Tree::fork(2).unwrap();
        assert_eq!((f2.n_nodes(), f2.height()), (3, 1));
        let f3 = Tree::fork(3).unwrap();
        assert_eq!((f3.n_nodes(), f3.leaves().len()), (4, 3));
        assert!(Tree::fork(0).is_err());
    }

    #[test]
    fn validation() {
        assert!(Tree::new(vec![]).is_err());
        assert!(Tree::new(vec![None, None]).is_err());
        assert!(Tree::new(vec![None, Some(2), Some(1)]).is_err());
        assert!(Tree::new(vec![Some(1), None]).is_ok());
    }

    #[test]
    fn dsum_examples() {
        let f2 = Tree::fork(2).unwrap();
        let t = f2.dsum(&[(1, f2.clone())].into()).unwrap();
        assert_eq!((t.n_nodes(), t.height()), (5, 2));
        let spaces: BTreeMap<usize, FiniteSpace> = [(1, f2.upset_space())].into();
        assert_eq!(t.upset_space(), f2.upset_space().dsum(&spaces).unwrap().space);
        assert_eq!(Tree::point().dsum(&BTreeMap::new()).unwrap(), Tree::point());
        let f1 = Tree::fork(1).unwrap();
        assert_eq!(f1.dsum(&[(1, f1.clone())].into()).unwrap(), Tree::chain(3).unwrap());
        assert!(matches!(f2.dsum(&[(0, f1)].into()), Err(Error::NotLeaf(0))));
    }

    #[test]
    fn shape_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| all_shapes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48]);
    }

    #[test]
    fn decomposition_rebuilds() {
        for t in all_trees(6) {
            let rebuilt = t.decompose().build().unwrap();
            assert!(rebuilt.is_isomorphic(&t), "{:?}", t.decompose());
        }
    }

    #[test]
    fn model_check_examples() {
        let f2 = Tree::fork(2).unwrap();
        let v = Valuation::new();
        assert_eq!(model_check_tree(&f2, &v, &parse("<0>T").unwrap()).unwrap(), PointSet::singleton(0));
        assert_eq!(model_check_tree(&f2, &v, &Formula::Bot).unwrap(), PointSet::EMPTY);
        assert_eq!(model_check_tree(&f2, &v, &parse("[0]F").unwrap()).unwrap(), PointSet(0b110));
        assert!(matches!(model_check_tree(&f2, &v, &parse("<1>T").unwrap()), Err(Error::NonZeroIndex(1))));
    }

    #[test]
    fn height_is_rank_minus_one() {
        for t in all_trees(6) {
            assert_eq!(t.upset_space().cb_rank(), Some(t.height() + 1));
        }
    }

    #[test]
    fn json_round_trip() {
        let t = Tree::fork(2).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"parent":[null,0,0]}"#);
        assert_eq!(serde_json::from_str::<Tree>(&s).unwrap(), t);
        assert!(serde_json::from_str::<Tree>(r#"{"parent":[null,null]}"#).is_err());
    }
}
