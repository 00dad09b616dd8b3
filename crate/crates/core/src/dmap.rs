//! Onto d-maps from the ordinal `w^h + 1` (order topology) onto a finite tree
//! of height `h` (upset topology).
//!
//! A leaf is the image of the one-point domain `{0}`. A node whose children
//! have domains `D_0, ..., D_{k-1}` gets the cycle `Q = D_0 + ... + D_{k-1}`
//! repeated `w` times, followed by one top point sent to the node itself; its
//! domain is `Q*w + 1`. The point `Q*q + s_i + o`, with `s_i` the partial sum
//! of the first `i` child domains and `o < D_i`, is sent wherever child `i`
//! sends `o`. For a fork this is `f(x) = w_(x mod n)`, `f(w) = r`.
//!
//! The domain is infinite, so the d-map property cannot be checked globally.
//! [`SymbolicDMap::local_check`] verifies continuity, openness and
//! pointwise discreteness at a given point from interval images computed
//! symbolically; the sampling helpers choose boundary-heavy points for it.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kripke::{gl_decide, Tree};
use crate::ordinal::Ordinal;
use crate::space::{PointSet, Valuation};

/// Cofinal probe multipliers: `g + w^(b-1)*m` approaches `g + w^b`.
const PROBES: [u64; 2] = [1_000, 1_000_000];

#[derive(Clone, Debug)]
enum Desc {
    Leaf {
        node: usize,
    },
    Node {
        node: usize,
        children: Vec<Desc>,
        /// `starts[i]` is `s_i`; the last entry is the cycle sum `Q`.
        starts: Vec<Ordinal>,
        top: Ordinal,
        dom: Ordinal,
        subtree: PointSet,
    },
}

impl Desc {
    fn build(t: &Tree, x: usize) -> Desc {
        if t.is_leaf(x) {
            return Desc::Leaf { node: x };
        }
        let children: Vec<Desc> = t.children(x).iter().map(|&c| Desc::build(t, c)).collect();
        let mut starts = vec![Ordinal::zero()];
        for c in &children {
            let next = starts.last().expect("nonempty").add(&c.dom());
            starts.push(next);
        }
        let top = starts.last().expect("nonempty").times_omega();
        let dom = top.succ();
        let subtree = t.descendants(x) | PointSet::singleton(x);
        Desc::Node { node: x, children, starts, top, dom, subtree }
    }

    fn dom(&self) -> Ordinal {
        match self {
            Desc::Leaf { .. } => Ordinal::one(),
            Desc::Node { dom, .. } => dom.clone(),
        }
    }

    fn top(&self) -> Ordinal {
        match self {
            Desc::Leaf { .. } => Ordinal::zero(),
            Desc::Node { top, .. } => top.clone(),
        }
    }

    fn subtree(&self) -> PointSet {
        match self {
            Desc::Leaf { node } => PointSet::singleton(*node),
            Desc::Node { subtree, .. } => *subtree,
        }
    }

    /// Block containing `xi < top`: `(Q*q + s_i, i)`.
    fn locate(&self, xi: &Ordinal) -> Result<(Ordinal, usize)> {
        let Desc::Node { starts, .. } = self else {
            return Err(Error::Internal("leaf has no blocks".into()));
        };
        let cycle = starts.last().expect("nonempty");
        let (q, r) = xi.div_rem_nat(cycle)?;
        let i = starts.partition_point(|s| *s <= r) - 1;
        Ok((cycle.mul_nat(&q).add(&starts[i]), i))
    }

    fn apply(&self, xi: &Ordinal) -> Result<usize> {
        match self {
            Desc::Leaf { node } => Ok(*node),
            Desc::Node { node, children, top, .. } => {
                if xi == top {
                    return Ok(*node);
                }
                let (base, i) = self.locate(xi)?;
                children[i].apply(&xi.sub_left(&base)?)
            }
        }
    }

    fn least_preimage(&self, target: usize) -> Option<Ordinal> {
        match self {
            Desc::Leaf { node } => (*node == target).then(Ordinal::zero),
            Desc::Node { node, children, starts, top, subtree, .. } => {
                if *node == target {
                    return Some(top.clone());
                }
                if !subtree.contains(target) {
                    return None;
                }
                children
                    .iter()
                    .enumerate()
                    .find_map(|(i, c)| c.least_preimage(target).map(|o| starts[i].add(&o)))
            }
        }
    }

    /// Nodes hit by `[a, b)`, where `a < b <= dom`.
    fn image(&self, a: &Ordinal, b: &Ordinal) -> Result<PointSet> {
        match self {
            Desc::Leaf { node } => Ok(PointSet::singleton(*node)),
            Desc::Node { node, starts, top, dom, subtree, .. } => {
                let mut out = PointSet::EMPTY;
                let mut b = b.clone();
                if b == *dom {
                    out.insert(*node);
                    b = top.clone();
                }
                if *a >= b {
                    return Ok(out);
                }
                let below = subtree.without(*node);
                if b == *top {
                    // infinitely many full cycles follow `a`
                    return Ok(out | below);
                }
                let cycle = starts.last().expect("nonempty");
                let (qa, ra) = a.div_rem_nat(cycle)?;
                let (qb, rb) = b.div_rem_nat(cycle)?;
                if qb >= &qa + 2u32 {
                    return Ok(out | below);
                }
                if qb == &qa + 1u32 {
                    out |= self.within_cycle(&ra, cycle)?;
                    if !rb.is_zero() {
                        out |= self.within_cycle(&Ordinal::zero(), &rb)?;
                    }
                    return Ok(out);
                }
                Ok(out | self.within_cycle(&ra, &rb)?)
            }
        }
    }

    /// Nodes hit by the offsets `[x, y)` of one cycle, `x < y <= Q`.
    fn within_cycle(&self, x: &Ordinal, y: &Ordinal) -> Result<PointSet> {
        let Desc::Node { children, starts, .. } = self else {
            return Err(Error::Internal("leaf has no cycle".into()));
        };
        let mut out = PointSet::EMPTY;
        for (i, c) in children.iter().enumerate() {
            let lo = x.max(&starts[i]);
            let hi = y.min(&starts[i + 1]);
            if lo < hi {
                out |= c.image(&lo.sub_left(&starts[i])?, &hi.sub_left(&starts[i])?)?;
            }
        }
        Ok(out)
    }

    /// Least point of `[a, b)` sent to `target`, where `a < b <= dom`.
    fn find_in(&self, target: usize, a: &Ordinal, b: &Ordinal) -> Result<Option<Ordinal>> {
        match self {
            Desc::Leaf { node } => Ok((*node == target && a.is_zero()).then(Ordinal::zero)),
            Desc::Node { node, children, starts, top, dom, subtree } => {
                if !subtree.contains(target) {
                    return Ok(None);
                }
                if *node == target {
                    return Ok((b == dom).then(|| top.clone()));
                }
                let end = b.min(top);
                if a >= end {
                    return Ok(None);
                }
                let cycle = starts.last().expect("nonempty");
                let (qa, _) = a.div_rem_nat(cycle)?;
                // cycle qa + 1 is either cut by `end` or complete, so two cycles suffice
                for q in [qa.clone(), qa + 1u32] {
                    let cycle_base = cycle.mul_nat(&q);
                    for (i, c) in children.iter().enumerate() {
                        if !c.subtree().contains(target) {
                            continue;
                        }
                        let base = cycle_base.add(&starts[i]);
                        let block_end = cycle_base.add(&starts[i + 1]);
                        let lo = a.max(&base);
                        let hi = end.min(&block_end);
                        if lo >= hi {
                            continue;
                        }
                        if let Some(o) = c.find_in(target, &lo.sub_left(&base)?, &hi.sub_left(&base)?)? {
                            return Ok(Some(base.add(&o)));
                        }
                    }
                }
                Ok(None)
            }
        }
    }

    fn boundary_points(&self, budget: usize) -> Vec<Ordinal> {
        match self {
            Desc::Leaf { .. } => vec![Ordinal::zero()],
            Desc::Node { children, starts, top, .. } => {
                let cycle = starts.last().expect("nonempty");
                let k = children.len();
                let inner: Vec<Vec<Ordinal>> = children.iter().map(|c| c.boundary_points(budget / 4 + 1)).collect();
                let mut out = vec![top.clone()];
                for q in 0..=(2 * k + 2) as u64 {
                    let cycle_base = cycle.mul_nat(&BigUint::from(q));
                    for (i, pts) in inner.iter().enumerate() {
                        let base = cycle_base.add(&starts[i]);
                        for p in pts {
                            out.push(base.add(p));
                        }
                    }
                    if out.len() >= budget {
                        break;
                    }
                }
                out.truncate(budget.max(1));
                out
            }
        }
    }

    fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Ordinal {
        match self {
            Desc::Leaf { .. } => Ordinal::zero(),
            Desc::Node { children, starts, top, .. } => {
                if rng.gen_bool(0.1) {
                    return top.clone();
                }
                let q: u64 = match rng.gen_range(0..10) {
                    0 => rng.gen(),
                    1..=3 => rng.gen_range(0..1000),
                    _ => rng.gen_range(0..8),
                };
                let i = rng.gen_range(0..children.len());
                let cycle = starts.last().expect("nonempty");
                cycle.mul_nat(&BigUint::from(q)).add(&starts[i]).add(&children[i].random_point(rng))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SymbolicDMap {
    tree: Tree,
    root: Desc,
}

/// Pull-back of a GL countermodel to an ordinal point.
#[derive(Clone, Debug, Serialize)]
pub struct RefutationRecord {
    pub formula: String,
    pub tree: Tree,
    pub node: usize,
    pub dom: Ordinal,
    pub point: Ordinal,
    /// `v(p)` as node sets; the valuation on the ordinal is their preimage.
    pub valuation: BTreeMap<String, Vec<usize>>,
}

impl SymbolicDMap {
    pub fn build(tree: &Tree) -> SymbolicDMap {
        SymbolicDMap { tree: tree.clone(), root: Desc::build(tree, tree.root()) }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    /// `w^height + 1`.
    pub fn dom(&self) -> Ordinal {
        self.root.dom()
    }

    /// The point sent to the root.
    pub fn top(&self) -> Ordinal {
        self.root.top()
    }

    fn check_in_dom(&self, xi: &Ordinal) -> Result<()> {
        if *xi >= self.dom() {
            return Err(Error::OutsideDomain(xi.to_string(), self.dom().to_string()));
        }
        Ok(())
    }

    pub fn apply(&self, xi: &Ordinal) -> Result<usize> {
        self.check_in_dom(xi)?;
        self.root.apply(xi)
    }

    pub fn least_preimage(&self, node: usize) -> Result<Ordinal> {
        if node >= self.tree.n_nodes() {
            return Err(Error::PointOutOfRange { point: node, n_points: self.tree.n_nodes() });
        }
        let xi = self.root.least_preimage(node).ok_or_else(|| Error::Internal(format!("node {node} has no preimage")))?;
        if self.apply(&xi)? != node {
            return Err(Error::Internal(format!("least preimage {xi} of node {node} maps elsewhere")));
        }
        Ok(xi)
    }

    /// Nodes hit by the half-open interval `[a, b)`; empty when `a >= b`.
    pub fn image(&self, a: &Ordinal, b: &Ordinal) -> Result<PointSet> {
        if *b > self.dom() {
            return Err(Error::OutsideDomain(b.to_string(), self.dom().to_string()));
        }
        if a >= b {
            return Ok(PointSet::EMPTY);
        }
        self.root.image(a, b)
    }

    /// Least point of `[a, b)` sent to `node`.
    pub fn find_in(&self, node: usize, a: &Ordinal, b: &Ordinal) -> Result<Option<Ordinal>> {
        if *b > self.dom() {
            return Err(Error::OutsideDomain(b.to_string(), self.dom().to_string()));
        }
        if a >= b {
            return Ok(None);
        }
        self.root.find_in(node, a, b)
    }

    /// Points `g < xi` whose intervals `(g, xi]` form a neighbourhood base
    /// at `xi` for the purpose of the local checks; empty if `xi` is isolated.
    fn probes(xi: &Ordinal) -> Result<Vec<Ordinal>> {
        let Some((rest, b)) = xi.split_last() else {
            return Ok(vec![]);
        };
        if b.is_zero() {
            return Ok(vec![]);
        }
        let Some((b_prev, last)) = b.split_last().filter(|(_, l)| l.is_zero()) else {
            return Err(Error::InvalidInput(format!("{xi} has limit cofinality exponent; not below w^w")));
        };
        debug_assert!(last.is_zero());
        Ok(PROBES.iter().map(|&m| rest.add(&Ordinal::monomial(b_prev.clone(), m))).collect())
    }

    /// Continuity, openness and pointwise discreteness of the map at `xi`.
    /// Returns a description of the first violated condition.
    pub fn local_check(&self, xi: &Ordinal) -> Result<Option<String>> {
        let t = self.apply(xi)?;
        let up = self.tree.descendants(t) | PointSet::singleton(t);
        let probes = Self::probes(xi)?;
        if probes.is_empty() {
            // isolated point: its image must be open, so a leaf
            return Ok((!self.tree.is_leaf(t)).then(|| format!("isolated point {xi} maps to non-leaf {t}")));
        }
        let next = xi.succ();
        for g in probes {
            let from = g.succ();
            let closed = self.image(&from, &next)?;
            if !closed.is_subset(up) {
                return Ok(Some(format!("not continuous at {xi}: ({g}, {xi}] hits {closed:?} outside {up:?}")));
            }
            if closed != up {
                return Ok(Some(format!("not open at {xi}: ({g}, {xi}] misses part of {up:?}")));
            }
            if self.image(&from, xi)?.contains(t) {
                return Ok(Some(format!("fiber of {t} not discrete at {xi}: ({g}, {xi}) meets it")));
            }
        }
        Ok(None)
    }

    /// `phi` at `xi` in the order topology under the pulled-back valuation.
    ///
    /// `<0>a` at a limit point is decided on the probe interval `(g, xi)`: for
    /// each node hit there, `a` is evaluated at the least point sent to it.
    pub fn holds_at(&self, v: &Valuation, phi: &Formula, xi: &Ordinal) -> Result<bool> {
        Ok(match phi {
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Var(p) => v.get(p)?.contains(self.apply(xi)?),
            Formula::Not(a) => !self.holds_at(v, a, xi)?,
            Formula::And(a, b) => self.holds_at(v, a, xi)? && self.holds_at(v, b, xi)?,
            Formula::Or(a, b) => self.holds_at(v, a, xi)? || self.holds_at(v, b, xi)?,
            Formula::Imp(a, b) => !self.holds_at(v, a, xi)? || self.holds_at(v, b, xi)?,
            Formula::Dia(0, a) => {
                let Some(g) = Self::probes(xi)?.into_iter().next() else {
                    return Ok(false);
                };
                let from = g.succ();
                for u in self.image(&from, xi)?.iter() {
                    let zeta = self.find_in(u, &from, xi)?.ok_or_else(|| Error::Internal(format!("node {u} hit but not found")))?;
                    if self.holds_at(v, a, &zeta)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Box(0, a) => !self.holds_at(v, &Formula::dia(0, (**a).clone().not()), xi)?,
            Formula::Dia(k, _) | Formula::Box(k, _) => return Err(Error::NonZeroIndex(*k)),
        })
    }

    /// Boundary-heavy sample of domain points: every block start for the first
    /// `2k + 3` cycles (recursively), their neighbours, powers `w^j`, the top
    /// point and random points, in that order, deduplicated.
    pub fn sample_points<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<Ordinal> {
        let dom = self.dom();
        let mut out: Vec<Ordinal> = vec![Ordinal::zero(), self.top()];
        for p in self.root.boundary_points(count / 2 + 1) {
            if let Some((prev, last)) = p.split_last() {
                if last.is_zero() {
                    out.push(prev);
                }
            }
            out.push(p.succ());
            out.push(p.succ().succ());
            out.push(p);
        }
        for j in 0..=self.tree.height() as u64 {
            out.push(Ordinal::omega_pow(Ordinal::from(j)));
        }
        out.retain(|p| *p < dom);
        let mut seen = std::collections::HashSet::new();
        out.retain(|p| seen.insert(p.clone()));
        // a finite domain may hold fewer than `count` points
        let mut attempts = 0;
        while out.len() < count && attempts < 20 * count {
            attempts += 1;
            let p = if rng.gen_bool(0.5) {
                self.root.random_point(rng)
            } else {
                Ordinal::random_below_omega_pow(rng, self.tree.height() as u64 + 1, 7)
            };
            if p < dom && seen.insert(p.clone()) {
                out.push(p);
            }
        }
        out
    }

    /// DOT rendering of the tree with least preimages as labels.
    pub fn to_dot(&self) -> Result<String> {
        let labels = (0..self.tree.n_nodes())
            .map(|x| self.least_preimage(x).map(|o| o.to_string()))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.tree.to_dot(&labels))
    }
}

/// The ordinal sum of `alpha` taken `w` times followed by `1`: `alpha*w + 1`.
pub fn dsum_along_omega_plus_one(alpha: &Ordinal) -> Ordinal {
    alpha.times_omega().succ()
}

/// Transfers a GL countermodel to the ordinal `w^h + 1`. `None` when `phi` is provable.
pub fn refute_on_ordinal(phi: &Formula) -> Result<Option<RefutationRecord>> {
    let verdict = gl_decide(phi)?;
    let Some(m) = verdict.countermodel else {
        return Ok(None);
    };
    let f = SymbolicDMap::build(&m.tree);
    let xi = f.least_preimage(m.node)?;
    if f.dom().leading_exponent().as_natural().is_none() {
        return Err(Error::Internal(format!("domain {} is not below w^w", f.dom())));
    }
    if let Some(why) = f.local_check(&xi)? {
        return Err(Error::Internal(why));
    }
    if f.holds_at(&m.valuation, phi, &xi)? {
        return Err(Error::Internal(format!("{phi} holds at {xi} on the ordinal side")));
    }
    let valuation = m.valuation.0.iter().map(|(k, s)| (k.clone(), s.to_vec())).collect();
    Ok(Some(RefutationRecord {
        formula: phi.to_string(),
        tree: m.tree,
        node: m.node,
        dom: f.dom(),
        point: xi,
        valuation,
    }))
}
