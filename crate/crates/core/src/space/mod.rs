//! Finite topological spaces given by an explicit family of open sets.
//!
//! Points are `0..n` with `n <= 64`; subsets are bit masks ([`PointSet`]).
//! Every finite topology is Alexandrov, so besides the extensional open
//! family each space caches the minimal open neighbourhood of every point,
//! which is what the fast derivative uses. The `*_by_definition` methods
//! quantify over the open family directly and serve as oracles.

mod classify;
pub mod enumerate;
mod glp;
mod maps;
mod semantics;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use classify::SpaceReport;
pub use glp::{GlpLevelReport, GlpReport};
pub use maps::{dsum_of_dmaps, DMapFailure, DSum, PointMap};
pub use semantics::{model_check, validates, Countermodel, Valuation};

/// Hard limit imposed by the mask width.
pub const MAX_POINTS: usize = 64;

/// Largest open family we are willing to materialise.
pub const MAX_OPENS: usize = 1 << 20;

/// Limits for the exhaustive checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Points allowed in checks quantifying over all subsets once.
    pub single: usize,
    /// Points allowed in checks quantifying over pairs or tuples of subsets.
    pub double: usize,
    /// Bits allowed in valuation enumeration (points times variables).
    pub valuation_bits: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { single: 16, double: 10, valuation_bits: 24 }
    }
}

impl Caps {
    pub(crate) fn check_single(&self, n: usize) -> Result<()> {
        if n > self.single {
            return Err(Error::CapExceeded { what: "points", value: n, cap: self.single });
        }
        Ok(())
    }

    pub(crate) fn check_double(&self, n: usize) -> Result<()> {
        if n > self.double {
            return Err(Error::CapExceeded { what: "points (doubly quantified check)", value: n, cap: self.double });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn full(n: usize) -> PointSet {
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: usize) -> PointSet {
        PointSet(1u64 << x)
    }

    pub fn from_points(points: impl IntoIterator<Item = usize>) -> PointSet {
        points.into_iter().fold(PointSet::EMPTY, |acc, x| acc | PointSet::singleton(x))
    }

    pub fn contains(self, x: usize) -> bool {
        x < 64 && self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u64 << x;
    }

    pub fn remove(&mut self, x: usize) {
        self.0 &= !(1u64 << x);
    }

    pub fn without(self, x: usize) -> PointSet {
        PointSet(self.0 & !(1u64 << x))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: PointSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn minus(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> PointSet {
        PointSet(!self.0 & PointSet::full(n).0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(x)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `0..n`, in mask order.
    pub fn all(n: usize) -> impl Iterator<Item = PointSet> {
        assert!(n < 64, "cannot enumerate all subsets of {n} points");
        (0..1u64 << n).map(PointSet)
    }

    /// All subsets of `self`.
    pub fn subsets(self) -> impl Iterator<Item = PointSet> {
        let full = self.0;
        let mut cur = Some(0u64);
        std::iter::from_fn(move || {
            let s = cur?;
            cur = if s == full { None } else { Some((s.wrapping_sub(full)) & full) };
            Some(PointSet(s))
        })
    }
}

impl std::ops::BitOr for PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 | rhs.0)
    }
}

impl std::ops::BitAnd for PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & rhs.0)
    }
}

impl std::ops::BitOrAssign for PointSet {
    fn bitor_assign(&mut self, rhs: PointSet) {
        self.0 |= rhs.0;
    }
}

impl std::ops::BitAndAssign for PointSet {
    fn bitand_assign(&mut self, rhs: PointSet) {
        self.0 &= rhs.0;
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&x) = v.iter().find(|&&x| x >= MAX_POINTS) {
            return Err(serde::de::Error::custom(format!("point {x} exceeds mask width")));
        }
        Ok(PointSet::from_points(v))
    }
}

/// Which sets of a strict order are open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderMode {
    /// Up-closed sets: `x in U, x < y => y in U`.
    Upset,
    /// Down-closed sets: `y < x in U => y in U`.
    Left,
}

/// A strict partial order on `0..n`, stored as successor masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictOrder {
    n: usize,
    above: Vec<PointSet>,
}

impl StrictOrder {
    /// `pairs` lists `(i, j)` with `i < j`; the relation must already be
    /// irreflexive and transitive.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let order = Self::raw(n, pairs)?;
        for x in 0..n {
            if order.above[x].contains(x) {
                return Err(Error::NotStrictOrder(format!("{x} < {x}")));
            }
            for y in order.above[x].iter() {
                if !order.above[y].is_subset(order.above[x]) {
                    let z = order.above[y].minus(order.above[x]).iter().next().unwrap_or(0);
                    return Err(Error::NotStrictOrder(format!("{x} < {y} < {z} but not {x} < {z}")));
                }
            }
        }
        Ok(order)
    }

    /// Transitive closure of the given pairs; fails on cycles.
    pub fn generated_by(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut order = Self::raw(n, pairs)?;
        loop {
            let mut changed = false;
            for x in 0..n {
                let mut acc = order.above[x];
                for y in order.above[x].iter() {
                    acc |= order.above[y];
                }
                if acc != order.above[x] {
                    order.above[x] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if let Some(x) = (0..n).find(|&x| order.above[x].contains(x)) {
            return Err(Error::NotStrictOrder(format!("cycle through {x}")));
        }
        Ok(order)
    }

    fn raw(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::CapExceeded { what: "points", value: n, cap: MAX_POINTS });
        }
        let mut above = vec![PointSet::EMPTY; n];
        for &(i, j) in pairs {
            for p in [i, j] {
                if p >= n {
                    return Err(Error::PointOutOfRange { point: p, n_points: n });
                }
            }
            above[i].insert(j);
        }
        Ok(StrictOrder { n, above })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn above(&self, x: usize) -> PointSet {
        self.above[x]
    }

    pub fn below(&self, x: usize) -> PointSet {
        PointSet::from_points((0..self.n).filter(|&y| self.above[y].contains(x)))
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let above = (0..n).map(|i| PointSet::full(n).minus(PointSet::full(i + 1))).collect();
        StrictOrder { n, above }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    n: usize,
    opens: Vec<PointSet>,
    min_nbhd: Vec<PointSet>,
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSpace").field("n", &self.n).field("opens", &self.opens).finish()
    }
}

impl FiniteSpace {
    /// The Alexandrov topology with the given minimal neighbourhoods. Each
    /// `min_nbhd[x]` must contain `x` and be closed under the specialization
    /// preorder it induces; callers in this crate guarantee that.
    pub(crate) fn from_min_nbhds(n: usize, min_nbhd: Vec<PointSet>) -> Result<Self> {
        debug_assert_eq!(min_nbhd.len(), n);
        let mut seen: HashSet<PointSet> = HashSet::new();
        seen.insert(PointSet::EMPTY);
        let mut opens = vec![PointSet::EMPTY];
        for m in &min_nbhd {
            let snapshot = opens.len();
            for i in 0..snapshot {
                let u = opens[i] | *m;
                if seen.insert(u) {
                    opens.push(u);
                    if opens.len() > MAX_OPENS {
                        return Err(Error::CapExceeded { what: "open sets", value: opens.len(), cap: MAX_OPENS });
                    }
                }
            }
        }
        opens.sort();
        Ok(FiniteSpace { n, opens, min_nbhd })
    }

    fn check_n(n: usize) -> Result<()> {
        if n > MAX_POINTS {
            return Err(Error::CapExceeded { what: "points", value: n, cap: MAX_POINTS });
        }
        Ok(())
    }

    fn check_range(n: usize, s: PointSet) -> Result<()> {
        if let Some(p) = s.minus(PointSet::full(n)).iter().next() {
            return Err(Error::PointOutOfRange { point: p, n_points: n });
        }
        Ok(())
    }

    /// Smallest topology containing every set in `subbase`.
    pub fn from_subbase(n: usize, subbase: &[PointSet]) -> Result<Self> {
        Self::check_n(n)?;
        for s in subbase {
            Self::check_range(n, *s)?;
        }
        let full = PointSet::full(n);
        let min_nbhd = (0..n)
            .map(|x| subbase.iter().filter(|s| s.contains(x)).fold(full, |acc, s| acc & *s))
            .collect();
        Self::from_min_nbhds(n, min_nbhd)
    }

    /// Takes an explicit open family and checks the topology axioms.
    pub fn from_opens(n: usize, family: &[PointSet]) -> Result<Self> {
        Self::check_n(n)?;
        for s in family {
            Self::check_range(n, *s)?;
        }
        let mut opens: Vec<PointSet> = family.to_vec();
        opens.sort();
        opens.dedup();
        let has = |s: PointSet| opens.binary_search(&s).is_ok();
        if !has(PointSet::EMPTY) {
            return Err(Error::NotTopology("missing the empty set".into()));
        }
        if !has(PointSet::full(n)) {
            return Err(Error::NotTopology("missing the whole space".into()));
        }
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                if !has(a | b) {
                    return Err(Error::NotTopology(format!("union of {a:?} and {b:?} is not open")));
                }
                if !has(a & b) {
                    return Err(Error::NotTopology(format!("intersection of {a:?} and {b:?} is not open")));
                }
            }
        }
        let space = Self::from_subbase(n, &opens)?;
        debug_assert_eq!(space.opens, opens);
        Ok(space)
    }

    pub fn upset_topology(order: &StrictOrder, mode: OrderMode) -> Result<Self> {
        let n = order.len();
        let min_nbhd = (0..n)
            .map(|x| {
                let reach = match mode {
                    OrderMode::Upset => order.above(x),
                    OrderMode::Left => order.below(x),
                };
                reach | PointSet::singleton(x)
            })
            .collect();
        Self::from_min_nbhds(n, min_nbhd)
    }

    pub fn discrete(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        Self::from_min_nbhds(n, (0..n).map(PointSet::singleton).collect())
    }

    pub fn indiscrete(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        Self::from_min_nbhds(n, vec![PointSet::full(n); n])
    }

    /// The ordinal `n = {0, ..., n-1}` with its left topology (down-sets open).
    pub fn left_chain(n: usize) -> Result<Self> {
        Self::upset_topology(&StrictOrder::chain(n), OrderMode::Left)
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> PointSet {
        PointSet::full(self.n)
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn min_nbhd(&self, x: usize) -> PointSet {
        self.min_nbhd[x]
    }

    /// Membership in the open family.
    pub fn is_open(&self, s: PointSet) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: PointSet) -> bool {
        self.is_open(s.complement(self.n))
    }

    pub fn interior(&self, s: PointSet) -> PointSet {
        PointSet::from_points((0..self.n).filter(|&x| self.min_nbhd[x].is_subset(s)))
    }

    pub fn closure(&self, s: PointSet) -> PointSet {
        PointSet::from_points((0..self.n).filter(|&x| self.min_nbhd[x].intersects(s)))
    }

    /// Limit points of `a`: points whose every neighbourhood meets `a` outside the point.
    pub fn derivative(&self, a: PointSet) -> PointSet {
        let mut out = PointSet::EMPTY;
        for x in 0..self.n {
            if self.min_nbhd[x].without(x).intersects(a) {
                out.insert(x);
            }
        }
        out
    }

    /// Derivative computed by quantifying over the open family.
    pub fn derivative_by_definition(&self, a: PointSet) -> PointSet {
        PointSet::from_points((0..self.n).filter(|&x| {
            self.opens
                .iter()
                .filter(|u| u.contains(x))
                .all(|u| u.without(x).intersects(a))
        }))
    }

    /// Dual of the derivative: `X \ d(X \ a)`.
    pub fn co_derivative(&self, a: PointSet) -> PointSet {
        self.derivative(a.complement(self.n)).complement(self.n)
    }

    /// Points isolated in the whole space.
    pub fn isolated_points(&self) -> PointSet {
        self.derivative(self.points()).complement(self.n)
    }

    /// `d^0 X, d^1 X, ...` up to and including the first repeated or empty set.
    pub fn cb_sequence(&self) -> Vec<PointSet> {
        let mut seq = vec![self.points()];
        loop {
            let last = *seq.last().expect("nonempty");
            if last.is_empty() {
                break;
            }
            let next = self.derivative(last);
            let stuck = next == last;
            seq.push(next);
            if stuck {
                break;
            }
        }
        seq
    }

    /// Least `k` with `d^k X` empty, if the sequence reaches the empty set.
    pub fn cb_rank(&self) -> Option<usize> {
        let seq = self.cb_sequence();
        (seq.last() == Some(&PointSet::EMPTY)).then(|| seq.len() - 1)
    }

    /// `min { k : x not in d^{k+1} X }` for every point, `None` for points of the perfect kernel.
    pub fn ranks(&self) -> Vec<Option<usize>> {
        let seq = self.cb_sequence();
        let stuck = *seq.last().expect("nonempty");
        (0..self.n)
            .map(|x| {
                if stuck.contains(x) {
                    None
                } else {
                    seq.iter().skip(1).position(|s| !s.contains(x))
                }
            })
            .collect()
    }

    pub fn is_scattered(&self) -> bool {
        self.cb_rank().is_some()
    }

    /// `self` refines `coarser`: every open of `coarser` is open here.
    pub fn refines(&self, coarser: &FiniteSpace) -> bool {
        self.n == coarser.n && coarser.opens.iter().all(|u| self.is_open(*u))
    }

    /// Subspace on the points of `s`, renumbered in increasing order.
    pub fn subspace(&self, s: PointSet) -> Result<FiniteSpace> {
        Self::check_range(self.n, s)?;
        let pts = s.to_vec();
        let rename = |set: PointSet| PointSet::from_points(pts.iter().enumerate().filter(|(_, p)| set.contains(**p)).map(|(i, _)| i));
        let min_nbhd = pts.iter().map(|&p| rename(self.min_nbhd[p] & s)).collect();
        Self::from_min_nbhds(pts.len(), min_nbhd)
    }

    /// A bijection `sigma` with `sigma(M(x)) = M(sigma(x))`, if the spaces are homeomorphic.
    pub fn find_homeomorphism(&self, other: &FiniteSpace) -> Option<Vec<usize>> {
        if self.n != other.n || self.opens.len() != other.opens.len() {
            return None;
        }
        let sig = |s: &FiniteSpace, x: usize| {
            let up = s.min_nbhd[x].len();
            let down = (0..s.n).filter(|&y| s.min_nbhd[y].contains(x)).count();
            (up, down)
        };
        let mut assign = vec![usize::MAX; self.n];
        let mut used = PointSet::EMPTY;
        fn go(
            a: &FiniteSpace,
            b: &FiniteSpace,
            x: usize,
            assign: &mut Vec<usize>,
            used: &mut PointSet,
            sig: &dyn Fn(&FiniteSpace, usize) -> (usize, usize),
        ) -> bool {
            if x == a.n {
                return (0..a.n).all(|p| {
                    let img = PointSet::from_points(a.min_nbhd[p].iter().map(|q| assign[q]));
                    img == b.min_nbhd[assign[p]]
                });
            }
            for y in 0..b.n {
                if used.contains(y) || sig(a, x) != sig(b, y) {
                    continue;
                }
                // partial consistency on already assigned points
                let ok = (0..x).all(|p| {
                    a.min_nbhd[p].contains(x) == b.min_nbhd[assign[p]].contains(y)
                        && a.min_nbhd[x].contains(p) == b.min_nbhd[y].contains(assign[p])
                });
                if !ok {
                    continue;
                }
                assign[x] = y;
                used.insert(y);
                if go(a, b, x + 1, assign, used, sig) {
                    return true;
                }
                used.remove(y);
            }
            false
        }
        go(self, other, 0, &mut assign, &mut used, &sig).then_some(assign)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[usize]) -> PointSet {
        PointSet::from_points(v.iter().copied())
    }

    pub(crate) fn fork2() -> FiniteSpace {
        // r = 0, w0 = 1, w1 = 2
        FiniteSpace::upset_topology(&StrictOrder::new(3, &[(0, 1), (0, 2)]).unwrap(), OrderMode::Upset).unwrap()
    }

    pub(crate) fn chain3_upset() -> FiniteSpace {
        // root 0 < mid 1 < leaf 2
        FiniteSpace::upset_topology(&StrictOrder::chain(3), OrderMode::Upset).unwrap()
    }

    /// Closure of a family under pairwise unions and intersections, iterated to a fixpoint.
    fn naive_topology(n: usize, sets: &[PointSet]) -> Vec<PointSet> {
        let mut fam: std::collections::BTreeSet<PointSet> = sets.iter().copied().collect();
        fam.insert(PointSet::EMPTY);
        fam.insert(PointSet::full(n));
        loop {
            let v: Vec<_> = fam.iter().copied().collect();
            let before = fam.len();
            for &a in &v {
                for &b in &v {
                    fam.insert(a | b);
                    fam.insert(a & b);
                }
            }
            if fam.len() == before {
                return fam.into_iter().collect();
            }
        }
    }

    #[test]
    fn subbase_examples() {
        assert_eq!(FiniteSpace::from_subbase(2, &[]).unwrap().opens(), &[ps(&[]), ps(&[0, 1])]);
        assert_eq!(
            FiniteSpace::from_subbase(2, &[ps(&[0])]).unwrap().opens(),
            &[ps(&[]), ps(&[0]), ps(&[0, 1])]
        );
        let chain = FiniteSpace::from_subbase(3, &[ps(&[2]), ps(&[1, 2])]).unwrap();
        let mut expected = vec![ps(&[]), ps(&[2]), ps(&[1, 2]), ps(&[0, 1, 2])];
        expected.sort();
        assert_eq!(chain.opens(), expected.as_slice());
        assert_eq!(naive_topology(3, &[ps(&[2]), ps(&[1, 2])]), expected);
        assert!(matches!(
            FiniteSpace::from_subbase(2, &[ps(&[5])]),
            Err(Error::PointOutOfRange { point: 5, .. })
        ));
    }

    #[test]
    fn subbase_matches_naive_closure() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let k = rng.gen_range(0..=4);
            let sets: Vec<PointSet> = (0..k).map(|_| PointSet(rng.gen::<u64>() & PointSet::full(n).0)).collect();
            let space = FiniteSpace::from_subbase(n, &sets).unwrap();
            assert_eq!(space.opens(), naive_topology(n, &sets).as_slice());
        }
    }

    #[test]
    fn upset_examples() {
        let fork = fork2();
        let mut expected = vec![ps(&[]), ps(&[1]), ps(&[2]), ps(&[1, 2]), ps(&[0, 1, 2])];
        expected.sort();
        assert_eq!(fork.opens(), expected.as_slice());
        let one = FiniteSpace::upset_topology(&StrictOrder::new(1, &[]).unwrap(), OrderMode::Upset).unwrap();
        assert_eq!(one, FiniteSpace::discrete(1).unwrap());
        let left = FiniteSpace::upset_topology(&StrictOrder::chain(3), OrderMode::Left).unwrap();
        let mut expected = vec![ps(&[]), ps(&[0]), ps(&[0, 1]), ps(&[0, 1, 2])];
        expected.sort();
        assert_eq!(left.opens(), expected.as_slice());
    }

    #[test]
    fn strict_order_validation() {
        assert!(matches!(StrictOrder::new(2, &[(0, 0)]), Err(Error::NotStrictOrder(_))));
        assert!(matches!(StrictOrder::new(3, &[(0, 1), (1, 2)]), Err(Error::NotStrictOrder(_))));
        assert!(StrictOrder::new(3, &[(0, 1), (1, 2), (0, 2)]).is_ok());
        assert!(matches!(StrictOrder::generated_by(2, &[(0, 1), (1, 0)]), Err(Error::NotStrictOrder(_))));
        assert_eq!(
            StrictOrder::generated_by(3, &[(0, 1), (1, 2)]).unwrap(),
            StrictOrder::chain(3)
        );
    }

    #[test]
    fn opens_validation() {
        assert!(FiniteSpace::from_opens(2, &[ps(&[]), ps(&[0]), ps(&[0, 1])]).is_ok());
        assert!(matches!(
            FiniteSpace::from_opens(3, &[ps(&[]), ps(&[0]), ps(&[1]), ps(&[0, 1, 2])]),
            Err(Error::NotTopology(_))
        ));
        assert!(matches!(FiniteSpace::from_opens(2, &[ps(&[0, 1])]), Err(Error::NotTopology(_))));
    }

    #[test]
    fn derivative_examples() {
        let sierpinski = FiniteSpace::from_subbase(2, &[ps(&[0])]).unwrap();
        assert_eq!(sierpinski.derivative(ps(&[0])), ps(&[1]));
        assert_eq!(sierpinski.derivative_by_definition(ps(&[0])), ps(&[1]));
        assert_eq!(fork2().derivative(PointSet::EMPTY), PointSet::EMPTY);
        assert_eq!(fork2().derivative(ps(&[0, 1, 2])), ps(&[0]));
    }

    #[test]
    fn fast_derivative_matches_definition() {
        for n in 1..=3 {
            for space in enumerate::all_topologies(n) {
                for a in PointSet::all(n) {
                    assert_eq!(space.derivative(a), space.derivative_by_definition(a));
                }
            }
        }
    }

    #[test]
    fn ranks_of_chain_and_fork() {
        let c = chain3_upset();
        assert_eq!(c.cb_rank(), Some(3));
        assert_eq!(c.ranks(), vec![Some(2), Some(1), Some(0)]);
        assert_eq!(fork2().ranks(), vec![Some(1), Some(0), Some(0)]);
        let ind = FiniteSpace::indiscrete(2).unwrap();
        assert_eq!(ind.cb_rank(), None);
        assert_eq!(ind.ranks(), vec![None, None]);
    }

    #[test]
    fn homeomorphism_search() {
        let a = FiniteSpace::upset_topology(&StrictOrder::new(3, &[(2, 0), (2, 1)]).unwrap(), OrderMode::Upset).unwrap();
        let sigma = a.find_homeomorphism(&fork2()).unwrap();
        assert_eq!(sigma[2], 0);
        assert!(chain3_upset().find_homeomorphism(&fork2()).is_none());
    }

    #[test]
    fn subset_iteration() {
        let s = ps(&[1, 3]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs, vec![ps(&[]), ps(&[1]), ps(&[3]), ps(&[1, 3])]);
        assert_eq!(PointSet::EMPTY.subsets().count(), 1);
    }
}
