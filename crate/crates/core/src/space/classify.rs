use serde::{Deserialize, Serialize};

use super::{Caps, FiniteSpace, PointSet};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub n_points: usize,
    pub n_opens: usize,
    pub scattered: bool,
    pub t_d: bool,
    pub t1: bool,
    pub discrete: bool,
    pub magari: bool,
    pub primal: bool,
    /// Zero when the space is not scattered.
    pub cb_rank: usize,
    /// `None` marks points of the perfect kernel.
    pub rank_of_point: Vec<Option<usize>>,
}

impl FiniteSpace {
    /// Runs every check exhaustively; `magari` is decided from the axioms, not from scatteredness.
    pub fn classify(&self, caps: &Caps) -> Result<SpaceReport> {
        caps.check_single(self.n)?;
        let cb_rank = self.cb_rank();
        Ok(SpaceReport {
            n_points: self.n,
            n_opens: self.opens.len(),
            scattered: cb_rank.is_some(),
            t_d: self.is_td(),
            t1: self.is_t1(),
            discrete: self.is_discrete(),
            magari: self.magari_violation().is_none(),
            primal: self.is_primal(),
            cb_rank: cb_rank.unwrap_or(0),
            rank_of_point: self.ranks(),
        })
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.n).all(|x| self.min_nbhd[x] == PointSet::singleton(x))
    }

    /// Every singleton is closed.
    pub fn is_t1(&self) -> bool {
        (0..self.n).all(|x| self.is_closed(PointSet::singleton(x)))
    }

    /// Every derived set is closed. Singletons suffice: `d` distributes over unions
    /// and finite unions of closed sets are closed.
    pub fn is_td(&self) -> bool {
        (0..self.n).all(|x| self.is_closed(self.derivative(PointSet::singleton(x))))
    }

    /// Checks `d` against the Magari axioms over all subsets; returns the
    /// violated axiom and a witness.
    pub fn magari_violation(&self) -> Option<(&'static str, PointSet)> {
        if !self.derivative(PointSet::EMPTY).is_empty() {
            return Some(("M1", PointSet::EMPTY));
        }
        for a in PointSet::all(self.n) {
            let da = self.derivative(a);
            let by_points = a.iter().fold(PointSet::EMPTY, |acc, x| acc | self.derivative(PointSet::singleton(x)));
            if da != by_points {
                return Some(("M1", a));
            }
            if da != self.derivative(a.minus(da)) {
                return Some(("M2", a));
            }
        }
        None
    }

    /// For each point `x`, every pair of opens `U`, `V` with `{x} u U u V` open
    /// has `{x} u U` or `{x} u V` open.
    ///
    /// With `P = M(x) \ {x}` this reduces to splits of `P`: the least opens
    /// containing the two halves must not both miss `x` while neither covers `P`.
    pub fn is_primal(&self) -> bool {
        (0..self.n).all(|x| self.primal_witness(x).is_none())
    }

    /// A pair `(U, V)` violating primality at `x`.
    pub fn primal_witness(&self, x: usize) -> Option<(PointSet, PointSet)> {
        let p = self.min_nbhd[x].without(x);
        for s in p.subsets() {
            let u = self.upward(s);
            let v = self.upward(p.minus(s));
            if u.contains(x) || v.contains(x) {
                continue;
            }
            if !p.is_subset(u) && !p.is_subset(v) {
                return Some((u, v));
            }
        }
        None
    }

    /// Least open set containing `s`.
    pub fn upward(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::EMPTY, |acc, y| acc | self.min_nbhd[y])
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{chain3_upset, fork2};
    use super::*;

    #[test]
    fn chain_report() {
        let r = chain3_upset().classify(&Caps::default()).unwrap();
        assert!(r.scattered && r.magari && r.t_d && r.primal);
        assert_eq!(r.cb_rank, 3);
        assert_eq!(r.rank_of_point, vec![Some(2), Some(1), Some(0)]);
    }

    #[test]
    fn indiscrete_report() {
        let s = FiniteSpace::indiscrete(2).unwrap();
        let r = s.classify(&Caps::default()).unwrap();
        assert!(!r.scattered && !r.magari && !r.t_d);
        assert_eq!(r.cb_rank, 0);
        assert_eq!(s.magari_violation(), Some(("M2", PointSet(0b11))));
        let x = s.points();
        assert_eq!(s.derivative(x), x);
        assert_eq!(s.derivative(x.minus(s.derivative(x))), PointSet::EMPTY);
    }

    #[test]
    fn fork_is_not_primal() {
        let f = fork2();
        let r = f.classify(&Caps::default()).unwrap();
        assert!(r.scattered && !r.primal);
        let (u, v) = f.primal_witness(0).unwrap();
        let mut pair = [u, v];
        pair.sort();
        assert_eq!(pair, [PointSet::singleton(1), PointSet::singleton(2)]);
    }

    #[test]
    fn cap_is_enforced() {
        let caps = Caps { single: 2, ..Caps::default() };
        assert!(chain3_upset().classify(&caps).is_err());
    }
}
