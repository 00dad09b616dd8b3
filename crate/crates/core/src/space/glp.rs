use std::collections::BTreeSet;

use serde::Serialize;

use super::{Caps, FiniteSpace, PointSet};
use crate::error::{Error, Result};

/// Conditions between levels `level` and `level + 1` of a polytopological space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlpLevelReport {
    pub level: usize,
    /// A set whose level-`level` derivative is not open one level up.
    pub d1_witness: Option<PointSet>,
    /// A level-`level` open set that is not open one level up.
    pub d2_witness: Option<PointSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlpReport {
    /// D0 for each level.
    pub scattered: Vec<bool>,
    pub pairs: Vec<GlpLevelReport>,
}

impl GlpReport {
    pub fn holds(&self) -> bool {
        self.scattered.iter().all(|&s| s)
            && self.pairs.iter().all(|p| p.d1_witness.is_none() && p.d2_witness.is_none())
    }
}

impl FiniteSpace {
    /// The distinct derived sets `d(A)`, `A` ranging over all subsets.
    pub fn derived_sets(&self) -> BTreeSet<PointSet> {
        PointSet::all(self.n).map(|a| self.derivative(a)).collect()
    }

    /// Coarsest refinement in which every derived set is open. Derived sets of
    /// singletons generate the rest, since `d` distributes over finite unions.
    pub fn plus_topology(&self) -> Result<FiniteSpace> {
        let mut subbase = self.opens.clone();
        subbase.extend((0..self.n).map(|x| self.derivative(PointSet::singleton(x))));
        FiniteSpace::from_subbase(self.n, &subbase)
    }

    /// Points `a` of `dX` such that `a in dA1 n .. n dAm` implies
    /// `a in d(dA1 n .. n dAm)` for every tuple of subsets.
    pub fn reflexive_points(&self, m: usize, caps: &Caps) -> Result<PointSet> {
        if m == 0 {
            return Err(Error::InvalidInput("reflection order must be at least 1".into()));
        }
        if m == 1 {
            caps.check_single(self.n)?;
        } else {
            caps.check_double(self.n)?;
        }
        if !self.is_td() {
            return Err(Error::NotTd);
        }
        // only the value of each dAi matters, so tuples range over distinct derived sets
        let derived: Vec<PointSet> = self.derived_sets().into_iter().collect();
        let mut intersections: BTreeSet<PointSet> = [self.points()].into();
        for _ in 0..m {
            intersections = intersections
                .iter()
                .flat_map(|acc| derived.iter().map(move |d| *acc & *d))
                .collect();
        }
        let candidates = self.derivative(self.points());
        Ok(PointSet::from_points(candidates.iter().filter(|&a| {
            intersections
                .iter()
                .all(|b| !b.contains(a) || self.derivative(*b).contains(a))
        })))
    }

    /// Checks the GLP-space conditions across the whole sequence.
    pub fn check_glp_space(topologies: &[FiniteSpace], caps: &Caps) -> Result<GlpReport> {
        let n = topologies.first().map_or(0, |t| t.n);
        for t in topologies {
            if t.n != n {
                return Err(Error::CarrierMismatch(n, t.n));
            }
        }
        caps.check_single(n)?;
        let scattered = topologies.iter().map(|t| t.is_scattered()).collect();
        let pairs = topologies
            .windows(2)
            .enumerate()
            .map(|(level, w)| {
                let (lo, hi) = (&w[0], &w[1]);
                GlpLevelReport {
                    level,
                    d1_witness: PointSet::all(n).find(|a| !hi.is_open(lo.derivative(*a))),
                    d2_witness: lo.opens.iter().copied().find(|u| !hi.is_open(*u)),
                }
            })
            .collect();
        Ok(GlpReport { scattered, pairs })
    }

    /// Recovers the topology whose derivative is `delta`, given as a table indexed by subset mask.
    pub fn topology_from_operator(n: usize, delta: &[PointSet], caps: &Caps) -> Result<FiniteSpace> {
        caps.check_single(n)?;
        if delta.len() != 1 << n {
            return Err(Error::InvalidInput(format!("operator table has {} entries, expected {}", delta.len(), 1u64 << n)));
        }
        for &d in delta {
            FiniteSpace::check_range(n, d)?;
        }
        let at = |a: PointSet| delta[a.0 as usize];
        if !at(PointSet::EMPTY).is_empty() {
            return Err(Error::MagariViolation { axiom: "M1", witness: vec![] });
        }
        for a in PointSet::all(n) {
            let by_points = a.iter().fold(PointSet::EMPTY, |acc, x| acc | at(PointSet::singleton(x)));
            if at(a) != by_points {
                return Err(Error::MagariViolation { axiom: "M1", witness: a.to_vec() });
            }
            if at(a) != at(a.minus(at(a))) {
                return Err(Error::MagariViolation { axiom: "M2", witness: a.to_vec() });
            }
        }
        let opens: Vec<PointSet> = PointSet::all(n)
            .filter(|a| at(*a).is_subset(*a))
            .map(|a| a.complement(n))
            .collect();
        let space = FiniteSpace::from_opens(n, &opens)
            .map_err(|e| Error::Internal(format!("closed sets of the operator do not form a topology: {e}")))?;
        if let Some(a) = PointSet::all(n).find(|a| space.derivative(*a) != at(*a)) {
            return Err(Error::Internal(format!("recovered topology disagrees with the operator at {a:?}")));
        }
        Ok(space)
    }
}
