use std::collections::BTreeMap;

use serde::Serialize;

use super::{FiniteSpace, PointSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    pub source: FiniteSpace,
    pub target: FiniteSpace,
    pub assignment: Vec<usize>,
}

/// Why a map fails to be a d-map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum DMapFailure {
    /// Preimage of this target open is not open.
    NotContinuous { open: PointSet },
    /// Image of this source open is not open.
    NotOpen { open: PointSet },
    /// This fiber is not discrete as a subspace.
    NotPointwiseDiscrete { point: usize, fiber: PointSet },
}

/// Result of plugging spaces into the isolated points of a base.
#[derive(Clone, Debug)]
pub struct DSum {
    pub space: FiniteSpace,
    pub projection: PointMap,
    /// `blocks[j]` lists the points of the summand sitting over base point `j`, in order.
    pub blocks: Vec<Vec<usize>>,
}

impl PointMap {
    pub fn new(source: FiniteSpace, target: FiniteSpace, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.n {
            return Err(Error::InvalidInput(format!(
                "assignment has {} entries for {} points",
                assignment.len(),
                source.n
            )));
        }
        if let Some(&y) = assignment.iter().find(|&&y| y >= target.n) {
            return Err(Error::PointOutOfRange { point: y, n_points: target.n });
        }
        Ok(PointMap { source, target, assignment })
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        PointMap { source: space.clone(), target: space.clone(), assignment: (0..space.n).collect() }
    }

    pub fn image(&self, s: PointSet) -> PointSet {
        PointSet::from_points(s.iter().map(|x| self.assignment[x]))
    }

    pub fn preimage(&self, s: PointSet) -> PointSet {
        PointSet::from_points((0..self.source.n).filter(|&x| s.contains(self.assignment[x])))
    }

    pub fn is_onto(&self) -> bool {
        self.image(self.source.points()) == self.target.points()
    }

    /// Checks continuity, openness and pointwise discreteness over the full open families.
    pub fn dmap_failure(&self) -> Option<DMapFailure> {
        if let Some(&open) = self.target.opens.iter().find(|u| !self.source.is_open(self.preimage(**u))) {
            return Some(DMapFailure::NotContinuous { open });
        }
        if let Some(&open) = self.source.opens.iter().find(|u| !self.target.is_open(self.image(**u))) {
            return Some(DMapFailure::NotOpen { open });
        }
        for y in 0..self.target.n {
            let fiber = self.preimage(PointSet::singleton(y));
            // discrete subspace: each point has a neighbourhood meeting the fiber only in itself
            if fiber.iter().any(|x| (self.source.min_nbhd[x] & fiber) != PointSet::singleton(x)) {
                return Some(DMapFailure::NotPointwiseDiscrete { point: y, fiber });
            }
        }
        None
    }

    pub fn is_dmap(&self) -> bool {
        self.dmap_failure().is_none()
    }

    pub fn compose(&self, next: &PointMap) -> Result<PointMap> {
        if self.target != next.source {
            return Err(Error::InvalidInput("maps are not composable".into()));
        }
        let assignment = self.assignment.iter().map(|&y| next.assignment[y]).collect();
        Ok(PointMap { source: self.source.clone(), target: next.target.clone(), assignment })
    }
}

impl FiniteSpace {
    /// The Cantor-Bendixson rank onto the chain `0..cb_rank` with the left topology.
    pub fn rank_map(&self) -> Result<PointMap> {
        let rank = self.cb_rank().ok_or(Error::NotScattered)?;
        let target = FiniteSpace::left_chain(rank)?;
        let assignment = self.ranks().into_iter().map(|r| r.expect("scattered")).collect();
        PointMap::new(self.clone(), target, assignment)
    }

    /// Plugs `plugins[j]` into the isolated point `j`; other points keep a singleton.
    /// Points of the sum are numbered block by block in base order.
    pub fn dsum(&self, plugins: &BTreeMap<usize, FiniteSpace>) -> Result<DSum> {
        let isolated = self.isolated_points();
        for &j in plugins.keys() {
            if j >= self.n {
                return Err(Error::PointOutOfRange { point: j, n_points: self.n });
            }
            if !isolated.contains(j) {
                return Err(Error::NotIsolated(j));
            }
        }
        let mut blocks = Vec::with_capacity(self.n);
        let mut owner = Vec::new();
        let mut local = Vec::new();
        for j in 0..self.n {
            let size = plugins.get(&j).map_or(1, |s| s.n);
            let start = owner.len();
            blocks.push((start..start + size).collect::<Vec<_>>());
            owner.extend(std::iter::repeat(j).take(size));
            local.extend(0..size);
        }
        let total = owner.len();
        if total > super::MAX_POINTS {
            return Err(Error::CapExceeded { what: "points", value: total, cap: super::MAX_POINTS });
        }
        let lift = |j: usize, s: PointSet| PointSet::from_points(s.iter().map(|i| blocks[j][i]));
        let full_block = |j: usize| PointSet::from_points(blocks[j].iter().copied());
        // A point of Y_j has the minimal neighbourhood of the summand; a point over a
        // non-isolated j has the preimage of M(j) as its least neighbourhood.
        let min_nbhd = (0..total)
            .map(|z| {
                let j = owner[z];
                match plugins.get(&j) {
                    Some(sub) => lift(j, sub.min_nbhd[local[z]]),
                    None if isolated.contains(j) => PointSet::singleton(z),
                    None => self.min_nbhd[j].iter().fold(PointSet::EMPTY, |acc, k| acc | full_block(k)),
                }
            })
            .collect();
        let space = FiniteSpace::from_min_nbhds(total, min_nbhd)?;
        let projection = PointMap::new(space.clone(), self.clone(), owner)?;
        Ok(DSum { space, projection, blocks })
    }

    /// The d-sum built literally from the family `{V u pi^-1(U)}`.
    pub fn dsum_by_definition(&self, plugins: &BTreeMap<usize, FiniteSpace>) -> Result<FiniteSpace> {
        let shape = self.dsum(plugins)?;
        let blocks = &shape.blocks;
        let pi_inv = |u: PointSet| {
            PointSet::from_points(u.iter().flat_map(|j| blocks[j].iter().copied()))
        };
        // opens of the topological sum of all plugged spaces
        let mut sum_opens = vec![PointSet::EMPTY];
        for j in self.isolated_points().iter() {
            let local: Vec<PointSet> = match plugins.get(&j) {
                Some(sub) => sub.opens.clone(),
                None => vec![PointSet::EMPTY, PointSet::full(1)],
            };
            let mut next = Vec::new();
            for v in &sum_opens {
                for w in &local {
                    next.push(*v | PointSet::from_points(w.iter().map(|i| blocks[j][i])));
                }
            }
            sum_opens = next;
        }
        let mut family: Vec<PointSet> = Vec::new();
        for v in &sum_opens {
            for u in &self.opens {
                family.push(*v | pi_inv(*u));
            }
        }
        FiniteSpace::from_opens(shape.space.n, &family)
    }
}

/// Glues onto d-maps into a d-map between d-sums.
///
/// `f: X -> X'`; `plugins` over `X`, `target_plugins` over `X'`; `fibers[j]` maps
/// the summand at isolated `j` into the summand at `f(j)`. Missing entries default
/// to the constant map, which is only valid when the target summand is a point.
pub fn dsum_of_dmaps(
    f: &PointMap,
    plugins: &BTreeMap<usize, FiniteSpace>,
    target_plugins: &BTreeMap<usize, FiniteSpace>,
    fibers: &BTreeMap<usize, Vec<usize>>,
) -> Result<(DSum, DSum, PointMap)> {
    let z = f.source.dsum(plugins)?;
    let z2 = f.target.dsum(target_plugins)?;
    let isolated = f.source.isolated_points();
    let mut assignment = vec![0; z.space.n];
    for j in 0..f.source.n {
        let fj = f.assignment[j];
        for (i, &p) in z.blocks[j].iter().enumerate() {
            let local = if isolated.contains(j) {
                match fibers.get(&j) {
                    Some(g) => *g.get(i).ok_or_else(|| Error::InvalidInput(format!("fiber map at {j} is too short")))?,
                    None => 0,
                }
            } else {
                0
            };
            assignment[p] = *z2.blocks[fj]
                .get(local)
                .ok_or_else(|| Error::InvalidInput(format!("fiber map at {j} leaves its target summand")))?;
        }
    }
    let g = PointMap::new(z.space.clone(), z2.space.clone(), assignment)?;
    Ok((z, z2, g))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{chain3_upset, fork2};
    use super::super::{OrderMode, StrictOrder};
    use super::*;

    #[test]
    fn identity_and_rank_maps() {
        assert!(PointMap::identity(&fork2()).is_dmap());
        let r = chain3_upset().rank_map().unwrap();
        assert_eq!(r.assignment, vec![2, 1, 0]);
        assert!(r.is_dmap() && r.is_onto());
        let r = fork2().rank_map().unwrap();
        assert_eq!(r.assignment, vec![1, 0, 0]);
        assert_eq!(r.target, FiniteSpace::left_chain(2).unwrap());
        assert!(r.is_dmap());
        let one = FiniteSpace::discrete(1).unwrap().rank_map().unwrap();
        assert_eq!(one.assignment, vec![0]);
        assert!(FiniteSpace::indiscrete(2).unwrap().rank_map().is_err());
    }

    #[test]
    fn sierpinski_collapse_is_not_pointwise_discrete() {
        let s = FiniteSpace::from_subbase(2, &[PointSet::singleton(0)]).unwrap();
        let m = PointMap::new(s, FiniteSpace::discrete(1).unwrap(), vec![0, 0]).unwrap();
        assert_eq!(
            m.dmap_failure(),
            Some(DMapFailure::NotPointwiseDiscrete { point: 0, fiber: PointSet(0b11) })
        );
    }

    #[test]
    fn dsum_examples() {
        let fork = fork2();
        let point = FiniteSpace::discrete(1).unwrap();
        let plugs: BTreeMap<_, _> = [(1, point.clone()), (2, point.clone())].into();
        let d = fork.dsum(&plugs).unwrap();
        assert!(d.space.find_homeomorphism(&fork).is_some());

        let plugs: BTreeMap<_, _> = [(1, fork.clone()), (2, point)].into();
        let d = fork.dsum(&plugs).unwrap();
        assert_eq!(d.space, fork.dsum_by_definition(&plugs).unwrap());
        // root 0, sub-root 1, its leaves 2 3, leaf 4
        let tree = FiniteSpace::upset_topology(
            &StrictOrder::generated_by(5, &[(0, 1), (1, 2), (1, 3), (0, 4)]).unwrap(),
            OrderMode::Upset,
        )
        .unwrap();
        assert_eq!(d.space, tree);
        assert_eq!(d.projection.assignment, vec![0, 1, 1, 1, 2]);
        // continuous and open, but the fiber over 1 is a fork
        assert!(d.projection.is_onto());
        assert_eq!(
            d.projection.dmap_failure(),
            Some(DMapFailure::NotPointwiseDiscrete { point: 1, fiber: PointSet(0b1110) })
        );
        let plugs: BTreeMap<_, _> = [(1, FiniteSpace::discrete(3).unwrap())].into();
        assert!(fork.dsum(&plugs).unwrap().projection.is_dmap());
        assert!(matches!(fork2().dsum(&[(0, fork2())].into()), Err(Error::NotIsolated(0))));
    }
}
