//! JSON input formats.
//!
//! Spaces: `{"points": n, "opens": [[..], ..]}`, `{"points": n, "subbase": [[..], ..]}`
//! or `{"order": [[i, j], ..], "mode": "upset" | "left"}`. Order pairs are
//! closed transitively; `points` may accompany an order to add isolated points.
//! Trees: `{"parent": [null, 0, 0]}`.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::kripke::Tree;
use crate::space::{FiniteSpace, OrderMode, PointSet, StrictOrder, Valuation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SpaceJson {
    Opens { points: usize, opens: Vec<Vec<usize>> },
    Subbase { points: usize, subbase: Vec<Vec<usize>> },
    Order {
        #[serde(default)]
        points: Option<usize>,
        order: Vec<(usize, usize)>,
        mode: OrderMode,
    },
}

fn sets(n: usize, family: &[Vec<usize>]) -> Result<Vec<PointSet>> {
    family
        .iter()
        .map(|s| {
            if let Some(&p) = s.iter().find(|&&p| p >= n) {
                return Err(Error::PointOutOfRange { point: p, n_points: n });
            }
            Ok(PointSet::from_points(s.iter().copied()))
        })
        .collect()
}

impl SpaceJson {
    pub fn build(&self) -> Result<FiniteSpace> {
        match self {
            SpaceJson::Opens { points, opens } => FiniteSpace::from_opens(*points, &sets(*points, opens)?),
            SpaceJson::Subbase { points, subbase } => FiniteSpace::from_subbase(*points, &sets(*points, subbase)?),
            SpaceJson::Order { points, order, mode } => {
                let used = order.iter().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0);
                let n = points.unwrap_or(used);
                if used > n {
                    return Err(Error::PointOutOfRange { point: used - 1, n_points: n });
                }
                FiniteSpace::upset_topology(&StrictOrder::generated_by(n, order)?, *mode)
            }
        }
    }

    pub fn from_space(space: &FiniteSpace) -> SpaceJson {
        SpaceJson::Opens {
            points: space.n_points(),
            opens: space.opens().iter().map(|o| o.to_vec()).collect(),
        }
    }
}

/// A base space with spaces plugged into some of its points.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DSumJson {
    pub base: SpaceJson,
    pub plugins: BTreeMap<usize, SpaceJson>,
}

/// A tree with trees plugged into some of its leaves.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDSumJson {
    pub base: Tree,
    pub plugins: BTreeMap<usize, Tree>,
}

/// Several topologies on one carrier, lowest index first.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolySpaceJson {
    pub topologies: Vec<SpaceJson>,
}

/// Parses JSON text, reporting syntax and shape errors as parse errors.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let offset = text
            .lines()
            .take(e.line().saturating_sub(1))
            .map(|l| l.len() + 1)
            .sum::<usize>()
            + e.column();
        Error::Parse(ParseError { position: offset, message: e.to_string() })
    })
}

pub fn parse_space(text: &str) -> Result<FiniteSpace> {
    from_json::<SpaceJson>(text)?.build()
}

pub fn parse_spaces(text: &str) -> Result<Vec<FiniteSpace>> {
    from_json::<PolySpaceJson>(text)?.topologies.iter().map(SpaceJson::build).collect()
}

pub fn parse_tree(text: &str) -> Result<Tree> {
    from_json(text)
}

pub fn parse_valuation(text: &str) -> Result<Valuation> {
    from_json(text)
}

pub fn parse_space_dsum(text: &str) -> Result<(FiniteSpace, BTreeMap<usize, FiniteSpace>)> {
    let spec: DSumJson = from_json(text)?;
    let plugins = spec.plugins.iter().map(|(&k, s)| Ok((k, s.build()?))).collect::<Result<_>>()?;
    Ok((spec.base.build()?, plugins))
}

pub fn parse_tree_dsum(text: &str) -> Result<(Tree, BTreeMap<usize, Tree>)> {
    let spec: TreeDSumJson = from_json(text)?;
    Ok((spec.base, spec.plugins))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_space_forms() {
        let a = parse_space(r#"{"points": 3, "opens": [[], [1], [2], [1, 2], [0, 1, 2]]}"#).unwrap();
        let b = parse_space(r#"{"points": 3, "subbase": [[1], [2]]}"#).unwrap();
        let c = parse_space(r#"{"order": [[0, 1], [0, 2]], "mode": "upset"}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let d = parse_space(r#"{"order": [[0, 1], [1, 2]], "mode": "left"}"#).unwrap();
        assert_eq!(d, FiniteSpace::left_chain(3).unwrap());
        let e = parse_space(r#"{"points": 4, "order": [[0, 1]], "mode": "upset"}"#).unwrap();
        assert_eq!(e.isolated_points(), PointSet::from_points([1, 2, 3]));
    }

    #[test]
    fn roundtrip() {
        let s = parse_space(r#"{"order": [[0, 1], [1, 2]], "mode": "upset"}"#).unwrap();
        let text = serde_json::to_string(&SpaceJson::from_space(&s)).unwrap();
        assert_eq!(parse_space(&text).unwrap(), s);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_space("{\"points\": 2,"), Err(Error::Parse(_))));
        assert!(matches!(parse_space(r#"{"points": 2, "opens": [[5]]}"#), Err(Error::PointOutOfRange { point: 5, .. })));
        assert!(matches!(parse_space(r#"{"points": 2, "opens": [[0]]}"#), Err(Error::NotTopology(_))));
        assert!(matches!(parse_space(r#"{"order": [[0, 1], [1, 0]], "mode": "upset"}"#), Err(Error::NotStrictOrder(_))));
        assert!(matches!(parse_space(r#"{"points": 1, "order": [[0, 1]], "mode": "upset"}"#), Err(Error::PointOutOfRange { .. })));
        assert!(matches!(parse_tree(r#"{"parent": [null, null]}"#), Err(_)));
    }

    #[test]
    fn dsum_specs() {
        let (base, plugs) = parse_space_dsum(
            r#"{"base": {"order": [[0, 1], [0, 2]], "mode": "upset"},
                "plugins": {"1": {"order": [[0, 1]], "mode": "upset"}}}"#,
        )
        .unwrap();
        assert_eq!(base.dsum(&plugs).unwrap().space.n_points(), 4);
        let (t, plugs) = parse_tree_dsum(r#"{"base": {"parent": [null, 0]}, "plugins": {"1": {"parent": [null, 0, 0]}}}"#).unwrap();
        assert_eq!(t.dsum(&plugs).unwrap().n_nodes(), 4);
        let v = parse_valuation(r#"{"p": [0, 2]}"#).unwrap();
        assert_eq!(v.get("p").unwrap(), PointSet::from_points([0, 2]));
        let tops = parse_spaces(r#"{"topologies": [{"points": 1, "opens": [[], [0]]}]}"#).unwrap();
        assert_eq!(tops.len(), 1);
    }
}
