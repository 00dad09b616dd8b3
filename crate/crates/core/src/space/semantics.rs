use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Caps, FiniteSpace, PointSet};
use crate::error::{Error, Result};
use crate::formula::Formula;

/// Truth sets for propositional variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(pub BTreeMap<String, PointSet>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, set: PointSet) -> Self {
        self.0.insert(name.to_string(), set);
        self
    }

    pub fn get(&self, name: &str) -> Result<PointSet> {
        self.0.get(name).copied().ok_or_else(|| Error::UnboundVariable(name.to_string()))
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        for s in self.0.values() {
            FiniteSpace::check_range(n, *s)?;
        }
        Ok(())
    }
}

/// A valuation and a point where a formula fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    pub valuation: Valuation,
    pub point: usize,
}

fn check_indices(topologies: &[FiniteSpace], phi: &Formula) -> Result<usize> {
    let n = topologies.first().map_or(0, |t| t.n);
    for t in topologies {
        if t.n != n {
            return Err(Error::CarrierMismatch(n, t.n));
        }
    }
    if let Some(k) = phi.max_index() {
        if k as usize >= topologies.len() {
            return Err(Error::IndexOutOfRange { index: k, available: topologies.len() });
        }
    }
    Ok(n)
}

fn eval(topologies: &[FiniteSpace], v: &Valuation, phi: &Formula, full: PointSet) -> Result<PointSet> {
    Ok(match phi {
        Formula::Top => full,
        Formula::Bot => PointSet::EMPTY,
        Formula::Var(name) => v.get(name)?,
        Formula::Not(a) => eval(topologies, v, a, full)?.complement(full.len()),
        Formula::And(a, b) => eval(topologies, v, a, full)? & eval(topologies, v, b, full)?,
        Formula::Or(a, b) => eval(topologies, v, a, full)? | eval(topologies, v, b, full)?,
        Formula::Imp(a, b) => eval(topologies, v, a, full)?.complement(full.len()) | eval(topologies, v, b, full)?,
        Formula::Dia(k, a) => topologies[*k as usize].derivative(eval(topologies, v, a, full)?),
        Formula::Box(k, a) => topologies[*k as usize].co_derivative(eval(topologies, v, a, full)?),
    })
}

/// Truth set of `phi`; modality `<k>` is the derivative of `topologies[k]`.
pub fn model_check(topologies: &[FiniteSpace], v: &Valuation, phi: &Formula) -> Result<PointSet> {
    let n = check_indices(topologies, phi)?;
    v.check_range(n)?;
    eval(topologies, v, phi, PointSet::full(n))
}

/// Searches all valuations of the variables of `phi` for a falsifying one.
pub fn validates(topologies: &[FiniteSpace], phi: &Formula, caps: &Caps) -> Result<Option<Countermodel>> {
    let n = check_indices(topologies, phi)?;
    let vars = phi.variables();
    let bits = n * vars.len();
    if bits > caps.valuation_bits {
        return Err(Error::CapExceeded { what: "valuation bits", value: bits, cap: caps.valuation_bits });
    }
    let full = PointSet::full(n);
    let mask = full.0;
    let mut v = Valuation(vars.iter().map(|x| (x.clone(), PointSet::EMPTY)).collect());
    for code in 0..1u64 << bits {
        for (i, name) in vars.iter().enumerate() {
            let set = PointSet((code >> (i * n)) & mask);
            *v.0.get_mut(name).expect("bound above") = set;
        }
        let truth = eval(topologies, &v, phi, full)?;
        if truth != full {
            let point = full.minus(truth).iter().next().expect("nonempty");
            return Ok(Some(Countermodel { valuation: v, point }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{chain3_upset, fork2};
    use super::*;
    use crate::formula::{lin, lob, parse};

    #[test]
    fn model_check_examples() {
        let v = Valuation::new();
        assert_eq!(model_check(&[fork2()], &v, &Formula::Top).unwrap(), PointSet(0b111));
        assert_eq!(model_check(&[fork2()], &v, &parse("<0>T").unwrap()).unwrap(), PointSet::singleton(0));
        assert_eq!(model_check(&[chain3_upset()], &v, &parse("<0><0>T").unwrap()).unwrap(), PointSet::singleton(0));
        assert!(matches!(
            model_check(&[fork2()], &v, &parse("<1>T").unwrap()),
            Err(Error::IndexOutOfRange { index: 1, available: 1 })
        ));
        assert!(matches!(model_check(&[fork2()], &v, &parse("p").unwrap()), Err(Error::UnboundVariable(_))));
    }

    #[test]
    fn validity_examples() {
        let caps = Caps::default();
        let p = Formula::var("p");
        let q = Formula::var("q");
        assert_eq!(validates(&[chain3_upset()], &lob(0, p.clone()), &caps).unwrap(), None);
        assert_eq!(validates(&[fork2()], &lob(0, p.clone()), &caps).unwrap(), None);
        let cm = validates(&[fork2()], &lin(p.clone(), q.clone()), &caps).unwrap().unwrap();
        assert_eq!(cm.point, 0);
        assert!(!model_check(&[fork2()], &cm.valuation, &lin(p.clone(), q.clone())).unwrap().contains(0));
        let witness = Valuation::new().with("p", PointSet::singleton(1)).with("q", PointSet::singleton(2));
        assert!(!model_check(&[fork2()], &witness, &lin(p.clone(), q.clone())).unwrap().contains(0));
        assert_eq!(validates(&[chain3_upset()], &lin(p, q), &caps).unwrap(), None);
    }
}
