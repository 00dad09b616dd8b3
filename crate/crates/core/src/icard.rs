//! Words evaluated at ordinals in the polytopological space whose first
//! topology is the left topology and whose higher topologies add the sets
//! `{a : ell^m(a) > b}`.
//!
//! `W` with all indices positive holds at `a` iff its shift down holds at
//! `ell(a)`. Otherwise `W = C<0>B` with `C` free of zeros, and `W` holds iff
//! `C T` holds and `a > min(B)`. Minima follow the same split:
//! `min(W) = w^min(W-)` in the shifted case and
//! `min(C<0>B) = min(B) + w^min((C T)-)`. Every minimum is re-checked
//! against the evaluator before it is returned.

use std::collections::HashMap;
use std::sync::OnceLock;

use parking_lot::RwLock;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Word};
use crate::ordinal::{Ordinal, Term};

/// Memo table for word minima, shared across threads.
#[derive(Default)]
pub struct MinCache {
    table: RwLock<HashMap<Word, Ordinal>>,
}

impl MinCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.table.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn eval_word(&self, w: &Word, alpha: &Ordinal) -> Result<bool> {
        let idx = w.indices();
        if idx.is_empty() {
            return Ok(true);
        }
        match idx.iter().position(|&i| i == 0) {
            None => {
                let down = w.shift_down().expect("no zero index");
                self.eval_word(&down, &alpha.ell())
            }
            Some(p) => {
                let head = Word::new(idx[..p].to_vec());
                let tail = Word::new(idx[p + 1..].to_vec());
                Ok(*alpha > self.min_word(&tail)? && self.eval_word(&head, alpha)?)
            }
        }
    }

    pub fn min_word(&self, w: &Word) -> Result<Ordinal> {
        if let Some(m) = self.table.read().get(w) {
            return Ok(m.clone());
        }
        let idx = w.indices();
        let m = if idx.is_empty() {
            Ordinal::zero()
        } else {
            match idx.iter().position(|&i| i == 0) {
                None => Ordinal::omega_pow(self.min_word(&w.shift_down().expect("no zero index"))?),
                Some(p) => {
                    let head = Word::new(idx[..p].to_vec()).shift_down().expect("no zero index before p");
                    let tail = Word::new(idx[p + 1..].to_vec());
                    self.min_word(&tail)?.add(&Ordinal::omega_pow(self.min_word(&head)?))
                }
            }
        };
        if !self.eval_word(w, &m)? {
            return Err(Error::Internal(format!("{w} fails at its computed minimum {m}")));
        }
        self.table.write().insert(w.clone(), m.clone());
        Ok(m)
    }
}

fn cache() -> &'static MinCache {
    static CACHE: OnceLock<MinCache> = OnceLock::new();
    CACHE.get_or_init(MinCache::new)
}

/// Whether `alpha` satisfies `w`.
pub fn eval_word(w: &Word, alpha: &Ordinal) -> Result<bool> {
    cache().eval_word(w, alpha)
}

/// Least ordinal satisfying `w`.
pub fn min_word(w: &Word) -> Result<Ordinal> {
    cache().min_word(w)
}

/// `0`, and every ordinal obtained from `alpha` by lowering one coefficient
/// by one or deleting one term; all are below `alpha` when `alpha > 0`.
pub fn below_candidates(alpha: &Ordinal) -> Vec<Ordinal> {
    let terms = alpha.terms();
    let mut out = vec![Ordinal::zero()];
    for i in 0..terms.len() {
        let mut dec: Vec<Term> = terms.to_vec();
        if dec[i].coef > 1u32.into() {
            dec[i].coef -= 1u32;
            out.push(Ordinal::from_terms(dec).expect("still normal"));
        }
        let mut del: Vec<Term> = terms.to_vec();
        del.remove(i);
        out.push(Ordinal::from_terms(del).expect("still normal"));
    }
    out.retain(|c| c < alpha);
    out.sort();
    out.dedup();
    out
}

/// Whether `A -> B` is provable.
pub fn word_entails(a: &Word, b: &Word) -> Result<bool> {
    eval_word(b, &min_word(a)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordDecision {
    pub provable: bool,
    /// Least point of the antecedent.
    pub min: Ordinal,
    /// The antecedent's minimum when no disjunct holds there.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refuted_at: Option<Ordinal>,
}

/// Whether `A -> B_1 | ... | B_k` is provable.
pub fn decide_word_implication(a: &Word, bs: &[Word]) -> Result<WordDecision> {
    let min = min_word(a)?;
    for b in bs {
        if eval_word(b, &min)? {
            return Ok(WordDecision { provable: true, min, refuted_at: None });
        }
    }
    Ok(WordDecision { provable: false, refuted_at: Some(min.clone()), min })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trichotomy {
    /// `A -> <0>B`
    LeftAboveRight,
    /// `B -> <0>A`
    RightAboveLeft,
    Equivalent,
}

/// Which of the three mutually exclusive relations holds between two words.
pub fn trichotomy(a: &Word, b: &Word) -> Result<Trichotomy> {
    let above = word_entails(a, &b.prefixed(0))?;
    let below = word_entails(b, &a.prefixed(0))?;
    let equiv = word_entails(a, b)? && word_entails(b, a)?;
    match (above, below, equiv) {
        (true, false, false) => Ok(Trichotomy::LeftAboveRight),
        (false, true, false) => Ok(Trichotomy::RightAboveLeft),
        (false, false, true) => Ok(Trichotomy::Equivalent),
        _ => Err(Error::Internal(format!(
            "{a} and {b}: above={above} below={below} equivalent={equiv}"
        ))),
    }
}

fn word_leaf(phi: &Formula) -> Result<Option<(Word, bool)>> {
    if let Some(w) = phi.as_word() {
        return Ok(Some((w, true)));
    }
    // [n]F is ~<n>T and [n]~W is ~<n>W
    if let Formula::Box(n, body) = phi {
        let inner = match &**body {
            Formula::Bot => Some(Word::top()),
            Formula::Not(w) => w.as_word(),
            _ => None,
        };
        if let Some(w) = inner {
            return Ok(Some((w.prefixed(*n), false)));
        }
    }
    Ok(None)
}

/// Evaluates a boolean combination of words at `alpha`.
pub fn eval_closed(phi: &Formula, alpha: &Ordinal) -> Result<bool> {
    if let Some((w, positive)) = word_leaf(phi)? {
        return Ok(eval_word(&w, alpha)? == positive);
    }
    match phi {
        Formula::Top => Ok(true),
        Formula::Bot => Ok(false),
        Formula::Not(a) => Ok(!eval_closed(a, alpha)?),
        Formula::And(a, b) => Ok(eval_closed(a, alpha)? && eval_closed(b, alpha)?),
        Formula::Or(a, b) => Ok(eval_closed(a, alpha)? || eval_closed(b, alpha)?),
        Formula::Imp(a, b) => Ok(!eval_closed(a, alpha)? || eval_closed(b, alpha)?),
        Formula::Var(v) => Err(Error::NotWordCombination(format!("variable `{v}` in {phi}"))),
        Formula::Dia(..) | Formula::Box(..) => Err(Error::NotWordCombination(phi.to_string())),
    }
}

fn disjuncts(phi: &Formula, out: &mut Vec<Word>) -> Result<()> {
    match phi {
        Formula::Or(a, b) => {
            disjuncts(a, out)?;
            disjuncts(b, out)
        }
        Formula::Bot => Ok(()),
        _ => {
            let w = phi.as_word().ok_or_else(|| Error::NotWordCombination(format!("disjunct {phi} is not a word")))?;
            out.push(w);
            Ok(())
        }
    }
}

/// Splits `A -> B_1 | ... | B_k` (or a bare disjunction, read as `T -> ...`).
pub fn split_implication(phi: &Formula) -> Result<(Word, Vec<Word>)> {
    let (ante, cons) = match phi {
        Formula::Imp(a, b) => (&**a, &**b),
        other => (&Formula::Top, other),
    };
    if matches!(ante, Formula::And(..)) {
        return Err(Error::NotWordCombination(format!(
            "antecedent {ante} is a conjunction of words; only a single word is supported"
        )));
    }
    let a = ante.as_word().ok_or_else(|| Error::NotWordCombination(format!("antecedent {ante} is not a word")))?;
    let mut bs = Vec::new();
    disjuncts(cons, &mut bs)?;
    Ok((a, bs))
}
