//! Polymodal formulas: syntax tree, parser, printer and structural helpers.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! formula := imp
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "<" nat ">" unary | "[" nat "]" unary | atom
//! atom    := "T" | "F" | ident | "(" formula ")"
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bot,
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    /// `<n>φ`
    Dia(u32, Box<Formula>),
    /// `[n]φ`, kept primitive; semantics read it as `~<n>~φ`.
    Box(u32, Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn imp(self, other: Formula) -> Formula {
        Formula::Imp(Box::new(self), Box::new(other))
    }

    pub fn dia(index: u32, body: Formula) -> Formula {
        Formula::Dia(index, Box::new(body))
    }

    pub fn boxed(index: u32, body: Formula) -> Formula {
        Formula::Box(index, Box::new(body))
    }

    /// True iff the formula contains no propositional variable.
    pub fn is_closed(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot => true,
            Formula::Var(_) => false,
            Formula::Not(a) | Formula::Dia(_, a) | Formula::Box(_, a) => a.is_closed(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_closed() && b.is_closed()
            }
        }
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        fn walk(f: &Formula, out: &mut Vec<String>) {
            match f {
                Formula::Top | Formula::Bot => {}
                Formula::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Formula::Not(a) | Formula::Dia(_, a) | Formula::Box(_, a) => walk(a, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Var(_) => 1,
            Formula::Not(a) | Formula::Dia(_, a) | Formula::Box(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Var(_) => 0,
            Formula::Not(a) => a.modal_depth(),
            Formula::Dia(_, a) | Formula::Box(_, a) => 1 + a.modal_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
        }
    }

    /// Largest modality index occurring in the formula, if any.
    pub fn max_index(&self) -> Option<u32> {
        match self {
            Formula::Top | Formula::Bot | Formula::Var(_) => None,
            Formula::Not(a) => a.max_index(),
            Formula::Dia(n, a) | Formula::Box(n, a) => {
                Some(a.max_index().map_or(*n, |m| m.max(*n)))
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                match (a.max_index(), b.max_index()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    /// Replace every modality `<n>`/`[n]` by `<n+1>`/`[n+1]`.
    pub fn shift_up(&self) -> Formula {
        self.map_indices(&|n| n + 1)
    }

    fn map_indices(&self, f: &dyn Fn(u32) -> u32) -> Formula {
        match self {
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
            Formula::Var(v) => Formula::Var(v.clone()),
            Formula::Not(a) => Formula::Not(Box::new(a.map_indices(f))),
            Formula::And(a, b) => Formula::And(Box::new(a.map_indices(f)), Box::new(b.map_indices(f))),
            Formula::Or(a, b) => Formula::Or(Box::new(a.map_indices(f)), Box::new(b.map_indices(f))),
            Formula::Imp(a, b) => Formula::Imp(Box::new(a.map_indices(f)), Box::new(b.map_indices(f))),
            Formula::Dia(n, a) => Formula::Dia(f(*n), Box::new(a.map_indices(f))),
            Formula::Box(n, a) => Formula::Box(f(*n), Box::new(a.map_indices(f))),
        }
    }

    /// No modality with a smaller index occurs in the scope of one with a larger index.
    pub fn is_ordered(&self) -> bool {
        fn walk(f: &Formula, ceiling: Option<u32>) -> bool {
            match f {
                Formula::Top | Formula::Bot | Formula::Var(_) => true,
                Formula::Not(a) => walk(a, ceiling),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                    walk(a, ceiling) && walk(b, ceiling)
                }
                Formula::Dia(n, a) | Formula::Box(n, a) => {
                    if ceiling.is_some_and(|c| *n < c) {
                        return false;
                    }
                    walk(a, Some(ceiling.map_or(*n, |c| c.max(*n))))
                }
            }
        }
        walk(self, None)
    }

    /// All subformulas, including the formula itself.
    pub fn closure(&self) -> BTreeSet<Formula> {
        fn walk(f: &Formula, out: &mut BTreeSet<Formula>) {
            if !out.insert(f.clone()) {
                return;
            }
            match f {
                Formula::Top | Formula::Bot | Formula::Var(_) => {}
                Formula::Not(a) | Formula::Dia(_, a) | Formula::Box(_, a) => walk(a, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    /// The word this formula spells, if it is of the form `<i1>...<ik>T`.
    pub fn as_word(&self) -> Option<Word> {
        let mut indices = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Formula::Top => return Some(Word::new(indices)),
                Formula::Dia(n, a) => {
                    indices.push(*n);
                    cur = a;
                }
                _ => return None,
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => write!(f, "T"),
            Formula::Bot => write!(f, "F"),
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Not(a) => write!(f, "~{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Imp(a, b) => write!(f, "({a} -> {b})"),
            Formula::Dia(n, a) => write!(f, "<{n}>{a}"),
            Formula::Box(n, a) => write!(f, "[{n}]{a}"),
        }
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Variable-free diamond-only formula `<i1><i2>...<ik>T`, outermost index first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(indices: Vec<u32>) -> Self {
        Word(indices)
    }

    pub fn top() -> Self {
        Word(Vec::new())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `<n>W`
    pub fn prefixed(&self, n: u32) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(n);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn shift_up(&self) -> Word {
        Word(self.0.iter().map(|n| n + 1).collect())
    }

    /// Decrement every index; `None` if some index is zero.
    pub fn shift_down(&self) -> Option<Word> {
        self.0
            .iter()
            .map(|n| n.checked_sub(1))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn to_formula(&self) -> Formula {
        self.0
            .iter()
            .rev()
            .fold(Formula::Top, |acc, &n| Formula::dia(n, acc))
    }

    /// Every word over indices `0..=max_index` with length at most `max_len`, shortest first.
    pub fn enumerate(max_len: usize, max_index: u32) -> Vec<Word> {
        let mut out = vec![Word::top()];
        let mut layer = vec![Word::top()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for i in 0..=max_index {
                    let mut v = w.0.clone();
                    v.push(i);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.0 {
            write!(f, "<{n}>")?;
        }
        write!(f, "T")
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let f = parse(s)?;
        f.as_word().ok_or_else(|| ParseError {
            position: 0,
            message: format!("`{}` is not a word of the form <i1>...<ik>T", s.trim()),
        })
    }
}

/// Parse a formula; see the module docs for the grammar.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let f = p.imp()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError { position: self.pos, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat("->") {
            let rhs = self.imp()?;
            Ok(lhs.imp(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while self.eat("|") {
            acc = acc.or(self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            acc = acc.and(self.unary()?);
        }
        Ok(acc)
    }

    fn nat(&mut self, close: &str) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected modality index"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        let n = digits.parse::<u32>().map_err(|_| ParseError {
            position: start,
            message: "modality index out of range".into(),
        })?;
        if !self.eat(close) {
            return Err(self.error(&format!("expected `{close}`")));
        }
        Ok(n)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        if self.eat("~") {
            return Ok(self.unary()?.not());
        }
        // "<" could only otherwise start nothing; "->" is handled in imp
        if self.eat("<") {
            let n = self.nat(">")?;
            return Ok(Formula::dia(n, self.unary()?));
        }
        if self.eat("[") {
            let n = self.nat("]")?;
            return Ok(Formula::boxed(n, self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        let Some(&c) = self.src.get(self.pos) else {
            return Err(self.error("unexpected end of input"));
        };
        match c {
            b'(' => {
                self.pos += 1;
                let f = self.imp()?;
                if !self.eat(")") {
                    return Err(self.error("expected `)`"));
                }
                Ok(f)
            }
            b'T' | b'F' => {
                self.pos += 1;
                if self.src.get(self.pos).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') {
                    return Err(self.error("identifiers must start with a lowercase letter"));
                }
                Ok(if c == b'T' { Formula::Top } else { Formula::Bot })
            }
            b'a'..=b'z' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
                Ok(Formula::var(name))
            }
            _ => Err(self.error("expected formula")),
        }
    }
}

/// Löb's axiom `[n]([n]p -> p) -> [n]p`.
pub fn lob(index: u32, p: Formula) -> Formula {
    Formula::boxed(index, Formula::boxed(index, p.clone()).imp(p.clone())).imp(Formula::boxed(index, p))
}

/// The linearity axiom `<0>p & <0>q -> <0>(p & q) | <0>(p & <0>q) | <0>(<0>p & q)`.
pub fn dot3(p: Formula, q: Formula) -> Formula {
    let d = |f: Formula| Formula::dia(0, f);
    d(p.clone())
        .and(d(q.clone()))
        .imp(
            d(p.clone().and(q.clone()))
                .or(d(p.clone().and(d(q.clone()))))
                .or(d(d(p).and(q))),
        )
}

/// `[0]([0]+p | [0]+q) -> [0]p | [0]q`, where `[0]+x` abbreviates `x & [0]x`.
pub fn lin(p: Formula, q: Formula) -> Formula {
    let b = |f: Formula| Formula::boxed(0, f);
    let plus = |f: Formula| f.clone().and(b(f));
    b(plus(p.clone()).or(plus(q.clone()))).imp(b(p).or(b(q)))
}

/// A random formula over `p0..p{n_vars-1}` with index-0 modalities, modal depth
/// at most `max_depth` and connective nesting at most `max_nest`.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, n_vars: usize, max_depth: usize, max_nest: usize) -> Formula {
    if max_nest == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..n_vars + 2) {
            0 => Formula::Top,
            1 => Formula::Bot,
            k => Formula::var(&format!("p{}", k - 2)),
        };
    }
    let sub = |rng: &mut R, d: usize| random_formula(rng, n_vars, d, max_nest - 1);
    match rng.gen_range(0..if max_depth > 0 { 6 } else { 4 }) {
        0 => sub(rng, max_depth).not(),
        1 => sub(rng, max_depth).and(sub(rng, max_depth)),
        2 => sub(rng, max_depth).or(sub(rng, max_depth)),
        3 => sub(rng, max_depth).imp(sub(rng, max_depth)),
        4 => Formula::dia(0, sub(rng, max_depth - 1)),
        _ => Formula::boxed(0, sub(rng, max_depth - 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::var("p")
    }

    #[test]
    fn parses_lob() {
        let f = parse("[0]([0]p -> p) -> [0]p").unwrap();
        assert_eq!(f, lob(0, p()));
    }

    #[test]
    fn parses_constants_and_words() {
        assert_eq!(parse("T").unwrap(), Formula::Top);
        assert_eq!(
            parse("<1><0>T").unwrap(),
            Formula::dia(1, Formula::dia(0, Formula::Top))
        );
    }

    #[test]
    fn prints() {
        assert_eq!(Formula::dia(0, Formula::Top).to_string(), "<0>T");
        assert_eq!(Formula::boxed(1, p()).to_string(), "[1]p");
        assert_eq!(Formula::Top.and(Formula::Bot).to_string(), "(T & F)");
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("p | q & r -> s -> t").unwrap();
        let q = Formula::var("q");
        let r = Formula::var("r");
        let s = Formula::var("s");
        let t = Formula::var("t");
        assert_eq!(f, p().or(q.and(r)).imp(s.imp(t)));
        assert_eq!(parse("~<0>p & q").unwrap(), Formula::dia(0, p()).not().and(Formula::var("q")));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse("p & ").unwrap_err();
        assert_eq!(e.position, 4);
        assert!(parse("<x>p").is_err());
        assert!(parse("(p").is_err());
        assert!(parse("p q").is_err());
        assert!(parse("Tx").is_err());
        assert!(parse("P").is_err());
    }

    #[test]
    fn shift_up_examples() {
        assert_eq!(parse("<0>T").unwrap().shift_up(), parse("<1>T").unwrap());
        assert_eq!(Formula::Top.shift_up(), Formula::Top);
        assert_eq!(parse("<1><0>p").unwrap().shift_up(), parse("<2><1>p").unwrap());
    }

    #[test]
    fn ordered_examples() {
        assert!(parse("<0><1>T").unwrap().is_ordered());
        assert!(!parse("<1><0>T").unwrap().is_ordered());
        assert!(Formula::Top.is_ordered());
        assert!(!parse("[2](p & <1>q)").unwrap().is_ordered());
        assert!(parse("<1>T & <0>T").unwrap().is_ordered());
    }

    #[test]
    fn closure_examples() {
        let c = parse("<0>T").unwrap().closure();
        assert_eq!(c, [parse("<0>T").unwrap(), Formula::Top].into_iter().collect());
        let c = parse("p & q").unwrap().closure();
        assert_eq!(c.len(), 3);
        let c = parse("[0]p").unwrap().closure();
        assert_eq!(c, [parse("[0]p").unwrap(), p()].into_iter().collect());
    }

    #[test]
    fn words() {
        let w: Word = "<1><0>T".parse().unwrap();
        assert_eq!(w.indices(), &[1, 0]);
        assert_eq!(w.to_string(), "<1><0>T");
        assert_eq!(w.to_formula().as_word(), Some(w.clone()));
        assert!("<0>p".parse::<Word>().is_err());
        assert_eq!(Word::enumerate(2, 1).len(), 1 + 2 + 4);
        assert_eq!(w.shift_down(), None);
        assert_eq!(w.shift_up().shift_down(), Some(w));
    }

    #[test]
    fn closedness() {
        assert!(parse("<1>T -> <0>T").unwrap().is_closed());
        assert!(!parse("<0>p").unwrap().is_closed());
    }
}
