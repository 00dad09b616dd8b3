//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An ordinal is a finite sum `w^{e1}*c1 + ... + w^{ek}*ck` with strictly
//! decreasing exponents `e1 > ... > ek` (themselves ordinals in the same
//! representation) and positive natural coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, ParseError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: Ordinal,
    pub coef: BigUint,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from(1u64)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `w^exp`
    pub fn omega_pow(exp: Ordinal) -> Self {
        Ordinal { terms: vec![Term { exp, coef: BigUint::one() }] }
    }

    /// `w^exp * coef`; zero when `coef` is zero.
    pub fn monomial(exp: Ordinal, coef: impl Into<BigUint>) -> Self {
        let coef = coef.into();
        if coef.is_zero() {
            return Ordinal::zero();
        }
        Ordinal { terms: vec![Term { exp, coef }] }
    }

    /// Builds from terms, checking strict descent and positive coefficients.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if t.coef.is_zero() {
                return Err(Error::InvalidInput("zero coefficient in Cantor normal form".into()));
            }
        }
        for w in terms.windows(2) {
            if w[0].exp <= w[1].exp {
                return Err(Error::InvalidInput("exponents must strictly decrease".into()));
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Successor ordinals and zero are exactly the ordinals with `ell == 0`.
    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exp.is_zero())
    }

    pub fn as_natural(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [t] if t.exp.is_zero() => Some(t.coef.clone()),
            _ => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.as_natural().and_then(|n| n.to_u64())
    }

    /// Exponent of the leading term; zero for the ordinal zero.
    pub fn leading_exponent(&self) -> Ordinal {
        self.terms.first().map(|t| t.exp.clone()).unwrap_or_default()
    }

    /// The rank function of the order topology: `ell(0) = 0`, `ell(g + w^b) = b`.
    pub fn ell(&self) -> Ordinal {
        self.terms.last().map(|t| t.exp.clone()).unwrap_or_default()
    }

    /// `(g, b)` with `self = g + w^b`; `None` for zero.
    pub fn split_last(&self) -> Option<(Ordinal, Ordinal)> {
        let last = self.terms.last()?;
        let mut terms = self.terms.clone();
        let t = terms.last_mut().expect("nonempty");
        if t.coef.is_one() {
            terms.pop();
        } else {
            t.coef -= 1u32;
        }
        Some((Ordinal { terms }, last.exp.clone()))
    }

    pub fn ell_iter(&self, k: usize) -> Ordinal {
        let mut cur = self.clone();
        for _ in 0..k {
            if cur.is_zero() {
                break;
            }
            cur = cur.ell();
        }
        cur
    }

    /// Membership in the set `{a : ell^m(a) > beta}`.
    pub fn in_u(&self, m: usize, beta: &Ordinal) -> bool {
        self.ell_iter(m) > *beta
    }

    /// Ordinal addition.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(head) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + other.terms.len());
        for t in &self.terms {
            match t.exp.cmp(&head.exp) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => {
                    terms.push(Term { exp: t.exp.clone(), coef: &t.coef + &head.coef });
                    terms.extend(other.terms[1..].iter().cloned());
                    return Ordinal { terms };
                }
                Ordering::Less => break,
            }
        }
        terms.extend(other.terms.iter().cloned());
        Ordinal { terms }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// The unique `g` with `a + g = self`, where `a <= self`.
    pub fn sub_left(&self, a: &Ordinal) -> Result<Ordinal> {
        for (i, bt) in self.terms.iter().enumerate() {
            let Some(at) = a.terms.get(i) else {
                return Ok(Ordinal { terms: self.terms[i..].to_vec() });
            };
            match bt.exp.cmp(&at.exp) {
                Ordering::Greater => return Ok(Ordinal { terms: self.terms[i..].to_vec() }),
                Ordering::Less => break,
                Ordering::Equal => match bt.coef.cmp(&at.coef) {
                    Ordering::Greater => {
                        let mut terms = vec![Term { exp: bt.exp.clone(), coef: &bt.coef - &at.coef }];
                        terms.extend(self.terms[i + 1..].iter().cloned());
                        return Ok(Ordinal { terms });
                    }
                    Ordering::Less => break,
                    Ordering::Equal => {}
                },
            }
        }
        if a.terms.len() <= self.terms.len() && a.terms[..] == self.terms[..a.terms.len()] {
            // a is a prefix of self; covered above unless equal
            return Ok(Ordinal::zero());
        }
        Err(Error::SubtractionUnderflow(a.to_string(), self.to_string()))
    }

    /// `self * k` for a natural `k`.
    pub fn mul_nat(&self, k: &BigUint) -> Ordinal {
        if k.is_zero() || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].coef = &terms[0].coef * k;
        Ordinal { terms }
    }

    /// `self * w`, which is `w^(e+1)` for leading exponent `e`.
    pub fn times_omega(&self) -> Ordinal {
        if self.is_zero() {
            return Ordinal::zero();
        }
        Ordinal::omega_pow(self.leading_exponent().succ())
    }

    /// Left division by a nonzero `q` with natural quotient: returns `(n, r)` with
    /// `self = q*n + r` and `r < q`. Requires `self < q * w`.
    pub fn div_rem_nat(&self, q: &Ordinal) -> Result<(BigUint, Ordinal)> {
        let Some(head) = q.terms.first() else {
            return Err(Error::InvalidInput("division by zero ordinal".into()));
        };
        if *self >= q.times_omega() {
            return Err(Error::InvalidInput(format!("{self} is not below {q}*w")));
        }
        // self = w^e * a + low with every exponent of low below e (a may be zero)
        let (a, low) = match self.terms.first() {
            Some(t) if t.exp == head.exp => (t.coef.clone(), Ordinal { terms: self.terms[1..].to_vec() }),
            _ => (BigUint::zero(), self.clone()),
        };
        let q_low = Ordinal { terms: q.terms[1..].to_vec() };
        let (mut n, rem) = a.div_rem(&head.coef);
        if !n.is_zero() && rem.is_zero() && q_low > low {
            n -= 1u32;
        }
        let r = self.sub_left(&q.mul_nat(&n))?;
        debug_assert!(r < *q);
        Ok((n, r))
    }

    /// Ordinal sum of a finite sequence.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Ordinal>) -> Ordinal {
        items.into_iter().fold(Ordinal::zero(), |acc, x| acc.add(x))
    }

    /// Random ordinal strictly below `w^(w^depth)`-ish bounds, used by property tests
    /// and sampling. Exponents are drawn recursively with `depth - 1`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, depth: usize, max_terms: usize, max_coef: u64) -> Ordinal {
        if depth == 0 {
            let c = rng.gen_range(0..=max_coef);
            return Ordinal::from(c);
        }
        let n = rng.gen_range(0..=max_terms);
        let mut exps: Vec<Ordinal> = (0..n).map(|_| Ordinal::random(rng, depth - 1, max_terms, max_coef)).collect();
        exps.sort();
        exps.dedup();
        exps.reverse();
        let terms = exps
            .into_iter()
            .map(|exp| Term { exp, coef: BigUint::from(rng.gen_range(1..=max_coef.max(1))) })
            .collect();
        Ordinal { terms }
    }

    /// Random ordinal below `w^bound` whose exponents are naturals.
    pub fn random_below_omega_pow<R: Rng + ?Sized>(rng: &mut R, bound: u64, max_coef: u64) -> Ordinal {
        let mut terms = Vec::new();
        for e in (0..bound).rev() {
            if rng.gen_bool(0.5) {
                let coef = if rng.gen_bool(0.1) {
                    BigUint::from(rng.gen::<u64>()) + 1u32
                } else {
                    BigUint::from(rng.gen_range(1..=max_coef.max(1)))
                };
                terms.push(Term { exp: Ordinal::from(e), coef });
            }
        }
        Ordinal { terms }
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::monomial(Ordinal::zero(), n)
    }
}

impl From<BigUint> for Ordinal {
    fn from(n: BigUint) -> Self {
        Ordinal::monomial(Ordinal::zero(), n)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let c = a.exp.cmp(&b.exp).then_with(|| a.coef.cmp(&b.coef));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coef)?;
                continue;
            }
            if t.exp == Ordinal::one() {
                write!(f, "w")?;
            } else {
                write!(f, "w^{{{}}}", t.exp)?;
            }
            if !t.coef.is_one() {
                write!(f, "*{}", t.coef)?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Ordinal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for Ordinal {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = OrdParser { src: s.as_bytes(), pos: 0 };
        let o = p.cnf()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(o)
    }
}

struct OrdParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl OrdParser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError { position: self.pos, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn nat(&mut self) -> Result<BigUint, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        BigUint::parse_bytes(&self.src[start..self.pos], 10).ok_or_else(|| self.error("bad number"))
    }

    fn cnf(&mut self) -> Result<Ordinal, ParseError> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, ParseError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.src[self.pos..].starts_with(b"^{") {
                    self.pos += 2;
                    let e = self.cnf()?;
                    if self.peek() != Some(b'}') {
                        return Err(self.error("expected `}`"));
                    }
                    self.pos += 1;
                    e
                } else {
                    Ordinal::one()
                };
                let coef = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.nat()?
                } else {
                    BigUint::one()
                };
                Ok(Ordinal::monomial(exp, coef))
            }
            Some(b) if b.is_ascii_digit() => Ok(Ordinal::from(self.nat()?)),
            _ => Err(self.error("expected `w` or a natural number")),
        }
    }
}
