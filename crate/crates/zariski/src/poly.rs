//! Exact multivariate polynomials over the rationals.
//!
//! Terms are stored in a map keyed by exponent vector, so the value of a
//! polynomial never depends on any monomial order; orders only come into
//! play when a leading term is requested. The text format used across
//! the crate (and by the CLI) joins terms with `+`/`-`, writes
//! coefficients as `p/q`, and powers with `^`, e.g. `-3/2*x_1_2^2*y + 1`.
//! Parsing and printing round-trip exactly.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::rat::{format_rat, parse_rat, Rat};
use crate::vars::VarSpace;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    space: VarSpace,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(space: &VarSpace) -> Self {
        Polynomial {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: &VarSpace, value: Rat) -> Self {
        let mut p = Polynomial::zero(space);
        if !value.is_zero() {
            p.terms.insert(Monomial::one(space.arity()), value);
        }
        p
    }

    pub fn one(space: &VarSpace) -> Self {
        Polynomial::constant(space, Rat::one())
    }

    pub fn var(space: &VarSpace, index: usize) -> Self {
        assert!(index < space.arity());
        let mut p = Polynomial::zero(space);
        p.terms
            .insert(Monomial::var(space.arity(), index), Rat::one());
        p
    }

    pub fn var_named(space: &VarSpace, name: &str) -> Result<Self> {
        let idx = space
            .index_of(name)
            .ok_or_else(|| Error::invalid(format!("unknown variable `{name}`")))?;
        Ok(Polynomial::var(space, idx))
    }

    pub fn from_terms(space: &VarSpace, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Polynomial::zero(space);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn space(&self) -> &VarSpace {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<&Rat> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c);
            }
        }
        None
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().max_by(|(a, _), (b, _)| order.cmp(a, b))
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<Monomial> {
        self.leading(order).map(|(m, _)| m.clone())
    }

    /// Divides by the leading coefficient under `order`.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading(order) {
            None => self.clone(),
            Some((_, c)) => {
                let c = c.clone();
                self.scale(&(Rat::one() / c))
            }
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.space, other.space);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.space, other.space);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Rat) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(&self.space);
        }
        Polynomial {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone() * factor))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.space, other.space);
        let mut out = Polynomial::zero(&self.space);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.space);
        }
        Polynomial {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc.clone() * c))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.space);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.space.arity());
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    term *= point[i].clone();
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitutes `map[i]` for variable `i`; all images must share one
    /// space, which becomes the space of the result.
    pub fn substitute(&self, map: &[Polynomial]) -> Polynomial {
        assert_eq!(map.len(), self.space.arity());
        let target = map
            .first()
            .map(|p| p.space.clone())
            .unwrap_or_else(|| self.space.clone());
        // per-variable power cache
        let mut powers: Vec<Vec<Polynomial>> = map
            .iter()
            .map(|p| vec![Polynomial::one(&target), p.clone()])
            .collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&map[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Re-expresses the polynomial in `target`, sending variable `i` of the
    /// current space to variable `var_map[i]` of the target.
    pub fn embed(&self, target: &VarSpace, var_map: &[usize]) -> Polynomial {
        assert_eq!(var_map.len(), self.space.arity());
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.arity()];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[var_map[i]] += e;
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Embeds into a target space by matching variable names.
    pub fn embed_by_name(&self, target: &VarSpace) -> Result<Polynomial> {
        let map = self
            .space
            .names()
            .iter()
            .map(|n| {
                target.index_of(n).ok_or_else(|| {
                    Error::mismatch(format!("variable `{n}` missing from target space"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.embed(target, &map))
    }

    /// Rewrites into a smaller space; fails if a dropped variable occurs.
    pub fn restrict(&self, target: &VarSpace) -> Result<Polynomial> {
        let mut map = Vec::with_capacity(self.space.arity());
        for (i, n) in self.space.names().iter().enumerate() {
            match target.index_of(n) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|m| m.exp(i) > 0) {
                        return Err(Error::mismatch(format!(
                            "polynomial uses `{n}` which is absent from the target space"
                        )));
                    }
                    map.push(None);
                }
            }
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.arity()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    exps[map[i].unwrap()] += e;
                }
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// The set of variable indices that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.space.arity()];
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        used.iter()
            .enumerate()
            .filter(|(_, &u)| u)
            .map(|(i, _)| i)
            .collect()
    }

    /// Partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.space);
        for (m, c) in &self.terms {
            let e = m.exp(index);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[index] -= 1;
            out.add_term(Monomial::new(exps), c.clone() * Rat::from_integer(e.into()));
        }
        out
    }

    /// Canonical text form; terms sorted descending by `order`.
    pub fn to_string_with(&self, order: MonomialOrder) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut sorted: Vec<(&Monomial, &Rat)> = self.terms.iter().collect();
        sorted.sort_by(|(a, _), (b, _)| order.cmp(b, a));
        let mut out = String::new();
        for (i, (m, c)) in sorted.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut pieces: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                pieces.push(format_rat(&abs));
            }
            for (v, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if e == 1 {
                    pieces.push(self.space.name(v).to_string());
                } else {
                    pieces.push(format!("{}^{}", self.space.name(v), e));
                }
            }
            out.push_str(&pieces.join("*"));
        }
        out
    }

    /// Parses the canonical text format over the given space.
    pub fn parse(space: &VarSpace, text: &str) -> Result<Polynomial> {
        parse_poly(space, text)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(MonomialOrder::GrevLex))
    }
}

// ---------------------------------------------------------------------------
// parsing

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Star,
    Caret,
    Plus,
    Minus,
    End,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().collect(),
            pos: 0,
            text,
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::invalid(format!(
            "{} in `{}` at offset {}",
            msg.into(),
            self.text,
            self.pos
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn next_tok(&mut self) -> Result<Tok> {
        self.skip_ws();
        if self.pos >= self.chars.len() {
            return Ok(Tok::End);
        }
        let c = self.chars[self.pos];
        match c {
            '*' => {
                self.pos += 1;
                Ok(Tok::Star)
            }
            '^' => {
                self.pos += 1;
                Ok(Tok::Caret)
            }
            '+' => {
                self.pos += 1;
                Ok(Tok::Plus)
            }
            '-' | '\u{2212}' => {
                self.pos += 1;
                Ok(Tok::Minus)
            }
            _ if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let mut num: String = self.chars[start..self.pos].iter().collect();
                // optional /q
                let save = self.pos;
                self.skip_ws();
                if self.pos < self.chars.len() && self.chars[self.pos] == '/' {
                    self.pos += 1;
                    self.skip_ws();
                    let dstart = self.pos;
                    while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if dstart == self.pos {
                        return Err(self.error("expected denominator digits"));
                    }
                    num.push('/');
                    num.extend(self.chars[dstart..self.pos].iter());
                } else {
                    self.pos = save;
                }
                Ok(Tok::Num(parse_rat(&num)?))
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                Ok(Tok::Ident(self.chars[start..self.pos].iter().collect()))
            }
            _ => Err(self.error(format!("unexpected character `{c}`"))),
        }
    }

    fn peek(&mut self) -> Result<Tok> {
        let save = self.pos;
        let tok = self.next_tok()?;
        self.pos = save;
        Ok(tok)
    }
}

fn parse_poly(space: &VarSpace, text: &str) -> Result<Polynomial> {
    let mut lx = Lexer::new(text);
    let mut out = Polynomial::zero(space);
    let mut first = true;
    loop {
        let tok = lx.peek()?;
        if tok == Tok::End {
            if first {
                return Err(lx.error("empty polynomial"));
            }
            break;
        }
        // sign prefix
        let mut negative = false;
        loop {
            match lx.peek()? {
                Tok::Plus => {
                    lx.next_tok()?;
                }
                Tok::Minus => {
                    negative = !negative;
                    lx.next_tok()?;
                }
                _ => break,
            }
        }
        let term = parse_term(space, &mut lx)?;
        out = if negative {
            out.sub(&term)
        } else {
            out.add(&term)
        };
        first = false;
    }
    Ok(out)
}

fn parse_term(space: &VarSpace, lx: &mut Lexer) -> Result<Polynomial> {
    let mut coeff = Rat::one();
    let mut exps = vec![0u32; space.arity()];
    let mut saw_factor = false;
    loop {
        match lx.peek()? {
            Tok::Num(v) => {
                lx.next_tok()?;
                coeff *= v;
                saw_factor = true;
            }
            Tok::Ident(name) => {
                lx.next_tok()?;
                let idx = space
                    .index_of(&name)
                    .ok_or_else(|| Error::invalid(format!("unknown variable `{name}`")))?;
                let mut e = 1u32;
                if lx.peek()? == Tok::Caret {
                    lx.next_tok()?;
                    match lx.next_tok()? {
                        Tok::Num(v) => {
                            if !v.denom().is_one() || v.is_negative() {
                                return Err(lx.error("exponent must be a non-negative integer"));
                            }
                            e = v
                                .numer()
                                .try_into()
                                .map_err(|_| lx.error("exponent too large"))?;
                        }
                        _ => return Err(lx.error("expected exponent")),
                    }
                }
                exps[idx] += e;
                saw_factor = true;
            }
            _ => break,
        }
        // optional '*', otherwise end of term
        if lx.peek()? == Tok::Star {
            lx.next_tok()?;
        } else {
            break;
        }
    }
    if !saw_factor {
        return Err(lx.error("expected a term"));
    }
    Ok(Polynomial::from_terms(
        space,
        [(Monomial::new(exps), coeff)],
    ))
}
