//! Text syntax for polynomials and towers.
//!
//! Grammar: integer literals, declared symbols, `+ - * / ^` and parentheses.
//! Division is only by nonzero rational constants; exponents are
//! nonnegative integers.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::error::Result;
use crate::field::Rationals;
use crate::rec::Rec;
use crate::tower::{QRec, RPoly, RingSpec, Tower};

/// Largest degree a parsed power may reach in a free variable.
const MAX_DEGREE: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared symbol `{name}` at {pos}")]
    Undeclared { pos: usize, name: String },
    #[error("exponent too large at {pos}")]
    ExponentOverflow { pos: usize },
    #[error("division by a non-constant or zero at {pos}")]
    BadDivision { pos: usize },
    #[error("extension `{0}` must introduce exactly one new symbol")]
    ExtensionSymbol(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> std::result::Result<Vec<(usize, Tok)>, ParseError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Num(s[st..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    tower: &'a Tower<Rationals>,
    names: &'a [&'a str],
    level: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> std::result::Result<QRec, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = self.tower.add(&acc, &self.term()?);
            } else if self.eat('-') {
                acc = self.tower.sub(&acc, &self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> std::result::Result<QRec, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = self.tower.mul(self.level, &acc, &self.unary()?);
            } else if self.eat('/') {
                let pos = self.here();
                let d = self.unary()?;
                let q = match (&d, d.constant_value()) {
                    (Rec::Zero, _) | (_, None) => return Err(ParseError::BadDivision { pos }),
                    (_, Some(q)) => q.recip(),
                };
                acc = self.tower.scale(&acc, &q);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<QRec, ParseError> {
        if self.eat('-') {
            Ok(self.tower.neg(&self.unary()?))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> std::result::Result<QRec, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.here();
        let e = match self.toks.get(self.pos) {
            Some((_, Tok::Num(n))) => n.clone(),
            _ => return Err(ParseError::Syntax { pos, msg: "expected an exponent".into() }),
        };
        self.pos += 1;
        let e: u64 = e.try_into().map_err(|_| ParseError::ExponentOverflow { pos })?;
        let free_deg = max_free_degree(&base, self.level, self.tower.height());
        if e.checked_mul(free_deg as u64).is_none_or(|d| d > MAX_DEGREE) {
            return Err(ParseError::ExponentOverflow { pos });
        }
        Ok(self.tower.pow(self.level, &base, e))
    }

    fn atom(&mut self) -> std::result::Result<QRec, ParseError> {
        let pos = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                Ok(self.tower.constant(self.level, BigRational::from_integer(n)))
            }
            Some((_, Tok::Ident(name))) => {
                self.pos += 1;
                match self.names.iter().position(|v| *v == name) {
                    Some(i) => Ok(self.tower.var(self.level, i + 1)),
                    None => Err(ParseError::Undeclared { pos, name }),
                }
            }
            Some((_, Tok::Op('('))) => {
                self.pos += 1;
                let v = self.sum()?;
                if !self.eat(')') {
                    return Err(ParseError::Syntax { pos: self.here(), msg: "expected `)`".into() });
                }
                Ok(v)
            }
            Some((_, t)) => Err(ParseError::Syntax { pos, msg: format!("unexpected {t:?}") }),
            None => Err(ParseError::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

/// Largest degree in any variable above the reduced levels.
fn max_free_degree(a: &QRec, level: usize, reduced: usize) -> usize {
    if level <= reduced {
        return 1;
    }
    match a {
        Rec::Zero | Rec::Leaf(_) => 1,
        Rec::Node(c) => c
            .iter()
            .map(|x| max_free_degree(x, level - 1, reduced))
            .max()
            .unwrap_or(1)
            .max(c.len() - 1),
    }
}

/// Parses `text` as a level-`names.len()` element over `tower`.
fn parse_rec(text: &str, tower: &Tower<Rationals>, names: &[&str]) -> std::result::Result<QRec, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), tower, names, level: names.len() };
    let v = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::Syntax { pos: p.here(), msg: "trailing input".into() });
    }
    Ok(v)
}

/// Parses a polynomial in the ring's variables.
pub fn parse_poly(text: &str, ring: &Arc<RingSpec>) -> Result<RPoly> {
    let names = ring.var_names();
    let data = parse_rec(text, ring.tower(), &names)?;
    Ok(RPoly::new(ring.clone(), data))
}

/// Builds a tower from extension expressions, each introducing one new symbol.
///
/// `parse_tower(&["a^2-2", "b^2-3"], "x")` is `Q(√2, √3)` with main variable `x`.
pub fn parse_tower<S: AsRef<str>>(exts: &[S], main_var: &str) -> Result<Arc<RingSpec>> {
    let mut vars: Vec<String> = Vec::new();
    let mut polys: Vec<QRec> = Vec::new();
    for e in exts {
        let text = e.as_ref();
        let mut fresh: Vec<String> = Vec::new();
        for (_, t) in tokenize(text)? {
            if let Tok::Ident(name) = t {
                if !vars.contains(&name) && !fresh.contains(&name) {
                    fresh.push(name);
                }
            }
        }
        if fresh.len() != 1 {
            return Err(ParseError::ExtensionSymbol(text.to_string()).into());
        }
        vars.push(fresh.pop().unwrap());
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        let sub = Tower::new(Rationals, polys.clone());
        polys.push(parse_rec(text, &sub, &names)?);
        // Normalizes and validates before the next level relies on it.
        let spec = RingSpec::new(vars.clone(), main_var, polys.clone())?;
        polys = (1..=spec.height()).map(|i| spec.ext(i).clone()).collect();
    }
    Ok(Arc::new(RingSpec::new(vars, main_var, polys)?))
}

/// Formats a level-`names.len()` element in lexicographic order with the
/// top variable first. `leaf` returns (negative, magnitude text, magnitude is one).
pub(crate) fn format_rec<E>(
    a: &Rec<E>,
    names: &[&str],
    leaf: &impl Fn(&E) -> (bool, String, bool),
) -> String {
    let mut terms: Vec<(Vec<usize>, &E)> = Vec::new();
    collect_terms(a, names.len(), &mut Vec::new(), &mut terms);
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (exps, c)) in terms.iter().enumerate() {
        let (neg, mag, unit) = leaf(c);
        // exps[0] is the top variable, exps[k] belongs to names[len-1-k]
        let mut mono: Vec<String> = Vec::new();
        let k = names.len();
        let mut order: Vec<usize> = vec![0];
        order.extend((1..k).rev());
        for j in order {
            let e = exps[j];
            let v = names[k - 1 - j];
            match e {
                0 => {}
                1 => mono.push(v.to_string()),
                _ => mono.push(format!("{v}^{e}")),
            }
        }
        let body = if mono.is_empty() {
            mag
        } else if unit {
            mono.join("*")
        } else {
            format!("{mag}*{}", mono.join("*"))
        };
        match (i, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

fn collect_terms<'a, E>(a: &'a Rec<E>, level: usize, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a E)>) {
    match a {
        Rec::Zero => {}
        Rec::Leaf(e) => {
            let mut exps = path.clone();
            exps.resize(path.len() + level, 0);
            out.push((exps, e));
        }
        Rec::Node(c) => {
            for (i, x) in c.iter().enumerate().rev() {
                path.push(i);
                collect_terms(x, level - 1, path, out);
                path.pop();
            }
        }
    }
}

pub(crate) fn rational_leaf(q: &BigRational) -> (bool, String, bool) {
    let m = q.abs();
    (q.is_negative(), m.to_string(), m.is_one())
}

impl std::fmt::Display for RPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = self.ring().var_names();
        f.write_str(&format_rec(self.data(), &names, &rational_leaf))
    }
}
