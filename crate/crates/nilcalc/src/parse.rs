//! Text forms of polynomials and differential operators.
//!
//! Polynomials use variables `x1..xn`, operators add the generators
//! `X1..Xn`: `x1*X1^2 + (1 - x2)*X3 - 3/2`. Generators in a product must
//! appear in nondecreasing index order; the product is the ordered monomial
//! X^β.

use nilcalc_core::rational::parse_rational;
use nilcalc_core::{MultiIndex, Polynomial, Rational, VarCoeffOperator};
use num_traits::One;

use crate::error::{NumError, NumResult};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Var(usize),
    Gen(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn err(msg: impl Into<String>) -> NumError {
    NumError::Config(msg.into())
}

fn lex(s: &str) -> NumResult<Vec<Tok>> {
    let c: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < c.len() {
        let ch = c[i];
        match ch {
            ' ' | '\t' => i += 1,
            '+' => { out.push(Tok::Plus); i += 1; }
            '-' => { out.push(Tok::Minus); i += 1; }
            '*' => { out.push(Tok::Star); i += 1; }
            '^' => { out.push(Tok::Caret); i += 1; }
            '(' => { out.push(Tok::Open); i += 1; }
            ')' => { out.push(Tok::Close); i += 1; }
            'x' | 'X' => {
                let start = i + 1;
                let mut j = start;
                while j < c.len() && c[j].is_ascii_digit() {
                    j += 1;
                }
                let idx: usize = c[start..j].iter().collect::<String>().parse().map_err(|_| err(format!("expected an index after {ch:?}")))?;
                if idx == 0 {
                    return Err(err("indices start at 1"));
                }
                out.push(if ch == 'x' { Tok::Var(idx - 1) } else { Tok::Gen(idx - 1) });
                i = j;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < c.len() && (c[j].is_ascii_digit() || c[j] == '/') {
                    j += 1;
                }
                out.push(Tok::Num(c[i..j].iter().collect()));
                i = j;
            }
            other => return Err(err(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

/// Sum of (coefficient polynomial, β) terms.
type Terms = Vec<(Polynomial, MultiIndex)>;

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn exponent(&mut self) -> NumResult<u32> {
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some(Tok::Num(s)) => {
                    self.pos += 1;
                    s.parse().map_err(|_| err(format!("bad exponent {s:?}")))
                }
                _ => Err(err("expected an exponent after '^'")),
            }
        } else {
            Ok(1)
        }
    }

    fn sum(&mut self) -> NumResult<Terms> {
        let mut out: Terms = Vec::new();
        let mut sign = Rational::one();
        if self.peek() == Some(&Tok::Minus) {
            sign = -sign;
            self.pos += 1;
        } else if self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
        }
        loop {
            for (p, b) in self.product()? {
                out.push((p.scale(&sign), b));
            }
            match self.peek() {
                Some(Tok::Plus) => { sign = Rational::one(); self.pos += 1; }
                Some(Tok::Minus) => { sign = -Rational::one(); self.pos += 1; }
                _ => return Ok(out),
            }
        }
    }

    fn product(&mut self) -> NumResult<Terms> {
        let mut acc: Terms = vec![(Polynomial::one(self.n), MultiIndex::zero(self.n))];
        let mut last_gen: Option<usize> = None;
        loop {
            let is_gen = matches!(self.peek(), Some(Tok::Gen(_)));
            if !is_gen && last_gen.is_some() {
                return Err(err("coefficients must precede the generators in a product"));
            }
            let factor: Terms = match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(s)) => {
                    self.pos += 1;
                    let r = parse_rational(&s).map_err(|e| err(e.to_string()))?;
                    vec![(Polynomial::constant(self.n, r), MultiIndex::zero(self.n))]
                }
                Some(Tok::Var(i)) => {
                    self.pos += 1;
                    if i >= self.n {
                        return Err(err(format!("x{} exceeds dimension {}", i + 1, self.n)));
                    }
                    let e = self.exponent()?;
                    vec![(Polynomial::var(self.n, i).pow(e), MultiIndex::zero(self.n))]
                }
                Some(Tok::Gen(i)) => {
                    self.pos += 1;
                    if i >= self.n {
                        return Err(err(format!("X{} exceeds dimension {}", i + 1, self.n)));
                    }
                    if last_gen.is_some_and(|l| l > i) {
                        return Err(err("generators must appear in nondecreasing index order"));
                    }
                    last_gen = Some(i);
                    let e = self.exponent()?;
                    let mut b = vec![0; self.n];
                    b[i] = e;
                    vec![(Polynomial::one(self.n), MultiIndex::new(b))]
                }
                Some(Tok::Open) => {
                    self.pos += 1;
                    let inner = self.sum()?;
                    if self.peek() != Some(&Tok::Close) {
                        return Err(err("unbalanced parenthesis"));
                    }
                    self.pos += 1;
                    if inner.iter().any(|(_, b)| !b.is_zero()) {
                        return Err(err("parenthesized factors must be polynomials"));
                    }
                    let e = self.exponent()?;
                    let mut p = Polynomial::zero(self.n);
                    for (q, _) in inner {
                        p += &q;
                    }
                    vec![(p.pow(e), MultiIndex::zero(self.n))]
                }
                _ => return Err(err("expected a number, variable, generator or '('")),
            };
            acc = acc
                .into_iter()
                .flat_map(|(p, b)| factor.iter().map(move |(q, c)| (&p * q, b.add(c))))
                .collect();
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                return Ok(acc);
            }
        }
    }
}

fn parse_terms(s: &str, n: usize) -> NumResult<Terms> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(err("empty expression"));
    }
    let mut p = Parser { toks: &toks, pos: 0, n };
    let out = p.sum()?;
    if p.pos != toks.len() {
        return Err(err(format!("trailing input in {s:?}")));
    }
    Ok(out)
}

/// Polynomial in x1..xn.
pub fn parse_polynomial(s: &str, n: usize) -> NumResult<Polynomial> {
    let mut out = Polynomial::zero(n);
    for (p, b) in parse_terms(s, n)? {
        if !b.is_zero() {
            return Err(err("generators are not allowed in a polynomial"));
        }
        out += &p;
    }
    Ok(out)
}

/// Σ p_β(x) X^β.
pub fn parse_operator(s: &str, weights: &[u32]) -> NumResult<VarCoeffOperator> {
    let mut out = VarCoeffOperator::zero(weights);
    for (p, b) in parse_terms(s, weights.len())? {
        out.add_term(b, p);
    }
    Ok(out)
}

/// Comma-separated multi-index.
pub fn parse_multi_index(s: &str, n: usize) -> NumResult<MultiIndex> {
    let v: Result<Vec<u32>, _> = s.split(',').map(|t| t.trim().parse::<u32>()).collect();
    let v = v.map_err(|_| err(format!("bad multi-index {s:?}")))?;
    if v.len() != n {
        return Err(err(format!("multi-index {s:?} has {} entries, the group has dimension {n}", v.len())));
    }
    Ok(MultiIndex::new(v))
}

/// Comma-separated point with rational entries.
pub fn parse_point(s: &str, n: usize) -> NumResult<Vec<Rational>> {
    let v: Result<Vec<Rational>, _> = s.split(',').map(|t| parse_rational(t.trim())).collect();
    let v = v.map_err(|e| err(e.to_string()))?;
    if v.len() != n {
        return Err(err(format!("point {s:?} has {} entries, the group has dimension {n}", v.len())));
    }
    Ok(v)
}
