//! Text syntax for fields, elements and quadratic forms.
//!
//! Elements are arithmetic expressions in integers and `sqrt(k)`, such as
//! `5/2 + 1/2*sqrt(21)` or `(3 + sqrt(5))/2`; this accepts everything the
//! `Display` impls print. Forms are homogeneous quadratic polynomials in
//! `x1, x2, ...` such as `x1^2 + x1*x2 + 3*x2^2`, or the shorthands `I4` and
//! `diag(1, 2 + sqrt(3))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::field::{FieldElement, NumberField, RationalField};
use crate::lattice::GramLattice;
use crate::{BiquadField, Error, QuadField, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Num(BigInt),
    Var(usize),
    Sqrt,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token::Num(digits.parse().expect("ascii digits")));
        } else if "+-*/^(),".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "sqrt" => out.push(Token::Sqrt),
                w if w.starts_with('x') && w.len() > 1 => {
                    let k: usize = w[1..]
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable {w}")))?;
                    if k == 0 {
                        return Err(Error::Parse("variables are numbered from x1".into()));
                    }
                    out.push(Token::Var(k - 1));
                }
                _ => return Err(Error::Parse(format!("unknown word {word:?}"))),
            }
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// Polynomial with coefficients in the field, keyed by sorted variable lists.
#[derive(Debug, Clone)]
struct Poly<E>(BTreeMap<Vec<usize>, E>);

impl<E: FieldElement> Poly<E> {
    fn constant(e: E) -> Self {
        let mut m = BTreeMap::new();
        if !e.is_zero() {
            m.insert(Vec::new(), e);
        }
        Poly(m)
    }

    fn as_constant(&self, field: &E::Field) -> Option<E> {
        match self.0.len() {
            0 => Some(field.zero()),
            1 => self.0.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn add(mut self, other: Self) -> Self {
        for (k, v) in other.0 {
            let sum = match self.0.remove(&k) {
                Some(a) => a + v,
                None => v,
            };
            if !sum.is_zero() {
                self.0.insert(k, sum);
            }
        }
        self
    }

    fn neg(self) -> Self {
        Poly(self.0.into_iter().map(|(k, v)| (k, -v)).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Poly(BTreeMap::new());
        for (ka, a) in &self.0 {
            for (kb, b) in &other.0 {
                let mut k = ka.clone();
                k.extend(kb);
                k.sort_unstable();
                let mut term = BTreeMap::new();
                term.insert(k, a.clone() * b.clone());
                out = out.add(Poly(term));
            }
        }
        out
    }
}

struct Parser<'a, F: NumberField> {
    field: &'a F,
    toks: Vec<Token>,
    pos: usize,
}

impl<F: NumberField> Parser<'_, F> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?} at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Poly<F::Elem>> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?);
            } else if self.eat('-') {
                acc = acc.add(self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly<F::Elem>> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self
                    .unary()?
                    .as_constant(self.field)
                    .ok_or_else(|| Error::Parse("division by a non-constant".into()))?;
                let inv = d.inverse().ok_or(Error::DivisionByZero)?;
                acc = acc.mul(&Poly::constant(inv));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly<F::Elem>> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let Some(Token::Num(k)) = self.peek().cloned() else {
                return Err(Error::Parse("exponent must be a literal integer".into()));
            };
            self.pos += 1;
            let k = k.to_u32().filter(|&k| k <= 64).ok_or_else(|| Error::Parse(format!("exponent {k} too large")))?;
            let mut out = Poly::constant(self.field.one());
            for _ in 0..k {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly<F::Elem>> {
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.field.from_rational(BigRational::from_integer(n))))
            }
            Some(Token::Var(k)) => {
                self.pos += 1;
                let mut m = BTreeMap::new();
                m.insert(vec![k], self.field.one());
                Ok(Poly(m))
            }
            Some(Token::Sqrt) => {
                self.pos += 1;
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                let k = arg
                    .as_constant(self.field)
                    .and_then(|c| c.to_rational())
                    .filter(|q| q.is_integer())
                    .ok_or_else(|| Error::Parse("sqrt takes an integer".into()))?
                    .to_integer();
                let r = self
                    .field
                    .radical(&k)
                    .ok_or_else(|| Error::Parse(format!("sqrt({k}) does not lie in {}", self.field)))?;
                Ok(Poly::constant(r))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(Error::Parse(format!("trailing input at {t:?}"))),
        }
    }
}

fn parse_poly<F: NumberField>(field: &F, s: &str) -> Result<Poly<F::Elem>> {
    let mut p = Parser {
        field,
        toks: tokenize(s)?,
        pos: 0,
    };
    let out = p.expr()?;
    p.finish()?;
    Ok(out)
}

/// Parses an element of `field`.
pub fn parse_elem<F: NumberField>(field: &F, s: &str) -> Result<F::Elem> {
    parse_poly(field, s)?
        .as_constant(field)
        .ok_or_else(|| Error::Parse(format!("{s:?} contains variables")))
}

/// Comma-separated elements, with commas inside parentheses left alone.
pub fn parse_elem_list<F: NumberField>(field: &F, s: &str) -> Result<Vec<F::Elem>> {
    split_top_level(s)
        .into_iter()
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_elem(field, p))
        .collect()
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parses `I<n>`, `diag(a, b, ...)` or a quadratic polynomial in
/// `x1, ..., xn`. For a polynomial the rank is the largest variable index,
/// and the coefficient of `x_i x_j` is split evenly between the two
/// off-diagonal Gram entries.
pub fn parse_form<F: NumberField>(field: &F, s: &str) -> Result<GramLattice<F>> {
    let t = s.trim();
    if let Some(n) = t.strip_prefix('I').and_then(|n| n.parse::<usize>().ok()) {
        return Ok(GramLattice::identity(field.clone(), n));
    }
    if let Some(inner) = t.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        return Ok(GramLattice::diagonal(field.clone(), parse_elem_list(field, inner)?));
    }
    let poly = parse_poly(field, t)?;
    let n = poly.0.keys().flatten().map(|&k| k + 1).max().unwrap_or(0);
    let mut gram = vec![vec![field.zero(); n]; n];
    let half = BigRational::new(1.into(), 2.into());
    for (mono, c) in poly.0 {
        match mono.as_slice() {
            [i, j] if i == j => gram[*i][*i] = c,
            [i, j] => {
                let h = c.scale(&half);
                gram[*i][*j] = h.clone();
                gram[*j][*i] = h;
            }
            _ => return Err(Error::Parse(format!("{s:?} is not a quadratic form"))),
        }
    }
    GramLattice::new(field.clone(), gram)
}

/// The fields accepted on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyField {
    Rational,
    Quad(QuadField),
    Biquad(BiquadField),
}

/// Parses `Q`, `Q(sqrt(d))` or `Q(sqrt(d1), sqrt(d2))`.
pub fn parse_field(s: &str) -> Result<AnyField> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "Q" {
        return Ok(AnyField::Rational);
    }
    let inner = compact
        .strip_prefix("Q(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("unknown field {s:?}")))?;
    let radicands: Vec<i128> = split_top_level(inner)
        .into_iter()
        .map(|p| {
            let digits = p
                .strip_prefix("sqrt(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("expected sqrt(d), got {p:?}")))?;
            digits
                .parse::<i128>()
                .map_err(|_| Error::Parse(format!("bad radicand {digits:?}")))
        })
        .collect::<Result<_>>()?;
    match radicands.as_slice() {
        [d] => Ok(AnyField::Quad(QuadField::new(*d)?)),
        [d1, d2] => Ok(AnyField::Biquad(BiquadField::new(*d1, *d2)?)),
        _ => Err(Error::Parse(format!("unsupported field {s:?}"))),
    }
}

/// Parses a rational such as `3`, `7/2` or `-1/3`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    Ok(parse_elem(&RationalField, s)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn elements() {
        let k = QuadField::new(21).unwrap();
        let e = parse_elem(&k, "5/2 + 1/2*sqrt(21)").unwrap();
        assert_eq!(e, k.elem(rat(5, 2), rat(1, 2)));
        assert_eq!(parse_elem(&k, "(5 + sqrt(21))/2").unwrap(), e);
        assert_eq!(parse_elem(&k, &e.to_string()).unwrap(), e);
        assert!(parse_elem(&k, "sqrt(5)").is_err());
        assert!(parse_elem(&k, "1/0").is_err());
        assert!(parse_elem(&k, "2 +").is_err());
        assert_eq!(parse_elem(&k, "sqrt(84)").unwrap(), k.elem(int(0), int(2)));
    }

    #[test]
    fn forms() {
        let l = parse_form(&RationalField, "x1^2 + 3*x1*x2 + 2*x2^2").unwrap();
        assert_eq!(l.gram()[0][1].0, rat(3, 2));
        assert_eq!(l.rank(), 2);
        assert_eq!(parse_form(&RationalField, "I4").unwrap().rank(), 4);
        assert!(parse_form(&RationalField, "x1^3").is_err());
        assert!(parse_form(&RationalField, "x1 + x2").is_err());
    }

    #[test]
    fn fields() {
        assert_eq!(parse_field("Q").unwrap(), AnyField::Rational);
        assert!(matches!(parse_field("Q(sqrt(5))").unwrap(), AnyField::Quad(_)));
        assert!(matches!(parse_field("Q(sqrt(3), sqrt(7))").unwrap(), AnyField::Biquad(_)));
        assert!(parse_field("R").is_err());
    }
}
