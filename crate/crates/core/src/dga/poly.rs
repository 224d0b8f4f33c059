//! Noncommutative polynomials over named generators and their parser.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! poly   := ["+" | "-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := integer | name
//! ```
//!
//! A term is the product of its integer factors times the word formed by
//! its name factors in order. A term with no names is a multiple of 1.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::{GroundField, Scalar};

/// A word in generator indices. The empty word is the unit.
pub type Word = Vec<usize>;

/// Finite linear combination of words, kept in length-then-lexicographic
/// order with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: GroundField,
    terms: BTreeMap<(usize, Word), Scalar>,
}

impl Poly {
    pub fn zero(field: GroundField) -> Self {
        Poly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: GroundField, word: Word, coeff: Scalar) -> Self {
        let mut p = Self::zero(field);
        p.add_term(word, &coeff);
        p
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, word: Word, coeff: &Scalar) {
        let f = self.field;
        let key = (word.len(), word);
        let entry = self.terms.entry(key.clone()).or_insert_with(|| f.zero());
        *entry = f.add(entry, coeff);
        if f.is_zero(entry) {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Scalar) {
        for (w, a) in other.terms() {
            self.add_term(w.clone(), &self.field.mul(c, a));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter().map(|((_, w), c)| (w, c))
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Poly) -> Poly {
        let f = self.field;
        let mut out = Poly::zero(f);
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, &f.mul(a, b));
            }
        }
        out
    }

    /// Largest generator index occurring, if any.
    pub fn max_letter(&self) -> Option<usize> {
        self.terms().flat_map(|(w, _)| w.iter().copied()).max()
    }

    /// Renders the polynomial with the given generator names.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        let f = self.field;
        for (k, (w, c)) in self.terms().enumerate() {
            let negative = c.to_string().starts_with('-');
            let c = &if negative { f.neg(c) } else { c.clone() };
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let word: Vec<&str> = w.iter().map(|&i| names[i].as_str()).collect();
            let one = f.is_one(c);
            match (word.is_empty(), one) {
                (true, _) => out.push_str(&c.to_string()),
                (false, true) => out.push_str(&word.join("*")),
                (false, false) => {
                    out.push_str(&c.to_string());
                    out.push('*');
                    out.push_str(&word.join("*"));
                }
            }
        }
        out
    }
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }
}

/// Parses `text` over generators `names`.
pub fn parse_poly(field: GroundField, names: &[String], text: &str) -> Result<Poly> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    let mut out = Poly::zero(field);
    let mut first = true;
    loop {
        let mut sign = field.one();
        match p.peek() {
            None if first => return Err(p.err("empty polynomial")),
            None => return Err(p.err("expected a term")),
            Some(b'+') => p.pos += 1,
            Some(b'-') => {
                p.pos += 1;
                sign = field.from_i64(-1);
            }
            Some(_) if first => {}
            Some(c) => return Err(p.err(format!("expected '+' or '-', found {:?}", c as char))),
        }
        first = false;
        let (word, coeff) = parse_term(field, names, &mut p)?;
        out.add_term(word, &field.mul(&sign, &coeff));
        match p.peek() {
            None => return Ok(out),
            Some(b'+') | Some(b'-') => {}
            Some(c) => return Err(p.err(format!("unexpected character {:?}", c as char))),
        }
    }
}

fn parse_term(field: GroundField, names: &[String], p: &mut Parser) -> Result<(Word, Scalar)> {
    let mut word = Vec::new();
    let mut coeff = field.one();
    loop {
        let c = p.peek().ok_or_else(|| p.err("expected a factor"))?;
        let start = p.pos;
        if c.is_ascii_digit() {
            while p.pos < p.text.len() && p.text[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            // optional denominator
            if p.text.get(p.pos) == Some(&b'/') {
                p.pos += 1;
                while p.pos < p.text.len() && p.text[p.pos].is_ascii_digit() {
                    p.pos += 1;
                }
            }
            let lit = std::str::from_utf8(&p.text[start..p.pos]).expect("ascii");
            let v = field.parse_scalar(lit).map_err(|_| Error::Parse {
                offset: start,
                message: format!("bad coefficient {lit}"),
            })?;
            coeff = field.mul(&coeff, &v);
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while p.pos < p.text.len()
                && (p.text[p.pos].is_ascii_alphanumeric() || matches!(p.text[p.pos], b'_' | b'\''))
            {
                p.pos += 1;
            }
            let name = std::str::from_utf8(&p.text[start..p.pos]).expect("ascii");
            let idx = names.iter().position(|n| n == name).ok_or(Error::Parse {
                offset: start,
                message: format!("unknown generator {name:?}"),
            })?;
            word.push(idx);
        } else {
            return Err(p.err(format!("unexpected character {:?}", c as char)));
        }
        if p.peek() == Some(b'*') {
            p.pos += 1;
        } else {
            return Ok((word, coeff));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn parses_and_collects() {
        let q = GroundField::Rationals;
        let p = parse_poly(q, &names(), " x*y - 2*y * x + x*y + 3").unwrap();
        let terms: Vec<_> = p.terms().map(|(w, c)| (w.clone(), c.to_string())).collect();
        assert_eq!(
            terms,
            vec![
                (vec![], "3".to_string()),
                (vec![0, 1], "2".to_string()),
                (vec![1, 0], "-2".to_string())
            ]
        );
        assert_eq!(p.render(&names()), "3 + 2*x*y - 2*y*x");
        let r = parse_poly(q, &names(), "-1/2*x*x + 3/4 - y").unwrap();
        assert_eq!(r.render(&names()), "3/4 - y - 1/2*x*x");
        assert_eq!(parse_poly(q, &names(), &r.render(&names())).unwrap(), r);
    }

    #[test]
    fn reduces_mod_p() {
        let f2 = GroundField::prime(2).unwrap();
        assert!(parse_poly(f2, &names(), "x + x").unwrap().is_zero());
        assert!(parse_poly(f2, &names(), "2*y").unwrap().is_zero());
    }

    #[test]
    fn reports_offsets() {
        let q = GroundField::Rationals;
        assert!(matches!(
            parse_poly(q, &names(), "x + z"),
            Err(Error::Parse { offset: 4, .. })
        ));
        assert!(matches!(parse_poly(q, &names(), "x *"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly(q, &names(), ""), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(parse_poly(q, &names(), "x y"), Err(Error::Parse { offset: 2, .. })));
    }
}
