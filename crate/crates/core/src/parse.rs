//! Text grammar for polynomials: signed terms joined by `+`/`-`, each a
//! `*`-product of integer or `p/q` coefficients and `ident` / `ident^k`
//! powers. Example: `x^2*y - 3/2*x + 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::mpoly::MPoly;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

#[derive(Default)]
struct Term {
    coeff_num: Vec<BigInt>,
    coeff_den: Vec<BigInt>,
    powers: Vec<(String, u32)>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn factor(&mut self, term: &mut Term) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let d = self.integer()?;
                    if d == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                    term.coeff_den.push(d);
                }
                term.coeff_num.push(n);
                Ok(())
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .to_string();
                self.skip_ws();
                let mut e = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    let k = self.integer()?;
                    e = match u32::try_from(k) {
                        Ok(k) => k,
                        Err(_) => return self.err("exponent too large"),
                    };
                }
                term.powers.push((name, e));
                Ok(())
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = Term::default();
        self.factor(&mut t)?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.factor(&mut t)?;
            } else {
                return Ok(t);
            }
        }
    }

    fn expr(&mut self) -> Result<Vec<(bool, Term)>> {
        let mut out = Vec::new();
        self.skip_ws();
        let mut neg = false;
        if self.peek() == Some(b'-') {
            neg = true;
            self.pos += 1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        out.push((neg, self.term()?));
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => neg = false,
                Some(b'-') => neg = true,
                Some(c) => return self.err(format!("unexpected `{}`", c as char)),
            }
            self.pos += 1;
            out.push((neg, self.term()?));
        }
    }
}

fn build<F: Scalar>(terms: Vec<(bool, Term)>, declared: &[&str]) -> MPoly<F> {
    let mut vars: Vec<String> = declared.iter().map(|s| s.to_string()).collect();
    for (_, t) in &terms {
        for (v, _) in &t.powers {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
    }
    let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut acc: BTreeMap<Vec<u32>, F> = BTreeMap::new();
    for (neg, t) in terms {
        let mut c = F::one();
        for n in &t.coeff_num {
            c = c * F::from_bigint(n);
        }
        for d in &t.coeff_den {
            // nonzero integers may still vanish in a prime field
            c = c.checked_div(&F::from_bigint(d)).unwrap_or_else(F::zero);
        }
        if neg {
            c = -c;
        }
        let mut e = vec![0u32; vars.len()];
        for (v, k) in &t.powers {
            let i = vars.iter().position(|w| w == v).unwrap();
            e[i] += k;
        }
        let slot = acc.entry(e).or_insert_with(F::zero);
        *slot = slot.clone() + c;
    }
    MPoly::from_terms(&names, acc)
}

fn parse_line<F: Scalar>(text: &str, declared: &[&str], line: usize) -> Result<MPoly<F>> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        line,
    };
    let terms = p.expr()?;
    Ok(build(terms, declared))
}

/// Parse a polynomial; variables are ordered by first appearance.
pub fn parse_poly<F: Scalar>(text: &str) -> Result<MPoly<F>> {
    parse_line(text, &[], 1)
}

/// Parse with a fixed leading variable list (extra variables are appended).
pub fn parse_poly_in<F: Scalar>(text: &str, vars: &[&str]) -> Result<MPoly<F>> {
    parse_line(text, vars, 1)
}

/// One polynomial per non-empty line; `#` starts a comment. Errors carry
/// the 1-based line and column.
pub fn parse_lines<F: Scalar>(text: &str, vars: &[&str]) -> Result<Vec<MPoly<F>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        out.push(parse_line(body, vars, i + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn parses_grammar_example() {
        let p = parse_poly::<Q>("x^2*y - 3/2*x + 1").unwrap();
        assert_eq!(p.vars(), &["x".to_string(), "y".to_string()]);
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.to_string(), "x^2*y - 3/2*x + 1");
    }

    #[test]
    fn like_terms_merge() {
        let p = parse_poly::<Q>("x + 2*x - 3*x").unwrap();
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn double_plus_is_an_error() {
        match parse_poly::<Q>("x ++ y") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 1);
                assert_eq!(column, 4);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn lines_and_comments() {
        let ps = parse_lines::<Q>("# ideal\ny - x^2\n\nx^3 # cube\n", &["x", "y"]).unwrap();
        assert_eq!(ps.len(), 2);
        match parse_lines::<Q>("x\n y + * 2", &["x", "y"]) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 6)),
            other => panic!("{other:?}"),
        }
    }
}
