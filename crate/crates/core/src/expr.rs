//! Tiny expression language for function-field elements, e.g. `1/(1-x)`,
//! `y/x^2`, `[3]*x+1`.
//!
//! Integer literals map into the prime subfield, `[n]` is the field element
//! with digit index `n`, and `g` is the generator of `F_q` over `F_p`.
//! Juxtaposition multiplies (`2x`).

use crate::error::{Error, Result};
use crate::function_field::FunctionField;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Index(usize),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let n: String = cs[st..i].iter().collect();
            out.push(Tok::Num(n.parse().map_err(|_| Error::Parse(format!("number {n:?} too large")))?));
        } else if c == '[' {
            let close = cs[i..].iter().position(|&c| c == ']').ok_or_else(|| Error::Parse("unclosed '['".into()))?;
            let n: String = cs[i + 1..i + close].iter().collect();
            out.push(Tok::Index(n.trim().parse().map_err(|_| Error::Parse(format!("bad index [{n}]")))?));
            i += close + 1;
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a, F: FunctionField> {
    ff: &'a F,
    toks: Vec<Tok>,
    pos: usize,
}

impl<F: FunctionField> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<F::Elem> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = self.ff.add(&acc, &self.term()?);
            } else if self.eat('-') {
                acc = self.ff.sub(&acc, &self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<F::Elem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = self.ff.mul(&acc, &self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = self.ff.mul(&acc, &self.ff.inv(&d)?);
            } else if matches!(self.peek(), Some(Tok::Ident(_) | Tok::Index(_) | Tok::Op('('))) {
                acc = self.ff.mul(&acc, &self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<F::Elem> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(self.ff.neg(&v));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return Err(Error::Parse("expected integer exponent".into()));
            };
            self.pos += 1;
            return self.ff.pow(&base, if neg { -n } else { n });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<F::Elem> {
        let k = self.ff.field();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.ff.constant(k.from_int(n)))
            }
            Some(Tok::Index(i)) => {
                self.pos += 1;
                Ok(self.ff.constant(k.elem(i)?))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "g" {
                    return Ok(self.ff.constant(k.generator()));
                }
                self.ff.variable(&name).ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_element<F: FunctionField>(ff: &F, s: &str) -> Result<F::Elem> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { ff, toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{field_of_size, prime_field};
    use crate::poly::Poly;
    use crate::ratfunc::{RatFunc, RationalFunctionField};

    #[test]
    fn parses_rational_functions() {
        let ff = RationalFunctionField::new(prime_field(3).unwrap());
        let k = ff.field();
        let f = parse_element(&ff, "1/(1-x)").unwrap();
        let expect = RatFunc::new(Poly::one(k), Poly::from_indices(k, &[1, 2]).unwrap(), k).unwrap();
        assert_eq!(f, expect);
        let g = parse_element(&ff, "2x^2 + x - 1").unwrap();
        assert_eq!(g, RatFunc::poly(Poly::from_indices(k, &[2, 1, 2]).unwrap(), k));
        assert_eq!(parse_element(&ff, "x^-2").unwrap(), ff.inv(&parse_element(&ff, "x*x").unwrap()).unwrap());
        assert!(parse_element(&ff, "1/0").is_err());
        assert!(parse_element(&ff, "y").is_err());
        assert!(parse_element(&ff, "(x").is_err());
        assert!(parse_element(&ff, "").is_err());
    }

    #[test]
    fn extension_field_constants() {
        let ff = RationalFunctionField::new(field_of_size(4).unwrap());
        let k = ff.field();
        assert_eq!(parse_element(&ff, "[3]").unwrap(), ff.constant(k.elem(3).unwrap()));
        assert_eq!(parse_element(&ff, "g").unwrap(), ff.constant(k.generator()));
        assert!(parse_element(&ff, "[4]").is_err());
    }
}
