//! Text syntax for Weyl-algebra elements.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor (['*'] factor)*        juxtaposition is the product
//! factor := '-' factor | atom ['^' INT]
//! atom   := INT ['/' INT] | VAR | '(' expr ')'
//! ```
//!
//! Variables are `x1..xn` and `d1..dn`; for `n ≤ 4` the aliases `x y z w`
//! and `dx dy dz dw` are accepted as well. Products are noncommutative and
//! read left to right.

use num_bigint::BigInt;

use super::element::WeylElement;
use super::monomial::Generator;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(text[start..i].parse().expect("digits")), start));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{c}`") }),
        };
        out.push((tok, start));
        i += c.len_utf8();
    }
    Ok(out)
}

fn resolve(name: &str, n: usize, pos: usize) -> Result<Generator> {
    const ALIASES: [&str; 4] = ["x", "y", "z", "w"];
    let unknown = || Error::UnknownVariable { name: name.to_string(), pos };
    if n <= 4 {
        if let Some(i) = ALIASES.iter().position(|a| *a == name) {
            return if i < n { Ok(Generator::X(i)) } else { Err(unknown()) };
        }
        if let Some(rest) = name.strip_prefix('d') {
            if let Some(i) = ALIASES.iter().position(|a| *a == rest) {
                return if i < n { Ok(Generator::D(i)) } else { Err(unknown()) };
            }
        }
    }
    let (kind, digits) = if let Some(r) = name.strip_prefix('x') {
        (true, r)
    } else if let Some(r) = name.strip_prefix('d') {
        (false, r)
    } else {
        return Err(unknown());
    };
    match digits.parse::<usize>() {
        Ok(k) if k >= 1 && k <= n && !digits.starts_with('0') => {
            Ok(if kind { Generator::X(k - 1) } else { Generator::D(k - 1) })
        }
        _ => Err(unknown()),
    }
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    n: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<WeylElement> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WeylElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<WeylElement> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some(Tok::Int(e)) => {
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| Error::Syntax { pos, msg: "exponent too large".into() })?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Syntax { pos, msg: "expected a nonnegative integer exponent".into() }),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<WeylElement> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(num)) => {
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dpos = self.here();
                    match self.bump() {
                        Some(Tok::Int(den)) => {
                            let r = Rational::from_bigints(num, den)
                                .ok_or(Error::Syntax { pos: dpos, msg: "zero denominator".into() })?;
                            Ok(WeylElement::constant(self.n, r))
                        }
                        _ => Err(Error::Syntax { pos: dpos, msg: "expected an integer denominator".into() }),
                    }
                } else {
                    Ok(WeylElement::constant(self.n, Rational::from(num)))
                }
            }
            Some(Tok::Ident(name)) => Ok(WeylElement::generator(self.n, resolve(&name, self.n, pos)?)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Syntax { pos: close, msg: "expected `)`".into() }),
                }
            }
            Some(t) => Err(Error::Syntax { pos, msg: format!("unexpected token {t:?}") }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parses `text` as an element of `D_n`.
pub fn parse(text: &str, n: usize) -> Result<WeylElement> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0, n, end: text.len() };
    let e = p.expr()?;
    if p.pos < toks.len() {
        return Err(Error::Syntax { pos: p.here(), msg: "trailing input".into() });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::WeylMonomial;

    #[test]
    fn noncommutative_reading_order() {
        assert_eq!(parse("dx*x", 1).unwrap(), parse("x dx + 1", 1).unwrap());
        assert_eq!(parse("x*dx", 1).unwrap().len(), 1);
    }

    #[test]
    fn rational_literal_terms() {
        let e = parse("x^2 - 3/2*dy", 2).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.coefficient(&WeylMonomial::new(vec![2, 0], vec![0, 0])), Rational::one());
        assert_eq!(e.coefficient(&WeylMonomial::new(vec![0, 0], vec![0, 1])), Rational::new(-3, 2));
    }

    #[test]
    fn multicross_product() {
        let f = parse("y*(x+y)*(x+2*y)", 2).unwrap();
        assert_eq!(f, parse("x^2*y + 3*x*y^2 + 2*y^3", 2).unwrap());
    }

    #[test]
    fn indexed_names_and_aliases() {
        assert_eq!(parse("x2*d2", 2).unwrap(), parse("y*dy", 2).unwrap());
        assert_eq!(parse("x5*d5", 5).unwrap().len(), 1);
        assert!(matches!(parse("y", 1), Err(Error::UnknownVariable { .. })));
        assert!(matches!(parse("x", 5), Err(Error::UnknownVariable { .. })));
        assert!(matches!(parse("x3", 2), Err(Error::UnknownVariable { .. })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(parse("x + ", 1).unwrap_err(), Error::Syntax { pos: 4, msg: "unexpected end of input".into() });
        assert!(matches!(parse("x^y", 2), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("(x", 1), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x ? y", 2), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn power_binds_to_preceding_atom() {
        assert_eq!(parse("2x^2", 1).unwrap(), parse("2*(x*x)", 1).unwrap());
        assert_eq!(parse("(dx x)^2", 1).unwrap(), parse("(x*dx+1)*(x*dx+1)", 1).unwrap());
    }
}
