use std::collections::BTreeMap;
use std::fmt;

use super::monomial::{x_name, WeylMonomial};
use crate::rational::Rational;

/// A commutative polynomial in `x_i` and `ξ_i`, the home of principal symbols.
/// Exponents reuse [`WeylMonomial`], with the `∂` slots read as `ξ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolPolynomial {
    n: usize,
    terms: BTreeMap<WeylMonomial, Rational>,
}

impl SymbolPolynomial {
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (WeylMonomial, Rational)>) -> Self {
        let mut map: BTreeMap<WeylMonomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            let entry = map.entry(m).or_insert_with(Rational::zero);
            *entry += &c;
        }
        map.retain(|_, c| !c.is_zero());
        SymbolPolynomial { n, terms: map }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylMonomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn mul(&self, other: &SymbolPolynomial) -> SymbolPolynomial {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.push((a.commutative_mul(b), ca * cb));
            }
        }
        SymbolPolynomial::from_terms(self.n, out)
    }
}

fn xi_name(n: usize, i: usize) -> String {
    match n {
        1 => "ξ".to_string(),
        2..=4 => format!("ξ{}", x_name(n, i)),
        _ => format!("ξ{}", i + 1),
    }
}

impl fmt::Display for SymbolPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, &e) in m.x_exp().iter().enumerate() {
                if e > 0 {
                    factors.push(if e == 1 { x_name(self.n, i) } else { format!("{}^{e}", x_name(self.n, i)) });
                }
            }
            for (i, &e) in m.d_exp().iter().enumerate() {
                if e > 0 {
                    factors.push(if e == 1 { xi_name(self.n, i) } else { format!("{}^{e}", xi_name(self.n, i)) });
                }
            }
            let sep = if first { if c.is_negative() { "-" } else { "" } } else if c.is_negative() { " - " } else { " + " };
            first = false;
            let abs = c.abs();
            let body = factors.join("*");
            if body.is_empty() {
                write!(f, "{sep}{abs}")?;
            } else if abs.is_one() {
                write!(f, "{sep}{body}")?;
            } else {
                write!(f, "{sep}{abs}*{body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymbolPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
