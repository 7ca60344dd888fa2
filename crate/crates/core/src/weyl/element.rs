use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::{FiltrationKind, Generator, WeylMonomial};
use super::symbol::SymbolPolynomial;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// An element of the Weyl algebra `D_n` over `Q`, stored as a normal-ordered
/// linear combination of monomials. No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    n: usize,
    terms: BTreeMap<WeylMonomial, Rational>,
}

impl WeylElement {
    pub fn zero(n: usize) -> Self {
        WeylElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        WeylElement::monomial(WeylMonomial::one(n), Rational::one())
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        WeylElement::monomial(WeylMonomial::one(n), c)
    }

    pub fn monomial(m: WeylMonomial, c: Rational) -> Self {
        let n = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        WeylElement { n, terms }
    }

    pub fn generator(n: usize, g: Generator) -> Self {
        WeylElement::monomial(WeylMonomial::generator(n, g), Rational::one())
    }

    pub fn x(n: usize, i: usize) -> Self {
        WeylElement::generator(n, Generator::X(i))
    }

    pub fn d(n: usize, i: usize) -> Self {
        WeylElement::generator(n, Generator::D(i))
    }

    /// Builds an element from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (WeylMonomial, Rational)>) -> Self {
        let mut e = WeylElement::zero(n);
        for (m, c) in terms {
            assert_eq!(m.nvars(), n, "monomial has wrong variable count");
            e.add_term(m, &c);
        }
        e
    }

    /// Parses an expression in `n` variables; see [`super::parse`].
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        super::parse::parse(text, n)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&WeylMonomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &WeylMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest monomial in the term order, with its coefficient.
    pub fn leading_term(&self) -> Option<(&WeylMonomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: WeylMonomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> WeylElement {
        if c.is_zero() {
            return WeylElement::zero(self.n);
        }
        WeylElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    fn check_same(&self, other: &WeylElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &WeylElement) -> Result<WeylElement> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &WeylElement) -> Result<WeylElement> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    /// The normal-ordered product `self · other`.
    pub fn try_mul(&self, other: &WeylElement) -> Result<WeylElement> {
        self.check_same(other)?;
        let mut out = WeylElement::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let coeff = ca * cb;
                for (m, c) in monomial_product(ma, mb) {
                    out.add_term(m, &(&coeff * &c));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> WeylElement {
        let mut acc = WeylElement::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Maximum degree over the terms; `None` for the zero element.
    pub fn degree(&self, kind: FiltrationKind) -> Option<u32> {
        self.terms.keys().map(|m| m.degree(kind)).max()
    }

    /// Top-degree part with `∂_i` replaced by commuting `ξ_i`.
    pub fn principal_symbol(&self, kind: FiltrationKind) -> Result<SymbolPolynomial> {
        let top = self.degree(kind).ok_or(Error::ZeroElement)?;
        Ok(SymbolPolynomial::from_terms(
            self.n,
            self.terms
                .iter()
                .filter(|(m, _)| m.degree(kind) == top)
                .map(|(m, c)| (m.clone(), c.clone())),
        ))
    }

    /// True when no term contains a `∂`.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(WeylMonomial::is_polynomial)
    }

    pub fn require_polynomial(&self) -> Result<()> {
        if self.is_polynomial() {
            Ok(())
        } else {
            Err(Error::NotPolynomial(self.to_string()))
        }
    }

    /// The part of the element whose monomials have Bernstein degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> WeylElement {
        WeylElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree(FiltrationKind::Bernstein) == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

/// `multiply(a, b)`: the normal-ordered product, or a dimension error.
pub fn multiply(a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
    a.try_mul(b)
}

/// Product of two normal-ordered monomials via
/// `∂^b x^a = Σ_k C(b,k)·a!/(a−k)!·x^{a−k} ∂^{b−k}` in each variable.
pub(crate) fn monomial_product(left: &WeylMonomial, right: &WeylMonomial) -> Vec<(WeylMonomial, Rational)> {
    let n = left.nvars();
    let mut acc: Vec<(Vec<u32>, Vec<u32>, Rational)> = vec![(Vec::with_capacity(n), Vec::with_capacity(n), Rational::one())];
    for i in 0..n {
        let (a, b) = (left.x_exp()[i], left.d_exp()[i]);
        let (c, d) = (right.x_exp()[i], right.d_exp()[i]);
        // ∂^b x^c expanded, sandwiched between x^a and ∂^d
        let mut factors = Vec::with_capacity(b.min(c) as usize + 1);
        let mut coeff = Rational::one();
        for k in 0..=b.min(c) {
            factors.push((a + c - k, b + d - k, coeff.clone()));
            coeff = coeff * Rational::from_int(((b - k) * (c - k)) as i64) / Rational::from_int(k as i64 + 1);
        }
        let mut next = Vec::with_capacity(acc.len() * factors.len());
        for (xs, ds, c0) in &acc {
            for (xe, de, c1) in &factors {
                let mut xs = xs.clone();
                let mut ds = ds.clone();
                xs.push(*xe);
                ds.push(*de);
                next.push((xs, ds, c0 * c1));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(x, d, c)| (WeylMonomial::new(x, d), c)).collect()
}

impl fmt::Display for WeylElement {
    /// Canonical form: terms in descending term order, separated by ` + `
    /// or ` - `, coefficient placed before the monomial as `c*m`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Operator forms panic on a variable-count mismatch; use the `try_*`
// methods where the inputs are not known to agree.

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        self.try_add(rhs).expect("WeylElement addition")
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        self.try_sub(rhs).expect("WeylElement subtraction")
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        self.try_mul(rhs).expect("WeylElement multiplication")
    }
}

impl Add for WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: WeylElement) -> WeylElement {
        &self + &rhs
    }
}

impl Sub for WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: WeylElement) -> WeylElement {
        &self - &rhs
    }
}

impl Mul for WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: WeylElement) -> WeylElement {
        &self * &rhs
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&Rational::from_int(-1))
    }
}

impl Neg for WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> WeylElement {
        WeylElement::parse(s, n).unwrap()
    }

    #[test]
    fn canonical_commutation() {
        let dx = WeylElement::d(1, 0);
        let x = WeylElement::x(1, 0);
        assert_eq!(&dx * &x, p("x*dx + 1", 1));
    }

    #[test]
    fn product_examples() {
        assert_eq!(p("x*dx^2", 2) * p("x*y", 2), p("x^2*y*dx^2 + 2*x*y*dx", 2));
        assert_eq!(p("dx^2", 1) * p("x^2", 1), p("x^2*dx^2 + 4*x*dx + 2", 1));
    }

    #[test]
    fn mismatched_variable_count() {
        let a = WeylElement::one(1);
        let b = WeylElement::one(2);
        assert_eq!(multiply(&a, &b), Err(Error::DimensionMismatch { left: 1, right: 2 }));
    }

    #[test]
    fn degrees() {
        assert_eq!(p("x^2*dy", 2).degree(FiltrationKind::Bernstein), Some(3));
        assert_eq!(WeylElement::zero(2).degree(FiltrationKind::Bernstein), None);
        assert_eq!(p("x*dx + 1", 1).degree(FiltrationKind::Order), Some(1));
    }

    #[test]
    fn symbols() {
        let s = p("x*dx + 1", 1).principal_symbol(FiltrationKind::Order).unwrap();
        assert_eq!(s.to_string(), "x*ξ");
        let s = p("x*y", 2).principal_symbol(FiltrationKind::Order).unwrap();
        assert_eq!(s.to_string(), "x*y");
        for n in 1..6u32 {
            let e = p(&format!("x*dx^{n} + {n}*dx^{}", n - 1), 1);
            let s = e.principal_symbol(FiltrationKind::Order).unwrap();
            let expect = SymbolPolynomial::from_terms(1, [(WeylMonomial::new(vec![1], vec![n]), Rational::one())]);
            assert_eq!(s, expect);
        }
        assert_eq!(WeylElement::zero(1).principal_symbol(FiltrationKind::Order), Err(Error::ZeroElement));
    }

    #[test]
    fn display_is_descending() {
        assert_eq!(p("1 + dx*x", 1).to_string(), "x*dx + 2");
        assert_eq!(p("x^2 - 3/2*dy", 2).to_string(), "x^2 - 3/2*dy");
        assert_eq!(p("-x", 1).to_string(), "-x");
    }
}
