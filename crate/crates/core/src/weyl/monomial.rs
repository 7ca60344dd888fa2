use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A normal-ordered Weyl monomial `x^a ∂^b`: every `x` sits left of every `∂`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylMonomial {
    x: Vec<u32>,
    d: Vec<u32>,
}

/// One of the algebra generators `x_i` or `∂_i` (zero-based index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(usize),
    D(usize),
}

impl Generator {
    /// All `2n` generators, `x_1..x_n` first.
    pub fn all(n: usize) -> Vec<Generator> {
        (0..n).map(Generator::X).chain((0..n).map(Generator::D)).collect()
    }

    pub fn index(self) -> usize {
        match self {
            Generator::X(i) | Generator::D(i) => i,
        }
    }
}

/// Which filtration a degree or symbol is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FiltrationKind {
    /// Total degree in all `x_i` and `∂_i`.
    Bernstein,
    /// Total degree in the `∂_i` only.
    Order,
}

impl WeylMonomial {
    pub fn new(x: Vec<u32>, d: Vec<u32>) -> Self {
        assert_eq!(x.len(), d.len(), "x and ∂ exponent vectors differ in length");
        WeylMonomial { x, d }
    }

    pub fn one(n: usize) -> Self {
        WeylMonomial { x: vec![0; n], d: vec![0; n] }
    }

    pub fn generator(n: usize, g: Generator) -> Self {
        let mut m = WeylMonomial::one(n);
        match g {
            Generator::X(i) => m.x[i] = 1,
            Generator::D(i) => m.d[i] = 1,
        }
        m
    }

    pub fn nvars(&self) -> usize {
        self.x.len()
    }

    pub fn x_exp(&self) -> &[u32] {
        &self.x
    }

    pub fn d_exp(&self) -> &[u32] {
        &self.d
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().sum()
    }

    pub fn d_degree(&self) -> u32 {
        self.d.iter().sum()
    }

    pub fn degree(&self, kind: FiltrationKind) -> u32 {
        match kind {
            FiltrationKind::Bernstein => self.x_degree() + self.d_degree(),
            FiltrationKind::Order => self.d_degree(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.x.iter().chain(&self.d).all(|&e| e == 0)
    }

    /// True when the monomial involves no `∂`.
    pub fn is_polynomial(&self) -> bool {
        self.d.iter().all(|&e| e == 0)
    }

    /// Commutative product of exponent vectors; this is the leading part of
    /// the Weyl product.
    pub fn commutative_mul(&self, other: &WeylMonomial) -> WeylMonomial {
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect();
        let d = self.d.iter().zip(&other.d).map(|(a, b)| a + b).collect();
        WeylMonomial { x, d }
    }

    /// Whether `other` divides `self` as commutative exponent vectors.
    pub fn divisible_by(&self, other: &WeylMonomial) -> bool {
        self.x.iter().zip(&other.x).all(|(a, b)| a >= b)
            && self.d.iter().zip(&other.d).all(|(a, b)| a >= b)
    }

    /// Exponent-wise `self - other`; `None` unless `other` divides `self`.
    pub fn checked_div(&self, other: &WeylMonomial) -> Option<WeylMonomial> {
        if !self.divisible_by(other) {
            return None;
        }
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a - b).collect();
        let d = self.d.iter().zip(&other.d).map(|(a, b)| a - b).collect();
        Some(WeylMonomial { x, d })
    }

    pub fn with_x(&self, i: usize, e: u32) -> WeylMonomial {
        let mut m = self.clone();
        m.x[i] = e;
        m
    }

    pub fn with_d(&self, i: usize, e: u32) -> WeylMonomial {
        let mut m = self.clone();
        m.d[i] = e;
        m
    }

    /// Every monomial in `n` variables of Bernstein degree exactly `deg`,
    /// in ascending term order.
    pub fn all_of_degree(n: usize, deg: u32) -> Vec<WeylMonomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; 2 * n];
        compositions(&mut exps, 0, deg, &mut |e| {
            out.push(WeylMonomial { x: e[..n].to_vec(), d: e[n..].to_vec() });
        });
        out.sort();
        out
    }

    /// Every monomial of Bernstein degree at most `deg`, ascending.
    pub fn all_up_to_degree(n: usize, deg: u32) -> Vec<WeylMonomial> {
        (0..=deg).flat_map(|k| WeylMonomial::all_of_degree(n, k)).collect()
    }
}

pub(crate) fn compositions(exps: &mut [u32], pos: usize, remaining: u32, f: &mut impl FnMut(&[u32])) {
    if exps.is_empty() {
        if remaining == 0 {
            f(exps);
        }
        return;
    }
    if pos == exps.len() - 1 {
        exps[pos] = remaining;
        f(exps);
        exps[pos] = 0;
        return;
    }
    for k in 0..=remaining {
        exps[pos] = k;
        compositions(exps, pos + 1, remaining - k, f);
    }
    exps[pos] = 0;
}

/// Calls `f` on every exponent vector of length `exps.len()` summing to `total`.
pub(crate) fn compositions_into(exps: &mut [u32], total: u32, f: &mut impl FnMut(&[u32])) {
    compositions(exps, 0, total, f)
}

/// Graded lexicographic order: Bernstein degree first, then lexicographic on
/// `(x_1, …, x_n, ∂_1, …, ∂_n)`, so `x > y > ∂_x > ∂_y` in two variables.
impl Ord for WeylMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let da = self.x_degree() + self.d_degree();
        let db = other.x_degree() + other.d_degree();
        da.cmp(&db)
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.d.cmp(&other.d))
    }
}

impl PartialOrd for WeylMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn x_name(n: usize, i: usize) -> String {
    if n <= 4 {
        ["x", "y", "z", "w"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

pub(crate) fn d_name(n: usize, i: usize) -> String {
    if n <= 4 {
        ["dx", "dy", "dz", "dw"][i].to_string()
    } else {
        format!("d{}", i + 1)
    }
}

fn power(name: &str, e: u32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

/// Writes the monomial as a `*`-separated product, `1` for the unit.
impl fmt::Display for WeylMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.nvars();
        let mut factors = Vec::new();
        for (i, &e) in self.x.iter().enumerate() {
            if e > 0 {
                factors.push(power(&x_name(n, i), e));
            }
        }
        for (i, &e) in self.d.iter().enumerate() {
            if e > 0 {
                factors.push(power(&d_name(n, i), e));
            }
        }
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

impl fmt::Debug for WeylMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_priority_x_y_dx_dy() {
        let x = WeylMonomial::generator(2, Generator::X(0));
        let y = WeylMonomial::generator(2, Generator::X(1));
        let dx = WeylMonomial::generator(2, Generator::D(0));
        let dy = WeylMonomial::generator(2, Generator::D(1));
        assert!(x > y && y > dx && dx > dy);
        assert!(dy > WeylMonomial::one(2));
        let dx2 = WeylMonomial::new(vec![0, 0], vec![2, 0]);
        assert!(dx2 > x);
    }

    #[test]
    fn degree_enumeration_counts() {
        // C(k+3, 3) monomials of degree k in four commuting exponents
        assert_eq!(WeylMonomial::all_of_degree(2, 0).len(), 1);
        assert_eq!(WeylMonomial::all_of_degree(2, 3).len(), 20);
        assert_eq!(WeylMonomial::all_up_to_degree(2, 2).len(), 15);
        let v = WeylMonomial::all_up_to_degree(1, 4);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
