//! Concrete right D-modules with enumerable graded bases.
//!
//! Each model exposes a basis split by degree, the action of the generators
//! `x_i`, `∂_i` on basis elements, and (where a triangularity argument is
//! available) a bound on how far preimages under `·f` can reach. The axiom
//! checker verifies the Weyl relations on every basis element up to a degree.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::weyl::{FiltrationKind, Generator, WeylElement, WeylMonomial};

/// A basis element, encoded as a short integer vector whose meaning is
/// model-specific (exponents, or a shift index followed by exponents).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub Vec<i64>);

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Label {
    pub fn from_monomial(m: &WeylMonomial) -> Label {
        Label(m.x_exp().iter().chain(m.d_exp()).map(|&e| e as i64).collect())
    }

    pub fn to_monomial(&self) -> WeylMonomial {
        let n = self.0.len() / 2;
        WeylMonomial::new(
            self.0[..n].iter().map(|&e| e as u32).collect(),
            self.0[n..].iter().map(|&e| e as u32).collect(),
        )
    }
}

/// A finite linear combination of basis labels.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Combination(BTreeMap<Label, Rational>);

impl Combination {
    pub fn zero() -> Self {
        Combination(BTreeMap::new())
    }

    pub fn basis(b: Label) -> Self {
        Combination::term(b, Rational::one())
    }

    pub fn term(b: Label, c: Rational) -> Self {
        let mut out = Combination::zero();
        out.add_term(b, &c);
        out
    }

    pub fn add_term(&mut self, b: Label, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(b) {
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

    pub fn add_scaled(&mut self, c: &Rational, other: &Combination) {
        for (b, v) in &other.0 {
            self.add_term(b.clone(), &(c * v));
        }
    }

    pub fn scale(&self, c: &Rational) -> Combination {
        let mut out = Combination::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn sub(&self, other: &Combination) -> Combination {
        let mut out = self.clone();
        out.add_scaled(&Rational::from_int(-1), other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Rational)> + '_ {
        self.0.iter()
    }

    pub fn coefficient(&self, b: &Label) -> Rational {
        self.0.get(b).cloned().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

impl FromIterator<(Label, Rational)> for Combination {
    fn from_iter<T: IntoIterator<Item = (Label, Rational)>>(iter: T) -> Self {
        let mut out = Combination::zero();
        for (b, c) in iter {
            out.add_term(b, &c);
        }
        out
    }
}

/// A right `D_n`-module presented by a graded basis and generator actions.
///
/// `act(b, g)` must be of degree at most `degree_of(b) + 1`, and the actions
/// must satisfy the Weyl relations (see [`check_module_axioms`]).
pub trait EffectiveRightModule: Send + Sync {
    fn nvars(&self) -> usize;

    /// Short identifier, e.g. `delta:2`.
    fn name(&self) -> String;

    /// Basis elements of degree exactly `deg`, in ascending order.
    fn basis_of_degree(&self, deg: u32) -> Vec<Label>;

    fn degree_of(&self, b: &Label) -> u32;

    fn act(&self, b: &Label, g: Generator) -> Combination;

    /// `b · x^a ∂^c`, applied as `x_1^{a_1}⋯x_n^{a_n}` then `∂_1^{c_1}⋯∂_n^{c_n}`.
    fn act_monomial(&self, b: &Label, m: &WeylMonomial) -> Combination {
        let mut cur = Combination::basis(b.clone());
        let word = m
            .x_exp()
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(Generator::X(i), e as usize))
            .chain(m.d_exp().iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(Generator::D(i), e as usize)));
        for g in word {
            let mut next = Combination::zero();
            for (l, c) in cur.iter() {
                next.add_scaled(c, &self.act(l, g));
            }
            cur = next;
            if cur.is_zero() {
                break;
            }
        }
        cur
    }

    /// Some `N` with `M_{≤m} ∩ M·f = (M_{≤N})·f`, when the model can prove one.
    fn exact_preimage_bound(&self, _f: &WeylElement, _m: u32) -> Option<u32> {
        None
    }

    fn format_label(&self, b: &Label) -> String {
        format!("{:?}", b.0)
    }

    fn basis_up_to(&self, deg: u32) -> Vec<Label> {
        (0..=deg).flat_map(|d| self.basis_of_degree(d)).collect()
    }
}

/// Identifies one of the shipped models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelId {
    /// `D_X = D/fD` for a polynomial `f`.
    CanonicalDx(WeylElement),
    /// Distributions supported at the origin, basis `∂^b`.
    Delta(usize),
    /// `C[x] ⊗ C[∂_y]` on the line `y = 0`, tagged with the line count.
    NLinesIcTrivial(usize),
    /// `C[x^λ] ⊗ C[∂_y]` for non-integer `λ`, tagged with the line count.
    NLinesIcKummer { lines: usize, lambda: Rational },
    /// `D_n` itself.
    FreeD(usize),
}

impl ModelId {
    /// Parses `dx:<poly>`, `delta:<n>`, `nlines-ic:<n>`, `kummer:<n>:<p/q>`
    /// or `free:<n>`. `nvars` is used for the polynomial in `dx:`; when it is
    /// `None` the smallest variable count that parses is taken.
    pub fn parse(text: &str, nvars: Option<usize>) -> Result<ModelId> {
        let bad = |msg: &str| Error::InvalidModel(format!("`{text}`: {msg}"));
        let (head, rest) = text.split_once(':').ok_or_else(|| bad("expected `<kind>:<args>`"))?;
        let count = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("expected a positive integer"));
        match head {
            "dx" => {
                let f = match nvars {
                    Some(n) => WeylElement::parse(rest, n)?,
                    None => (1..=4)
                        .find_map(|n| WeylElement::parse(rest, n).ok())
                        .ok_or_else(|| bad("cannot parse polynomial"))?,
                };
                Ok(ModelId::CanonicalDx(f))
            }
            "delta" => Ok(ModelId::Delta(count(rest)?)),
            "nlines-ic" => Ok(ModelId::NLinesIcTrivial(count(rest)?)),
            "free" => Ok(ModelId::FreeD(count(rest)?)),
            "kummer" => {
                let (n, lam) = rest.split_once(':').ok_or_else(|| bad("expected `kummer:<n>:<p/q>`"))?;
                let lambda: Rational = lam.parse().map_err(|_| bad("invalid λ"))?;
                Ok(ModelId::NLinesIcKummer { lines: count(n)?, lambda })
            }
            _ => Err(bad("unknown model kind")),
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::CanonicalDx(p) => write!(f, "dx:{p}"),
            ModelId::Delta(n) => write!(f, "delta:{n}"),
            ModelId::NLinesIcTrivial(n) => write!(f, "nlines-ic:{n}"),
            ModelId::NLinesIcKummer { lines, lambda } => write!(f, "kummer:{lines}:{lambda}"),
            ModelId::FreeD(n) => write!(f, "free:{n}"),
        }
    }
}

/// Builds the model named by `id`.
pub fn build(id: &ModelId) -> Result<Box<dyn EffectiveRightModule>> {
    Ok(match id {
        ModelId::CanonicalDx(f) => Box::new(CanonicalDx::new(f.clone())?),
        ModelId::Delta(n) => {
            if *n == 0 {
                return Err(Error::InvalidModel("delta needs at least one variable".into()));
            }
            Box::new(Delta { n: *n })
        }
        ModelId::NLinesIcTrivial(lines) => Box::new(NLinesIc { lines: *lines }),
        ModelId::NLinesIcKummer { lines, lambda } => Box::new(Kummer::new(*lines, lambda.clone())?),
        ModelId::FreeD(n) => Box::new(FreeD { n: *n }),
    })
}

/// True when every term of the polynomial `f` has the same total degree.
fn is_homogeneous(f: &WeylElement) -> bool {
    f.is_polynomial() && {
        let mut degs = f.terms().map(|(m, _)| m.x_degree());
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => false,
        }
    }
}

/// `D_X = D/fD` as a right module. Since `f` has no `∂`, `fD` is
/// `⊕_b f·C[x]·∂^b`, so classes are reduced by dividing each `∂^b`
/// coefficient by `f`; the basis is the monomials whose `x`-part is not
/// divisible by the leading monomial of `f`.
#[derive(Debug, Clone)]
pub struct CanonicalDx {
    f: WeylElement,
    lead: WeylMonomial,
    lead_coeff: Rational,
}

impl CanonicalDx {
    pub fn new(f: WeylElement) -> Result<Self> {
        f.require_polynomial()?;
        let (lead, lead_coeff) = match f.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::InvalidModel("dx: f must be nonzero".into())),
        };
        Ok(CanonicalDx { f, lead, lead_coeff })
    }

    pub fn polynomial(&self) -> &WeylElement {
        &self.f
    }

    pub fn is_standard(&self, m: &WeylMonomial) -> bool {
        !m.x_exp().iter().zip(self.lead.x_exp()).all(|(a, b)| a >= b)
    }

    /// Normal form of `e` modulo `fD`.
    pub fn reduce(&self, e: &WeylElement) -> WeylElement {
        let n = e.nvars();
        let mut work = e.clone();
        let mut out = WeylElement::zero(n);
        // peel off the largest term each step: either standard, or divisible
        // by lead(f) in its x-part and cancelled by a multiple of f
        while let Some((m, c)) = work.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if self.is_standard(&m) {
                out.add_term(m.clone(), &c);
                work.add_term(m, &-&c);
            } else {
                let shift = WeylMonomial::new(
                    m.x_exp().iter().zip(self.lead.x_exp()).map(|(a, b)| a - b).collect(),
                    m.d_exp().to_vec(),
                );
                let q = WeylElement::monomial(shift, &c / &self.lead_coeff);
                work = &work - &(&self.f * &q);
            }
        }
        out
    }

    pub fn reduce_to_combination(&self, e: &WeylElement) -> Combination {
        self.reduce(e).terms().map(|(m, c)| (Label::from_monomial(m), c.clone())).collect()
    }

    pub fn element_of(&self, c: &Combination) -> WeylElement {
        WeylElement::from_terms(self.f.nvars(), c.iter().map(|(b, v)| (b.to_monomial(), v.clone())))
    }
}

impl EffectiveRightModule for CanonicalDx {
    fn nvars(&self) -> usize {
        self.f.nvars()
    }

    fn name(&self) -> String {
        format!("dx:{}", self.f)
    }

    fn basis_of_degree(&self, deg: u32) -> Vec<Label> {
        WeylMonomial::all_of_degree(self.nvars(), deg)
            .into_iter()
            .filter(|m| self.is_standard(m))
            .map(|m| Label::from_monomial(&m))
            .collect()
    }

    fn degree_of(&self, b: &Label) -> u32 {
        b.0.iter().sum::<i64>() as u32
    }

    fn act(&self, b: &Label, g: Generator) -> Combination {
        self.act_monomial(b, &WeylMonomial::generator(self.nvars(), g))
    }

    fn act_monomial(&self, b: &Label, m: &WeylMonomial) -> Combination {
        let u = WeylElement::monomial(b.to_monomial(), Rational::one());
        let w = WeylElement::monomial(m.clone(), Rational::one());
        self.reduce_to_combination(&(&u * &w))
    }

    fn format_label(&self, b: &Label) -> String {
        b.to_monomial().to_string()
    }
}

/// The free module `D_n`.
#[derive(Debug, Clone)]
pub struct FreeD {
    n: usize,
}

impl EffectiveRightModule for FreeD {
    fn nvars(&self) -> usize {
        self.n
    }

    fn name(&self) -> String {
        format!("free:{}", self.n)
    }

    fn basis_of_degree(&self, deg: u32) -> Vec<Label> {
        WeylMonomial::all_of_degree(self.n, deg).iter().map(Label::from_monomial).collect()
    }

    fn degree_of(&self, b: &Label) -> u32 {
        b.0.iter().sum::<i64>() as u32
    }

    fn act(&self, b: &Label, g: Generator) -> Combination {
        self.act_monomial(b, &WeylMonomial::generator(self.n, g))
    }

    fn act_monomial(&self, b: &Label, m: &WeylMonomial) -> Combination {
        crate::weyl::monomial_product(&b.to_monomial(), m)
            .into_iter()
            .map(|(mm, c)| (Label::from_monomial(&mm), c))
            .collect()
    }

    fn exact_preimage_bound(&self, f: &WeylElement, m: u32) -> Option<u32> {
        // D is a domain and Bernstein degree is additive, so Df ∩ F_m = F_{m−k}·f
        let k = f.degree(FiltrationKind::Bernstein)?;
        Some(m.saturating_sub(k))
    }

    fn format_label(&self, b: &Label) -> String {
        b.to_monomial().to_string()
    }
}

/// The delta module at the origin, `(x_1..x_n)D \ D`, with basis `∂^b` and
/// `∂^b · x_i = b_i ∂^{b−e_i}`.
#[derive(Debug, Clone)]
pub struct Delta {
    n: usize,
}

impl Delta {
    pub fn new(n: usize) -> Self {
        Delta { n }
    }
}

impl EffectiveRightModule for Delta {
    fn nvars(&self) -> usize {
        self.n
    }

    fn name(&self) -> String {
        format!("delta:{}", self.n)
    }

    fn basis_of_degree(&self, deg: u32) -> Vec<Label> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.n];
        crate::weyl::compositions_into(&mut exps, deg, &mut |e| out.push(Label(e.iter().map(|&v| v as i64).collect())));
        out.sort();
        out
    }

    fn degree_of(&self, b: &Label) -> u32 {
        b.0.iter().sum::<i64>() as u32
    }

    fn act(&self, b: &Label, g: Generator) -> Combination {
        let mut e = b.0.clone();
        match g {
            Generator::X(i) => {
                let a = e[i];
                if a == 0 {
                    return Combination::zero();
                }
                e[i] -= 1;
                Combination::term(Label(e), Rational::from_int(a))
            }
            Generator::D(i) => {
                e[i] += 1;
                Combination::basis(Label(e))
            }
        }
    }

    fn exact_preimage_bound(&self, f: &WeylElement, m: u32) -> Option<u32> {
        // x_i lowers degree by exactly one, so a homogeneous f is graded of shift −k
        if is_homogeneous(f) {
            Some(m + f.degree(FiltrationKind::Bernstein)?)
        } else {
            None
        }
    }

    fn format_label(&self, b: &Label) -> String {
        let m = WeylMonomial::new(vec![0; self.n], b.0.iter().map(|&v| v as u32).collect());
        m.to_string()
    }
}

/// `C[x] ⊗ C[∂_y]` on `A^2`: label `(i, j)` is `x^i ⊗ ∂_y^j`. The x-factor is
/// a volume form, so `x^i · ∂_x = −i x^{i−1}`; on the other factor
/// `∂_y^j · y = j ∂_y^{j−1}`. Degree is `i + j`.
#[derive(Debug, Clone)]
pub struct NLinesIc {
    lines: usize,
}

impl NLinesIc {
    pub fn new(lines: usize) -> Self {
        NLinesIc { lines }
    }
}

/// Bound shared by the two line models: for `f` homogeneous in `(x, y)`,
/// `·f` shifts `i − j` by `deg f` and is triangular in `j` with nonzero
/// diagonal, so preimages of level `m` lie within `m + slack`.
fn line_model_bound(f: &WeylElement, m: u32, factor: u32) -> Option<u32> {
    if f.nvars() == 2 && is_homogeneous(f) {
        let k = f.degree(FiltrationKind::Bernstein)?;
        Some(factor * m + (factor + 1) * k)
    } else {
        None
    }
}

impl EffectiveRightModule for NLinesIc {
    fn nvars(&self) -> usize {
        2
    }

    fn name(&self) -> String {
        format!("nlines-ic:{}", self.lines)
    }

    fn basis_of_degree(&self, deg: u32) -> Vec<Label> {
        (0..=deg as i64).map(|i| Label(vec![i, deg as i64 - i])).collect()
    }

    fn degree_of(&self, b: &Label) -> u32 {
        (b.0[0] + b.0[1]) as u32
    }

    fn act(&self, b: &Label, g: Generator) -> Combination {
        let (i, j) = (b.0[0], b.0[1]);
        match g {
            Generator::X(0) => Combination::basis(Label(vec![i + 1, j])),
            Generator::D(0) if i > 0 => Combination::term(Label(vec![i - 1, j]), Rational::from_int(-i)),
            Generator::X(1) if j > 0 => Combination::term(Label(vec![i, j - 1]), Rational::from_int(j)),
            Generator::D(1) => Combination::basis(Label(vec![i, j + 1])),
            _ => Combination::zero(),
        }
    }

    fn exact_preimage_bound(&self, f: &WeylElement, m: u32) -> Option<u32> {
        line_model_bound(f, m, 1)
    }

    fn format_label(&self, b: &Label) -> String {
        format!("x^{}⊗dy^{}", b.0[0], b.0[1])
    }
}

/// `C[x^λ] ⊗ C[∂_y]`: label `(k, j)` is `x^{λ+k} ⊗ ∂_y^j` for `k ∈ Z`, with
/// `e_k · x = e_{k+1}` and `e_k · ∂_x = −(λ+k) e_{k−1}`. Degree is `|k| + j`,
/// so every truncation is finite and no outer window is needed.
#[derive(Debug, Clone)]
pub struct Kummer {
    lines: usize,
    lambda: Rational,
}

impl Kummer {
    pub fn new(lines: usize, lambda: Rational) -> Result<Self> {
        if lambda.is_integer() {
            return Err(Error::InvalidModel(format!("kummer: λ = {lambda} must not be an integer")));
        }
        Ok(Kummer { lines, lambda })
    }
}

impl EffectiveRightModule for Kummer {
    fn nvars(&self) -> usize {
        2
    }

    fn name(&self) -> String {
        format!("kummer:{}:{}", self.lines, self.lambda)
    }

    fn basis_of_degree(&self, deg: u32) -> Vec<Label> {
        let d = deg as i64;
        (-d..=d).map(|k| Label(vec![k, d - k.abs()])).collect()
    }

    fn degree_of(&self, b: &Label) -> u32 {
        (b.0[0].abs() + b.0[1]) as u32
    }

    fn act(&self, b: &Label, g: Generator) -> Combination {
        let (k, j) = (b.0[0], b.0[1]);
        match g {
            Generator::X(0) => Combination::basis(Label(vec![k + 1, j])),
            Generator::D(0) => Combination::term(Label(vec![k - 1, j]), -(&self.lambda + &Rational::from_int(k))),
            Generator::X(1) if j > 0 => Combination::term(Label(vec![k, j - 1]), Rational::from_int(j)),
            Generator::D(1) => Combination::basis(Label(vec![k, j + 1])),
            _ => Combination::zero(),
        }
    }

    fn exact_preimage_bound(&self, f: &WeylElement, m: u32) -> Option<u32> {
        line_model_bound(f, m, 3)
    }

    fn format_label(&self, b: &Label) -> String {
        format!("x^(λ{:+})⊗dy^{}", b.0[0], b.0[1])
    }
}

/// `m · w` for a combination `m` and a Weyl element `w`.
pub fn act_word(module: &dyn EffectiveRightModule, m: &Combination, w: &WeylElement) -> Result<Combination> {
    if w.nvars() != module.nvars() {
        return Err(Error::DimensionMismatch { left: module.nvars(), right: w.nvars() });
    }
    let mut out = Combination::zero();
    for (b, cb) in m.iter() {
        for (mono, cw) in w.terms() {
            out.add_scaled(&(cb * cw), &module.act_monomial(b, mono));
        }
    }
    Ok(out)
}

/// One failed Weyl relation on one basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub label: Label,
    pub relation: String,
    /// `lhs − rhs` of the relation, nonzero.
    pub defect: Combination,
}

#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `[∂_i, x_j] = δ_ij`, `[x_i, x_j] = 0` and `[∂_i, ∂_j] = 0` on every
/// basis element of degree `≤ deg_bound`, in right-module form:
/// `(b·g)·h − (b·h)·g = b·[g, h]`.
pub fn check_module_axioms(module: &dyn EffectiveRightModule, deg_bound: u32) -> AxiomReport {
    let n = module.nvars();
    let gens = Generator::all(n);
    let apply = |c: &Combination, g: Generator| {
        let mut out = Combination::zero();
        for (l, v) in c.iter() {
            out.add_scaled(v, &module.act(l, g));
        }
        out
    };
    let mut report = AxiomReport::default();
    for b in module.basis_up_to(deg_bound) {
        report.checked += 1;
        let base = Combination::basis(b.clone());
        for (gi, &g) in gens.iter().enumerate() {
            for &h in &gens[gi + 1..] {
                let gh = apply(&apply(&base, g), h);
                let hg = apply(&apply(&base, h), g);
                // b·(gh − hg) where gh − hg is ±1 for a dual pair, else 0
                let expected = match (g, h) {
                    (Generator::X(i), Generator::D(j)) if i == j => base.scale(&Rational::from_int(-1)),
                    (Generator::D(i), Generator::X(j)) if i == j => base.clone(),
                    _ => Combination::zero(),
                };
                let defect = gh.sub(&hg).sub(&expected);
                if !defect.is_zero() {
                    report.violations.push(AxiomViolation {
                        label: b.clone(),
                        relation: format!("[{g:?}, {h:?}]"),
                        defect,
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lbl(v: &[i64]) -> Label {
        Label(v.to_vec())
    }

    #[test]
    fn delta_action() {
        let d = Delta::new(2);
        assert_eq!(d.act(&lbl(&[3, 2]), Generator::X(0)), Combination::term(lbl(&[2, 2]), Rational::from_int(3)));
        assert_eq!(d.act(&lbl(&[0, 2]), Generator::X(0)), Combination::zero());
        let m = Combination::basis(lbl(&[4]));
        let x = WeylElement::x(1, 0);
        assert_eq!(act_word(&Delta::new(1), &m, &x).unwrap(), Combination::term(lbl(&[3]), Rational::from_int(4)));
    }

    #[test]
    fn nlines_action() {
        let m = NLinesIc::new(3);
        assert_eq!(m.act(&lbl(&[2, 5]), Generator::X(1)), Combination::term(lbl(&[2, 4]), Rational::from_int(5)));
        assert_eq!(m.act(&lbl(&[2, 5]), Generator::X(0)), Combination::basis(lbl(&[3, 5])));
    }

    #[test]
    fn kummer_shift() {
        let k = Kummer::new(2, Rational::new(1, 2)).unwrap();
        assert_eq!(k.act(&lbl(&[-3, 1]), Generator::X(0)), Combination::basis(lbl(&[-2, 1])));
        assert!(Kummer::new(2, Rational::from_int(3)).is_err());
    }

    #[test]
    fn identity_action() {
        for id in ["delta:2", "nlines-ic:2", "kummer:2:1/2", "free:2", "dx:x*y"] {
            let m = build(&ModelId::parse(id, Some(2)).unwrap()).unwrap();
            for b in m.basis_up_to(3) {
                let c = Combination::basis(b.clone());
                assert_eq!(act_word(m.as_ref(), &c, &WeylElement::one(2)).unwrap(), c, "{id}");
            }
        }
    }

    #[test]
    fn shipped_models_satisfy_axioms() {
        assert!(check_module_axioms(&NLinesIc::new(3), 6).is_ok());
        assert!(check_module_axioms(&Delta::new(2), 8).is_ok());
        assert!(check_module_axioms(&Kummer::new(2, Rational::new(1, 2)).unwrap(), 6).is_ok());
        assert!(check_module_axioms(&FreeD { n: 2 }, 4).is_ok());
        let dx = CanonicalDx::new(WeylElement::parse("x*y", 2).unwrap()).unwrap();
        assert!(check_module_axioms(&dx, 4).is_ok());
    }

    struct CorruptDelta;

    impl EffectiveRightModule for CorruptDelta {
        fn nvars(&self) -> usize {
            2
        }
        fn name(&self) -> String {
            "corrupt".into()
        }
        fn basis_of_degree(&self, deg: u32) -> Vec<Label> {
            Delta::new(2).basis_of_degree(deg)
        }
        fn degree_of(&self, b: &Label) -> u32 {
            Delta::new(2).degree_of(b)
        }
        fn act(&self, b: &Label, g: Generator) -> Combination {
            let mut e = b.0.clone();
            match g {
                Generator::X(i) if e[i] > 0 => {
                    e[i] -= 1;
                    Combination::basis(Label(e))
                }
                Generator::X(_) => Combination::zero(),
                Generator::D(i) => {
                    e[i] += 1;
                    Combination::basis(Label(e))
                }
            }
        }
    }

    #[test]
    fn corrupted_delta_is_caught() {
        let r = check_module_axioms(&CorruptDelta, 4);
        assert!(!r.is_ok());
        assert!(r.violations.iter().any(|v| v.relation.contains("D(0)") && v.relation.contains("X(0)")));
    }

    #[test]
    fn wrong_sign_line_model_is_caught() {
        struct PlusSign;
        impl EffectiveRightModule for PlusSign {
            fn nvars(&self) -> usize {
                2
            }
            fn name(&self) -> String {
                "plus".into()
            }
            fn basis_of_degree(&self, deg: u32) -> Vec<Label> {
                NLinesIc::new(2).basis_of_degree(deg)
            }
            fn degree_of(&self, b: &Label) -> u32 {
                NLinesIc::new(2).degree_of(b)
            }
            fn act(&self, b: &Label, g: Generator) -> Combination {
                match g {
                    Generator::D(0) => NLinesIc::new(2).act(b, g).scale(&Rational::from_int(-1)),
                    _ => NLinesIc::new(2).act(b, g),
                }
            }
        }
        assert!(!check_module_axioms(&PlusSign, 3).is_ok());
    }

    #[test]
    fn canonical_dx_reduction() {
        let f = WeylElement::parse("y^2 - x^3", 2).unwrap();
        let m = CanonicalDx::new(f.clone()).unwrap();
        assert!(m.reduce(&(&f * &WeylElement::parse("dx*y + 3", 2).unwrap())).is_zero());
        let r = m.reduce(&WeylElement::parse("x^4*dy", 2).unwrap());
        assert_eq!(r, WeylElement::parse("x*y^2*dy", 2).unwrap());
        assert!(CanonicalDx::new(WeylElement::parse("dx", 2).unwrap()).is_err());
    }

    #[test]
    fn model_ids_parse() {
        assert_eq!(ModelId::parse("delta:2", None).unwrap(), ModelId::Delta(2));
        assert_eq!(
            ModelId::parse("kummer:2:1/2", None).unwrap(),
            ModelId::NLinesIcKummer { lines: 2, lambda: Rational::new(1, 2) }
        );
        assert!(matches!(ModelId::parse("dx:x*y", None).unwrap(), ModelId::CanonicalDx(f) if f.nvars() == 2));
        assert!(build(&ModelId::parse("kummer:2:4/2", None).unwrap()).is_err());
        assert!(ModelId::parse("bogus:1", None).is_err());
        assert_eq!(ModelId::parse("kummer:3:-1/3", None).unwrap().to_string(), "kummer:3:-1/3");
    }
}
