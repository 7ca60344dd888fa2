//! Reduction rules on normal-ordered Weyl monomials, with a brute-force
//! local confluence check in the spirit of the Diamond Lemma.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::table::{LevelStatus, TruncationTable};
use crate::weyl::{WeylElement, WeylMonomial};

type Applies = Box<dyn Fn(&WeylMonomial) -> bool + Send + Sync>;
type Rewrite = Box<dyn Fn(&WeylMonomial) -> WeylElement + Send + Sync>;

/// A named rule `m → rewrite(m)` for monomials satisfying `applies`.
pub struct RewriteRule {
    name: String,
    applies: Applies,
    rewrite: Rewrite,
}

impl RewriteRule {
    pub fn new(
        name: impl Into<String>,
        applies: impl Fn(&WeylMonomial) -> bool + Send + Sync + 'static,
        rewrite: impl Fn(&WeylMonomial) -> WeylElement + Send + Sync + 'static,
    ) -> Self {
        RewriteRule { name: name.into(), applies: Box::new(applies), rewrite: Box::new(rewrite) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn applies(&self, m: &WeylMonomial) -> bool {
        (self.applies)(m)
    }

    pub fn apply(&self, m: &WeylMonomial) -> WeylElement {
        (self.rewrite)(m)
    }
}

impl fmt::Debug for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RewriteRule").field("name", &self.name).finish_non_exhaustive()
    }
}

/// Monomials on which two reduction paths end in different normal forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceViolation {
    pub monomial: WeylMonomial,
    pub normal_forms: Vec<WeylElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub checked_degree: u32,
    pub violations: Vec<ConfluenceViolation>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Names accepted by [`RewriteSystem::preset`].
pub const PRESETS: [&str; 4] = ["node-xy", "adversarial", "eliminate-all", "empty"];

/// An ordered list of rules under the graded lexicographic order of
/// [`WeylMonomial`] (`x > y > ∂_x > ∂_y` in two variables).
#[derive(Debug)]
pub struct RewriteSystem {
    n: usize,
    name: String,
    target: Option<WeylElement>,
    rules: Vec<RewriteRule>,
    probe_degree: u32,
}

/// Normal-form candidates are capped so a badly non-confluent system cannot
/// blow up combinatorially.
const MAX_CANDIDATES: usize = 16;

impl RewriteSystem {
    pub fn new(n: usize, name: impl Into<String>) -> Self {
        RewriteSystem { n, name: name.into(), target: None, rules: Vec::new(), probe_degree: 6 }
    }

    /// Degree up to which [`register`](Self::register) probes order decrease.
    pub fn with_probe_degree(mut self, d: u32) -> Self {
        self.probe_degree = d;
        self
    }

    /// Records the polynomial whose two-sided ideal the rules reduce modulo.
    pub fn with_target(mut self, f: WeylElement) -> Self {
        self.target = Some(f);
        self
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn target(&self) -> Option<&WeylElement> {
        self.target.as_ref()
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    /// Adds a rule after checking, on every monomial of degree up to the
    /// probe degree, that its output is strictly smaller than its input.
    pub fn register(&mut self, rule: RewriteRule) -> Result<()> {
        for m in WeylMonomial::all_up_to_degree(self.n, self.probe_degree) {
            if !rule.applies(&m) {
                continue;
            }
            let out = rule.apply(&m);
            if out.nvars() != self.n {
                return Err(Error::DimensionMismatch { left: self.n, right: out.nvars() });
            }
            if out.terms().any(|(t, _)| *t >= m) {
                return Err(Error::RuleNotDecreasing { rule: rule.name.clone(), monomial: m.to_string() });
            }
        }
        self.rules.push(rule);
        Ok(())
    }

    /// Builds one of the shipped presets (see [`PRESETS`]).
    pub fn preset(name: &str) -> Result<RewriteSystem> {
        match name {
            "node-xy" => node_xy(),
            "adversarial" => {
                let mut sys = RewriteSystem::new(1, name);
                let is_x = |m: &WeylMonomial| m.x_exp() == [1] && m.d_exp() == [0];
                sys.register(RewriteRule::new("x-to-1", is_x, |_| WeylElement::one(1)))?;
                sys.register(RewriteRule::new("x-to-0", is_x, |_| WeylElement::zero(1)))?;
                Ok(sys)
            }
            "eliminate-all" => {
                let mut sys = RewriteSystem::new(2, name);
                sys.register(RewriteRule::new("kill", |m: &WeylMonomial| !m.is_one(), |_| WeylElement::zero(2)))?;
                Ok(sys)
            }
            "empty" => Ok(RewriteSystem::new(2, name)),
            other => Err(Error::Precondition(format!("unknown rewrite preset `{other}` (known: {})", PRESETS.join(", ")))),
        }
    }

    fn first_rule(&self, m: &WeylMonomial) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| r.applies(m))
    }

    pub fn is_irreducible(&self, m: &WeylMonomial) -> bool {
        self.first_rule(m).is_none()
    }

    /// Rewrites the largest reducible term with the first applicable rule
    /// until no rule applies anywhere.
    pub fn reduce(&self, e: &WeylElement) -> Result<WeylElement> {
        if e.nvars() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: e.nvars() });
        }
        let mut cur = e.clone();
        loop {
            let hit = cur
                .terms()
                .rev()
                .find_map(|(m, c)| self.first_rule(m).map(|r| (m.clone(), c.clone(), r)));
            match hit {
                Some((m, c, rule)) => {
                    cur.add_term(m.clone(), &-&c);
                    cur = &cur + &rule.apply(&m).scale(&c);
                }
                None => return Ok(cur),
            }
        }
    }

    /// Normal-form sets for every monomial of degree `≤ max_deg`, computed in
    /// ascending order so each rewrite only refers to settled smaller monomials.
    fn normal_form_sets(&self, max_deg: u32) -> BTreeMap<WeylMonomial, Vec<WeylElement>> {
        let mut memo: BTreeMap<WeylMonomial, Vec<WeylElement>> = BTreeMap::new();
        for m in WeylMonomial::all_up_to_degree(self.n, max_deg) {
            let applicable: Vec<&RewriteRule> = self.rules.iter().filter(|r| r.applies(&m)).collect();
            let set = if applicable.is_empty() {
                vec![WeylElement::monomial(m.clone(), Rational::one())]
            } else {
                let mut found: BTreeSet<String> = BTreeSet::new();
                let mut out = Vec::new();
                for r in applicable {
                    for nf in self.element_forms(&r.apply(&m), &memo) {
                        if out.len() < MAX_CANDIDATES && found.insert(nf.to_string()) {
                            out.push(nf);
                        }
                    }
                }
                out
            };
            memo.insert(m, set);
        }
        memo
    }

    /// All sums of per-term normal forms of `e`, using `memo` for its terms.
    fn element_forms(&self, e: &WeylElement, memo: &BTreeMap<WeylMonomial, Vec<WeylElement>>) -> Vec<WeylElement> {
        let mut acc = vec![WeylElement::zero(self.n)];
        for (t, c) in e.terms() {
            let choices = &memo[t];
            let mut next = Vec::new();
            let mut seen = BTreeSet::new();
            for a in &acc {
                for ch in choices {
                    let s = a + &ch.scale(c);
                    if next.len() < MAX_CANDIDATES && seen.insert(s.to_string()) {
                        next.push(s);
                    }
                }
            }
            acc = next;
        }
        acc
    }

    /// Explores every rule choice at every monomial of degree `≤ max_deg`
    /// and reports monomials with more than one normal form.
    pub fn confluence_check(&self, max_deg: u32) -> ConfluenceReport {
        let memo = self.normal_form_sets(max_deg);
        let violations = memo
            .into_iter()
            .filter(|(_, v)| v.len() > 1)
            .map(|(monomial, normal_forms)| ConfluenceViolation { monomial, normal_forms })
            .collect();
        ConfluenceReport { checked_degree: max_deg, violations }
    }

    /// Cumulative count of irreducible monomials of degree `≤ m`. Levels are
    /// exact when the system is confluent through `max_deg`, else uncertified.
    pub fn irreducible_dims(&self, max_deg: u32) -> TruncationTable {
        let confluent = self.confluence_check(max_deg).is_confluent();
        let f = self.target.as_ref().map(|t| t.to_string()).unwrap_or_else(|| self.name.clone());
        let mut table = TruncationTable::new(f, format!("irreducible({})", self.name));
        let mut total = 0;
        for m in 0..=max_deg {
            total += WeylMonomial::all_of_degree(self.n, m).iter().filter(|mm| self.is_irreducible(mm)).count();
            let status = match (confluent, total) {
                (false, _) => LevelStatus::Uncertified,
                (true, 0) => LevelStatus::ExactZero,
                (true, _) => LevelStatus::ExactGraded,
            };
            table.push(m as usize, total, status);
        }
        table
    }
}

fn mono(x: [u32; 2], d: [u32; 2]) -> WeylMonomial {
    WeylMonomial::new(x.to_vec(), d.to_vec())
}

/// Reductions modulo `D·xy + xy·D` on `x^i y^j ∂_x^p ∂_y^q`.
fn node_xy() -> Result<RewriteSystem> {
    let f = WeylElement::parse("x*y", 2)?;
    let mut sys = RewriteSystem::new(2, "node-xy").with_target(f);
    let e = |m: &WeylMonomial| (m.x_exp()[0], m.x_exp()[1], m.d_exp()[0], m.d_exp()[1]);
    sys.register(RewriteRule::new("xy", move |m| e(m).0 >= 1 && e(m).1 >= 1, |_| WeylElement::zero(2)))?;
    sys.register(RewriteRule::new("x-no-dx", move |m| e(m).0 >= 1 && e(m).2 == 0, |_| WeylElement::zero(2)))?;
    sys.register(RewriteRule::new("y-no-dy", move |m| e(m).1 >= 1 && e(m).3 == 0, |_| WeylElement::zero(2)))?;
    // x·(x^{i-1} y^j ∂_x^{p-1} ∂_y^q)·∂_x, with a = p and b = q + 1
    sys.register(RewriteRule::new(
        "x-dx",
        move |m| e(m).0 >= 1 && e(m).2 >= 1,
        move |m| {
            let (i, j, p, q) = e(m);
            let a = Rational::from_int(p as i64);
            let b = Rational::from_int(q as i64 + 1);
            WeylElement::from_terms(
                2,
                [
                    (mono([i - 1, j + 1], [p - 1, q + 1]), -(&a / &b)),
                    (mono([i - 1, j], [p - 1, q]), -a.clone()),
                ],
            )
        },
    ))?;
    // consequence of the overlap of "xy" and "x-dx" on x·y·∂_x
    sys.register(RewriteRule::new(
        "y2-dy",
        move |m| e(m).1 >= 2 && e(m).3 >= 1,
        move |m| {
            let (i, j, p, q) = e(m);
            WeylElement::monomial(mono([i, j - 1], [p, q - 1]), Rational::from_int(-(q as i64)))
        },
    ))?;
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> WeylElement {
        WeylElement::parse(s, 2).unwrap()
    }

    #[test]
    fn node_reductions() {
        let sys = RewriteSystem::preset("node-xy").unwrap();
        assert_eq!(sys.reduce(&el("x*dx")).unwrap(), el("-y*dy - 1"));
        assert_eq!(sys.reduce(&el("x^2")).unwrap(), WeylElement::zero(2));
        assert_eq!(sys.reduce(&el("dx*dy")).unwrap(), el("dx*dy"));
    }

    #[test]
    fn node_is_confluent() {
        let sys = RewriteSystem::preset("node-xy").unwrap();
        assert!(sys.confluence_check(6).is_confluent());
        assert_eq!(sys.irreducible_dims(5).dims(), vec![1, 3, 7, 13, 21, 31]);
    }

    #[test]
    fn adversarial_is_caught() {
        let sys = RewriteSystem::preset("adversarial").unwrap();
        let r = sys.confluence_check(2);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].monomial, WeylMonomial::new(vec![1], vec![0]));
        assert_eq!(sys.irreducible_dims(2).levels[1].status, LevelStatus::Uncertified);
    }

    #[test]
    fn trivial_presets() {
        let empty = RewriteSystem::preset("empty").unwrap();
        assert!(empty.confluence_check(4).is_confluent());
        assert_eq!(empty.irreducible_dims(3).dims(), vec![1, 5, 15, 35]);
        let all = RewriteSystem::preset("eliminate-all").unwrap();
        assert_eq!(all.irreducible_dims(3).dims(), vec![1, 1, 1, 1]);
        assert!(RewriteSystem::preset("nope").is_err());
    }

    #[test]
    fn increasing_rule_is_rejected() {
        let mut sys = RewriteSystem::new(1, "bad");
        let r = sys.register(RewriteRule::new("up", |m: &WeylMonomial| m.is_one(), |_| WeylElement::x(1, 0)));
        assert!(matches!(r, Err(Error::RuleNotDecreasing { .. })));
    }

    #[test]
    fn reduce_is_idempotent() {
        let sys = RewriteSystem::preset("node-xy").unwrap();
        let e = el("x^2*y*dx^3*dy + 3*x*dx^2*dy^2 - y^3*dy^2 + dx");
        let once = sys.reduce(&e).unwrap();
        assert_eq!(sys.reduce(&once).unwrap(), once);
    }
}
