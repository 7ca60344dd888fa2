use std::collections::BTreeMap;

use proptest::prelude::*;

use dext::hypersurface::{ext1_self_dims_with, SelfExt1, WideningOptions};
use dext::linalg::{solve, span_dim, SparseMatrix, SparseVector};
use dext::models::{self, act_word, CanonicalDx, Combination, Label, ModelId};
use dext::quotient::{self, DiagonalGroupAction};
use dext::rewrite::RewriteSystem;
use dext::{FiltrationKind, Rational, WeylElement, WeylMonomial};

fn rational() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(p, q)| Rational::new(p, q))
}

fn element(n: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = WeylElement> {
    let term = (prop::collection::vec(0..=max_exp, 2 * n), rational());
    prop::collection::vec(term, 0..=max_terms).prop_map(move |ts| {
        WeylElement::from_terms(n, ts.into_iter().map(|(e, c)| (WeylMonomial::new(e[..n].to_vec(), e[n..].to_vec()), c)))
    })
}

type Poly = BTreeMap<Vec<u32>, Rational>;

fn polynomial(n: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=4, n), rational()), 1..=4).prop_map(|ts| {
        let mut p = Poly::new();
        for (e, c) in ts {
            *p.entry(e).or_insert_with(Rational::zero) += &c;
        }
        p.retain(|_, c| !c.is_zero());
        p
    })
}

/// `x^a ∂^b` applied to a polynomial as a differential operator.
fn apply(e: &WeylElement, p: &Poly) -> Poly {
    let mut out = Poly::new();
    for (m, c) in e.terms() {
        for (exps, pc) in p {
            let mut coef = c * pc;
            let mut new = exps.clone();
            for (i, &b) in m.d_exp().iter().enumerate() {
                for _ in 0..b {
                    if new[i] == 0 {
                        coef = Rational::zero();
                        break;
                    }
                    coef *= &Rational::from_int(new[i] as i64);
                    new[i] -= 1;
                }
            }
            if coef.is_zero() {
                continue;
            }
            for (i, &a) in m.x_exp().iter().enumerate() {
                new[i] += a;
            }
            *out.entry(new).or_insert_with(Rational::zero) += &coef;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Dense rank over Q, for checking the sparse eliminations.
fn dense_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let factor = &m[r][c] / &pivot;
                let pivot_row = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &(&factor * p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    let entry = prop_oneof![3 => Just(Rational::zero()), 2 => rational()];
    prop::collection::vec(prop::collection::vec(entry, cols), rows)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, .. ProptestConfig::default() })]

    #[test]
    fn product_is_operator_composition(a in element(2, 2, 3), b in element(2, 2, 3), p in polynomial(2)) {
        prop_assert_eq!(apply(&(&a * &b), &p), apply(&a, &apply(&b, &p)));
    }

    #[test]
    fn ring_laws(a in element(2, 2, 3), b in element(2, 2, 3), c in element(2, 2, 3)) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &WeylElement::one(2), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn order_degree_is_additive(a in element(3, 2, 3), b in element(3, 2, 3)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let k = FiltrationKind::Order;
        prop_assert_eq!((&a * &b).degree(k), Some(a.degree(k).unwrap() + b.degree(k).unwrap()));
    }

    #[test]
    fn text_round_trip(a in element(3, 3, 4)) {
        let back = WeylElement::parse(&a.to_string(), 3).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn rank_matches_dense(rows in matrix(5, 6)) {
        let sparse: Vec<SparseVector> = rows.iter().map(|r| SparseVector::from_dense(r)).collect();
        let r = dense_rank(&rows);
        prop_assert_eq!(span_dim(&sparse, 6).unwrap(), r);
        let m = SparseMatrix::new(sparse, 6).unwrap();
        prop_assert_eq!(m.rank(), r);
        prop_assert_eq!(m.transpose().rank(), r);
    }

    #[test]
    fn solve_is_correct(rows in matrix(4, 5), b in prop::collection::vec(rational(), 4)) {
        let a = SparseMatrix::new(rows.iter().map(|r| SparseVector::from_dense(r)).collect(), 5).unwrap();
        let rhs = SparseVector::from_dense(&b);
        match solve(&a, &rhs).unwrap() {
            Some(x) => prop_assert_eq!(a.mul_vec(&x).unwrap(), rhs),
            None => {
                let augmented: Vec<Vec<Rational>> =
                    rows.iter().zip(&b).map(|(r, v)| r.iter().cloned().chain([v.clone()]).collect()).collect();
                prop_assert!(dense_rank(&augmented) > dense_rank(&rows));
            }
        }
    }

    #[test]
    fn canonical_dx_reduction_is_a_projection(e in element(2, 3, 4), g in element(2, 2, 2)) {
        let dx = CanonicalDx::new(WeylElement::parse("y^2 - x^3", 2).unwrap()).unwrap();
        let r = dx.reduce(&e);
        prop_assert_eq!(dx.reduce(&r), r.clone());
        prop_assert_eq!(dx.reduce(&(&e + &(dx.polynomial() * &g))), r.clone());
        prop_assert!(r.terms().all(|(m, _)| dx.is_standard(m)));
    }

    #[test]
    fn model_action_is_a_right_action(a in element(2, 2, 2), b in element(2, 2, 2), i in 0i64..3, j in 0i64..3) {
        for id in ["nlines-ic:3", "kummer:2:1/3", "delta:2", "free:2"] {
            let model = models::build(&ModelId::parse(id, None).unwrap()).unwrap();
            let label = match id {
                "free:2" => Label(vec![i, 0, 0, j]),
                _ => Label(vec![i, j]),
            };
            let m = Combination::basis(label);
            let stepwise = act_word(model.as_ref(), &act_word(model.as_ref(), &m, &a).unwrap(), &b).unwrap();
            prop_assert_eq!(act_word(model.as_ref(), &m, &(&a * &b)).unwrap(), stepwise, "model {}", id);
        }
    }

    #[test]
    fn node_rewriting_respects_the_quotient(a in element(2, 2, 3), g in element(2, 2, 2)) {
        let sys = RewriteSystem::preset("node-xy").unwrap();
        let ext = SelfExt1::new(&WeylElement::parse("x*y", 2).unwrap(), 3).unwrap();
        let f = sys.target().unwrap().clone();
        let nf = sys.reduce(&a).unwrap();
        prop_assert_eq!(sys.reduce(&nf).unwrap(), nf.clone());
        prop_assert_eq!(sys.reduce(&(&a + &(&g * &f))).unwrap(), nf.clone());
        prop_assert_eq!(sys.reduce(&(&a + &(&f * &g))).unwrap(), nf.clone());
        prop_assert!(nf.terms().all(|(m, _)| sys.is_irreducible(m)));
        prop_assert_eq!(ext.normal_form(&a).unwrap(), nf);
    }

    #[test]
    fn isotypic_parts_partition_each_degree(order in 2u32..=5, w in prop::collection::vec(0u32..5, 2..=3)) {
        let g = DiagonalGroupAction::cyclic(order, w).unwrap();
        let n = g.dim() as u64;
        let mut sums = vec![0usize; 7];
        for chi in g.characters() {
            for (s, d) in sums.iter_mut().zip(quotient::isotypic_dims(&g, &chi, 6).unwrap().dims) {
                *s += d;
            }
        }
        let binom = |a: u64, b: u64| (0..b).fold(1u64, |acc, i| acc * (a - i) / (i + 1)) as usize;
        let full: Vec<usize> = (0..=6).map(|m| binom(m + n - 1, n - 1)).collect();
        prop_assert_eq!(sums, full);
    }

    #[test]
    fn pseudo_reflection_means_one_weight(order in 2u32..=6, w in prop::collection::vec(0u32..6, 2..=3)) {
        let g = DiagonalGroupAction::cyclic(order, w).unwrap();
        let nonzero = |e: &Vec<u32>| e.iter().filter(|&&v| v != 0).count();
        let els = g.elements();
        prop_assert_eq!(g.has_pseudo_reflection(), els.iter().any(|e| nonzero(e) == 1));
        prop_assert_eq!(g.is_free_away_from_origin(), els.iter().skip(1).all(|e| nonzero(e) == e.len()));
    }
}

#[test]
fn widening_never_increases_a_level() {
    let f = WeylElement::parse("x^2*y + x*y^2", 2).unwrap();
    let mut previous: Option<Vec<usize>> = None;
    for cap in [4, 8, 12, 16] {
        let t = ext1_self_dims_with(&f, 2, WideningOptions { window: 2, max_source_degree: cap }).unwrap();
        let dims = t.dims();
        if let Some(p) = &previous {
            assert!(dims.iter().zip(p).all(|(a, b)| a <= b), "{dims:?} after {p:?}");
        }
        previous = Some(dims);
    }
}

#[test]
fn triangular_numbers_for_the_node() {
    let t = ext1_self_dims_with(&WeylElement::parse("x*y", 2).unwrap(), 6, WideningOptions::new(6, 3)).unwrap();
    let expected: Vec<usize> = (0..=6).map(|m| m * m + m + 1).collect();
    assert_eq!(t.dims(), expected);
}
