//! One PASS/FAIL line per acceptance criterion.
//!
//! Criterion 6 checks four stated action identities literally. Two of them
//! do not hold as stated (see the README), so its line is red; the test
//! pins that exact pattern rather than the overall pass flag.

use std::io::Write;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use dext::hypersurface::{self, SelfExt1};
use dext::models::{self, check_module_axioms, ModelId};
use dext::{multiply, FiltrationKind, Generator, Rational, WeylElement, WeylMonomial};
use dext_cli::verify::{self, CriterionResult};

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn element(n: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = WeylElement> {
    let term = (prop::collection::vec(0..=max_exp, 2 * n), -4i64..=4, 1i64..=3);
    prop::collection::vec(term, 1..=max_terms).prop_map(move |ts| {
        WeylElement::from_terms(
            n,
            ts.into_iter().map(|(e, p, q)| (WeylMonomial::new(e[..n].to_vec(), e[n..].to_vec()), Rational::new(p, q))),
        )
    })
}

fn nonzero(n: usize) -> impl Strategy<Value = WeylElement> {
    element(n, 3, 3).prop_filter("nonzero", |e| !e.is_zero())
}

/// Random elements of End(D_X) for the node: sums of products of
/// `x∂x^k`, `y∂y^k`, `x`, `y`, each of which satisfies `α·xy ∈ xy·D`.
fn node_endomorphism() -> impl Strategy<Value = WeylElement> {
    let factor = (0usize..4, 1u32..=3).prop_map(|(kind, k)| {
        let text = match kind {
            0 => format!("x*dx^{k}"),
            1 => format!("y*dy^{k}"),
            2 => "x".to_string(),
            _ => "y".to_string(),
        };
        WeylElement::parse(&text, 2).unwrap()
    });
    let product = prop::collection::vec(factor, 1..=2).prop_map(|fs| fs.into_iter().reduce(|a, b| &a * &b).unwrap());
    prop::collection::vec((product, -3i64..=3), 1..=2).prop_map(|ps| {
        ps.into_iter().fold(WeylElement::zero(2), |acc, (p, c)| &acc + &p.scale(&Rational::from_int(c)))
    })
}

fn run_prop<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strategy, check).map_err(|e| e.to_string())
}

fn commutation() -> Result<(), String> {
    for n in 1..=3 {
        for a in Generator::all(n) {
            for b in Generator::all(n) {
                let (ga, gb) = (WeylElement::generator(n, a), WeylElement::generator(n, b));
                let bracket = &(&ga * &gb) - &(&gb * &ga);
                let want = match (a, b) {
                    (Generator::D(i), Generator::X(j)) if i == j => WeylElement::one(n),
                    (Generator::X(i), Generator::D(j)) if i == j => -WeylElement::one(n),
                    _ => WeylElement::zero(n),
                };
                if bracket != want {
                    return Err(format!("[{ga}, {gb}] = {bracket}"));
                }
            }
        }
    }
    Ok(())
}

fn criterion_nine() -> CriterionResult {
    let mut failures = Vec::new();
    let record = |failures: &mut Vec<String>, name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };
    record(&mut failures, "commutation", commutation());
    record(
        &mut failures,
        "associativity",
        run_prop(200, (element(2, 2, 3), element(2, 2, 3), element(2, 2, 3)), |(a, b, c)| {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            Ok(())
        }),
    );
    record(
        &mut failures,
        "bernstein additivity",
        run_prop(200, (nonzero(2), nonzero(2)), |(a, b)| {
            let k = FiltrationKind::Bernstein;
            prop_assert_eq!(multiply(&a, &b).unwrap().degree(k), Some(a.degree(k).unwrap() + b.degree(k).unwrap()));
            Ok(())
        }),
    );
    record(
        &mut failures,
        "symbol multiplicativity",
        run_prop(200, (nonzero(2), nonzero(2)), |(a, b)| {
            for k in [FiltrationKind::Bernstein, FiltrationKind::Order] {
                let left = (&a * &b).principal_symbol(k).unwrap();
                let right = a.principal_symbol(k).unwrap().mul(&b.principal_symbol(k).unwrap());
                prop_assert_eq!(left, right);
            }
            Ok(())
        }),
    );
    let model_ids = [
        "delta:1",
        "delta:2",
        "delta:3",
        "nlines-ic:2",
        "nlines-ic:3",
        "nlines-ic:4",
        "kummer:2:1/2",
        "kummer:3:1/3",
        "free:1",
        "free:2",
        "dx:x*y",
        "dx:y^2 - x^3",
    ];
    for id in model_ids {
        let model = models::build(&ModelId::parse(id, None).unwrap()).unwrap();
        let report = check_module_axioms(model.as_ref(), 6);
        if !report.is_ok() {
            failures.push(format!("axioms {id}: {} violations", report.violations.len()));
        }
    }
    let xy = WeylElement::parse("x*y", 2).unwrap();
    record(
        &mut failures,
        "twist symbol",
        run_prop(50, node_endomorphism().prop_filter("nonzero", |a| !a.is_zero()), |alpha| {
            let end = hypersurface::solve_twist(&xy, &alpha).unwrap();
            let k = FiltrationKind::Order;
            prop_assert_eq!(end.beta().principal_symbol(k).unwrap(), alpha.principal_symbol(k).unwrap());
            Ok(())
        }),
    );
    let ext = SelfExt1::new(&xy, 3).unwrap();
    record(
        &mut failures,
        "representative independence",
        run_prop(50, (node_endomorphism(), element(2, 2, 3), element(2, 2, 2)), |(alpha, m, m2)| {
            let end = hypersurface::solve_twist(&xy, &alpha).unwrap();
            let base = ext.act(&end, &m).unwrap();
            prop_assert_eq!(&ext.act(&end, &(&m + &(&m2 * &xy))).unwrap(), &base);
            prop_assert_eq!(&ext.act(&end, &(&m + &(&xy * &m2))).unwrap(), &base);
            Ok(())
        }),
    );
    let passed = failures.is_empty();
    let detail = if passed {
        format!("commutation, 200 triples, additivity, symbols, axioms for {} models, 50 twists, 50 pairs", model_ids.len())
    } else {
        failures.join("; ")
    };
    CriterionResult { id: 9, name: "property suites".into(), passed, detail }
}

#[test]
fn acceptance() {
    let mut results = verify::run_criteria(&[1, 2, 3, 4, 5, 6, 7, 8], verify::thread_count());
    results.push(criterion_nine());
    results.extend(verify::run_criteria(&[10], 1));
    // straight to the handle so the lines show without --nocapture
    let mut err = std::io::stderr().lock();
    writeln!(err).unwrap();
    for r in &results {
        writeln!(err, "{}", r.line()).unwrap();
    }
    drop(err);
    for r in &results {
        if r.id != 6 {
            assert!(r.passed, "criterion {} failed: {}", r.id, r.detail);
        }
    }
    // criterion 6: identities 2 and 3 hold in every case, 1 and 4 in none
    let fails = verify::action_identity_failures().unwrap();
    let counts: Vec<usize> = fails.iter().map(|(c, _)| *c).collect();
    assert_eq!(counts, vec![48, 0, 0, 48], "{fails:?}");
}

#[test]
fn strategies_produce_endomorphisms() {
    let xy = WeylElement::parse("x*y", 2).unwrap();
    let mut r = runner(1);
    for _ in 0..20 {
        let alpha = node_endomorphism().new_tree(&mut r).unwrap().current();
        assert!(hypersurface::end_membership(&xy, &alpha).unwrap(), "{alpha}");
    }
}
