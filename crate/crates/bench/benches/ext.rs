use criterion::{criterion_group, criterion_main, Criterion};

use dext::hypersurface::ext1_self_dims;
use dext::rewrite::RewriteSystem;
use dext::WeylElement;

fn node(c: &mut Criterion) {
    let f = WeylElement::parse("x*y", 2).unwrap();
    c.bench_function("ext_self node deg 6", |b| b.iter(|| ext1_self_dims(&f, 6, 3).unwrap()));
}

fn cusp(c: &mut Criterion) {
    let f = WeylElement::parse("y^2 - x^3", 2).unwrap();
    let mut g = c.benchmark_group("cusp");
    g.sample_size(10);
    g.bench_function("ext_self cusp deg 3", |b| b.iter(|| ext1_self_dims(&f, 3, 3).unwrap()));
    g.finish();
}

fn rewriting(c: &mut Criterion) {
    let sys = RewriteSystem::preset("node-xy").unwrap();
    c.bench_function("node-xy confluence deg 5", |b| b.iter(|| sys.confluence_check(5)));
    c.bench_function("node-xy irreducible deg 8", |b| b.iter(|| sys.irreducible_dims(8)));
}

criterion_group!(benches, node, cusp, rewriting);
criterion_main!(benches);
