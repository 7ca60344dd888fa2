use criterion::{black_box, criterion_group, criterion_main, Criterion};

use dext::WeylElement;

fn multiply(c: &mut Criterion) {
    let a = WeylElement::parse("(x + dy + 1)^4", 2).unwrap();
    let b = WeylElement::parse("(dx + y^2 - 3/2)^4", 2).unwrap();
    c.bench_function("weyl product deg 4x8", |bch| bch.iter(|| black_box(&a) * black_box(&b)));
    let x = WeylElement::parse("x1*d2 + x3*d1 + d3", 3).unwrap();
    c.bench_function("weyl power 6, n=3", |bch| bch.iter(|| black_box(&x).pow(6)));
}

criterion_group!(benches, multiply);
criterion_main!(benches);
