use charcycle_bench::{jacobian, poly};
use charcycle_core::nearby::{restricted_critical_count, CountWindow};
use charcycle_core::quotient::{
    groebner_basis, local_quotient_dimension, MonomialOrder, SolveTolerances,
};
use charcycle_core::{Rational, RationalLinearForm};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn groebner(c: &mut Criterion) {
    let cases = [
        ("fermat-cubic", poly("x^3 + y^3 + z^3", &["x", "y", "z"])),
        ("A5", poly("x^6 + y^2", &["x", "y"])),
        ("E6", poly("x^3 + y^4 + z^2 + x*y^3", &["x", "y", "z"])),
    ];
    let mut g = c.benchmark_group("groebner-jacobian");
    for (name, f) in &cases {
        let gens = jacobian(f);
        g.bench_function(*name, |b| {
            b.iter(|| groebner_basis(black_box(&gens), MonomialOrder::GrevLex).unwrap())
        });
    }
    g.finish();
}

fn local_milnor(c: &mut Criterion) {
    let cases = [
        ("A5", poly("x^6 + y^2", &["x", "y"])),
        (
            "non-quasi-homogeneous",
            poly("x^4 + y^4 + x^2*y^2 + x^5", &["x", "y"]),
        ),
        ("fermat-cubic", poly("x^3 + y^3 + z^3", &["x", "y", "z"])),
    ];
    let mut g = c.benchmark_group("local-milnor");
    for (name, f) in &cases {
        let gens = jacobian(f);
        g.bench_function(*name, |b| {
            b.iter(|| local_quotient_dimension(black_box(&gens), 24).unwrap())
        });
    }
    g.finish();
}

fn restricted_count(c: &mut Criterion) {
    let f = poly("x^3 + y^3 + z^3", &["x", "y", "z"]);
    let phi = RationalLinearForm::from_integers(&[3, -7, 11]);
    let a = Rational::new(1.into(), 100.into());
    let window = CountWindow {
        radius: 10.0 * 0.01f64.cbrt(),
        far_points: Vec::new(),
    };
    let tol = SolveTolerances::default();
    c.bench_function("restricted-count/fermat-cubic", |b| {
        b.iter(|| restricted_critical_count(black_box(&f), &phi, &a, &window, 0, &tol).unwrap())
    });
}

criterion_group!(benches, groebner, local_milnor, restricted_count);
criterion_main!(benches);
