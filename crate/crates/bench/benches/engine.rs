use arr_bench::{arrangement, forms, ring, PLANES_AND_QUADRIC, THREE_CUBICS};
use arr_core::oracle::macaulay_dim;
use arr_core::{
    arrangement_top, groebner_basis_in, jacobian_ideal, minimal_betti, MonomialOrder, Overrides,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn groebner(c: &mut Criterion) {
    let mut g = c.benchmark_group("groebner");
    for (name, src) in [
        ("planes-and-quadric", &PLANES_AND_QUADRIC[..]),
        ("three-cubics", &THREE_CUBICS[..]),
    ] {
        let spec = arrangement(src);
        let jac = jacobian_ideal(&spec).unwrap();
        // lex on the cubic Jacobian takes minutes
        let orders: &[MonomialOrder] = if name == "three-cubics" {
            &[MonomialOrder::GrevLex]
        } else {
            &[MonomialOrder::GrevLex, MonomialOrder::Lex]
        };
        for &order in orders {
            g.bench_function(format!("jacobian {name} {order:?}"), |b| {
                b.iter(|| groebner_basis_in(spec.ring(), jac.gens(), order).unwrap())
            });
        }
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let r = ring();
    let gens = forms(&r, &THREE_CUBICS);
    c.bench_function("macaulay rank, three cubics, degree 6", |b| {
        b.iter(|| macaulay_dim(&gens, 4, 6))
    });
}

fn top_part(c: &mut Criterion) {
    let mut g = c.benchmark_group("top");
    g.sample_size(10);
    let spec = arrangement(&PLANES_AND_QUADRIC);
    g.bench_function("planes-and-quadric", |b| {
        b.iter(|| arrangement_top(&spec, &[]).unwrap())
    });
    let top = arrangement_top(&spec, &[]).unwrap().top;
    g.bench_function("betti of top, planes-and-quadric", |b| {
        b.iter(|| minimal_betti(&top).unwrap())
    });
    g.bench_function("scenario twc-3", |b| {
        b.iter(|| arr_core::run_scenario("twc-3", &Overrides::default()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, groebner, oracle, top_part);
criterion_main!(benches);
