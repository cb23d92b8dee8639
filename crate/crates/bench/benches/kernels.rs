use criterion::{black_box, criterion_group, criterion_main, Criterion};
use graded_prime::constructions::{build_group_ring, build_matrix_graded, MatrixGrading};
use graded_prime::lpa::{build_lpa_acyclic, reachability, DirectedGraph};
use graded_prime::zmod::howell;
use graded_prime::{
    decide_prime, search_np_datum, Caps, FiniteGroup, FiniteRing, Flavor, Strategy, Zn,
};

fn howell_form(c: &mut Criterion) {
    let zn = Zn::new(360);
    let rows: Vec<Vec<u64>> = (0..24u64)
        .map(|i| {
            (0..16u64)
                .map(|j| (i * 37 + j * j * 11 + i * j) % 360)
                .collect()
        })
        .collect();
    c.bench_function("howell 24x16 mod 360", |b| {
        b.iter(|| howell(zn, black_box(rows.clone()), 16))
    });
}

fn primeness(c: &mut Criterion) {
    let caps = Caps::default();
    let m2z4 =
        build_matrix_graded(&FiniteRing::zmod(4), 2, MatrixGrading::Integers, &caps).unwrap();
    c.bench_function("brute-force primeness M2(Z/4)", |b| {
        b.iter(|| m2z4.ring().is_prime(&caps).unwrap())
    });
    c.bench_function("ordered shortcut M2(Z/4)", |b| {
        b.iter(|| decide_prime(&m2z4, Strategy::OrderedShortcut, &caps).unwrap())
    });
    let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
    let s = build_group_ring(&FiniteRing::zmod(3), &g, &caps).unwrap();
    c.bench_function("datum search F3[C6]", |b| {
        b.iter(|| search_np_datum(&s, Flavor::B, &caps).unwrap())
    });
    c.bench_function("classify F3[C6]", |b| b.iter(|| s.classify(&caps).unwrap()));
}

fn graphs(c: &mut Criterion) {
    let n = 64;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| [(i, (i * 7 + 3) % n), (i, (i + 1) % n)])
        .collect();
    let g = DirectedGraph::from_pairs(n, &pairs).unwrap();
    c.bench_function("reachability 64 vertices", |b| {
        b.iter(|| reachability(black_box(&g)))
    });
    let dag = DirectedGraph::from_pairs(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
    let caps = Caps {
        max_elements: u64::MAX,
        ..Caps::default()
    };
    c.bench_function("realize acyclic LPA over F2", |b| {
        b.iter(|| build_lpa_acyclic(&dag, &FiniteRing::zmod(2), &caps).unwrap())
    });
}

criterion_group!(benches, howell_form, primeness, graphs);
criterion_main!(benches);
