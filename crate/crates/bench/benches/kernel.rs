use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use pseudoalg::constructions::{curr_build, w_build};
use pseudoalg::linalg::Matrix;
use pseudoalg::scalar::int;
use pseudoalg::tkk::tkk_build;
use pseudoalg::varieties::{check_variety, Variety};
use pseudoalg::{HopfAlgebra, LieData, MultiIndex, OrdinaryAlgebra, PModuleElement};

fn pbw(c: &mut Criterion) {
    c.bench_function("pbw_mul sl2 degree 3x3", |b| {
        b.iter(|| {
            // Fresh algebra each time so the straightening cache starts empty.
            let h = HopfAlgebra::new(LieData::sl2(), 6).unwrap();
            let x = MultiIndex(vec![1, 1, 1]);
            let y = MultiIndex(vec![2, 0, 1]);
            black_box(h.pbw_mul(&x, &y).unwrap())
        })
    });
}

fn pseudoproduct(c: &mut Criterion) {
    let h = Arc::new(HopfAlgebra::new(LieData::aff1(), 8).unwrap());
    let p = curr_build(h, &OrdinaryAlgebra::matrices2()).unwrap();
    let a: PModuleElement = [((MultiIndex(vec![2, 1]), 0), int(1)), ((MultiIndex(vec![0, 2]), 1), int(2))].into_iter().collect();
    let b: PModuleElement = [((MultiIndex(vec![1, 2]), 2), int(3)), ((MultiIndex(vec![1, 0]), 3), int(-1))].into_iter().collect();
    c.bench_function("pseudo_mul Curr M2 over aff(1)", |bench| bench.iter(|| black_box(p.mul_elements(&a, &b).unwrap())));
}

fn varieties(c: &mut Criterion) {
    let mut group = c.benchmark_group("whole_algebra");
    group.sample_size(10);
    let w = w_build(Arc::new(HopfAlgebra::new(LieData::aff1(), 6).unwrap())).unwrap();
    group.bench_function("lie W(aff(1))", |b| b.iter(|| black_box(check_variety(&w, Variety::Lie).unwrap())));
    let spin = OrdinaryAlgebra::jordan_bilinear(&Matrix::identity(2)).unwrap();
    let j = curr_build(Arc::new(HopfAlgebra::new(LieData::abelian(1), 6).unwrap()), &spin).unwrap();
    group.bench_function("jordan Curr J(f)", |b| b.iter(|| black_box(check_variety(&j, Variety::Jordan).unwrap())));
    group.bench_function("tkk Curr J(f)", |b| b.iter(|| black_box(tkk_build(&j, 1).unwrap())));
    group.finish();
}

criterion_group!(benches, pbw, pseudoproduct, varieties);
criterion_main!(benches);
