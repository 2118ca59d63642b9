use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hnquiver_core::counting::{moduli_count_poly, semistable_count_poly};
use hnquiver_core::strata::classify_representations;
use hnquiver_core::{Budgets, Character, DimVector, FieldTable, Quiver};

fn field_construction(c: &mut Criterion) {
    for q in [16u64, 49, 256] {
        c.bench_function(&format!("field/F_{q}"), |b| {
            b.iter(|| {
                FieldTable::with_limit(hnquiver_core::PrimePower::new(black_box(q)).unwrap(), 256).unwrap()
            })
        });
    }
}

fn classification(c: &mut Criterion) {
    let k2 = Quiver::kronecker(2);
    let theta = Character::new(vec![1, 0]);
    let mut group = c.benchmark_group("classify");
    group.sample_size(10);
    for (d, q) in [(vec![1, 1], 5u64), (vec![2, 3], 2)] {
        let d = DimVector::new(d);
        let f = FieldTable::new(q).unwrap();
        group.bench_function(format!("K2 {d} F_{q}"), |b| {
            b.iter(|| classify_representations(&k2, &d, &theta, &f, &Budgets::default()).unwrap())
        });
    }
    group.finish();
}

fn recursion(c: &mut Criterion) {
    let k3 = Quiver::kronecker(3);
    let theta = Character::new(vec![1, 0]);
    let d = DimVector::new(vec![3, 4]);
    c.bench_function("semistable K3 (3,4)", |b| {
        b.iter(|| semistable_count_poly(&k3, black_box(&d), &theta).unwrap())
    });
    c.bench_function("moduli K3 (3,4)", |b| {
        b.iter(|| moduli_count_poly(&k3, black_box(&d), &theta).unwrap())
    });
}

criterion_group!(benches, field_construction, classification, recursion);
criterion_main!(benches);
