//! Compares the library's data-parallel inner loops against sequential
//! references. With the default `parallel` feature the library routes run on
//! rayon; benching again with `--no-default-features` measures the fallback,
//! and group names carry the active mode so the two runs line up.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spdisc::geometry::{sample_uniform, ProductPoint};
use spdisc::gram;
use spdisc::lattice::{brute_force_decide, decide_spd_condition, Coset1D, CosetProduct, IndexSet2D};
use spdisc::polynomials::SphereParam;
use spdisc::spectrum::{CoeffKey, ProductExpansion};
use std::collections::BTreeMap;

const MODE: &str = if cfg!(feature = "parallel") {
    "parallel"
} else {
    "sequential"
};

fn bench_inputs(points: usize) -> (ProductExpansion, Vec<ProductPoint>) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut coeffs = BTreeMap::new();
    while coeffs.len() < 12 {
        coeffs.insert(
            CoeffKey::new(
                rng.gen_range(0..8),
                rng.gen_range(0..8),
                rng.gen_range(0..8),
                rng.gen_range(0..8),
            ),
            rng.gen_range(0.05..1.5),
        );
    }
    let e = ProductExpansion::new(SphereParam::Finite(3), SphereParam::Finite(2), coeffs).unwrap();
    let pts = (0..points)
        .map(|_| {
            ProductPoint::new(
                sample_uniform(3, &mut rng).unwrap(),
                sample_uniform(2, &mut rng).unwrap(),
            )
        })
        .collect();
    (e, pts)
}

fn gram_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("gram_assembly");
    group.sample_size(20);
    for &n in &[16usize, 48] {
        let (e, pts) = bench_inputs(n);
        group.bench_with_input(BenchmarkId::new(format!("build_a_{MODE}"), n), &n, |b, _| {
            b.iter(|| gram::build_a(&e, &pts).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("sequential_reference", n),
            &n,
            |b, _| {
                b.iter(|| {
                    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
                    for mu in 0..n {
                        for nu in 0..n {
                            entries[mu * n + nu] =
                                e.kernel_value(&pts[mu], &pts[nu]).unwrap();
                        }
                    }
                    entries
                })
            },
        );
    }
    group.finish();
}

fn lattice_decision(c: &mut Criterion) {
    let mut group = c.benchmark_group("lattice_decision");
    group.sample_size(20);
    // Combined modulus lcm(8, 9, 5, 7, 11) = 27720: a wide residue scan.
    let wide = IndexSet2D::new(
        vec![
            CosetProduct::new(Coset1D::new(8, 1).unwrap(), Coset1D::new(9, 2).unwrap()),
            CosetProduct::new(Coset1D::new(5, 0).unwrap(), Coset1D::new(7, 3).unwrap()),
            CosetProduct::new(Coset1D::new(11, 4).unwrap(), Coset1D::new(8, 5).unwrap()),
        ],
        Default::default(),
    );
    group.bench_function(format!("decide_{MODE}"), |b| {
        b.iter(|| decide_spd_condition(&wide).unwrap())
    });

    let cover: Vec<CosetProduct> = (0..2)
        .flat_map(|a| {
            (0..2).map(move |b| {
                CosetProduct::new(Coset1D::new(2, a).unwrap(), Coset1D::new(2, b).unwrap())
            })
        })
        .collect();
    let covered = IndexSet2D::new(cover, Default::default());
    group.bench_function(format!("brute_force_{MODE}"), |b| {
        b.iter(|| brute_force_decide(&covered, 12, 576))
    });
    group.finish();
}

criterion_group!(benches, gram_assembly, lattice_decision);
criterion_main!(benches);
