use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use toresolve_core::cone::cone_from_i64;
use toresolve_core::resolve3d::{blowup_curve_phase, completions, crepant_fixed_point_phase};
use toresolve_core::{cf_expansion, classify, embedding_dimension, hilbert_basis, resolve, Cone, LatticePolytope, PolygonComplex};

fn triangle() -> Cone {
    cone_from_i64(&[&[-3, 3, 1], &[3, 1, 1], &[0, -3, 1]]).unwrap()
}

// cone over k times the basic triangle, normalized area k²
fn dilated(k: i64) -> Cone {
    cone_from_i64(&[&[0, 0, 1], &[k, 0, 1], &[0, k, 1]]).unwrap()
}

fn hilbert(c: &mut Criterion) {
    let mut g = c.benchmark_group("hilbert_basis");
    for (name, cone) in [
        ("surface_5_4", cone_from_i64(&[&[1, 0], &[4, 5]]).unwrap()),
        ("surface_97_31", cone_from_i64(&[&[0, 1], &[97, -31]]).unwrap()),
        ("triangle_dual", triangle().dual().to_cone().unwrap()),
    ] {
        g.bench_with_input(BenchmarkId::from_parameter(name), &cone, |b, cone| b.iter(|| hilbert_basis(black_box(cone)).unwrap()));
    }
    g.finish();
}

fn surfaces(c: &mut Criterion) {
    c.bench_function("cf_expansion_large", |b| {
        let p = num_bigint::BigInt::from(1_000_003u64) * num_bigint::BigInt::from(999_983u64);
        let q = num_bigint::BigInt::from(12_345_679u64);
        b.iter(|| cf_expansion(black_box(&p), black_box(&q)).unwrap())
    });
}

fn classification(c: &mut Criterion) {
    let cone = triangle();
    c.bench_function("classify_triangle", |b| b.iter(|| classify(black_box(&cone)).unwrap()));
    c.bench_function("embedding_dimension_triangle", |b| b.iter(|| embedding_dimension(black_box(&cone)).unwrap()));
}

fn resolution(c: &mut Criterion) {
    let mut g = c.benchmark_group("resolve");
    g.sample_size(10);
    g.bench_function("triangle", |b| b.iter(|| resolve(black_box(&triangle())).unwrap()));
    for k in [2, 3, 4] {
        let cone = dilated(k);
        g.bench_with_input(BenchmarkId::new("dilated_basic", k), &cone, |b, cone| b.iter(|| resolve(black_box(cone)).unwrap()));
    }
    g.finish();

    let pc = PolygonComplex::new(LatticePolytope::from_i64(&[&[-3, 3], &[3, 1], &[0, -3]]).unwrap()).unwrap();
    let cdv = blowup_curve_phase(&crepant_fixed_point_phase(&pc).unwrap().complex).unwrap().complex;
    let mut g = c.benchmark_group("phases");
    g.sample_size(10);
    g.bench_function("fixed_point", |b| b.iter(|| crepant_fixed_point_phase(black_box(&pc)).unwrap()));
    g.bench_function("all_completions", |b| b.iter(|| completions(black_box(&cdv)).unwrap()));
    g.finish();
}

criterion_group!(benches, hilbert, surfaces, classification, resolution);
criterion_main!(benches);
