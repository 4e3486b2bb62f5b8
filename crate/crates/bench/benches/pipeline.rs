use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rcp_bench::{problem, CASES};
use rcp_core::synthesis::analyze;
use rcp_core::verify::sample_check;
use rcp_core::{synthesize, Rational, SynthesisOptions, Tolerances};

fn bench_synthesize(c: &mut Criterion) {
    let opts = SynthesisOptions {
        allow_constant: false,
        ..SynthesisOptions::default()
    };
    let mut group = c.benchmark_group("synthesize");
    for (n, tag) in CASES {
        let exact = problem::<Rational>(n, tag, 0);
        group.bench_with_input(BenchmarkId::new("exact", tag), &exact, |b, p| {
            b.iter(|| synthesize(black_box(&p.system), black_box(&p.simplex), &opts).unwrap())
        });
        let float = problem::<f64>(n, tag, 0);
        group.bench_with_input(BenchmarkId::new("float", tag), &float, |b, p| {
            b.iter(|| synthesize(black_box(&p.system), black_box(&p.simplex), &opts).unwrap())
        });
    }
    group.finish();
}

fn bench_analyze(c: &mut Criterion) {
    let tol = Tolerances::default();
    let p = problem::<Rational>(3, rcp_core::CaseTag::N3D2B2Quad, 1);
    c.bench_function("analyze exact quad", |b| {
        b.iter(|| analyze(black_box(&p.system), black_box(&p.simplex), &tol).unwrap())
    });
}

fn bench_sample_check(c: &mut Criterion) {
    let tol = Tolerances::default();
    let p = problem::<Rational>(3, rcp_core::CaseTag::N3D2B2Quad, 2);
    let result = synthesize(&p.system, &p.simplex, &SynthesisOptions::default()).unwrap();
    let law = result.feasible().expect("quadrilateral instances are feasible").law.clone();
    c.bench_function("sample_check 1000", |b| {
        b.iter(|| sample_check(black_box(&p.simplex), black_box(&law), 1000, 0, &tol).unwrap())
    });
}

criterion_group!(benches, bench_synthesize, bench_analyze, bench_sample_check);
criterion_main!(benches);
