use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hankelkit_bench::{generating_vector, hilbert, random_binary_form, random_point, random_tensor};
use hankelkit_core::certificates::build_sextic_decomposition;
use hankelkit_core::classes::constants::sextic_threshold;
use hankelkit_core::classes::{build_truncated, quasi_sextic_sufficient, sextic_truncated_classify, QuasiSextic, TruncatedSpec};
use hankelkit_core::decompositions::vandermonde_decompose;
use hankelkit_core::{binary_psd_oracle, is_strong_hankel, refute_psd, verify_decomposition, RefuteOptions};

fn eval(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval");
    for (m, n) in [(4, 3), (6, 3), (6, 6), (10, 4)] {
        let t = random_tensor(1, m, n);
        let x = random_point(2, n);
        group.bench_with_input(BenchmarkId::new("grouped", format!("m{m}n{n}")), &x, |b, x| {
            b.iter(|| t.eval(black_box(x)).unwrap())
        });
        if n.pow(m as u32) <= 50_000 {
            group.bench_with_input(BenchmarkId::new("index_loop", format!("m{m}n{n}")), &x, |b, x| {
                b.iter(|| t.eval_index_loop(black_box(x)).unwrap())
            });
        }
    }
    group.finish();
}

fn classification(c: &mut Criterion) {
    let cstar = sextic_threshold();
    c.bench_function("sextic_classify", |b| {
        b.iter(|| sextic_truncated_classify(black_box(cstar * 1.01), 1.0, black_box(cstar * 1.01)))
    });
    let q = QuasiSextic::new(2000.0, 1e-6, 1.0, 1e-6, 2000.0);
    c.bench_function("quasi_sufficient_search", |b| b.iter(|| quasi_sextic_sufficient(black_box(&q)).unwrap()));
    for (m, n) in [(4, 3), (6, 5), (5, 4)] {
        let t = hilbert(m, n);
        c.bench_function(&format!("strong_hankel_m{m}n{n}"), |b| b.iter(|| is_strong_hankel(black_box(&t))));
    }
}

fn certificates(c: &mut Criterion) {
    let v = sextic_threshold() * 1.01;
    let t = build_truncated(&TruncatedSpec::new(6, 3, v, 1.0, v)).unwrap();
    let d = build_sextic_decomposition(v, 1.0, v).unwrap();
    c.bench_function("sextic_decomposition_build", |b| b.iter(|| build_sextic_decomposition(black_box(v), 1.0, v)));
    c.bench_function("sextic_decomposition_verify", |b| b.iter(|| verify_decomposition(black_box(&t), &d).unwrap()));

    let mut group = c.benchmark_group("binary_oracle");
    for degree in [6u32, 12, 20] {
        let f = random_binary_form(3, degree);
        group.bench_with_input(BenchmarkId::from_parameter(degree), &f, |b, f| b.iter(|| binary_psd_oracle(f).unwrap()));
    }
    group.finish();
}

fn refute(c: &mut Criterion) {
    let t = random_tensor(4, 4, 4);
    let opts = RefuteOptions { seed: 42, starts: 16, iterations: 200 };
    c.bench_function("refute_m4n4", |b| b.iter(|| refute_psd(black_box(&t), &opts).unwrap()));
}

fn vandermonde(c: &mut Criterion) {
    let mut group = c.benchmark_group("vandermonde");
    for (m, n) in [(2, 3), (4, 3), (3, 4)] {
        let gen = generating_vector(&random_tensor(5, m, n));
        group.bench_with_input(BenchmarkId::from_parameter(format!("m{m}n{n}")), &gen, |b, g| {
            b.iter(|| vandermonde_decompose(black_box(g), None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, eval, classification, certificates, refute, vandermonde);
criterion_main!(benches);
