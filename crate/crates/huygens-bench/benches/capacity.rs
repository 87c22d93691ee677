use criterion::{black_box, criterion_group, criterion_main, Criterion};

use huygens_core::*;

fn det(omega: f64, t_i: f64) -> DetectorConfig {
    DetectorConfig::new(omega, 1.0, t_i, 0.01).unwrap()
}

fn reference_pair(r: f64) -> CommPair {
    CommPair::new(det(10.0, REFERENCE_ANCHOR), det(10.0, 2.0), Separation::Comoving { r }).unwrap()
}

fn bench_closed_forms(c: &mut Criterion) {
    let a = det(10.0, REFERENCE_ANCHOR);
    let b = det(10.0, 2.0);
    c.bench_function("capacity_matter_closed", |bench| {
        bench.iter(|| capacity_matter_closed(black_box(&a), black_box(&b), 1.0, 1.0).unwrap())
    });
    c.bench_function("capacity_lambda_closed", |bench| {
        bench.iter(|| capacity_lambda_closed(black_box(&a), black_box(&b), 1.0, 1.0, 1.0).unwrap())
    });
    c.bench_function("cosine_integral_small", |bench| {
        bench.iter(|| numerics::cosine_integral(black_box(2.5)).unwrap())
    });
    c.bench_function("cosine_integral_large", |bench| {
        bench.iter(|| numerics::cosine_integral(black_box(40.0)).unwrap())
    });
}

fn bench_quadrature_paths(c: &mut Criterion) {
    let (m, _) = normalized_pair(REFERENCE_ANCHOR).unwrap();
    let spec = QuadratureSpec::default();
    let pair = reference_pair(0.5);
    c.bench_function("i_theta_factorized_quadrature", |bench| {
        bench.iter(|| i_theta(black_box(&m), black_box(&pair), &spec).unwrap())
    });
    c.bench_function("i_theta_2d_clipped", |bench| {
        bench.iter(|| i_theta_general_2d(black_box(&m), black_box(&pair), &spec).unwrap())
    });
    let emitter = DetectorState::optimal_emitter();
    let receiver = DetectorState::optimal_receiver();
    c.bench_function("s2_closed_dispatch", |bench| {
        bench.iter(|| s2(black_box(&m), black_box(&pair), &emitter, &receiver, &spec).unwrap())
    });
}

fn bench_mode_equation(c: &mut Criterion) {
    let (m, _) = normalized_pair(REFERENCE_ANCHOR).unwrap();
    let eta_src = m.conformal_time(2.0).unwrap();
    let problem = GreenFunctionProblem::for_model(&m, 50.0, eta_src).unwrap();
    let eta_target = m.conformal_time(REFERENCE_ANCHOR).unwrap();
    c.bench_function("mode_function_k50", |bench| {
        bench.iter(|| mode_function_at(black_box(&problem), black_box(eta_target)).unwrap())
    });
}

criterion_group!(benches, bench_closed_forms, bench_quadrature_paths, bench_mode_equation);
criterion_main!(benches);
