use criterion::{black_box, criterion_group, criterion_main, Criterion};
use sullivan::classify::classify;
use sullivan::cohomology::{self, BettiOptions};
use sullivan::linalg;
use sullivan::verify_hilali;
use sullivan_bench::{model, WORKLOADS};

fn betti(c: &mut Criterion) {
    let mut group = c.benchmark_group("betti");
    for name in WORKLOADS {
        let m = model(name);
        group.bench_function(name, |b| {
            b.iter(|| cohomology::betti(black_box(&m), &BettiOptions::default()))
        });
    }
    group.finish();
}

fn rank(c: &mut Criterion) {
    let m = model("two_stage_223");
    // the largest coboundary matrix below the formal dimension
    let (n, matrix) = (0..25)
        .map(|n| (n, cohomology::coboundary_matrix(&m, n)))
        .max_by_key(|(_, a)| a.rows() * a.cols())
        .unwrap();
    c.bench_function(&format!("rank/two_stage_223/degree_{n}"), |b| {
        b.iter(|| linalg::rank(black_box(&matrix)))
    });
}

fn reports(c: &mut Criterion) {
    let x = model("appendix_X");
    c.bench_function("classify/appendix_X", |b| {
        b.iter(|| classify(black_box(&x)))
    });
    let y = model("appendix_Y");
    c.bench_function("hilali/appendix_Y", |b| {
        b.iter(|| verify_hilali(black_box(&y)))
    });
}

criterion_group!(benches, betti, rank, reports);
criterion_main!(benches);
