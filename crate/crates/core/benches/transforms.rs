use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use liotkit::perturb::random_image;
use liotkit::{census_transform_with, liot_transform_naive, liot_transform_with, Execution};

fn liot(c: &mut Criterion) {
    let mut group = c.benchmark_group("liot");
    for &(w, h) in &[(128, 128), (565, 584), (1024, 1024)] {
        let img = random_image(w, h, 7).unwrap();
        group.throughput(Throughput::Elements((w * h) as u64));
        let id = format!("{w}x{h}");
        group.bench_with_input(BenchmarkId::new("sequential", &id), &img, |b, img| {
            b.iter(|| liot_transform_with(black_box(img), Execution::Sequential))
        });
        group.bench_with_input(BenchmarkId::new("parallel", &id), &img, |b, img| {
            b.iter(|| liot_transform_with(black_box(img), Execution::Parallel))
        });
        if w * h <= 565 * 584 {
            group.bench_with_input(BenchmarkId::new("naive", &id), &img, |b, img| {
                b.iter(|| liot_transform_naive(black_box(img)))
            });
        }
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    let img = random_image(565, 584, 11).unwrap();
    group.throughput(Throughput::Elements((565 * 584) as u64));
    group.bench_function("sequential", |b| b.iter(|| census_transform_with(black_box(&img), Execution::Sequential)));
    group.bench_function("parallel", |b| b.iter(|| census_transform_with(black_box(&img), Execution::Parallel)));
    group.finish();
}

criterion_group!(benches, liot, census);
criterion_main!(benches);
