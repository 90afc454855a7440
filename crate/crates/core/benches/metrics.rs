use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use liotkit::metrics::{auc, best_threshold_by_f1, confusion, connected_components, Connectivity, ProbabilityMap};
use liotkit::perturb::random_image;
use liotkit::BinaryMask;

fn inputs() -> (ProbabilityMap, BinaryMask, BinaryMask) {
    let (w, h) = (565, 584);
    let scores = random_image(w, h, 3).unwrap();
    let noise = random_image(w, h, 4).unwrap();
    let gt = BinaryMask::new(w, h, scores.data().iter().zip(noise.data()).map(|(&s, &n)| s / 2 + n / 2 > 150).collect()).unwrap();
    let fov = BinaryMask::new(w, h, (0..w * h).map(|i| (i % w) > 20).collect()).unwrap();
    (ProbabilityMap::from_gray(&scores), gt, fov)
}

fn evaluation(c: &mut Criterion) {
    let (pred, gt, fov) = inputs();
    let binary = pred.binarize(0.5);
    c.bench_function("confusion_fov", |b| b.iter(|| confusion(black_box(&binary), &gt, Some(&fov))));
    c.bench_function("auc_fov", |b| b.iter(|| auc(black_box(&pred), &gt, Some(&fov))));
    c.bench_function("components_8", |b| b.iter(|| connected_components(black_box(&gt), Connectivity::Eight)));
    c.bench_function("best_threshold", |b| {
        b.iter(|| best_threshold_by_f1(black_box(&pred), &gt, Some(&fov), Connectivity::Eight))
    });
}

criterion_group!(benches, evaluation);
criterion_main!(benches);
