use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use glyphrec::features::{longest_bar_sum, Direction};
use glyphrec::mlp::TrainTarget;
use glyphrec::{extract, minimal_square};
use glyphrec_bench::{features, glyph, grid, network};

fn bench_features(c: &mut Criterion) {
    let img = glyph(17);
    c.bench_function("minimal_square", |b| b.iter(|| minimal_square(black_box(&img))));
    c.bench_function("extract", |b| b.iter(|| extract(black_box(&img))));

    let g = grid(32);
    let mut group = c.benchmark_group("longest_bar_sum_32");
    for dir in Direction::ALL {
        group.bench_function(format!("{dir:?}"), |b| b.iter(|| longest_bar_sum(black_box(&g), dir)));
    }
    group.finish();
}

fn bench_mlp(c: &mut Criterion) {
    let x = features(3);
    let t = TrainTarget::new(3, 50).unwrap();
    let model = network();
    c.bench_function("forward_76_60_50", |b| b.iter(|| model.forward(black_box(x.as_slice()))));
    c.bench_function("backprop_step_76_60_50", |b| {
        let mut m = model.clone();
        b.iter(|| m.backprop_step(black_box(x.as_slice()), &t, 0.8, 0.7))
    });
}

criterion_group!(benches, bench_features, bench_mlp);
criterion_main!(benches);
