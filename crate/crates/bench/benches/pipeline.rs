use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use medusa_core::builder::FrameSlices;
use medusa_core::geometry::{alpha_values, delaunay, BigRational};
use medusa_core::synth::{generate, Dynamics, SynthConfig};
use medusa_core::{build_inclusion, extended_persistence, image_persistence, ColorScope, ComplexKind, TargetSpec};

fn config(dimension: usize, grid_side: usize) -> SynthConfig {
    SynthConfig { seed: 7, dimension, grid_side, frames: 10, dynamics: Dynamics::Segregation, ..SynthConfig::default() }
}

fn geometry(c: &mut Criterion) {
    let alpha0 = BigRational::from_float(0.75).unwrap();
    for (dim, side) in [(2, 12), (3, 5)] {
        let ts = generate(&config(dim, side)).unwrap();
        let points = ts.frame_points(0);
        c.bench_function(&format!("delaunay_alpha_{dim}d_{}pts", points.len()), |b| {
            b.iter(|| {
                let mut s = delaunay(&points, dim).unwrap();
                alpha_values(&mut s, &alpha0);
                s
            })
        });
    }
}

fn persistence(c: &mut Criterion) {
    let alpha0 = BigRational::from_float(0.75).unwrap();
    let ts = generate(&config(2, 8)).unwrap();
    let slices = FrameSlices::compute(&ts, &alpha0).unwrap();
    let multi = TargetSpec::new(ComplexKind::Alpha, ColorScope::Multi);
    let red = TargetSpec::new(ComplexKind::Alpha, ColorScope::Mono(1));
    c.bench_function("build_alpha_multi_2d", |b| b.iter(|| slices.build(&ts, multi).unwrap()));
    let (amb, _) = slices.build(&ts, multi).unwrap();
    let (sub, _) = slices.build(&ts, red).unwrap();
    c.bench_function("extended_persistence_2d", |b| b.iter(|| extended_persistence(&amb).unwrap()));
    c.bench_function("image_persistence_2d", |b| {
        b.iter_batched(
            || build_inclusion(&sub, red, &amb, multi).unwrap(),
            |inc| image_persistence(&inc).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, geometry, persistence);
criterion_main!(benches);
