use bcclab::{build_zigzag_random, BuildOptions, ClassAssignment, Placement};
use bcclab_bench::uep_spec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct");
    group.sample_size(10);
    for placement in [Placement::Peg, Placement::Random] {
        for n in [1024, 4096] {
            let spec = uep_spec(n);
            let options = BuildOptions {
                placement,
                ..Default::default()
            };
            let id = BenchmarkId::new(format!("{placement:?}").to_lowercase(), n);
            group.bench_function(id, |b| {
                b.iter(|| build_zigzag_random(&spec, ClassAssignment::Uep { pc1_fraction: 0.2 }, 1, &options).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, construction);
criterion_main!(benches);
