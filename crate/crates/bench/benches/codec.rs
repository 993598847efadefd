use bcclab::channel::{channel_llr, modulate_bpsk, transmit_awgn};
use bcclab::{encode, ChannelParams, Placement, SnrPoint, SpaDecoder};
use bcclab_bench::uep_code;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn encoding(c: &mut Criterion) {
    let mut group = c.benchmark_group("encode");
    for n in [1024, 4096] {
        let code = uep_code(n, Placement::Peg);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let info: Vec<u8> = (0..code.k()).map(|_| rng.gen_range(0..2)).collect();
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &info, |b, info| {
            b.iter(|| encode(&code, info).unwrap())
        });
    }
    group.finish();
}

fn decoding(c: &mut Criterion) {
    let mut group = c.benchmark_group("decode");
    group.sample_size(20);
    let code = uep_code(1024, Placement::Peg);
    let decoder = SpaDecoder::new(&code);
    let mut ws = decoder.workspace();
    for db in [1.5, 2.5, 4.0] {
        let params = ChannelParams::new(SnrPoint::from_db(db).unwrap(), 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let llrs: Vec<Vec<f64>> = (0..32)
            .map(|_| {
                let info: Vec<u8> = (0..code.k()).map(|_| rng.gen_range(0..2)).collect();
                let word = encode(&code, &info).unwrap();
                let y = transmit_awgn(&modulate_bpsk(&word), &params, &mut rng);
                channel_llr(&y, &params).unwrap()
            })
            .collect();
        group.throughput(Throughput::Elements(llrs.len() as u64));
        group.bench_with_input(BenchmarkId::new("n1024_db", db), &llrs, |b, llrs| {
            b.iter(|| {
                llrs.iter()
                    .map(|l| decoder.decode_into(l, 100, &mut ws).iterations_used)
                    .sum::<usize>()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, encoding, decoding);
criterion_main!(benches);
