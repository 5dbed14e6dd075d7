use std::hint::black_box;

use collagram::compressors::{lz78_encode, random_system, RandomConfig};
use collagram::grammar::{CollageSystem, Rule, Var};
use collagram::pipeline::{general_path, truncation_free_path};
use collagram::wfreq::suffix_array_with;
use collagram::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A truncation-free chain of `n` rules: each link appends a short power.
fn chain(n: usize) -> CollageSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let mut rules: Vec<Rule> = (0..4).map(|k| Rule::Terminal(b'a' + k)).collect();
    for _ in 0..12 {
        let i = rules.len();
        rules.push(Rule::Concat(Var::from_index(rng.gen_range(0..i)), Var::from_index(rng.gen_range(0..i))));
    }
    let small = rules.len();
    let mut last = Var::from_index(small - 1);
    while rules.len() + 2 <= n {
        rules.push(Rule::Repeat { base: Var::from_index(rng.gen_range(0..small)), power: rng.gen_range(2..6) });
        rules.push(Rule::Concat(last, Var::from_index(rules.len() - 1)));
        last = Var::from_index(rules.len() - 1);
    }
    CollageSystem::new(rules).unwrap()
}

fn truncated(seed: u64) -> CollageSystem {
    let config = RandomConfig { rules: 40, max_tree: u64::MAX, max_len: 1 << 40, ..Default::default() };
    (seed..).map(|s| random_system(&config, s)).find(|cs| cs.len() >= 30).unwrap()
}

fn bench_paths(c: &mut Criterion) {
    let mut group = c.benchmark_group("truncation_free");
    for n in [1000, 4000, 16000] {
        let cs = chain(n);
        for &exec in Exec::available() {
            group.bench_with_input(BenchmarkId::new(exec.name(), n), &cs, |b, cs| {
                b.iter(|| truncation_free_path(black_box(cs), 8, exec).unwrap())
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("general");
    let text: Vec<u8> = {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        (0..200_000).map(|_| b"acgt"[rng.gen_range(0..4)]).collect()
    };
    let inputs = [("lz78", lz78_encode(&text).unwrap()), ("random", truncated(1))];
    for (name, cs) in &inputs {
        for &exec in Exec::available() {
            group.bench_with_input(BenchmarkId::new(exec.name(), name), cs, |b, cs| {
                b.iter(|| general_path(black_box(cs), 8, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_suffix_array(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let text: Vec<u8> = (0..100_000).map(|_| rng.gen_range(b'a'..b'e')).collect();
    let mut group = c.benchmark_group("suffix_array");
    for &exec in Exec::available() {
        group.bench_function(exec.name(), |b| b.iter(|| suffix_array_with(black_box(&text), exec)));
    }
    group.finish();
}

criterion_group!(benches, bench_paths, bench_suffix_array);
criterion_main!(benches);
