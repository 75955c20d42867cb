use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use optseg_bench::{corpus_path, sample_text, tokenizer};
use optseg_core::{
    analyze, encode_optimal, AnalysisOptions, CorpusSource, MetricSet, Mode, ReversedTrie, Tier,
};
use std::hint::black_box;

fn modes(c: &mut Criterion) {
    let text = sample_text();
    let mut group = c.benchmark_group("encode");
    group.throughput(Throughput::Bytes(text.len() as u64));
    for tier in [Tier::K50, Tier::K100] {
        let tok = tokenizer(tier);
        for mode in [Mode::Greedy, Mode::Optimal] {
            group.bench_with_input(BenchmarkId::new(tier.label(), mode), &mode, |b, &mode| {
                b.iter(|| tok.encode(black_box(&text), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn chunk_length(c: &mut Criterion) {
    let tok = tokenizer(Tier::K100);
    let text = sample_text();
    let mut group = c.benchmark_group("dp_chunk");
    for n in [1usize << 10, 1 << 12, 1 << 14] {
        group.throughput(Throughput::Bytes(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| encode_optimal(tok.vocabulary(), tok.trie(), black_box(&text[..n])).unwrap())
        });
    }
    group.finish();
}

fn trie_build(c: &mut Criterion) {
    let tok = tokenizer(Tier::K100);
    c.bench_function("trie_build_100k", |b| {
        b.iter(|| ReversedTrie::build(black_box(tok.vocabulary())))
    });
}

fn corpus(c: &mut Criterion) {
    let tok = tokenizer(Tier::K100);
    let opts = AnalysisOptions {
        metrics: "tsr,wordlen".parse::<MetricSet>().unwrap(),
        ..AnalysisOptions::default()
    };
    let src = CorpusSource::plain_lines(corpus_path("fin").display().to_string(), "fin");
    c.bench_function("analyze_fin", |b| {
        b.iter(|| analyze(&src, &tok, &opts).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = modes, chunk_length, trie_build, corpus
}
criterion_main!(benches);
