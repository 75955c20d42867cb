//! Peak memory must not grow with corpus size. Lives in its own test binary
//! so the process high-water mark is not shared with other tests.

mod common;

use std::io::{BufWriter, Write};
use std::path::Path;

use optseg_core::{analyze, AnalysisOptions, CorpusSource, MetricSet, Tier};

fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}

fn synthetic(path: &Path, bytes: usize) {
    let sample = std::fs::read_to_string(common::sample_corpus("fin")).unwrap();
    let mut w = BufWriter::new(std::fs::File::create(path).unwrap());
    let mut written = 0;
    while written < bytes {
        w.write_all(sample.as_bytes()).unwrap();
        written += sample.len();
    }
}

fn run(path: &Path) {
    let opts = AnalysisOptions {
        metrics: "tsr,context-fit".parse::<MetricSet>().unwrap(),
        threads: Some(2),
        ..AnalysisOptions::default()
    };
    let src = CorpusSource::plain_lines(path.display().to_string(), "fin");
    let report = analyze(&src, common::tokenizer(Tier::K50), &opts).unwrap();
    assert!(report.docs_processed > 0);
}

fn check_growth(total_bytes: usize) {
    let Some(_) = peak_rss_kib() else {
        eprintln!("no /proc/self/status; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.txt");
    let large = dir.path().join("large.txt");
    synthetic(&small, 1 << 20);
    synthetic(&large, total_bytes);
    run(&small);
    let baseline = peak_rss_kib().unwrap();
    run(&large);
    let peak = peak_rss_kib().unwrap();
    let growth_mib = (peak.saturating_sub(baseline)) as f64 / 1024.0;
    eprintln!("baseline {baseline} KiB, peak {peak} KiB, growth {growth_mib:.1} MiB");
    // Holding the corpus would cost at least its size.
    assert!(
        growth_mib < 8.0,
        "peak memory grew by {growth_mib:.1} MiB on a {} MiB corpus",
        total_bytes >> 20
    );
}

#[test]
fn peak_memory_is_flat_on_24_mib() {
    check_growth(24 << 20);
}

#[test]
#[ignore = "slow: 100 MB corpus"]
fn peak_memory_is_flat_on_100_mb() {
    check_growth(100_000_000);
}
