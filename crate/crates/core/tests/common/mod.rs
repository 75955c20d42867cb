#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use optseg_core::{Tier, Tokenizer};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn vocab_dir() -> PathBuf {
    data_dir().join("vocab")
}

pub fn fixture(name: &str) -> PathBuf {
    data_dir().join("fixtures").join(name)
}

pub fn tokenizer(tier: Tier) -> &'static Tokenizer {
    static CACHE: [OnceLock<Tokenizer>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = match tier {
        Tier::K50 => 0,
        Tier::K100 => 1,
        Tier::K200 => 2,
    };
    CACHE[slot]
        .get_or_init(|| Tokenizer::from_tier(tier, Some(&vocab_dir())).expect("bundled vocabulary"))
}

/// Reference ids from the published tokenizer, one line per input line.
pub fn reference_ids(tier: Tier) -> Vec<Vec<u32>> {
    let path = fixture(&format!("parity_500.{}.ids", tier.label()));
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect()
}

pub fn parity_lines() -> Vec<String> {
    std::fs::read_to_string(fixture("parity_500.txt"))
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect()
}

pub const SAMPLE_LANGUAGES: [&str; 7] = ["tur", "fin", "ind", "swh", "eus", "zul", "est"];

pub fn sample_corpus(lang: &str) -> PathBuf {
    data_dir().join("corpus").join(format!("{lang}.txt"))
}
