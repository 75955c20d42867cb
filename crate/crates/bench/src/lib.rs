//! Shared inputs for the benchmarks.

use std::path::PathBuf;

use optseg_core::{Tier, Tokenizer};

pub const LANGUAGES: [&str; 7] = ["tur", "fin", "ind", "swh", "eus", "zul", "est"];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn tokenizer(tier: Tier) -> Tokenizer {
    Tokenizer::from_tier(tier, Some(&data_dir().join("vocab"))).expect("bundled vocabulary")
}

pub fn corpus_path(lang: &str) -> PathBuf {
    data_dir().join("corpus").join(format!("{lang}.txt"))
}

/// All sample languages concatenated.
pub fn sample_text() -> Vec<u8> {
    LANGUAGES
        .iter()
        .flat_map(|l| std::fs::read(corpus_path(l)).expect("sample corpus"))
        .collect()
}
