//! Dumps reference token ids for a plain-lines file, one output line per
//! input line, using the upstream tiktoken port. Run once when fixtures
//! are (re)created:
//!
//!     cargo run --release -- ../../data/fixtures/parity_500.txt ../../data/fixtures

use std::fs;
use std::path::Path;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let input = fs::read_to_string(&args[1]).expect("read input");
    let out_dir = Path::new(&args[2]);
    let stem = Path::new(&args[1]).file_stem().unwrap().to_string_lossy().to_string();
    let tiers = [
        ("50k", tiktoken_rs::r50k_base().unwrap()),
        ("100k", tiktoken_rs::cl100k_base().unwrap()),
        ("200k", tiktoken_rs::o200k_base().unwrap()),
    ];
    for (tier, bpe) in tiers {
        let mut out = String::new();
        for line in input.lines() {
            let ids = bpe.encode_ordinary(line);
            let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
        fs::write(out_dir.join(format!("{stem}.{tier}.ids")), out).unwrap();
    }
}
