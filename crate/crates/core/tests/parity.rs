mod common;

use optseg_core::{Mode, Tier, TokenId};

fn check(tier: Tier) {
    let tok = common::tokenizer(tier);
    let lines = common::parity_lines();
    let reference = common::reference_ids(tier);
    assert_eq!(lines.len(), reference.len());
    let mut mismatches = Vec::new();
    for (i, (line, want)) in lines.iter().zip(&reference).enumerate() {
        let got: Vec<u32> = tok
            .encode(line.as_bytes(), Mode::Greedy)
            .unwrap()
            .into_iter()
            .map(|TokenId(id)| id)
            .collect();
        if &got != want {
            mismatches.push(i + 1);
        }
    }
    assert!(
        mismatches.is_empty(),
        "{tier}: lines differ: {mismatches:?}"
    );
}

#[test]
fn greedy_matches_reference_50k() {
    check(Tier::K50);
}

#[test]
fn greedy_matches_reference_100k() {
    check(Tier::K100);
}

#[test]
fn greedy_matches_reference_200k() {
    check(Tier::K200);
}
