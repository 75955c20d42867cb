//! Published segmentation examples, frozen with what the bundled 100k
//! vocabulary actually produces.

mod common;

use optseg_core::{tsr, Mode, Tier, Tokenizer};
use serde::Deserialize;

#[derive(Deserialize)]
struct Manifest {
    tier: Tier,
    rows: Vec<Row>,
}

#[derive(Deserialize)]
struct Row {
    table: String,
    input: String,
    paper_greedy: Vec<String>,
    paper_optimal: Option<Vec<String>>,
    paper_tsr_percent: Option<i64>,
    reproducible: bool,
    observed_greedy: Vec<String>,
    observed_optimal: Vec<String>,
}

fn manifest() -> Manifest {
    let text = std::fs::read_to_string(common::fixture("segmentation_examples.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn pieces(tok: &Tokenizer, text: &str, mode: Mode) -> Vec<String> {
    tok.encode_chunks(text.as_bytes(), mode)
        .unwrap()
        .into_iter()
        .flat_map(|e| {
            e.segmentation
                .pieces(tok.vocabulary())
                .unwrap()
                .into_iter()
                .map(|p| String::from_utf8_lossy(p).into_owned())
                .collect::<Vec<_>>()
        })
        .collect()
}

#[test]
fn observed_pieces_are_stable() {
    let m = manifest();
    let tok = common::tokenizer(m.tier);
    for row in &m.rows {
        assert_eq!(
            pieces(tok, &row.input, Mode::Greedy),
            row.observed_greedy,
            "{}",
            row.input
        );
        assert_eq!(
            pieces(tok, &row.input, Mode::Optimal),
            row.observed_optimal,
            "{}",
            row.input
        );
    }
}

#[test]
fn reproducible_flag_matches_observation() {
    for row in manifest().rows {
        let greedy_ok = row.observed_greedy == row.paper_greedy;
        let optimal_ok = row
            .paper_optimal
            .as_ref()
            .map_or(true, |p| *p == row.observed_optimal);
        let tsr_ok = row.paper_tsr_percent.map_or(true, |pct| {
            let t = tsr(
                row.observed_greedy.len() as u64,
                row.observed_optimal.len() as u64,
            )
            .unwrap();
            (t.to_f64() * 100.0).round() as i64 == pct
        });
        assert_eq!(
            row.reproducible,
            greedy_ok && optimal_ok && tsr_ok,
            "{}",
            row.input
        );
    }
}

#[test]
fn greedy_only_rows_reproduce() {
    let m = manifest();
    let tok = common::tokenizer(m.tier);
    for input in [
        "policymakers",
        "yükselme",
        "ateriakokonaisuudesta",
        "prachinakal",
    ] {
        let row = m
            .rows
            .iter()
            .find(|r| r.table == "table1" && r.input == input)
            .unwrap();
        assert!(row.reproducible);
        assert_eq!(pieces(tok, input, Mode::Greedy), row.paper_greedy);
    }
}

#[test]
fn turkish_row_counts() {
    let tok = common::tokenizer(Tier::K100);
    let counts = tok.count_both("yükselme".as_bytes()).unwrap();
    assert_eq!((counts.greedy, counts.optimal), (5, 3));
    assert_eq!(tsr(counts.greedy, counts.optimal).unwrap().to_f64(), 0.4);
}

#[test]
fn optimal_never_exceeds_greedy_on_examples() {
    for row in manifest().rows {
        assert!(row.observed_optimal.len() <= row.observed_greedy.len());
    }
}
