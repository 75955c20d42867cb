//! Exhaustive minimal-segmentation oracle and the randomized suite that
//! compares it against the DP segmenter.
//!
//! The oracle shares nothing with the DP path: it enumerates every subset
//! of the `n - 1` inner boundaries, checks pieces with plain hash lookups,
//! and keeps the best candidate under the ordering
//! `(token count, token lengths read from the end)`. Minimizing the reversed
//! length sequence lexicographically picks the shortest final token, then
//! the shortest token before it, and so on, which is the tie-break the DP
//! applies at every end position.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::optimal::{encode_optimal_with, TieBreak};
use crate::segmentation::Segmentation;
use crate::trie::ReversedTrie;
use crate::vocabulary::{escape_bytes, Vocabulary};

/// Longest chunk the oracle will enumerate by default.
pub const DEFAULT_BRUTE_FORCE_BOUND: usize = 16;

/// Globally minimal segmentation by enumerating all `2^(n-1)` boundary sets.
pub fn brute_force_min_segmentation(
    vocab: &Vocabulary,
    chunk: &[u8],
    bound: usize,
) -> Result<Segmentation> {
    let n = chunk.len();
    if n > bound {
        return Err(Error::ChunkTooLong { len: n, bound });
    }
    if n == 0 {
        return Ok(Segmentation::default());
    }

    // (token count, lengths from the end, spans)
    type Candidate = (usize, Vec<usize>, Vec<(usize, usize)>);
    let mut best: Option<Candidate> = None;
    for mask in 0u64..(1u64 << (n - 1)) {
        // Bit k set = boundary after byte k.
        let mut spans = Vec::with_capacity(mask.count_ones() as usize + 1);
        let mut start = 0;
        for k in 0..n - 1 {
            if mask >> k & 1 == 1 {
                spans.push((start, k + 1));
                start = k + 1;
            }
        }
        spans.push((start, n));
        if !spans.iter().all(|&(s, e)| vocab.contains(&chunk[s..e])) {
            continue;
        }
        let reversed_lengths: Vec<usize> = spans.iter().rev().map(|&(s, e)| e - s).collect();
        let key = (spans.len(), reversed_lengths);
        let better = match &best {
            None => true,
            Some((count, lens, _)) => key < (*count, lens.clone()),
        };
        if better {
            best = Some((key.0, key.1, spans));
        }
    }

    let (_, _, spans) = best.ok_or(Error::Unsegmentable { offset: 0 })?;
    let ids = spans
        .iter()
        .map(|&(s, e)| vocab.rank(&chunk[s..e]).expect("checked above"))
        .collect();
    Ok(Segmentation::new(ids))
}

/// Parameters of the randomized oracle suite.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_alphabet: usize,
    pub max_vocab: usize,
    pub max_chunk: usize,
    /// Tie-break handed to the DP segmenter under test.
    pub tie_break: TieBreak,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 0x5eed,
            cases: 10_000,
            max_alphabet: 4,
            max_vocab: 30,
            max_chunk: 12,
            tie_break: TieBreak::ShortestSuffix,
        }
    }
}

/// A random vocabulary and chunk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCase {
    pub tokens: Vec<Vec<u8>>,
    pub chunk: Vec<u8>,
}

impl OracleCase {
    /// Alphabet of `1..=max_alphabet` letters, every single letter in the
    /// vocabulary plus random multi-letter tokens up to `max_vocab` total,
    /// and a chunk of `1..=max_chunk` letters.
    pub fn generate<R: Rng>(rng: &mut R, cfg: &OracleConfig) -> Self {
        let alphabet_len = rng.random_range(1..=cfg.max_alphabet.clamp(1, 26));
        let alphabet: Vec<u8> = (b'a'..).take(alphabet_len).collect();
        let mut tokens: Vec<Vec<u8>> = alphabet.iter().map(|&c| vec![c]).collect();
        let target = rng.random_range(alphabet_len..=cfg.max_vocab.max(alphabet_len));
        // Bounded retries; small alphabets cannot always fill the target.
        let mut attempts = 0;
        while tokens.len() < target && attempts < 20 * cfg.max_vocab {
            attempts += 1;
            let len = rng.random_range(2..=5);
            let tok: Vec<u8> = (0..len)
                .map(|_| alphabet[rng.random_range(0..alphabet_len)])
                .collect();
            if !tokens.contains(&tok) {
                tokens.push(tok);
            }
        }
        tokens.shuffle(rng);
        let chunk_len = rng.random_range(1..=cfg.max_chunk.max(1));
        let chunk = (0..chunk_len)
            .map(|_| alphabet[rng.random_range(0..alphabet_len)])
            .collect();
        OracleCase { tokens, chunk }
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary::from_tokens(&self.tokens).expect("generated tokens are unique")
    }
}

/// A case where the DP and the oracle disagree.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub index: usize,
    pub case: OracleCase,
    pub optimal: Vec<Vec<u8>>,
    pub brute_force: Vec<Vec<u8>>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |pieces: &[Vec<u8>]| {
            pieces
                .iter()
                .map(|p| escape_bytes(p))
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "case #{}", self.index)?;
        writeln!(f, "  vocabulary: [{}]", show(&self.case.tokens))?;
        writeln!(f, "  chunk: {}", escape_bytes(&self.case.chunk))?;
        writeln!(
            f,
            "  dp: {} ({} tokens)",
            show(&self.optimal),
            self.optimal.len()
        )?;
        write!(
            f,
            "  brute force: {} ({} tokens)",
            show(&self.brute_force),
            self.brute_force.len()
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct OracleSummary {
    pub cases: usize,
    /// Cases where the token counts differ.
    pub count_mismatches: usize,
    /// Cases with equal counts but different token ids.
    pub id_mismatches: usize,
    pub first_counterexample: Option<Counterexample>,
}

impl OracleSummary {
    pub fn passed(&self) -> bool {
        self.count_mismatches == 0 && self.id_mismatches == 0
    }
}

/// Runs `cfg.cases` seeded random cases through both segmenters.
pub fn run_oracle(cfg: &OracleConfig) -> Result<OracleSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut summary = OracleSummary {
        cases: cfg.cases,
        ..Default::default()
    };
    for index in 0..cfg.cases {
        let case = OracleCase::generate(&mut rng, cfg);
        let vocab = case.vocabulary();
        let trie = ReversedTrie::build(&vocab);
        let dp = encode_optimal_with(&vocab, &trie, &case.chunk, cfg.tie_break)?;
        let brute = brute_force_min_segmentation(&vocab, &case.chunk, cfg.max_chunk.max(1))?;
        if dp == brute {
            continue;
        }
        if dp.len() != brute.len() {
            summary.count_mismatches += 1;
        } else {
            summary.id_mismatches += 1;
        }
        if summary.first_counterexample.is_none() {
            let owned = |s: &Segmentation| -> Result<Vec<Vec<u8>>> {
                Ok(s.pieces(&vocab)?.into_iter().map(<[u8]>::to_vec).collect())
            };
            summary.first_counterexample = Some(Counterexample {
                index,
                optimal: owned(&dp)?,
                brute_force: owned(&brute)?,
                case,
            });
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(tokens: &[&str], chunk: &str) -> Vec<String> {
        let v = Vocabulary::from_tokens(tokens).unwrap();
        brute_force_min_segmentation(&v, chunk.as_bytes(), DEFAULT_BRUTE_FORCE_BOUND)
            .unwrap()
            .pieces(&v)
            .unwrap()
            .into_iter()
            .map(|p| String::from_utf8_lossy(p).into_owned())
            .collect()
    }

    #[test]
    fn hand_enumerated_cases() {
        // "aaa" over {a, aa}: boundary sets {}, {1}, {2}, {1,2}; the empty
        // set fails ("aaa" not in V), two give 2 tokens, one gives 3.
        assert_eq!(brute(&["a", "aa"], "aaa"), ["aa", "a"]);
        assert_eq!(brute(&["a"], "aaa"), ["a", "a", "a"]);
        assert_eq!(brute(&["a", "b", "ab"], "ab"), ["ab"]);
        assert_eq!(brute(&["a", "b", "c", "ab", "bc"], "abc"), ["ab", "c"]);
    }

    #[test]
    fn refuses_long_chunks() {
        let v = Vocabulary::from_tokens(&["a"]).unwrap();
        let err = brute_force_min_segmentation(&v, &[b'a'; 17], 16).unwrap_err();
        assert!(err.to_string().contains("16"));
    }

    #[test]
    fn unsegmentable_chunk() {
        let v = Vocabulary::from_tokens(&["a"]).unwrap();
        assert!(matches!(
            brute_force_min_segmentation(&v, b"ab", 16),
            Err(Error::Unsegmentable { .. })
        ));
    }

    #[test]
    fn generated_cases_respect_bounds() {
        let cfg = OracleConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let case = OracleCase::generate(&mut rng, &cfg);
            assert!(case.tokens.len() <= cfg.max_vocab);
            assert!((1..=cfg.max_chunk).contains(&case.chunk.len()));
            let letters: std::collections::BTreeSet<u8> =
                case.tokens.iter().flatten().copied().collect();
            assert!(letters.len() <= cfg.max_alphabet);
            for l in &letters {
                assert!(case.tokens.contains(&vec![*l]));
            }
        }
    }

    #[test]
    fn short_suite_passes_and_fault_is_caught() {
        let cfg = OracleConfig {
            cases: 1_000,
            ..Default::default()
        };
        let ok = run_oracle(&cfg).unwrap();
        assert!(ok.passed(), "{}", ok.first_counterexample.unwrap());

        let faulty = run_oracle(&OracleConfig {
            tie_break: TieBreak::LongestSuffix,
            ..cfg
        })
        .unwrap();
        assert!(!faulty.passed());
        assert_eq!(faulty.count_mismatches, 0);
        let cx = faulty.first_counterexample.unwrap();
        assert_eq!(cx.optimal.len(), cx.brute_force.len());
        assert!(cx.to_string().contains("vocabulary"));
    }

    #[test]
    fn zero_cases_is_vacuous() {
        let s = run_oracle(&OracleConfig {
            cases: 0,
            ..Default::default()
        })
        .unwrap();
        assert!(s.passed());
        assert_eq!(s.cases, 0);
    }
}
