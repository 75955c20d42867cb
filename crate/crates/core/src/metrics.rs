//! Token Saving Ratio and the intrinsic statistics built on it.
//!
//! `TSR = (|S_B(d)| - |S_A(d)|) / |S_B(d)|` with greedy segmentation as the
//! baseline `B` and optimal segmentation as `A`. Word lengths are counted
//! in Unicode scalar values; segmentation itself is byte-level.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pretokenizer::ChunkKind;
use crate::tokenizer::{Mode, TokenCounts, Tokenizer};

/// Exact token saving ratio.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tsr(Ratio<i64>);

impl Tsr {
    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    pub fn is_positive(self) -> bool {
        *self.0.numer() > 0
    }
}

impl fmt::Display for Tsr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.to_f64())
    }
}

impl Serialize for Tsr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

/// `(base - alt) / base`. Undefined when `base` is zero.
pub fn tsr(base: u64, alt: u64) -> Result<Tsr> {
    if base == 0 {
        return Err(Error::UndefinedMetric(
            "TSR needs a non-zero baseline token count",
        ));
    }
    Ok(Tsr(Ratio::new(base as i64 - alt as i64, base as i64)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TsrRecord {
    pub doc_id: u64,
    pub tokens_greedy: u64,
    pub tokens_optimal: u64,
    pub tsr: Tsr,
}

impl TsrRecord {
    pub fn from_counts(doc_id: u64, counts: TokenCounts) -> Result<Self> {
        Ok(TsrRecord {
            doc_id,
            tokens_greedy: counts.greedy,
            tokens_optimal: counts.optimal,
            tsr: tsr(counts.greedy, counts.optimal)?,
        })
    }
}

/// Greedy and optimal token totals of `doc`, summed over its pre-tokens.
pub fn document_tsr(tok: &Tokenizer, doc_id: u64, doc: &[u8]) -> Result<TsrRecord> {
    TsrRecord::from_counts(doc_id, tok.count_both(doc)?)
}

/// Records with TSR > 0, and their share of all records in percent
/// (0 for an empty input).
pub fn nonzero_tsr_split(records: &[TsrRecord]) -> (Vec<TsrRecord>, f64) {
    let subset: Vec<TsrRecord> = records
        .iter()
        .filter(|r| r.tsr.is_positive())
        .cloned()
        .collect();
    let pct = if records.is_empty() {
        0.0
    } else {
        100.0 * subset.len() as f64 / records.len() as f64
    };
    (subset, pct)
}

/// Running corpus totals, reduced in document order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TsrAggregate {
    pub docs: u64,
    pub greedy_total: u64,
    pub optimal_total: u64,
    pub nonzero_docs: u64,
    tsr_sum: f64,
}

impl TsrAggregate {
    pub fn add(&mut self, record: &TsrRecord) {
        self.docs += 1;
        self.greedy_total += record.tokens_greedy;
        self.optimal_total += record.tokens_optimal;
        self.tsr_sum += record.tsr.to_f64();
        if record.tsr.is_positive() {
            self.nonzero_docs += 1;
        }
    }

    /// Total tokens saved over total greedy tokens.
    pub fn micro(&self) -> Option<Tsr> {
        tsr(self.greedy_total, self.optimal_total).ok()
    }

    /// Mean of per-document TSR.
    pub fn macro_mean(&self) -> Option<f64> {
        (self.docs > 0).then(|| self.tsr_sum / self.docs as f64)
    }

    pub fn nonzero_percentage(&self) -> Option<f64> {
        (self.docs > 0).then(|| 100.0 * self.nonzero_docs as f64 / self.docs as f64)
    }
}

/// Unit over which word-length statistics are taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitMode {
    /// Each text pre-token; length excludes surrounding whitespace.
    Pretoken,
    /// Each whitespace-separated word with leading and trailing
    /// non-alphanumeric characters stripped.
    #[default]
    WhitespaceWord,
}

/// A measured unit: its length in characters and its token counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unit {
    pub chars: usize,
    pub counts: TokenCounts,
}

impl Unit {
    pub fn tsr(&self) -> Result<Tsr> {
        tsr(self.counts.greedy, self.counts.optimal)
    }
}

/// Whitespace-separated words with surrounding punctuation removed.
pub fn whitespace_words(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|w| !w.is_empty())
}

/// Splits `doc` into measurement units and counts each under both modes.
pub fn units(tok: &Tokenizer, doc: &[u8], mode: UnitMode) -> Result<Vec<Unit>> {
    let mut out = Vec::new();
    match mode {
        UnitMode::Pretoken => {
            for chunk in tok.pretokenizer().pretokenize(doc)? {
                if chunk.kind != ChunkKind::Text {
                    continue;
                }
                let text = String::from_utf8_lossy(chunk.bytes);
                let chars = text.trim().chars().count();
                if chars == 0 {
                    continue;
                }
                let (greedy, optimal) = tok.count_chunk(&chunk)?;
                out.push(Unit {
                    chars,
                    counts: TokenCounts { greedy, optimal },
                });
            }
        }
        UnitMode::WhitespaceWord => {
            let text = String::from_utf8_lossy(doc);
            for word in whitespace_words(&text) {
                out.push(Unit {
                    chars: word.chars().count(),
                    counts: tok.count_both(word.as_bytes())?,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordLenBucket {
    pub length: usize,
    /// Arithmetic mean of per-unit TSR; `None` when the bucket is empty.
    pub mean_tsr: Option<f64>,
    pub word_count: u64,
}

/// Streaming accumulator behind [`wordlen_tsr_profile`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WordLenAccumulator {
    buckets: BTreeMap<usize, (f64, u64)>,
}

impl WordLenAccumulator {
    pub fn add(&mut self, unit: &Unit) -> Result<()> {
        let t = unit.tsr()?.to_f64();
        let entry = self.buckets.entry(unit.chars).or_default();
        entry.0 += t;
        entry.1 += 1;
        Ok(())
    }

    pub fn buckets(&self) -> Vec<WordLenBucket> {
        self.buckets
            .iter()
            .map(|(&length, &(sum, count))| WordLenBucket {
                length,
                mean_tsr: (count > 0).then(|| sum / count as f64),
                word_count: count,
            })
            .collect()
    }
}

/// Mean TSR per unit length over `corpus`, ascending by length.
pub fn wordlen_tsr_profile<I, D>(
    tok: &Tokenizer,
    corpus: I,
    mode: UnitMode,
) -> Result<Vec<WordLenBucket>>
where
    I: IntoIterator<Item = D>,
    D: AsRef<[u8]>,
{
    let mut acc = WordLenAccumulator::default();
    for doc in corpus {
        for unit in units(tok, doc.as_ref(), mode)? {
            acc.add(&unit)?;
        }
    }
    Ok(acc.buckets())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthFrequency {
    pub length: usize,
    pub frequency: u64,
}

/// Histogram of whitespace-word lengths, ascending by length.
pub fn wordlen_frequency_profile<I, D>(corpus: I) -> Vec<LengthFrequency>
where
    I: IntoIterator<Item = D>,
    D: AsRef<[u8]>,
{
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    for doc in corpus {
        let text = String::from_utf8_lossy(doc.as_ref());
        for word in whitespace_words(&text) {
            *hist.entry(word.chars().count()).or_default() += 1;
        }
    }
    hist.into_iter()
        .map(|(length, frequency)| LengthFrequency { length, frequency })
        .collect()
}

/// Sampling parameters for the context-fit curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextFitConfig {
    pub context_window: u64,
    pub ks: Vec<usize>,
    pub samples_per_k: usize,
    pub seed: u64,
}

impl Default for ContextFitConfig {
    fn default() -> Self {
        ContextFitConfig {
            context_window: 1024,
            ks: (1..=32).collect(),
            samples_per_k: 1000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContextFitPoint {
    pub k: usize,
    pub fit_percentage: f64,
}

/// Share of random `k`-example concatenations whose total token count fits
/// in the context window, for each `k`.
///
/// Every draw picks `k` distinct examples uniformly (with replacement when
/// `k` exceeds the pool). The generator for each `k` is seeded from
/// `(seed, k)` only, so both modes see the same draws when called with the
/// same config.
pub fn context_fit_from_counts(
    counts: &[u64],
    cfg: &ContextFitConfig,
) -> Result<Vec<ContextFitPoint>> {
    if cfg.context_window == 0 {
        return Err(Error::Config("context window must be at least 1".into()));
    }
    if counts.is_empty() {
        return Ok(cfg
            .ks
            .iter()
            .map(|&k| ContextFitPoint {
                k,
                fit_percentage: 0.0,
            })
            .collect());
    }
    let mut out = Vec::with_capacity(cfg.ks.len());
    for &k in &cfg.ks {
        let mut rng =
            ChaCha8Rng::seed_from_u64(cfg.seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut fits = 0usize;
        for _ in 0..cfg.samples_per_k {
            let total: u64 = if k <= counts.len() {
                index::sample(&mut rng, counts.len(), k)
                    .iter()
                    .map(|i| counts[i])
                    .sum()
            } else {
                (0..k)
                    .map(|_| counts[rng.random_range(0..counts.len())])
                    .sum()
            };
            if total <= cfg.context_window {
                fits += 1;
            }
        }
        let pct = if cfg.samples_per_k == 0 {
            0.0
        } else {
            100.0 * fits as f64 / cfg.samples_per_k as f64
        };
        out.push(ContextFitPoint {
            k,
            fit_percentage: pct,
        });
    }
    Ok(out)
}

/// Context-fit curve of `examples` under one segmentation mode.
pub fn context_fit_profile<D: AsRef<[u8]>>(
    tok: &Tokenizer,
    examples: &[D],
    mode: Mode,
    cfg: &ContextFitConfig,
) -> Result<Vec<ContextFitPoint>> {
    let counts = examples
        .iter()
        .map(|e| {
            let c = tok.count_both(e.as_ref())?;
            Ok(match mode {
                Mode::Greedy => c.greedy,
                Mode::Optimal => c.optimal,
            })
        })
        .collect::<Result<Vec<u64>>>()?;
    context_fit_from_counts(&counts, cfg)
}
