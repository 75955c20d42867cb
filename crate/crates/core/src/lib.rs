//! Byte-level BPE segmentation with two interchangeable segmenters: the
//! standard lowest-rank-first merge and a dynamic program that finds the
//! fewest tokens the same vocabulary allows. Includes the metrics and the
//! corpus pipeline used to compare the two.
//!
//! ```
//! use optseg_core::{Mode, PretokenizerConfig, Tokenizer, Vocabulary};
//!
//! let vocab = Vocabulary::byte_level(&["bc", "ab", "cd", "abcd"]).unwrap();
//! let tok = Tokenizer::new(vocab, PretokenizerConfig::new(r"\S+|\s+")).unwrap();
//! assert_eq!(tok.encode(b"abcd", Mode::Greedy).unwrap().len(), 3);
//! assert_eq!(tok.encode(b"abcd", Mode::Optimal).unwrap().len(), 1);
//! ```

pub mod config;
pub mod corpus;
pub mod error;
pub mod greedy;
pub mod metrics;
pub mod optimal;
pub mod oracle;
pub mod pretokenizer;
pub mod segmentation;
pub mod tier;
pub mod tokenizer;
pub mod trie;
pub mod vocabulary;

pub use config::TokenizerConfig;
pub use corpus::{
    analyze, emit_context_fit, emit_length_frequency, emit_report, emit_wordlen_tsr, ingest,
    read_reports_json, AnalysisOptions, ContextFitReport, CorpusFormat, CorpusLimits, CorpusSource,
    Document, DocumentStream, EmitOptions, IngestStats, LanguageReport, MetricSet, ReportFormat,
};
pub use error::{Error, Result};
pub use greedy::encode_greedy;
pub use metrics::{
    context_fit_from_counts, context_fit_profile, document_tsr, nonzero_tsr_split, tsr, units,
    whitespace_words, wordlen_frequency_profile, wordlen_tsr_profile, ContextFitConfig,
    ContextFitPoint, LengthFrequency, Tsr, TsrAggregate, TsrRecord, Unit, UnitMode,
    WordLenAccumulator, WordLenBucket,
};
pub use optimal::{backtrack, compute_dp, encode_optimal, encode_optimal_with, DpState, TieBreak};
pub use oracle::{
    brute_force_min_segmentation, run_oracle, Counterexample, OracleCase, OracleConfig,
    OracleSummary, DEFAULT_BRUTE_FORCE_BOUND,
};
pub use pretokenizer::{
    pretokenize, ChunkKind, InvalidUtf8, PreToken, Pretokenizer, PretokenizerConfig,
};
pub use segmentation::Segmentation;
pub use tier::Tier;
pub use tokenizer::{EncodedChunk, Mode, TokenCounts, Tokenizer};
pub use trie::ReversedTrie;
pub use vocabulary::{escape_bytes, load_rank_file, TokenId, Vocabulary};
