//! Document-level encoding: pre-tokenize, then segment each chunk.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::encode_greedy;
use crate::optimal::encode_optimal;
use crate::pretokenizer::{ChunkKind, PreToken, Pretokenizer, PretokenizerConfig};
use crate::segmentation::Segmentation;
use crate::tier::Tier;
use crate::trie::ReversedTrie;
use crate::vocabulary::{TokenId, Vocabulary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Greedy,
    Optimal,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Greedy => "greedy",
            Mode::Optimal => "optimal",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Mode::Greedy),
            "optimal" => Ok(Mode::Optimal),
            other => Err(Error::Config(format!(
                "unknown mode {other:?} (expected greedy or optimal)"
            ))),
        }
    }
}

/// One pre-token and its segmentation.
#[derive(Clone, Debug)]
pub struct EncodedChunk<'a> {
    pub chunk: PreToken<'a>,
    pub segmentation: Segmentation,
}

/// Token counts of one document under both modes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TokenCounts {
    pub greedy: u64,
    pub optimal: u64,
}

/// Vocabulary, reversed trie and pre-tokenizer, immutable once built and
/// shareable across threads.
#[derive(Debug)]
pub struct Tokenizer {
    vocab: Vocabulary,
    trie: ReversedTrie,
    pretokenizer: Pretokenizer,
    tier: Option<Tier>,
}

impl Tokenizer {
    pub fn new(vocab: Vocabulary, config: PretokenizerConfig) -> Result<Self> {
        for special in &config.special_tokens {
            if vocab.special_id(special).is_none() {
                return Err(Error::Config(format!(
                    "special token {special:?} has no id in the vocabulary"
                )));
            }
        }
        let trie = ReversedTrie::build(&vocab);
        let pretokenizer = Pretokenizer::new(config)?;
        Ok(Tokenizer {
            vocab,
            trie,
            pretokenizer,
            tier: None,
        })
    }

    /// Loads a tier's vocabulary and uses its published split pattern.
    pub fn from_tier(tier: Tier, vocab_dir: Option<&Path>) -> Result<Self> {
        Self::from_tier_with(tier, vocab_dir, PretokenizerConfig::for_tier(tier))
    }

    pub fn from_tier_with(
        tier: Tier,
        vocab_dir: Option<&Path>,
        config: PretokenizerConfig,
    ) -> Result<Self> {
        let vocab = tier.load(vocab_dir)?;
        let mut tok = Self::new(vocab, config)?;
        tok.tier = Some(tier);
        Ok(tok)
    }

    /// Loads a rank file from an explicit path with a custom pre-tokenizer.
    pub fn from_rank_file(path: &Path, config: PretokenizerConfig) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::path(path, e))?;
        let vocab = crate::vocabulary::load_rank_file(std::io::BufReader::new(file))?;
        Self::new(vocab, config)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn trie(&self) -> &ReversedTrie {
        &self.trie
    }

    pub fn pretokenizer(&self) -> &Pretokenizer {
        &self.pretokenizer
    }

    pub fn tier(&self) -> Option<Tier> {
        self.tier
    }

    /// Segments a single pre-token. Special chunks map straight to their id.
    pub fn encode_chunk(&self, chunk: &PreToken<'_>, mode: Mode) -> Result<Segmentation> {
        match chunk.kind {
            ChunkKind::Special => {
                let text = std::str::from_utf8(chunk.bytes).map_err(|_| Error::InvalidUtf8 {
                    offset: chunk.offset,
                })?;
                let id = self
                    .vocab
                    .special_id(text)
                    .ok_or_else(|| Error::Config(format!("special token {text:?} has no id")))?;
                Ok(Segmentation::new(vec![id]))
            }
            ChunkKind::Text => self
                .segment_bytes(chunk.bytes, mode)
                .map_err(|e| shift_offset(e, chunk.offset)),
        }
    }

    /// Segments raw bytes as one chunk, bypassing pre-tokenization.
    pub fn segment_bytes(&self, bytes: &[u8], mode: Mode) -> Result<Segmentation> {
        match mode {
            Mode::Greedy => encode_greedy(&self.vocab, bytes),
            Mode::Optimal => encode_optimal(&self.vocab, &self.trie, bytes),
        }
    }

    /// Pre-tokenizes `doc` and segments every chunk.
    pub fn encode_chunks<'a>(&self, doc: &'a [u8], mode: Mode) -> Result<Vec<EncodedChunk<'a>>> {
        self.pretokenizer
            .pretokenize(doc)?
            .into_iter()
            .map(|chunk| {
                Ok(EncodedChunk {
                    segmentation: self.encode_chunk(&chunk, mode)?,
                    chunk,
                })
            })
            .collect()
    }

    pub fn encode(&self, doc: &[u8], mode: Mode) -> Result<Vec<TokenId>> {
        let mut ids = Vec::new();
        for chunk in self.pretokenizer.pretokenize(doc)? {
            ids.extend(self.encode_chunk(&chunk, mode)?.into_ids());
        }
        Ok(ids)
    }

    pub fn decode(&self, ids: &[TokenId]) -> Result<Vec<u8>> {
        self.vocab.decode(ids)
    }

    /// Token counts of `doc` under both modes, pre-tokenizing once.
    pub fn count_both(&self, doc: &[u8]) -> Result<TokenCounts> {
        let mut counts = TokenCounts::default();
        for chunk in self.pretokenizer.pretokenize(doc)? {
            let (g, o) = self.count_chunk(&chunk)?;
            counts.greedy += g;
            counts.optimal += o;
        }
        Ok(counts)
    }

    pub(crate) fn count_chunk(&self, chunk: &PreToken<'_>) -> Result<(u64, u64)> {
        if chunk.kind == ChunkKind::Special {
            return Ok((1, 1));
        }
        let g = self.encode_chunk(chunk, Mode::Greedy)?.len() as u64;
        let o = self.encode_chunk(chunk, Mode::Optimal)?.len() as u64;
        Ok((g, o))
    }
}

fn shift_offset(err: Error, base: usize) -> Error {
    match err {
        Error::Unsegmentable { offset } => Error::Unsegmentable {
            offset: offset + base,
        },
        other => other,
    }
}
