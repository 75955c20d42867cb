//! Regex pre-tokenization.
//!
//! Both segmenters run on the same chunks, so the chunk boundaries come
//! from the tier's published split pattern and nothing else. The patterns
//! use possessive quantifiers and lookahead, which is why this module uses
//! a backtracking engine.

use std::collections::BTreeSet;

use fancy_regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::tier::Tier;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChunkKind {
    /// Ordinary text, segmented by the BPE segmenters.
    Text,
    /// A special-token literal; it maps straight to its id.
    Special,
}

/// A chunk of the source document.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreToken<'a> {
    pub bytes: &'a [u8],
    /// Byte offset of the chunk in the source document.
    pub offset: usize,
    pub kind: ChunkKind,
}

/// What to do with input that is not valid UTF-8.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvalidUtf8 {
    #[default]
    Reject,
    /// Split the valid stretches normally and pass each run of invalid
    /// bytes through as its own chunk.
    RawBytes,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PretokenizerConfig {
    pub pattern: String,
    pub special_tokens: BTreeSet<String>,
    pub invalid_utf8: InvalidUtf8,
}

impl PretokenizerConfig {
    pub fn new(pattern: impl Into<String>) -> Self {
        PretokenizerConfig {
            pattern: pattern.into(),
            special_tokens: BTreeSet::new(),
            invalid_utf8: InvalidUtf8::Reject,
        }
    }

    /// The tier's published pattern, with special tokens disabled.
    pub fn for_tier(tier: Tier) -> Self {
        Self::new(tier.pattern())
    }

    pub fn with_special_tokens<I, S>(mut self, specials: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.special_tokens
            .extend(specials.into_iter().map(Into::into));
        self
    }

    pub fn with_invalid_utf8(mut self, policy: InvalidUtf8) -> Self {
        self.invalid_utf8 = policy;
        self
    }

    /// First 16 hex digits of the SHA-256 of the pattern.
    pub fn pattern_hash(&self) -> String {
        let digest = Sha256::digest(self.pattern.as_bytes());
        hex::encode(&digest[..8])
    }
}

/// A compiled [`PretokenizerConfig`].
#[derive(Debug)]
pub struct Pretokenizer {
    config: PretokenizerConfig,
    pattern: Regex,
    specials: Option<Regex>,
}

impl Pretokenizer {
    pub fn new(config: PretokenizerConfig) -> Result<Self> {
        let pattern = Regex::new(&config.pattern).map_err(|e| Error::Regex(e.to_string()))?;
        let specials = if config.special_tokens.is_empty() {
            None
        } else {
            // Longest literal first so that overlapping specials prefer the longer one.
            let mut literals: Vec<&String> = config.special_tokens.iter().collect();
            literals.sort_by_key(|s| std::cmp::Reverse(s.len()));
            let alternation = literals
                .iter()
                .map(|s| fancy_regex::escape(s))
                .collect::<Vec<_>>()
                .join("|");
            Some(Regex::new(&alternation).map_err(|e| Error::Regex(e.to_string()))?)
        };
        Ok(Pretokenizer {
            config,
            pattern,
            specials,
        })
    }

    pub fn for_tier(tier: Tier) -> Result<Self> {
        Self::new(PretokenizerConfig::for_tier(tier))
    }

    pub fn config(&self) -> &PretokenizerConfig {
        &self.config
    }

    /// Splits `doc` into chunks whose concatenation is exactly `doc`.
    pub fn pretokenize<'a>(&self, doc: &'a [u8]) -> Result<Vec<PreToken<'a>>> {
        let mut out = Vec::new();
        match std::str::from_utf8(doc) {
            Ok(text) => self.split_text(text, 0, &mut out)?,
            Err(e) => match self.config.invalid_utf8 {
                InvalidUtf8::Reject => {
                    return Err(Error::InvalidUtf8 {
                        offset: e.valid_up_to(),
                    })
                }
                InvalidUtf8::RawBytes => {
                    let mut offset = 0;
                    for chunk in doc.utf8_chunks() {
                        self.split_text(chunk.valid(), offset, &mut out)?;
                        offset += chunk.valid().len();
                        let invalid = chunk.invalid();
                        if !invalid.is_empty() {
                            out.push(PreToken {
                                bytes: &doc[offset..offset + invalid.len()],
                                offset,
                                kind: ChunkKind::Text,
                            });
                            offset += invalid.len();
                        }
                    }
                }
            },
        }
        Ok(out)
    }

    fn split_text<'a>(
        &self,
        text: &'a str,
        base: usize,
        out: &mut Vec<PreToken<'a>>,
    ) -> Result<()> {
        let Some(specials) = &self.specials else {
            return self.split_ordinary(text, base, out);
        };
        let mut start = 0;
        for m in specials.find_iter(text) {
            let m = m.map_err(|e| Error::Regex(e.to_string()))?;
            self.split_ordinary(&text[start..m.start()], base + start, out)?;
            out.push(PreToken {
                bytes: m.as_str().as_bytes(),
                offset: base + m.start(),
                kind: ChunkKind::Special,
            });
            start = m.end();
        }
        self.split_ordinary(&text[start..], base + start, out)
    }

    fn split_ordinary<'a>(
        &self,
        text: &'a str,
        base: usize,
        out: &mut Vec<PreToken<'a>>,
    ) -> Result<()> {
        let mut push = |s: &'a str, at: usize| {
            if !s.is_empty() {
                out.push(PreToken {
                    bytes: s.as_bytes(),
                    offset: base + at,
                    kind: ChunkKind::Text,
                });
            }
        };
        let mut last = 0;
        for m in self.pattern.find_iter(text) {
            let m = m.map_err(|e| Error::Regex(e.to_string()))?;
            // Text the pattern skipped over still has to be covered.
            push(&text[last..m.start()], last);
            push(m.as_str(), m.start());
            last = m.end();
        }
        push(&text[last..], last);
        Ok(())
    }
}

/// One-shot helper that compiles `config` and splits `doc`.
pub fn pretokenize<'a>(doc: &'a [u8], config: &PretokenizerConfig) -> Result<Vec<PreToken<'a>>> {
    Pretokenizer::new(config.clone())?.pretokenize(doc)
}
