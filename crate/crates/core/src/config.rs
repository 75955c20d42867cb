//! `key = value` tokenizer configuration files.
//!
//! ```text
//! # comments start with '#'
//! tier = 100k
//! pattern = \s+|\S+
//! special_token = <|endoftext|>
//! invalid_utf8 = bytes
//! ```
//!
//! Values run verbatim to the end of the line (only surrounding whitespace
//! is trimmed), so patterns need no quoting. `special_token` may repeat.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::pretokenizer::{InvalidUtf8, PretokenizerConfig};
use crate::tier::Tier;
use crate::tokenizer::Tokenizer;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenizerConfig {
    pub tier: Option<Tier>,
    /// Overrides the tier's split pattern.
    pub pattern: Option<String>,
    pub special_tokens: BTreeSet<String>,
    pub invalid_utf8: InvalidUtf8,
    pub vocab_dir: Option<PathBuf>,
}

impl TokenizerConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = TokenizerConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let value = value.trim();
            match key.trim() {
                "tier" => cfg.tier = Some(value.parse().map_err(|e: Error| err(e.to_string()))?),
                "pattern" => cfg.pattern = Some(value.to_string()),
                "special_token" => {
                    cfg.special_tokens.insert(value.to_string());
                }
                "invalid_utf8" => {
                    cfg.invalid_utf8 = match value {
                        "reject" => InvalidUtf8::Reject,
                        "bytes" => InvalidUtf8::RawBytes,
                        other => {
                            return Err(err(format!(
                                "invalid_utf8 must be reject or bytes, got {other:?}"
                            )))
                        }
                    }
                }
                "vocab_dir" => cfg.vocab_dir = Some(PathBuf::from(value)),
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::path(path, e))?;
        Self::parse(&text)
    }

    /// Pre-tokenizer settings for `tier`, with this file's overrides applied.
    pub fn pretokenizer_config(&self, tier: Tier) -> PretokenizerConfig {
        let pattern = self
            .pattern
            .clone()
            .unwrap_or_else(|| tier.pattern().to_string());
        PretokenizerConfig::new(pattern)
            .with_special_tokens(self.special_tokens.iter().cloned())
            .with_invalid_utf8(self.invalid_utf8)
    }

    /// Builds a tokenizer. `tier` and `vocab_dir` arguments win over the file.
    pub fn build(&self, tier: Option<Tier>, vocab_dir: Option<&Path>) -> Result<Tokenizer> {
        let tier = tier.or(self.tier).unwrap_or(Tier::K100);
        let dir = vocab_dir.or(self.vocab_dir.as_deref());
        Tokenizer::from_tier_with(tier, dir, self.pretokenizer_config(tier))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = TokenizerConfig::parse(
            "# demo\ntier = 50k\npattern = \\s+|\\S+ \nspecial_token = <|endoftext|>\n\ninvalid_utf8 = bytes\nvocab_dir = /tmp/v\n",
        )
        .unwrap();
        assert_eq!(cfg.tier, Some(Tier::K50));
        assert_eq!(cfg.pattern.as_deref(), Some(r"\s+|\S+"));
        assert!(cfg.special_tokens.contains("<|endoftext|>"));
        assert_eq!(cfg.invalid_utf8, InvalidUtf8::RawBytes);
        assert_eq!(cfg.vocab_dir, Some(PathBuf::from("/tmp/v")));
    }

    #[test]
    fn pattern_keeps_equals_and_hashes() {
        let cfg = TokenizerConfig::parse("pattern = a=b#c").unwrap();
        assert_eq!(cfg.pattern.as_deref(), Some("a=b#c"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = TokenizerConfig::parse("tier = 100k\nbogus = 1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(TokenizerConfig::parse("tier = 7k").is_err());
        assert!(TokenizerConfig::parse("invalid_utf8 = maybe").is_err());
        assert!(TokenizerConfig::parse("no equals sign").is_err());
    }

    #[test]
    fn tier_pattern_by_default() {
        let cfg = TokenizerConfig::default();
        assert_eq!(
            cfg.pretokenizer_config(Tier::K200).pattern,
            Tier::K200.pattern()
        );
    }
}
