//! The three published vocabulary tiers and where to find their rank files.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vocabulary::{load_rank_file, Vocabulary};

/// Environment variable naming a directory that holds `*.tiktoken` rank files.
pub const VOCAB_DIR_ENV: &str = "OPTSEG_VOCAB_DIR";

/// Where the rank files can be downloaded from.
pub const DOWNLOAD_BASE: &str = "https://openaipublic.blob.core.windows.net/encodings";

pub const GPT2_PATTERN: &str =
    r"'(?:[sdmt]|ll|ve|re)| ?\p{L}++| ?\p{N}++| ?[^\s\p{L}\p{N}]++|\s++$|\s+(?!\S)|\s";

pub const CL100K_PATTERN: &str = r"'(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}++|\p{N}{1,3}+| ?[^\s\p{L}\p{N}]++[\r\n]*+|\s++$|\s*[\r\n]|\s+(?!\S)|\s";

pub const O200K_PATTERN: &str = concat!(
    r"[^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]*[\p{Ll}\p{Lm}\p{Lo}\p{M}]+(?i:'s|'t|'re|'ve|'m|'ll|'d)?",
    "|",
    r"[^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]+[\p{Ll}\p{Lm}\p{Lo}\p{M}]*(?i:'s|'t|'re|'ve|'m|'ll|'d)?",
    "|",
    r"\p{N}{1,3}",
    "|",
    r" ?[^\s\p{L}\p{N}]+[\r\n/]*",
    "|",
    r"\s*[\r\n]+",
    "|",
    r"\s+(?!\S)",
    "|",
    r"\s+",
);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tier {
    /// `gpt2` / `r50k_base`
    #[serde(rename = "50k")]
    K50,
    /// `cl100k_base`
    #[serde(rename = "100k")]
    K100,
    /// `o200k_base`
    #[serde(rename = "200k")]
    K200,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::K50, Tier::K100, Tier::K200];

    pub fn label(self) -> &'static str {
        match self {
            Tier::K50 => "50k",
            Tier::K100 => "100k",
            Tier::K200 => "200k",
        }
    }

    pub fn encoding_name(self) -> &'static str {
        match self {
            Tier::K50 => "gpt2",
            Tier::K100 => "cl100k_base",
            Tier::K200 => "o200k_base",
        }
    }

    pub fn rank_file_name(self) -> &'static str {
        match self {
            Tier::K50 => "r50k_base.tiktoken",
            Tier::K100 => "cl100k_base.tiktoken",
            Tier::K200 => "o200k_base.tiktoken",
        }
    }

    pub fn pattern(self) -> &'static str {
        match self {
            Tier::K50 => GPT2_PATTERN,
            Tier::K100 => CL100K_PATTERN,
            Tier::K200 => O200K_PATTERN,
        }
    }

    pub fn special_tokens(self) -> &'static [(&'static str, u32)] {
        match self {
            Tier::K50 => &[("<|endoftext|>", 50256)],
            Tier::K100 => &[
                ("<|endoftext|>", 100257),
                ("<|fim_prefix|>", 100258),
                ("<|fim_middle|>", 100259),
                ("<|fim_suffix|>", 100260),
                ("<|endofprompt|>", 100276),
            ],
            Tier::K200 => &[("<|endoftext|>", 199999), ("<|endofprompt|>", 200018)],
        }
    }

    pub fn download_url(self) -> String {
        format!("{DOWNLOAD_BASE}/{}", self.rank_file_name())
    }

    /// Finds the rank file: explicit directory first, then `$OPTSEG_VOCAB_DIR`.
    /// There is no implicit network fetch.
    pub fn resolve_rank_file(self, explicit_dir: Option<&Path>) -> Result<PathBuf> {
        let env_dir = std::env::var_os(VOCAB_DIR_ENV).map(PathBuf::from);
        self.resolve_in(explicit_dir, env_dir.as_deref())
    }

    fn resolve_in(self, explicit_dir: Option<&Path>, env_dir: Option<&Path>) -> Result<PathBuf> {
        let mut searched = Vec::new();
        for dir in [explicit_dir, env_dir].into_iter().flatten() {
            let candidate = dir.join(self.rank_file_name());
            if candidate.is_file() {
                return Ok(candidate);
            }
            searched.push(candidate.display().to_string());
        }
        let looked = if searched.is_empty() {
            format!("no vocabulary directory given (use --vocab-dir or set {VOCAB_DIR_ENV})")
        } else {
            format!("not found at {}", searched.join(", "))
        };
        Err(Error::VocabularyNotFound {
            tier: self.label().into(),
            hint: format!(
                "{looked}; download {} into that directory",
                self.download_url()
            ),
        })
    }

    /// Loads the tier's merge vocabulary together with its special tokens.
    pub fn load(self, explicit_dir: Option<&Path>) -> Result<Vocabulary> {
        let path = self.resolve_rank_file(explicit_dir)?;
        self.load_from(&path)
    }

    pub fn load_from(self, path: &Path) -> Result<Vocabulary> {
        let file = File::open(path).map_err(|e| Error::path(path, e))?;
        load_rank_file(BufReader::new(file))?
            .with_special_tokens(self.special_tokens().iter().copied())
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "50k" | "gpt2" | "r50k_base" => Ok(Tier::K50),
            "100k" | "cl100k_base" => Ok(Tier::K100),
            "200k" | "o200k_base" => Ok(Tier::K200),
            other => Err(Error::Config(format!(
                "unknown tier {other:?} (expected 50k, 100k or 200k)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_labels_and_aliases() {
        assert_eq!("100k".parse::<Tier>().unwrap(), Tier::K100);
        assert_eq!("gpt2".parse::<Tier>().unwrap(), Tier::K50);
        assert_eq!("O200K_BASE".parse::<Tier>().unwrap(), Tier::K200);
        assert!("300k".parse::<Tier>().is_err());
    }

    #[test]
    fn missing_file_names_download() {
        let dir = tempfile::tempdir().unwrap();
        let err = Tier::K100.resolve_in(Some(dir.path()), None).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("cl100k_base.tiktoken"), "{msg}");
        assert!(msg.contains(DOWNLOAD_BASE), "{msg}");
    }

    #[test]
    fn explicit_dir_wins_over_env() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        std::fs::write(a.path().join("r50k_base.tiktoken"), "YQ== 0\n").unwrap();
        std::fs::write(b.path().join("r50k_base.tiktoken"), "YQ== 0\n").unwrap();
        let got = Tier::K50
            .resolve_in(Some(a.path()), Some(b.path()))
            .unwrap();
        assert!(got.starts_with(a.path()));
        let got = Tier::K50.resolve_in(None, Some(b.path())).unwrap();
        assert!(got.starts_with(b.path()));
    }
}
