//! Rank-file vocabularies.
//!
//! A rank file holds one `<base64-token> <decimal-rank>` pair per line. The
//! rank doubles as the token id; lower ranks were merged earlier during
//! training, which is what the greedy segmenter relies on.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, Write};

use base64::engine::general_purpose::STANDARD;
use base64::Engine as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer id of a token. For rank files this is the merge rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenId(pub u32);

impl TokenId {
    pub fn rank(self) -> u32 {
        self.0
    }
}

impl fmt::Display for TokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Bijective map between token byte-strings and their ids, plus the
/// special tokens that live outside the merge vocabulary.
#[derive(Clone, Debug)]
pub struct Vocabulary {
    encoder: HashMap<Vec<u8>, TokenId>,
    decoder: HashMap<TokenId, Vec<u8>>,
    max_token_len: usize,
    special: BTreeMap<String, TokenId>,
}

impl Vocabulary {
    /// Builds a vocabulary from `(token, rank)` pairs.
    ///
    /// Fails on an empty input, an empty token, or a repeated token or rank.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, u32)>,
    {
        let mut encoder = HashMap::new();
        let mut decoder = HashMap::new();
        let mut max_token_len = 0;
        for (bytes, rank) in entries {
            if bytes.is_empty() {
                return Err(Error::Integrity(format!("empty token at rank {rank}")));
            }
            let id = TokenId(rank);
            if decoder.contains_key(&id) {
                return Err(Error::Integrity(format!("duplicate rank {rank}")));
            }
            if encoder.contains_key(&bytes) {
                return Err(Error::Integrity(format!(
                    "duplicate token {} (rank {rank})",
                    escape_bytes(&bytes)
                )));
            }
            max_token_len = max_token_len.max(bytes.len());
            encoder.insert(bytes.clone(), id);
            decoder.insert(id, bytes);
        }
        if encoder.is_empty() {
            return Err(Error::Integrity("vocabulary may not be empty".into()));
        }
        Ok(Vocabulary {
            encoder,
            decoder,
            max_token_len,
            special: BTreeMap::new(),
        })
    }

    /// Vocabulary whose ranks follow the order of `tokens`.
    pub fn from_tokens<T: AsRef<[u8]>>(tokens: &[T]) -> Result<Self> {
        Self::from_entries(
            tokens
                .iter()
                .enumerate()
                .map(|(rank, t)| (t.as_ref().to_vec(), rank as u32)),
        )
    }

    /// All 256 single bytes at ranks `0..256`, followed by `extra` in order.
    pub fn byte_level<T: AsRef<[u8]>>(extra: &[T]) -> Result<Self> {
        let singles = (0..=255u8).map(|b| (vec![b], b as u32));
        let rest = extra
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_ref().to_vec(), 256 + i as u32));
        Self::from_entries(singles.chain(rest))
    }

    /// Registers special tokens. Their ids must not collide with merge ranks.
    pub fn with_special_tokens<I, S>(mut self, specials: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        for (text, id) in specials {
            let text = text.into();
            let id = TokenId(id);
            if text.is_empty() {
                return Err(Error::Integrity("empty special token".into()));
            }
            if self.decoder.contains_key(&id) || self.special.values().any(|v| *v == id) {
                return Err(Error::Integrity(format!(
                    "special token {text:?} reuses id {id}"
                )));
            }
            if self.special.insert(text.clone(), id).is_some() {
                return Err(Error::Integrity(format!(
                    "duplicate special token {text:?}"
                )));
            }
        }
        Ok(self)
    }

    /// Number of merge-vocabulary entries (`m`), excluding special tokens.
    pub fn len(&self) -> usize {
        self.encoder.len()
    }

    pub fn is_empty(&self) -> bool {
        self.encoder.is_empty()
    }

    /// Byte length of the longest token (`M`).
    pub fn max_token_len(&self) -> usize {
        self.max_token_len
    }

    pub fn rank(&self, token: &[u8]) -> Option<TokenId> {
        self.encoder.get(token).copied()
    }

    pub fn contains(&self, token: &[u8]) -> bool {
        self.encoder.contains_key(token)
    }

    /// Bytes of a merge token. Special tokens are not included.
    pub fn token_bytes(&self, id: TokenId) -> Option<&[u8]> {
        self.decoder.get(&id).map(Vec::as_slice)
    }

    pub fn special_tokens(&self) -> &BTreeMap<String, TokenId> {
        &self.special
    }

    pub fn special_id(&self, text: &str) -> Option<TokenId> {
        self.special.get(text).copied()
    }

    /// True when every single byte is a token, so any byte string can be
    /// segmented.
    pub fn is_byte_complete(&self) -> bool {
        (0..=255u8).all(|b| self.encoder.contains_key(&[b][..]))
    }

    /// Entries in ascending rank order.
    pub fn entries(&self) -> Vec<(&[u8], TokenId)> {
        let mut out: Vec<_> = self
            .decoder
            .iter()
            .map(|(id, bytes)| (bytes.as_slice(), *id))
            .collect();
        out.sort_unstable_by_key(|(_, id)| *id);
        out
    }

    /// Concatenates the bytes of `ids`. Special-token ids decode to their text.
    pub fn decode(&self, ids: &[TokenId]) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(ids.len() * 4);
        for &id in ids {
            match self.decoder.get(&id) {
                Some(bytes) => out.extend_from_slice(bytes),
                None => {
                    let special = self
                        .special
                        .iter()
                        .find(|(_, v)| **v == id)
                        .ok_or(Error::UnknownToken(id.0))?;
                    out.extend_from_slice(special.0.as_bytes());
                }
            }
        }
        Ok(out)
    }

    /// Writes the merge vocabulary back out in rank-file format.
    pub fn write_rank_file<W: Write>(&self, mut w: W) -> Result<()> {
        for (bytes, id) in self.entries() {
            writeln!(w, "{} {}", STANDARD.encode(bytes), id.0)?;
        }
        Ok(())
    }
}

/// Parses a rank file. Blank lines are ignored; LF and CRLF are accepted.
pub fn load_rank_file<R: BufRead>(reader: R) -> Result<Vocabulary> {
    let mut entries = Vec::new();
    for (idx, line) in reader.split(b'\n').enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.strip_suffix(b"\r").unwrap_or(&line);
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        let line = std::str::from_utf8(line).map_err(|_| Error::Parse {
            line: line_no,
            message: "line is not ASCII".into(),
        })?;
        let mut parts = line.split_ascii_whitespace();
        let (Some(token), Some(rank), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: "expected `<base64-token> <rank>`".into(),
            });
        };
        let bytes = STANDARD.decode(token).map_err(|e| Error::Parse {
            line: line_no,
            message: format!("malformed base64 {token:?}: {e}"),
        })?;
        let rank: u32 = rank.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("malformed rank {rank:?}"),
        })?;
        entries.push((bytes, rank));
    }
    Vocabulary::from_entries(entries)
}

/// Renders bytes as UTF-8 where valid and `\xNN` escapes elsewhere.
pub fn escape_bytes(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len());
    for chunk in bytes.utf8_chunks() {
        out.push_str(chunk.valid());
        for b in chunk.invalid() {
            out.push_str(&format!("\\x{b:02x}"));
        }
    }
    out
}
