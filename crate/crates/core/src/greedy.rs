//! Rank-order pair merging, the segmentation performed by the published
//! byte-level BPE tokenizers.
//!
//! The chunk starts as single bytes. At each step the adjacent pair whose
//! concatenation has the lowest rank is merged (leftmost on ties) until no
//! adjacent pair is itself a token.

use crate::error::{Error, Result};
use crate::segmentation::Segmentation;
use crate::vocabulary::Vocabulary;

const NOT_MERGEABLE: u32 = u32::MAX;

/// Segments `chunk` by iterated lowest-rank merging.
///
/// With a byte-complete vocabulary this never fails. Otherwise a leftover
/// part that is not a token yields [`Error::Unsegmentable`].
pub fn encode_greedy(vocab: &Vocabulary, chunk: &[u8]) -> Result<Segmentation> {
    let bounds = merge_boundaries(vocab, chunk);
    let mut ids = Vec::with_capacity(bounds.len().saturating_sub(1));
    for w in bounds.windows(2) {
        let piece = &chunk[w[0]..w[1]];
        let id = vocab
            .rank(piece)
            .ok_or(Error::Unsegmentable { offset: w[0] })?;
        ids.push(id);
    }
    Ok(Segmentation::new(ids))
}

/// Start offsets of the final parts, followed by `chunk.len()`.
fn merge_boundaries(vocab: &Vocabulary, chunk: &[u8]) -> Vec<usize> {
    if chunk.is_empty() {
        return Vec::new();
    }
    // parts[i] = (start offset of part i, rank of merging part i with part i+1).
    // The final entry is the end sentinel.
    let pair_rank = |parts: &[(usize, u32)], i: usize| -> u32 {
        if i + 2 < parts.len() {
            vocab
                .rank(&chunk[parts[i].0..parts[i + 2].0])
                .map_or(NOT_MERGEABLE, |id| id.0)
        } else {
            NOT_MERGEABLE
        }
    };

    let mut parts: Vec<(usize, u32)> = (0..=chunk.len()).map(|i| (i, NOT_MERGEABLE)).collect();
    for i in 0..parts.len() {
        parts[i].1 = pair_rank(&parts, i);
    }

    loop {
        let mut best = (NOT_MERGEABLE, usize::MAX);
        for (i, &(_, rank)) in parts[..parts.len() - 1].iter().enumerate() {
            if rank < best.0 {
                best = (rank, i);
            }
        }
        if best.0 == NOT_MERGEABLE {
            break;
        }
        let i = best.1;
        parts.remove(i + 1);
        parts[i].1 = pair_rank(&parts, i);
        if i > 0 {
            parts[i - 1].1 = pair_rank(&parts, i - 1);
        }
    }

    parts.into_iter().map(|(start, _)| start).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pieces(v: &Vocabulary, s: &[u8]) -> Vec<String> {
        encode_greedy(v, s)
            .unwrap()
            .pieces(v)
            .unwrap()
            .into_iter()
            .map(|p| String::from_utf8_lossy(p).into_owned())
            .collect()
    }

    #[test]
    fn single_byte() {
        let v = Vocabulary::byte_level::<&str>(&[]).unwrap();
        assert_eq!(pieces(&v, b"a"), ["a"]);
    }

    #[test]
    fn empty_chunk_is_empty() {
        let v = Vocabulary::byte_level::<&str>(&[]).unwrap();
        assert!(encode_greedy(&v, b"").unwrap().is_empty());
    }

    #[test]
    fn merged_pair_rank_is_the_concatenation() {
        //   [a][b][c]  ab=256, bc unranked -> merge ab
        //   [ab][c]    abc=257             -> merge abc
        let v = Vocabulary::byte_level(&["ab", "abc"]).unwrap();
        assert_eq!(pieces(&v, b"abc"), ["abc"]);
    }

    #[test]
    fn merge_order_can_strand_a_token() {
        // "bc" outranks "ab" and "cd"; neither "abc" nor "bcd" is a token,
        // so "abcd" stays out of reach even though it is in the vocabulary.
        let v = Vocabulary::byte_level(&["bc", "ab", "cd", "abcd"]).unwrap();
        assert_eq!(pieces(&v, b"abcd"), ["a", "bc", "d"]);
    }

    #[test]
    fn leftmost_wins_rank_ties() {
        // Both "aa" pairs in "aaa" have the same rank; the left one merges.
        let v = Vocabulary::byte_level(&["aa"]).unwrap();
        assert_eq!(pieces(&v, b"aaa"), ["aa", "a"]);
        assert_eq!(pieces(&v, b"aaaa"), ["aa", "aa"]);
    }

    #[test]
    fn missing_single_byte_is_unsegmentable() {
        let v = Vocabulary::from_tokens(&["a", "b"]).unwrap();
        assert!(matches!(
            encode_greedy(&v, b"abz"),
            Err(Error::Unsegmentable { offset: 2 })
        ));
    }
}
