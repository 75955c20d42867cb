//! Minimal-token segmentation by dynamic programming over the reversed trie.
//!
//! `dp[i]` is the fewest tokens that cover the prefix ending at byte `i`,
//! with `dp[-1] = 0`. For each end position the trie is walked over
//! `B[i], B[i-1], ...`; every terminal node reached at `j` offers the
//! candidate `dp[j-1] + 1`. The walk stops as soon as the trie has no child,
//! so each position costs at most `M` steps for a longest token of `M` bytes.
//!
//! Candidates are visited shortest suffix first and only a strict
//! improvement replaces the current best, so among equally short
//! segmentations the last token is always the shortest one that works.

use crate::error::{Error, Result};
use crate::segmentation::Segmentation;
use crate::trie::ReversedTrie;
use crate::vocabulary::Vocabulary;

const UNREACHABLE: u32 = u32::MAX;

/// How equal-cost candidates for one end position are resolved.
#[allow(clippy::manual_non_exhaustive)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Keep the first optimum found, i.e. the shortest final token.
    #[default]
    ShortestSuffix,
    /// Let later (longer) candidates overwrite equal ones. Only used to
    /// check that the oracle notices a broken tie-break.
    #[doc(hidden)]
    LongestSuffix,
}

/// DP table for one chunk.
///
/// Slot `p` of each array describes byte position `p - 1`, so slot 0 is the
/// empty prefix at position −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpState {
    min_tokens: Vec<u32>,
    parent: Vec<usize>,
}

impl DpState {
    /// Byte length `n` of the chunk.
    pub fn len(&self) -> usize {
        self.min_tokens.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `dp[pos]` for `pos` in `-1..n`; `None` if the prefix is unsegmentable.
    pub fn min_tokens(&self, pos: isize) -> Option<u32> {
        let v = self.min_tokens[(pos + 1) as usize];
        (v != UNREACHABLE).then_some(v)
    }

    /// `par[pos]`: end position of the token before the one ending at `pos`.
    pub fn parent(&self, pos: isize) -> isize {
        self.parent[(pos + 1) as usize] as isize - 1
    }

    /// Builds a state from explicit `par` values (positions, −1 based), e.g.
    /// to backtrack a hand-written chain. `dp` is filled with chain lengths.
    pub fn from_parents(parents: &[isize]) -> Result<Self> {
        let n = parents.len();
        let mut parent = vec![0usize; n + 1];
        let mut min_tokens = vec![UNREACHABLE; n + 1];
        min_tokens[0] = 0;
        for (pos, &par) in parents.iter().enumerate() {
            if par < -1 || par >= pos as isize {
                return Err(Error::Internal(format!(
                    "parent {par} of position {pos} out of range"
                )));
            }
            parent[pos + 1] = (par + 1) as usize;
            let prev = min_tokens[(par + 1) as usize];
            min_tokens[pos + 1] = prev.saturating_add(1);
        }
        Ok(DpState { min_tokens, parent })
    }
}

/// Fills the DP table for `chunk`.
pub fn compute_dp(trie: &ReversedTrie, chunk: &[u8], tie_break: TieBreak) -> DpState {
    let n = chunk.len();
    let mut min_tokens = vec![UNREACHABLE; n + 1];
    let mut parent = vec![0usize; n + 1];
    min_tokens[0] = 0;

    for end in 0..n {
        let slot = end + 1;
        let mut best = UNREACHABLE;
        let mut best_parent = 0;
        let mut node = trie.root();
        for start in (0..=end).rev() {
            let Some(next) = trie.child(node, chunk[start]) else {
                break;
            };
            node = next;
            if trie.terminal(node).is_none() {
                continue;
            }
            let before = min_tokens[start];
            if before == UNREACHABLE {
                continue;
            }
            let candidate = before + 1;
            let better = match tie_break {
                TieBreak::ShortestSuffix => candidate < best,
                TieBreak::LongestSuffix => candidate <= best,
            };
            if better {
                best = candidate;
                best_parent = start;
            }
        }
        min_tokens[slot] = best;
        parent[slot] = best_parent;
    }

    DpState { min_tokens, parent }
}

/// Recovers the token sequence from a filled table by following parents
/// back from the last position.
pub fn backtrack(state: &DpState, chunk: &[u8], vocab: &Vocabulary) -> Result<Segmentation> {
    let n = chunk.len();
    if state.len() != n {
        return Err(Error::Internal(format!(
            "dp table covers {} bytes, chunk has {n}",
            state.len()
        )));
    }
    if n == 0 {
        return Ok(Segmentation::default());
    }
    if state.min_tokens[n] == UNREACHABLE {
        return Err(Error::Unsegmentable {
            offset: first_uncovered(state),
        });
    }

    let mut ids = Vec::with_capacity(state.min_tokens[n] as usize);
    let mut slot = n;
    while slot != 0 {
        let prev = state.parent[slot];
        if prev >= slot || ids.len() > n {
            return Err(Error::Internal(format!(
                "broken parent chain at position {}",
                slot as isize - 1
            )));
        }
        let piece = &chunk[prev..slot];
        let id = vocab.rank(piece).ok_or_else(|| {
            Error::Internal(format!(
                "parent chain yields non-token bytes at {prev}..{slot}"
            ))
        })?;
        ids.push(id);
        slot = prev;
    }
    ids.reverse();
    Ok(Segmentation::new(ids))
}

/// Offset just past the longest segmentable prefix.
fn first_uncovered(state: &DpState) -> usize {
    (0..state.min_tokens.len())
        .rev()
        .find(|&slot| state.min_tokens[slot] != UNREACHABLE)
        .unwrap_or(0)
}

/// Segments `chunk` into the fewest possible vocabulary tokens.
pub fn encode_optimal(
    vocab: &Vocabulary,
    trie: &ReversedTrie,
    chunk: &[u8],
) -> Result<Segmentation> {
    encode_optimal_with(vocab, trie, chunk, TieBreak::ShortestSuffix)
}

pub fn encode_optimal_with(
    vocab: &Vocabulary,
    trie: &ReversedTrie,
    chunk: &[u8],
    tie_break: TieBreak,
) -> Result<Segmentation> {
    let state = compute_dp(trie, chunk, tie_break);
    backtrack(&state, chunk, vocab)
}
