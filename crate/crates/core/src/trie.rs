//! Trie over byte-reversed vocabulary tokens.
//!
//! Walking the trie with `B[i], B[i-1], ...` enumerates every vocabulary
//! token that ends at position `i`, shortest first. The root keeps a dense
//! 256-way child table; every other node stores its children as a sorted
//! slice of a shared edge array, so memory stays proportional to the total
//! byte length of the vocabulary.

use crate::vocabulary::{TokenId, Vocabulary};

const NO_TERMINAL: u32 = u32::MAX;
const NO_CHILD: u32 = 0;

/// Opaque handle to a trie node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeRef(u32);

#[derive(Clone, Copy, Debug)]
struct Node {
    first_edge: u32,
    edge_count: u32,
    terminal: u32,
}

#[derive(Clone, Debug)]
pub struct ReversedTrie {
    root_children: Box<[u32; 256]>,
    nodes: Vec<Node>,
    edge_bytes: Vec<u8>,
    edge_targets: Vec<u32>,
}

impl ReversedTrie {
    /// Builds the trie in time linear in the summed token lengths.
    pub fn build(vocab: &Vocabulary) -> Self {
        // Scratch form: per-node child lists, compacted afterwards.
        let mut children: Vec<Vec<(u8, u32)>> = vec![Vec::new()];
        let mut terminal: Vec<u32> = vec![NO_TERMINAL];
        let mut root_children = Box::new([NO_CHILD; 256]);

        for (bytes, id) in vocab.entries() {
            let mut node = 0u32;
            for &b in bytes.iter().rev() {
                let next = if node == 0 {
                    root_children[b as usize]
                } else {
                    children[node as usize]
                        .iter()
                        .find(|(cb, _)| *cb == b)
                        .map_or(NO_CHILD, |(_, t)| *t)
                };
                node = if next == NO_CHILD {
                    let fresh = children.len() as u32;
                    children.push(Vec::new());
                    terminal.push(NO_TERMINAL);
                    if node == 0 {
                        root_children[b as usize] = fresh;
                    } else {
                        children[node as usize].push((b, fresh));
                    }
                    fresh
                } else {
                    next
                };
            }
            terminal[node as usize] = id.0;
        }

        let total_edges: usize = children.iter().map(Vec::len).sum();
        let mut nodes = Vec::with_capacity(children.len());
        let mut edge_bytes = Vec::with_capacity(total_edges);
        let mut edge_targets = Vec::with_capacity(total_edges);
        for (mut kids, term) in children.into_iter().zip(terminal) {
            kids.sort_unstable_by_key(|(b, _)| *b);
            nodes.push(Node {
                first_edge: edge_bytes.len() as u32,
                edge_count: kids.len() as u32,
                terminal: term,
            });
            for (b, t) in kids {
                edge_bytes.push(b);
                edge_targets.push(t);
            }
        }

        ReversedTrie {
            root_children,
            nodes,
            edge_bytes,
            edge_targets,
        }
    }

    pub fn root(&self) -> NodeRef {
        NodeRef(0)
    }

    /// Child of `node` along `byte`, if any.
    #[inline]
    pub fn child(&self, node: NodeRef, byte: u8) -> Option<NodeRef> {
        let target = if node.0 == 0 {
            self.root_children[byte as usize]
        } else {
            let n = self.nodes[node.0 as usize];
            let start = n.first_edge as usize;
            let end = start + n.edge_count as usize;
            match self.edge_bytes[start..end].binary_search(&byte) {
                Ok(pos) => self.edge_targets[start + pos],
                Err(_) => NO_CHILD,
            }
        };
        (target != NO_CHILD).then_some(NodeRef(target))
    }

    /// Token id if `node` ends a reversed vocabulary token.
    #[inline]
    pub fn terminal(&self, node: NodeRef) -> Option<TokenId> {
        let t = self.nodes[node.0 as usize].terminal;
        (t != NO_TERMINAL).then_some(TokenId(t))
    }

    /// Looks `token` up by walking its bytes back to front.
    pub fn lookup(&self, token: &[u8]) -> Option<TokenId> {
        let mut node = self.root();
        for &b in token.iter().rev() {
            node = self.child(node, b)?;
        }
        self.terminal(node)
    }

    /// Node count including the root.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walk(trie: &ReversedTrie, bytes: &[u8]) -> Option<NodeRef> {
        bytes
            .iter()
            .try_fold(trie.root(), |node, &b| trie.child(node, b))
    }

    #[test]
    fn single_token_reversed() {
        let v = Vocabulary::from_tokens(&["ab"]).unwrap();
        let t = ReversedTrie::build(&v);
        let node = walk(&t, b"ba").unwrap();
        assert_eq!(t.terminal(node), Some(TokenId(0)));
        assert!(t.terminal(walk(&t, b"b").unwrap()).is_none());
        assert!(walk(&t, b"a").is_none());
    }

    #[test]
    fn prefix_sharing_tokens() {
        let v = Vocabulary::from_tokens(&["a", "ab"]).unwrap();
        let t = ReversedTrie::build(&v);
        assert_eq!(t.terminal(walk(&t, b"a").unwrap()), Some(TokenId(0)));
        assert_eq!(t.terminal(walk(&t, b"ba").unwrap()), Some(TokenId(1)));
        // "a" has no child: nothing in V ends in "?a" besides "a" itself.
        assert!(walk(&t, b"ab").is_none());
    }

    #[test]
    fn byte_complete_root_is_all_terminal() {
        let v = Vocabulary::byte_level::<&str>(&[]).unwrap();
        let t = ReversedTrie::build(&v);
        for b in 0..=255u8 {
            let node = t.child(t.root(), b).unwrap();
            assert_eq!(t.terminal(node), Some(TokenId(b as u32)));
        }
        assert_eq!(t.node_count(), 257);
    }

    #[test]
    fn sound_and_complete_on_toy_vocabulary() {
        let tokens = ["a", "b", "ab", "ba", "aab", "bb", "abab"];
        let v = Vocabulary::from_tokens(&tokens).unwrap();
        let t = ReversedTrie::build(&v);
        // Every string over {a,b} up to length 4.
        for len in 1..=4u32 {
            for mask in 0..(1u32 << len) {
                let s: Vec<u8> = (0..len)
                    .map(|i| if mask >> i & 1 == 1 { b'b' } else { b'a' })
                    .collect();
                assert_eq!(
                    t.lookup(&s),
                    v.rank(&s),
                    "{:?}",
                    String::from_utf8_lossy(&s)
                );
            }
        }
    }
}
