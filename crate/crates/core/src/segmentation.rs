use crate::error::Result;
use crate::vocabulary::{TokenId, Vocabulary};

/// Ordered token sequence covering one chunk.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Segmentation {
    ids: Vec<TokenId>,
}

impl Segmentation {
    pub fn new(ids: Vec<TokenId>) -> Self {
        Segmentation { ids }
    }

    /// Token count `K`.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[TokenId] {
        &self.ids
    }

    pub fn into_ids(self) -> Vec<TokenId> {
        self.ids
    }

    /// Byte string of every token, in order.
    pub fn pieces<'v>(&self, vocab: &'v Vocabulary) -> Result<Vec<&'v [u8]>> {
        self.ids
            .iter()
            .map(|&id| {
                vocab
                    .token_bytes(id)
                    .ok_or(crate::Error::UnknownToken(id.0))
            })
            .collect()
    }
}

impl From<Segmentation> for Vec<TokenId> {
    fn from(s: Segmentation) -> Self {
        s.ids
    }
}
