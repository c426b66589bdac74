//! Drops words that signing omits. Order is never changed.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::morphology::{PosTag, TaggedToken};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DropPolicy {
    #[serde(default, rename = "tags")]
    pub drop_tags: BTreeSet<PosTag>,
    #[serde(default, rename = "words")]
    pub drop_words: BTreeSet<String>,
}

impl DropPolicy {
    /// Function words: determiners, copulas and particles.
    pub fn function_words() -> Self {
        DropPolicy {
            drop_tags: [PosTag::Determiner, PosTag::Copula, PosTag::Particle].into(),
            drop_words: BTreeSet::new(),
        }
    }

    pub fn drops(&self, tt: &TaggedToken) -> bool {
        self.drop_tags.contains(&tt.tag) || self.drop_words.contains(&tt.token.text)
    }
}

pub fn optimize(tagged: &[TaggedToken], policy: &DropPolicy) -> Vec<TaggedToken> {
    tagged.iter().filter(|tt| !policy.drops(tt)).cloned().collect()
}
