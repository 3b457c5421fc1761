//! Part-of-speech tag sets and canonical tag pairs.
//!
//! The default set has 44 tags: the 36 Penn Treebank word classes plus eight
//! punctuation tags. The comma token is tagged `COMMA` so that every tag is
//! safe inside comma-separated feature files and `A-B` pair names. Unordered
//! pairs with repetition over 44 tags give the 990 classifier features.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::util::list_id;

/// Tag assigned to a hand-built token whose class is outside the configured
/// set. The pipeline itself only emits tags the tagger was trained on.
pub const OTHER_TAG: &str = "OTHER";

const DEFAULT_TAG_SET: &str = include_str!("../resources/tagset_44.txt");

#[derive(Debug, thiserror::Error)]
pub enum TagSetError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid tag {tag:?}: {reason}")]
    InvalidTag { tag: String, reason: String },
    #[error("duplicate tag {tag:?}")]
    DuplicateTag { tag: String },
    #[error("tag set is empty")]
    Empty,
}

/// An ordered part-of-speech tag inventory.
///
/// Tags are kept sorted lexicographically; the canonical pair order (and so
/// the feature order of every extracted vector) follows from that sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSet {
    tags: Vec<String>,
    ranks: HashMap<String, usize>,
    id: String,
}

impl TagSet {
    pub fn new(mut tags: Vec<String>) -> Result<TagSet, TagSetError> {
        if tags.is_empty() {
            return Err(TagSetError::Empty);
        }
        for tag in &tags {
            if tag.is_empty() {
                return Err(TagSetError::InvalidTag {
                    tag: tag.clone(),
                    reason: "empty".into(),
                });
            }
            if tag.chars().any(|c| c.is_whitespace()) || tag.contains(',') || tag.contains('-') {
                return Err(TagSetError::InvalidTag {
                    tag: tag.clone(),
                    reason: "tags may not contain whitespace, ',' or '-'".into(),
                });
            }
        }
        tags.sort();
        if let Some(w) = tags.windows(2).find(|w| w[0] == w[1]) {
            return Err(TagSetError::DuplicateTag { tag: w[0].clone() });
        }
        let ranks = tags
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let id = list_id(&tags);
        Ok(TagSet { tags, ranks, id })
    }

    /// The built-in 44-tag inventory.
    pub fn default_44() -> TagSet {
        TagSet::parse(DEFAULT_TAG_SET).expect("embedded tag set is valid")
    }

    /// Parses a tag set from "one tag per line" text; blank lines ignored.
    pub fn parse(text: &str) -> Result<TagSet, TagSetError> {
        let tags: Vec<String> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect();
        TagSet::new(tags)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<TagSet, TagSetError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| TagSetError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        TagSet::parse(&text)
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.ranks.contains_key(tag)
    }

    pub fn rank(&self, tag: &str) -> Option<usize> {
        self.ranks.get(tag).copied()
    }

    /// Stable identifier of this inventory; two tag sets with the same tags
    /// share an id on every platform.
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Number of unordered tag pairs with repetition: T(T+1)/2.
    pub fn pair_count(&self) -> usize {
        self.tags.len() * (self.tags.len() + 1) / 2
    }

    /// All canonical pairs in lexicographic order.
    pub fn canonical_pairs(&self) -> Vec<PosPair> {
        let mut pairs = Vec::with_capacity(self.pair_count());
        for i in 0..self.tags.len() {
            for j in i..self.tags.len() {
                pairs.push(PosPair {
                    first: self.tags[i].clone(),
                    second: self.tags[j].clone(),
                });
            }
        }
        pairs
    }

    /// Index of the canonical pair over tags with ranks `i <= j`.
    pub fn pair_index(&self, pair: &PosPair) -> Option<usize> {
        let i = self.rank(&pair.first)?;
        let j = self.rank(&pair.second)?;
        debug_assert!(i <= j);
        let t = self.tags.len();
        Some(i * (2 * t - i + 1) / 2 + (j - i))
    }
}

/// An unordered pair of tags, stored with `first <= second`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosPair {
    first: String,
    second: String,
}

impl PosPair {
    /// Builds the canonical pair; both tags must belong to `tag_set`.
    pub fn new(a: &str, b: &str, tag_set: &TagSet) -> Result<PosPair, TagSetError> {
        for tag in [a, b] {
            if !tag_set.contains(tag) {
                return Err(TagSetError::InvalidTag {
                    tag: tag.to_string(),
                    reason: "not in the configured tag set".into(),
                });
            }
        }
        let (first, second) = if a <= b { (a, b) } else { (b, a) };
        Ok(PosPair {
            first: first.to_string(),
            second: second.to_string(),
        })
    }

    pub fn first(&self) -> &str {
        &self.first
    }

    pub fn second(&self) -> &str {
        &self.second
    }

    /// The `A-B` name used in feature files.
    pub fn name(&self) -> String {
        format!("{}-{}", self.first, self.second)
    }

    /// Parses an `A-B` feature name back into a pair.
    pub fn parse(name: &str, tag_set: &TagSet) -> Result<PosPair, TagSetError> {
        let (a, b) = name
            .split_once('-')
            .ok_or_else(|| TagSetError::InvalidTag {
                tag: name.to_string(),
                reason: "pair names look like TAGA-TAGB".into(),
            })?;
        PosPair::new(a, b, tag_set)
    }
}

impl fmt::Display for PosPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.first, self.second)
    }
}
