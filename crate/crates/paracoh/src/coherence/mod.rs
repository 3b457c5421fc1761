//! Cross-sentence word-matching coherence metrics.
//!
//! For a part-of-speech pair, the earlier sentence keeps its tokens of the
//! first tag and the later sentence its tokens of the second tag; the kept
//! words are matched one-to-one by a Hungarian assignment over lemma path
//! similarities. The matching score is the mean similarity of the matched
//! pairs, discounted by a penalty that grows with the unmatched-count
//! imbalance. Averaging over every sentence pair of a paragraph gives the
//! paragraph coherence for that tag pair, and the values over all canonical
//! tag pairs form the classifier feature vector.

mod hungarian;

pub use hungarian::assign_hungarian;

use std::collections::BTreeMap;

use crate::nlp::{ProcessedParagraph, Sentence, Token};
use crate::tagset::{PosPair, TagSet, OTHER_TAG};
use crate::wordnet::{path_similarity, Similarity, SynsetGraph};

/// Stand-in matrix value for undefined similarities: low enough that any
/// defined pair is preferred, finite so the solver accepts it.
const UNDEFINED_SENTINEL: f64 = -1.0e6;

#[derive(Debug, thiserror::Error)]
pub enum CoherenceError {
    #[error("similarity matrix is empty")]
    EmptyMatrix,
    #[error("similarity matrix row {row} has a different length")]
    RaggedMatrix { row: usize },
    #[error("similarity matrix entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("penalty is undefined when both kept lists are empty")]
    BothSidesEmpty,
    #[error("token tag {tag:?} is not in the configured tag set")]
    TagSetMismatch { tag: String },
    #[error("invalid coherence configuration: {0}")]
    BadConfig(String),
}

/// Tunable coherence parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceConfig {
    /// Exponent of the unmatched-imbalance penalty.
    pub penalty_exponent: f64,
    /// Matched pairs with similarity at or below this count as unmatched.
    pub match_threshold: f64,
}

impl Default for CoherenceConfig {
    fn default() -> CoherenceConfig {
        CoherenceConfig {
            penalty_exponent: 3.0,
            match_threshold: 0.0,
        }
    }
}

impl CoherenceConfig {
    pub fn validate(&self) -> Result<(), CoherenceError> {
        if self.penalty_exponent <= 0.0 || !self.penalty_exponent.is_finite() {
            return Err(CoherenceError::BadConfig(format!(
                "penalty exponent must be a positive number, got {}",
                self.penalty_exponent
            )));
        }
        if !(0.0..1.0).contains(&self.match_threshold) {
            return Err(CoherenceError::BadConfig(format!(
                "match threshold must lie in [0, 1), got {}",
                self.match_threshold
            )));
        }
        Ok(())
    }
}

/// Which side of a sentence pair a sentence plays during filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Tokens of `sentence` whose tag equals the pair's tag for that side, in
/// sentence order. For a self-pair both sides keep the same tag.
pub fn filter_by_pos(sentence: &Sentence, pair: &PosPair, side: Side) -> Vec<Token> {
    let tag = match side {
        Side::Left => pair.first(),
        Side::Right => pair.second(),
    };
    sentence
        .tokens
        .iter()
        .filter(|t| t.pos == tag)
        .cloned()
        .collect()
}

/// Outcome of matching one filtered sentence pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub left_kept: Vec<Token>,
    pub right_kept: Vec<Token>,
    /// (left index, right index, similarity), each index used at most once;
    /// the list order follows the matching's internal canonical orientation.
    pub pairs: Vec<(usize, usize, f64)>,
    pub n: usize,
    pub unmatched_left: usize,
    pub unmatched_right: usize,
}

/// Orientation key so that `match_words(a, b)` and `match_words(b, a)`
/// perform the identical computation and merely relabel the sides.
fn first_operand_leq(a: &[Token], b: &[Token]) -> bool {
    match a.len().cmp(&b.len()) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => {
            for (ta, tb) in a.iter().zip(b) {
                let ka = (&ta.lemma, &ta.pos);
                let kb = (&tb.lemma, &tb.pos);
                match ka.cmp(&kb) {
                    std::cmp::Ordering::Less => return true,
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Equal => {}
                }
            }
            true
        }
    }
}

fn match_oriented(a: &[Token], b: &[Token], graph: &SynsetGraph, threshold: f64) -> MatchResult {
    if a.is_empty() || b.is_empty() {
        return MatchResult {
            left_kept: a.to_vec(),
            right_kept: b.to_vec(),
            pairs: Vec::new(),
            n: 0,
            unmatched_left: a.len(),
            unmatched_right: b.len(),
        };
    }
    let sims: Vec<Vec<Similarity>> = a
        .iter()
        .map(|ta| {
            b.iter()
                .map(|tb| path_similarity(&ta.lemma, &ta.pos, &tb.lemma, &tb.pos, graph))
                .collect()
        })
        .collect();
    let matrix: Vec<Vec<f64>> = sims
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| s.value().unwrap_or(UNDEFINED_SENTINEL))
                .collect()
        })
        .collect();
    let assignment = assign_hungarian(&matrix, true).expect("matrix is non-empty and finite");
    let mut pairs = Vec::with_capacity(assignment.len());
    for (i, j) in assignment {
        if let Some(v) = sims[i][j].value() {
            if v > threshold {
                pairs.push((i, j, v));
            }
        }
    }
    let n = pairs.len();
    MatchResult {
        left_kept: a.to_vec(),
        right_kept: b.to_vec(),
        unmatched_left: a.len() - n,
        unmatched_right: b.len() - n,
        pairs,
        n,
    }
}

/// Matches the left tokens one-to-one against the right tokens, maximizing
/// total path similarity; assigned pairs whose similarity is undefined or at
/// most `threshold` are discarded and count as unmatched.
pub fn match_words(
    left: &[Token],
    right: &[Token],
    graph: &SynsetGraph,
    threshold: f64,
) -> MatchResult {
    if first_operand_leq(left, right) {
        match_oriented(left, right, graph, threshold)
    } else {
        let mut result = match_oriented(right, left, graph, threshold);
        std::mem::swap(&mut result.left_kept, &mut result.right_kept);
        std::mem::swap(&mut result.unmatched_left, &mut result.unmatched_right);
        for pair in &mut result.pairs {
            *pair = (pair.1, pair.0, pair.2);
        }
        result
    }
}

/// Mean similarity of the matched pairs; 0 when nothing matched.
pub fn pos_mat_raw(result: &MatchResult) -> f64 {
    if result.n == 0 {
        return 0.0;
    }
    let sum: f64 = result.pairs.iter().map(|p| p.2).sum();
    sum / result.n as f64
}

/// Unmatched-imbalance penalty:
/// `0.5 * (|unmatched_left - unmatched_right| / max(|left|, |right|))^exponent`.
pub fn penalty(result: &MatchResult, exponent: f64) -> Result<f64, CoherenceError> {
    let larger = result.left_kept.len().max(result.right_kept.len());
    if larger == 0 {
        return Err(CoherenceError::BothSidesEmpty);
    }
    let diff = result.unmatched_left.abs_diff(result.unmatched_right);
    let ratio = diff as f64 / larger as f64;
    // Integer exponents use powi so that dyadic ratios stay exact.
    let powed = if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        ratio.powi(exponent as i32)
    } else {
        ratio.powf(exponent)
    };
    Ok(0.5 * powed)
}

/// Penalty-discounted matching score; 0 when both sides are empty or when
/// nothing matched.
pub fn pos_mat(result: &MatchResult, exponent: f64) -> f64 {
    if result.n == 0 {
        return 0.0;
    }
    let raw = pos_mat_raw(result);
    let p = penalty(result, exponent).expect("n > 0 implies a non-empty side");
    raw * (1.0 - p)
}

/// Paragraph coherence for one tag pair: the sum of pair scores over all
/// unordered sentence pairs divided by `max(1, m(m-1)/2)`. Sentence pairs
/// where either filtered side is empty contribute 0 but stay in the
/// denominator.
pub fn para_coh(
    paragraph: &ProcessedParagraph,
    pair: &PosPair,
    graph: &SynsetGraph,
    config: &CoherenceConfig,
) -> f64 {
    let m = paragraph.sentences.len();
    let denominator = 1usize.max(m * m.saturating_sub(1) / 2) as f64;
    let mut sum = 0.0;
    for i in 0..m {
        for j in (i + 1)..m {
            let left = filter_by_pos(&paragraph.sentences[i], pair, Side::Left);
            if left.is_empty() {
                continue;
            }
            let right = filter_by_pos(&paragraph.sentences[j], pair, Side::Right);
            if right.is_empty() {
                continue;
            }
            let result = match_words(&left, &right, graph, config.match_threshold);
            sum += pos_mat(&result, config.penalty_exponent);
        }
    }
    sum / denominator
}

/// One paragraph's coherence value per canonical tag pair, in the tag set's
/// lexicographic pair order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceVector {
    pub id: String,
    pub tag_set_id: String,
    pub values: Vec<f64>,
}

impl CoherenceVector {
    pub fn get(&self, pair: &PosPair, tag_set: &TagSet) -> Option<f64> {
        tag_set.pair_index(pair).map(|i| self.values[i])
    }
}

/// Computes the full coherence vector of a paragraph: one `para_coh` value
/// per canonical tag pair, `T(T+1)/2` features in a fixed order.
///
/// Tokens tagged [`OTHER_TAG`] are permitted and never match; any other tag
/// outside `tag_set` is a mismatch error.
pub fn extract_features(
    paragraph: &ProcessedParagraph,
    tag_set: &TagSet,
    graph: &SynsetGraph,
    config: &CoherenceConfig,
) -> Result<CoherenceVector, CoherenceError> {
    config.validate()?;
    for sentence in &paragraph.sentences {
        for token in &sentence.tokens {
            if !tag_set.contains(&token.pos) && token.pos != OTHER_TAG {
                return Err(CoherenceError::TagSetMismatch {
                    tag: token.pos.clone(),
                });
            }
        }
    }
    let m = paragraph.sentences.len();
    let denominator = 1usize.max(m * m.saturating_sub(1) / 2) as f64;
    let mut values = vec![0.0f64; tag_set.pair_count()];

    // Tokens of each sentence grouped by tag, in sentence order.
    let by_tag: Vec<BTreeMap<&str, Vec<&Token>>> = paragraph
        .sentences
        .iter()
        .map(|s| {
            let mut map: BTreeMap<&str, Vec<&Token>> = BTreeMap::new();
            for token in &s.tokens {
                if tag_set.contains(&token.pos) {
                    map.entry(token.pos.as_str()).or_default().push(token);
                }
            }
            map
        })
        .collect();

    for i in 0..m {
        for j in (i + 1)..m {
            for (tag_a, tokens_a) in &by_tag[i] {
                for (tag_b, tokens_b) in &by_tag[j] {
                    if tag_a > tag_b {
                        continue;
                    }
                    let pair =
                        PosPair::new(tag_a, tag_b, tag_set).expect("tags come from the tag set");
                    let slot = tag_set.pair_index(&pair).expect("canonical pair");
                    let left: Vec<Token> = tokens_a.iter().map(|t| (*t).clone()).collect();
                    let right: Vec<Token> = tokens_b.iter().map(|t| (*t).clone()).collect();
                    let result = match_words(&left, &right, graph, config.match_threshold);
                    values[slot] += pos_mat(&result, config.penalty_exponent);
                }
            }
        }
    }
    for v in &mut values {
        *v /= denominator;
    }
    Ok(CoherenceVector {
        id: paragraph.id.clone(),
        tag_set_id: tag_set.id().to_string(),
        values,
    })
}
