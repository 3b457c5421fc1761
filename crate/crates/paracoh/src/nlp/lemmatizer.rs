//! Lemmatization via the WordNet morphological rules.
//!
//! The tag picks the category (`NN*` noun, `VB*` verb, `JJ*` adjective,
//! `RB*` adverb). Verb clitics get a small built-in table ("'s" is a form of
//! "be"); after that the category's exception list is consulted, then the
//! suffix-detachment rules validated against the lemma index. Words with no
//! category, and words nothing matches, fall back to the lowercased surface.

use crate::wordnet::{Category, SynsetGraph};

fn clitic_lemma(lower: &str, category: Category) -> Option<&'static str> {
    match category {
        Category::Verb => match lower {
            "'s" | "'re" | "'m" => Some("be"),
            "'ve" => Some("have"),
            "'d" => Some("would"),
            _ => None,
        },
        Category::Adverb => match lower {
            "n't" => Some("not"),
            _ => None,
        },
        _ => None,
    }
}

/// Normalizes one surface form. Deterministic and idempotent.
pub fn lemmatize(surface: &str, pos: &str, graph: &SynsetGraph) -> String {
    let lower = surface.to_lowercase();
    let Some(category) = Category::from_tag(pos) else {
        return lower;
    };
    if let Some(clitic) = clitic_lemma(&lower, category) {
        return clitic.to_string();
    }
    graph.morphy(&lower, category).unwrap_or(lower)
}
