//! Detection of machine-translated paragraphs from cross-sentence lexical coherence.
//!
//! A paragraph is split into sentences, every word is tagged and lemmatized,
//! and for each part-of-speech pair the words of each sentence pair are
//! matched one-to-one (Hungarian assignment over WordNet path similarities).
//! The per-pair coherence scores form a feature vector that a linear
//! classifier uses to decide whether the paragraph was written by a person or
//! translated by a machine. Frequency-distribution baselines are included for
//! comparison.

pub mod baselines;
pub mod classify;
pub mod coherence;
pub mod corpus;
pub mod nlp;
pub mod pipeline;
pub mod tagset;
pub mod wordnet;

pub(crate) mod util;

pub use corpus::{Corpus, FeatureMatrix, FeatureRow, Label, LabeledParagraph};
pub use tagset::TagSet;
