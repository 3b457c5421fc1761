//! Text pipeline: sentence separation, tokenization, part-of-speech tagging
//! and lemmatization.

mod lemmatizer;
mod splitter;
mod tagger;
mod tokenizer;

pub use lemmatizer::lemmatize;
pub use splitter::split_sentences;
pub use tagger::{
    load_tagger, save_tagger, train_tagger, TaggedCorpus, TaggerMetadata, TaggerModel,
};
pub use tokenizer::tokenize;

use crate::corpus::{Label, LabeledParagraph};
use crate::wordnet::SynsetGraph;

/// One word with its tag and normalized base form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    pub pos: String,
    pub lemma: String,
}

impl Token {
    pub fn new(
        surface: impl Into<String>,
        pos: impl Into<String>,
        lemma: impl Into<String>,
    ) -> Token {
        Token {
            surface: surface.into(),
            pos: pos.into(),
            lemma: lemma.into(),
        }
    }
}

/// A sentence as emitted by the pipeline; always holds at least one token.
#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub raw: String,
}

/// A paragraph after sentence separation, tagging and lemmatization.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessedParagraph {
    pub id: String,
    pub sentences: Vec<Sentence>,
    pub label: Option<Label>,
}

impl ProcessedParagraph {
    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("paragraph text is empty or whitespace-only")]
    WhitespaceOnly,
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("tagged corpus line {line}: {message}")]
    BadTaggedLine { line: usize, message: String },
    #[error("tagged corpus uses tag {tag:?} which is not in the configured tag set")]
    UnknownTag { tag: String },
    #[error("tagged corpus contains no sentences")]
    EmptyTaggedCorpus,
    #[error("tagger model file {path}, line {line}: {message}")]
    BadModelFile {
        path: String,
        line: usize,
        message: String,
    },
}

/// Runs the full pipeline on one paragraph: sentence separation, then
/// tokenization, tagging and lemmatization per sentence.
pub fn process_paragraph(
    paragraph: &LabeledParagraph,
    model: &TaggerModel,
    graph: &SynsetGraph,
) -> Result<ProcessedParagraph, PipelineError> {
    let raws = split_sentences(&paragraph.text)?;
    let mut sentences = Vec::with_capacity(raws.len());
    for raw in raws {
        let surfaces = tokenize(&raw);
        if surfaces.is_empty() {
            continue;
        }
        let tagged = model.tag(&surfaces);
        let tokens = tagged
            .into_iter()
            .map(|(surface, pos)| {
                let lemma = lemmatize(&surface, &pos, graph);
                Token {
                    surface,
                    pos,
                    lemma,
                }
            })
            .collect();
        sentences.push(Sentence { tokens, raw });
    }
    debug_assert!(
        !sentences.is_empty(),
        "non-whitespace text yields a sentence"
    );
    Ok(ProcessedParagraph {
        id: paragraph.id.clone(),
        sentences,
        label: paragraph.label,
    })
}
