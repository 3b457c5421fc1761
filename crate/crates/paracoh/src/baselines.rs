//! Frequency-distribution baselines for comparison with the coherence
//! features: a Zipf-fit feature set, hybrid POS/function-word n-grams, and
//! inter-textual nearest-neighbor classification.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::corpus::Label;
use crate::nlp::ProcessedParagraph;

const FUNCTION_WORDS: &str = include_str!("../resources/function_words.txt");

/// The built-in English closed-class word list, lowercased.
pub fn default_function_words() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| parse_function_words(FUNCTION_WORDS))
}

pub fn parse_function_words(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_lowercase)
        .collect()
}

pub fn load_function_words(path: impl AsRef<Path>) -> Result<HashSet<String>, BaselineError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| BaselineError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok(parse_function_words(&text))
}

#[derive(Debug, thiserror::Error)]
pub enum BaselineError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("paragraph {id:?} has fewer than two distinct word types")]
    TooFewTypes { id: String },
    #[error("frequency spectrum is empty")]
    EmptySpectrum,
    #[error("paragraph {id:?} yields no n-grams of order {n}")]
    NoNgrams { id: String, n: usize },
    #[error("n-gram order must be 1 to 3, got {0}")]
    BadOrder(usize),
    #[error("nearest-neighbor training set is empty")]
    EmptyTraining,
}

/// Word counts of one text, ranked by descending count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySpectrum {
    /// (word, count), count descending, ties by word.
    pub ranked: Vec<(String, u64)>,
    pub total: u64,
}

impl FrequencySpectrum {
    /// Counts the paragraph's word tokens (lowercased surfaces). Tokens with
    /// no alphanumeric character — bare punctuation — are not words.
    pub fn from_paragraph(paragraph: &ProcessedParagraph) -> FrequencySpectrum {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for sentence in &paragraph.sentences {
            for token in &sentence.tokens {
                if token.surface.chars().any(|c| c.is_alphanumeric()) {
                    *counts.entry(token.surface.to_lowercase()).or_insert(0) += 1;
                }
            }
        }
        FrequencySpectrum::from_counts(counts.into_iter())
    }

    pub fn from_counts(counts: impl Iterator<Item = (String, u64)>) -> FrequencySpectrum {
        let mut ranked: Vec<(String, u64)> = counts.filter(|(_, c)| *c > 0).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let total = ranked.iter().map(|(_, c)| c).sum();
        FrequencySpectrum { ranked, total }
    }

    pub fn distinct_types(&self) -> usize {
        self.ranked.len()
    }

    fn count_of(&self, word: &str) -> u64 {
        self.ranked
            .iter()
            .find(|(w, _)| w == word)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }
}

/// Least-squares fit of log(count) against log(rank).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub r_squared: f64,
}

impl ZipfFit {
    pub fn values(&self) -> Vec<f64> {
        vec![
            self.slope,
            self.intercept,
            self.rms_residual,
            self.r_squared,
        ]
    }

    pub fn feature_names() -> Vec<String> {
        [
            "zipf_slope",
            "zipf_intercept",
            "zipf_rms_residual",
            "zipf_r2",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    }
}

/// Fits the log-log line over a spectrum with at least two types.
pub fn zipf_fit(spectrum: &FrequencySpectrum) -> Option<ZipfFit> {
    let v = spectrum.distinct_types();
    if v < 2 {
        return None;
    }
    let points: Vec<(f64, f64)> = spectrum
        .ranked
        .iter()
        .enumerate()
        .map(|(i, (_, c))| ((i as f64 + 1.0).ln(), (*c as f64).ln()))
        .collect();
    let n = v as f64;
    let mean_x: f64 = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y: f64 = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| {
            let e = p.1 - (intercept + slope * p.0);
            e * e
        })
        .sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res.abs() < 1e-18 {
        1.0
    } else {
        0.0
    };
    Some(ZipfFit {
        slope,
        intercept,
        rms_residual: (ss_res / n).sqrt(),
        r_squared,
    })
}

/// Zipf features of a paragraph: slope, intercept, RMS residual, R².
pub fn zipf_features(paragraph: &ProcessedParagraph) -> Result<ZipfFit, BaselineError> {
    let spectrum = FrequencySpectrum::from_paragraph(paragraph);
    zipf_fit(&spectrum).ok_or_else(|| BaselineError::TooFewTypes {
        id: paragraph.id.clone(),
    })
}

/// Per-sentence unit sequence of the hybrid scheme: function words stay as
/// themselves (lowercased), everything else becomes its POS tag.
fn hybrid_units(
    paragraph: &ProcessedParagraph,
    function_words: &HashSet<String>,
) -> Vec<Vec<String>> {
    paragraph
        .sentences
        .iter()
        .map(|s| {
            s.tokens
                .iter()
                .map(|t| {
                    let lower = t.surface.to_lowercase();
                    if function_words.contains(&lower) {
                        lower
                    } else {
                        t.pos.clone()
                    }
                })
                .collect()
        })
        .collect()
}

fn ngrams_of(units: &[Vec<String>], n: usize) -> Vec<String> {
    let mut grams = Vec::new();
    for sentence in units {
        if sentence.len() < n {
            continue;
        }
        for window in sentence.windows(n) {
            grams.push(window.join("+"));
        }
    }
    grams
}

/// Name of the out-of-vocabulary bucket appended to every n-gram vector.
pub const OOV_BUCKET: &str = "OOV";

/// N-gram vocabulary fixed on a training corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct NgramVocab {
    pub n: usize,
    entries: Vec<String>,
    index: HashMap<String, usize>,
}

impl NgramVocab {
    /// Collects every order-`n` hybrid n-gram of the paragraphs, ordered by
    /// descending frequency (ties lexicographic).
    pub fn fit(
        paragraphs: &[ProcessedParagraph],
        n: usize,
        function_words: &HashSet<String>,
    ) -> Result<NgramVocab, BaselineError> {
        if !(1..=3).contains(&n) {
            return Err(BaselineError::BadOrder(n));
        }
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for paragraph in paragraphs {
            let units = hybrid_units(paragraph, function_words);
            for gram in ngrams_of(&units, n) {
                *counts.entry(gram).or_insert(0) += 1;
            }
        }
        let mut entries: Vec<(String, u64)> = counts.into_iter().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let entries: Vec<String> = entries.into_iter().map(|(g, _)| g).collect();
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        Ok(NgramVocab { n, entries, index })
    }

    /// Feature names: the vocabulary plus the OOV bucket.
    pub fn feature_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .entries
            .iter()
            .map(|g| format!("ng{}:{}", self.n, g))
            .collect();
        names.push(OOV_BUCKET.to_string());
        names
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Relative-frequency vector of a paragraph's hybrid n-grams over the fixed
/// vocabulary; unknown n-grams pool into the trailing OOV bucket. The vector
/// sums to one.
pub fn pos_ngram_features(
    paragraph: &ProcessedParagraph,
    vocab: &NgramVocab,
    function_words: &HashSet<String>,
) -> Result<Vec<f64>, BaselineError> {
    let units = hybrid_units(paragraph, function_words);
    let grams = ngrams_of(&units, vocab.n);
    if grams.is_empty() {
        return Err(BaselineError::NoNgrams {
            id: paragraph.id.clone(),
            n: vocab.n,
        });
    }
    let mut vector = vec![0.0f64; vocab.entries.len() + 1];
    let oov = vocab.entries.len();
    for gram in &grams {
        let slot = vocab.index.get(gram).copied().unwrap_or(oov);
        vector[slot] += 1.0;
    }
    let total = grams.len() as f64;
    for v in &mut vector {
        *v /= total;
    }
    Ok(vector)
}

/// Normalized inter-textual distance between two word-frequency spectra:
/// the smaller text's counts are compared against the larger text's counts
/// rescaled to the smaller total, summed over the union vocabulary and
/// normalized into [0, 1]. Symmetric; 0 for identical spectra, 1 for
/// disjoint vocabularies.
pub fn intertextual_distance(
    a: &FrequencySpectrum,
    b: &FrequencySpectrum,
) -> Result<f64, BaselineError> {
    if a.total == 0 || b.total == 0 {
        return Err(BaselineError::EmptySpectrum);
    }
    // The smaller text leads.
    let (small, large) = if a.total <= b.total { (a, b) } else { (b, a) };
    let scale = small.total as f64 / large.total as f64;
    let mut union: HashSet<&str> = HashSet::new();
    for (w, _) in &small.ranked {
        union.insert(w);
    }
    for (w, _) in &large.ranked {
        union.insert(w);
    }
    let mut sum = 0.0f64;
    let mut words: Vec<&str> = union.into_iter().collect();
    words.sort_unstable();
    for word in words {
        let ca = small.count_of(word) as f64;
        let cb = large.count_of(word) as f64 * scale;
        sum += (ca - cb).abs();
    }
    Ok(sum / (2.0 * small.total as f64))
}

/// Label of the training spectrum nearest to the candidate; ties keep the
/// earliest training entry.
pub fn nearest_neighbor_classify(
    candidate: &FrequencySpectrum,
    training: &[(FrequencySpectrum, Label)],
) -> Result<Label, BaselineError> {
    if training.is_empty() {
        return Err(BaselineError::EmptyTraining);
    }
    let mut best: Option<(f64, Label)> = None;
    for (spectrum, label) in training {
        let d = intertextual_distance(candidate, spectrum)?;
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, *label));
        }
    }
    Ok(best.expect("training is non-empty").1)
}
