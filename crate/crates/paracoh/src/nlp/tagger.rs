//! Averaged-perceptron part-of-speech tagger.
//!
//! Greedy left-to-right decoding over contextual features (surrounding
//! words, previous two tags, prefixes/suffixes). Training shuffles sentence
//! order between epochs with a seeded generator, so the same corpus, tag set
//! and seed always produce bit-identical weights. A word whose features hit
//! no trained weight at all falls back to the most frequent training tag.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::PipelineError;
use crate::tagset::TagSet;
use crate::util::format_exact;

const START: [&str; 2] = ["-START-", "-START2-"];
const END: [&str; 2] = ["-END-", "-END2-"];

// Tag-dictionary thresholds: a word this frequent and this unambiguous in
// the training data is always tagged with its majority tag.
const DICT_FREQ_THRESHOLD: usize = 20;
const DICT_AMBIGUITY_THRESHOLD: f64 = 0.97;

/// Training provenance and the accuracy of re-tagging the training corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggerMetadata {
    pub iterations: usize,
    pub seed: u64,
    pub train_accuracy: f64,
    pub sentence_count: usize,
}

/// A trained tagger.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggerModel {
    weights: BTreeMap<String, BTreeMap<String, f64>>,
    tag_dict: BTreeMap<String, String>,
    default_tag: String,
    tag_set: TagSet,
    metadata: TaggerMetadata,
}

/// Sentences of (surface, tag) pairs read from a tagged training file.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedCorpus {
    pub sentences: Vec<Vec<(String, String)>>,
}

impl TaggedCorpus {
    /// Parses `surface<TAB>tag` lines with blank lines between sentences.
    pub fn parse(text: &str) -> Result<TaggedCorpus, PipelineError> {
        let mut sentences = Vec::new();
        let mut current: Vec<(String, String)> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() {
                if !current.is_empty() {
                    sentences.push(std::mem::take(&mut current));
                }
                continue;
            }
            let (surface, tag) =
                line.split_once('\t')
                    .ok_or_else(|| PipelineError::BadTaggedLine {
                        line: idx + 1,
                        message: "expected \"surface<TAB>tag\"".to_string(),
                    })?;
            if surface.is_empty() || tag.is_empty() || tag.contains('\t') {
                return Err(PipelineError::BadTaggedLine {
                    line: idx + 1,
                    message: "surface and tag must be single non-empty fields".to_string(),
                });
            }
            current.push((surface.to_string(), tag.to_string()));
        }
        if !current.is_empty() {
            sentences.push(current);
        }
        Ok(TaggedCorpus { sentences })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<TaggedCorpus, PipelineError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| PipelineError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        TaggedCorpus::parse(&text)
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }
}

fn normalize(word: &str) -> String {
    if word.contains('-') && !word.starts_with('-') {
        "!HYPHEN".to_string()
    } else if !word.is_empty() && word.chars().all(|c| c.is_ascii_digit()) {
        if word.len() == 4 {
            "!YEAR".to_string()
        } else {
            "!DIGIT".to_string()
        }
    } else {
        word.to_lowercase()
    }
}

fn suffix3(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let start = chars.len().saturating_sub(3);
    chars[start..].iter().collect()
}

fn pref1(s: &str) -> String {
    s.chars().next().map(String::from).unwrap_or_default()
}

/// Feature strings for position `i` (offset into the padded context).
fn features(word: &str, context: &[String], i: usize, prev: &str, prev2: &str) -> Vec<String> {
    let mut feats = Vec::with_capacity(14);
    let mut add = |parts: &[&str]| feats.push(parts.join(" "));
    add(&["bias"]);
    add(&["i suffix", &suffix3(word)]);
    add(&["i pref1", &pref1(word)]);
    add(&["i-1 tag", prev]);
    add(&["i-2 tag", prev2]);
    add(&["i tag+i-2 tag", prev, prev2]);
    add(&["i word", &context[i]]);
    add(&["i-1 tag+i word", prev, &context[i]]);
    add(&["i-1 word", &context[i - 1]]);
    add(&["i-1 suffix", &suffix3(&context[i - 1])]);
    add(&["i-2 word", &context[i - 2]]);
    add(&["i+1 word", &context[i + 1]]);
    add(&["i+1 suffix", &suffix3(&context[i + 1])]);
    add(&["i+2 word", &context[i + 2]]);
    feats
}

fn padded_context(surfaces: &[String]) -> Vec<String> {
    let mut context = Vec::with_capacity(surfaces.len() + 4);
    context.push(START[0].to_string());
    context.push(START[1].to_string());
    context.extend(surfaces.iter().map(|w| normalize(w)));
    context.push(END[0].to_string());
    context.push(END[1].to_string());
    context
}

/// Argmax with deterministic ties: higher score wins, then the smaller tag.
fn best_tag(scores: &HashMap<&str, f64>) -> Option<String> {
    let mut best: Option<(&str, f64)> = None;
    for (&tag, &score) in scores {
        best = match best {
            None => Some((tag, score)),
            Some((bt, bs)) if score > bs || (score == bs && tag < bt) => Some((tag, score)),
            other => other,
        };
    }
    best.map(|(tag, _)| tag.to_string())
}

impl TaggerModel {
    pub fn tag_set(&self) -> &TagSet {
        &self.tag_set
    }

    pub fn metadata(&self) -> &TaggerMetadata {
        &self.metadata
    }

    fn predict(&self, feats: &[String]) -> String {
        let mut scores: HashMap<&str, f64> = HashMap::new();
        let mut hit = false;
        for feat in feats {
            if let Some(tag_weights) = self.weights.get(feat) {
                hit = true;
                for (tag, weight) in tag_weights {
                    *scores.entry(tag.as_str()).or_insert(0.0) += weight;
                }
            }
        }
        if !hit {
            return self.default_tag.clone();
        }
        best_tag(&scores).unwrap_or_else(|| self.default_tag.clone())
    }

    /// Greedy left-to-right tagging; one tag per input surface.
    pub fn tag(&self, surfaces: &[String]) -> Vec<(String, String)> {
        if surfaces.is_empty() {
            return Vec::new();
        }
        let context = padded_context(surfaces);
        let mut prev = START[0].to_string();
        let mut prev2 = START[1].to_string();
        let mut out = Vec::with_capacity(surfaces.len());
        for (idx, surface) in surfaces.iter().enumerate() {
            let tag = match self.tag_dict.get(surface) {
                Some(tag) => tag.clone(),
                None => {
                    let feats = features(surface, &context, idx + 2, &prev, &prev2);
                    self.predict(&feats)
                }
            };
            out.push((surface.clone(), tag.clone()));
            prev2 = std::mem::replace(&mut prev, tag);
        }
        out
    }
}

#[derive(Default)]
struct Trainer {
    weights: HashMap<String, HashMap<String, f64>>,
    totals: HashMap<(String, String), f64>,
    stamps: HashMap<(String, String), u64>,
    instances: u64,
}

impl Trainer {
    fn predict(&self, feats: &[String], default_tag: &str) -> String {
        let mut scores: HashMap<&str, f64> = HashMap::new();
        let mut hit = false;
        for feat in feats {
            if let Some(tag_weights) = self.weights.get(feat) {
                hit = true;
                for (tag, weight) in tag_weights {
                    *scores.entry(tag.as_str()).or_insert(0.0) += weight;
                }
            }
        }
        if !hit {
            return default_tag.to_string();
        }
        best_tag(&scores).unwrap_or_else(|| default_tag.to_string())
    }

    fn bump(&mut self, feat: &str, tag: &str, delta: f64) {
        let key = (feat.to_string(), tag.to_string());
        let weight = self
            .weights
            .entry(feat.to_string())
            .or_default()
            .entry(tag.to_string())
            .or_insert(0.0);
        let stamp = self.stamps.entry(key.clone()).or_insert(0);
        *self.totals.entry(key).or_insert(0.0) += (self.instances - *stamp) as f64 * *weight;
        *stamp = self.instances;
        *weight += delta;
    }

    fn update(&mut self, truth: &str, guess: &str, feats: &[String]) {
        self.instances += 1;
        if truth == guess {
            return;
        }
        for feat in feats {
            self.bump(feat, truth, 1.0);
            self.bump(feat, guess, -1.0);
        }
    }

    fn averaged(mut self) -> BTreeMap<String, BTreeMap<String, f64>> {
        let mut averaged = BTreeMap::new();
        if self.instances == 0 {
            return averaged;
        }
        for (feat, tag_weights) in self.weights {
            let mut out: BTreeMap<String, f64> = BTreeMap::new();
            for (tag, weight) in tag_weights {
                let key = (feat.clone(), tag.clone());
                let stamp = self.stamps.remove(&key).unwrap_or(0);
                let mut total = self.totals.remove(&key).unwrap_or(0.0);
                total += (self.instances - stamp) as f64 * weight;
                let avg = total / self.instances as f64;
                if avg != 0.0 {
                    out.insert(tag, avg);
                }
            }
            if !out.is_empty() {
                averaged.insert(feat, out);
            }
        }
        averaged
    }
}

/// Builds the unambiguous-word dictionary and the most frequent tag.
fn survey(corpus: &TaggedCorpus) -> (BTreeMap<String, String>, String) {
    let mut word_tags: HashMap<&str, BTreeMap<&str, usize>> = HashMap::new();
    let mut tag_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for sentence in &corpus.sentences {
        for (word, tag) in sentence {
            *word_tags.entry(word).or_default().entry(tag).or_insert(0) += 1;
            *tag_counts.entry(tag).or_insert(0) += 1;
        }
    }
    let default_tag = tag_counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(tag, _)| tag.to_string())
        .unwrap_or_default();
    let mut dict = BTreeMap::new();
    for (word, tags) in word_tags {
        let n: usize = tags.values().sum();
        let (mode_tag, mode) = tags
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(t, c)| (*t, *c))
            .expect("word has at least one tag");
        if n >= DICT_FREQ_THRESHOLD && mode as f64 / n as f64 >= DICT_AMBIGUITY_THRESHOLD {
            dict.insert(word.to_string(), mode_tag.to_string());
        }
    }
    (dict, default_tag)
}

/// Trains an averaged perceptron on the corpus. Every tag in the corpus must
/// belong to `tag_set`; the result is deterministic for a given seed.
pub fn train_tagger(
    corpus: &TaggedCorpus,
    tag_set: &TagSet,
    iterations: usize,
    seed: u64,
) -> Result<TaggerModel, PipelineError> {
    if corpus.sentences.is_empty() {
        return Err(PipelineError::EmptyTaggedCorpus);
    }
    for sentence in &corpus.sentences {
        for (_, tag) in sentence {
            if !tag_set.contains(tag) {
                return Err(PipelineError::UnknownTag { tag: tag.clone() });
            }
        }
    }
    let (tag_dict, default_tag) = survey(corpus);
    let mut trainer = Trainer::default();
    let mut order: Vec<usize> = (0..corpus.sentences.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for epoch in 0..iterations.max(1) {
        if epoch > 0 {
            order.shuffle(&mut rng);
        }
        for &si in &order {
            let sentence = &corpus.sentences[si];
            let surfaces: Vec<String> = sentence.iter().map(|(w, _)| w.clone()).collect();
            let context = padded_context(&surfaces);
            let mut prev = START[0].to_string();
            let mut prev2 = START[1].to_string();
            for (idx, (word, gold)) in sentence.iter().enumerate() {
                let guess = match tag_dict.get(word) {
                    Some(tag) => tag.clone(),
                    None => {
                        let feats = features(word, &context, idx + 2, &prev, &prev2);
                        let guess = trainer.predict(&feats, &default_tag);
                        trainer.update(gold, &guess, &feats);
                        guess
                    }
                };
                prev2 = std::mem::replace(&mut prev, guess);
            }
        }
    }
    let mut model = TaggerModel {
        weights: trainer.averaged(),
        tag_dict,
        default_tag,
        tag_set: tag_set.clone(),
        metadata: TaggerMetadata {
            iterations: iterations.max(1),
            seed,
            train_accuracy: 0.0,
            sentence_count: corpus.sentences.len(),
        },
    };
    model.metadata.train_accuracy = retag_accuracy(&model, corpus);
    Ok(model)
}

/// Token accuracy of the model on a tagged corpus.
pub fn retag_accuracy(model: &TaggerModel, corpus: &TaggedCorpus) -> f64 {
    let mut correct = 0usize;
    let mut total = 0usize;
    for sentence in &corpus.sentences {
        let surfaces: Vec<String> = sentence.iter().map(|(w, _)| w.clone()).collect();
        for ((_, predicted), (_, gold)) in model.tag(&surfaces).iter().zip(sentence) {
            total += 1;
            if predicted == gold {
                correct += 1;
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        correct as f64 / total as f64
    }
}

/// Writes the model as tab-separated text that reloads bit-exactly.
pub fn save_tagger(model: &TaggerModel, path: impl AsRef<Path>) -> Result<(), PipelineError> {
    let path = path.as_ref();
    let io_err = |e: std::io::Error| PipelineError::Io {
        path: path.display().to_string(),
        source: e,
    };
    let file = fs::File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    let m = &model.metadata;
    writeln!(out, "meta\titerations\t{}", m.iterations).map_err(io_err)?;
    writeln!(out, "meta\tseed\t{}", m.seed).map_err(io_err)?;
    writeln!(
        out,
        "meta\ttrain_accuracy\t{}",
        format_exact(m.train_accuracy)
    )
    .map_err(io_err)?;
    writeln!(out, "meta\tsentence_count\t{}", m.sentence_count).map_err(io_err)?;
    writeln!(out, "meta\tdefault_tag\t{}", model.default_tag).map_err(io_err)?;
    for tag in model.tag_set.tags() {
        writeln!(out, "tag\t{tag}").map_err(io_err)?;
    }
    for (word, tag) in &model.tag_dict {
        writeln!(out, "dict\t{word}\t{tag}").map_err(io_err)?;
    }
    for (feat, tag_weights) in &model.weights {
        for (tag, weight) in tag_weights {
            writeln!(out, "w\t{feat}\t{tag}\t{}", format_exact(*weight)).map_err(io_err)?;
        }
    }
    out.flush().map_err(io_err)
}

/// Loads a model written by [`save_tagger`].
pub fn load_tagger(path: impl AsRef<Path>) -> Result<TaggerModel, PipelineError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| PipelineError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let bad = |line: usize, message: &str| PipelineError::BadModelFile {
        path: path.display().to_string(),
        line,
        message: message.to_string(),
    };
    let mut meta: HashMap<String, String> = HashMap::new();
    let mut tags: Vec<String> = Vec::new();
    let mut tag_dict = BTreeMap::new();
    let mut weights: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            ["meta", key, value] => {
                meta.insert(key.to_string(), value.to_string());
            }
            ["tag", tag] => tags.push(tag.to_string()),
            ["dict", word, tag] => {
                tag_dict.insert(word.to_string(), tag.to_string());
            }
            ["w", feat, tag, weight] => {
                let w: f64 = weight
                    .parse()
                    .map_err(|_| bad(lineno, "weight is not a number"))?;
                weights
                    .entry(feat.to_string())
                    .or_default()
                    .insert(tag.to_string(), w);
            }
            _ => return Err(bad(lineno, "unrecognized record")),
        }
    }
    let tag_set = TagSet::new(tags).map_err(|e| bad(0, &format!("bad tag set: {e}")))?;
    // Every stored tag must belong to the declared tag set.
    for tag in weights
        .values()
        .flat_map(|m| m.keys())
        .chain(tag_dict.values())
    {
        if !tag_set.contains(tag) {
            return Err(bad(0, &format!("tag {tag:?} is not in the model's tag set")));
        }
    }
    let get_meta = |key: &str| {
        meta.get(key)
            .cloned()
            .ok_or_else(|| bad(0, &format!("missing meta {key}")))
    };
    let metadata = TaggerMetadata {
        iterations: get_meta("iterations")?
            .parse()
            .map_err(|_| bad(0, "iterations is not a number"))?,
        seed: get_meta("seed")?
            .parse()
            .map_err(|_| bad(0, "seed is not a number"))?,
        train_accuracy: get_meta("train_accuracy")?
            .parse()
            .map_err(|_| bad(0, "train_accuracy is not a number"))?,
        sentence_count: get_meta("sentence_count")?
            .parse()
            .map_err(|_| bad(0, "sentence_count is not a number"))?,
    };
    let default_tag = get_meta("default_tag")?;
    Ok(TaggerModel {
        weights,
        tag_dict,
        default_tag,
        tag_set,
        metadata,
    })
}
