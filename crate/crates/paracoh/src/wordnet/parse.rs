//! Parsing of the WordNet 3.0 database directory layout.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{Category, CategoryData, Synset, SynsetGraph, CATEGORIES};

#[derive(Debug, thiserror::Error)]
pub enum WordnetError {
    #[error("wordnet directory {dir} is missing files: {files}")]
    MissingFiles { dir: String, files: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file} at byte {offset}: {message}")]
    Parse {
        file: String,
        offset: usize,
        message: String,
    },
}

fn parse_err(file: &Path, offset: usize, message: impl Into<String>) -> WordnetError {
    WordnetError::Parse {
        file: file.display().to_string(),
        offset,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, WordnetError> {
    fs::read_to_string(path).map_err(|e| WordnetError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Yields `(byte_offset, line)` for every record line, skipping the license
/// header (lines starting with whitespace) and blank lines.
fn record_lines(raw: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut offset = 0usize;
    raw.split_inclusive('\n').filter_map(move |chunk| {
        let start = offset;
        offset += chunk.len();
        let line = chunk.trim_end_matches(['\n', '\r']);
        if line.is_empty() || line.starts_with(' ') || line.starts_with('\t') {
            None
        } else {
            Some((start, line))
        }
    })
}

pub(super) fn load(dir: &Path) -> Result<SynsetGraph, WordnetError> {
    let mut missing = Vec::new();
    let mut paths: HashMap<(Category, &str), PathBuf> = HashMap::new();
    for cat in CATEGORIES {
        for kind in ["index", "data", "exc"] {
            let name = match kind {
                "exc" => format!("{}.exc", cat.name()),
                other => format!("{}.{}", other, cat.name()),
            };
            let path = dir.join(&name);
            if path.is_file() {
                paths.insert((cat, kind), path);
            } else {
                missing.push(name);
            }
        }
    }
    if !missing.is_empty() {
        return Err(WordnetError::MissingFiles {
            dir: dir.display().to_string(),
            files: missing.join(", "),
        });
    }

    let mut categories: [CategoryData; 4] = Default::default();
    for cat in CATEGORIES {
        let data = &mut categories[cat.index()];
        parse_data_file(&paths[&(cat, "data")], cat, data)?;
        parse_index_file(&paths[&(cat, "index")], cat, data)?;
        parse_exc_file(&paths[&(cat, "exc")], data)?;
        build_topology(data);
    }
    Ok(SynsetGraph::from_categories(categories))
}

/// Strips adjective syntactic markers like `(p)` from a data-file word and
/// lowercases it.
fn clean_word(word: &str) -> String {
    let word = word.split_once('(').map_or(word, |(head, _)| head);
    word.to_lowercase()
}

fn parse_data_file(
    path: &Path,
    cat: Category,
    data: &mut CategoryData,
) -> Result<(), WordnetError> {
    let raw = read(path)?;
    for (offset, line) in record_lines(&raw) {
        let head = line.split('|').next().unwrap_or(line);
        let mut tokens = head.split_whitespace();
        let mut next = |what: &str| {
            tokens
                .next()
                .ok_or_else(|| parse_err(path, offset, format!("missing {what}")))
        };

        let synset_offset: u64 = next("synset offset")?
            .parse()
            .map_err(|_| parse_err(path, offset, "synset offset is not a number"))?;
        let _lex_filenum = next("lex filenum")?;
        let ss_type = next("synset type")?;
        if ss_type.len() != 1 || !cat.type_chars().contains(&ss_type.chars().next().unwrap()) {
            return Err(parse_err(
                path,
                offset,
                format!(
                    "synset type {ss_type:?} does not belong in a {} file",
                    cat.name()
                ),
            ));
        }
        let w_cnt = usize::from_str_radix(next("word count")?, 16)
            .map_err(|_| parse_err(path, offset, "word count is not hex"))?;
        if w_cnt == 0 {
            return Err(parse_err(path, offset, "synset has no words"));
        }
        let mut words = Vec::with_capacity(w_cnt);
        for _ in 0..w_cnt {
            words.push(clean_word(next("word")?));
            let _lex_id = next("lex id")?;
        }
        let p_cnt: usize = next("pointer count")?
            .parse()
            .map_err(|_| parse_err(path, offset, "pointer count is not a number"))?;
        let mut hypernyms = Vec::new();
        for _ in 0..p_cnt {
            let symbol = next("pointer symbol")?;
            let target: u64 = next("pointer offset")?
                .parse()
                .map_err(|_| parse_err(path, offset, "pointer offset is not a number"))?;
            let pos = next("pointer pos")?;
            let _source_target = next("pointer source/target")?;
            let same_category =
                pos.len() == 1 && cat.type_chars().contains(&pos.chars().next().unwrap());
            if (symbol == "@" || symbol == "@i") && same_category {
                hypernyms.push(target);
            }
        }
        if data
            .synsets
            .insert(
                synset_offset,
                Synset {
                    offset: synset_offset,
                    words,
                    hypernyms,
                },
            )
            .is_some()
        {
            return Err(parse_err(
                path,
                offset,
                format!("duplicate synset offset {synset_offset}"),
            ));
        }
    }

    // Hypernym targets must exist within the category.
    let mut dangling: Option<(u64, u64)> = None;
    for synset in data.synsets.values() {
        for &target in &synset.hypernyms {
            if !data.synsets.contains_key(&target) {
                dangling = Some((synset.offset, target));
                break;
            }
        }
    }
    if let Some((from, to)) = dangling {
        return Err(parse_err(
            path,
            0,
            format!("synset {from} points to missing hypernym {to}"),
        ));
    }
    Ok(())
}

fn parse_index_file(
    path: &Path,
    cat: Category,
    data: &mut CategoryData,
) -> Result<(), WordnetError> {
    let raw = read(path)?;
    for (offset, line) in record_lines(&raw) {
        let mut tokens = line.split_whitespace();
        let mut next = |what: &str| {
            tokens
                .next()
                .ok_or_else(|| parse_err(path, offset, format!("missing {what}")))
        };
        let lemma = next("lemma")?.to_string();
        let _pos = next("pos")?;
        let synset_cnt: usize = next("synset count")?
            .parse()
            .map_err(|_| parse_err(path, offset, "synset count is not a number"))?;
        let p_cnt: usize = next("pointer count")?
            .parse()
            .map_err(|_| parse_err(path, offset, "pointer count is not a number"))?;
        for _ in 0..p_cnt {
            next("pointer symbol")?;
        }
        let _sense_cnt = next("sense count")?;
        let _tagsense_cnt = next("tagsense count")?;
        let mut offsets = Vec::with_capacity(synset_cnt);
        for _ in 0..synset_cnt {
            let so: u64 = next("synset offset")?
                .parse()
                .map_err(|_| parse_err(path, offset, "synset offset is not a number"))?;
            if !data.synsets.contains_key(&so) {
                return Err(parse_err(
                    path,
                    offset,
                    format!(
                        "lemma {lemma:?} references missing {} synset {so}",
                        cat.name()
                    ),
                ));
            }
            offsets.push(so);
        }
        if offsets.is_empty() {
            return Err(parse_err(
                path,
                offset,
                format!("lemma {lemma:?} lists no synsets"),
            ));
        }
        data.lemma_index.insert(lemma, offsets);
    }
    Ok(())
}

fn parse_exc_file(path: &Path, data: &mut CategoryData) -> Result<(), WordnetError> {
    let raw = read(path)?;
    for (offset, line) in record_lines(&raw) {
        let mut tokens = line.split_whitespace();
        let form = tokens
            .next()
            .ok_or_else(|| parse_err(path, offset, "missing irregular form"))?;
        let bases: Vec<String> = tokens.map(str::to_string).collect();
        if bases.is_empty() {
            return Err(parse_err(
                path,
                offset,
                format!("irregular form {form:?} lists no base forms"),
            ));
        }
        data.exceptions.insert(form.to_string(), bases);
    }
    Ok(())
}

fn build_topology(data: &mut CategoryData) {
    let mut edge_count = 0usize;
    for synset in data.synsets.values() {
        for &target in &synset.hypernyms {
            edge_count += 1;
            data.adjacency
                .entry(synset.offset)
                .or_default()
                .push(target);
            data.adjacency
                .entry(target)
                .or_default()
                .push(synset.offset);
            data.hyponyms.entry(target).or_default().push(synset.offset);
        }
    }
    for list in data.adjacency.values_mut() {
        list.sort_unstable();
        list.dedup();
    }
    for list in data.hyponyms.values_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let mut roots: Vec<u64> = data
        .synsets
        .values()
        .filter(|s| s.hypernyms.is_empty())
        .map(|s| s.offset)
        .collect();
    roots.sort_unstable();
    data.roots = roots;
    data.edge_count = edge_count;
}
