//! Whitespace-plus-rules word tokenizer.
//!
//! Chunks are split on whitespace, then leading and trailing punctuation is
//! peeled into separate tokens and clitic contractions are detached
//! (`it's` -> `it`, `'s`). Known abbreviations keep their trailing period so
//! the tokenizer never splits inside a token the sentence splitter treated
//! as one word.

use std::collections::HashSet;
use std::sync::OnceLock;

const ABBREVIATIONS: &str = include_str!("../../resources/abbreviations.txt");

fn abbreviation_set() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        ABBREVIATIONS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect()
    })
}

const CONTRACTIONS: [&str; 6] = ["n't", "'s", "'re", "'ve", "'ll", "'m"];

fn is_opener(c: char) -> bool {
    matches!(
        c,
        '(' | '[' | '{' | '"' | '`' | '\'' | '\u{201c}' | '\u{2018}'
    )
}

fn is_trailing(c: char) -> bool {
    matches!(
        c,
        ',' | ';' | ':' | '!' | '?' | '"' | '\'' | ')' | ']' | '}' | '%' | '\u{201d}' | '\u{2019}'
    )
}

/// True when `core` should keep an attached final period ("Dr.", "e.g.",
/// initials like "J.").
fn keeps_period(core: &str) -> bool {
    let stem = &core[..core.len() - 1];
    if stem.is_empty() {
        return false;
    }
    if stem.len() == 1 && stem.chars().next().unwrap().is_alphabetic() {
        return true;
    }
    if stem.contains('.') {
        return true;
    }
    abbreviation_set().contains(stem.to_lowercase().as_str())
}

fn split_chunk(chunk: &str, out: &mut Vec<String>) {
    let mut core = chunk;

    // Leading openers.
    let mut lead = Vec::new();
    loop {
        let mut chars = core.chars();
        match chars.next() {
            Some(c) if is_opener(c) && core.chars().count() > 1 => {
                lead.push(c.to_string());
                core = chars.as_str();
            }
            _ => break,
        }
    }

    // Trailing punctuation, collected in reverse.
    let mut tail: Vec<String> = Vec::new();
    while let Some(c) = core.chars().last() {
        if is_trailing(c) && core.chars().count() > 1 {
            tail.push(c.to_string());
            core = &core[..core.len() - c.len_utf8()];
        } else if c == '.' {
            if core == "..." {
                tail.push(core.to_string());
                core = "";
                break;
            }
            if core.chars().count() > 1 && core.ends_with("...") {
                tail.push("...".to_string());
                core = &core[..core.len() - 3];
            } else if core.chars().count() > 1 && !keeps_period(core) {
                tail.push(".".to_string());
                core = &core[..core.len() - 1];
            } else {
                break;
            }
        } else {
            break;
        }
    }

    out.extend(lead);
    if !core.is_empty() {
        match clitic_suffix(core) {
            Some(suf) => {
                let cut = core.len() - suf.len();
                out.push(core[..cut].to_string());
                out.push(core[cut..].to_string());
            }
            None => out.push(core.to_string()),
        }
    }
    out.extend(tail.into_iter().rev());
}

/// Contraction suffix of `word` if it has one and is longer than it.
fn clitic_suffix(word: &str) -> Option<&'static str> {
    CONTRACTIONS.iter().copied().find(|suf| {
        word.len() > suf.len()
            && word.is_char_boundary(word.len() - suf.len())
            && word[word.len() - suf.len()..].eq_ignore_ascii_case(suf)
    })
}

/// Tokenizes one sentence. Whitespace-only input yields an empty list.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in sentence.split_whitespace() {
        split_chunk(chunk, &mut out);
    }
    out
}
