//! Rule-based sentence boundary detection.
//!
//! A run of `. ! ?` ends a sentence when it is followed (after any closing
//! quotes or brackets) by whitespace or the end of the text. A lone period is
//! suppressed after known abbreviations, single-letter initials, and tokens
//! with internal periods (`e.g.`, `U.S.`); runs are consumed whole so an
//! ellipsis is never split in the middle. Decimal points never qualify
//! because no whitespace follows them.

use std::collections::HashSet;
use std::sync::OnceLock;

use super::PipelineError;

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

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '}' | '\u{201d}' | '\u{2019}')
}

/// The word immediately before position `i` (exclusive), stripped of leading
/// punctuation. Empty when the terminator follows whitespace.
fn word_before(chars: &[char], i: usize) -> String {
    let mut start = i;
    while start > 0 && !chars[start - 1].is_whitespace() && !is_terminator(chars[start - 1]) {
        start -= 1;
    }
    let word: String = chars[start..i].iter().collect();
    word.trim_start_matches(|c: char| !c.is_alphanumeric())
        .to_string()
}

/// True when a lone period after `word` should not end the sentence.
fn suppress_period(word: &str) -> bool {
    if word.is_empty() {
        return false;
    }
    // Single-letter initials: "J. Smith".
    if word.len() == 1 && word.chars().next().unwrap().is_alphabetic() {
        return true;
    }
    // Tokens with internal periods: "e.g", "U.S".
    if word.contains('.') {
        return true;
    }
    abbreviation_set().contains(word.to_lowercase().as_str())
}

/// Splits paragraph text into sentences. The returned strings are trimmed
/// substrings of the input in order, so joining them restores the text up to
/// inter-sentence whitespace.
pub fn split_sentences(text: &str) -> Result<Vec<String>, PipelineError> {
    if text.trim().is_empty() {
        return Err(PipelineError::WhitespaceOnly);
    }
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        if !is_terminator(chars[i]) {
            i += 1;
            continue;
        }
        // Consume the whole terminator run ("...", "?!", ...).
        let run_start = i;
        while i + 1 < chars.len() && is_terminator(chars[i + 1]) {
            i += 1;
        }
        let lone_period = i == run_start && chars[run_start] == '.';
        if lone_period && suppress_period(&word_before(&chars, run_start)) {
            i += 1;
            continue;
        }
        // Closing quotes and brackets belong to the finished sentence.
        let mut end = i + 1;
        while end < chars.len() && is_closer(chars[end]) {
            end += 1;
        }
        let at_boundary = end == chars.len() || chars[end].is_whitespace();
        if at_boundary {
            let sentence: String = chars[start..end].iter().collect();
            let sentence = sentence.trim();
            if !sentence.is_empty() {
                sentences.push(sentence.to_string());
            }
            start = end;
        }
        i = end.max(i + 1);
    }
    let tail: String = chars[start..].iter().collect();
    let tail = tail.trim();
    if !tail.is_empty() {
        sentences.push(tail.to_string());
    }
    Ok(sentences)
}
