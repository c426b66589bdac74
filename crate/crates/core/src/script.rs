//! Malayalam text hygiene: normalization, grapheme clusters and word tokens.
//!
//! All offsets in this module are *character* (Unicode scalar) offsets, not
//! byte offsets.

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

pub const VIRAMA: char = '\u{0D4D}';

/// A character removed from the input, with its offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedChar {
    pub offset: usize,
    pub code_point: char,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedText {
    pub content: String,
    pub dropped: Vec<DroppedChar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphemeCluster {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

impl Token {
    /// Builds a free-standing token spanning `[0, len)`.
    pub fn new(text: impl Into<String>) -> Self {
        let text = text.into();
        let end = text.chars().count();
        Token { text, start: 0, end }
    }
}

/// Tokens of a sentence together with the punctuation stripped from their edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tokenization {
    pub tokens: Vec<Token>,
    pub stripped: Vec<DroppedChar>,
}

pub fn is_malayalam(c: char) -> bool {
    ('\u{0D00}'..='\u{0D7F}').contains(&c)
}

pub fn is_sentence_punct(c: char) -> bool {
    matches!(c, '.' | ',' | '?' | '!')
}

fn is_allowed(c: char) -> bool {
    is_malayalam(c) || c.is_ascii_alphanumeric() || c == ' ' || is_sentence_punct(c)
}

/// Malayalam combining marks: signs, anusvara/visarga, nukta and virama.
pub fn is_combining_mark(c: char) -> bool {
    matches!(c,
        '\u{0D00}'..='\u{0D03}'
        | '\u{0D3B}'..='\u{0D3C}'
        | '\u{0D3E}'..='\u{0D44}'
        | '\u{0D46}'..='\u{0D48}'
        | '\u{0D4A}'..='\u{0D4D}'
        | '\u{0D57}'
        | '\u{0D62}'..='\u{0D63}')
}

pub fn is_consonant(c: char) -> bool {
    ('\u{0D15}'..='\u{0D3A}').contains(&c)
}

/// Canonically composes `raw`, removes characters outside the Malayalam
/// block / ASCII letters and digits / sentence punctuation, and collapses
/// whitespace. Never fails.
pub fn normalize_text(raw: &str) -> NormalizedText {
    let mut dropped = Vec::new();
    let mut kept = String::with_capacity(raw.len());
    for (offset, c) in raw.nfc().enumerate() {
        if c.is_whitespace() {
            kept.push(' ');
        } else if is_allowed(c) {
            kept.push(c);
        } else {
            dropped.push(DroppedChar {
                offset,
                code_point: c,
            });
        }
    }

    // Removing a character can leave two composable marks adjacent.
    let mut content = String::with_capacity(kept.len());
    for word in kept.nfc().collect::<String>().split(' ') {
        if word.is_empty() {
            continue;
        }
        if !content.is_empty() {
            content.push(' ');
        }
        content.push_str(word);
    }
    NormalizedText { content, dropped }
}

/// Splits `text` into conjunct-aware grapheme clusters.
///
/// A cluster is a base character plus its trailing marks. A virama keeps the
/// cluster open and pulls in the following consonant with its own marks.
pub fn segment_clusters(text: &str) -> Vec<GraphemeCluster> {
    let chars: Vec<char> = text.chars().collect();
    let mut clusters = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let start = i;
        i += 1;
        loop {
            while i < chars.len() && is_combining_mark(chars[i]) {
                i += 1;
            }
            if chars[i - 1] == VIRAMA && i < chars.len() && is_consonant(chars[i]) {
                i += 1;
                continue;
            }
            break;
        }
        clusters.push(GraphemeCluster {
            text: chars[start..i].iter().collect(),
            start,
            end: i,
        });
    }
    clusters
}

/// Splits on spaces and strips sentence punctuation from token edges.
pub fn split_tokens(nt: &NormalizedText) -> Tokenization {
    let chars: Vec<char> = nt.content.chars().collect();
    let mut out = Tokenization::default();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == ' ' {
            i += 1;
            continue;
        }
        let word_start = i;
        while i < chars.len() && chars[i] != ' ' {
            i += 1;
        }
        let mut start = word_start;
        let mut end = i;
        while start < end && is_sentence_punct(chars[start]) {
            out.stripped.push(DroppedChar {
                offset: start,
                code_point: chars[start],
            });
            start += 1;
        }
        let mut trailing = Vec::new();
        while end > start && is_sentence_punct(chars[end - 1]) {
            end -= 1;
            trailing.push(DroppedChar {
                offset: end,
                code_point: chars[end],
            });
        }
        out.stripped.extend(trailing.into_iter().rev());
        if start < end {
            out.tokens.push(Token {
                text: chars[start..end].iter().collect(),
                start,
                end,
            });
        }
    }
    out
}

pub fn tokenize(nt: &NormalizedText) -> Vec<Token> {
    split_tokens(nt).tokens
}
