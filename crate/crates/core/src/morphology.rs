//! Suffix-rule morphology: POS tagging and stemming from one rule table.
//!
//! The same [`RuleTable`] is consulted twice: [`analyze`] picks the rule (or
//! exception) for a surface word, and [`stem`] later applies that rule's
//! strip-and-replace to produce the root.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::script::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PosTag {
    Noun,
    Verb,
    Pronoun,
    Adjective,
    Determiner,
    Copula,
    Particle,
    Number,
    Unknown,
}

impl PosTag {
    pub const ALL: [PosTag; 9] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Pronoun,
        PosTag::Adjective,
        PosTag::Determiner,
        PosTag::Copula,
        PosTag::Particle,
        PosTag::Number,
        PosTag::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Pronoun => "PRONOUN",
            PosTag::Adjective => "ADJECTIVE",
            PosTag::Determiner => "DETERMINER",
            PosTag::Copula => "COPULA",
            PosTag::Particle => "PARTICLE",
            PosTag::Number => "NUMBER",
            PosTag::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown POS tag `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuffixRule {
    pub id: String,
    pub suffix: String,
    #[serde(default)]
    pub replacement: String,
    pub tag: PosTag,
    #[serde(default)]
    pub features: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exception {
    pub tag: PosTag,
    pub features: Vec<String>,
    pub root: String,
}

/// Which part of the rule table produced an analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "rule", rename_all = "snake_case")]
pub enum Match {
    Rule(String),
    Exception,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub token: Token,
    pub tag: PosTag,
    pub features: Vec<String>,
    pub matched: Match,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(String);

impl Root {
    /// Returns `None` for the empty string.
    pub fn new(text: impl Into<String>) -> Option<Self> {
        let text = text.into();
        (!text.is_empty()).then_some(Root(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("duplicate rule id `{0}`")]
    DuplicateRuleId(String),
    #[error("rule `{0}` has an empty suffix")]
    EmptySuffix(String),
    #[error("exception `{0}` has an empty root")]
    EmptyRoot(String),
    #[error("duplicate exception for word `{0}`")]
    DuplicateException(String),
    #[error("malformed rule document at {0}")]
    MalformedDocument(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTable {
    rules: Vec<SuffixRule>,
    exceptions: HashMap<String, Exception>,
    default_tag: PosTag,
    // suffix text -> indices into `rules`, sorted by rule id
    by_suffix: HashMap<String, Vec<usize>>,
    max_suffix_chars: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleDocument {
    #[serde(default = "unknown_tag")]
    default_tag: PosTag,
    #[serde(default, rename = "rule")]
    rules: Vec<SuffixRule>,
    #[serde(default, rename = "exception")]
    exceptions: Vec<ExceptionEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExceptionEntry {
    word: String,
    tag: PosTag,
    #[serde(default)]
    features: Vec<String>,
    root: String,
}

fn unknown_tag() -> PosTag {
    PosTag::Unknown
}

fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Parses and validates a TOML rule-table document.
pub fn load_rules(document: &str) -> Result<RuleTable, RuleError> {
    let doc: RuleDocument = toml::from_str(document).map_err(|e| {
        let at = match e.span() {
            Some(span) => {
                let (line, col) = line_col(document, span.start);
                format!("line {line}, column {col}: {}", e.message())
            }
            None => e.message().to_string(),
        };
        RuleError::MalformedDocument(at)
    })?;

    let rules = doc
        .rules
        .into_iter()
        .map(|r| SuffixRule {
            suffix: nfc(&r.suffix),
            replacement: nfc(&r.replacement),
            ..r
        })
        .collect();
    let mut exceptions = HashMap::new();
    for e in doc.exceptions {
        let word = nfc(&e.word);
        if e.root.is_empty() {
            return Err(RuleError::EmptyRoot(word));
        }
        let ex = Exception {
            tag: e.tag,
            features: e.features,
            root: nfc(&e.root),
        };
        if exceptions.insert(word.clone(), ex).is_some() {
            return Err(RuleError::DuplicateException(word));
        }
    }
    RuleTable::new(rules, exceptions, doc.default_tag)
}

fn line_col(text: &str, byte: usize) -> (usize, usize) {
    let before = &text[..byte.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

impl RuleTable {
    pub fn new(
        rules: Vec<SuffixRule>,
        exceptions: HashMap<String, Exception>,
        default_tag: PosTag,
    ) -> Result<Self, RuleError> {
        let mut ids = BTreeSet::new();
        let mut by_suffix: HashMap<String, Vec<usize>> = HashMap::new();
        let mut max_suffix_chars = 0;
        for (i, rule) in rules.iter().enumerate() {
            if !ids.insert(rule.id.as_str()) {
                return Err(RuleError::DuplicateRuleId(rule.id.clone()));
            }
            if rule.suffix.is_empty() {
                return Err(RuleError::EmptySuffix(rule.id.clone()));
            }
            max_suffix_chars = max_suffix_chars.max(rule.suffix.chars().count());
            by_suffix.entry(rule.suffix.clone()).or_default().push(i);
        }
        for (word, ex) in &exceptions {
            if ex.root.is_empty() {
                return Err(RuleError::EmptyRoot(word.clone()));
            }
        }
        for indices in by_suffix.values_mut() {
            indices.sort_by(|&a, &b| rules[a].id.cmp(&rules[b].id));
        }
        Ok(RuleTable {
            rules,
            exceptions,
            default_tag,
            by_suffix,
            max_suffix_chars,
        })
    }

    pub fn rules(&self) -> &[SuffixRule] {
        &self.rules
    }

    pub fn exception(&self, word: &str) -> Option<&Exception> {
        self.exceptions.get(word)
    }

    pub fn exceptions(&self) -> impl Iterator<Item = (&str, &Exception)> {
        self.exceptions.iter().map(|(w, e)| (w.as_str(), e))
    }

    pub fn default_tag(&self) -> PosTag {
        self.default_tag
    }

    pub fn rule(&self, id: &str) -> Option<&SuffixRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// The rule whose suffix is the longest proper suffix of `word`; equal
    /// lengths go to the smallest rule id.
    pub fn longest_match(&self, word: &str) -> Option<&SuffixRule> {
        // byte offsets of every char boundary after the first char
        let starts: Vec<usize> = word.char_indices().map(|(i, _)| i).skip(1).collect();
        let min_start = starts.len().saturating_sub(self.max_suffix_chars);
        starts[min_start..]
            .iter()
            .find_map(|&at| self.by_suffix.get(&word[at..]))
            .map(|indices| &self.rules[indices[0]])
    }
}

/// Stage 1: assigns a POS tag and features to a token.
pub fn analyze(token: &Token, rules: &RuleTable) -> TaggedToken {
    if let Some(ex) = rules.exception(&token.text) {
        return TaggedToken {
            token: token.clone(),
            tag: ex.tag,
            features: ex.features.clone(),
            matched: Match::Exception,
        };
    }
    match rules.longest_match(&token.text) {
        Some(rule) => TaggedToken {
            token: token.clone(),
            tag: rule.tag,
            features: rule.features.clone(),
            matched: Match::Rule(rule.id.clone()),
        },
        None => TaggedToken {
            token: token.clone(),
            tag: rules.default_tag(),
            features: Vec::new(),
            matched: Match::None,
        },
    }
}

/// Stage 3: reduces an analysed token to its root form.
pub fn stem(tt: &TaggedToken, rules: &RuleTable) -> Root {
    let word = &tt.token.text;
    let text = match &tt.matched {
        Match::Exception => rules.exception(word).map(|e| e.root.clone()),
        Match::Rule(id) => rules.rule(id).and_then(|r| {
            word.strip_suffix(r.suffix.as_str())
                .filter(|rest| !rest.is_empty())
                .map(|rest| format!("{rest}{}", r.replacement))
        }),
        Match::None => None,
    };
    Root::new(text.unwrap_or_else(|| word.clone())).expect("tokens are never empty")
}
