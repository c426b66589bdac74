//! End-to-end translation: normalize, tag, drop, stem, map to signs, animate.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::animation::{build_timeline, timeline_from_value, timeline_value, Timeline, TimelineConfig};
use crate::lexicon::{self, fingerspell, load_lexicon, lookup, Lexicon, LexiconError, SignEntry};
use crate::morphology::{analyze, load_rules, stem, Root, RuleError, RuleTable, TaggedToken};
use crate::optimizer::{optimize, DropPolicy};
use crate::pose::{Skeleton, STANDARD_SKELETON_ID};
use crate::script::{normalize_text, split_tokens, DroppedChar, NormalizedText, Token};

pub const DEMO_CONFIG: &str = include_str!("../data/config.toml");
pub const DEMO_RULES: &str = include_str!("../data/rules.toml");
pub const DEMO_LEXICON: &str = include_str!("../data/lexicon.json");

#[derive(Debug, Error)]
pub enum ResourceError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("rules: {0}")]
    Rules(#[from] RuleError),
    #[error("lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error("lexicon skeleton `{found}` does not match skeleton `{expected}`")]
    SkeletonMismatch { expected: String, found: String },
    #[error("{} resource error(s)", .0.len())]
    Multiple(Vec<ResourceError>),
}

impl ResourceError {
    /// Flattened list of individual problems, one line each.
    pub fn lines(&self) -> Vec<String> {
        match self {
            ResourceError::Multiple(all) => all.iter().flat_map(|e| e.lines()).collect(),
            ResourceError::Lexicon(LexiconError::Invalid(v)) => {
                v.iter().map(|v| format!("lexicon: {v}")).collect()
            }
            other => vec![other.to_string()],
        }
    }
}

/// Pipeline configuration file (TOML). Resource paths are relative to the
/// file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub rules: PathBuf,
    pub lexicon: PathBuf,
    #[serde(default = "standard_skeleton")]
    pub skeleton: String,
    #[serde(default)]
    pub timeline: TimelineConfig,
    #[serde(default)]
    pub drop_policy: DropPolicy,
}

fn standard_skeleton() -> String {
    STANDARD_SKELETON_ID.to_string()
}

pub fn parse_config(document: &str) -> Result<PipelineConfig, ResourceError> {
    toml::from_str(document).map_err(|e| ResourceError::Config(e.to_string()))
}

/// Everything translate needs, validated and immutable.
#[derive(Debug, Clone)]
pub struct PipelineResources {
    pub rules: RuleTable,
    pub drop_policy: DropPolicy,
    pub lexicon: Lexicon,
    pub skeleton: Skeleton,
    pub timeline: TimelineConfig,
}

/// Where to load resources from; `rules`/`lexicon` override the config.
#[derive(Debug, Clone, Default)]
pub struct ResourcePaths {
    pub config: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, ResourceError> {
    std::fs::read_to_string(path).map_err(|source| ResourceError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl PipelineResources {
    /// The bundled demo rule table, lexicon and policy.
    pub fn demo() -> Self {
        Self::from_documents(DEMO_CONFIG, DEMO_RULES, DEMO_LEXICON)
            .expect("bundled demo resources are valid")
    }

    /// Builds resources from in-memory documents; the config's paths are ignored.
    pub fn from_documents(config: &str, rules: &str, lexicon: &str) -> Result<Self, ResourceError> {
        let cfg = parse_config(config)?;
        Self::assemble(&cfg, Ok(rules.to_string()), Ok(lexicon.to_string()))
    }

    /// Loads from disk. With no config path, the bundled demo config is used
    /// and only explicit overrides are read from disk.
    pub fn load(paths: &ResourcePaths) -> Result<Self, ResourceError> {
        let (cfg, base) = match &paths.config {
            Some(p) => (
                parse_config(&read(p)?)?,
                p.parent().map(Path::to_path_buf).unwrap_or_default(),
            ),
            None => (parse_config(DEMO_CONFIG)?, PathBuf::new()),
        };
        let doc = |explicit: &Option<PathBuf>, configured: &Path, bundled: &str| match explicit {
            Some(p) => read(p),
            None if paths.config.is_some() => read(&base.join(configured)),
            None => Ok(bundled.to_string()),
        };
        let rules = doc(&paths.rules, &cfg.rules, DEMO_RULES);
        let lexicon = doc(&paths.lexicon, &cfg.lexicon, DEMO_LEXICON);
        Self::assemble(&cfg, rules, lexicon)
    }

    fn assemble(
        cfg: &PipelineConfig,
        rules: Result<String, ResourceError>,
        lexicon: Result<String, ResourceError>,
    ) -> Result<Self, ResourceError> {
        let mut errors = Vec::new();
        let skeleton = Skeleton::with_id(cfg.skeleton.clone());
        if let Err(e) = cfg.timeline.validate() {
            errors.push(ResourceError::Config(e.to_string()));
        }
        let rules = rules.and_then(|doc| load_rules(&doc).map_err(ResourceError::from));
        let lexicon = lexicon.and_then(|doc| {
            load_lexicon(&doc, &skeleton).map_err(|e| match e {
                // a wrong skeleton id makes every entry mismatch; report it once
                LexiconError::Invalid(v) => match v.iter().find_map(|v| match &v.kind {
                    lexicon::ViolationKind::SkeletonMismatch { expected, found } => {
                        Some((expected.clone(), found.clone()))
                    }
                    _ => None,
                }) {
                    Some((expected, found)) => ResourceError::SkeletonMismatch { expected, found },
                    None => ResourceError::Lexicon(LexiconError::Invalid(v)),
                },
                other => ResourceError::Lexicon(other),
            })
        });
        let rules = rules.map_err(|e| errors.push(e)).ok();
        let lexicon = lexicon.map_err(|e| errors.push(e)).ok();
        match (rules, lexicon) {
            (Some(rules), Some(lexicon)) if errors.is_empty() => Ok(PipelineResources {
                rules,
                drop_policy: cfg.drop_policy.clone(),
                lexicon,
                skeleton,
                timeline: cfg.timeline,
            }),
            _ if errors.len() == 1 => Err(errors.pop().expect("one error")),
            _ => Err(ResourceError::Multiple(errors)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GlossSource {
    Lexicon,
    Fingerspell,
}

impl fmt::Display for GlossSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GlossSource::Lexicon => "LEXICON",
            GlossSource::Fingerspell => "FINGERSPELL",
        })
    }
}

/// A gloss and the retained token (by index) it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlossItem {
    pub gloss: String,
    pub source: GlossSource,
    pub token: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    DroppedCharacter { offset: usize, code_point: char },
    Oov { token: String, fingerspelled: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranslationResult {
    pub normalized: NormalizedText,
    pub tokens: Vec<Token>,
    pub stripped: Vec<DroppedChar>,
    pub tagged: Vec<TaggedToken>,
    pub retained: Vec<TaggedToken>,
    pub roots: Vec<Root>,
    pub glosses: Vec<GlossItem>,
    pub timeline: Timeline,
    pub warnings: Vec<Warning>,
}

impl TranslationResult {
    pub fn gloss_ids(&self) -> Vec<&str> {
        self.glosses.iter().map(|g| g.gloss.as_str()).collect()
    }

    pub fn to_document(&self) -> String {
        serde_json::to_string(&self.to_value()).expect("result serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(ResultDocument {
            format: RESULT_FORMAT.to_string(),
            normalized: self.normalized.clone(),
            tokens: self.tokens.clone(),
            stripped: self.stripped.clone(),
            tagged: self.tagged.clone(),
            retained: self.retained.clone(),
            roots: self.roots.clone(),
            glosses: self.glosses.clone(),
            timeline: timeline_value(&self.timeline),
            warnings: self.warnings.clone(),
        })
        .expect("result serializes")
    }

    /// Parses and checks a result document, including the embedded timeline.
    pub fn from_document(document: &str) -> Result<Self, String> {
        let doc: ResultDocument = serde_json::from_str(document).map_err(|e| e.to_string())?;
        if doc.format != RESULT_FORMAT {
            return Err(format!("unsupported format `{}`", doc.format));
        }
        if doc.roots.len() != doc.retained.len() {
            return Err("roots and retained tokens differ in length".into());
        }
        if doc.glosses.iter().any(|g| g.token >= doc.retained.len()) {
            return Err("gloss refers to a missing retained token".into());
        }
        let timeline = timeline_from_value(doc.timeline).map_err(|e| e.to_string())?;
        Ok(TranslationResult {
            normalized: doc.normalized,
            tokens: doc.tokens,
            stripped: doc.stripped,
            tagged: doc.tagged,
            retained: doc.retained,
            roots: doc.roots,
            glosses: doc.glosses,
            timeline,
            warnings: doc.warnings,
        })
    }
}

pub const RESULT_FORMAT: &str = "mal2sign-result/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResultDocument {
    format: String,
    normalized: NormalizedText,
    tokens: Vec<Token>,
    stripped: Vec<DroppedChar>,
    tagged: Vec<TaggedToken>,
    retained: Vec<TaggedToken>,
    roots: Vec<Root>,
    glosses: Vec<GlossItem>,
    timeline: serde_json::Value,
    warnings: Vec<Warning>,
}

/// Runs the whole pipeline. Total on any input string.
pub fn translate(text: &str, res: &PipelineResources) -> TranslationResult {
    let normalized = normalize_text(text);
    let split = split_tokens(&normalized);
    let mut warnings: Vec<Warning> = normalized
        .dropped
        .iter()
        .map(|d| Warning::DroppedCharacter {
            offset: d.offset,
            code_point: d.code_point,
        })
        .collect();

    // stage 1: tag surface words
    let tagged: Vec<TaggedToken> = split.tokens.iter().map(|t| analyze(t, &res.rules)).collect();
    // stage 2: drop by tag of the unstemmed word
    let retained = optimize(&tagged, &res.drop_policy);
    // stage 3: roots
    let roots: Vec<Root> = retained.iter().map(|tt| stem(tt, &res.rules)).collect();

    let mut glosses = Vec::new();
    let mut signs: Vec<&SignEntry> = Vec::new();
    for (i, (tt, root)) in retained.iter().zip(&roots).enumerate() {
        if let Some(entry) = lookup(root, &res.lexicon) {
            glosses.push(GlossItem {
                gloss: entry.gloss.clone(),
                source: GlossSource::Lexicon,
                token: i,
            });
            signs.push(entry);
            continue;
        }
        let spelled = fingerspell(&tt.token, &res.lexicon);
        warnings.push(Warning::Oov {
            token: tt.token.text.clone(),
            fingerspelled: spelled.len(),
        });
        for gloss in spelled {
            if let Some(entry) = res.lexicon.get(&gloss) {
                signs.push(entry);
            }
            glosses.push(GlossItem {
                gloss,
                source: GlossSource::Fingerspell,
                token: i,
            });
        }
    }

    // stage 4
    let timeline = build_timeline(&res.skeleton, &signs, &res.timeline)
        .expect("resources were validated against one skeleton");

    TranslationResult {
        normalized,
        tokens: split.tokens,
        stripped: split.stripped,
        tagged,
        retained,
        roots,
        glosses,
        timeline,
        warnings,
    }
}
