//! Gloss lexicon: root words to keyframe clips, plus the fingerspelling
//! alphabet used for out-of-vocabulary words.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::morphology::Root;
use crate::pose::{Facial, Handshape, Keyframe, Pose, Quat, Skeleton};
use crate::script::{is_malayalam, Token, VIRAMA};

pub const LEXICON_FORMAT: &str = "mal2sign-lexicon/1";
pub const FS_UNKNOWN: &str = "FS_UNKNOWN";

/// Fingerspelling gloss id for a code point, e.g. `FS_0D15`.
pub fn fingerspell_gloss(c: char) -> String {
    format!("FS_{:04X}", c as u32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignEntry {
    pub gloss: String,
    pub roots: Vec<String>,
    pub keyframes: Vec<Keyframe>,
    /// Id of the skeleton the keyframes were authored against.
    pub skeleton: String,
}

impl SignEntry {
    /// Time of the last keyframe.
    pub fn duration(&self) -> f64 {
        self.keyframes.last().map_or(0.0, |k| k.time)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    UnknownJoint(String),
    MissingJoint(String),
    JointCount { expected: usize, found: usize },
    TooFewKeyframes(usize),
    FirstTimeNotZero(f64),
    NonFiniteTime,
    NonIncreasingTime,
    NormViolation { joint: String, norm: f64 },
    FacialOutOfRange { channel: &'static str, value: f64 },
    InvalidGloss,
    InvalidFingerspellGloss,
    EmptyRoot,
    DuplicateGloss,
    DuplicateRoot(String),
    SkeletonMismatch { expected: String, found: String },
}

/// One problem found while validating a lexicon entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub gloss: String,
    pub keyframe: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gloss)?;
        if let Some(i) = self.keyframe {
            write!(f, " keyframe {i}")?;
        }
        f.write_str(": ")?;
        match &self.kind {
            ViolationKind::UnknownJoint(j) => write!(f, "unknown joint `{j}`"),
            ViolationKind::MissingJoint(j) => write!(f, "missing joint `{j}`"),
            ViolationKind::JointCount { expected, found } => {
                write!(f, "expected {expected} joint rotations, found {found}")
            }
            ViolationKind::TooFewKeyframes(n) => write!(f, "needs at least 2 keyframes, has {n}"),
            ViolationKind::FirstTimeNotZero(t) => write!(f, "first keyframe at {t}, expected 0"),
            ViolationKind::NonFiniteTime => f.write_str("time is not a finite non-negative number"),
            ViolationKind::NonIncreasingTime => f.write_str("keyframe time does not increase"),
            ViolationKind::NormViolation { joint, norm } => {
                write!(f, "quaternion for `{joint}` has norm {norm}")
            }
            ViolationKind::FacialOutOfRange { channel, value } => {
                write!(f, "facial weight {channel} = {value} outside [0, 1]")
            }
            ViolationKind::InvalidGloss => f.write_str("gloss must be non-empty [A-Z0-9_]"),
            ViolationKind::InvalidFingerspellGloss => {
                f.write_str("FS_ gloss must name a Malayalam code point as 4 hex digits")
            }
            ViolationKind::EmptyRoot => f.write_str("empty root"),
            ViolationKind::DuplicateGloss => f.write_str("duplicate gloss"),
            ViolationKind::DuplicateRoot(r) => write!(f, "root `{r}` already mapped"),
            ViolationKind::SkeletonMismatch { expected, found } => {
                write!(f, "skeleton `{found}` does not match `{expected}`")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LexiconError {
    #[error("malformed lexicon document: {0}")]
    MalformedDocument(String),
    #[error("{} lexicon violation(s)", .0.len())]
    Invalid(Vec<Violation>),
}

/// Checks an entry against the skeleton. Returns every problem found.
pub fn validate_entry(entry: &SignEntry, skeleton: &Skeleton) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let mut push = |keyframe: Option<usize>, kind| {
        out.push(Violation {
            gloss: entry.gloss.clone(),
            keyframe,
            kind,
        })
    };

    if !is_valid_gloss(&entry.gloss) {
        push(None, ViolationKind::InvalidGloss);
    } else if entry.gloss.starts_with("FS_")
        && entry.gloss != FS_UNKNOWN
        && fingerspell_code_point(&entry.gloss).is_none()
    {
        push(None, ViolationKind::InvalidFingerspellGloss);
    }
    if entry.skeleton != skeleton.id {
        push(
            None,
            ViolationKind::SkeletonMismatch {
                expected: skeleton.id.clone(),
                found: entry.skeleton.clone(),
            },
        );
    }
    if entry.roots.iter().any(|r| r.is_empty()) {
        push(None, ViolationKind::EmptyRoot);
    }
    if entry.keyframes.len() < 2 {
        push(None, ViolationKind::TooFewKeyframes(entry.keyframes.len()));
    }

    let mut prev: Option<f64> = None;
    for (i, kf) in entry.keyframes.iter().enumerate() {
        if !kf.time.is_finite() || kf.time < 0.0 {
            push(Some(i), ViolationKind::NonFiniteTime);
        } else if i == 0 && kf.time != 0.0 {
            push(Some(i), ViolationKind::FirstTimeNotZero(kf.time));
        }
        if let Some(p) = prev {
            // NaN compares false and is reported above
            if kf.time <= p {
                push(Some(i), ViolationKind::NonIncreasingTime);
            }
        }
        prev = Some(kf.time);

        let rotations = &kf.pose.rotations;
        if rotations.len() != skeleton.len() {
            push(
                Some(i),
                ViolationKind::JointCount {
                    expected: skeleton.len(),
                    found: rotations.len(),
                },
            );
        }
        for (j, q) in rotations.iter().enumerate() {
            if !q.is_finite() || !q.is_unit() {
                let joint = skeleton
                    .joints
                    .get(j)
                    .cloned()
                    .unwrap_or_else(|| format!("#{j}"));
                push(Some(i), ViolationKind::NormViolation { joint, norm: q.norm() });
            }
        }
        for (channel, value) in Facial::CHANNELS.into_iter().zip(kf.pose.facial.weights()) {
            if !(0.0..=1.0).contains(&value) {
                push(Some(i), ViolationKind::FacialOutOfRange { channel, value });
            }
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn is_valid_gloss(gloss: &str) -> bool {
    !gloss.is_empty()
        && gloss
            .chars()
            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
}

/// The code point named by an `FS_XXXX` gloss, if it is a Malayalam one.
pub fn fingerspell_code_point(gloss: &str) -> Option<char> {
    let hex = gloss.strip_prefix("FS_")?;
    if hex.len() != 4 || !hex.chars().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_lowercase()) {
        return None;
    }
    let c = char::from_u32(u32::from_str_radix(hex, 16).ok()?)?;
    is_malayalam(c).then_some(c)
}

/// Validated sign inventory. Immutable once loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    skeleton: String,
    entries: BTreeMap<String, SignEntry>,
    root_index: HashMap<String, String>,
    fingerspell_entries: BTreeMap<char, String>,
}

impl Lexicon {
    /// Validates `entries` as a whole, reporting every violation.
    pub fn from_entries(entries: Vec<SignEntry>, skeleton: &Skeleton) -> Result<Self, LexiconError> {
        let mut violations = Vec::new();
        let mut by_gloss = BTreeMap::new();
        let mut root_index = HashMap::new();
        let mut fingerspell_entries = BTreeMap::new();

        for entry in entries {
            if let Err(v) = validate_entry(&entry, skeleton) {
                violations.extend(v);
            }
            if by_gloss.contains_key(&entry.gloss) {
                violations.push(Violation {
                    gloss: entry.gloss.clone(),
                    keyframe: None,
                    kind: ViolationKind::DuplicateGloss,
                });
                continue;
            }
            for root in &entry.roots {
                match root_index.get(root) {
                    Some(other) if other != &entry.gloss => violations.push(Violation {
                        gloss: entry.gloss.clone(),
                        keyframe: None,
                        kind: ViolationKind::DuplicateRoot(root.clone()),
                    }),
                    _ => {
                        root_index.insert(root.clone(), entry.gloss.clone());
                    }
                }
            }
            if let Some(c) = fingerspell_code_point(&entry.gloss) {
                fingerspell_entries.insert(c, entry.gloss.clone());
            }
            by_gloss.insert(entry.gloss.clone(), entry);
        }

        if violations.is_empty() {
            Ok(Lexicon {
                skeleton: skeleton.id.clone(),
                entries: by_gloss,
                root_index,
                fingerspell_entries,
            })
        } else {
            Err(LexiconError::Invalid(violations))
        }
    }

    pub fn skeleton_id(&self) -> &str {
        &self.skeleton
    }

    pub fn get(&self, gloss: &str) -> Option<&SignEntry> {
        self.entries.get(gloss)
    }

    /// Entries in gloss order.
    pub fn entries(&self) -> impl Iterator<Item = &SignEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn fingerspell_gloss_for(&self, c: char) -> Option<&str> {
        self.fingerspell_entries.get(&c).map(String::as_str)
    }

    /// Word signs only, i.e. entries reachable through a root.
    pub fn word_signs(&self) -> impl Iterator<Item = &SignEntry> {
        self.entries.values().filter(|e| !e.roots.is_empty())
    }
}

pub fn lookup<'a>(root: &Root, lex: &'a Lexicon) -> Option<&'a SignEntry> {
    lex.root_index.get(root.as_str()).and_then(|g| lex.entries.get(g))
}

/// One gloss per Malayalam code point of the token, skipping viramas.
pub fn fingerspell(token: &Token, lex: &Lexicon) -> Vec<String> {
    token
        .text
        .chars()
        .filter(|&c| is_malayalam(c) && c != VIRAMA)
        .map(|c| {
            lex.fingerspell_gloss_for(c)
                .unwrap_or(FS_UNKNOWN)
                .to_string()
        })
        .collect()
}

// ---- file format ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconDocument {
    format: String,
    skeleton: String,
    signs: Vec<SignDocument>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignDocument {
    gloss: String,
    #[serde(default)]
    roots: Vec<String>,
    keyframes: Vec<KeyframeDocument>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KeyframeDocument {
    time: f64,
    rotations: BTreeMap<String, Quat>,
    handshape: Hands,
    #[serde(default)]
    facial: Facial,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Hands {
    left: Handshape,
    right: Handshape,
}

/// Parses a JSON lexicon document and validates every entry against
/// `skeleton`. All violations are reported together.
pub fn load_lexicon(document: &str, skeleton: &Skeleton) -> Result<Lexicon, LexiconError> {
    let doc: LexiconDocument = serde_json::from_str(document)
        .map_err(|e| LexiconError::MalformedDocument(e.to_string()))?;
    if doc.format != LEXICON_FORMAT {
        return Err(LexiconError::MalformedDocument(format!(
            "unsupported format `{}`, expected `{LEXICON_FORMAT}`",
            doc.format
        )));
    }

    let mut violations = Vec::new();
    if doc.skeleton != skeleton.id {
        violations.push(Violation {
            gloss: "<lexicon>".to_string(),
            keyframe: None,
            kind: ViolationKind::SkeletonMismatch {
                expected: skeleton.id.clone(),
                found: doc.skeleton.clone(),
            },
        });
    }

    let mut entries = Vec::with_capacity(doc.signs.len());
    for sign in doc.signs {
        let mut keyframes = Vec::with_capacity(sign.keyframes.len());
        for (i, kf) in sign.keyframes.into_iter().enumerate() {
            let mut rotations = vec![None; skeleton.len()];
            for (name, q) in kf.rotations {
                match skeleton.joint_index(&name) {
                    Some(j) => rotations[j] = Some(q),
                    None => violations.push(Violation {
                        gloss: sign.gloss.clone(),
                        keyframe: Some(i),
                        kind: ViolationKind::UnknownJoint(name),
                    }),
                }
            }
            let rotations = rotations
                .into_iter()
                .zip(&skeleton.joints)
                .map(|(q, name)| {
                    q.unwrap_or_else(|| {
                        violations.push(Violation {
                            gloss: sign.gloss.clone(),
                            keyframe: Some(i),
                            kind: ViolationKind::MissingJoint(name.clone()),
                        });
                        Quat::IDENTITY
                    })
                })
                .collect();
            keyframes.push(Keyframe {
                time: kf.time,
                pose: Pose {
                    rotations,
                    handshape_l: kf.handshape.left,
                    handshape_r: kf.handshape.right,
                    facial: kf.facial,
                },
            });
        }
        entries.push(SignEntry {
            gloss: sign.gloss,
            roots: sign.roots.iter().map(|r| r.nfc().collect()).collect(),
            keyframes,
            skeleton: doc.skeleton.clone(),
        });
    }

    match Lexicon::from_entries(entries, skeleton) {
        Ok(lex) if violations.is_empty() => Ok(lex),
        Ok(_) => Err(LexiconError::Invalid(violations)),
        Err(LexiconError::Invalid(more)) => {
            violations.extend(more);
            Err(LexiconError::Invalid(violations))
        }
        Err(e) => Err(e),
    }
}

/// Writes the lexicon back out in the document format, entries in gloss order.
pub fn serialize_lexicon(lex: &Lexicon, skeleton: &Skeleton) -> String {
    let doc = LexiconDocument {
        format: LEXICON_FORMAT.to_string(),
        skeleton: lex.skeleton.clone(),
        signs: lex
            .entries()
            .map(|e| SignDocument {
                gloss: e.gloss.clone(),
                roots: e.roots.clone(),
                keyframes: e
                    .keyframes
                    .iter()
                    .map(|kf| KeyframeDocument {
                        time: kf.time,
                        rotations: skeleton
                            .joints
                            .iter()
                            .cloned()
                            .zip(kf.pose.rotations.iter().copied())
                            .collect(),
                        handshape: Hands {
                            left: kf.pose.handshape_l,
                            right: kf.pose.handshape_r,
                        },
                        facial: kf.pose.facial,
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("lexicon serializes")
}
