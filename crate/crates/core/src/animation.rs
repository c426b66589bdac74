//! Timeline compilation and sampling.
//!
//! Sign clips are laid end to end with a fixed transition gap. Within a clip
//! poses are blended between bracketing keyframes; inside a gap the last pose
//! of one clip is blended into the first pose of the next.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::SignEntry;
use crate::pose::{Keyframe, Pose, Quat, Skeleton, UNIT_TOLERANCE};

pub const TIMELINE_FORMAT: &str = "mal2sign-timeline/1";

/// Below this arc angle (radians) slerp falls back to normalized lerp.
const SLERP_LINEAR_THRESHOLD: f64 = 1e-5;
/// Slack allowed when checking re-parsed layout arithmetic.
const LAYOUT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnimationError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("sign `{gloss}` uses skeleton `{found}`, timeline uses `{expected}`")]
    SkeletonMismatch {
        gloss: String,
        expected: String,
        found: String,
    },
    #[error("invalid timeline config: {0}")]
    InvalidConfig(String),
    #[error("malformed timeline document: {0}")]
    MalformedDocument(String),
    #[error("timeline invariant violated: {0}")]
    InvariantViolation(String),
}

fn check_unit(q: Quat, what: &str) -> Result<(), AnimationError> {
    if q.is_finite() && q.is_unit() {
        Ok(())
    } else {
        Err(AnimationError::Domain(format!("{what} has norm {}", q.norm())))
    }
}

fn check_t(t: f64) -> Result<(), AnimationError> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(AnimationError::Domain(format!("blend parameter {t} outside [0, 1]")))
    }
}

/// Shortest-arc spherical interpolation between unit quaternions.
pub fn slerp(a: Quat, b: Quat, t: f64) -> Result<Quat, AnimationError> {
    check_unit(a, "start quaternion")?;
    check_unit(b, "end quaternion")?;
    check_t(t)?;
    Ok(slerp_unchecked(a, b, t))
}

fn slerp_unchecked(a: Quat, b: Quat, t: f64) -> Quat {
    if t <= 0.0 {
        return a;
    }
    if t >= 1.0 {
        return b;
    }
    let mut cos = a.dot(b);
    let mut b = b;
    if cos < 0.0 {
        cos = -cos;
        b = -b;
    }
    let theta = (a - b).norm().atan2((a + b).norm()) * 2.0;
    let out = if theta < SLERP_LINEAR_THRESHOLD || cos >= 1.0 {
        a * (1.0 - t) + b * t
    } else {
        let sin = theta.sin();
        a * (((1.0 - t) * theta).sin() / sin) + b * ((t * theta).sin() / sin)
    };
    out.normalized()
}

/// Blends two poses: slerp per joint, linear facial weights, handshapes
/// switch from `a` to `b` at t = 0.5.
pub fn blend_pose(a: &Pose, b: &Pose, t: f64) -> Result<Pose, AnimationError> {
    check_t(t)?;
    if a.rotations.len() != b.rotations.len() {
        return Err(AnimationError::Domain(format!(
            "poses have {} and {} joints",
            a.rotations.len(),
            b.rotations.len()
        )));
    }
    for (qa, qb) in a.rotations.iter().zip(&b.rotations) {
        check_unit(*qa, "start pose rotation")?;
        check_unit(*qb, "end pose rotation")?;
    }
    Ok(blend_unchecked(a, b, t))
}

fn blend_unchecked(a: &Pose, b: &Pose, t: f64) -> Pose {
    if t <= 0.0 {
        return a.clone();
    }
    if t >= 1.0 {
        return b.clone();
    }
    let late = t >= 0.5;
    Pose {
        rotations: a
            .rotations
            .iter()
            .zip(&b.rotations)
            .map(|(&qa, &qb)| slerp_unchecked(qa, qb, t))
            .collect(),
        handshape_l: if late { b.handshape_l } else { a.handshape_l },
        handshape_r: if late { b.handshape_r } else { a.handshape_r },
        facial: a.facial.lerp(b.facial, t),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimelineConfig {
    /// When set, every clip is time-scaled to this length.
    #[serde(default)]
    pub default_sign_duration: Option<f64>,
    #[serde(default = "default_transition")]
    pub transition: f64,
    #[serde(default = "default_frame_rate")]
    pub frame_rate: f64,
}

fn default_transition() -> f64 {
    0.3
}

fn default_frame_rate() -> f64 {
    30.0
}

impl Default for TimelineConfig {
    fn default() -> Self {
        TimelineConfig {
            default_sign_duration: None,
            transition: default_transition(),
            frame_rate: default_frame_rate(),
        }
    }
}

impl TimelineConfig {
    pub fn validate(&self) -> Result<(), AnimationError> {
        if !(self.transition.is_finite() && self.transition >= 0.0) {
            return Err(AnimationError::InvalidConfig(format!(
                "transition must be >= 0, got {}",
                self.transition
            )));
        }
        if !(self.frame_rate.is_finite() && self.frame_rate > 0.0) {
            return Err(AnimationError::InvalidConfig(format!(
                "frame_rate must be > 0, got {}",
                self.frame_rate
            )));
        }
        if let Some(d) = self.default_sign_duration {
            if !(d.is_finite() && d > 0.0) {
                return Err(AnimationError::InvalidConfig(format!(
                    "default_sign_duration must be > 0, got {d}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignMarker {
    pub gloss: String,
    pub start: f64,
    pub end: f64,
}

/// A sign clip placed on the global timeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clip {
    pub marker: SignMarker,
    pub keyframes: Vec<Keyframe>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Timeline {
    pub skeleton: Skeleton,
    pub config: TimelineConfig,
    pub clips: Vec<Clip>,
    pub duration: f64,
}

impl Timeline {
    pub fn markers(&self) -> impl Iterator<Item = &SignMarker> {
        self.clips.iter().map(|c| &c.marker)
    }

    /// Clip and transition boundary times.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for c in &self.clips {
            out.push(c.marker.start);
            out.extend(c.keyframes.iter().map(|k| k.time));
            out.push(c.marker.end);
        }
        out.dedup();
        out
    }

    /// Pose at time `t` (seconds); clamps outside `[0, duration]`.
    pub fn sample(&self, t: f64) -> Pose {
        sample(self, t)
    }
}

/// Lays signs out back to back with `cfg.transition` seconds between them.
pub fn build_timeline(
    skeleton: &Skeleton,
    signs: &[&SignEntry],
    cfg: &TimelineConfig,
) -> Result<Timeline, AnimationError> {
    cfg.validate()?;
    let mut clips = Vec::with_capacity(signs.len());
    let mut cursor = 0.0;
    for (i, sign) in signs.iter().enumerate() {
        if sign.skeleton != skeleton.id {
            return Err(AnimationError::SkeletonMismatch {
                gloss: sign.gloss.clone(),
                expected: skeleton.id.clone(),
                found: sign.skeleton.clone(),
            });
        }
        let native = sign.duration();
        let scale = match cfg.default_sign_duration {
            Some(d) if native > 0.0 => d / native,
            _ => 1.0,
        };
        if i > 0 {
            cursor += cfg.transition;
        }
        let start = cursor;
        let keyframes: Vec<Keyframe> = sign
            .keyframes
            .iter()
            .map(|k| Keyframe {
                time: start + k.time * scale,
                pose: k.pose.clone(),
            })
            .collect();
        let end = keyframes.last().map_or(start, |k| k.time);
        clips.push(Clip {
            marker: SignMarker {
                gloss: sign.gloss.clone(),
                start,
                end,
            },
            keyframes,
        });
        cursor = end;
    }
    Ok(Timeline {
        skeleton: skeleton.clone(),
        config: *cfg,
        clips,
        duration: cursor,
    })
}

pub fn sample(tl: &Timeline, t: f64) -> Pose {
    let (Some(first), Some(last)) = (tl.clips.first(), tl.clips.last()) else {
        return tl.skeleton.rest_pose();
    };
    if t.is_nan() || t <= first.marker.start {
        return first.keyframes[0].pose.clone();
    }
    if t >= last.marker.end {
        return last.keyframes[last.keyframes.len() - 1].pose.clone();
    }
    // first clip whose end is at or after t
    let i = tl.clips.partition_point(|c| c.marker.end < t);
    let clip = &tl.clips[i];
    if t < clip.marker.start {
        let prev = &tl.clips[i - 1];
        let from = &prev.keyframes[prev.keyframes.len() - 1].pose;
        let to = &clip.keyframes[0].pose;
        let gap = clip.marker.start - prev.marker.end;
        let u = ((t - prev.marker.end) / gap).clamp(0.0, 1.0);
        return blend_unchecked(from, to, u);
    }
    sample_clip(&clip.keyframes, t)
}

fn sample_clip(keyframes: &[Keyframe], t: f64) -> Pose {
    let k = keyframes.partition_point(|k| k.time <= t);
    if k == 0 {
        return keyframes[0].pose.clone();
    }
    let a = &keyframes[k - 1];
    if a.time == t || k == keyframes.len() {
        return a.pose.clone();
    }
    let b = &keyframes[k];
    let u = ((t - a.time) / (b.time - a.time)).clamp(0.0, 1.0);
    blend_unchecked(&a.pose, &b.pose, u)
}

// ---- document format ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TimelineDocument {
    format: String,
    skeleton: String,
    joints: Vec<String>,
    config: TimelineConfig,
    duration: f64,
    clips: Vec<Clip>,
}

/// Canonical JSON: fixed field order, shortest round-trip float formatting.
pub fn serialize_timeline(tl: &Timeline) -> String {
    serde_json::to_string(&timeline_document(tl)).expect("timeline serializes")
}

pub(crate) fn timeline_value(tl: &Timeline) -> serde_json::Value {
    serde_json::to_value(timeline_document(tl)).expect("timeline serializes")
}

fn timeline_document(tl: &Timeline) -> TimelineDocument {
    TimelineDocument {
        format: TIMELINE_FORMAT.to_string(),
        skeleton: tl.skeleton.id.clone(),
        joints: tl.skeleton.joints.clone(),
        config: tl.config,
        duration: tl.duration,
        clips: tl.clips.clone(),
    }
}

pub fn parse_timeline(document: &str) -> Result<Timeline, AnimationError> {
    let doc: TimelineDocument = serde_json::from_str(document)
        .map_err(|e| AnimationError::MalformedDocument(e.to_string()))?;
    timeline_from_document(doc)
}

pub(crate) fn timeline_from_value(value: serde_json::Value) -> Result<Timeline, AnimationError> {
    let doc: TimelineDocument = serde_json::from_value(value)
        .map_err(|e| AnimationError::MalformedDocument(e.to_string()))?;
    timeline_from_document(doc)
}

fn timeline_from_document(doc: TimelineDocument) -> Result<Timeline, AnimationError> {
    let bad = |msg: String| Err(AnimationError::InvariantViolation(msg));
    if doc.format != TIMELINE_FORMAT {
        return Err(AnimationError::MalformedDocument(format!(
            "unsupported format `{}`",
            doc.format
        )));
    }
    doc.config
        .validate()
        .map_err(|e| AnimationError::InvariantViolation(e.to_string()))?;
    let joints = doc.joints.len();
    let mut expected_start = 0.0;
    let mut total = 0.0;
    for (i, clip) in doc.clips.iter().enumerate() {
        let m = &clip.marker;
        if !(m.start.is_finite() && m.end.is_finite() && m.start < m.end) {
            return bad(format!("clip {i}: marker span [{}, {}] is empty", m.start, m.end));
        }
        if i > 0 {
            expected_start += doc.config.transition;
        }
        if (m.start - expected_start).abs() > LAYOUT_TOLERANCE {
            return bad(format!(
                "clip {i}: starts at {} but layout requires {expected_start}",
                m.start
            ));
        }
        if clip.keyframes.len() < 2 {
            return bad(format!("clip {i}: fewer than 2 keyframes"));
        }
        let first = clip.keyframes[0].time;
        let last = clip.keyframes[clip.keyframes.len() - 1].time;
        if (first - m.start).abs() > LAYOUT_TOLERANCE || (last - m.end).abs() > LAYOUT_TOLERANCE {
            return bad(format!("clip {i}: keyframes do not span its marker"));
        }
        for (k, pair) in clip.keyframes.windows(2).enumerate() {
            if pair[1].time.is_nan() || pair[1].time <= pair[0].time {
                return bad(format!("clip {i}: keyframe {} time does not increase", k + 1));
            }
        }
        for (k, kf) in clip.keyframes.iter().enumerate() {
            if kf.pose.rotations.len() != joints {
                return bad(format!("clip {i} keyframe {k}: wrong joint count"));
            }
            if kf.pose.rotations.iter().any(|q| !q.is_finite() || !q.is_unit()) {
                return bad(format!(
                    "clip {i} keyframe {k}: rotation norm off by more than {UNIT_TOLERANCE}"
                ));
            }
            if kf.pose.facial.weights().iter().any(|w| !(0.0..=1.0).contains(w)) {
                return bad(format!("clip {i} keyframe {k}: facial weight outside [0, 1]"));
            }
        }
        total += m.end - m.start;
        expected_start = m.end;
    }
    let expected = doc.clips.last().map_or(0.0, |c| c.marker.end);
    if (doc.duration - expected).abs() > LAYOUT_TOLERANCE {
        return bad(format!(
            "duration {} does not match layout ({expected}, clips total {total})",
            doc.duration
        ));
    }
    Ok(Timeline {
        skeleton: Skeleton {
            id: doc.skeleton,
            joints: doc.joints,
        },
        config: doc.config,
        clips: doc.clips,
        duration: doc.duration,
    })
}
