//! Skeleton, quaternions and the per-frame pose model.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Allowed deviation of a rotation quaternion's norm from 1.
pub const UNIT_TOLERANCE: f64 = 1e-6;

pub const STANDARD_SKELETON_ID: &str = "mal2sign-skeleton-11/1";

pub const STANDARD_JOINTS: [&str; 11] = [
    "root",
    "spine",
    "chest",
    "neck",
    "head",
    "shoulder.L",
    "elbow.L",
    "wrist.L",
    "shoulder.R",
    "elbow.R",
    "wrist.R",
];

/// Named joints in a fixed order. The order is part of every file format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skeleton {
    pub id: String,
    pub joints: Vec<String>,
}

impl Skeleton {
    pub fn standard() -> Self {
        Skeleton {
            id: STANDARD_SKELETON_ID.to_string(),
            joints: STANDARD_JOINTS.iter().map(|j| j.to_string()).collect(),
        }
    }

    /// The standard joint set under a different id.
    pub fn with_id(id: impl Into<String>) -> Self {
        Skeleton {
            id: id.into(),
            ..Skeleton::standard()
        }
    }

    pub fn joint_index(&self, name: &str) -> Option<usize> {
        self.joints.iter().position(|j| j == name)
    }

    pub fn len(&self) -> usize {
        self.joints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.joints.is_empty()
    }

    pub fn rest_pose(&self) -> Pose {
        Pose::rest(self.len())
    }
}

/// A quaternion stored as (w, x, y, z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quat {
    fn from([w, x, y, z]: [f64; 4]) -> Self {
        Quat { w, x, y, z }
    }
}

impl From<Quat> for [f64; 4] {
    fn from(q: Quat) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl Quat {
    pub const IDENTITY: Quat = Quat {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat { w, x, y, z }
    }

    /// Rotation of `angle` radians about the (normalized) axis.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let (s, c) = (angle / 2.0).sin_cos();
        let k = if len > 0.0 { s / len } else { 0.0 };
        Quat::new(c, axis[0] * k, axis[1] * k, axis[2] * k)
    }

    pub fn dot(self, other: Quat) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Quat {
        self * (1.0 / self.norm())
    }

    pub fn is_unit(self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOLERANCE
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Flips sign so that w >= 0; the rotation is unchanged.
    pub fn canonical(self) -> Quat {
        if self.w < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Rotation angle (radians) taking one orientation to the other,
    /// sign- and scale-insensitive.
    pub fn angle_to(self, other: Quat) -> f64 {
        let (a, b) = (self.normalized(), other.normalized());
        let b = if a.dot(b) < 0.0 { -b } else { b };
        4.0 * (a - b).norm().atan2((a + b).norm())
    }

    /// Rotates a vector by this (unit) quaternion.
    pub fn rotate(self, v: [f64; 3]) -> [f64; 3] {
        let p = Quat::new(0.0, v[0], v[1], v[2]);
        let r = self.hamilton(p).hamilton(self.conjugate());
        [r.x, r.y, r.z]
    }

    pub fn conjugate(self) -> Quat {
        Quat::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn hamilton(self, o: Quat) -> Quat {
        Quat::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        Quat::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Quat {
    type Output = Quat;
    fn mul(self, k: f64) -> Quat {
        Quat::new(self.w * k, self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-self.w, -self.x, -self.y, -self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handshape {
    Flat,
    Fist,
    Point,
    Spread,
    Pinch,
    #[default]
    Neutral,
}

impl Handshape {
    pub const ALL: [Handshape; 6] = [
        Handshape::Flat,
        Handshape::Fist,
        Handshape::Point,
        Handshape::Spread,
        Handshape::Pinch,
        Handshape::Neutral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Handshape::Flat => "flat",
            Handshape::Fist => "fist",
            Handshape::Point => "point",
            Handshape::Spread => "spread",
            Handshape::Pinch => "pinch",
            Handshape::Neutral => "neutral",
        }
    }
}

impl fmt::Display for Handshape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Handshape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Handshape::ALL
            .into_iter()
            .find(|h| h.as_str() == s)
            .ok_or_else(|| format!("unknown handshape `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Facial {
    pub brow_raise: f64,
    pub mouth_open: f64,
    pub smile: f64,
}

impl Facial {
    pub const CHANNELS: [&'static str; 3] = ["brow_raise", "mouth_open", "smile"];

    pub fn weights(&self) -> [f64; 3] {
        [self.brow_raise, self.mouth_open, self.smile]
    }

    pub fn lerp(self, other: Facial, t: f64) -> Facial {
        let mix = |a: f64, b: f64| a + (b - a) * t;
        Facial {
            brow_raise: mix(self.brow_raise, other.brow_raise),
            mouth_open: mix(self.mouth_open, other.mouth_open),
            smile: mix(self.smile, other.smile),
        }
    }
}

/// One full-body pose: joint rotations in skeleton order plus the hand and
/// face channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub rotations: Vec<Quat>,
    pub handshape_l: Handshape,
    pub handshape_r: Handshape,
    pub facial: Facial,
}

impl Pose {
    pub fn rest(joints: usize) -> Self {
        Pose {
            rotations: vec![Quat::IDENTITY; joints],
            handshape_l: Handshape::Neutral,
            handshape_r: Handshape::Neutral,
            facial: Facial::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Keyframe {
    pub time: f64,
    pub pose: Pose,
}
