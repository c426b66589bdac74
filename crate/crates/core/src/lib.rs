//! Rule-based Malayalam text to sign-language animation.
//!
//! The pipeline runs in a fixed order:
//!
//! 1. [`script`] normalizes and tokenizes the input,
//! 2. [`morphology::analyze`] tags each word from a suffix-rule table,
//! 3. [`optimizer::optimize`] drops words that signing omits,
//! 4. [`morphology::stem`] reduces the survivors to roots,
//! 5. [`lexicon`] maps roots to sign clips (fingerspelling unknown words),
//! 6. [`animation`] lays the clips out on one blended keyframe timeline.
//!
//! [`pipeline::translate`] runs all of it.
//!
//! ```
//! use mal2sign_core::{translate, PipelineResources};
//!
//! let res = PipelineResources::demo();
//! let result = translate("ഞാൻ ഒരു കുട്ടി ആണ്", &res);
//! assert_eq!(result.gloss_ids(), ["I", "CHILD"]);
//! ```

pub mod animation;
pub mod lexicon;
pub mod morphology;
pub mod optimizer;
pub mod pipeline;
pub mod pose;
pub mod script;

pub use animation::{
    blend_pose, build_timeline, parse_timeline, sample, serialize_timeline, slerp, AnimationError,
    SignMarker, Timeline, TimelineConfig,
};
pub use lexicon::{
    fingerspell, load_lexicon, lookup, serialize_lexicon, validate_entry, Lexicon, LexiconError,
    SignEntry, Violation, ViolationKind,
};
pub use morphology::{analyze, load_rules, stem, Match, PosTag, Root, RuleError, RuleTable, TaggedToken};
pub use optimizer::{optimize, DropPolicy};
pub use pipeline::{
    translate, GlossItem, GlossSource, PipelineResources, ResourceError, ResourcePaths,
    TranslationResult, Warning,
};
pub use pose::{Facial, Handshape, Keyframe, Pose, Quat, Skeleton};
pub use script::{normalize_text, segment_clusters, tokenize, GraphemeCluster, NormalizedText, Token};
