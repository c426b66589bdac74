#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use mal2sign_core::{parse_timeline, serialize_timeline, translate, PipelineResources};

static RES: OnceLock<PipelineResources> = OnceLock::new();

fuzz_target!(|text: &str| {
    let res = RES.get_or_init(PipelineResources::demo);
    let r = translate(text, res);
    assert_eq!(r.roots.len(), r.retained.len());
    let doc = serialize_timeline(&r.timeline);
    assert_eq!(parse_timeline(&doc).expect("timeline reparses"), r.timeline);
});
