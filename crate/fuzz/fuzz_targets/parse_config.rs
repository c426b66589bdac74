#![no_main]

use libfuzzer_sys::fuzz_target;
use mal2sign_core::pipeline::{parse_config, DEMO_LEXICON, DEMO_RULES};
use mal2sign_core::PipelineResources;

fuzz_target!(|doc: &str| {
    if parse_config(doc).is_ok() {
        let _ = PipelineResources::from_documents(doc, DEMO_RULES, DEMO_LEXICON);
    }
});
