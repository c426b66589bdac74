#![no_main]

use libfuzzer_sys::fuzz_target;
use mal2sign_core::lexicon::serialize_lexicon;
use mal2sign_core::{load_lexicon, Skeleton};

fuzz_target!(|doc: &str| {
    let skeleton = Skeleton::standard();
    if let Ok(lex) = load_lexicon(doc, &skeleton) {
        let out = serialize_lexicon(&lex, &skeleton);
        let again = load_lexicon(&out, &skeleton).expect("serialized lexicon reloads");
        assert_eq!(serialize_lexicon(&again, &skeleton), out);
    }
});
