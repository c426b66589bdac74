#![no_main]

use libfuzzer_sys::fuzz_target;
use mal2sign_core::TranslationResult;

fuzz_target!(|doc: &str| {
    if let Ok(r) = TranslationResult::from_document(doc) {
        let out = r.to_document();
        let again = TranslationResult::from_document(&out).expect("serialized result reparses");
        assert_eq!(again, r);
    }
});
