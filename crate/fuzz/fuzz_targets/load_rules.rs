#![no_main]

use libfuzzer_sys::fuzz_target;
use mal2sign_core::{analyze, load_rules, stem, Token};

fuzz_target!(|doc: &str| {
    if let Ok(rules) = load_rules(doc) {
        // every accepted table must analyze and stem its own suffixes
        for r in rules.rules() {
            let word = format!("ക{}", r.suffix);
            let tt = analyze(&Token::new(word.as_str()), &rules);
            assert!(!stem(&tt, &rules).as_str().is_empty());
        }
    }
});
