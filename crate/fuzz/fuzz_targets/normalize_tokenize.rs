#![no_main]

use libfuzzer_sys::fuzz_target;
use mal2sign_core::script::split_tokens;
use mal2sign_core::normalize_text;

fuzz_target!(|text: &str| {
    let nt = normalize_text(text);
    assert_eq!(normalize_text(&nt.content).content, nt.content);
    let split = split_tokens(&nt);
    let len = nt.content.chars().count();
    for t in &split.tokens {
        assert!(t.start < t.end && t.end <= len);
        assert_eq!(t.text.chars().count(), t.end - t.start);
    }
    for p in &split.stripped {
        assert!(p.offset < len);
    }
});
