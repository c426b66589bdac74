#![no_main]

use libfuzzer_sys::fuzz_target;
use mal2sign_core::segment_clusters;

fuzz_target!(|text: &str| {
    let clusters = segment_clusters(text);
    let joined: String = clusters.iter().map(|c| c.text.as_str()).collect();
    assert_eq!(joined, text);
    let mut at = 0;
    for c in &clusters {
        assert_eq!(c.start, at);
        assert!(c.end > c.start);
        at = c.end;
    }
});
