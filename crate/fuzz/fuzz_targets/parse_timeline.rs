#![no_main]

use libfuzzer_sys::fuzz_target;
use mal2sign_core::{parse_timeline, serialize_timeline};

fuzz_target!(|doc: &str| {
    if let Ok(tl) = parse_timeline(doc) {
        let out = serialize_timeline(&tl);
        assert_eq!(parse_timeline(&out).expect("serialized timeline reparses"), tl);
        for i in 0..=8 {
            tl.sample(tl.duration * i as f64 / 8.0);
        }
    }
});
