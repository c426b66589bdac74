#![no_main]

use libfuzzer_sys::fuzz_target;
use mal2sign::server::parse_translate_request;

fuzz_target!(|body: &[u8]| {
    let _ = parse_translate_request(body);
});
