#![no_main]

use libfuzzer_sys::fuzz_target;
use purecubic::ingest::parse_point;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_point(s) {
        assert_eq!(parse_point(&p.to_string()).unwrap(), p);
    }
});
