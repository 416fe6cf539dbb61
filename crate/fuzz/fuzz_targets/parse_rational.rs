#![no_main]

use libfuzzer_sys::fuzz_target;
use purecubic::exactmath::{parse_integer, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(s) {
        // reduced form reparses to the same value
        let text = if q.is_integer() { q.numer().to_string() } else { format!("{}/{}", q.numer(), q.denom()) };
        assert_eq!(parse_rational(&text).unwrap(), q);
    }
    if let Ok(n) = parse_integer(s) {
        assert_eq!(parse_integer(&n.to_string()).unwrap(), n);
    }
});
