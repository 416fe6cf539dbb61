#![no_main]

use libfuzzer_sys::fuzz_target;
use purecubic::ingest::{parse_fixture, TableRow};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(row) = TableRow::parse_line(s) {
        assert_eq!(TableRow::parse_line(&row.to_json_line()).unwrap(), row);
    }
    let _ = parse_fixture(s);
});
