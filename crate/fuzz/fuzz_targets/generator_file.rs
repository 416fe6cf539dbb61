#![no_main]

use libfuzzer_sys::fuzz_target;
use purecubic::ingest::GeneratorFile;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(file) = GeneratorFile::parse(s) {
        assert_eq!(GeneratorFile::parse(&file.to_json()).unwrap(), file);
        // curve checks must fail cleanly, never panic
        let _ = file.quartic_points();
    }
});
