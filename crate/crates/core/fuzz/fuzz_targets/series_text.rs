#![no_main]

use elongated::TruncatedSeries;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = TruncatedSeries::from_text(text) {
        let back = TruncatedSeries::from_text(&s.to_text()).expect("own output parses");
        assert_eq!(back, s);
    }
});
