#![no_main]

use elongated::XPolynomial;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = XPolynomial::from_golden_text(text) {
        let back = XPolynomial::from_golden_text(&p.to_golden_text()).expect("own output parses");
        assert_eq!(back, p);
    }
});
