#![no_main]

use elongated::verifier::SuiteConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = SuiteConfig::from_toml_str(text) {
        let again = toml::to_string(&config).expect("config serializes");
        assert_eq!(SuiteConfig::from_toml_str(&again).expect("round trip"), config);
    }
});
