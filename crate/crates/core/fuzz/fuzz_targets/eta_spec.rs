#![no_main]

use elongated::eta::{cusp_orders, newman_modularity_check, rational};
use elongated::EtaQuotientSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = text.parse::<EtaQuotientSpec>() else {
        return;
    };
    let again: EtaQuotientSpec = spec.to_string().parse().expect("display output parses");
    assert_eq!(again, spec);
    if newman_modularity_check(&spec).is_pass() && spec.level() <= 1 << 16 {
        let orders = cusp_orders(&spec).expect("newman passed");
        assert_eq!(orders.total(), rational(0));
    }
});

