//! Replays the checked-in fuzz seeds through the fuzz targets' assertions.

use std::fs;
use std::path::Path;

use elongated::eta::{cusp_orders, newman_modularity_check, rational};
use elongated::verifier::SuiteConfig;
use elongated::{EtaQuotientSpec, TruncatedSeries, XPolynomial};

fn seeds(target: &str) -> Vec<String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn eta_spec_seeds() {
    for text in seeds("eta_spec") {
        let spec: EtaQuotientSpec = text.parse().unwrap();
        assert_eq!(spec.to_string().parse::<EtaQuotientSpec>().unwrap(), spec);
        if newman_modularity_check(&spec).is_pass() {
            assert_eq!(cusp_orders(&spec).unwrap().total(), rational(0));
        }
    }
}

#[test]
fn series_text_seeds() {
    for text in seeds("series_text") {
        let s = TruncatedSeries::from_text(&text).unwrap_or_else(|e| panic!("{text:?}: {e}"));
        assert_eq!(TruncatedSeries::from_text(&s.to_text()).unwrap(), s);
    }
}

#[test]
fn xpoly_text_seeds() {
    for text in seeds("xpoly_text") {
        let p = XPolynomial::from_golden_text(&text).unwrap();
        assert_eq!(XPolynomial::from_golden_text(&p.to_golden_text()).unwrap(), p);
    }
}

#[test]
fn suite_config_seeds() {
    for text in seeds("suite_config") {
        let c = SuiteConfig::from_toml_str(&text).unwrap_or_else(|e| panic!("{text:?}: {e}"));
        let again = toml::to_string(&c).unwrap();
        assert_eq!(SuiteConfig::from_toml_str(&again).unwrap(), c);
    }
}
