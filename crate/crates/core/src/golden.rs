//! Published identities shipped as golden data.
//!
//! Layout of a golden directory:
//!
//! ```text
//! l1.txt                 L_1 as a polynomial in x
//! ux0.txt .. ux3.txt     U(x^n) for n = 0..3
//! modeq_a0.txt .. a3.txt the coefficient polynomials of the modular equation
//! ```
//!
//! Each file holds `r coefficient` lines (see [`XPolynomial::from_golden_text`]).
//! The copies under `golden/` in this crate are compiled in as defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::elongated::ModularEquationData;
use crate::error::{Error, Result};
use crate::xpoly::XPolynomial;

pub const GOLDEN_NAMES: [&str; 9] = [
    "l1", "ux0", "ux1", "ux2", "ux3", "modeq_a0", "modeq_a1", "modeq_a2", "modeq_a3",
];

/// Environment variable that points the CLI at another golden directory.
pub const GOLDEN_DIR_ENV: &str = "ELONGATED_GOLDEN_DIR";

const EMBEDDED: [(&str, &str); 9] = [
    ("l1", include_str!("../golden/l1.txt")),
    ("ux0", include_str!("../golden/ux0.txt")),
    ("ux1", include_str!("../golden/ux1.txt")),
    ("ux2", include_str!("../golden/ux2.txt")),
    ("ux3", include_str!("../golden/ux3.txt")),
    ("modeq_a0", include_str!("../golden/modeq_a0.txt")),
    ("modeq_a1", include_str!("../golden/modeq_a1.txt")),
    ("modeq_a2", include_str!("../golden/modeq_a2.txt")),
    ("modeq_a3", include_str!("../golden/modeq_a3.txt")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenSet {
    entries: BTreeMap<String, XPolynomial>,
}

impl GoldenSet {
    pub fn embedded() -> Self {
        let entries = EMBEDDED
            .iter()
            .map(|(name, text)| {
                let p = XPolynomial::from_golden_text(text).expect("embedded golden data parses");
                (name.to_string(), p)
            })
            .collect();
        GoldenSet { entries }
    }

    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for name in GOLDEN_NAMES {
            let path = dir.join(format!("{name}.txt"));
            let text = fs::read_to_string(&path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?;
            let p = XPolynomial::from_golden_text(&text).map_err(|e| Error::Io {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?;
            entries.insert(name.to_string(), p);
        }
        Ok(GoldenSet { entries })
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.display().to_string(),
            msg: e.to_string(),
        })?;
        for (name, p) in &self.entries {
            let path = dir.join(format!("{name}.txt"));
            fs::write(&path, p.to_golden_text()).map_err(|e| Error::Io {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&XPolynomial> {
        self.entries.get(name)
    }

    pub fn set(&mut self, name: &str, p: XPolynomial) {
        self.entries.insert(name.to_string(), p);
    }

    pub fn l1(&self) -> &XPolynomial {
        &self.entries["l1"]
    }

    pub fn ux(&self, n: usize) -> &XPolynomial {
        &self.entries[&format!("ux{n}")]
    }

    pub fn ux_base(&self) -> [XPolynomial; 4] {
        std::array::from_fn(|n| self.ux(n).clone())
    }

    pub fn modular_equation(&self) -> ModularEquationData {
        ModularEquationData::new(std::array::from_fn(|j| {
            self.entries[&format!("modeq_a{j}")].clone()
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn embedded_shapes() {
        let g = GoldenSet::embedded();
        assert_eq!(g.l1().len(), 18);
        assert_eq!(g.l1().coeff(1), BigInt::from(2376));
        for (n, deg) in [20, 24, 28, 32].into_iter().enumerate() {
            assert_eq!(g.ux(n).degree(), Some(deg));
            assert_eq!(g.ux(n).low_degree(), Some(1));
        }
        assert_eq!(g.ux(3).coeff(32), BigInt::from(1) << 128);
        assert_eq!(g.modular_equation().coefficient(0, 2), BigInt::from(-20));
    }

    #[test]
    fn directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = GoldenSet::embedded();
        g.write_dir(dir.path()).unwrap();
        assert_eq!(GoldenSet::load_dir(dir.path()).unwrap(), g);
        fs::remove_file(dir.path().join("ux2.txt")).unwrap();
        assert!(matches!(GoldenSet::load_dir(dir.path()), Err(Error::Io { .. })));
    }
}
