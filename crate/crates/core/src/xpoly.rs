//! Integer polynomials in the Hauptmodul `x`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sparse `sum_r c_r x^r` with no stored zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct XPolynomial {
    coeffs: BTreeMap<u32, BigInt>,
}

impl XPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(r: u32) -> Self {
        let mut p = Self::new();
        p.add_term(r, &BigInt::one());
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::new();
        for (r, c) in terms {
            p.add_term(r, &c.into());
        }
        p
    }

    pub fn add_term(&mut self, r: u32, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(r).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&r);
        }
    }

    pub fn coeff(&self, r: u32) -> BigInt {
        self.coeffs.get(&r).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().map(|(&r, c)| (r, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest exponent in the support.
    pub fn low_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (r, c) in other.terms() {
            out.add_term(r, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        XPolynomial {
            coeffs: self.coeffs.iter().map(|(&r, c)| (r, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        XPolynomial {
            coeffs: self.coeffs.iter().map(|(&r, x)| (r, x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (r, a) in self.terms() {
            for (s, b) in other.terms() {
                out.add_term(r + s, &(a * b));
            }
        }
        out
    }

    /// Divides every coefficient by `d`, failing at the first exponent where
    /// the division leaves a remainder.
    pub fn exact_div(&self, d: &BigInt) -> std::result::Result<Self, u32> {
        let mut coeffs = BTreeMap::new();
        for (r, c) in self.terms() {
            let (q, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return Err(r);
            }
            coeffs.insert(r, q);
        }
        Ok(XPolynomial { coeffs })
    }

    /// Golden-file text: one `r coefficient` line per nonzero term, in
    /// increasing `r`.
    pub fn to_golden_text(&self) -> String {
        self.terms().map(|(r, c)| format!("{r} {c}\n")).collect()
    }

    /// Parses golden-file text. Blank lines and `#` comments are skipped,
    /// zero coefficients are dropped, a repeated exponent is an error.
    pub fn from_golden_text(text: &str) -> Result<Self> {
        let mut p = Self::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(r), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(i + 1, "expected `r coefficient`"));
            };
            let r: u32 = r
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad exponent `{r}`")))?;
            let c: BigInt = c
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad coefficient `{c}`")))?;
            if !seen.insert(r) {
                return Err(Error::parse(i + 1, format!("exponent {r} repeated")));
            }
            p.add_term(r, &c);
        }
        Ok(p)
    }
}

impl fmt::Display for XPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (r, c)) in self.terms().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            match r {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag} x")?,
                _ => write!(f, "{mag} x^{r}")?,
            }
        }
        Ok(())
    }
}

/// 2-adic valuation; `None` for zero.
pub fn v2(c: &BigInt) -> Option<u64> {
    c.trailing_zeros()
}
