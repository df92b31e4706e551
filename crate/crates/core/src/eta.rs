//! Eta quotients `q^s prod_{delta | N} (q^delta; q^delta)_inf^{r_delta}`.
//!
//! Besides expansion this module certifies modularity with Newman's
//! conditions and computes orders at the cusps of `Gamma_0(N)` with
//! Ligozat's formula
//!
//! ```text
//! ord_{a/c} = N/24 * sum_delta gcd(c, delta)^2 r_delta / (gcd(c, N/c) c delta)
//! ```
//!
//! which measures the order in the local uniformizer at each cusp.
//!
//! The literal syntax is `N; delta^r * delta^r * ...; s`, for example
//! `8; 2^2 * 8^4 * 1^-4 * 4^-2; 1` for the Hauptmodul `x` of `X_0(8)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::report::{Counterexample, VerificationReport};
use crate::series::{CoefficientRing, TruncatedSeries};

/// Cusp enumeration factors the level by trial division.
pub const MAX_CUSP_LEVEL: u64 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EtaQuotientSpec {
    level: u64,
    /// `(delta, r_delta)` in literal order; each `delta` appears once.
    factors: Vec<(u64, i64)>,
    q_prefactor: i64,
}

impl EtaQuotientSpec {
    pub fn new(level: u64, factors: Vec<(u64, i64)>, q_prefactor: i64) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidSpec("level must be positive".into()));
        }
        if factors.is_empty() {
            return Err(Error::InvalidSpec("no eta factors".into()));
        }
        for (i, &(d, _)) in factors.iter().enumerate() {
            if d == 0 || !level.is_multiple_of(d) {
                return Err(Error::InvalidSpec(format!("{d} does not divide the level {level}")));
            }
            if factors[..i].iter().any(|&(e, _)| e == d) {
                return Err(Error::InvalidSpec(format!("divisor {d} repeated")));
            }
        }
        Ok(EtaQuotientSpec {
            level,
            factors,
            q_prefactor,
        })
    }

    /// `D_k(q) = (q^2;q^2)^k / (q;q)^(3k+1)`.
    pub fn d_k(k: u32) -> Self {
        Self::new(2, vec![(1, -(3 * k as i64 + 1)), (2, k as i64)], 0).expect("valid")
    }

    /// The Hauptmodul `x = q (q^2;q^2)^2 (q^8;q^8)^4 / ((q;q)^4 (q^4;q^4)^2)` on `X_0(8)`.
    pub fn hauptmodul_x() -> Self {
        Self::new(8, vec![(2, 2), (8, 4), (1, -4), (4, -2)], 1).expect("valid")
    }

    /// The multiplier inside `U(f) = U_4(A f)`.
    pub fn u_multiplier() -> Self {
        Self::new(16, vec![(2, 13), (4, 24), (16, 2), (1, -26), (8, -13)], 1).expect("valid")
    }

    /// The factor `(q;q)^26 (q^4;q^4)^2 / (q^2;q^2)^13` in front of every `L_alpha`.
    pub fn l_prefactor() -> Self {
        Self::new(4, vec![(1, 26), (4, 2), (2, -13)], 0).expect("valid")
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    pub fn q_prefactor(&self) -> i64 {
        self.q_prefactor
    }

    pub fn exponent(&self, delta: u64) -> i64 {
        self.factors
            .iter()
            .find(|&&(d, _)| d == delta)
            .map_or(0, |&(_, r)| r)
    }

    /// The same product regarded at a multiple of the level.
    pub fn at_level(&self, level: u64) -> Result<Self> {
        if level == 0 || !level.is_multiple_of(self.level) {
            return Err(Error::InvalidSpec(format!(
                "{level} is not a multiple of the level {}",
                self.level
            )));
        }
        Self::new(level, self.factors.clone(), self.q_prefactor)
    }

    /// `f(tau) -> f(m tau)`: every divisor, the level and the q-power scale by `m`.
    pub fn dilate(&self, m: u64) -> Result<Self> {
        let scale = |v: u64| {
            v.checked_mul(m)
                .ok_or_else(|| Error::InvalidSpec("dilated level overflows".into()))
        };
        let factors = self
            .factors
            .iter()
            .map(|&(d, r)| Ok((scale(d)?, r)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(scale(self.level)?, factors, self.q_prefactor * m as i64)
    }

    /// Product of two eta quotients, at the lcm of their levels.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut factors = self.factors.clone();
        for &(d, r) in &other.factors {
            match factors.iter_mut().find(|(e, _)| *e == d) {
                Some(slot) => slot.1 += r,
                None => factors.push((d, r)),
            }
        }
        Self::new(
            self.level.lcm(&other.level),
            factors,
            self.q_prefactor + other.q_prefactor,
        )
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Self::new(
            self.level,
            self.factors.iter().map(|&(d, r)| (d, r * e)).collect(),
            self.q_prefactor * e,
        )
    }

    /// `sum delta r_delta / 24`, the q-power carried by the eta functions
    /// themselves; `None` when it is not an integer.
    pub fn eta_q_power(&self) -> Option<i64> {
        let s: i128 = self.factors.iter().map(|&(d, r)| d as i128 * r as i128).sum();
        (s % 24 == 0).then_some((s / 24) as i64)
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; ", self.level)?;
        for (i, (d, r)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{d}^{r}")?;
        }
        write!(f, "; {}", self.q_prefactor)
    }
}

impl FromStr for EtaQuotientSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::parse(1, msg);
        let parts: Vec<&str> = s.split(';').map(str::trim).collect();
        let [level, product, qpow] = parts[..] else {
            return Err(bad("expected `N; delta^r * ...; qpow`".into()));
        };
        let level: u64 = level
            .parse()
            .map_err(|_| bad(format!("bad level `{level}`")))?;
        let q_prefactor: i64 = qpow
            .parse()
            .map_err(|_| bad(format!("bad q-power `{qpow}`")))?;
        let mut factors = Vec::new();
        for term in product.split('*').map(str::trim) {
            let (d, r) = term
                .split_once('^')
                .ok_or_else(|| bad(format!("factor `{term}` is not `delta^r`")))?;
            let d: u64 = d
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad divisor in `{term}`")))?;
            let r: i64 = r
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad exponent in `{term}`")))?;
            factors.push((d, r));
        }
        EtaQuotientSpec::new(level, factors, q_prefactor)
            .map_err(|e| bad(e.to_string()))
    }
}

/// Exact expansion of the spec through `q^(trunc - 1)`.
pub fn expand_eta_quotient(spec: &EtaQuotientSpec, trunc: i64) -> Result<TruncatedSeries> {
    expand_eta_quotient_in(spec, trunc, CoefficientRing::Exact)
}

pub fn expand_eta_quotient_in(
    spec: &EtaQuotientSpec,
    trunc: i64,
    ring: CoefficientRing,
) -> Result<TruncatedSeries> {
    let relative = trunc - spec.q_prefactor;
    if relative < 1 {
        return Err(Error::InsufficientTrunc {
            trunc,
            reason: format!("the expansion starts at q^{}", spec.q_prefactor),
        });
    }
    let mut product = TruncatedSeries::one(ring, relative);
    for &(d, r) in &spec.factors {
        product = product.mul_euler_power(d, r)?;
    }
    Ok(product.shift(spec.q_prefactor))
}

/// Newman's conditions for the eta quotient to be a modular function on
/// `Gamma_0(N)`, plus agreement of the written q-power with the one the eta
/// functions carry.
pub fn newman_modularity_check(spec: &EtaQuotientSpec) -> VerificationReport {
    let mut report = VerificationReport::new("newman").param("spec", spec);
    let n = spec.level as i128;
    let f = &spec.factors;

    let weight: i128 = f.iter().map(|&(_, r)| r as i128).sum();
    if weight != 0 {
        report.fail(Counterexample::new("weight: sum r_delta", weight, 0));
    }
    let sum_delta: i128 = f.iter().map(|&(d, r)| d as i128 * r as i128).sum();
    if sum_delta.rem_euclid(24) != 0 {
        report.fail(Counterexample::new(
            "sum delta r_delta mod 24",
            sum_delta.rem_euclid(24),
            0,
        ));
    }
    let sum_co: i128 = f
        .iter()
        .map(|&(d, r)| (n / d as i128) * r as i128)
        .sum();
    if sum_co.rem_euclid(24) != 0 {
        report.fail(Counterexample::new(
            "sum (N/delta) r_delta mod 24",
            sum_co.rem_euclid(24),
            0,
        ));
    }
    if !product_is_rational_square(f) {
        report.fail(Counterexample::new(
            "prod delta^r_delta",
            "not a square",
            "a rational square",
        ));
    }
    if sum_delta.rem_euclid(24) == 0 && sum_delta / 24 != spec.q_prefactor as i128 {
        report.fail(Counterexample::new(
            "q-prefactor",
            spec.q_prefactor,
            sum_delta / 24,
        ));
    }
    report
}

/// `prod delta^r` is a rational square iff the product of the `delta` with
/// odd `r` is a perfect square.
fn product_is_rational_square(factors: &[(u64, i64)]) -> bool {
    let odd: BigInt = factors
        .iter()
        .filter(|&&(_, r)| r % 2 != 0)
        .map(|&(d, _)| BigInt::from(d))
        .product();
    let root = odd.sqrt();
    &root * &root == odd
}

/// A cusp `a/c` of `Gamma_0(N)` with `c | N`. `c = N` is the cusp at
/// infinity, `c = 1` the cusp 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cusp {
    pub numerator: u64,
    pub denominator: u64,
    pub level: u64,
}

impl Cusp {
    /// Parses `inf`, `∞`, `0` or `a/c` (with `c | N`) for level `N`.
    pub fn parse(label: &str, level: u64) -> Result<Self> {
        let bad = |m: &str| Error::parse(1, format!("cusp `{label}`: {m}"));
        let label = label.trim();
        let (a, c) = match label {
            "inf" | "∞" | "oo" => (1, level),
            "0" => (0, 1),
            _ => {
                let (a, c) = label.split_once('/').ok_or_else(|| bad("expected a/c"))?;
                let a: u64 = a.trim().parse().map_err(|_| bad("bad numerator"))?;
                let c: u64 = c.trim().parse().map_err(|_| bad("bad denominator"))?;
                (a, c)
            }
        };
        if c == 0 || !level.is_multiple_of(c) {
            return Err(bad("denominator must divide the level"));
        }
        if a.gcd(&c) != 1 {
            return Err(bad("not in lowest terms"));
        }
        Ok(Cusp {
            numerator: a,
            denominator: c,
            level,
        })
    }

    /// `a/c ~ a'/c` under `Gamma_0(N)` iff `a = a' (mod gcd(c, N/c))`.
    pub fn equivalent(&self, other: &Cusp) -> bool {
        if self.level != other.level || self.denominator != other.denominator {
            return false;
        }
        let g = self.denominator.gcd(&(self.level / self.denominator));
        self.numerator % g == other.numerator % g
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == self.level {
            f.write_str("∞")
        } else if self.denominator == 1 {
            f.write_str("0")
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Representatives of the cusps of `Gamma_0(N)`, ordered by decreasing
/// denominator (so `∞` first and `0` last). For each `c | N` the numerators
/// are the smallest positive `a` coprime to `c` in each unit class mod
/// `gcd(c, N/c)`.
pub fn gamma0_cusps(level: u64) -> Result<Vec<Cusp>> {
    if level == 0 || level > MAX_CUSP_LEVEL {
        return Err(Error::Domain(format!("cusp enumeration needs 1 <= N <= {MAX_CUSP_LEVEL}")));
    }
    let mut out = Vec::new();
    for c in divisors(level).into_iter().rev() {
        if c == 1 {
            out.push(Cusp {
                numerator: 0,
                denominator: 1,
                level,
            });
            continue;
        }
        let g = c.gcd(&(level / c));
        for u in (0..g).filter(|u| u.gcd(&g) == 1) {
            let mut a = if u == 0 { g } else { u };
            while a.gcd(&c) != 1 {
                a += g;
            }
            out.push(Cusp {
                numerator: a,
                denominator: c,
                level,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspOrderVector {
    pub level: u64,
    pub orders: Vec<(Cusp, BigRational)>,
}

impl CuspOrderVector {
    /// Order at the class of `cusp` (classwise, not labelwise).
    pub fn order_at(&self, cusp: &Cusp) -> Option<&BigRational> {
        self.orders
            .iter()
            .find(|(c, _)| c.equivalent(cusp))
            .map(|(_, o)| o)
    }

    pub fn order_at_label(&self, label: &str) -> Result<BigRational> {
        let cusp = Cusp::parse(label, self.level)?;
        self.order_at(&cusp)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("no cusp class for {label}")))
    }

    pub fn total(&self) -> BigRational {
        self.orders.iter().map(|(_, o)| o.clone()).sum()
    }
}

impl fmt::Display for CuspOrderVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, o) in &self.orders {
            writeln!(f, "ord_{c} = {o}")?;
        }
        Ok(())
    }
}

/// Ligozat order of the eta quotient at a cusp with denominator `c | N`.
pub fn ligozat_order(spec: &EtaQuotientSpec, c: u64) -> BigRational {
    let n = spec.level;
    let width_gcd = c.gcd(&(n / c));
    let mut sum = BigRational::zero();
    for &(d, r) in &spec.factors {
        let g = c.gcd(&d);
        let num = BigInt::from(g) * BigInt::from(g) * BigInt::from(r);
        let den = BigInt::from(width_gcd) * BigInt::from(c) * BigInt::from(d);
        sum += BigRational::new(num, den);
    }
    sum * BigRational::new(BigInt::from(n), BigInt::from(24))
}

/// Orders at every cusp of `Gamma_0(N)`. The spec must pass
/// [`newman_modularity_check`]; the order at `∞` then equals the q-prefactor.
pub fn cusp_orders(spec: &EtaQuotientSpec) -> Result<CuspOrderVector> {
    let newman = newman_modularity_check(spec);
    if let Some(c) = newman.counterexample {
        return Err(Error::InvalidSpec(format!(
            "not a modular function on Gamma_0({}): {c}",
            spec.level
        )));
    }
    let orders = gamma0_cusps(spec.level)?
        .into_iter()
        .map(|c| (c, ligozat_order(spec, c.denominator)))
        .collect();
    Ok(CuspOrderVector {
        level: spec.level,
        orders,
    })
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// True when every order is an integer.
pub fn orders_integral(v: &CuspOrderVector) -> bool {
    v.orders.iter().all(|(_, o)| o.denom().is_one())
}
