//! Truncated formal power series in `q`.
//!
//! A [`TruncatedSeries`] stores a dense run of coefficients for the exponents
//! `valuation, valuation + 1, ..., trunc - 1`. Every coefficient at an exponent
//! `>= trunc` is unknown, and every operation derives the truncation of its
//! result so that it never claims a coefficient that depends on an unknown
//! input coefficient.
//!
//! Coefficients live either in the integers (arbitrary precision) or in
//! `Z / 2^k Z` for `1 <= k <= 64`. The modular ring is what makes the long
//! congruence scans affordable: divisibility by `8^alpha` only needs the
//! residues mod `2^(3 alpha + margin)`.

use std::cmp::{max, min};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exponents in the text format are bounded so that later arithmetic on
/// truncation horizons cannot overflow `i64`.
pub const MAX_TEXT_EXPONENT: i64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientRing {
    Exact,
    /// Integers modulo `2^bits`.
    ModPow2(u32),
}

impl CoefficientRing {
    pub fn mod_pow2(bits: u32) -> Result<Self> {
        if bits == 0 || bits > 64 {
            return Err(Error::UnsupportedModulus(bits));
        }
        Ok(CoefficientRing::ModPow2(bits))
    }

    pub fn is_exact(self) -> bool {
        matches!(self, CoefficientRing::Exact)
    }

    /// Canonical representative of `c` in this ring. Residues are in `[0, 2^k)`.
    pub fn reduce(self, c: &BigInt) -> BigInt {
        match self {
            CoefficientRing::Exact => c.clone(),
            CoefficientRing::ModPow2(bits) => BigInt::from(reduce_to_u64(c, mask_for(bits))),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Exact => f.write_str("exact"),
            CoefficientRing::ModPow2(bits) => write!(f, "mod2^{bits}"),
        }
    }
}

impl FromStr for CoefficientRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(CoefficientRing::Exact);
        }
        let bits = s
            .strip_prefix("mod2^")
            .and_then(|b| b.parse::<u32>().ok())
            .ok_or_else(|| Error::parse(1, format!("unknown coefficient ring `{s}`")))?;
        CoefficientRing::mod_pow2(bits)
    }
}

fn mask_for(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn reduce_to_u64(c: &BigInt, mask: u64) -> u64 {
    // Two's complement low word gives the residue mod 2^64 for negatives too.
    let low = c.iter_u64_digits().next().unwrap_or(0);
    let low = if c.is_negative() { low.wrapping_neg() } else { low };
    low & mask
}

/// Coefficient arithmetic shared by the exact and modular storage paths.
trait Kernel {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add_assign(&self, a: &mut Self::E, b: &Self::E);
    fn sub_assign(&self, a: &mut Self::E, b: &Self::E);
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn unit_inverse(&self, a: &Self::E) -> Option<Self::E>;
}

struct ExactKernel;

impl Kernel for ExactKernel {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add_assign(&self, a: &mut BigInt, b: &BigInt) {
        *a += b;
    }
    fn sub_assign(&self, a: &mut BigInt, b: &BigInt) {
        *a -= b;
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn unit_inverse(&self, a: &BigInt) -> Option<BigInt> {
        (a.is_one() || (-a).is_one()).then(|| a.clone())
    }
}

struct ModKernel {
    mask: u64,
}

impl Kernel for ModKernel {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add_assign(&self, a: &mut u64, b: &u64) {
        *a = a.wrapping_add(*b) & self.mask;
    }
    fn sub_assign(&self, a: &mut u64, b: &u64) {
        *a = a.wrapping_sub(*b) & self.mask;
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a.wrapping_mul(*b) & self.mask
    }
    fn neg(&self, a: &u64) -> u64 {
        a.wrapping_neg() & self.mask
    }
    fn unit_inverse(&self, a: &u64) -> Option<u64> {
        if a & 1 == 0 {
            return None;
        }
        // Newton iteration doubles the number of correct low bits each step.
        let mut x = *a;
        for _ in 0..6 {
            x = x.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(x)));
        }
        Some(x & self.mask)
    }
}

fn cauchy<K: Kernel>(k: &K, a: &[K::E], b: &[K::E], len: usize) -> Vec<K::E> {
    let mut out = vec![k.zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if k.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            let p = k.mul(ai, bj);
            k.add_assign(&mut out[i + j], &p);
        }
    }
    out
}

fn unit_series_inverse<K: Kernel>(k: &K, a: &[K::E], len: usize) -> Option<Vec<K::E>> {
    let inv0 = k.unit_inverse(&a[0])?;
    let mut out = Vec::with_capacity(len);
    out.push(inv0.clone());
    for i in 1..len {
        let mut acc = k.zero();
        for j in 1..=min(i, a.len() - 1) {
            let p = k.mul(&a[j], &out[i - j]);
            k.add_assign(&mut acc, &p);
        }
        out.push(k.neg(&k.mul(&inv0, &acc)));
    }
    Some(out)
}

/// Signed exponents of Euler's pentagonal expansion
/// `(q;q)_inf = sum_k (-1)^k q^(k(3k-1)/2)`, excluding the constant term,
/// as `(exponent, negative)` pairs with `exponent < limit`.
fn pentagonal_terms(limit: usize) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    for k in 1usize.. {
        let g1 = k * (3 * k - 1) / 2;
        if g1 >= limit {
            break;
        }
        out.push((g1, k % 2 == 1));
        let g2 = k * (3 * k + 1) / 2;
        if g2 < limit {
            out.push((g2, k % 2 == 1));
        }
    }
    out
}

/// In place: `v <- v * (q^delta; q^delta)_inf`, dense from exponent offset 0.
fn euler_mul_in_place<K: Kernel>(k: &K, v: &mut [K::E], delta: usize) {
    let terms = pentagonal_terms(v.len().div_ceil(delta));
    for i in (0..v.len()).rev() {
        for &(g, negative) in &terms {
            let e = g * delta;
            if e > i {
                break;
            }
            let (lo, hi) = v.split_at_mut(i);
            if negative {
                k.sub_assign(&mut hi[0], &lo[i - e]);
            } else {
                k.add_assign(&mut hi[0], &lo[i - e]);
            }
        }
    }
}

/// In place: `v <- v / (q^delta; q^delta)_inf`.
fn euler_div_in_place<K: Kernel>(k: &K, v: &mut [K::E], delta: usize) {
    let terms = pentagonal_terms(v.len().div_ceil(delta));
    for i in 0..v.len() {
        for &(g, negative) in &terms {
            let e = g * delta;
            if e > i {
                break;
            }
            let (lo, hi) = v.split_at_mut(i);
            // g = f - sum_{e>0} s_e g[i-e]
            if negative {
                k.add_assign(&mut hi[0], &lo[i - e]);
            } else {
                k.sub_assign(&mut hi[0], &lo[i - e]);
            }
        }
    }
}

fn euler_power_in_place<K: Kernel>(k: &K, v: &mut [K::E], delta: usize, exponent: i64) {
    for _ in 0..exponent.unsigned_abs() {
        if exponent > 0 {
            euler_mul_in_place(k, v, delta);
        } else {
            euler_div_in_place(k, v, delta);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Mod(Vec<u64>),
}

impl Coeffs {
    fn len(&self) -> usize {
        match self {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Mod(v) => v.len(),
        }
    }

    fn empty(ring: CoefficientRing) -> Self {
        match ring {
            CoefficientRing::Exact => Coeffs::Exact(Vec::new()),
            CoefficientRing::ModPow2(_) => Coeffs::Mod(Vec::new()),
        }
    }
}

/// A q-expansion `sum_{n >= valuation} c(n) q^n + O(q^trunc)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: CoefficientRing,
    /// Equal to `trunc` for the zero series.
    valuation: i64,
    trunc: i64,
    coeffs: Coeffs,
}

impl TruncatedSeries {
    /// The series `0 + O(q^trunc)`.
    pub fn zero(ring: CoefficientRing, trunc: i64) -> Self {
        TruncatedSeries {
            ring,
            valuation: trunc,
            trunc,
            coeffs: Coeffs::empty(ring),
        }
    }

    /// The series `1 + O(q^trunc)`.
    pub fn one(ring: CoefficientRing, trunc: i64) -> Self {
        Self::monomial(ring, &BigInt::one(), 0, trunc)
    }

    /// `c q^exponent + O(q^trunc)`.
    pub fn monomial(ring: CoefficientRing, c: &BigInt, exponent: i64, trunc: i64) -> Self {
        if exponent >= trunc {
            return Self::zero(ring, trunc);
        }
        let mut coeffs = vec![BigInt::zero(); (trunc - exponent) as usize];
        coeffs[0] = c.clone();
        Self::from_coeffs(ring, exponent, coeffs, trunc)
    }

    /// Builds a series from the coefficients at `valuation, valuation + 1, ...`.
    /// Missing coefficients below `trunc` are zero; extra ones are dropped.
    pub fn from_coeffs(ring: CoefficientRing, valuation: i64, mut coeffs: Vec<BigInt>, trunc: i64) -> Self {
        if trunc <= valuation {
            return Self::zero(ring, trunc);
        }
        let len = (trunc - valuation) as usize;
        coeffs.resize(len, BigInt::zero());
        let coeffs = match ring {
            CoefficientRing::Exact => Coeffs::Exact(coeffs),
            CoefficientRing::ModPow2(bits) => {
                let mask = mask_for(bits);
                Coeffs::Mod(coeffs.iter().map(|c| reduce_to_u64(c, mask)).collect())
            }
        };
        Self::normalized(ring, valuation, trunc, coeffs)
    }

    pub fn from_i64s(ring: CoefficientRing, valuation: i64, coeffs: &[i64], trunc: i64) -> Self {
        Self::from_coeffs(ring, valuation, coeffs.iter().map(|&c| BigInt::from(c)).collect(), trunc)
    }

    /// `(q^delta; q^delta)_inf^exponent + O(q^trunc)`.
    pub fn euler_power(ring: CoefficientRing, delta: u64, exponent: i64, trunc: i64) -> Result<Self> {
        Self::one(ring, trunc).mul_euler_power(delta, exponent)
    }

    /// Multiplies by `(q^delta; q^delta)_inf^exponent` using the sparse pentagonal
    /// expansion. The factor is a unit with constant term 1, so the truncation is
    /// unchanged.
    pub fn mul_euler_power(&self, delta: u64, exponent: i64) -> Result<Self> {
        if delta == 0 {
            return Err(Error::Domain("Euler factor needs delta >= 1".into()));
        }
        let mut out = self.clone();
        if exponent == 0 || out.is_zero() {
            return Ok(out);
        }
        let delta = usize::try_from(delta).unwrap_or(usize::MAX);
        match (&mut out.coeffs, self.ring) {
            (Coeffs::Exact(v), _) => euler_power_in_place(&ExactKernel, v, delta, exponent),
            (Coeffs::Mod(v), CoefficientRing::ModPow2(bits)) => {
                euler_power_in_place(&ModKernel { mask: mask_for(bits) }, v, delta, exponent)
            }
            _ => unreachable!("storage matches ring"),
        }
        Ok(Self::normalized(out.ring, out.valuation, out.trunc, out.coeffs))
    }

    fn normalized(ring: CoefficientRing, valuation: i64, trunc: i64, coeffs: Coeffs) -> Self {
        let lead = match &coeffs {
            Coeffs::Exact(v) => v.iter().position(|c| !c.is_zero()),
            Coeffs::Mod(v) => v.iter().position(|&c| c != 0),
        };
        let Some(shift) = lead else {
            return Self::zero(ring, trunc);
        };
        let coeffs = match coeffs {
            Coeffs::Exact(mut v) => {
                v.drain(..shift);
                Coeffs::Exact(v)
            }
            Coeffs::Mod(mut v) => {
                v.drain(..shift);
                Coeffs::Mod(v)
            }
        };
        TruncatedSeries {
            ring,
            valuation: valuation + shift as i64,
            trunc,
            coeffs,
        }
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    /// Lowest exponent with a nonzero coefficient; equals `trunc` for zero.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 0
    }

    /// Coefficient of `q^n`, or `None` when `n >= trunc`.
    pub fn coeff(&self, n: i64) -> Option<BigInt> {
        if n >= self.trunc {
            return None;
        }
        if n < self.valuation {
            return Some(BigInt::zero());
        }
        let i = (n - self.valuation) as usize;
        Some(match &self.coeffs {
            Coeffs::Exact(v) => v[i].clone(),
            Coeffs::Mod(v) => BigInt::from(v[i]),
        })
    }

    /// Dense coefficients for `valuation..trunc`.
    pub fn coefficients(&self) -> Vec<BigInt> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.clone(),
            Coeffs::Mod(v) => v.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn exact_coeffs(&self) -> Option<&[BigInt]> {
        match &self.coeffs {
            Coeffs::Exact(v) => Some(v),
            Coeffs::Mod(_) => None,
        }
    }

    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Mod(v) => Some(v),
            Coeffs::Exact(_) => None,
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        Ok(())
    }

    fn mask(&self) -> u64 {
        match self.ring {
            CoefficientRing::ModPow2(bits) => mask_for(bits),
            CoefficientRing::Exact => u64::MAX,
        }
    }

    /// Dense coefficients over `lo..trunc`, padding below the valuation with zeros.
    fn window(&self, lo: i64, trunc: i64) -> Coeffs {
        let len = max(trunc - lo, 0) as usize;
        let start = (self.valuation - lo) as usize;
        match &self.coeffs {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); len];
                for (i, c) in v.iter().enumerate() {
                    if start + i >= len {
                        break;
                    }
                    out[start + i] = c.clone();
                }
                Coeffs::Exact(out)
            }
            Coeffs::Mod(v) => {
                let mut out = vec![0u64; len];
                for (i, &c) in v.iter().enumerate() {
                    if start + i >= len {
                        break;
                    }
                    out[start + i] = c;
                }
                Coeffs::Mod(out)
            }
        }
    }

    fn combine(&self, other: &Self, subtract: bool) -> Result<Self> {
        self.check_ring(other)?;
        let trunc = min(self.trunc, other.trunc);
        let lo = min(self.valuation, other.valuation);
        if lo >= trunc {
            return Ok(Self::zero(self.ring, trunc));
        }
        let coeffs = match (self.window(lo, trunc), other.window(lo, trunc)) {
            (Coeffs::Exact(mut a), Coeffs::Exact(b)) => {
                for (x, y) in a.iter_mut().zip(&b) {
                    if subtract {
                        *x -= y;
                    } else {
                        *x += y;
                    }
                }
                Coeffs::Exact(a)
            }
            (Coeffs::Mod(mut a), Coeffs::Mod(b)) => {
                let k = ModKernel { mask: self.mask() };
                for (x, y) in a.iter_mut().zip(&b) {
                    if subtract {
                        k.sub_assign(x, y);
                    } else {
                        k.add_assign(x, y);
                    }
                }
                Coeffs::Mod(a)
            }
            _ => unreachable!("rings checked"),
        };
        Ok(Self::normalized(self.ring, lo, trunc, coeffs))
    }

    /// Coefficientwise sum; `trunc = min(a.trunc, b.trunc)`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v.iter().map(|c| -c).collect()),
            Coeffs::Mod(v) => {
                let k = ModKernel { mask: self.mask() };
                Coeffs::Mod(v.iter().map(|c| k.neg(c)).collect())
            }
        };
        TruncatedSeries { coeffs, ..*self }
    }

    /// Multiplies every coefficient by the integer `c`.
    pub fn scale(&self, c: &BigInt) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v.iter().map(|x| x * c).collect()),
            Coeffs::Mod(v) => {
                let k = ModKernel { mask: self.mask() };
                let c = reduce_to_u64(c, self.mask());
                Coeffs::Mod(v.iter().map(|x| k.mul(x, &c)).collect())
            }
        };
        Self::normalized(self.ring, self.valuation, self.trunc, coeffs)
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedSeries {
            valuation: self.valuation + k,
            trunc: self.trunc + k,
            coeffs: self.coeffs.clone(),
            ring: self.ring,
        }
    }

    /// Forgets every coefficient at exponents `>= trunc`.
    pub fn truncate(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        if trunc <= self.valuation {
            return Self::zero(self.ring, trunc);
        }
        let len = (trunc - self.valuation) as usize;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v[..len].to_vec()),
            Coeffs::Mod(v) => Coeffs::Mod(v[..len].to_vec()),
        };
        Self::normalized(self.ring, self.valuation, trunc, coeffs)
    }

    /// Cauchy product. The result knows exponents below
    /// `min(a.trunc + b.valuation, b.trunc + a.valuation)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let trunc = min(self.trunc + other.valuation, other.trunc + self.valuation);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ring, trunc));
        }
        let valuation = self.valuation + other.valuation;
        let len = (trunc - valuation) as usize;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => Coeffs::Exact(cauchy(&ExactKernel, a, b, len)),
            (Coeffs::Mod(a), Coeffs::Mod(b)) => {
                Coeffs::Mod(cauchy(&ModKernel { mask: self.mask() }, a, b, len))
            }
            _ => unreachable!("rings checked"),
        };
        Ok(Self::normalized(self.ring, valuation, trunc, coeffs))
    }

    /// Multiplicative inverse. The leading coefficient must be `+-1` in exact
    /// mode and odd in modular mode. For `a = q^v u` the result is
    /// `q^-v u^-1`, known below `a.trunc - 2v`.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible {
                coefficient: "0".into(),
                ring: self.ring,
            });
        }
        let len = (self.trunc - self.valuation) as usize;
        let inverse = match &self.coeffs {
            Coeffs::Exact(a) => unit_series_inverse(&ExactKernel, a, len).map(Coeffs::Exact),
            Coeffs::Mod(a) => unit_series_inverse(&ModKernel { mask: self.mask() }, a, len).map(Coeffs::Mod),
        };
        let Some(coeffs) = inverse else {
            return Err(Error::NotInvertible {
                coefficient: self.coefficients()[0].to_string(),
                ring: self.ring,
            });
        };
        Ok(Self::normalized(
            self.ring,
            -self.valuation,
            self.trunc - 2 * self.valuation,
            coeffs,
        ))
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// [`TruncatedSeries::invert`]. `f^0` is `1` to the relative precision of `f`.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if self.is_zero() && e <= 0 {
            return Err(Error::NotInvertible {
                coefficient: "0".into(),
                ring: self.ring,
            });
        }
        let mut base = if e < 0 { self.invert()? } else { self.clone() };
        let mut acc = Self::one(self.ring, self.trunc - self.valuation);
        let mut n = e.unsigned_abs();
        if n == 0 {
            return Ok(acc);
        }
        let mut first = true;
        loop {
            if n & 1 == 1 {
                acc = if first { base.clone() } else { acc.mul(&base)? };
                first = false;
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc)
    }

    /// Substitutes `q -> q^m`, i.e. `f(tau) -> f(m tau)`.
    pub fn dilate(&self, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("dilation factor must be >= 1".into()));
        }
        let m = m as i64;
        if self.is_zero() {
            return Ok(Self::zero(self.ring, self.trunc * m));
        }
        let len = ((self.trunc - self.valuation) * m) as usize;
        let m = m as usize;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); len];
                for (i, c) in v.iter().enumerate() {
                    out[i * m] = c.clone();
                }
                Coeffs::Exact(out)
            }
            Coeffs::Mod(v) => {
                let mut out = vec![0u64; len];
                for (i, &c) in v.iter().enumerate() {
                    out[i * m] = c;
                }
                Coeffs::Mod(out)
            }
        };
        let m = m as i64;
        Ok(Self::normalized(self.ring, self.valuation * m, self.trunc * m, coeffs))
    }

    /// `U_l : sum c(n) q^n -> sum c(l n) q^n`; the result is known below
    /// `ceil(trunc / l)`.
    pub fn u_ell(&self, ell: u64) -> Result<Self> {
        if ell == 0 {
            return Err(Error::Domain("U_l needs l >= 1".into()));
        }
        let l = ell as i64;
        let trunc = div_ceil(self.trunc, l);
        if self.is_zero() {
            return Ok(Self::zero(self.ring, trunc));
        }
        let lo = div_ceil(self.valuation, l);
        let picks = (lo..trunc).map(|n| (l * n - self.valuation) as usize);
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(picks.map(|i| v[i].clone()).collect()),
            Coeffs::Mod(v) => Coeffs::Mod(picks.map(|i| v[i]).collect()),
        };
        Ok(Self::normalized(self.ring, lo, trunc, coeffs))
    }

    /// Reduces into `target`. Exact series reduce to any modulus; modular
    /// series only reduce to a smaller power of two.
    pub fn to_ring(&self, target: CoefficientRing) -> Result<Self> {
        match (self.ring, target) {
            (a, b) if a == b => Ok(self.clone()),
            (CoefficientRing::Exact, CoefficientRing::ModPow2(_)) => Ok(Self::from_coeffs(
                target,
                self.valuation,
                self.coefficients(),
                self.trunc,
            )),
            (CoefficientRing::ModPow2(from), CoefficientRing::ModPow2(to)) if to <= from => Ok(
                Self::from_coeffs(target, self.valuation, self.coefficients(), self.trunc),
            ),
            (from, to) => Err(Error::Domain(format!("cannot lift {from} coefficients to {to}"))),
        }
    }

    /// Text serialization: a header line `valuation trunc ring`, then one
    /// decimal coefficient per line for exponents `valuation..trunc`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.valuation, self.trunc, self.ring);
        for c in self.coefficients() {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`TruncatedSeries::to_text`]. Leading zero
    /// coefficients are accepted and normalized away; modular residues may be
    /// given in any representative.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [val, trunc, ring] = fields[..] else {
            return Err(Error::parse(hline, "header must be `valuation trunc ring`"));
        };
        let parse_exp = |s: &str, what: &str| -> Result<i64> {
            let v: i64 = s
                .parse()
                .map_err(|_| Error::parse(hline, format!("bad {what} `{s}`")))?;
            if v.abs() > MAX_TEXT_EXPONENT {
                return Err(Error::parse(hline, format!("{what} {v} out of range")));
            }
            Ok(v)
        };
        let valuation = parse_exp(val, "valuation")?;
        let trunc = parse_exp(trunc, "trunc")?;
        let ring: CoefficientRing = ring.parse().map_err(|e: Error| match e {
            Error::Parse { msg, .. } => Error::parse(hline, msg),
            other => Error::parse(hline, other.to_string()),
        })?;
        if trunc < valuation {
            return Err(Error::parse(hline, "trunc must be >= valuation"));
        }
        let expected = (trunc - valuation) as u64;
        let mut coeffs = Vec::new();
        for (line, l) in lines {
            if coeffs.len() as u64 >= expected {
                return Err(Error::parse(line, format!("expected {expected} coefficients")));
            }
            let c: BigInt = l
                .parse()
                .map_err(|_| Error::parse(line, format!("bad coefficient `{l}`")))?;
            coeffs.push(c);
        }
        if coeffs.len() as u64 != expected {
            return Err(Error::parse(
                hline,
                format!("expected {expected} coefficients, found {}", coeffs.len()),
            ));
        }
        Ok(Self::from_coeffs(ring, valuation, coeffs, trunc))
    }

    /// Coefficient of `q^n` as `i64`, for small test values.
    pub fn coeff_i64(&self, n: i64) -> Option<i64> {
        self.coeff(n).and_then(|c| c.to_i64())
    }
}

pub(crate) fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX: CoefficientRing = CoefficientRing::Exact;

    fn s(val: i64, c: &[i64], trunc: i64) -> TruncatedSeries {
        TruncatedSeries::from_i64s(EX, val, c, trunc)
    }

    /// Partial product prod_{m<=n} (1 - q^m), multiplied out factor by factor.
    fn partial_euler(n: i64, trunc: i64) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(EX, trunc);
        for m in 1..=n {
            let mut f = vec![0i64; (m + 1) as usize];
            f[0] = 1;
            f[m as usize] = -1;
            acc = acc.mul(&s(0, &f, trunc)).unwrap();
        }
        acc
    }

    /// p(n) by the classic coin-change recurrence over part sizes.
    fn partitions(n: usize) -> Vec<u64> {
        let mut p = vec![0u64; n + 1];
        p[0] = 1;
        for part in 1..=n {
            for t in part..=n {
                p[t] += p[t - part];
            }
        }
        p
    }

    #[test]
    fn add_cancels() {
        let a = s(0, &[1, 1], 5);
        let b = s(0, &[-1, 1], 5);
        let sum = a.add(&b).unwrap();
        assert_eq!(sum, s(1, &[2], 5));
        assert_eq!(sum.valuation(), 1);
        assert_eq!(a.add(&TruncatedSeries::zero(EX, 9)).unwrap(), a);
    }

    #[test]
    fn add_negated_tail() {
        let a = partial_euler(7, 8);
        let tail = a.sub(&TruncatedSeries::one(EX, 8)).unwrap().neg();
        assert_eq!(a.add(&tail).unwrap(), TruncatedSeries::one(EX, 8));
    }

    #[test]
    fn mul_basics() {
        assert_eq!(s(0, &[1, 1], 6).mul(&s(0, &[1, -1], 6)).unwrap(), s(0, &[1, 0, -1], 6));
        let q = s(1, &[1], 10);
        let q2 = q.mul(&q).unwrap();
        assert_eq!(q2.valuation(), 2);
        assert_eq!(q2.trunc(), 11);
    }

    #[test]
    fn partial_products_follow_pentagonal_pattern() {
        let p = partial_euler(7, 8);
        assert_eq!(p, s(0, &[1, -1, -1, 0, 0, 1, 0, 1], 8));
        let e = TruncatedSeries::euler_power(EX, 1, 1, 8).unwrap();
        assert_eq!(e, p);
    }

    #[test]
    fn euler_inverse_counts_partitions() {
        let inv = TruncatedSeries::euler_power(EX, 1, 1, 60).unwrap().invert().unwrap();
        let oracle = partitions(59);
        for (n, want) in oracle.iter().enumerate() {
            assert_eq!(inv.coeff(n as i64).unwrap(), BigInt::from(*want));
        }
        let sparse = TruncatedSeries::euler_power(EX, 1, -1, 60).unwrap();
        assert_eq!(sparse, inv);
    }

    #[test]
    fn geometric_series() {
        let g = s(0, &[1, -1], 10).invert().unwrap();
        assert_eq!(g, s(0, &[1; 10], 10));
        assert_eq!(g.invert().unwrap(), s(0, &[1, -1], 10));
    }

    #[test]
    fn invert_shifts_valuation() {
        let x = s(1, &[1, 4, 3], 12);
        let inv = x.invert().unwrap();
        assert_eq!(inv.valuation(), -1);
        assert_eq!(inv.trunc(), 10);
        let prod = x.mul(&inv).unwrap();
        assert_eq!(prod, TruncatedSeries::one(EX, prod.trunc()));
    }

    #[test]
    fn invert_rejects_non_units() {
        assert!(matches!(s(0, &[2, 1], 5).invert(), Err(Error::NotInvertible { .. })));
        let r = CoefficientRing::mod_pow2(8).unwrap();
        let even = TruncatedSeries::from_i64s(r, 0, &[4, 1], 5);
        assert!(even.invert().is_err());
        let odd = TruncatedSeries::from_i64s(r, 0, &[3, 1], 5);
        let prod = odd.mul(&odd.invert().unwrap()).unwrap();
        assert_eq!(prod, TruncatedSeries::one(r, 5));
    }

    #[test]
    fn powers() {
        assert_eq!(s(0, &[1, 1], 5).pow(2).unwrap(), s(0, &[1, 2, 1], 5));
        assert_eq!(s(0, &[1, 1], 5).pow(0).unwrap(), TruncatedSeries::one(EX, 5));
        let e = TruncatedSeries::euler_power(EX, 1, 1, 30).unwrap();
        let c = e.pow(2).unwrap().mul(&e.pow(-2).unwrap()).unwrap();
        assert_eq!(c, TruncatedSeries::one(EX, 30));
        assert_eq!(e.pow(-3).unwrap(), TruncatedSeries::euler_power(EX, 1, -3, 30).unwrap());
    }

    #[test]
    fn mixed_rings_rejected() {
        let a = s(0, &[1], 3);
        let b = TruncatedSeries::from_i64s(CoefficientRing::ModPow2(4), 0, &[1], 3);
        assert!(matches!(a.add(&b), Err(Error::RingMismatch(..))));
        assert!(matches!(a.mul(&b), Err(Error::RingMismatch(..))));
    }

    #[test]
    fn dilate_and_extract() {
        let f = s(1, &[1, 1], 3);
        let d = f.dilate(4).unwrap();
        assert_eq!(d, s(4, &[1, 0, 0, 0, 1, 0, 0, 0], 12));
        assert_eq!(f.dilate(1).unwrap(), f);

        let g = TruncatedSeries::from_i64s(EX, 4, &[1, 3, 0, 0, 7, 0, 0, 0, 1], 13);
        assert_eq!(g.u_ell(4).unwrap(), s(1, &[1, 7, 1], 4));
        assert_eq!(g.u_ell(1).unwrap(), g);
    }

    #[test]
    fn u_ell_truncation_rounds_up() {
        let g = s(0, &[5; 9], 9);
        let u = g.u_ell(4).unwrap();
        assert_eq!(u.trunc(), 3);
        assert_eq!(u.coeff_i64(2), Some(5));
        let neg = s(-5, &[1; 6], 1);
        assert_eq!(neg.u_ell(4).unwrap().valuation(), -1);
    }

    #[test]
    fn modular_reduction_of_negatives() {
        let r = CoefficientRing::ModPow2(3);
        let t = TruncatedSeries::from_i64s(r, 0, &[-1, 9, -16], 3);
        assert_eq!(t.residues().unwrap(), &[7, 1, 0]);
        assert_eq!(t.trunc(), 3);
    }

    #[test]
    fn text_round_trip() {
        let t = s(-2, &[3, 0, -7, 12345678901234], 4);
        assert_eq!(t.to_text(), "-2 4 exact\n3\n0\n-7\n12345678901234\n0\n0\n");
        assert_eq!(TruncatedSeries::from_text(&t.to_text()).unwrap(), t);
        let z = TruncatedSeries::zero(CoefficientRing::ModPow2(17), 5);
        assert_eq!(z.to_text(), "5 5 mod2^17\n");
        assert_eq!(TruncatedSeries::from_text(&z.to_text()).unwrap(), z);
    }

    #[test]
    fn text_rejects_malformed() {
        for bad in [
            "",
            "1 2",
            "1 0 exact",
            "0 2 exact\n1",
            "0 1 exact\n1\n2",
            "0 1 mod2^0\n1",
            "0 1 mod2^65\n1",
            "0 1 exact\nx",
            "0 99999999999999999 exact",
        ] {
            assert!(TruncatedSeries::from_text(bad).is_err(), "{bad:?}");
        }
    }
}
