//! 2-adic bookkeeping for `U(x^n)`.
//!
//! `pi(n, r)` bounds `v2` of the coefficient of `x^r` in `U(x^n)`, `theta(n)`
//! shapes the space `V = { sum s(n) 2^theta(n) x^n }`, and `phi(j, k)` bounds
//! `v2` of the coefficient of `x^k` in `a_j`. The [`UXTable`] carries
//! `U(x^n)` for `n <= n_max`, built from the four base cases with the
//! recurrence `U(x^n) = -sum_j a_j U(x^(n+j-4))`, and certifies that every
//! `h(n, r) = coefficient / 2^pi(n, r)` is an integer.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::elongated::ModularEquationData;
use crate::error::{Error, Result};
use crate::report::{Counterexample, VerificationReport};
use crate::xpoly::{v2, XPolynomial};

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// `floor((4r - n - 1) / 2)`, the `n >= 3` branch of `pi`, as a bare formula.
pub fn pi_generic(n: i64, r: i64) -> i64 {
    floor_div(4 * r - n - 1, 2)
}

/// Lower bound for `v2` of the coefficient of `x^r` in `U(x^n)`. The `n = 0`
/// case uses the `n >= 3` formula.
pub fn pi(n: u32, r: i64) -> i64 {
    match n {
        1 => floor_div(8 * r - 5, 4) + 3,
        2 => floor_div(8 * r - 5, 4) + 1,
        _ => pi_generic(n as i64, r),
    }
}

/// `floor((8n - 5) / 4)`.
pub fn theta(n: i64) -> i64 {
    floor_div(8 * n - 5, 4)
}

/// Lower bound for `v2` of the coefficient of `x^k` in `a_j`.
pub fn phi(j: u32, k: u32) -> Result<i64> {
    if j > 3 || !(1..=4).contains(&k) {
        return Err(Error::Domain(format!("phi({j},{k}) needs 0 <= j <= 3, 1 <= k <= 4")));
    }
    Ok(match (j, k) {
        (0, 1) => 0,
        (0, 2) => 2,
        (0, 3) => 7,
        (0, 4) => 8,
        _ => floor_div(4 * k as i64 + 2 * j as i64 + 1, 2),
    })
}

/// `ceil((n + 1) / 4)`: the lowest power of `x` that can occur in `U(x^n)`.
pub fn support_start(n: u32) -> u32 {
    (n + 1).div_ceil(4)
}

/// `a(j, k)` with `a_j = sum_k a(j, k) 2^phi(j, k) x^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AJKTable {
    entries: [[BigInt; 4]; 4],
}

impl AJKTable {
    pub fn get(&self, j: usize, k: usize) -> &BigInt {
        &self.entries[j][k - 1]
    }
}

/// Divides each coefficient of `a_j` by `2^phi(j, k)`; every division must be exact.
pub fn derive_ajk(data: &ModularEquationData) -> Result<AJKTable> {
    let mut entries: [[BigInt; 4]; 4] = Default::default();
    for (j, aj) in data.a.iter().enumerate() {
        if let Some((r, c)) = aj.terms().find(|(r, _)| !(1..=4).contains(r)) {
            return Err(Error::Domain(format!("a_{j} has a term {c} x^{r} outside x^1..x^4")));
        }
        for k in 1..=4u32 {
            let bits = phi(j as u32, k)? as u64;
            let c = aj.coeff(k);
            if !c.is_zero() && v2(&c).unwrap_or(u64::MAX) < bits {
                return Err(Error::InexactDivision {
                    location: format!("a({j},{k})"),
                    numerator: c.to_string(),
                    bits,
                });
            }
            entries[j][k as usize - 1] = c >> bits;
        }
    }
    Ok(AJKTable { entries })
}

/// `U(x^n)` for `0 <= n <= n_max`, with the integral quotients `h(n, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UXTable {
    polys: Vec<XPolynomial>,
    h: Vec<BTreeMap<u32, BigInt>>,
}

impl UXTable {
    /// Runs the recurrence from the base cases `U(x^0) .. U(x^3)` up to
    /// `n_max`. Stops at the first polynomial that breaks the support or
    /// valuation bound.
    pub fn build(base: &[XPolynomial; 4], data: &ModularEquationData, n_max: u32) -> Result<Self> {
        let mut table = UXTable {
            polys: Vec::new(),
            h: Vec::new(),
        };
        for n in 0..=n_max {
            let p = if n < 4 {
                base[n as usize].clone()
            } else {
                let mut acc = XPolynomial::new();
                for (j, aj) in data.a.iter().enumerate() {
                    let prev = &table.polys[n as usize + j - 4];
                    acc = acc.sub(&aj.mul(prev));
                }
                acc
            };
            table.push(n, p)?;
        }
        Ok(table)
    }

    /// Wraps precomputed polynomials (e.g. read back from files), checking
    /// each one.
    pub fn from_polynomials(polys: Vec<XPolynomial>) -> Result<Self> {
        let mut table = UXTable {
            polys: Vec::new(),
            h: Vec::new(),
        };
        for (n, p) in polys.into_iter().enumerate() {
            table.push(n as u32, p)?;
        }
        Ok(table)
    }

    fn push(&mut self, n: u32, p: XPolynomial) -> Result<()> {
        let h = certify(n, &p)?;
        self.polys.push(p);
        self.h.push(h);
        Ok(())
    }

    /// Largest `n` in the table; `None` when empty.
    pub fn n_max(&self) -> Option<u32> {
        self.polys.len().checked_sub(1).map(|n| n as u32)
    }

    pub fn get(&self, n: u32) -> Option<&XPolynomial> {
        self.polys.get(n as usize)
    }

    pub fn h(&self, n: u32, r: u32) -> Option<&BigInt> {
        self.h.get(n as usize)?.get(&r)
    }

    /// Linear extension of `U` to `sum c_n x^n`.
    pub fn apply(&self, p: &XPolynomial) -> Result<XPolynomial> {
        let mut out = XPolynomial::new();
        for (n, c) in p.terms() {
            let u = self.get(n).ok_or_else(|| {
                Error::Domain(format!("U(x^{n}) is beyond the table (n_max = {:?})", self.n_max()))
            })?;
            out = out.add(&u.scale(c));
        }
        Ok(out)
    }

    /// Writes `ux{n}.txt` for every `n` in golden-file format.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        let io = |path: &Path, e: std::io::Error| Error::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        };
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        for (n, p) in self.polys.iter().enumerate() {
            let path = dir.join(format!("ux{n}.txt"));
            fs::write(&path, p.to_golden_text()).map_err(|e| io(&path, e))?;
        }
        Ok(())
    }

    /// Reads `ux0.txt ..= ux{n_max}.txt` and certifies them.
    pub fn read_dir(dir: &Path, n_max: u32) -> Result<Self> {
        let mut polys = Vec::new();
        for n in 0..=n_max {
            let path = dir.join(format!("ux{n}.txt"));
            let text = fs::read_to_string(&path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?;
            polys.push(XPolynomial::from_golden_text(&text)?);
        }
        Self::from_polynomials(polys)
    }
}

/// Checks the support and divisibility claims for `U(x^n)` and returns `h(n, .)`.
fn certify(n: u32, p: &XPolynomial) -> Result<BTreeMap<u32, BigInt>> {
    let start = support_start(n);
    let mut h = BTreeMap::new();
    for (r, c) in p.terms() {
        if r < start {
            return Err(Error::SupportViolation { n, r, bound: start });
        }
        let bound = pi(n, r as i64);
        let q = if bound <= 0 {
            c << (-bound) as u64
        } else {
            if v2(c).unwrap_or(u64::MAX) < bound as u64 {
                return Err(Error::ValuationViolation {
                    n,
                    r,
                    bound,
                    coefficient: c.to_string(),
                });
            }
            c >> bound as u64
        };
        h.insert(r, q);
    }
    Ok(h)
}

/// Pass iff `v2(c_n) >= theta(n) + extra_pow2` for every term; a constant
/// term fails.
pub fn check_v_membership(p: &XPolynomial, extra_pow2: u32) -> VerificationReport {
    let mut report = VerificationReport::new("vspace_membership").param("extra_pow2", extra_pow2);
    for (n, c) in p.terms() {
        if n == 0 {
            report.fail(Counterexample::new("x^0", c, "no constant term"));
            break;
        }
        let need = theta(n as i64) + extra_pow2 as i64;
        if let Some(v) = v2(c) {
            if (v as i64) < need {
                report.fail(Counterexample::new(format!("x^{n}"), format!("v2 = {v}"), format!("v2 >= {need}")));
                break;
            }
        }
    }
    report
}

struct Sweep {
    checked: u64,
    first: Option<Counterexample>,
}

fn merge(parts: Vec<Sweep>) -> Sweep {
    Sweep {
        checked: parts.iter().map(|s| s.checked).sum(),
        first: parts.into_iter().find_map(|s| s.first),
    }
}

fn lemma31_for_n(n: u32, r_max: i64) -> Sweep {
    let mut s = Sweep {
        checked: 0,
        first: None,
    };
    let ni = n as i64;
    for r in support_start(n) as i64..=r_max {
        for j in 0..=3u32 {
            let m = n + j - 4;
            for k in 1..=4u32 {
                if r - (k as i64) < support_start(m) as i64 {
                    continue;
                }
                s.checked += 1;
                let lhs = pi(m, r - k as i64) + phi(j, k).expect("in domain");
                let rhs = pi(n, r);
                if lhs < rhs && s.first.is_none() {
                    s.first = Some(Counterexample::new(
                        format!("(n,r,j,k)=({n},{r},{j},{k})"),
                        lhs,
                        format!(">= {rhs}"),
                    ));
                }
            }
        }
        // The four displayed j = 0 chains, with phi(0, k).
        let g = |a: i64, b: i64| pi_generic(a, b);
        let target = g(ni, r);
        let chains = [
            (1, g(ni - 4, r - 1), target, true),
            (2, floor_div(4 * r - ni - 5, 2), target, true),
            (3, floor_div(4 * r - ni - 9, 2), floor_div(4 * r - ni + 5, 2), false),
            (4, floor_div(4 * r - ni - 13, 2), floor_div(4 * r - ni + 3, 2), false),
        ];
        for (k, displayed_pi, displayed_total, equality) in chains {
            let shifted = displayed_pi + phi(0, k).expect("in domain");
            s.checked += 1;
            let ok = g(ni - 4, r - k as i64) == displayed_pi
                && shifted == displayed_total
                && if equality { displayed_total == target } else { displayed_total >= target };
            if !ok && s.first.is_none() {
                s.first = Some(Counterexample::new(
                    format!("j=0 chain k={k} at (n,r)=({n},{r})"),
                    shifted,
                    if equality { format!("= {target}") } else { format!(">= {target}") },
                ));
            }
        }
        // The closed form for 1 <= j <= 3.
        for j in 1..=3i64 {
            for k in 1..=4i64 {
                s.checked += 1;
                let lhs = g(ni + j - 4, r - k) + phi(j as u32, k as u32).expect("in domain");
                let displayed = floor_div(4 * r - 4 * k - ni - j + 3, 2) + floor_div(4 * k + 2 * j + 1, 2);
                let bound = floor_div(4 * r - ni + j + 3, 2);
                let ok = lhs == displayed && displayed >= bound && bound >= target;
                if !ok && s.first.is_none() {
                    s.first = Some(Counterexample::new(
                        format!("j>=1 chain (n,r,j,k)=({n},{r},{j},{k})"),
                        displayed,
                        format!(">= {bound} >= {target}"),
                    ));
                }
            }
        }
    }
    s
}

/// Exhaustive check of `pi(n+j-4, r-k) + phi(j, k) >= pi(n, r)` over
/// `4 <= n <= n_max`, `ceil((n+1)/4) <= r <= r_max`, together with the
/// displayed floor identities behind it.
pub fn verify_lemma31_inequalities(n_max: u32, r_max: i64) -> VerificationReport {
    let mut report = VerificationReport::new("lemma31_inequalities")
        .param("n_max", n_max)
        .param("r_max", r_max);
    if n_max < 4 {
        report.fail(Counterexample::new("n_max", n_max, ">= 4"));
        return report;
    }
    let parts: Vec<Sweep> = (4..=n_max).into_par_iter().map(|n| lemma31_for_n(n, r_max)).collect();
    let sweep = merge(parts);
    report.note(format!("{} inequalities and identities checked", sweep.checked));
    if let Some(c) = sweep.first {
        report.fail(c);
    }
    report
}

fn theorem41_for_n(n: u32, r_max: i64) -> Sweep {
    let mut s = Sweep {
        checked: 0,
        first: None,
    };
    for r in support_start(n) as i64..=r_max {
        s.checked += 1;
        let lhs = pi(n, r) + theta(n as i64);
        let rhs = theta(r) + 3;
        let ok = if n <= 2 { lhs == rhs } else { lhs >= rhs };
        if !ok && s.first.is_none() {
            s.first = Some(Counterexample::new(
                format!("(n,r)=({n},{r})"),
                lhs,
                if n <= 2 { format!("= {rhs}") } else { format!(">= {rhs}") },
            ));
        }
    }
    s
}

/// Exhaustive check of `pi(n, r) + theta(n) >= theta(r) + 3` over
/// `1 <= n <= n_max`, `ceil((n+1)/4) <= r <= r_max`, with equality for `n = 1, 2`.
pub fn verify_theorem41_inequalities(n_max: u32, r_max: i64) -> VerificationReport {
    let mut report = VerificationReport::new("theorem41")
        .param("n_max", n_max)
        .param("r_max", r_max);
    if n_max < 3 {
        report.fail(Counterexample::new("n_max", n_max, ">= 3"));
        return report;
    }
    let parts: Vec<Sweep> = (1..=n_max).into_par_iter().map(|n| theorem41_for_n(n, r_max)).collect();
    let sweep = merge(parts);
    report.note(format!("{} inequalities checked", sweep.checked));
    if let Some(c) = sweep.first {
        report.fail(c);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::GoldenSet;

    #[test]
    fn pi_values() {
        assert_eq!(pi(1, 1), 3);
        assert_eq!(pi(2, 1), 1);
        assert_eq!(pi(3, 1), 0);
        assert_eq!(pi(0, 1), 1);
        assert_eq!(pi(4, 2), 1);
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(1), 0);
        assert_eq!(theta(2), 2);
        assert_eq!(theta(3), 4);
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(0, 3).unwrap(), 7);
        assert_eq!(phi(1, 1).unwrap(), 3);
        assert_eq!(phi(3, 4).unwrap(), 11);
        let row0: Vec<i64> = (1..=4).map(|k| phi(0, k).unwrap()).collect();
        assert_eq!(row0, [0, 2, 7, 8]);
        assert!(phi(4, 1).is_err());
        assert!(phi(0, 0).is_err());
        assert!(phi(0, 5).is_err());
    }

    #[test]
    fn branch_consistency() {
        for r in 1..300 {
            assert_eq!(pi(1, r), theta(r) + 3);
            assert_eq!(pi(2, r), theta(r) + 1);
        }
    }

    #[test]
    fn ajk_table() {
        let t = derive_ajk(&GoldenSet::embedded().modular_equation()).unwrap();
        assert_eq!(t.get(0, 1), &BigInt::from(-1));
        assert_eq!(t.get(0, 2), &BigInt::from(-5));
        assert_eq!(t.get(1, 1), &BigInt::from(-2));
        assert_eq!(t.get(3, 4), &BigInt::from(-16));
    }

    #[test]
    fn ajk_rejects_inexact() {
        let mut data = GoldenSet::embedded().modular_equation();
        data.a[2].add_term(3, &BigInt::from(1));
        assert!(matches!(derive_ajk(&data), Err(Error::InexactDivision { .. })));
    }

    #[test]
    fn small_table() {
        let g = GoldenSet::embedded();
        let t = UXTable::build(&g.ux_base(), &g.modular_equation(), 12).unwrap();
        assert_eq!(t.h(1, 1), Some(&BigInt::from(60)));
        assert_eq!(t.get(5).unwrap().low_degree(), Some(2));
        for n in 0..=12 {
            assert_eq!(t.get(n).unwrap().degree(), Some(4 * n + 20));
        }
    }

    #[test]
    fn table_rejects_bad_valuation() {
        let g = GoldenSet::embedded();
        let mut base = g.ux_base();
        base[1].add_term(2, &BigInt::from(1));
        assert!(matches!(
            UXTable::build(&base, &g.modular_equation(), 6),
            Err(Error::ValuationViolation { n: 1, r: 2, .. })
        ));
        let mut base = g.ux_base();
        base[3].add_term(0, &BigInt::from(1024));
        assert!(matches!(
            UXTable::build(&base, &g.modular_equation(), 6),
            Err(Error::SupportViolation { n: 3, r: 0, .. })
        ));
    }

    #[test]
    fn table_file_round_trip() {
        let g = GoldenSet::embedded();
        let t = UXTable::build(&g.ux_base(), &g.modular_equation(), 6).unwrap();
        let dir = tempfile::tempdir().unwrap();
        t.write_dir(dir.path()).unwrap();
        assert_eq!(UXTable::read_dir(dir.path(), 6).unwrap(), t);
    }

    #[test]
    fn lemma31_spot_values() {
        // (n,r,j,k) = (4,2,0,1)
        assert_eq!(pi(0, 1) + phi(0, 1).unwrap(), 1);
        assert!(pi(0, 1) + phi(0, 1).unwrap() >= pi(4, 2));
    }

    #[test]
    fn literal_phi_one_reading_breaks_the_equalities() {
        // With phi(1, k) the first two j = 0 lines overshoot by 3 resp. 3.
        for n in 4..40i64 {
            for r in 2..40 {
                assert_ne!(pi_generic(n - 4, r - 1) + phi(1, 1).unwrap(), pi_generic(n, r));
                assert_ne!(pi_generic(n - 4, r - 2) + phi(1, 2).unwrap(), pi_generic(n, r));
                assert_eq!(pi_generic(n - 4, r - 1) + phi(0, 1).unwrap(), pi_generic(n, r));
                assert_eq!(pi_generic(n - 4, r - 2) + phi(0, 2).unwrap(), pi_generic(n, r));
            }
        }
    }

    #[test]
    fn sweeps_pass() {
        assert!(verify_lemma31_inequalities(60, 80).is_pass());
        assert!(verify_theorem41_inequalities(60, 80).is_pass());
        assert!(!verify_lemma31_inequalities(3, 10).is_pass());
    }

    #[test]
    fn theorem41_spot_values() {
        assert_eq!(pi(3, 1) + theta(3), 4);
        assert!(pi(3, 1) + theta(3) >= theta(1) + 3);
    }

    #[test]
    fn membership() {
        let g = GoldenSet::embedded();
        assert!(check_v_membership(g.l1(), 3).is_pass());
        assert!(!check_v_membership(g.l1(), 4).is_pass());
        assert!(check_v_membership(&XPolynomial::monomial(1), 0).is_pass());
        let r = check_v_membership(&XPolynomial::from_terms([(2, 2)]), 0);
        assert_eq!(r.counterexample.unwrap().location, "x^2");
        assert!(!check_v_membership(&XPolynomial::from_terms([(0, 64)]), 0).is_pass());
    }
}
