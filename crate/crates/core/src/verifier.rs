//! End-to-end checks: golden data regeneration, the modular equation, the
//! valuation sweeps, the polynomial iteration `L_alpha -> L_(alpha+1)` and the
//! direct congruence scans. [`run_suite`] runs all of them.

use std::path::PathBuf;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elongated::{
    d_series, derive_modular_equation, eval_x_polynomial, expected_u_degree, l_alpha_series,
    lambda_alpha, reduce_to_x_polynomial, u_of_x_power, verify_modular_equation,
};
use crate::error::{Error, Result};
use crate::golden::GoldenSet;
use crate::report::{from_error, timed, Counterexample, Status, VerificationReport};
use crate::series::CoefficientRing;
use crate::valuation::{
    check_v_membership, theta, verify_lemma31_inequalities, verify_theorem41_inequalities, UXTable,
};
use crate::xpoly::XPolynomial;

/// Degree of `L_1` in `x`.
pub const L1_DEGREE: u32 = 18;

/// Number of q-coefficients compared when a polynomial is checked against its series.
pub const SERIES_CHECK_TERMS: i64 = 25;

/// Equations used when re-deriving the modular equation.
pub const MODEQ_DERIVATION_EQUATIONS: i64 = 100;

/// Highest `n` for which `U(x^n)` from the recurrence is compared with the direct series.
pub const CROSS_CHECK_MAX_N: u32 = 8;

/// Outcome of a direct scan of `d_7(4^alpha n + lambda_alpha)` modulo `8^alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceWitness {
    pub alpha: u32,
    pub lambda: u64,
    /// `8^alpha`.
    pub modulus: u64,
    /// Working precision: residues are taken mod `2^bits`.
    pub bits: u32,
    /// `(m, d_7(m) mod 2^bits)` for every scanned `m`.
    pub checked: Vec<(u64, u64)>,
    pub all_pass: bool,
}

impl CongruenceWitness {
    pub fn first_failure(&self) -> Option<(u64, u64)> {
        self.checked.iter().copied().find(|&(_, r)| r % self.modulus != 0)
    }

    pub fn to_report(&self) -> VerificationReport {
        let mut report = VerificationReport::new(format!("family_alpha{}", self.alpha))
            .param("alpha", self.alpha)
            .param("count", self.checked.len())
            .param("bits", self.bits)
            .with_trunc(self.checked.last().map_or(0, |&(m, _)| m as i64 + 1));
        match self.first_failure() {
            Some((m, r)) => report.fail(Counterexample::new(
                format!("d_7({m}) mod 2^{}", self.bits),
                r,
                format!("0 mod {}", self.modulus),
            )),
            None => report.note(format!(
                "d_7({}^{} n + {}) = 0 mod {} for n < {}",
                4,
                self.alpha,
                self.lambda,
                self.modulus,
                self.checked.len()
            )),
        }
        report
    }
}

/// Scans `d_7(4^alpha n + lambda_alpha)` for `n < count` in mod-`2^(3 alpha + margin_bits)`
/// arithmetic, after confirming that `lambda_alpha` is the only residue with
/// `3m = 1 (mod 4^alpha)`.
pub fn verify_congruence_direct(alpha: u32, count: u64, margin_bits: u32) -> Result<CongruenceWitness> {
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    if margin_bits < 4 {
        return Err(Error::Domain(format!("margin_bits = {margin_bits} is below 4")));
    }
    let lambda = lambda_alpha(alpha)?;
    let bits = 3 * alpha + margin_bits;
    let ring = CoefficientRing::mod_pow2(bits)?;
    let step = 1u64 << (2 * alpha);
    if step <= 1 << 24 {
        if let Some(m) = (0..step).find(|&m| ((3 * m) % step == 1) != (m == lambda)) {
            return Err(Error::Domain(format!("progression mismatch at residue {m} mod {step}")));
        }
    }
    let last = (count - 1)
        .checked_mul(step)
        .and_then(|v| v.checked_add(lambda))
        .filter(|&v| v < i64::MAX as u64)
        .ok_or_else(|| Error::Domain("scan range overflows".into()))?;
    let d = d_series(7, last as i64 + 1, ring)?;
    let checked: Vec<(u64, u64)> = (0..count)
        .map(|n| {
            let m = step * n + lambda;
            debug_assert_eq!((3 * (m as u128)) % step as u128, 1);
            let r = d.coeff(m as i64).expect("within expansion");
            (m, u64::try_from(r).expect("reduced residue"))
        })
        .collect();
    let modulus = 1u64 << (3 * alpha);
    let all_pass = checked.iter().all(|&(_, r)| r % modulus == 0);
    Ok(CongruenceWitness {
        alpha,
        lambda,
        modulus,
        bits,
        checked,
        all_pass,
    })
}

/// First exponent where `found` and `expected` disagree.
pub fn diff_polynomials(found: &XPolynomial, expected: &XPolynomial) -> Option<Counterexample> {
    let mut exps: Vec<u32> = found.terms().chain(expected.terms()).map(|(r, _)| r).collect();
    exps.sort_unstable();
    exps.dedup();
    exps.into_iter().find_map(|r| {
        let (f, e) = (found.coeff(r), expected.coeff(r));
        (f != e).then(|| Counterexample::new(format!("x^{r}"), f, e))
    })
}

/// Recomputes `L_1` from its series definition and compares with the golden copy.
pub fn verify_l1(golden: &GoldenSet, trunc: i64) -> VerificationReport {
    let mut report = VerificationReport::new("l1").param("trunc", trunc).with_trunc(trunc);
    let computed = l_alpha_series(1, trunc, CoefficientRing::Exact)
        .and_then(|f| reduce_to_x_polynomial(&f, L1_DEGREE));
    match computed {
        Err(e) => report.fail(Counterexample::new("reduction", e, "a polynomial of degree <= 18")),
        Ok(p) => match diff_polynomials(&p, golden.l1()) {
            Some(c) => report.fail(c),
            None => report.note(format!("{} coefficients matched", p.len())),
        },
    }
    report
}

/// Recomputes `U(x^n)` for `n = 0..3` and compares with the golden copies,
/// including degree `4n + 20` and leading coefficient `2^(83 + 15n)`.
pub fn verify_appendix(golden: &GoldenSet) -> VerificationReport {
    let mut report = VerificationReport::new("appendix");
    let computed: Vec<_> = (0..4u32).into_par_iter().map(u_of_x_power).collect();
    for (n, result) in computed.into_iter().enumerate() {
        let n32 = n as u32;
        let p = match result {
            Ok(p) => p,
            Err(e) => {
                report.fail(Counterexample::new(format!("U(x^{n})"), e, "a polynomial"));
                continue;
            }
        };
        if let Some(c) = diff_polynomials(&p, golden.ux(n)) {
            report.fail(Counterexample {
                location: format!("ux{n} {}", c.location),
                ..c
            });
        }
        let deg = expected_u_degree(n32);
        if p.degree() != Some(deg) {
            report.fail(Counterexample::new(format!("deg U(x^{n})"), format!("{:?}", p.degree()), deg));
        }
        let lead = BigInt::one() << (83 + 15 * n);
        if p.coeff(deg) != lead {
            report.fail(Counterexample::new(format!("ux{n} x^{deg}"), p.coeff(deg), &lead));
        }
        report.note(format!("U(x^{n}): {} coefficients, degree {deg}", p.len()));
    }
    report
}

/// Checks the modular equation through `q^trunc` and that an exact linear
/// solve from the q-expansions reproduces the golden coefficients.
pub fn verify_modeq(golden: &GoldenSet, trunc: i64) -> VerificationReport {
    let data = golden.modular_equation();
    let mut report = verify_modular_equation(&data, trunc);
    let mut derived = VerificationReport::new("derived");
    match derive_modular_equation(MODEQ_DERIVATION_EQUATIONS) {
        Err(e) => derived.fail(Counterexample::new("solve", e, "unique integral solution")),
        Ok(d) => {
            for j in 0..4 {
                if let Some(c) = diff_polynomials(&d.a[j], &data.a[j]) {
                    derived.fail(Counterexample {
                        location: format!("modeq_a{j} {}", c.location),
                        ..c
                    });
                    break;
                }
            }
        }
    }
    report.absorb(&derived);
    report
}

/// `l1`, `appendix` and the modular-equation derivation as one report.
pub fn regenerate_golden(golden: &GoldenSet, l1_trunc: i64, modeq_trunc: i64) -> VerificationReport {
    let mut report = VerificationReport::new("golden");
    report.absorb(&verify_l1(golden, l1_trunc));
    report.absorb(&verify_appendix(golden));
    report.absorb(&verify_modeq(golden, modeq_trunc));
    report
}

/// `U(x^n)` for `n = 0..3` computed from q-series.
pub fn direct_base_cases() -> Result<[XPolynomial; 4]> {
    let polys = (0..4u32).into_par_iter().map(u_of_x_power).collect::<Result<Vec<_>>>()?;
    Ok(polys.try_into().expect("four base cases"))
}

/// Builds the table from directly computed base cases, compares the
/// recurrence with the direct series for `4 <= n <= cross_check_max`, checks
/// the degree pattern and sweeps the inequalities of the induction step.
pub fn verify_lemma31(
    golden: &GoldenSet,
    n_max: u32,
    r_max: i64,
    cross_check_max: u32,
) -> (VerificationReport, Option<UXTable>) {
    let mut report = VerificationReport::new("lemma31")
        .param("n_max", n_max)
        .param("r_max", r_max);
    let table = direct_base_cases().and_then(|base| UXTable::build(&base, &golden.modular_equation(), n_max));
    let table = match table {
        Ok(t) => t,
        Err(e) => {
            report.fail(Counterexample::new("table", e, "integral h(n, r)"));
            return (report, None);
        }
    };
    report.note(format!("h(n, r) integral for 0 <= n <= {n_max}"));
    let upper = cross_check_max.min(n_max);
    let direct: Vec<_> = (4..=upper).into_par_iter().map(|n| (n, u_of_x_power(n))).collect();
    for (n, d) in direct {
        let rec = table.get(n).expect("n <= n_max");
        match d {
            Err(e) => report.fail(Counterexample::new(format!("direct U(x^{n})"), e, "a polynomial")),
            Ok(d) => {
                if let Some(c) = diff_polynomials(rec, &d) {
                    report.fail(Counterexample {
                        location: format!("U(x^{n}) recurrence vs series {}", c.location),
                        ..c
                    });
                }
            }
        }
    }
    if upper >= 4 {
        report.note(format!("recurrence equals direct series for 4 <= n <= {upper}"));
    }
    for n in 0..=n_max {
        let deg = table.get(n).and_then(XPolynomial::degree);
        if deg != Some(expected_u_degree(n)) {
            report.fail(Counterexample::new(format!("deg U(x^{n})"), format!("{deg:?}"), expected_u_degree(n)));
            break;
        }
    }
    report.absorb(&verify_lemma31_inequalities(n_max.max(4), r_max));
    (report, Some(table))
}

/// Draws `samples` random elements of `V` of degree at most `max_deg`, applies
/// `U` through the table and checks that each image lies in `8 V`.
pub fn verify_vspace(table: &UXTable, samples: u32, max_deg: u32, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("vspace")
        .param("samples", samples)
        .param("max_deg", max_deg)
        .param("seed", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let mut p = XPolynomial::new();
        for n in 1..=max_deg {
            let s: i64 = rng.gen_range(-1000..=1000);
            p.add_term(n, &(BigInt::from(s) << theta(n as i64) as u64));
        }
        let image = match table.apply(&p) {
            Ok(q) => q,
            Err(e) => {
                report.fail(Counterexample::new(format!("sample {i}"), e, "U(p) in the table range"));
                return report;
            }
        };
        let member = check_v_membership(&image, 3);
        if let Some(c) = member.counterexample {
            report.fail(Counterexample {
                location: format!("sample {i} U(p) {}", c.location),
                ..c
            });
            return report;
        }
    }
    report.note(format!("{samples} images lie in 8V"));
    report
}

/// Iterates `L_(alpha+1) = U(L_alpha)` in x-polynomial space from `l1`,
/// checking divisibility by `8^alpha`, membership of `L_alpha / 8^alpha` in
/// `V` and the degree pattern; for `2 <= alpha <= series_check_max_alpha` the
/// polynomial is also evaluated and compared with the series definition.
pub fn verify_theorem_main(
    l1: &XPolynomial,
    table: &UXTable,
    alpha_max: u32,
    series_check_max_alpha: u32,
) -> VerificationReport {
    let mut report = VerificationReport::new("main")
        .param("alpha_max", alpha_max)
        .param("series_check_max_alpha", series_check_max_alpha);
    if alpha_max < 1 {
        report.fail(Counterexample::new("alpha_max", alpha_max, ">= 1"));
        return report;
    }
    let mut l = l1.clone();
    for alpha in 1..=alpha_max {
        let modulus = BigInt::one() << (3 * alpha as u64);
        let reduced = match l.exact_div(&modulus) {
            Ok(r) => r,
            Err(r) => {
                report.fail(Counterexample::new(
                    format!("L_{alpha} x^{r}"),
                    l.coeff(r),
                    format!("0 mod {modulus}"),
                ));
                return report;
            }
        };
        if let Some(c) = check_v_membership(&reduced, 0).counterexample {
            report.fail(Counterexample {
                location: format!("L_{alpha}/8^{alpha} {}", c.location),
                ..c
            });
            return report;
        }
        let deg = l.degree().unwrap_or(0);
        report.note(format!("L_{alpha}: degree {deg}, divisible by 8^{alpha}, quotient in V"));
        if (2..=series_check_max_alpha).contains(&alpha) {
            let trunc = SERIES_CHECK_TERMS + 1;
            let cmp = eval_x_polynomial(&l, trunc)
                .and_then(|p| Ok((p, l_alpha_series(alpha, trunc, CoefficientRing::Exact)?)));
            match cmp {
                Err(e) => report.fail(Counterexample::new(format!("L_{alpha} series"), e, "no error")),
                Ok((p, s)) => {
                    if let Some(e) = (0..trunc).find(|&e| p.coeff(e) != s.coeff(e)) {
                        report.fail(Counterexample::new(
                            format!("L_{alpha} q^{e}"),
                            p.coeff(e).unwrap_or_default(),
                            s.coeff(e).unwrap_or_default(),
                        ));
                        return report;
                    }
                    report.note(format!("L_{alpha} matches its series through q^{}", trunc - 1));
                }
            }
        }
        if alpha == alpha_max {
            break;
        }
        let next = match table.apply(&l) {
            Ok(n) => n,
            Err(e) => {
                report.fail(Counterexample::new(format!("U(L_{alpha})"), e, "table covers the degree"));
                return report;
            }
        };
        let expected = expected_u_degree(deg);
        if next.degree() != Some(expected) {
            report.fail(Counterexample::new(
                format!("deg L_{}", alpha + 1),
                format!("{:?}", next.degree()),
                expected,
            ));
            return report;
        }
        l = next;
    }
    report
}

/// One direct scan: `count` values of `n` at level `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyScan {
    pub alpha: u32,
    pub count: u64,
}

/// Parameters for [`run_suite`]. Every field has a default, so an empty
/// TOML document is a valid configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Modular equation checked through `q^trunc`.
    pub trunc: i64,
    pub l1_trunc: i64,
    pub n_max: u32,
    pub r_max: i64,
    pub alpha_max: u32,
    pub series_check_max_alpha: u32,
    pub family: Vec<FamilyScan>,
    pub margin_bits: u32,
    pub vspace_samples: u32,
    pub vspace_degree: u32,
    pub seed: u64,
    pub threads: Option<usize>,
    pub golden_dir: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trunc: 200,
            l1_trunc: 40,
            n_max: 200,
            r_max: 250,
            alpha_max: 3,
            series_check_max_alpha: 2,
            family: vec![
                FamilyScan { alpha: 1, count: 500 },
                FamilyScan { alpha: 2, count: 200 },
                FamilyScan { alpha: 3, count: 100 },
            ],
            margin_bits: 8,
            vspace_samples: 40,
            vspace_degree: 40,
            seed: 0x5eed,
            threads: None,
            golden_dir: None,
        }
    }
}

impl SuiteConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: SuiteConfig = toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map_or(0, |s| text[..s.start].lines().count().max(1)),
            msg: e.message().to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Domain(format!("config: {what}")));
        if self.trunc < 50 {
            return bad("trunc must be at least 50");
        }
        if self.l1_trunc <= L1_DEGREE as i64 {
            return bad("l1_trunc must exceed 18");
        }
        if self.n_max < 4 {
            return bad("n_max must be at least 4");
        }
        if self.r_max < 1 {
            return bad("r_max must be positive");
        }
        if self.alpha_max < 1 {
            return bad("alpha_max must be positive");
        }
        if self.threads == Some(0) {
            return bad("threads must be positive");
        }
        if self.vspace_degree > self.n_max {
            return bad("vspace_degree exceeds n_max");
        }
        Ok(())
    }

    pub fn golden(&self) -> Result<GoldenSet> {
        match &self.golden_dir {
            Some(dir) => GoldenSet::load_dir(dir),
            None => Ok(GoldenSet::embedded()),
        }
    }
}

/// Reports of a suite run, sorted by check name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn is_pass(&self) -> bool {
        self.reports.iter().all(VerificationReport::is_pass)
    }

    pub fn get(&self, name: &str) -> Option<&VerificationReport> {
        self.reports.iter().find(|r| r.name == name)
    }

    /// A closing record naming the failed checks.
    pub fn summary(&self) -> VerificationReport {
        let failed: Vec<&str> = self
            .reports
            .iter()
            .filter(|r| !r.is_pass())
            .map(|r| r.name.as_str())
            .collect();
        let mut s = VerificationReport::new("suite")
            .param("checks", self.reports.len())
            .param("failed", failed.len());
        if !failed.is_empty() {
            s.fail(Counterexample::new("checks", failed.join(","), "all pass"));
        }
        s
    }

    /// One JSON object per line, checks first, then the summary.
    pub fn to_json_lines(&self, include_timing: bool) -> String {
        let mut out = String::new();
        for r in self.reports.iter().chain(std::iter::once(&self.summary())) {
            out.push_str(&r.to_json_line(include_timing));
            out.push('\n');
        }
        out
    }
}

/// Checks [`run_suite`] knows by name.
pub const SUITE_CHECKS: [&str; 8] = [
    "appendix", "family", "l1", "lemma31", "main", "modeq", "theorem41", "vspace",
];

/// Shared state for checks that need the `U(x^n)` table.
struct Bench<'a> {
    config: &'a SuiteConfig,
    golden: &'a GoldenSet,
    table: OnceLock<Result<UXTable>>,
}

impl Bench<'_> {
    fn table(&self) -> &Result<UXTable> {
        self.table.get_or_init(|| {
            direct_base_cases()
                .and_then(|base| UXTable::build(&base, &self.golden.modular_equation(), self.config.n_max))
        })
    }

    fn with_table(&self, name: &str, f: impl FnOnce(&UXTable) -> VerificationReport) -> VerificationReport {
        match self.table() {
            Ok(t) => f(t),
            Err(e) => from_error(name, e),
        }
    }

    fn run(&self, check: &str) -> Vec<VerificationReport> {
        let c = self.config;
        match check {
            "appendix" => vec![timed(|| verify_appendix(self.golden))],
            "l1" => vec![timed(|| verify_l1(self.golden, c.l1_trunc))],
            "modeq" => vec![timed(|| verify_modeq(self.golden, c.trunc))],
            "lemma31" => vec![timed(|| verify_lemma31(self.golden, c.n_max, c.r_max, CROSS_CHECK_MAX_N).0)],
            "theorem41" => vec![timed(|| verify_theorem41_inequalities(c.n_max, c.r_max))],
            "vspace" => vec![timed(|| {
                self.with_table("vspace", |t| verify_vspace(t, c.vspace_samples, c.vspace_degree, c.seed))
            })],
            "main" => vec![timed(|| {
                self.with_table("main", |t| {
                    verify_theorem_main(self.golden.l1(), t, c.alpha_max, c.series_check_max_alpha)
                })
            })],
            "family" => c
                .family
                .iter()
                .map(|s| {
                    timed(|| match verify_congruence_direct(s.alpha, s.count, c.margin_bits) {
                        Ok(w) => w.to_report(),
                        Err(e) => from_error(&format!("family_alpha{}", s.alpha), &e),
                    })
                })
                .collect(),
            other => vec![from_error(other, &Error::Domain(format!("unknown check {other}")))],
        }
    }
}

/// Runs the named checks (all of [`SUITE_CHECKS`] when `checks` is empty) on
/// a pool of `config.threads` workers. Report order does not depend on the
/// thread count.
pub fn run_suite(config: &SuiteConfig, checks: &[&str]) -> Result<SuiteReport> {
    config.validate()?;
    let golden = config.golden()?;
    let names: Vec<&str> = if checks.is_empty() { SUITE_CHECKS.to_vec() } else { checks.to_vec() };
    let bench = Bench {
        config,
        golden: &golden,
        table: OnceLock::new(),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = config.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    let mut reports: Vec<VerificationReport> =
        pool.install(|| names.par_iter().flat_map_iter(|name| bench.run(name)).collect());
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(SuiteReport { reports })
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn congruence_alpha1() {
        let w = verify_congruence_direct(1, 20, 8).unwrap();
        assert!(w.all_pass);
        assert_eq!(w.checked[0], (3, 2376 % 2048));
        assert!(w.checked.iter().all(|&(m, _)| (3 * m) % 4 == 1));
        assert!(!w.checked.iter().any(|&(m, _)| m == 1));
        assert!(verify_congruence_direct(1, 0, 8).is_err());
        assert!(verify_congruence_direct(1, 5, 3).is_err());
    }

    #[test]
    fn congruence_alpha2_first_term() {
        let w = verify_congruence_direct(2, 3, 8).unwrap();
        assert_eq!(w.checked[0].0, 11);
        assert_eq!(w.checked[0].1 % 64, 0);
        assert!(w.all_pass);
    }

    #[test]
    fn witness_report_locates_failure() {
        let mut w = verify_congruence_direct(1, 4, 8).unwrap();
        w.checked[2].1 ^= 1;
        let r = w.to_report();
        assert!(!r.is_pass());
        assert!(r.counterexample.unwrap().location.starts_with(&format!("d_7({})", w.checked[2].0)));
    }

    #[test]
    fn l1_matches_and_detects_perturbation() {
        let mut g = GoldenSet::embedded();
        assert!(verify_l1(&g, 40).is_pass());
        let mut l1 = g.l1().clone();
        l1.add_term(5, &BigInt::one());
        g.set("l1", l1);
        let r = verify_l1(&g, 40);
        assert_eq!(r.counterexample.unwrap().location, "x^5");
    }

    #[test]
    fn diff_reports_missing_terms() {
        let a = XPolynomial::from_terms([(1, 2), (3, 4)]);
        let b = XPolynomial::from_terms([(1, 2)]);
        assert_eq!(diff_polynomials(&a, &b).unwrap().location, "x^3");
        assert!(diff_polynomials(&a, &a).is_none());
    }

    #[test]
    fn main_iteration_small() {
        let g = GoldenSet::embedded();
        let table = UXTable::build(&g.ux_base(), &g.modular_equation(), 20).unwrap();
        let r = verify_theorem_main(g.l1(), &table, 2, 2);
        assert!(r.is_pass(), "{r}");
        // L_2 has degree 92, beyond this table.
        assert!(!verify_theorem_main(g.l1(), &table, 3, 0).is_pass());
    }

    #[test]
    fn vspace_small() {
        let g = GoldenSet::embedded();
        let table = UXTable::build(&g.ux_base(), &g.modular_equation(), 12).unwrap();
        assert!(verify_vspace(&table, 5, 12, 1).is_pass());
    }

    #[test]
    fn config_defaults_and_errors() {
        let c = SuiteConfig::from_toml_str("").unwrap();
        assert_eq!(c, SuiteConfig::default());
        assert_eq!((c.trunc, c.n_max, c.alpha_max), (200, 200, 3));
        let c = SuiteConfig::from_toml_str("n_max = 30\nvspace_degree = 20\n[[family]]\nalpha = 1\ncount = 3\n").unwrap();
        assert_eq!(c.family, vec![FamilyScan { alpha: 1, count: 3 }]);
        assert!(SuiteConfig::from_toml_str("bogus = 1").is_err());
        assert!(SuiteConfig::from_toml_str("n_max = 2").is_err());
        assert!(SuiteConfig::from_toml_str("n_max = ").is_err());
    }

    #[test]
    fn small_suite_is_ordered() {
        let config = SuiteConfig {
            family: vec![FamilyScan { alpha: 2, count: 4 }, FamilyScan { alpha: 1, count: 4 }],
            threads: Some(2),
            ..SuiteConfig::default()
        };
        let s = run_suite(&config, &["family", "theorem41"]).unwrap();
        let names: Vec<_> = s.reports.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["family_alpha1", "family_alpha2", "theorem41"]);
        assert!(s.is_pass());
        assert!(s.summary().is_pass());
        assert!(!run_suite(&config, &["nope"]).unwrap().is_pass());
    }
}
