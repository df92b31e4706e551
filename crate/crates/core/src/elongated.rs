//! The objects specific to the powers-of-8 family: `D_k`, `L_alpha`, the
//! operator `U(f) = U_4(A f)`, polynomials in the Hauptmodul `x`, and the
//! modular equation relating `x(tau)` and `x(4 tau)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::eta::{expand_eta_quotient_in, EtaQuotientSpec};
use crate::linalg::solve_unique;
use crate::report::{Counterexample, VerificationReport};
use crate::series::{div_ceil, CoefficientRing, TruncatedSeries};
use crate::xpoly::XPolynomial;

const EXACT: CoefficientRing = CoefficientRing::Exact;

/// Dense expansions longer than this are refused rather than attempted.
pub const MAX_EXPANSION_TERMS: i64 = 1 << 26;

/// Coefficients beyond the expected degree that must vanish before a
/// series is accepted as a polynomial in `x`.
pub const REDUCTION_CHECK_TERMS: i64 = 10;

/// `D_k(q) = sum d_k(n) q^n` through `q^(trunc - 1)`.
pub fn d_series(k: u32, trunc: i64, ring: CoefficientRing) -> Result<TruncatedSeries> {
    if trunc < 1 {
        return Err(Error::InsufficientTrunc {
            trunc,
            reason: "D_k needs trunc >= 1".into(),
        });
    }
    if trunc > MAX_EXPANSION_TERMS {
        return Err(Error::InsufficientTrunc {
            trunc,
            reason: format!("more than {MAX_EXPANSION_TERMS} terms requested"),
        });
    }
    expand_eta_quotient_in(&EtaQuotientSpec::d_k(k), trunc, ring)
}

/// The least positive solution of `3y = 1 (mod 4^alpha)`, i.e. `(2 * 4^alpha + 1) / 3`.
pub fn lambda_alpha(alpha: u32) -> Result<u64> {
    if alpha == 0 || alpha > 31 {
        return Err(Error::Domain(format!("alpha = {alpha} outside 1..=31")));
    }
    let m = 1u128 << (2 * alpha);
    let lambda = (2 * m + 1) / 3;
    debug_assert!((3 * lambda) % m == 1 && lambda < m);
    Ok(lambda as u64)
}

/// `x` through `q^(trunc - 1)`.
pub fn x_series(trunc: i64, ring: CoefficientRing) -> Result<TruncatedSeries> {
    expand_eta_quotient_in(&EtaQuotientSpec::hauptmodul_x(), trunc, ring)
}

/// `L_alpha` for `k = 7`.
pub fn l_alpha_series(alpha: u32, trunc: i64, ring: CoefficientRing) -> Result<TruncatedSeries> {
    l_alpha_series_k(7, alpha, trunc, ring)
}

/// `(q;q)^26 (q^4;q^4)^2 / (q^2;q^2)^13 * sum_{n>=0} d_k(4^alpha n + lambda_alpha) q^(n+1)`
/// through `q^(trunc - 1)`.
pub fn l_alpha_series_k(k: u32, alpha: u32, trunc: i64, ring: CoefficientRing) -> Result<TruncatedSeries> {
    if trunc < 2 {
        return Err(Error::InsufficientTrunc {
            trunc,
            reason: "L_alpha starts at q^1".into(),
        });
    }
    let lambda = lambda_alpha(alpha)? as i64;
    let step = 1i64 << (2 * alpha);
    let needed = step
        .checked_mul(trunc - 2)
        .and_then(|v| v.checked_add(lambda + 1))
        .filter(|&v| v <= MAX_EXPANSION_TERMS)
        .ok_or_else(|| Error::InsufficientTrunc {
            trunc,
            reason: format!("d_{k} would be needed beyond {MAX_EXPANSION_TERMS} terms"),
        })?;
    let d = d_series(k, needed, ring)?;
    let picked: Vec<BigInt> = (0..trunc - 1)
        .map(|n| d.coeff(step * n + lambda).expect("within expansion"))
        .collect();
    let inner = TruncatedSeries::from_coeffs(ring, 1, picked, trunc);
    let phi = expand_eta_quotient_in(&EtaQuotientSpec::l_prefactor(), trunc, ring)?;
    inner.mul(&phi)
}

/// `U(f) = U_4(A f)`. `A` is expanded far enough that the product is known
/// exactly as far as `f` allows, so the result is known below
/// `ceil((f.trunc + 1) / 4)`.
pub fn u_operator(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let product_trunc = f.trunc() + 1;
    if product_trunc < 1 {
        return Err(Error::InsufficientTrunc {
            trunc: f.trunc(),
            reason: "U needs the input known through q^0".into(),
        });
    }
    if f.is_zero() {
        return Ok(TruncatedSeries::zero(f.ring(), div_ceil(product_trunc, 4)));
    }
    let a = expand_eta_quotient_in(
        &EtaQuotientSpec::u_multiplier(),
        f.trunc() - f.valuation() + 1,
        f.ring(),
    )?;
    a.mul(f)?.u_ell(4)
}

/// Writes `f` as a polynomial in `x` by triangular elimination: `x = q + O(q^2)`
/// so the coefficient of `x^r` is the coefficient of `q^r` in what remains.
/// Every known coefficient of the final residual must vanish.
pub fn reduce_to_x_polynomial(f: &TruncatedSeries, max_deg: u32) -> Result<XPolynomial> {
    if !f.ring().is_exact() {
        return Err(Error::RequiresExact(f.ring()));
    }
    if f.trunc() <= max_deg as i64 {
        return Err(Error::InsufficientTrunc {
            trunc: f.trunc(),
            reason: format!("reduction to degree {max_deg} needs trunc > {max_deg}"),
        });
    }
    let mut poly = XPolynomial::new();
    if f.is_zero() {
        return Ok(poly);
    }
    if f.valuation() < 1 {
        return Err(Error::NotPolynomial {
            max_deg,
            exponent: f.valuation(),
        });
    }
    let t = f.trunc();
    let x = x_series(t, EXACT)?;
    let mut residual = f.clone();
    let mut power = x.clone();
    for r in 1..=max_deg {
        if residual.is_zero() {
            break;
        }
        if r > 1 {
            power = power.mul(&x)?.truncate(t);
        }
        let c = residual.coeff(r as i64).expect("r < trunc");
        if !c.is_zero() {
            residual = residual.sub(&power.scale(&c))?;
            poly.add_term(r, &c);
        }
    }
    if !residual.is_zero() {
        return Err(Error::NotPolynomial {
            max_deg,
            exponent: residual.valuation(),
        });
    }
    Ok(poly)
}

/// `sum_r p_r s^r` through `q^(trunc - 1)`.
pub fn eval_polynomial_in(p: &XPolynomial, s: &TruncatedSeries, trunc: i64) -> Result<TruncatedSeries> {
    let ring = s.ring();
    let mut acc = TruncatedSeries::zero(ring, trunc);
    let Some(deg) = p.degree() else {
        return Ok(acc);
    };
    let mut power = TruncatedSeries::one(ring, trunc);
    for r in 0..=deg {
        if r > 0 {
            power = power.mul(s)?.truncate(trunc);
        }
        let c = p.coeff(r);
        if !c.is_zero() {
            acc = acc.add(&power.scale(&c))?;
        }
    }
    Ok(acc)
}

/// Expands a polynomial in `x` as an exact q-series.
pub fn eval_x_polynomial(p: &XPolynomial, trunc: i64) -> Result<TruncatedSeries> {
    if trunc < 1 {
        return Err(Error::InsufficientTrunc {
            trunc,
            reason: "evaluation needs trunc >= 1".into(),
        });
    }
    let x = x_series(trunc.max(2), EXACT)?;
    eval_polynomial_in(p, &x, trunc)
}

/// Degree of `U(x^n)` as observed on the four base cases.
pub fn expected_u_degree(n: u32) -> u32 {
    4 * n + 20
}

/// `U(x^n)` straight from q-series: expand `x^n`, apply `U`, reduce.
/// To get `N` output coefficients the inputs are expanded to `4N + 8` terms.
pub fn u_of_x_power(n: u32) -> Result<XPolynomial> {
    let (poly, _) = u_of_x_power_traced(n)?;
    Ok(poly)
}

/// As [`u_of_x_power`], also returning the truncation used for `x`.
pub fn u_of_x_power_traced(n: u32) -> Result<(XPolynomial, i64)> {
    let max_deg = expected_u_degree(n);
    let out = max_deg as i64 + 1 + REDUCTION_CHECK_TERMS;
    let xt = 4 * out + 8;
    let xn = if n == 0 {
        TruncatedSeries::one(EXACT, xt)
    } else {
        x_series(xt, EXACT)?.pow(n as i64)?
    };
    let u = u_operator(&xn)?;
    Ok((reduce_to_x_polynomial(&u, max_deg)?, xt))
}

/// The coefficient polynomials `a_0 .. a_3` of
/// `x^4 + sum_j a_j(4 tau) x^j = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularEquationData {
    pub a: [XPolynomial; 4],
}

impl ModularEquationData {
    pub fn new(a: [XPolynomial; 4]) -> Self {
        ModularEquationData { a }
    }

    /// Coefficient of `x^k` in `a_j`.
    pub fn coefficient(&self, j: usize, k: u32) -> BigInt {
        self.a[j].coeff(k)
    }
}

/// `x^4 + sum_j a_j(x(4 tau)) x^j` through `q^trunc`.
pub fn modular_equation_residual(data: &ModularEquationData, trunc: i64) -> Result<TruncatedSeries> {
    let t = trunc + 1;
    let x = x_series(t, EXACT)?;
    let big_x = x_series(div_ceil(t, 4) + 1, EXACT)?.dilate(4)?;
    let mut acc = x.pow(4)?.truncate(t);
    let mut x_power = TruncatedSeries::one(EXACT, t);
    for (j, aj) in data.a.iter().enumerate() {
        if j > 0 {
            x_power = x_power.mul(&x)?.truncate(t);
        }
        let term = eval_polynomial_in(aj, &big_x, t)?.mul(&x_power)?;
        acc = acc.add(&term)?;
    }
    Ok(acc.truncate(t))
}

/// Checks that the modular equation holds through `q^trunc`.
pub fn verify_modular_equation(data: &ModularEquationData, trunc: i64) -> VerificationReport {
    let mut report = VerificationReport::new("modeq")
        .param("trunc", trunc)
        .with_trunc(trunc + 1);
    if trunc < 50 {
        report.fail(Counterexample::new("trunc", trunc, ">= 50"));
        return report;
    }
    match modular_equation_residual(data, trunc) {
        Err(e) => report.fail(Counterexample::new("error", e, "no error")),
        Ok(res) if res.trunc() <= trunc => {
            report.fail(Counterexample::new("trunc", res.trunc() - 1, trunc))
        }
        Ok(res) if !res.is_zero() => {
            let e = res.valuation();
            report.fail(Counterexample::new(
                format!("q^{e}"),
                res.coeff(e).expect("known"),
                0,
            ));
        }
        Ok(_) => report.note(format!("all {} coefficients through q^{trunc} vanish", trunc + 1)),
    }
    report
}

/// Recovers `a_0 .. a_3` from q-expansions alone: the sixteen unknown
/// coefficients of `x(4 tau)^k x^j` (`0 <= j <= 3`, `1 <= k <= 4`) are solved
/// for exactly from the first `equations` coefficients of
/// `sum c_jk x(4 tau)^k x^j = -x^4`.
pub fn derive_modular_equation(equations: i64) -> Result<ModularEquationData> {
    let t = equations;
    let x = x_series(t, EXACT)?;
    let big_x = x_series(div_ceil(t, 4) + 1, EXACT)?.dilate(4)?;
    let mut columns = Vec::new();
    let mut x_power = TruncatedSeries::one(EXACT, t);
    for j in 0..4 {
        if j > 0 {
            x_power = x_power.mul(&x)?.truncate(t);
        }
        let mut big_power = TruncatedSeries::one(EXACT, t);
        for _k in 1..=4 {
            big_power = big_power.mul(&big_x)?.truncate(t);
            columns.push(big_power.mul(&x_power)?.truncate(t));
        }
    }
    let target = x.pow(4)?.truncate(t).neg();
    let rows: Vec<Vec<BigInt>> = (0..t)
        .map(|e| columns.iter().map(|c| c.coeff(e).expect("known")).collect())
        .collect();
    let rhs: Vec<BigInt> = (0..t).map(|e| target.coeff(e).expect("known")).collect();
    let solution = solve_unique(&rows, &rhs)?;
    let mut a: [XPolynomial; 4] = Default::default();
    for (idx, c) in solution.iter().enumerate() {
        if !c.denom().is_one() {
            return Err(Error::Domain(format!("non-integral modular equation coefficient {c}")));
        }
        a[idx / 4].add_term((idx % 4) as u32 + 1, c.numer());
    }
    Ok(ModularEquationData::new(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden(name: &str) -> XPolynomial {
        crate::golden::GoldenSet::embedded().get(name).unwrap().clone()
    }

    /// d_k(n) by convolving the two factor expansions, each obtained by
    /// multiplying out (1 - q^m) factors one at a time.
    fn d_oracle(k: i64, n: usize) -> Vec<BigInt> {
        let mut den = vec![BigInt::zero(); n + 1];
        den[0] = BigInt::one();
        // 1 / (1 - q^m)^(3k+1): repeated prefix sums with stride m.
        for m in 1..=n {
            for _ in 0..(3 * k + 1) {
                for i in m..=n {
                    let prev = den[i - m].clone();
                    den[i] += prev;
                }
            }
        }
        let mut num = vec![BigInt::zero(); n + 1];
        num[0] = BigInt::one();
        for m in (2..=n).step_by(2) {
            for _ in 0..k {
                for i in (m..=n).rev() {
                    let prev = num[i - m].clone();
                    num[i] -= prev;
                }
            }
        }
        (0..=n)
            .map(|i| (0..=i).map(|j| &num[j] * &den[i - j]).sum())
            .collect()
    }

    #[test]
    fn d_series_small_values() {
        let d7 = d_series(7, 12, EXACT).unwrap();
        assert_eq!(d7.coeff_i64(0), Some(1));
        assert_eq!(d7.coeff_i64(1), Some(22));
        let oracle = d_oracle(7, 11);
        for (n, want) in oracle.iter().enumerate() {
            assert_eq!(&d7.coeff(n as i64).unwrap(), want, "d_7({n})");
        }
        assert_eq!(d7.coeff_i64(3), Some(2376));
        let d0 = d_series(0, 12, EXACT).unwrap();
        let p: Vec<i64> = (0..12).map(|n| d0.coeff_i64(n).unwrap()).collect();
        assert_eq!(p, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56]);
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_alpha(1).unwrap(), 3);
        assert_eq!(lambda_alpha(2).unwrap(), 11);
        assert_eq!(lambda_alpha(3).unwrap(), 43);
        for alpha in 1..=31 {
            let l = lambda_alpha(alpha).unwrap() as u128;
            let m = 1u128 << (2 * alpha);
            assert_eq!((3 * l) % m, 1);
            if alpha <= 6 {
                assert!((1..l).all(|y| (3 * y) % m != 1));
            }
        }
        assert!(lambda_alpha(0).is_err());
    }

    #[test]
    fn l1_leading_coefficient() {
        let l1 = l_alpha_series(1, 6, EXACT).unwrap();
        assert_eq!(l1.valuation(), 1);
        assert_eq!(l1.coeff_i64(1), Some(2376));
        let l2 = l_alpha_series(2, 3, EXACT).unwrap();
        let d7 = d_oracle(7, 11);
        assert_eq!(l2.coeff(1).unwrap(), d7[11]);
        assert!(l_alpha_series(1, 1, EXACT).is_err());
    }

    #[test]
    fn u_of_one_leading_coefficient() {
        let one = TruncatedSeries::one(EXACT, 20);
        let u = u_operator(&one).unwrap();
        assert_eq!(u.coeff_i64(1), Some(3640));
        assert_eq!(u.trunc(), 6);
    }

    #[test]
    fn u_is_linear() {
        let f = TruncatedSeries::from_i64s(EXACT, 0, &[3, -1, 4, 1, -5, 9, 2, 6], 40);
        let g = TruncatedSeries::from_i64s(EXACT, 1, &[2, 7, 1, 8, 2, 8], 40);
        let c = BigInt::from(-13);
        let lhs = u_operator(&f.scale(&c).add(&g).unwrap()).unwrap();
        let rhs = u_operator(&f).unwrap().scale(&c).add(&u_operator(&g).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_of_monomials() {
        let x2 = x_series(30, EXACT).unwrap().pow(2).unwrap().truncate(30);
        assert_eq!(reduce_to_x_polynomial(&x2, 10).unwrap(), XPolynomial::monomial(2));
        assert_eq!(eval_x_polynomial(&XPolynomial::monomial(1), 30).unwrap(), x_series(30, EXACT).unwrap());
        assert!(eval_x_polynomial(&XPolynomial::new(), 30).unwrap().is_zero());
    }

    #[test]
    fn reduction_detects_excess_degree() {
        let x5 = x_series(30, EXACT).unwrap().pow(5).unwrap().truncate(30);
        assert!(matches!(
            reduce_to_x_polynomial(&x5, 4),
            Err(Error::NotPolynomial { max_deg: 4, exponent: 5 })
        ));
        let with_const = TruncatedSeries::one(EXACT, 10);
        assert!(reduce_to_x_polynomial(&with_const, 4).is_err());
        assert!(reduce_to_x_polynomial(&x5, 40).is_err());
    }

    #[test]
    fn l1_reduces_to_its_polynomial() {
        let l1 = l_alpha_series(1, 40, EXACT).unwrap();
        let p = reduce_to_x_polynomial(&l1, 18).unwrap();
        assert_eq!(p, golden("l1"));
        let back = eval_x_polynomial(&p, 21).unwrap();
        assert_eq!(back, l1.truncate(21));
    }

    #[test]
    fn u_maps_l1_to_l2() {
        let l1 = l_alpha_series(1, 4 * 31 + 8, EXACT).unwrap();
        let image = u_operator(&l1).unwrap();
        let l2 = l_alpha_series(2, 31, EXACT).unwrap();
        assert!(image.trunc() >= 31);
        assert_eq!(image.truncate(31), l2);
    }

    #[test]
    fn modular_equation_leading_cancellation() {
        let data = ModularEquationData::new([golden("modeq_a0"), golden("modeq_a1"), golden("modeq_a2"), golden("modeq_a3")]);
        assert!(verify_modular_equation(&data, 60).is_pass());
        let mut bad = data.clone();
        bad.a[0].add_term(2, &BigInt::from(40));
        let r = verify_modular_equation(&bad, 60);
        assert!(!r.is_pass());
        // a_0 changes by 40 x(4 tau)^2, whose lowest term is at q^8.
        assert_eq!(r.counterexample.unwrap().location, "q^8");
    }

    #[test]
    fn modular_equation_is_derivable() {
        let derived = derive_modular_equation(80).unwrap();
        for j in 0..4 {
            assert_eq!(derived.a[j], golden(&format!("modeq_a{j}")), "a_{j}");
        }
    }
}
