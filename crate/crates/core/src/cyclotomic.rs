//! Cyclotomic polynomials `φ_n` with exact integer coefficients and their binary forms.
//!
//! Coefficients come from the Möbius product `φ_n(X) = ∏_{d | n} (X^d − 1)^{μ(n/d)}`:
//! the factors with `μ = +1` are multiplied out, then the factors with `μ = −1` are
//! removed by exact long division. A nonzero remainder aborts with an internal error.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{divisors, factorize, mobius, totient};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CyclotomicPoly {
    index: u64,
    coeffs: Vec<BigInt>,
    small: Option<Vec<i64>>,
    real: Vec<f64>,
}

impl CyclotomicPoly {
    fn new(index: u64, coeffs: Vec<BigInt>) -> Self {
        let small = coeffs.iter().map(ToPrimitive::to_i64).collect();
        let real = coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        CyclotomicPoly {
            index,
            coeffs,
            small,
            real,
        }
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Equals `φ(index)`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients in ascending powers of `X`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// The coefficients as `i64`, when they all fit.
    pub fn small_coeffs(&self) -> Option<&[i64]> {
        self.small.as_deref()
    }

    /// Exact value of `Σ c_i x^i y^{d−i}` by homogeneous Horner.
    pub fn eval_form(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let d = self.degree();
        if y.is_zero() {
            return &self.coeffs[d] * num_traits::pow(x.clone(), d);
        }
        if x.is_zero() {
            return &self.coeffs[0] * num_traits::pow(y.clone(), d);
        }
        let mut acc = self.coeffs[d].clone();
        let mut ypow = y.clone();
        for c in self.coeffs[..d].iter().rev() {
            acc = acc * x + c * &ypow;
            ypow *= y;
        }
        acc
    }

    /// Same as [`eval_form`](Self::eval_form) in checked `i128`; `None` if any step overflows.
    #[inline]
    pub fn eval_form_i128(&self, x: i64, y: i64) -> Option<i128> {
        let c = self.small.as_deref()?;
        let (x, y) = (x as i128, y as i128);
        let d = c.len() - 1;
        let mut acc = c[d] as i128;
        let mut ypow = y;
        for (i, &ci) in c[..d].iter().enumerate().rev() {
            acc = acc
                .checked_mul(x)?
                .checked_add((ci as i128).checked_mul(ypow)?)?;
            if i > 0 {
                ypow = ypow.checked_mul(y)?;
            }
        }
        Some(acc)
    }

    /// `φ_n(t)` by Horner's rule.
    pub fn eval_real(&self, t: f64) -> f64 {
        self.real.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// `φ_n'(t)`, term by term from the exact coefficients.
    pub fn derivative_real(&self, t: f64) -> f64 {
        self.real
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, &c)| acc * t + i as f64 * c)
    }
}

/// Builds `φ_n` from scratch (no cache).
pub fn cyclo_coeffs(n: u64) -> Result<CyclotomicPoly> {
    if n == 0 {
        return Err(Error::domain("cyclo_coeffs", "n must be positive"));
    }
    let mut numerator = vec![BigInt::one()];
    let mut denominators = Vec::new();
    for d in divisors(n) {
        match mobius(n / d)? {
            1 => numerator = mul_x_pow_minus_one(&numerator, d as usize),
            -1 => denominators.push(d as usize),
            _ => {}
        }
    }
    for d in denominators {
        numerator = div_exact(&numerator, &x_pow_minus_one(d))?;
    }
    let expected = totient(n)? as usize;
    if numerator.len() != expected + 1 {
        return Err(Error::Internal(format!(
            "phi_{n} has degree {} instead of {expected}",
            numerator.len() - 1
        )));
    }
    Ok(CyclotomicPoly::new(n, numerator))
}

/// Memoized [`cyclo_coeffs`].
pub fn cyclotomic(n: u64) -> Result<Arc<CyclotomicPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CyclotomicPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().expect("cyclotomic cache poisoned").get(&n) {
        return Ok(Arc::clone(p));
    }
    let poly = Arc::new(cyclo_coeffs(n)?);
    let mut w = cache.write().expect("cyclotomic cache poisoned");
    Ok(Arc::clone(w.entry(n).or_insert(poly)))
}

fn x_pow_minus_one(d: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); d + 1];
    p[0] = BigInt::from(-1);
    p[d] = BigInt::one();
    p
}

fn mul_x_pow_minus_one(p: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + d];
    for (i, c) in p.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

/// Schoolbook division that must leave no remainder.
pub(crate) fn div_exact(num: &[BigInt], den: &[BigInt]) -> Result<Vec<BigInt>> {
    let dl = den.len();
    let lead = den
        .last()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::Internal("division by zero polynomial".into()))?;
    if num.len() < dl {
        return Err(Error::Internal(
            "dividend degree below divisor degree".into(),
        ));
    }
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dl + 1];
    for k in (0..quot.len()).rev() {
        let top = &rem[k + dl - 1];
        if (top % lead).sign() != Sign::NoSign {
            return Err(Error::Internal("inexact coefficient division".into()));
        }
        let q = top / lead;
        for (j, c) in den.iter().enumerate() {
            rem[k + j] -= &q * c;
        }
        quot[k] = q;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(Error::Internal(
            "polynomial division left a remainder".into(),
        ));
    }
    Ok(quot)
}

/// Exact `Φ_n(x, y)`; rejects the linear forms `n = 1, 2`.
pub fn form_eval(n: u64, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::domain(
            "form_eval",
            format!("n = {n}: only n >= 3 defines a definite form"),
        ));
    }
    let v = cyclotomic(n)?.eval_form(&x.into(), &y.into());
    v.to_biguint()
        .ok_or_else(|| Error::Internal(format!("Phi_{n} took the negative value {v}")))
}

/// `φ_n(t)` in floating point.
pub fn cyclo_eval_real(n: u64, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::domain("cyclo_eval_real", "t must be finite"));
    }
    Ok(cyclotomic(n)?.eval_real(t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Core {
    /// `n = 2^e` with `e >= 2`; `φ_n(X) = X^{n/2} + 1`.
    PowerOfTwo,
    /// The product `p_1 ⋯ p_r` of the distinct odd primes of `n`.
    OddSquarefree(u64),
}

/// How `φ_n` is obtained from the polynomial of its core:
/// `φ_n(t) = φ_core(s · t^power)` with `s = −1` when `negate` is set.
///
/// For a power-of-two core the base polynomial is `φ_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexReduction {
    pub index: u64,
    pub core: Core,
    pub power: u64,
    pub negate: bool,
}

impl IndexReduction {
    pub fn core_index(&self) -> u64 {
        match self.core {
            Core::PowerOfTwo => 2,
            Core::OddSquarefree(m) => m,
        }
    }
}

/// Reduces `n` through the radical and the parity identity to its odd squarefree core.
pub fn reduce_index(n: u64) -> Result<IndexReduction> {
    if n < 3 {
        return Err(Error::domain(
            "reduce_index",
            format!("n = {n} must be >= 3"),
        ));
    }
    let f = factorize(n)?;
    let even = f.exponent_of(2) > 0;
    let odd: u64 = f
        .factors()
        .iter()
        .filter(|&&(p, _)| p != 2)
        .map(|&(p, _)| p)
        .product();
    if odd == 1 {
        return Ok(IndexReduction {
            index: n,
            core: Core::PowerOfTwo,
            power: n / 2,
            negate: false,
        });
    }
    let radical = if even { 2 * odd } else { odd };
    Ok(IndexReduction {
        index: n,
        core: Core::OddSquarefree(odd),
        power: n / radical,
        negate: even,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// `p(s · X^k)` as a coefficient vector.
    fn substitute(p: &[BigInt], k: usize, negate: bool) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); (p.len() - 1) * k + 1];
        for (i, c) in p.iter().enumerate() {
            let flip = negate && i % 2 == 1;
            out[i * k] = if flip { -c.clone() } else { c.clone() };
        }
        out
    }

    // Long division written independently of div_exact: repeatedly cancel the leading term.
    fn naive_quotient(mut num: Vec<i64>, den: &[i64]) -> Vec<i64> {
        let mut q = vec![0i64; num.len() - den.len() + 1];
        while num.len() >= den.len() {
            let shift = num.len() - den.len();
            let lead = *num.last().unwrap() / *den.last().unwrap();
            q[shift] = lead;
            for (j, &c) in den.iter().enumerate() {
                num[shift + j] -= lead * c;
            }
            assert_eq!(num.pop(), Some(0));
        }
        assert!(num.iter().all(|&c| c == 0));
        q
    }

    #[test]
    fn small_indices() {
        assert_eq!(cyclo_coeffs(1).unwrap().coeffs(), ints(&[-1, 1]).as_slice());
        assert_eq!(cyclo_coeffs(2).unwrap().coeffs(), ints(&[1, 1]).as_slice());
        assert_eq!(
            cyclo_coeffs(3).unwrap().coeffs(),
            ints(&[1, 1, 1]).as_slice()
        );
        assert!(cyclo_coeffs(0).is_err());
    }

    #[test]
    fn phi_12_by_independent_division() {
        let mut x12 = vec![0i64; 13];
        x12[0] = -1;
        x12[12] = 1;
        let mut q = x12;
        for d in [1u64, 2, 3, 4, 6] {
            q = naive_quotient(q, cyclo_coeffs(d).unwrap().small_coeffs().unwrap());
        }
        assert_eq!(q, vec![1, 0, -1, 0, 1]);
        assert_eq!(
            cyclo_coeffs(12).unwrap().small_coeffs().unwrap(),
            q.as_slice()
        );
    }

    #[test]
    fn product_over_divisors_is_x_pow_n_minus_one() {
        for n in 1..=200u64 {
            let prod = divisors(n).iter().fold(vec![BigInt::one()], |acc, &d| {
                poly_mul(&acc, cyclo_coeffs(d).unwrap().coeffs())
            });
            assert_eq!(prod, x_pow_minus_one(n as usize), "n = {n}");
        }
    }

    #[test]
    fn reciprocal_and_monic() {
        for n in 3..=200u64 {
            let p = cyclotomic(n).unwrap();
            let c = p.coeffs();
            assert_eq!(p.degree() as u64, totient(n).unwrap());
            assert!(c[0].is_one() && c[c.len() - 1].is_one());
            assert!(c.iter().eq(c.iter().rev()), "n = {n} not palindromic");
        }
    }

    #[test]
    fn prime_power_identities() {
        // n = p^r m, gcd(p, m) = 1:
        //   φ_n(X) = φ_{pm}(X^{p^{r−1}})  and  φ_n(X) φ_m(X^{p^{r−1}}) = φ_m(X^{p^r}).
        let primes: Vec<u64> = (2..=100).filter(|&p| crate::arith::is_prime(p)).collect();
        for &p in &primes {
            for m in 1..=200u64 {
                if m % p == 0 {
                    continue;
                }
                let mut pr = p;
                while pr * m <= 200 {
                    let n = pr * m;
                    let phi_n = cyclotomic(n).unwrap();
                    let lower = (pr / p) as usize;
                    let phi_pm = cyclotomic(p * m).unwrap();
                    assert_eq!(
                        phi_n.coeffs(),
                        substitute(phi_pm.coeffs(), lower, false).as_slice(),
                        "n = {n}"
                    );
                    let phi_m = cyclotomic(m).unwrap();
                    assert_eq!(
                        poly_mul(phi_n.coeffs(), &substitute(phi_m.coeffs(), lower, false)),
                        substitute(phi_m.coeffs(), pr as usize, false),
                        "n = {n}"
                    );
                    pr *= p;
                }
            }
        }
    }

    #[test]
    fn form_eval_examples() {
        assert_eq!(form_eval(3, 1, -2).unwrap(), BigUint::from(3u32));
        assert_eq!(form_eval(5, 1, -2).unwrap(), BigUint::from(11u32));
        assert_eq!(form_eval(4, 0, 2).unwrap(), BigUint::from(4u32));
        for l in 1..=10i64 {
            assert_eq!(
                form_eval(3, l, -2 * l).unwrap(),
                BigUint::from(3 * (l * l) as u64)
            );
        }
        assert_eq!(form_eval(7, 5, 0).unwrap(), BigUint::from(5u64.pow(6)));
        assert!(form_eval(2, 1, 1).is_err());
        assert!(form_eval(1, 1, 1).is_err());
    }

    #[test]
    fn forms_are_positive_definite_and_even() {
        for n in 3..=60u64 {
            let p = cyclotomic(n).unwrap();
            for x in -5i64..=5 {
                for y in -5i64..=5 {
                    let v = form_eval(n, x, y).unwrap();
                    assert_eq!(v.is_zero(), x == 0 && y == 0, "n={n} x={x} y={y}");
                    assert_eq!(v, form_eval(n, -x, -y).unwrap());
                    if let Some(fast) = p.eval_form_i128(x, y) {
                        assert_eq!(BigInt::from(fast), BigInt::from(v));
                    }
                }
            }
        }
    }

    #[test]
    fn checked_eval_reports_overflow() {
        let p = cyclotomic(97).unwrap();
        assert_eq!(p.eval_form_i128(1 << 20, 3), None);
    }

    #[test]
    fn real_evaluation() {
        assert_eq!(cyclo_eval_real(3, -0.5).unwrap(), 0.75);
        assert_eq!(cyclo_eval_real(4, 0.0).unwrap(), 1.0);
        let t = -0.605069f64;
        let v = cyclo_eval_real(5, t).unwrap();
        assert!((v - (1.0 + t + t * t + t.powi(3) + t.powi(4))).abs() < 1e-15);
        assert!((v - 0.673_554).abs() < 1e-6, "{v}");
        assert!(cyclo_eval_real(5, f64::NAN).is_err());
    }

    #[test]
    fn real_evaluation_relative_error_on_dyadics() {
        // t = a / 2^k is exact in f64 and 2^{k d} φ_n(t) = Φ_n(a, 2^k) exactly.
        let k = 15u32;
        let scale = BigInt::from(1u64 << k);
        for n in 3..=300u64 {
            let p = cyclotomic(n).unwrap();
            if p.degree() > 64 {
                continue;
            }
            for a in [-(1i64 << k), -29_491, -16_384, -1, 0, 10_923, 1 << k] {
                let t = a as f64 / (1u64 << k) as f64;
                let exact = p.eval_form(&BigInt::from(a), &scale);
                let exact = exact.to_f64().unwrap() / 2f64.powi((k as usize * p.degree()) as i32);
                let got = p.eval_real(t);
                let rel = ((got - exact) / exact).abs();
                assert!(rel <= 1e-12, "n={n} t={t} rel={rel}");
            }
        }
    }

    #[test]
    fn derivative_matches_coefficients() {
        let p = cyclotomic(5).unwrap();
        let t = 0.3f64;
        let expect = 1.0 + 2.0 * t + 3.0 * t * t + 4.0 * t * t * t;
        assert!((p.derivative_real(t) - expect).abs() < 1e-15);
    }

    #[test]
    fn reduce_index_examples() {
        let r = reduce_index(12).unwrap();
        assert_eq!(
            (r.core, r.power, r.negate),
            (Core::OddSquarefree(3), 2, true)
        );
        assert_eq!(reduce_index(16).unwrap().core, Core::PowerOfTwo);
        let r = reduce_index(45).unwrap();
        assert_eq!(
            (r.core, r.power, r.negate),
            (Core::OddSquarefree(15), 3, false)
        );
        assert!(reduce_index(2).is_err());
    }

    #[test]
    fn reduction_is_a_coefficient_identity() {
        for n in 3..=200u64 {
            let r = reduce_index(n).unwrap();
            let base = cyclotomic(r.core_index()).unwrap();
            let rebuilt = substitute(base.coeffs(), r.power as usize, r.negate);
            assert_eq!(
                cyclotomic(n).unwrap().coeffs(),
                rebuilt.as_slice(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn division_remainder_is_an_error() {
        let num = ints(&[1, 0, 1]);
        let den = ints(&[-1, 1]);
        assert!(matches!(div_exact(&num, &den), Err(Error::Internal(_))));
    }
}
