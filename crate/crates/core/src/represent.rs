//! Enumeration of the triples `(n, x, y)` with `n >= 3` and `Φ_n(x, y) = m`.
//!
//! Any such triple with `max(|x|, |y|) >= 2` satisfies
//! `(√3/2 · max(|x|, |y|))^{φ(n)} <= m`. That gives both `3^{φ(n)} <= m²` and
//! `max(|x|, |y|) <= (2/√3) m^{1/φ(n)}`, so each search below is a finite box. Bounds are
//! sized in floating point and then settled by exact integer comparisons.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{is_prime, totient, FactoredInteger};
use crate::cyclotomic::{cyclotomic, form_eval, CyclotomicPoly};
use crate::{Budget, Error, Result};

/// A triple `(n, x, y)` with its value `Φ_n(x, y)` and height `max(|x|, |y|)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub n: u64,
    pub x: BigInt,
    pub y: BigInt,
    pub height: BigUint,
    pub value: BigUint,
}

impl Representation {
    /// Evaluates `Φ_n(x, y)` exactly.
    pub fn new(n: u64, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<Self> {
        let (x, y) = (x.into(), y.into());
        let value = form_eval(n, x.clone(), y.clone())?;
        let height = x.magnitude().max(y.magnitude()).clone();
        Ok(Representation {
            n,
            x,
            y,
            height,
            value,
        })
    }

    fn small(n: u64, x: i64, y: i64, value: BigUint) -> Self {
        Representation {
            n,
            x: x.into(),
            y: y.into(),
            height: BigUint::from(x.unsigned_abs().max(y.unsigned_abs())),
            value,
        }
    }

    /// `φ(n)`, the degree of the form.
    pub fn degree(&self) -> u64 {
        totient(self.n).expect("n >= 3")
    }
}

impl Ord for Representation {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, &self.x, &self.y).cmp(&(other.n, &other.x, &other.y))
    }
}

impl PartialOrd for Representation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationReport {
    pub m: u64,
    pub min_height: u64,
    /// Sorted by `(n, x, y)`.
    pub reps: Vec<Representation>,
    /// Number of representations.
    pub a_m: usize,
    /// Number of representations with `φ(n) > 2`.
    pub b_m: usize,
}

/// Largest `d` with `3^d <= m²`, i.e. `⌊2 log m / log 3⌋`.
pub fn totient_bound(m: u64) -> u64 {
    let square = (m as u128) * (m as u128);
    let mut d = 0;
    let mut power = 3u128;
    while power <= square {
        d += 1;
        power *= 3;
    }
    d
}

/// Every `n >= 3` whose form can represent `m` with height at least 2.
///
/// Scans `n` up to `⌈5.383 (ln m)^{1.161}⌉ + 1` and keeps `φ(n) <= ⌊2 ln m / ln 3⌋`.
/// Empty for `m` in `{1, 2}`.
pub fn candidate_indices(m: u64) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::domain("candidate_indices", "m must be positive"));
    }
    if m < 3 {
        return Ok(Vec::new());
    }
    let max_phi = totient_bound(m);
    let ln_m = (m as f64).ln();
    // n < 2.685 φ(n)^{1.161} is the inequality behind the scan limit; take whichever is larger.
    let scan = (5.383 * ln_m.powf(1.161))
        .ceil()
        .max((2.685 * (max_phi as f64).powf(1.161)).ceil()) as u64
        + 1;
    let mut out = Vec::new();
    for n in 3..=scan {
        if totient(n)? <= max_phi {
            out.push(n);
        }
    }
    Ok(out)
}

/// `⌊(2/√3) m^{1/φ(n)}⌋`, settled exactly by `3^{φ/2} H^φ <= 2^φ m`.
pub fn height_bound(m: u64, n: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::domain(
            "height_bound",
            format!("n = {n} must be >= 3"),
        ));
    }
    if m == 0 {
        return Err(Error::domain("height_bound", "m must be positive"));
    }
    Ok(height_bound_for(&BigUint::from(m), totient(n)?))
}

/// Largest `H` with `3^{φ/2} H^φ <= 2^φ threshold` (`φ` even).
pub(crate) fn height_bound_for(threshold: &BigUint, phi: u64) -> u64 {
    let half = (phi / 2) as u32;
    let lhs_scale = BigUint::from(3u32).pow(half);
    let rhs = threshold << phi;
    let fits = |h: u64| &lhs_scale * BigUint::from(h).pow(phi as u32) <= rhs;
    let estimate = (2.0 / 3f64.sqrt()) * (ln_big(threshold) / phi as f64).exp();
    let mut h = if estimate.is_finite() {
        estimate.floor().max(0.0) as u64
    } else {
        0
    };
    while fits(h + 1) {
        h += 1;
    }
    while h > 0 && !fits(h) {
        h -= 1;
    }
    h
}

fn ln_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Visits every `(x, y)` with `max(|x|, |y|)` in `[min_height, max_height]` exactly once,
/// together with its exact value.
///
/// Only the half-plane `y > 0` (plus `y = 0, x > 0`) is evaluated; the reflection
/// `(x, y) -> (−x, −y)` leaves every form of even degree unchanged.
fn scan_box(
    poly: &CyclotomicPoly,
    min_height: u64,
    max_height: u64,
    mut visit: impl FnMut(i64, i64, &Value),
) {
    let h = max_height as i64;
    for y in 0..=h {
        let x_start = if y == 0 { 1 } else { -h };
        for x in x_start..=h {
            let height = x.unsigned_abs().max(y.unsigned_abs());
            if height < min_height {
                continue;
            }
            let value = match poly.eval_form_i128(x, y) {
                Some(v) => Value::Small(v),
                None => Value::Big(poly.eval_form(&x.into(), &y.into())),
            };
            visit(x, y, &value);
            visit(-x, -y, &value);
        }
    }
}

enum Value {
    Small(i128),
    Big(BigInt),
}

impl Value {
    fn equals(&self, m: u64) -> bool {
        match self {
            Value::Small(v) => *v == m as i128,
            Value::Big(v) => *v == BigInt::from(m),
        }
    }

    fn at_most(&self, bound: u64) -> bool {
        match self {
            Value::Small(v) => *v <= bound as i128,
            Value::Big(v) => *v <= BigInt::from(bound),
        }
    }

    fn to_biguint(&self) -> BigUint {
        match self {
            Value::Small(v) => BigUint::from(*v as u128),
            Value::Big(v) => v.magnitude().clone(),
        }
    }
}

/// All `(n, x, y)` with `Φ_n(x, y) = m` and height at least `min_height`.
///
/// With the default `min_height = 2` the result is complete. Smaller values only add the
/// low-height points of the same candidate indices; the index bound does not cover
/// height 1 in general (`Φ_n(1, 0) = 1` for every `n`).
pub fn enumerate_representations(m: u64, min_height: u64) -> Result<RepresentationReport> {
    let candidates = candidate_indices(m)?;
    let per_index: Vec<Vec<Representation>> = candidates
        .par_iter()
        .map(|&n| -> Result<Vec<Representation>> {
            let poly = cyclotomic(n)?;
            let h = height_bound(m, n)?;
            let mut found = Vec::new();
            if h >= min_height {
                scan_box(&poly, min_height, h, |x, y, v| {
                    if v.equals(m) {
                        found.push(Representation::small(n, x, y, BigUint::from(m)));
                    }
                });
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    let mut reps: Vec<Representation> = per_index.into_iter().flatten().collect();
    reps.sort();
    let b_m = reps.iter().filter(|r| r.degree() > 2).count();
    Ok(RepresentationReport {
        m,
        min_height,
        a_m: reps.len(),
        b_m,
        reps,
    })
}

/// Nonzero entries of `a_m` and `b_m` for `m <= m_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationTables {
    pub a: Vec<(u64, usize)>,
    pub b: Vec<(u64, usize)>,
}

pub fn representation_tables(m_max: u64) -> Result<RepresentationTables> {
    let reports = representation_reports(m_max)?;
    Ok(RepresentationTables {
        a: reports.iter().map(|r| (r.m, r.a_m)).collect(),
        b: reports
            .iter()
            .filter(|r| r.b_m > 0)
            .map(|r| (r.m, r.b_m))
            .collect(),
    })
}

/// Reports for every `m <= m_max` with at least one representation, in order of `m`.
pub fn representation_reports(m_max: u64) -> Result<Vec<RepresentationReport>> {
    let reports: Vec<RepresentationReport> = (1..=m_max)
        .into_par_iter()
        .map(|m| enumerate_representations(m, 2))
        .collect::<Result<_>>()?;
    Ok(reports.into_iter().filter(|r| r.a_m > 0).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SmallValueMode {
    /// `Φ_n(x, y) < 7^{φ(n)/2}`.
    SevenThreshold,
    /// `Φ_n(x, y) <= 2^{θ φ(n)}` with `0 < θ < 1`.
    Theta(f64),
}

/// Triples with `3 <= n <= n_max`, height at least 2 and a value below the mode's
/// threshold, sorted by `(n, x, y)`.
pub fn small_value_triples(n_max: u64, mode: SmallValueMode) -> Result<Vec<Representation>> {
    if n_max < 3 {
        return Err(Error::domain("small_value_triples", "n_max must be >= 3"));
    }
    if let SmallValueMode::Theta(theta) = mode {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::domain(
                "small_value_triples",
                "theta must lie in ]0, 1[",
            ));
        }
    }
    let per_index: Vec<Vec<Representation>> = (3..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Vec<Representation>> {
            let phi = totient(n)?;
            // largest admissible value
            let threshold = match mode {
                SmallValueMode::SevenThreshold => BigUint::from(7u32).pow((phi / 2) as u32) - 1u32,
                SmallValueMode::Theta(theta) => floor_pow2(theta * phi as f64),
            };
            let h = height_bound_for(&threshold, phi);
            let poly = cyclotomic(n)?;
            let mut found = Vec::new();
            if h >= 2 {
                scan_box(&poly, 2, h, |x, y, v| {
                    let v = v.to_biguint();
                    if v <= threshold {
                        found.push(Representation::small(n, x, y, v));
                    }
                });
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<Representation> = per_index.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

/// `⌊2^e⌋` for `e >= 0`, exact when `e` is an integer and within a relative `2^{−52}`
/// otherwise.
fn floor_pow2(e: f64) -> BigUint {
    let whole = e.floor();
    let frac = e - whole;
    let whole = whole as u64;
    if frac == 0.0 {
        return BigUint::one() << whole;
    }
    let mantissa = (frac.exp2() * (1u64 << 52) as f64).floor() as u64;
    if whole >= 52 {
        BigUint::from(mantissa) << (whole - 52)
    } else {
        BigUint::from(mantissa >> (52 - whole))
    }
}

/// Least value of any `Φ_n(x, y)`, `n >= 3`, at height at least `h`:
/// `(3h² + 1)/4` for odd `h` and `3h²/4` for even `h`.
pub fn m_h(h: u64) -> Result<u64> {
    if h < 3 {
        return Err(Error::domain("m_h", format!("h = {h} must be >= 3")));
    }
    Ok(if h % 2 == 1 {
        (3 * h * h + 1) / 4
    } else {
        3 * h * h / 4
    })
}

/// The least `m` having a representation of height at least `h`, found by enumerating
/// `m = 1, 2, …`; `Φ_4(h, 0) = h²` caps the search.
pub fn m_h_brute_force(h: u64) -> Result<u64> {
    if h < 3 {
        return Err(Error::domain("m_h", format!("h = {h} must be >= 3")));
    }
    for m in 1..=h * h {
        if enumerate_representations(m, h)?.a_m > 0 {
            return Ok(m);
        }
    }
    Err(Error::Internal(format!(
        "no representation of height {h} up to {}",
        h * h
    )))
}

/// The integers `m_s = 2^{k_s}`, `k_s = φ(3 · 5 ⋯ p_s)`, with their explicit representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnboundedFamily {
    pub s: u64,
    /// The odd primes `3, 5, …, p_s`.
    pub primes: Vec<u64>,
    pub k_s: u64,
    pub m_s: FactoredInteger,
    /// `(ℓ, 0, ±2^t)`, `(ℓ, ±2^t, 0)`, `(2ℓ, 0, ±2^t)`, `(2ℓ, ±2^t, 0)` with `t = k_s/φ(ℓ)`.
    pub witnesses: Vec<Representation>,
    /// Witnesses with `φ(n) > 2`; at least `8(s − 1)`.
    pub b_witnesses: usize,
}

pub fn unbounded_family(s: u64, budget: &Budget) -> Result<UnboundedFamily> {
    if s < 2 {
        return Err(Error::domain("unbounded_family", "s must be >= 2"));
    }
    let primes: Vec<u64> = (3..).filter(|&p| is_prime(p)).take(s as usize).collect();
    let k_s = primes
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p - 1))
        .filter(|&k| k <= budget.max_bits)
        .ok_or(Error::Budget {
            what: "bits of 2^k_s",
            requested: primes.iter().map(|&p| (p - 1) as u128).product(),
            limit: budget.max_bits as u128,
        })?;
    let m_s = FactoredInteger::from_factors(vec![(2, k_s as u32)])?;
    let mut witnesses = Vec::with_capacity(8 * primes.len());
    for &l in &primes {
        let power = BigInt::one() << (k_s / (l - 1));
        for n in [l, 2 * l] {
            for (x, y) in [
                (BigInt::zero(), power.clone()),
                (BigInt::zero(), -power.clone()),
                (power.clone(), BigInt::zero()),
                (-power.clone(), BigInt::zero()),
            ] {
                let r = Representation::new(n, x, y)?;
                if &r.value != m_s.value() {
                    return Err(Error::Internal(format!(
                        "witness for n = {n} does not evaluate to 2^{k_s}"
                    )));
                }
                witnesses.push(r);
            }
        }
    }
    witnesses.sort();
    let b_witnesses = witnesses.iter().filter(|r| r.degree() > 2).count();
    Ok(UnboundedFamily {
        s,
        primes,
        k_s,
        m_s,
        witnesses,
        b_witnesses,
    })
}

/// Number of triples `(n, x, y)`, `n >= 3`, height at least 2, `Φ_n(x, y) <= limit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleCount {
    pub limit: u64,
    pub total: u64,
    /// `(n, count)` for every candidate index with a nonzero count.
    pub by_index: Vec<(u64, u64)>,
}

impl TripleCount {
    /// Triples whose form has degree at least `min_degree`.
    pub fn with_degree_at_least(&self, min_degree: u64) -> u64 {
        self.by_index
            .iter()
            .filter(|&&(n, _)| totient(n).expect("n >= 3") >= min_degree)
            .map(|&(_, c)| c)
            .sum()
    }
}

pub fn count_triples_up_to(limit: u64, budget: &Budget) -> Result<TripleCount> {
    if limit > budget.max_lattice_n {
        return Err(Error::Budget {
            what: "lattice enumeration limit",
            requested: limit as u128,
            limit: budget.max_lattice_n as u128,
        });
    }
    let mut by_index = Vec::new();
    for n in candidate_indices(limit.max(1))? {
        let c = count_index(n, limit)?;
        if c > 0 {
            by_index.push((n, c));
        }
    }
    Ok(TripleCount {
        limit,
        total: by_index.iter().map(|&(_, c)| c).sum(),
        by_index,
    })
}

fn count_index(n: u64, limit: u64) -> Result<u64> {
    let poly = cyclotomic(n)?;
    let h = height_bound(limit, n)?;
    if h < 2 {
        return Ok(0);
    }
    // rows y = 0..=h of the half-plane, counted in parallel
    let counts: Vec<u64> = (0..=h as i64)
        .into_par_iter()
        .map(|y| {
            let h = h as i64;
            let x_start = if y == 0 { 1 } else { -h };
            let mut c = 0u64;
            for x in x_start..=h {
                if x.unsigned_abs().max(y.unsigned_abs()) < 2 {
                    continue;
                }
                let ok = match poly.eval_form_i128(x, y) {
                    Some(v) => v <= limit as i128,
                    None => poly.eval_form(&x.into(), &y.into()) <= BigInt::from(limit),
                };
                c += 2 * ok as u64;
            }
            c
        })
        .collect();
    Ok(counts.iter().sum())
}

/// Calls `mark(value)` for every value `<= limit` taken at height at least 2 by a form
/// with `φ(n) > 2`. The quadratic forms are left to the dedicated sieves.
pub(crate) fn for_each_higher_degree_value(limit: u64, mut mark: impl FnMut(u64)) -> Result<()> {
    for n in candidate_indices(limit.max(1))? {
        if totient(n)? <= 2 {
            continue;
        }
        let poly = cyclotomic(n)?;
        let h = height_bound(limit, n)?;
        if h < 2 {
            continue;
        }
        scan_box(&poly, 2, h, |_, _, v| {
            if v.at_most(limit) {
                if let Value::Small(v) = v {
                    mark(*v as u64);
                }
            }
        });
    }
    Ok(())
}
