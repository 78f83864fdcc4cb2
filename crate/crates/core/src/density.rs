//! Integers represented by `Φ_3 = x² + xy + y²`, `Φ_4 = x² + y²` and by cyclotomic forms
//! in general, and the leading constants of their counting functions.
//!
//! Two variants of "represented" are used throughout. The tilde variant allows any
//! `(x, y) ≠ (0, 0)`; the restricted variant requires `max(|x|, |y|) >= 2`.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer;
use rayon::prelude::*;

use crate::arith::{isqrt, primes_up_to_with, totient, FactoredInteger, PrimeTable};
use crate::represent::{count_triples_up_to, for_each_higher_degree_value};
use crate::{Budget, Error, Result};

/// Every prime `≡ 3 (mod 4)` divides to an even power.
pub fn is_sum_of_two_squares(f: &FactoredInteger) -> bool {
    f.factors().iter().all(|&(p, e)| p % 4 != 3 || e % 2 == 0)
}

/// Every prime `≡ 2 (mod 3)` divides to an even power.
pub fn is_loeschian(f: &FactoredInteger) -> bool {
    f.factors().iter().all(|&(p, e)| p % 3 != 2 || e % 2 == 0)
}

/// Represented by both `Φ_3` and `Φ_4`: every prime `≢ 1 (mod 12)`, including 2 and 3,
/// divides to an even power.
///
/// The residue test is cross-checked against the two single-form tests; a mismatch is
/// reported as [`Error::Internal`].
pub fn is_both(f: &FactoredInteger) -> Result<bool> {
    let direct = f.factors().iter().all(|&(p, e)| p % 12 == 1 || e % 2 == 0);
    if direct != (is_sum_of_two_squares(f) && is_loeschian(f)) {
        return Err(Error::Internal(format!(
            "mod-12 test disagrees with the single-form tests for {}",
            f.value()
        )));
    }
    Ok(direct)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Phi3,
    Phi4,
    /// Values of both `Φ_3` and `Φ_4`.
    Both,
    /// Values of `Φ_3` or `Φ_4`.
    Union34,
    /// Values of any `Φ_n`, `n >= 3` (restricted variant only).
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Tilde,
    Restricted,
}

impl Variant {
    fn min_height(self) -> u64 {
        match self {
            Variant::Tilde => 1,
            Variant::Restricted => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Mark the values of the forms over a lattice box.
    Lattice,
    /// Classify every integer from its factorization (tilde variant only).
    Factorization,
}

/// Packed membership bits for `1..=limit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    limit: u64,
    words: Vec<u64>,
}

impl Membership {
    fn empty(limit: u64) -> Self {
        Membership {
            limit,
            words: vec![0; word_count(limit)],
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn contains(&self, m: u64) -> bool {
        m >= 1 && m <= self.limit && self.words[(m / 64) as usize] >> (m % 64) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(i as u64 * 64 + bit)
            })
        })
    }

    fn zip(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        Membership {
            limit: self.limit,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    fn insert(&mut self, m: u64) {
        self.words[(m / 64) as usize] |= 1 << (m % 64);
    }
}

fn word_count(limit: u64) -> usize {
    (limit / 64 + 1) as usize
}

/// Bit array shared by the workers of a parallel lattice scan.
struct AtomicBits {
    limit: u64,
    words: Vec<AtomicU64>,
}

impl AtomicBits {
    fn new(limit: u64) -> Self {
        AtomicBits {
            limit,
            words: (0..word_count(limit)).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    fn set(&self, m: u64) {
        self.words[(m / 64) as usize].fetch_or(1 << (m % 64), Ordering::Relaxed);
    }

    fn finish(self) -> Membership {
        Membership {
            limit: self.limit,
            words: self.words.into_iter().map(AtomicU64::into_inner).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveCounts {
    pub limit: u64,
    pub variant: Variant,
    pub count_phi3: u64,
    pub count_phi4: u64,
    pub count_both: u64,
    pub count_union34: u64,
    /// Values of any `Φ_n`; only defined for the restricted variant.
    pub count_all: Option<u64>,
}

/// The integers `<= limit` represented by `form`, with the counts for every form.
///
/// `count_all` is filled in for the restricted variant. [`Method::Factorization`] requires
/// the tilde variant, and [`Form::All`] requires the restricted one.
pub fn sieve_representable(
    limit: u64,
    form: Form,
    variant: Variant,
    method: Method,
    budget: &Budget,
) -> Result<(Membership, SieveCounts)> {
    if limit == 0 {
        return Err(Error::domain("sieve_representable", "N must be positive"));
    }
    if method == Method::Factorization && variant == Variant::Restricted {
        return Err(Error::domain(
            "sieve_representable",
            "factorization classification describes the tilde variant only",
        ));
    }
    if form == Form::All && variant == Variant::Tilde {
        return Err(Error::domain(
            "sieve_representable",
            "the union over all forms is defined for the restricted variant only",
        ));
    }
    // at most five bit arrays alive at once
    budget.check_bytes("membership bit arrays", 5 * 8 * word_count(limit) as u64)?;

    let (phi3, phi4) = match method {
        Method::Lattice => {
            if limit > budget.max_lattice_n {
                return Err(Error::Budget {
                    what: "lattice enumeration limit",
                    requested: limit as u128,
                    limit: budget.max_lattice_n as u128,
                });
            }
            let h = variant.min_height();
            (lattice_phi3(limit, h), lattice_phi4(limit, h))
        }
        Method::Factorization => factorization_sets(limit, budget)?,
    };
    let both = phi3.zip(&phi4, |a, b| a & b);
    let union = phi3.zip(&phi4, |a, b| a | b);
    let all = match variant {
        Variant::Restricted => {
            let mut all = union.clone();
            for_each_higher_degree_value(limit, |v| all.insert(v))?;
            Some(all)
        }
        Variant::Tilde => None,
    };
    let counts = SieveCounts {
        limit,
        variant,
        count_phi3: phi3.count(),
        count_phi4: phi4.count(),
        count_both: both.count(),
        count_union34: union.count(),
        count_all: all.as_ref().map(Membership::count),
    };
    let set = match form {
        Form::Phi3 => phi3,
        Form::Phi4 => phi4,
        Form::Both => both,
        Form::Union34 => union,
        Form::All => all.expect("restricted variant"),
    };
    Ok((set, counts))
}

/// Values `x² + y² <= limit` with `max(|x|, |y|) >= min_height`; the quadrant `x, y >= 0`
/// already carries every value and height.
fn lattice_phi4(limit: u64, min_height: u64) -> Membership {
    let bits = AtomicBits::new(limit);
    (0..=isqrt(limit)).into_par_iter().for_each(|y| {
        for x in 0..=isqrt(limit - y * y) {
            if x.max(y) >= min_height {
                bits.set(x * x + y * y);
            }
        }
    });
    bits.finish()
}

/// Values `x² + xy + y² <= limit` with `max(|x|, |y|) >= min_height`.
///
/// `Φ_6(x, y) = Φ_3(x, −y)` takes the same values at the same heights, so this also
/// covers `Φ_6`.
fn lattice_phi3(limit: u64, min_height: u64) -> Membership {
    let bits = AtomicBits::new(limit);
    let y_max = isqrt(4 * limit / 3) as i64;
    (0..=y_max).into_par_iter().for_each(|y| {
        // x² + xy + y² <= N  ⇔  |2x + y| <= √(4N − 3y²)
        let disc = 4 * limit as i64 - 3 * y * y;
        if disc < 0 {
            return;
        }
        let s = isqrt(disc as u64) as i64;
        let lo = -(y + s).div_euclid(2);
        let hi = (s - y).div_euclid(2);
        for x in lo..=hi {
            if x.unsigned_abs().max(y as u64) >= min_height {
                bits.set((x * x + x * y + y * y) as u64);
            }
        }
    });
    bits.finish()
}

fn factorization_sets(limit: u64, budget: &Budget) -> Result<(Membership, Membership)> {
    let mut phi3 = Membership::empty(limit);
    let mut phi4 = Membership::empty(limit);
    if limit < 2 {
        phi3.insert(1);
        phi4.insert(1);
        return Ok((phi3, phi4));
    }
    let table: PrimeTable = primes_up_to_with(limit, budget)?;
    let spf = table.spf()?;
    let fill = |words: &mut [u64], class: fn(u64) -> bool| {
        words.par_iter_mut().enumerate().for_each(|(i, word)| {
            for bit in 0..64u64 {
                let m = i as u64 * 64 + bit;
                if m >= 1 && m <= limit && odd_exponents_avoid(m, spf, class) {
                    *word |= 1 << bit;
                }
            }
        });
    };
    fill(&mut phi3.words, |p| p % 3 == 2);
    fill(&mut phi4.words, |p| p % 4 == 3);
    Ok((phi3, phi4))
}

/// True when no prime in `excluded` divides `m` to an odd power.
fn odd_exponents_avoid(m: u64, spf: &[u32], excluded: fn(u64) -> bool) -> bool {
    let mut rest = m as usize;
    while rest > 1 {
        let p = spf[rest] as usize;
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e % 2 == 1 && excluded(p as u64) {
            return false;
        }
    }
    true
}

/// A truncated Euler product with the estimated size of the neglected tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerProduct {
    pub value: f64,
    pub tail_error: f64,
}

/// `∏ (1 − p^{−2})^{exponent}` over primes `p <= prime_bound` with `p mod q` in one of
/// the classes `(a, q)`.
pub fn euler_product(
    classes: &[(u64, u64)],
    prime_bound: u64,
    exponent: f64,
) -> Result<EulerProduct> {
    if prime_bound < 100 {
        return Err(Error::domain("euler_product", "prime bound must be >= 100"));
    }
    let table = primes_up_to_with(prime_bound, &Budget::default())?;
    euler_product_over(&table, classes, exponent)
}

/// As [`euler_product`], over an existing prime table.
///
/// The log-sum runs over fixed chunks of the prime list and the partial sums are added in
/// chunk order, so the result does not depend on the number of workers.
pub fn euler_product_over(
    table: &PrimeTable,
    classes: &[(u64, u64)],
    exponent: f64,
) -> Result<EulerProduct> {
    for &(a, q) in classes {
        if q == 0 || a.gcd(&q) != 1 {
            return Err(Error::domain(
                "euler_product",
                format!("class {a} mod {q} is not a unit class"),
            ));
        }
    }
    if classes.is_empty() {
        return Ok(EulerProduct {
            value: 1.0,
            tail_error: 0.0,
        });
    }
    let in_class = |p: u64| classes.iter().any(|&(a, q)| p % q == a % q);
    const CHUNK: usize = 1 << 14;
    let partial: Vec<f64> = table
        .primes()
        .par_chunks(CHUNK)
        .map(|chunk| {
            chunk
                .iter()
                .filter(|&&p| in_class(p))
                .map(|&p| (-1.0 / (p as f64 * p as f64)).ln_1p())
                .sum::<f64>()
        })
        .collect();
    let log = exponent * partial.iter().sum::<f64>();
    let value = log.exp();
    // share of primes in the classes, by Dirichlet's theorem
    let mut density = 0.0;
    for &(_, q) in classes {
        density += 1.0 / totient(q)? as f64;
    }
    let bound = table.limit() as f64;
    let tail_error = exponent.abs() * density.min(1.0) * value / (bound * bound.ln());
    Ok(EulerProduct { value, tail_error })
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos approximation of `Γ(z)`, with reflection for `z < 1/2`.
pub fn gamma(z: f64) -> f64 {
    if z < 0.5 {
        return PI / ((PI * z).sin() * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * sum
}

/// Leading constants of the counting functions of the values of `Φ_3`, `Φ_4` and both.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantsReport {
    pub prime_bound: u64,
    /// Values of `Φ_3` up to `N` number about `alpha0_3 · N / √(ln N)`.
    pub alpha0_3: f64,
    /// The Landau–Ramanujan constant.
    pub alpha0_4: f64,
    /// Values of both forms up to `N` number about `beta0 · N / (ln N)^{3/4}`.
    pub beta0: f64,
    /// `alpha0_3 + alpha0_4`.
    pub alpha0: f64,
    /// `(π / alpha0)(1 + 2/√3)`.
    pub kappa1: f64,
    /// `(π / alpha0)(1 + 4/√3)`, the constant implied by the lattice-point areas of
    /// `Φ_3`, `Φ_4` and `Φ_6`.
    pub kappa1_lattice: f64,
    pub tail_alpha0_3: f64,
    pub tail_alpha0_4: f64,
    pub tail_beta0: f64,
}

pub fn constants(prime_bound: u64) -> Result<ConstantsReport> {
    constants_with(prime_bound, &Budget::default())
}

pub fn constants_with(prime_bound: u64, budget: &Budget) -> Result<ConstantsReport> {
    if prime_bound < 10_000 {
        return Err(Error::domain("constants", "prime bound must be >= 10^4"));
    }
    let table = primes_up_to_with(prime_bound, budget)?;
    let p3 = euler_product_over(&table, &[(2, 3)], -0.5)?;
    let p4 = euler_product_over(&table, &[(3, 4)], -0.5)?;
    let p12 = euler_product_over(&table, &[(5, 12), (7, 12), (11, 12)], -0.5)?;

    let alpha0_4 = p4.value / 2f64.sqrt();
    let prefactor3 = 1.0 / (2f64.sqrt() * 3f64.powf(0.25));
    let alpha0_3 = prefactor3 * p3.value;
    let prefactor12 =
        3f64.powf(0.25) / 2f64.powf(1.25) * PI.sqrt() * (2.0 + 3f64.sqrt()).ln().powf(0.25)
            / gamma(0.25);
    let beta0 = prefactor12 * p12.value;
    let alpha0 = alpha0_3 + alpha0_4;
    let sqrt3 = 3f64.sqrt();
    Ok(ConstantsReport {
        prime_bound,
        alpha0_3,
        alpha0_4,
        beta0,
        alpha0,
        kappa1: PI / alpha0 * (1.0 + 2.0 / sqrt3),
        kappa1_lattice: PI / alpha0 * (1.0 + 4.0 / sqrt3),
        tail_alpha0_3: prefactor3 * p3.tail_error,
        tail_alpha0_4: p4.tail_error / 2f64.sqrt(),
        tail_beta0: prefactor12 * p12.tail_error,
    })
}

/// Average number of representations of the represented integers up to `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplicity {
    pub limit: u64,
    /// Triples `(n, x, y)`, `n >= 3`, height at least 2, with value `<= N`.
    pub triples: u64,
    /// Integers `<= N` with at least one such triple.
    pub represented: u64,
    /// `triples / represented`.
    pub mean: f64,
    /// `mean / √(ln N)`.
    pub normalized: f64,
}

pub fn average_multiplicity(limit: u64, budget: &Budget) -> Result<Multiplicity> {
    if limit < 3 {
        return Err(Error::domain("average_multiplicity", "N must be >= 3"));
    }
    let triples = count_triples_up_to(limit, budget)?.total;
    let (_, counts) = sieve_representable(
        limit,
        Form::All,
        Variant::Restricted,
        Method::Lattice,
        budget,
    )?;
    let represented = counts.count_all.expect("restricted variant");
    let mean = triples as f64 / represented as f64;
    Ok(Multiplicity {
        limit,
        triples,
        represented,
        mean,
        normalized: mean / (limit as f64).ln().sqrt(),
    })
}
