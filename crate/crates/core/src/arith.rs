//! Elementary number theory: factorization, Möbius and totient, radicals, prime tables.
//!
//! Factorization is trial division. Values that are too large to factor this way (for
//! instance `2^480`) are built with [`FactoredInteger::from_factors`], which carries the
//! factorization with the value.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::{Budget, Error, Result};

/// A positive integer together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    value: BigUint,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger {
            value: BigUint::one(),
            factors: Vec::new(),
        }
    }

    /// Builds the integer `∏ p^e` from a factorization.
    ///
    /// The primes must be strictly increasing, each exponent at least 1, and every `p`
    /// prime (checked by trial division).
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value = BigUint::one();
        let mut last = 1u64;
        for &(p, e) in &factors {
            if p <= last {
                return Err(Error::domain(
                    "from_factors",
                    "primes must be strictly increasing",
                ));
            }
            if e == 0 {
                return Err(Error::domain("from_factors", "exponents must be >= 1"));
            }
            if !is_prime(p) {
                return Err(Error::domain("from_factors", format!("{p} is not prime")));
            }
            value *= BigUint::from(p).pow(e);
            last = p;
        }
        Ok(FactoredInteger { value, factors })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn value_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    /// `(prime, exponent)` pairs in increasing prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn mobius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn totient(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, &(p, e)| {
            acc * BigUint::from(p).pow(e - 1) * BigUint::from(p - 1)
        })
    }
}

/// Factors `n` by trial division with a 6k±1 wheel.
pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::domain("factorize", "n must be positive"));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    for p in [2u64, 3] {
        let e = strip(&mut rest, p);
        if e > 0 {
            factors.push((p, e));
        }
    }
    let mut d = 5u64;
    while d <= rest / d {
        for p in [d, d + 2] {
            let e = strip(&mut rest, p);
            if e > 0 {
                factors.push((p, e));
            }
        }
        d += 6;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(FactoredInteger {
        value: BigUint::from(n),
        factors,
    })
}

fn strip(n: &mut u64, p: u64) -> u32 {
    let mut e = 0;
    while (*n).is_multiple_of(p) {
        *n /= p;
        e += 1;
    }
    e
}

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d <= n / d {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

pub fn mobius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::domain("mobius", "n must be positive"));
    }
    Ok(factorize(n)?.mobius())
}

pub fn totient(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("totient", "n must be positive"));
    }
    Ok(factorize(n)?
        .factors()
        .iter()
        .fold(1u64, |acc, &(p, e)| acc * p.pow(e - 1) * (p - 1)))
}

/// Product of the distinct primes of `n`; the factor 2 is kept exactly when `n` is even.
pub fn radical(n: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::domain("radical", format!("n = {n} must be >= 3")));
    }
    Ok(factorize(n)?.factors().iter().map(|&(p, _)| p).product())
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All primes up to `limit`, with a smallest-prime-factor table built on first use.
#[derive(Debug)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    spf: OnceLock<Vec<u32>>,
    memory_bytes: u64,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }

    /// Smallest-prime-factor array indexed by `k` (entries 0 and 1 are 0).
    ///
    /// Only available for limits below `2^32` and within the table's memory budget.
    pub fn spf(&self) -> Result<&[u32]> {
        if let Some(spf) = self.spf.get() {
            return Ok(spf);
        }
        if self.limit > u32::MAX as u64 {
            return Err(Error::Budget {
                what: "spf table index range",
                requested: self.limit as u128,
                limit: u32::MAX as u128,
            });
        }
        let bytes = 4 * (self.limit + 1);
        if bytes > self.memory_bytes {
            return Err(Error::Budget {
                what: "spf table bytes",
                requested: bytes as u128,
                limit: self.memory_bytes as u128,
            });
        }
        Ok(self.spf.get_or_init(|| build_spf(self.limit, &self.primes)))
    }

    /// Factors `n <= limit` by walking the spf table.
    pub fn factorize(&self, n: u64) -> Result<FactoredInteger> {
        if n == 0 {
            return Err(Error::domain("factorize", "n must be positive"));
        }
        if n > self.limit {
            return factorize(n);
        }
        let spf = self.spf()?;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut rest = n as usize;
        while rest > 1 {
            let p = spf[rest] as u64;
            let mut e = 0;
            while (rest as u64).is_multiple_of(p) {
                rest /= p as usize;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(FactoredInteger {
            value: BigUint::from(n),
            factors,
        })
    }
}

fn build_spf(limit: u64, primes: &[u64]) -> Vec<u32> {
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    for &p in primes {
        let p = p as usize;
        if p * p > n {
            break;
        }
        for j in (p * p..=n).step_by(p) {
            if spf[j] == 0 {
                spf[j] = p as u32;
            }
        }
    }
    for (k, s) in spf.iter_mut().enumerate().skip(2) {
        if *s == 0 {
            *s = k as u32;
        }
    }
    spf
}

pub fn primes_up_to(limit: u64) -> Result<PrimeTable> {
    primes_up_to_with(limit, &Budget::default())
}

/// Segmented sieve of Eratosthenes over `[2, limit]`.
///
/// Segments are sieved independently (in parallel on the current rayon pool) and
/// concatenated in order, so the result does not depend on the worker count.
pub fn primes_up_to_with(limit: u64, budget: &Budget) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::domain("primes_up_to", "limit must be >= 2"));
    }
    // π(x) < 1.26 x / ln x for x > 1
    let estimate = (1.26 * limit as f64 / (limit as f64).ln()).ceil() as u64 + 8;
    budget.check_bytes("prime table bytes", estimate * 8)?;
    let segment = budget.segment_size.max(1024) as u64;

    let root = isqrt(limit);
    let base = simple_sieve(root.max(2));
    let segments = limit.div_ceil(segment);
    let parts: Vec<Vec<u64>> = (0..segments)
        .into_par_iter()
        .map(|s| {
            let lo = s * segment;
            let hi = ((s + 1) * segment).min(limit + 1);
            sieve_segment(lo, hi, &base)
        })
        .collect();
    let mut primes = Vec::with_capacity(parts.iter().map(Vec::len).sum());
    for part in parts {
        primes.extend(part);
    }
    Ok(PrimeTable {
        limit,
        primes,
        spf: OnceLock::new(),
        memory_bytes: budget.memory_bytes,
    })
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let mut composite = vec![false; (hi - lo) as usize];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut j = start;
        while j < hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|&(i, &c)| !c && lo + i as u64 >= 2)
        .map(|(i, _)| lo + i as u64)
        .collect()
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}
