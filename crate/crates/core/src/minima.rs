//! The minima `c_n = inf_{t ∈ ℝ} φ_n(t)` and the bounds that control them.
//!
//! `φ_n` is reciprocal for `n >= 3`, so the infimum over the reals is attained in
//! `[−1, 1]`. Every `n` is first reduced to its odd squarefree core (or to a power of two,
//! where `c_n = 1`), and only the core polynomial is minimized.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{factorize, is_prime, totient};
use crate::cyclotomic::{
    cyclotomic, form_eval, reduce_index, Core, CyclotomicPoly, IndexReduction,
};
use crate::{Error, Result};

const GRID_POINTS: usize = 4096;
const GOLDEN_TOLERANCE: f64 = 1e-12;
const EVALUATION_SLACK: f64 = 1e-12;

/// Minimum of `φ_n` on `[−1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormMinimum {
    pub index: u64,
    /// How `φ_n` is expressed through its core polynomial.
    pub reduction: IndexReduction,
    pub c: f64,
    /// Minimizer in the core variable, negated for `n = 2m` with `m` odd.
    /// Absent for power-of-two indices.
    pub t: Option<f64>,
    /// Bound on the error of both `c` and `t`.
    pub abs_error: f64,
}

impl FormMinimum {
    pub fn core(&self) -> Option<u64> {
        match self.reduction.core {
            Core::PowerOfTwo => None,
            Core::OddSquarefree(m) => Some(m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct CoreMinimum {
    t: f64,
    c: f64,
    abs_error: f64,
}

pub fn cn(n: u64) -> Result<FormMinimum> {
    if n < 3 {
        return Err(Error::domain("cn", format!("n = {n} must be >= 3")));
    }
    let reduction = reduce_index(n)?;
    let Core::OddSquarefree(core) = reduction.core else {
        return Ok(FormMinimum {
            index: n,
            reduction,
            c: 1.0,
            t: None,
            abs_error: 0.0,
        });
    };
    let m = core_minimum(core)?;
    let t = if reduction.negate && reduction.power == 1 {
        -m.t
    } else {
        m.t
    };
    Ok(FormMinimum {
        index: n,
        reduction,
        c: m.c,
        t: Some(t),
        abs_error: m.abs_error,
    })
}

fn core_minimum(core: u64) -> Result<CoreMinimum> {
    static CACHE: OnceLock<RwLock<HashMap<u64, CoreMinimum>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.read().expect("minima cache poisoned").get(&core) {
        return Ok(*m);
    }
    let m = minimize(cyclotomic(core)?.as_ref());
    cache
        .write()
        .expect("minima cache poisoned")
        .insert(core, m);
    Ok(m)
}

/// Grid bracketing, golden-section refinement, then bisection on `φ'` where the
/// derivative changes sign across the bracket.
fn minimize(poly: &CyclotomicPoly) -> CoreMinimum {
    let step = 2.0 / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|k| -1.0 + k as f64 * step).collect();
    let values: Vec<f64> = grid.iter().map(|&t| poly.eval_real(t)).collect();

    let mut best: Option<CoreMinimum> = None;
    for k in 0..GRID_POINTS {
        let left_ok = k == 0 || values[k] <= values[k - 1];
        let right_ok = k + 1 == GRID_POINTS || values[k] <= values[k + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let a = grid[k.saturating_sub(1)];
        let b = grid[(k + 1).min(GRID_POINTS - 1)];
        let candidate = refine(poly, a, b);
        if best.is_none_or(|m| candidate.c < m.c) {
            best = Some(candidate);
        }
    }
    best.expect("a finite grid always has a least point")
}

fn refine(poly: &CyclotomicPoly, a: f64, b: f64) -> CoreMinimum {
    let (mut lo, mut hi) = golden_section(|t| poly.eval_real(t), a, b);
    if poly.derivative_real(a) < 0.0 && poly.derivative_real(b) > 0.0 {
        let (dlo, dhi) = bisect_sign(|t| poly.derivative_real(t), a, b);
        lo = dlo;
        hi = dhi;
    }
    let t = 0.5 * (lo + hi);
    CoreMinimum {
        t,
        c: poly.eval_real(t),
        abs_error: (hi - lo) + EVALUATION_SLACK,
    }
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= GOLDEN_TOLERANCE {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a, b)
}

/// Shrinks `[lo, hi]` with `g(lo) < 0 <= g(hi)` around the sign change.
fn bisect_sign(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid);
        if v == 0.0 {
            return (mid, mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// The unique critical point `t_p ∈ ]−1, −1/2]` of `φ_p` and `c_p = φ_p(t_p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimeMinimum {
    pub p: u64,
    pub t: f64,
    pub c: f64,
}

pub fn tp_for_prime(p: u64) -> Result<PrimeMinimum> {
    if p == 2 || !is_prime(p) {
        return Err(Error::domain(
            "tp_for_prime",
            format!("{p} is not an odd prime"),
        ));
    }
    let poly = cyclotomic(p)?;
    let d = |t: f64| poly.derivative_real(t);
    let t = if d(-0.5) == 0.0 {
        -0.5
    } else {
        let (lo, hi) = bisect_sign(d, -1.0, -0.5);
        0.5 * (lo + hi)
    };
    Ok(PrimeMinimum {
        p,
        t,
        c: poly.eval_real(t),
    })
}

/// Closed-form lower bounds for `c_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerBounds {
    /// `p_1^{−2^{r−2}}` for the smallest odd prime `p_1` and `r` odd primes; 1 when `r = 0`.
    pub smallest_prime: f64,
    /// `(√3/2)^{φ(n)}`.
    pub sqrt3: f64,
}

pub fn cn_lower_bounds(n: u64) -> Result<LowerBounds> {
    if n < 3 {
        return Err(Error::domain(
            "cn_lower_bounds",
            format!("n = {n} must be >= 3"),
        ));
    }
    let f = factorize(n)?;
    let odd: Vec<u64> = f
        .factors()
        .iter()
        .map(|&(p, _)| p)
        .filter(|&p| p != 2)
        .collect();
    let smallest_prime = match odd.first() {
        None => 1.0,
        Some(&p1) => (p1 as f64).powf(-(2f64.powi(odd.len() as i32 - 2))),
    };
    let sqrt3 = (3f64.sqrt() / 2.0).powi(totient(n)? as i32);
    Ok(LowerBounds {
        smallest_prime,
        sqrt3,
    })
}

/// Whether `Φ_n(x, y) >= (c_n − abs_error) · max(|x|, |y|)^{φ(n)}`.
pub fn form_lower_bound_check(n: u64, x: i64, y: i64) -> Result<bool> {
    let min = cn(n)?;
    let value = form_eval(n, x, y)?;
    let height = x.unsigned_abs().max(y.unsigned_abs());
    if height == 0 {
        return Ok(true);
    }
    if value.is_zero() {
        return Ok(false);
    }
    let degree = totient(n)? as f64;
    let rhs = (min.c - min.abs_error).ln() + degree * (height as f64).ln();
    Ok(ln_big(&value) >= rhs)
}

fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
