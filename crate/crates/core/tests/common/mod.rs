//! Reference implementations that share no code with the crate: cyclotomic polynomials by
//! repeated division, forms evaluated through the Möbius product, naive arithmetic, and
//! lattice-point counts from row sums.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn totient_naive(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

pub fn mobius_naive(n: u64) -> i32 {
    let mut rest = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            rest /= p;
            if rest.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if rest > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors_naive(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn isqrt_naive(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Coefficients of `φ_n` (constant term first): `x^n − 1` divided in turn by `φ_d` for every
/// proper divisor `d`.
pub fn cyclotomic_by_division(n: u64) -> Vec<i128> {
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors_naive(n) {
        if d == n {
            continue;
        }
        num = divide_monic(&num, &cyclotomic_by_division(d));
    }
    num
}

fn divide_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i128; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let q = rem[k + dd];
        quot[k] = q;
        for (j, &c) in den.iter().enumerate() {
            rem[k + j] -= q * c;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "inexact division");
    quot
}

/// `Σ c_i x^i y^{d−i}` term by term.
pub fn form_by_coeffs(coeffs: &[i128], x: i64, y: i64) -> BigInt {
    let d = coeffs.len() as u32 - 1;
    let (x, y) = (BigInt::from(x), BigInt::from(y));
    coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| BigInt::from(c) * x.pow(i as u32) * y.pow(d - i as u32))
        .sum()
}

/// `∏_{d | n} (x^d − y^d)^{μ(n/d)}`, falling back to the coefficients where a factor
/// vanishes (`x = ±y`).
pub fn form_by_product(n: u64, coeffs: &[i128], x: i64, y: i64) -> BigInt {
    if x == y || x == -y {
        return form_by_coeffs(coeffs, x, y);
    }
    let (bx, by) = (BigInt::from(x), BigInt::from(y));
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for d in divisors_naive(n) {
        let factor = bx.pow(d as u32) - by.pow(d as u32);
        match mobius_naive(n / d) {
            1 => num *= factor,
            -1 => den *= factor,
            _ => {}
        }
    }
    assert!((&num % &den).is_zero());
    num / den
}

/// Every `(n, x, y)` with `3 <= n <= max_n`, `|x|, |y| <= half_width`, height at least 2
/// and value at most `max_m`, grouped by value and sorted.
pub fn brute_force_representations(
    max_m: u64,
    max_n: u64,
    half_width: i64,
) -> BTreeMap<u64, Vec<(u64, i64, i64)>> {
    let found: Vec<(u64, u64, i64, i64)> = (3..=max_n)
        .into_par_iter()
        .flat_map_iter(|n| {
            let coeffs = cyclotomic_by_division(n);
            let mut out = Vec::new();
            for x in -half_width..=half_width {
                for y in -half_width..=half_width {
                    if x.abs().max(y.abs()) < 2 {
                        continue;
                    }
                    let v = form_by_product(n, &coeffs, x, y);
                    if v <= BigInt::from(max_m) {
                        out.push((u64::try_from(v).unwrap(), n, x, y));
                    }
                }
            }
            out
        })
        .collect();
    let mut table: BTreeMap<u64, Vec<(u64, i64, i64)>> = BTreeMap::new();
    for (v, n, x, y) in found {
        table.entry(v).or_default().push((n, x, y));
    }
    for list in table.values_mut() {
        list.sort();
    }
    table
}

/// Count of `(n, x, y)`, `n >= 3`, height at least 2, value at most `limit`.
///
/// The three quadratic forms are counted row by row from square roots. For the others,
/// `φ(n) >= √(n/2)` limits the indices and the box `|x|, |y| <= 2 limit^{1/φ(n)} + 2`
/// is wider than needed.
pub fn lattice_count(limit: u64) -> u64 {
    let n_lim = limit as i64;
    let small_points = |f: &dyn Fn(i64, i64) -> i64| -> u64 {
        let mut c = 0;
        for x in -1i64..=1 {
            for y in -1i64..=1 {
                if f(x, y) <= n_lim {
                    c += 1;
                }
            }
        }
        c
    };
    // x² + y²
    let r = isqrt_naive(limit) as i64;
    let mut phi4: u64 = (-r..=r)
        .map(|y| 2 * isqrt_naive((n_lim - y * y) as u64) + 1)
        .sum();
    phi4 -= small_points(&|x, y| x * x + y * y);
    // x² ± xy + y²: rows with |2x ± y| <= √(4N − 3y²)
    let row_count = |sign: i64| -> u64 {
        let y_max = isqrt_naive(4 * limit / 3) as i64;
        (-y_max..=y_max)
            .map(|y| {
                let disc = 4 * n_lim - 3 * y * y;
                if disc < 0 {
                    return 0;
                }
                let s = isqrt_naive(disc as u64) as i64;
                // sign·y − s <= 2x <= sign·y + s  (for x² − sign·xy + y²)
                let lo = (sign * y - s).div_euclid(2) + ((sign * y - s).rem_euclid(2) != 0) as i64;
                let hi = (sign * y + s).div_euclid(2);
                (hi - lo + 1).max(0) as u64
            })
            .sum::<u64>()
            - small_points(&|x, y| x * x - sign * x * y + y * y)
    };
    let phi3 = row_count(-1);
    let phi6 = row_count(1);

    let mut max_degree = 0u32;
    while 3u128.pow(max_degree + 1) <= (limit as u128).pow(2) {
        max_degree += 1;
    }
    let n_max = 2 * (max_degree as u64).pow(2) + 2;
    let higher: u64 = (3..=n_max)
        .into_par_iter()
        .filter(|&n| {
            let phi = totient_naive(n);
            phi >= 4 && phi <= max_degree as u64
        })
        .map(|n| {
            let coeffs = cyclotomic_by_division(n);
            let phi = coeffs.len() - 1;
            let h = 2 * (limit as f64).powf(1.0 / phi as f64) as i64 + 2;
            let mut c = 0u64;
            for x in -h..=h {
                for y in -h..=h {
                    if x.abs().max(y.abs()) >= 2
                        && form_by_coeffs(&coeffs, x, y) <= BigInt::from(limit)
                    {
                        c += 1;
                    }
                }
            }
            c
        })
        .sum();
    phi3 + phi4 + phi6 + higher
}

pub type Pair = (i64, i64);

/// Printed representation lists for `m ∈ {3, 4, 5, 7, 8, 9, 10}`, as `(m, n, [(x, y)])`.
pub const PRINTED_SMALL_REPRESENTATIONS: &[(u64, u64, &[Pair])] = &[
    (3, 3, &[(1, -2), (-1, 2), (2, -1), (-2, 1)]),
    (3, 6, &[(1, 2), (-1, -2), (2, 1), (-2, -1)]),
    (4, 3, &[(0, 2), (0, -2), (2, 0), (2, -2), (-2, 0), (-2, 2)]),
    (4, 4, &[(0, 2), (0, -2), (2, 0), (-2, 0)]),
    (4, 6, &[(0, 2), (0, -2), (2, 0), (2, 2), (-2, 0), (-2, -2)]),
    (
        5,
        4,
        &[
            (1, 2),
            (1, -2),
            (-1, 2),
            (-1, -2),
            (2, 1),
            (2, -1),
            (-2, 1),
            (-2, -1),
        ],
    ),
    (
        7,
        3,
        &[
            (1, 2),
            (1, -3),
            (-1, 3),
            (-1, -2),
            (-3, 1),
            (3, -1),
            (2, 1),
            (2, -3),
            (-2, 3),
            (-2, -1),
            (3, -2),
            (-3, 2),
        ],
    ),
    (
        7,
        6,
        &[
            (1, 3),
            (1, -2),
            (-1, 2),
            (-1, -3),
            (3, 1),
            (-3, -1),
            (2, 1),
            (2, -1),
            (2, 3),
            (-2, -3),
            (3, 2),
            (-3, -2),
        ],
    ),
    (8, 4, &[(2, 2), (2, -2), (-2, 2), (-2, -2)]),
    (9, 3, &[(0, 3), (0, -3), (3, 0), (3, 3), (-3, 0), (-3, 3)]),
    (9, 4, &[(0, 3), (0, -3), (3, 0), (-3, 0)]),
    (9, 6, &[(0, 3), (0, -3), (3, 0), (3, 3), (-3, 0), (-3, 3)]),
    (
        10,
        4,
        &[
            (1, 3),
            (1, -3),
            (-1, 3),
            (-1, -3),
            (3, 1),
            (3, -1),
            (-3, 1),
            (-3, -1),
        ],
    ),
];

/// Sign slips in the printed lists: `(m, n, printed, intended)`.
pub const SMALL_REPRESENTATION_SLIPS: &[(u64, u64, Pair, Pair)] = &[
    (7, 6, (2, 1), (-2, 1)),
    (9, 3, (3, 3), (3, -3)),
    (9, 6, (-3, 3), (-3, -3)),
];

/// The printed lists with the slips replaced, as sorted `(m, [(n, x, y)])`.
pub fn corrected_small_representations() -> BTreeMap<u64, Vec<(u64, i64, i64)>> {
    let mut out: BTreeMap<u64, Vec<(u64, i64, i64)>> = BTreeMap::new();
    for &(m, n, pairs) in PRINTED_SMALL_REPRESENTATIONS {
        for &(x, y) in pairs {
            let pair = SMALL_REPRESENTATION_SLIPS
                .iter()
                .find(|s| s.0 == m && s.1 == n && s.2 == (x, y))
                .map_or((x, y), |s| s.3);
            out.entry(m).or_default().push((n, pair.0, pair.1));
        }
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

/// Printed `(n, c_n, t_n)` rows of the minimum table, truncated to three decimals.
pub const PRINTED_MINIMA: [(u64, f64, f64); 21] = [
    (3, 0.75, -0.5),
    (5, 0.673, -0.605),
    (7, 0.635, -0.670),
    (11, 0.595, -0.747),
    (13, 0.583, -0.772),
    (15, 0.544, -0.792),
    (17, 0.567, -0.808),
    (19, 0.562, -0.822),
    (21, 0.496, -0.834),
    (23, 0.553, -0.844),
    (29, 0.544, -0.867),
    (31, 0.541, -0.873),
    (33, 0.447, -0.879),
    (35, 0.375, -0.884),
    (37, 0.536, -0.889),
    (39, 0.786, -0.954),
    (41, 0.533, -0.897),
    (43, 0.531, -0.900),
    (47, 0.529, -0.907),
    (51, 0.778, -0.964),
    (53, 0.526, -0.915),
];

pub const PRINTED_A: [(u64, usize); 15] = [
    (3, 8),
    (4, 16),
    (5, 8),
    (7, 24),
    (8, 4),
    (9, 16),
    (10, 8),
    (11, 8),
    (12, 12),
    (13, 40),
    (16, 40),
    (17, 16),
    (18, 4),
    (19, 24),
    (20, 8),
];

pub const PRINTED_B: [(u64, usize); 16] = [
    (11, 8),
    (13, 8),
    (16, 24),
    (17, 8),
    (31, 8),
    (32, 4),
    (43, 8),
    (55, 8),
    (57, 8),
    (61, 16),
    (64, 24),
    (73, 16),
    (80, 4),
    (81, 24),
    (82, 8),
    (97, 8),
];
