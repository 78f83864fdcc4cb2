//! Cyclotomic binary forms `Φ_n(X, Y) = Y^φ(n) φ_n(X/Y)` and the integers they represent.
//!
//! The crate is split along the lines of the computation:
//!
//! - [`arith`]: factorization, multiplicative functions and segmented prime sieves.
//! - [`cyclotomic`]: exact coefficients of `φ_n`, exact evaluation of `Φ_n`, index reduction.
//! - [`minima`]: `c_n = inf φ_n(t)` with its minimizer, and the lower bounds on it.
//! - [`represent`]: complete enumeration of the triples `(n, x, y)` with `Φ_n(x, y) = m`.
//! - [`density`]: membership sieves for the values of `Φ_3`, `Φ_4` and all forms, and the
//!   leading density constants.
//!
//! Every accept/reject decision on a representation is made in exact integer arithmetic;
//! floating point is used only to size loops and for the real-valued minima and constants.

pub mod arith;
pub mod cyclotomic;
pub mod density;
mod error;
pub mod minima;
pub mod represent;

pub use error::{Error, Result};

/// Resource limits shared by the sieves and enumerators.
///
/// Anything that would exceed a limit fails with [`Error::Budget`] instead of truncating.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Upper bound on the bytes a single table (prime list, spf array, bit array) may use.
    pub memory_bytes: u64,
    /// Largest bit length allowed for constructed big integers such as `2^{k_s}`.
    pub max_bits: u64,
    /// Largest `N` accepted by the lattice enumerators.
    pub max_lattice_n: u64,
    /// Sieve segment length in entries.
    pub segment_size: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            memory_bytes: 1 << 30,
            max_bits: 1 << 16,
            max_lattice_n: 100_000_000,
            segment_size: 1 << 20,
        }
    }
}

impl Budget {
    pub(crate) fn check_bytes(&self, what: &'static str, bytes: u64) -> Result<()> {
        if bytes > self.memory_bytes {
            return Err(Error::Budget {
                what,
                requested: bytes as u128,
                limit: self.memory_bytes as u128,
            });
        }
        Ok(())
    }
}
