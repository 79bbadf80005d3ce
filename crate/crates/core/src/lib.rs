//! Exact computational machinery for point/cubic-curve incidence experiments
//! over prime fields: field arithmetic, curve classification, the
//! coefficient-space duality, a cached incidence counting engine, bound
//! evaluators, and brute-force oracles for differential testing.

pub mod bounds;
pub mod curves;
pub mod dual;
pub mod error;
pub mod field;
pub mod incidence;
pub mod oracle;
pub mod poly;

pub use error::{Error, Result};

/// Seed derivation for campaigns: per-trial seeds come from the master seed
/// and a counter through a splitmix64 step, so trials are independent and
/// reproducible.
pub mod seeds {
    pub fn derive_seed(master: u64, counter: u64) -> u64 {
        let mut z = master ^ counter.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}
