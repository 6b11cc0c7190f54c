//! Exhaustive ground truth: minimum-length linear codes, a naive `L*`, and
//! sweeps of all small instances against the closed forms.

mod brute;
mod search;
mod sweep;

use thiserror::Error;

use crate::engine::ChainError;

pub use brute::{brute_force_l_star, BRUTE_MAX_M};
pub use search::{min_linear_code, min_linear_length, subspace_count, DEFAULT_MAX_MATRICES};
pub use sweep::{
    canonical_families, sweep, sweep_with_limits, write_sweep_csv, write_sweep_json, OracleLimits, SweepRecord,
    SWEEP_MAX_ABSENT, SWEEP_MAX_M,
};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("field size {0} is not prime")]
    NotPrime(u32),
    #[error("m = {m} exceeds the cap of {cap}")]
    TooLarge { m: usize, cap: usize },
    #[error("max absent {max_absent} exceeds the cap of {cap}")]
    TooManyAbsent { max_absent: usize, cap: usize },
    #[error("maximum length {l_max} exceeds m = {m}")]
    LengthAboveM { l_max: usize, m: usize },
    #[error("search would visit {count} matrices, above the cap of {cap}")]
    SearchSpace { count: u64, cap: u64 },
    #[error(transparent)]
    Chain(ChainError),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("write failed: {0}")]
    Io(String),
}

impl From<std::io::Error> for OracleError {
    fn from(e: std::io::Error) -> Self {
        OracleError::Io(e.to_string())
    }
}
