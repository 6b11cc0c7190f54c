//! Linear codes over prime fields: the partition-based constructions and a
//! decodability check for every present receiver.

mod code;
mod construct;
mod field;
mod partition;
mod verify;

use thiserror::Error;

pub use code::LinearCode;
pub use construct::{cyclic_partition_code, imperfect_patch_code, truncated_code, truncated_min_prime, FieldChoice};
pub use field::{is_prime, next_prime, PrimeField};
pub use partition::Partition;
pub use verify::{decodable_message, first_failure, verify_code};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AchievabilityError {
    #[error("field size {0} is not prime")]
    NotPrime(u32),
    #[error("GF({q}) has fewer than {l} distinct nonzero powers of its primitive root")]
    FieldTooSmall { q: u32, l: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid part set: {0}")]
    InvalidPartSet(String),
    #[error("truncation level {t} must be below the number of parts {l}")]
    Truncation { t: usize, l: usize },
    #[error("row {row} has {len} coefficients, expected {m}")]
    RowLength { row: usize, len: usize, m: usize },
    #[error("coefficient {value} is outside [0:{q}-1]")]
    Coefficient { value: i64, q: u32 },
    #[error("code has {code} columns but the instance has {instance} messages")]
    MessageCount { code: usize, instance: usize },
    #[error("malformed code JSON: {0}")]
    Json(String),
}
