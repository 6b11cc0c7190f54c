//! Lower bounds, structure classification and code constructions for
//! pliable index coding.
//!
//! An instance is `m` messages and the family of absent receivers; every
//! other proper subset of `[1:m]` is a present receiver that must decode one
//! message it lacks. The crate computes lower bounds on the broadcast rate
//! from the absent family (longest nested chain, the adversarial skip count
//! `L*`, an improved nested-chain test), recognizes families with a known
//! optimal rate, builds matching linear codes, and checks everything
//! against exhaustive search at small sizes.

pub mod achievability;
pub mod bounds;
pub mod canon;
pub mod engine;
pub mod instance;
pub mod nested;
pub mod oracle;

pub use instance::{parse_instance, InstanceError, MessageIndex, PliableInstance, ReceiverSet};
