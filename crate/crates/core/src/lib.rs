//! Monic GCDs of univariate polynomials over towers of number fields.
//!
//! The main entry point is [`modular_gcd`], a multi-prime algorithm with
//! rational reconstruction and exact trial division. [`pff_gcd`] and
//! [`monic_ea_char0`] are characteristic-0 algorithms used as references.
//! Towers that are not fields are handled: a zero divisor found along the
//! way is returned as a nontrivial factor of one of the extensions.

pub mod bench;
pub mod error;
pub mod expr;
pub mod ffgcd;
pub mod field;
pub mod modgcd;
pub mod modp;
pub mod primes;
pub mod reconstruct;
pub mod rec;
pub mod tower;
pub(crate) mod zarith;

pub use error::{Error, Result};
pub use ffgcd::{monic_ea_char0, pff_gcd};
pub use modgcd::{modular_gcd, modular_gcd_with_stats, trial_divide, GcdOptions, GcdOutcome, GcdStats, Schedule};
pub use reconstruct::ReconMode;
pub use expr::{parse_poly, parse_tower, ParseError};
pub use tower::{RPoly, RingSpec, ZdResult, ZeroDivisorChar0};
