//! Exact truncated arithmetic in the local cyclotomic ring `Z_p[ζ_p]`, and
//! classification of its units as `p`-th powers, `p`-primary, *primaire* and
//! *primär*.
//!
//! All arithmetic is generic over the unsigned integer type holding residues
//! modulo `p^k` (see [`Residue`]); the aliases below fix the common choices.

pub mod error;
pub mod linalg;
pub mod scalar;

mod sampling;

pub mod cyclotomic;
pub mod tame;

pub mod bernoulli;
pub mod brute;
pub mod class_space;
pub mod classify;
pub mod global;
pub mod parse;
pub mod report;
pub mod verify;

pub use cyclotomic::{CycloElem, RingContext, ValuationResult};
pub use error::{Error, Result};
pub use scalar::{PadicModulus, PadicScalar, Residue};

/// Default coefficient precision `k`.
pub const DEFAULT_PRECISION: u32 = 4;

pub type Ring = RingContext<u64>;
pub type Elem = CycloElem<u64>;
pub type WideRing = RingContext<u128>;
pub type WideElem = CycloElem<u128>;
