//! The local cyclotomic ring `o = Z_p[ζ]` truncated at `p`-adic coefficient
//! precision `k`, i.e. modulo `p^k o = 𝔭^N` with `N = k(p-1)`.
//!
//! Elements live in the ζ-power basis `1, ζ, …, ζ^(p-2)`, where ring
//! operations are cheap. Valuations go through the π-power basis
//! (`π = 1 - ζ`), in which `{π^i p^j}` is an orthogonal frame for the
//! `π`-adic filtration.

mod context;
mod elem;
mod norm;
mod roots;

pub use context::RingContext;
pub use elem::CycloElem;

use serde::Serialize;

/// `π`-adic valuation of an element known modulo `𝔭^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ValuationResult {
    /// The element is nonzero modulo `𝔭^(n+1)` and zero modulo `𝔭^n`.
    Exact(u64),
    /// The element vanishes at working precision `N`.
    AtLeast(u64),
}

impl ValuationResult {
    /// The exact value, or the precision bound when the element vanishes.
    pub fn value(self) -> u64 {
        match self {
            ValuationResult::Exact(n) | ValuationResult::AtLeast(n) => n,
        }
    }

    pub fn exact(self) -> Option<u64> {
        match self {
            ValuationResult::Exact(n) => Some(n),
            ValuationResult::AtLeast(_) => None,
        }
    }
}
