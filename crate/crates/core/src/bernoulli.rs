//! Exact Bernoulli numbers and the Kummer regularity criterion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::is_prime;

/// Largest `p` accepted by [`is_regular`].
pub const REGULARITY_BOUND: u64 = 150;

/// `B_0, …, B_n` by the Akiyama–Tanigawa transform (so `B_1 = +1/2`; only the
/// even-index values are used here).
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut row: Vec<BigRational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        row.push(BigRational::new(BigInt::from(1), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &row[j - 1] - &row[j];
            row[j - 1] = diff * BigInt::from(j);
        }
        out.push(row[0].clone());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Regularity {
    pub p: u64,
    pub regular: bool,
    /// Even `2j ∈ [2, p-3]` with `p | numerator(B_2j)`.
    pub irregular_indices: Vec<u64>,
}

/// Kummer's criterion: `p` is regular iff it divides none of the numerators
/// of `B_2, B_4, …, B_{p-3}`.
pub fn is_regular(p: u64) -> Result<Regularity> {
    if p > REGULARITY_BOUND {
        return Err(Error::OutOfConfiguredRange {
            p,
            max: REGULARITY_BOUND,
        });
    }
    if p == 2 || !is_prime(p) {
        return Err(Error::NotAnOddPrime(p));
    }
    let b = bernoulli_numbers(p.saturating_sub(3) as usize);
    let pb = BigInt::from(p);
    let irregular_indices: Vec<u64> = (2..=p.saturating_sub(3))
        .step_by(2)
        .filter(|&i| {
            let num = b[i as usize].numer();
            !num.is_zero() && num.abs().is_multiple_of(&pb)
        })
        .collect();
    Ok(Regularity {
        p,
        regular: irregular_indices.is_empty(),
        irregular_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], q(1, 1));
        assert_eq!(b[1], q(1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[12], q(-691, 2730));
        assert!(b[3].is_zero() && b[11].is_zero());
    }

    #[test]
    fn regularity_examples() {
        assert!(is_regular(5).unwrap().regular);
        assert!(is_regular(3).unwrap().regular);
        assert_eq!(is_regular(37).unwrap().irregular_indices, vec![32]);
        assert_eq!(
            is_regular(151),
            Err(Error::OutOfConfiguredRange { p: 151, max: 150 })
        );
        assert_eq!(is_regular(9), Err(Error::NotAnOddPrime(9)));
    }
}
