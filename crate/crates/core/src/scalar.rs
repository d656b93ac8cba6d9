//! Residue arithmetic modulo a prime power `p^k`, generic over the unsigned
//! integer type that stores the residues.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{PrimInt, ToPrimitive, Unsigned};
use serde::Serialize;

use crate::error::{Error, Result};

/// An unsigned machine integer usable as a residue modulo `p^k`.
///
/// A modulus `m` is admissible for the type when `2m` still fits, so that
/// additions never overflow. Products go through [`Residue::mul_mod`].
pub trait Residue:
    PrimInt + Unsigned + Hash + Debug + Display + Default + Send + Sync + 'static
{
    const NAME: &'static str;

    /// `self * rhs mod m`, for `self, rhs < m`.
    fn mul_mod(self, rhs: Self, m: Self) -> Self;

    fn from_u128(v: u128) -> Option<Self>;

    fn as_u128(self) -> u128 {
        self.to_u128().expect("unsigned residue fits in u128")
    }

    fn lit(v: u64) -> Self {
        Self::from_u128(v as u128).expect("literal exceeds residue width")
    }
}

impl Residue for u32 {
    const NAME: &'static str = "u32";

    fn mul_mod(self, rhs: Self, m: Self) -> Self {
        ((self as u64 * rhs as u64) % m as u64) as u32
    }

    fn from_u128(v: u128) -> Option<Self> {
        u32::try_from(v).ok()
    }
}

impl Residue for u64 {
    const NAME: &'static str = "u64";

    fn mul_mod(self, rhs: Self, m: Self) -> Self {
        ((self as u128 * rhs as u128) % m as u128) as u64
    }

    fn from_u128(v: u128) -> Option<Self> {
        u64::try_from(v).ok()
    }
}

impl Residue for u128 {
    const NAME: &'static str = "u128";

    fn mul_mod(self, rhs: Self, m: Self) -> Self {
        if let Some(prod) = self.checked_mul(rhs) {
            return prod % m;
        }
        // double-and-add; m <= u128::MAX / 2 keeps every step in range
        let (mut a, mut b, mut acc) = (self, rhs, 0u128);
        while b > 0 {
            if b & 1 == 1 {
                acc += a;
                if acc >= m {
                    acc -= m;
                }
            }
            a += a;
            if a >= m {
                a -= m;
            }
            b >>= 1;
        }
        acc
    }

    fn from_u128(v: u128) -> Option<Self> {
        Some(v)
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The ring `Z/p^k`, viewed as `Z_p` truncated at `k` digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicModulus<T: Residue> {
    p: u64,
    k: u32,
    p_t: T,
    m: T,
    /// Order of `(Z/p^k)^×`.
    phi: u128,
}

impl<T: Residue> PadicModulus<T> {
    /// `p` must already be known prime.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::BadPrecision(k));
        }
        let capacity = || Error::CapacityExceeded {
            p,
            k,
            type_name: T::NAME,
        };
        let m = (p as u128).checked_pow(k).ok_or_else(capacity)?;
        let m_t = T::from_u128(m).ok_or_else(capacity)?;
        if m_t > T::max_value() / (T::one() + T::one()) {
            return Err(capacity());
        }
        let phi = (p as u128 - 1) * (p as u128).pow(k - 1);
        Ok(Self {
            p,
            k,
            p_t: T::lit(p),
            m: m_t,
            phi,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn p_residue(&self) -> T {
        self.p_t
    }

    pub fn modulus(&self) -> T {
        self.m
    }

    pub fn add(&self, a: T, b: T) -> T {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    pub fn sub(&self, a: T, b: T) -> T {
        if a >= b {
            a - b
        } else {
            a + (self.m - b)
        }
    }

    pub fn neg(&self, a: T) -> T {
        if a.is_zero() {
            a
        } else {
            self.m - a
        }
    }

    pub fn mul(&self, a: T, b: T) -> T {
        a.mul_mod(b, self.m)
    }

    pub fn pow(&self, base: T, mut exp: u128) -> T {
        let mut acc = T::one() % self.m;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a residue prime to `p`, by Euler's theorem.
    pub fn inv(&self, a: T) -> Option<T> {
        if (a % self.p_t).is_zero() {
            return None;
        }
        Some(self.pow(a, self.phi - 1))
    }

    pub fn reduce_u128(&self, v: u128) -> T {
        T::from_u128(v % self.m.as_u128()).expect("reduced value fits")
    }

    pub fn reduce_i128(&self, v: i128) -> T {
        let m = self.m.as_u128() as i128;
        T::from_u128(v.rem_euclid(m) as u128).expect("reduced value fits")
    }

    pub fn reduce_big(&self, v: &BigInt) -> T {
        let m = BigInt::from(self.m.as_u128());
        let r = ((v % &m) + &m) % &m;
        T::from_u128(r.to_u128().expect("reduced value fits")).expect("reduced value fits")
    }

    /// `p`-adic valuation of a residue; `None` for zero (valuation at least `k`).
    pub fn val_p(&self, a: T) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut a = a;
        while (a % self.p_t).is_zero() {
            a = a / self.p_t;
            v += 1;
        }
        Some(v)
    }

    /// Centered representative of a residue modulo `p`, i.e. the digit in `[0, p)`.
    pub fn mod_p(&self, a: T) -> u64 {
        (a % self.p_t).as_u128() as u64
    }

    /// Teichmüller lift of `a mod p` inside `Z/p^k`: the unique `w` with
    /// `w^(p-1) = 1` and `w ≡ a (mod p)`, by Newton iteration on `x^(p-1) - 1`.
    pub fn teichmuller(&self, a: T) -> Option<T> {
        let a = a % self.p_t;
        if a.is_zero() {
            return None;
        }
        let one = T::one() % self.m;
        let pm1 = T::lit(self.p - 1);
        let mut w = a;
        // quadratic convergence: ceil(log2 k) + 1 rounds suffice
        for _ in 0..=64 {
            let w_pm2 = self.pow(w, self.p as u128 - 2);
            let f = self.sub(self.mul(w_pm2, w), one);
            if f.is_zero() {
                return Some(w);
            }
            let df = self.mul(pm1 % self.m, w_pm2);
            let step = self.mul(f, self.inv(df).expect("derivative is a unit"));
            w = self.sub(w, step);
        }
        unreachable!("Newton iteration for the Teichmuller lift did not converge")
    }
}

/// An element of `Z_p` known modulo `p^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar<T: Residue> {
    pub value: T,
    pub p: u64,
    pub k: u32,
}

impl<T: Residue> PadicScalar<T> {
    pub fn valuation(&self) -> Option<u32> {
        if self.value.is_zero() {
            return None;
        }
        let p = T::lit(self.p);
        let mut v = 0;
        let mut a = self.value;
        while (a % p).is_zero() {
            a = a / p;
            v += 1;
        }
        Some(v)
    }

    pub fn is_unit(&self) -> bool {
        !(self.value % T::lit(self.p)).is_zero()
    }

    /// Value as a signed representative in `(-p^k/2, p^k/2]`.
    pub fn centered(&self) -> i128 {
        let m = (self.p as u128).pow(self.k) as i128;
        let v = self.value.as_u128() as i128;
        if 2 * v > m {
            v - m
        } else {
            v
        }
    }
}

impl<T: Residue> Display for PadicScalar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.p, self.k)
    }
}

impl<T: Residue> Serialize for PadicScalar<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.value.to_string())
    }
}
