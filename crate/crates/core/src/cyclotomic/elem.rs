use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::Serialize;

use super::{RingContext, ValuationResult};
use crate::error::{Error, Result};
use crate::scalar::Residue;

/// An element of `Z_p[ζ]` modulo `p^k`, in the basis `1, ζ, …, ζ^(p-2)`.
#[derive(Clone)]
pub struct CycloElem<T: Residue> {
    ctx: Arc<RingContext<T>>,
    coeffs: Vec<T>,
}

impl<T: Residue> PartialEq for CycloElem<T> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_ring(&other.ctx) && self.coeffs == other.coeffs
    }
}

impl<T: Residue> Eq for CycloElem<T> {}

impl<T: Residue> fmt::Debug for CycloElem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CycloElem(p={}, k={}, {:?})",
            self.ctx.p(),
            self.ctx.k(),
            self.coeffs
        )
    }
}

/// Canonical text form: nonzero terms `c*zeta^i`, low degree first, reduced
/// coefficients in decimal. Parses back to the same element.
impl<T: Residue> fmt::Display for CycloElem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*zeta")?,
                _ => write!(f, "{c}*zeta^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `{"p", "k", "coefficients"}` with decimal coefficients, low degree first.
impl<T: Residue> Serialize for CycloElem<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CycloElem", 3)?;
        st.serialize_field("p", &self.p())?;
        st.serialize_field("k", &self.ctx.k())?;
        st.serialize_field(
            "coefficients",
            &self
                .coeffs
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>(),
        )?;
        st.end()
    }
}

/// Constructors.
impl<T: Residue> RingContext<T> {
    pub fn elem(self: &Arc<Self>, coeffs: Vec<T>) -> CycloElem<T> {
        assert_eq!(coeffs.len(), self.degree(), "coefficient count must be p-1");
        let m = self.modulus().modulus();
        CycloElem {
            ctx: Arc::clone(self),
            coeffs: coeffs.into_iter().map(|c| c % m).collect(),
        }
    }

    /// Element from signed integer coefficients in the ζ-power basis
    /// (fewer than `p - 1` coefficients are zero-padded).
    pub fn from_ints(self: &Arc<Self>, coeffs: &[i64]) -> CycloElem<T> {
        assert!(coeffs.len() <= self.degree());
        let mut c = vec![T::zero(); self.degree()];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = self.modulus().reduce_i128(v as i128);
        }
        self.elem(c)
    }

    pub fn from_int(self: &Arc<Self>, v: i64) -> CycloElem<T> {
        self.elem(self.int_coeffs(v as i128))
    }

    pub fn from_residue(self: &Arc<Self>, v: T) -> CycloElem<T> {
        let mut c = vec![T::zero(); self.degree()];
        c[0] = v;
        self.elem(c)
    }

    pub fn zero(self: &Arc<Self>) -> CycloElem<T> {
        self.from_int(0)
    }

    pub fn one(self: &Arc<Self>) -> CycloElem<T> {
        self.from_int(1)
    }

    /// `ζ^i` for any integer `i`.
    pub fn zeta_pow(self: &Arc<Self>, i: i64) -> CycloElem<T> {
        let p = self.p() as usize;
        let mut acc = vec![T::zero(); p];
        acc[i.rem_euclid(p as i64) as usize] = T::one();
        self.elem(self.fold_top(acc))
    }

    pub fn zeta(self: &Arc<Self>) -> CycloElem<T> {
        self.zeta_pow(1)
    }

    /// The uniformiser `π = 1 - ζ`.
    pub fn pi(self: &Arc<Self>) -> CycloElem<T> {
        self.elem(self.pi_coeffs_raw())
    }

    /// Element given by its coordinates in the π-power basis.
    pub fn from_pi_coeffs(self: &Arc<Self>, c: &[T]) -> CycloElem<T> {
        self.elem(self.pi_basis_to_zeta(c))
    }
}

impl<T: Residue> CycloElem<T> {
    pub fn ctx(&self) -> &Arc<RingContext<T>> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx.same_ring(&other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn with(&self, coeffs: Vec<T>) -> Self {
        CycloElem {
            ctx: Arc::clone(&self.ctx),
            coeffs,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.ctx.add_coeffs(&self.coeffs, &other.coeffs)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.ctx.sub_coeffs(&self.coeffs, &other.coeffs)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with(self.ctx.mul_coeffs(&self.coeffs, &other.coeffs)))
    }

    pub fn scale(&self, c: T) -> Self {
        let m = self.ctx.modulus();
        self.with(self.coeffs.iter().map(|&x| m.mul(x, c)).collect())
    }

    pub fn pow(&self, mut exp: u128) -> Self {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == T::one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Image in the residue field `o/𝔭 = F_p` (ζ ≡ 1, so the coefficient sum).
    pub fn residue_mod_p(&self) -> u64 {
        let m = self.ctx.modulus();
        let p = self.p();
        self.coeffs.iter().fold(0, |acc, &c| (acc + m.mod_p(c)) % p)
    }

    pub fn is_unit(&self) -> bool {
        self.residue_mod_p() != 0
    }

    /// Coordinates in the π-power basis `1, π, …, π^(p-2)`.
    pub fn pi_coeffs(&self) -> Vec<T> {
        self.ctx.to_pi_basis(&self.coeffs)
    }

    /// `v_π(x) = min_j ((p-1) v_p(c'_j) + j)` over the π-basis coordinates.
    pub fn pi_valuation(&self) -> ValuationResult {
        let m = self.ctx.modulus();
        let d = self.ctx.degree() as u64;
        self.pi_coeffs()
            .iter()
            .enumerate()
            .filter_map(|(j, &c)| m.val_p(c).map(|v| d * v as u64 + j as u64))
            .min()
            .map_or(
                ValuationResult::AtLeast(self.ctx.precision()),
                ValuationResult::Exact,
            )
    }

    /// Leading term relative to powers of the canonical uniformiser `ϖ`:
    /// `(n, d)` with `x ≡ d ϖ^n (mod 𝔭^(n+1))`, `d ∈ [1, p)`.
    ///
    /// Uses `ϖ ≡ π (mod 𝔭²)` and `ϖ^(p-1) = -p`, so that for `n = (p-1)s + j`
    /// the π-basis term `t p^s π^j` contributes `d = (-1)^s t mod p`.
    pub fn leading_digit(&self) -> Option<(u64, u64)> {
        let n = self.pi_valuation().exact()?;
        let d = self.ctx.degree() as u64;
        let (s, j) = (n / d, (n % d) as usize);
        let m = self.ctx.modulus();
        let c = self.pi_coeffs()[j];
        let t = m.mod_p(c / m.p_residue().pow(s as u32));
        let p = self.p();
        let digit = if s % 2 == 0 { t } else { (p - t) % p };
        Some((n, digit))
    }

    /// Canonical key for the image in `o/𝔭^m` (requires `m ≤ N`): π-basis
    /// coordinate `j` reduced modulo `p^s_j` with `s_j = ⌈(m - j)/(p-1)⌉`.
    pub fn residue_key(&self, level: u64) -> Vec<T> {
        assert!(
            level <= self.ctx.precision(),
            "residue level exceeds precision"
        );
        let d = self.ctx.degree() as u64;
        let p_t = self.ctx.modulus().p_residue();
        self.pi_coeffs()
            .into_iter()
            .enumerate()
            .map(|(j, c)| {
                let j = j as u64;
                let s = if level > j {
                    (level - j).div_ceil(d)
                } else {
                    0
                };
                c % p_t.pow(s as u32)
            })
            .collect()
    }

    /// Whether `x ≡ y (mod 𝔭^level)`.
    pub fn congruent(&self, other: &Self, level: u64) -> bool {
        (self - other).pi_valuation().value() >= level
    }

    /// `σ_j : ζ ↦ ζ^j`.
    pub fn galois(&self, j: i64) -> Result<Self> {
        let p = self.p() as i64;
        let j = j.rem_euclid(p);
        if j == 0 {
            return Err(Error::BadGaloisIndex(j));
        }
        let m = self.ctx.modulus();
        let mut acc = vec![T::zero(); p as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let t = ((i as i64 * j) % p) as usize;
            acc[t] = m.add(acc[t], c);
        }
        Ok(self.with(self.ctx.fold_top(acc)))
    }

    /// Complex conjugation `σ_{-1}`, the generator of `Gal(K|K⁺)`.
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is prime to p")
    }

    /// Multiplicative inverse of a unit: extended Euclid in `F_p[X]` against
    /// `Φ_p`, then Newton lifting `y ← y(2 - xy)` up to `p^k`.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let p = self.p();
        let m = self.ctx.modulus();
        let a: Vec<u64> = self.coeffs.iter().map(|&c| m.mod_p(c)).collect();
        let phi: Vec<u64> = vec![1; p as usize];
        let s = fp_poly::inverse_mod(&a, &phi, p).ok_or(Error::NotAUnit)?;
        let mut y = self
            .ctx
            .from_ints(&s.iter().map(|&v| v as i64).collect::<Vec<_>>());
        let two = self.ctx.from_int(2);
        let mut precision = 1u32;
        while precision < self.ctx.k() {
            y = &y * &(&two - &(self * &y));
            precision *= 2;
        }
        debug_assert!((self * &y).is_one());
        Ok(y)
    }

    /// Division by a unit.
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * &other.invert()?)
    }

    /// Signed power; negative exponents require a unit.
    pub fn pow_signed(&self, exp: i128) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u128))
        } else {
            Ok(self.invert()?.pow(exp.unsigned_abs()))
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<T: Residue> $tr<&CycloElem<T>> for &CycloElem<T> {
            type Output = CycloElem<T>;

            /// Panics if the operands belong to different rings; use the
            /// `try_*` methods to get an error instead.
            fn $method(self, rhs: &CycloElem<T>) -> CycloElem<T> {
                self.$inner(rhs).expect("operands from different rings")
            }
        }

        impl<T: Residue> $tr<CycloElem<T>> for CycloElem<T> {
            type Output = CycloElem<T>;

            fn $method(self, rhs: CycloElem<T>) -> CycloElem<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<T: Residue> Neg for &CycloElem<T> {
    type Output = CycloElem<T>;

    fn neg(self) -> CycloElem<T> {
        let m = self.ctx.modulus();
        self.with(self.coeffs.iter().map(|&c| m.neg(c)).collect())
    }
}

impl<T: Residue> Neg for CycloElem<T> {
    type Output = CycloElem<T>;

    fn neg(self) -> CycloElem<T> {
        -&self
    }
}

/// Dense polynomials over `F_p`, low degree first.
mod fp_poly {
    use crate::linalg::inv_mod_p;

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn sub_scaled(a: &[u64], b: &[u64], c: u64, shift: usize, p: u64) -> Vec<u64> {
        let mut out = a.to_vec();
        if out.len() < b.len() + shift {
            out.resize(b.len() + shift, 0);
        }
        for (i, &v) in b.iter().enumerate() {
            out[i + shift] = (out[i + shift] + p - (c * v) % p) % p;
        }
        trim(out)
    }

    fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let b = trim(b.to_vec());
        let lead_inv = inv_mod_p(*b.last().expect("nonzero divisor"), p);
        let mut r = trim(a.to_vec());
        let mut q = vec![0u64; r.len().saturating_sub(b.len()) + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() * lead_inv % p;
            q[shift] = c;
            r = sub_scaled(&r, &b, c, shift, p);
        }
        (trim(q), r)
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        sub_scaled(a, b, 1, 0, p)
    }

    /// `s` with `s·a ≡ 1 (mod f, p)`, if `gcd(a, f) = 1`.
    pub(super) fn inverse_mod(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
        let (mut r0, mut r1) = (trim(f.to_vec()), trim(a.to_vec()));
        let (mut s0, mut s1) = (Vec::<u64>::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s = sub(&s0, &mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            return None;
        }
        let c = inv_mod_p(r0[0], p);
        let (_, s) = divrem(&mul(&s0, &[c], p), f, p);
        let mut s = s;
        s.resize(f.len() - 1, 0);
        Some(s)
    }
}
