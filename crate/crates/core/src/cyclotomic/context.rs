use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::scalar::{is_prime, PadicModulus, Residue};

/// Parameters and precomputed basis-change data for `Z_p[ζ]` modulo `p^k`.
///
/// Contexts are immutable once built (the lazily filled caches are
/// write-once) and are shared between elements through an `Arc`.
pub struct RingContext<T: Residue> {
    modulus: PadicModulus<T>,
    /// `to_pi[j][i]`: coefficient of `π^j` in `ζ^i`, i.e. `(-1)^j C(i, j)`.
    to_pi: Vec<Vec<T>>,
    /// `from_pi[i][j]`: coefficient of `ζ^i` in `π^j`, i.e. `(-1)^i C(j, i)`.
    from_pi: Vec<Vec<T>>,
    /// `p / π^(p-1) = Π_{a=1}^{p-1} (1 + ζ + … + ζ^(a-1))`.
    wilson_unit: Vec<T>,
    pub(super) varpi: OnceLock<Result<Vec<T>>>,
    pub(super) varpi_powers: OnceLock<Vec<Vec<T>>>,
}

impl<T: Residue> std::fmt::Debug for RingContext<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RingContext")
            .field("p", &self.p())
            .field("k", &self.k())
            .field("N", &self.precision())
            .finish()
    }
}

impl<T: Residue> RingContext<T> {
    pub fn new(p: u64, k: u32) -> Result<Arc<Self>> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotAnOddPrime(p));
        }
        let modulus = PadicModulus::<T>::new(p, k)?;
        let d = (p - 1) as usize;

        // Pascal's triangle modulo p^k; plain binomials overflow for large p.
        let mut binom = vec![vec![T::zero(); d]; d];
        for i in 0..d {
            binom[i][0] = T::one();
            for j in 1..=i {
                let above = if j < i { binom[i - 1][j] } else { T::zero() };
                binom[i][j] = modulus.add(binom[i - 1][j - 1], above);
            }
        }
        let signed = |sign_exp: usize, v: T| {
            if sign_exp.is_multiple_of(2) {
                v
            } else {
                modulus.neg(v)
            }
        };
        let to_pi = (0..d)
            .map(|j| {
                (0..d)
                    .map(|i| {
                        if i >= j {
                            signed(j, binom[i][j])
                        } else {
                            T::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let from_pi = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if j >= i {
                            signed(i, binom[j][i])
                        } else {
                            T::zero()
                        }
                    })
                    .collect()
            })
            .collect();

        let mut ctx = RingContext {
            modulus,
            to_pi,
            from_pi,
            wilson_unit: Vec::new(),
            varpi: OnceLock::new(),
            varpi_powers: OnceLock::new(),
        };

        let mut w = ctx.int_coeffs(1);
        for a in 2..p {
            let c_a: Vec<T> = (0..d)
                .map(|i| if (i as u64) < a { T::one() } else { T::zero() })
                .collect();
            w = ctx.mul_coeffs(&w, &c_a);
        }
        // Wilson: p/π^(p-1) ≡ (p-1)! ≡ -1 (mod 𝔭), and π^(p-1) · w = p exactly.
        let residue = w
            .iter()
            .fold(0u64, |acc, &c| (acc + ctx.modulus.mod_p(c)) % p);
        assert_eq!(residue, p - 1, "Wilson normalization failed for p = {p}");
        let pi = ctx.pi_coeffs_raw();
        let mut pi_pow = ctx.int_coeffs(1);
        for _ in 0..p - 1 {
            pi_pow = ctx.mul_coeffs(&pi_pow, &pi);
        }
        assert_eq!(
            ctx.mul_coeffs(&pi_pow, &w),
            ctx.int_coeffs(p as i128),
            "π^(p-1) · w ≠ p"
        );
        ctx.wilson_unit = w;
        Ok(Arc::new(ctx))
    }

    pub fn p(&self) -> u64 {
        self.modulus.p()
    }

    pub fn k(&self) -> u32 {
        self.modulus.k()
    }

    /// `π`-adic precision `N = k(p-1)`.
    pub fn precision(&self) -> u64 {
        self.k() as u64 * (self.p() - 1)
    }

    /// Rank of `o` over `Z_p`, `p - 1`.
    pub fn degree(&self) -> usize {
        (self.p() - 1) as usize
    }

    pub fn modulus(&self) -> &PadicModulus<T> {
        &self.modulus
    }

    pub(crate) fn wilson_unit(&self) -> &[T] {
        &self.wilson_unit
    }

    pub(crate) fn same_ring(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.p() == other.p() && self.k() == other.k())
    }

    pub(crate) fn int_coeffs(&self, v: i128) -> Vec<T> {
        let mut c = vec![T::zero(); self.degree()];
        c[0] = self.modulus.reduce_i128(v);
        c
    }

    pub(crate) fn pi_coeffs_raw(&self) -> Vec<T> {
        let mut c = self.int_coeffs(1);
        c[1] = self.modulus.neg(T::one());
        c
    }

    pub(crate) fn add_coeffs(&self, a: &[T], b: &[T]) -> Vec<T> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.modulus.add(x, y))
            .collect()
    }

    pub(crate) fn sub_coeffs(&self, a: &[T], b: &[T]) -> Vec<T> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.modulus.sub(x, y))
            .collect()
    }

    /// Folds a length-`p` vector over `1, ζ, …, ζ^(p-1)` into the reduced basis
    /// via `ζ^(p-1) = -(1 + ζ + … + ζ^(p-2))`.
    pub(crate) fn fold_top(&self, mut acc: Vec<T>) -> Vec<T> {
        let top = acc.pop().expect("length p vector");
        acc.iter().map(|&c| self.modulus.sub(c, top)).collect()
    }

    pub(crate) fn mul_coeffs(&self, a: &[T], b: &[T]) -> Vec<T> {
        let p = self.p() as usize;
        let m = &self.modulus;
        let mut acc = vec![T::zero(); p];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let idx = (i + j) % p;
                acc[idx] = m.add(acc[idx], m.mul(x, y));
            }
        }
        self.fold_top(acc)
    }

    pub(crate) fn to_pi_basis(&self, c: &[T]) -> Vec<T> {
        let m = &self.modulus;
        self.to_pi
            .iter()
            .enumerate()
            .map(|(j, row)| {
                row[j..]
                    .iter()
                    .zip(&c[j..])
                    .fold(T::zero(), |acc, (&r, &x)| m.add(acc, m.mul(r, x)))
            })
            .collect()
    }

    pub(crate) fn pi_basis_to_zeta(&self, c: &[T]) -> Vec<T> {
        let m = &self.modulus;
        self.from_pi
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row[i..]
                    .iter()
                    .zip(&c[i..])
                    .fold(T::zero(), |acc, (&r, &x)| m.add(acc, m.mul(r, x)))
            })
            .collect()
    }

    #[cfg(test)]
    pub(crate) fn basis_matrices(&self) -> (&[Vec<T>], &[Vec<T>]) {
        (&self.to_pi, &self.from_pi)
    }
}
