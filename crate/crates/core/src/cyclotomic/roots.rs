use std::sync::Arc;

use super::{CycloElem, RingContext, ValuationResult};
use crate::error::{Error, Result};
use crate::scalar::Residue;

impl<T: Residue> RingContext<T> {
    /// Teichmüller representative `⟨a⟩`: the `(p-1)`-th root of unity
    /// congruent to `a` modulo `𝔭`. It lies in `Z_p`.
    pub fn teichmuller(self: &Arc<Self>, a: i64) -> Result<CycloElem<T>> {
        let m = self.modulus();
        let r = m.reduce_i128(a as i128);
        let w = m.teichmuller(r).ok_or(Error::DivisibleByP(a))?;
        Ok(self.from_residue(w))
    }

    /// The canonical uniformiser `ϖ`: the root of `x^(p-1) + p` with
    /// `ϖ/π ≡ 1 (mod 𝔭)`.
    ///
    /// `ϖ = π y` where `y^(p-1) = -p/π^(p-1)`; the right side is a 1-unit by
    /// Wilson's theorem, and `y` is Hensel-lifted from `y₀ = 1`.
    pub fn canonical_varpi(self: &Arc<Self>) -> Result<CycloElem<T>> {
        let coeffs = self.varpi.get_or_init(|| self.compute_varpi()).clone()?;
        Ok(self.elem(coeffs))
    }

    fn compute_varpi(self: &Arc<Self>) -> Result<Vec<T>> {
        if self.k() < 2 {
            return Err(Error::precision(2 * (self.p() - 1), self.precision()));
        }
        let p = self.p();
        let target = -self.elem(self.wilson_unit().to_vec());
        let pm1 = self.from_int(p as i64 - 1);
        let mut y = self.one();
        let mut converged = false;
        for _ in 0..2 * (64 - self.precision().leading_zeros()) + 4 {
            let y_pm2 = y.pow(p as u128 - 2);
            let f = &(&y_pm2 * &y) - &target;
            if f.is_zero() {
                converged = true;
                break;
            }
            let df = &pm1 * &y_pm2;
            y = &y - &(&f * &df.invert()?);
        }
        assert!(converged, "Hensel lifting of varpi did not converge");
        let varpi = &self.pi() * &y;
        assert!((&varpi.pow(p as u128 - 1) + &self.from_int(p as i64)).is_zero());
        assert_eq!(varpi.pi_valuation(), ValuationResult::Exact(1));
        Ok(varpi.coeffs().to_vec())
    }

    /// `ϖ^j` for `0 ≤ j ≤ N`, cached.
    pub fn varpi_pow(self: &Arc<Self>, j: u64) -> Result<CycloElem<T>> {
        let varpi = self.canonical_varpi()?;
        let n = self.precision() as usize;
        let powers = self.varpi_powers.get_or_init(|| {
            let mut out = Vec::with_capacity(n + 1);
            let mut acc = self.one();
            for _ in 0..=n {
                out.push(acc.coeffs().to_vec());
                acc = &acc * &varpi;
            }
            out
        });
        match powers.get(j as usize) {
            Some(c) => Ok(self.elem(c.clone())),
            // beyond N every power vanishes at working precision
            None => Ok(self.zero()),
        }
    }
}

impl<T: Residue> CycloElem<T> {
    /// A `p`-th root `y` with `y^p ≡ x` modulo `𝔭^N`.
    ///
    /// The root is determined only modulo `𝔭^(N-(p-1))` (up to `μ_p`): `x`
    /// must be `⟨a⟩ · u` with `u ∈ U_{p+1}`. The Teichmüller factor is its own
    /// `p`-th root; `u` is matched digit by digit, the factor `1 + tϖ^j`
    /// (`j = m - (p-1) ≥ 2`) moving exactly the level-`m` digit of the `p`-th
    /// power since `(1 + tϖ^j)^p ≡ 1 - tϖ^m (mod 𝔭^(m+1))`.
    pub fn pth_root(&self) -> Result<Self> {
        let ctx = Arc::clone(self.ctx());
        let p = ctx.p();
        let n = ctx.precision();
        if n < 2 * p {
            return Err(Error::precision(2 * p, n));
        }
        let residue = self.residue_mod_p();
        if residue == 0 {
            return Err(Error::NotAUnit);
        }
        let omega = ctx.teichmuller(residue as i64)?;
        let target = self * &omega.invert()?;
        let level = (&target - &ctx.one()).pi_valuation().value();
        if level < p + 1 {
            return Err(Error::NotAPthPower { level });
        }
        let mut root = ctx.one();
        let mut power = ctx.one();
        while let Some((m, d)) = (&target - &power).leading_digit() {
            debug_assert!(m > p);
            let t = ctx.modulus().reduce_u128(((p - d) % p) as u128);
            let step = &ctx.one() + &ctx.varpi_pow(m - (p - 1))?.scale(t);
            root = &root * &step;
            power = &power * &step.pow(p as u128);
        }
        Ok(&omega * &root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_examples() {
        let c = RingContext::<u64>::new(5, 2).unwrap();
        assert_eq!(c.teichmuller(2).unwrap(), c.from_int(7));
        assert_eq!(c.teichmuller(1).unwrap(), c.one());
        assert_eq!(c.teichmuller(5), Err(Error::DivisibleByP(5)));
        let c = RingContext::<u64>::new(7, 4).unwrap();
        for a in 1..7 {
            let w = c.teichmuller(a).unwrap();
            assert!(w.pow(6).is_one());
            for b in 1..7 {
                let lhs = &w * &c.teichmuller(b).unwrap();
                assert_eq!(lhs, c.teichmuller(a * b % 7).unwrap());
            }
        }
    }

    #[test]
    fn varpi_p3_by_hand() {
        let c = RingContext::<u64>::new(3, 4).unwrap();
        let v = c.canonical_varpi().unwrap();
        assert_eq!(&v * &v, c.from_int(-3));
        assert!(v.congruent(&c.pi(), 2));
        // the square roots of -3 are ±(1 + 2ζ), and 1 + 2ζ = 3 - 2π ≡ π (mod 𝔭²)
        assert_eq!(v, c.from_ints(&[1, 2]));
    }

    #[test]
    fn varpi_properties() {
        for p in [3, 5, 7, 11, 13] {
            let c = RingContext::<u64>::new(p, 4).unwrap();
            let v = c.canonical_varpi().unwrap();
            assert!((&v.pow(p as u128 - 1) + &c.from_int(p as i64)).is_zero());
            assert_eq!(v.pi_valuation(), ValuationResult::Exact(1));
            assert_eq!(v.conj(), -&v, "p = {p}");
            assert_eq!(v.leading_digit(), Some((1, 1)));
        }
        let low = RingContext::<u64>::new(5, 1).unwrap();
        assert!(matches!(
            low.canonical_varpi(),
            Err(Error::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn leading_digit_of_p_powers() {
        // p = -ϖ^(p-1): digit p-1 at level p-1; p² = ϖ^(2(p-1)): digit 1.
        let c = RingContext::<u64>::new(7, 4).unwrap();
        assert_eq!(c.from_int(7).leading_digit(), Some((6, 6)));
        assert_eq!(c.from_int(49).leading_digit(), Some((12, 1)));
        assert_eq!(c.zero().leading_digit(), None);
    }

    #[test]
    fn pth_root_examples() {
        for p in [3, 5, 7, 11] {
            let c = RingContext::<u64>::new(p, 4).unwrap();
            let n = c.precision();
            let y = &c.one() + &c.pi().pow(2);
            let x = y.pow(p as u128);
            let r = x.pth_root().unwrap();
            assert_eq!(r.pow(p as u128), x);
            // the root agrees with 1 + π² up to a p-th root of unity
            let ratio = &r * &y.invert().unwrap();
            assert!((0..p as i64).any(|i| ratio.congruent(&c.zeta_pow(i), n - (p - 1))));
            assert!(c.one().pth_root().unwrap().is_one());
            let one_plus_p = c.from_int(1 + p as i64);
            assert_eq!(
                one_plus_p.pth_root(),
                Err(Error::NotAPthPower { level: p - 1 })
            );
        }
        let c = RingContext::<u64>::new(5, 2).unwrap();
        assert!(matches!(
            c.one().pth_root(),
            Err(Error::PrecisionTooLow { .. })
        ));
    }
}
