//! Totally tamely ramified extensions `L = Q_p[x]/(x^e + p)`, `gcd(e, p) = 1`.
//!
//! Here `π_F = p` and `π_L = x`, with `v_L(p) = e`. The relative norm is
//! computed as a determinant, since `L|Q_p` need not be Galois.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_integer::Integer;
use rand::Rng;
use serde::Serialize;

use crate::cyclotomic::ValuationResult;
use crate::error::{Error, Result};
use crate::linalg::det_mod;
use crate::sampling::seeded_map;
use crate::scalar::{is_prime, PadicModulus, PadicScalar, Residue};

#[derive(Debug)]
pub struct TameContext<T: Residue> {
    modulus: PadicModulus<T>,
    e: u64,
}

#[derive(Clone, PartialEq, Eq)]
pub struct TameElem<T: Residue> {
    ctx: Arc<TameContext<T>>,
    coeffs: Vec<T>,
}

impl<T: Residue> fmt::Debug for TameElem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TameElem(p={}, e={}, {:?})",
            self.ctx.p(),
            self.ctx.e,
            self.coeffs
        )
    }
}

impl<T: Residue> PartialEq for TameContext<T> {
    fn eq(&self, other: &Self) -> bool {
        self.e == other.e && self.modulus == other.modulus
    }
}

impl<T: Residue> Eq for TameContext<T> {}

impl<T: Residue> TameContext<T> {
    pub fn new(p: u64, e: u64, k: u32) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e < 2 {
            return Err(Error::BadDegree(e));
        }
        if e.gcd(&p) != 1 {
            return Err(Error::WildRamification { p, e });
        }
        Ok(Arc::new(TameContext {
            modulus: PadicModulus::new(p, k)?,
            e,
        }))
    }

    pub fn p(&self) -> u64 {
        self.modulus.p()
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn k(&self) -> u32 {
        self.modulus.k()
    }

    /// `π_L`-adic precision `k e`.
    pub fn precision(&self) -> u64 {
        self.k() as u64 * self.e
    }

    pub fn modulus(&self) -> &PadicModulus<T> {
        &self.modulus
    }

    pub fn elem(self: &Arc<Self>, coeffs: Vec<T>) -> TameElem<T> {
        assert_eq!(coeffs.len() as u64, self.e);
        let m = self.modulus.modulus();
        TameElem {
            ctx: Arc::clone(self),
            coeffs: coeffs.into_iter().map(|c| c % m).collect(),
        }
    }

    pub fn from_ints(self: &Arc<Self>, coeffs: &[i64]) -> TameElem<T> {
        assert!(coeffs.len() as u64 <= self.e);
        let mut c = vec![T::zero(); self.e as usize];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = self.modulus.reduce_i128(v as i128);
        }
        self.elem(c)
    }

    pub fn from_int(self: &Arc<Self>, v: i64) -> TameElem<T> {
        self.from_ints(&[v])
    }

    pub fn from_residue(self: &Arc<Self>, v: T) -> TameElem<T> {
        let mut c = vec![T::zero(); self.e as usize];
        c[0] = v;
        self.elem(c)
    }

    pub fn one(self: &Arc<Self>) -> TameElem<T> {
        self.from_int(1)
    }

    /// The uniformiser `π_L = x`.
    pub fn uniformizer(self: &Arc<Self>) -> TameElem<T> {
        self.from_ints(&[0, 1])
    }

    /// Uniform random element of `o_L`.
    pub fn random<R: Rng>(self: &Arc<Self>, rng: &mut R) -> TameElem<T> {
        let m = self.modulus.modulus().as_u128();
        let c = (0..self.e)
            .map(|_| self.modulus.reduce_u128(rng.gen_range(0..m)))
            .collect();
        self.elem(c)
    }
}

impl<T: Residue> TameElem<T> {
    pub fn ctx(&self) -> &Arc<TameContext<T>> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn with(&self, coeffs: Vec<T>) -> Self {
        TameElem {
            ctx: Arc::clone(&self.ctx),
            coeffs,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.ctx.modulus();
        Ok(self.with(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| m.add(a, b))
                .collect(),
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.ctx.modulus();
        Ok(self.with(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| m.sub(a, b))
                .collect(),
        ))
    }

    /// Product, folding `x^(e+i) = -p x^i`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.ctx.modulus();
        let e = self.ctx.e as usize;
        let minus_p = m.neg(m.p_residue() % m.modulus());
        let mut acc = vec![T::zero(); 2 * e - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = m.add(acc[i + j], m.mul(a, b));
            }
        }
        let (low, high) = acc.split_at(e);
        let mut out = low.to_vec();
        for (i, &h) in high.iter().enumerate() {
            out[i] = m.add(out[i], m.mul(h, minus_p));
        }
        Ok(self.with(out))
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn is_unit(&self) -> bool {
        self.ctx.modulus().mod_p(self.coeffs[0]) != 0
    }

    /// `v_L(x) = min_i (e v_p(c_i) + i)`.
    pub fn valuation(&self) -> ValuationResult {
        let m = self.ctx.modulus();
        let e = self.ctx.e;
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| m.val_p(c).map(|v| e * v as u64 + i as u64))
            .min()
            .map_or(
                ValuationResult::AtLeast(self.ctx.precision()),
                ValuationResult::Exact,
            )
    }

    /// `N_{L|Q_p}(x)`: determinant of multiplication by `x` on `1, x, …, x^(e-1)`.
    pub fn norm(&self) -> PadicScalar<T> {
        let e = self.ctx.e as usize;
        let mut columns = Vec::with_capacity(e);
        let mut col = self.clone();
        let x = self.ctx.uniformizer();
        for _ in 0..e {
            columns.push(col.coeffs.clone());
            col = &col * &x;
        }
        let matrix = (0..e)
            .map(|r| (0..e).map(|c| columns[c][r]).collect())
            .collect();
        PadicScalar {
            value: det_mod(matrix, self.ctx.modulus()),
            p: self.ctx.p(),
            k: self.ctx.k(),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<T: Residue> $tr<&TameElem<T>> for &TameElem<T> {
            type Output = TameElem<T>;

            fn $method(self, rhs: &TameElem<T>) -> TameElem<T> {
                self.$inner(rhs).expect("operands from different rings")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

/// `π_L`-adic valuation of a scalar of `Z_p` viewed in `L`.
fn scalar_valuation<T: Residue>(ctx: &TameContext<T>, s: T) -> u64 {
    ctx.modulus()
        .val_p(s)
        .map_or(ctx.precision(), |v| ctx.e * v as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormLevelVerdict {
    /// `x ∈ U_{re} ∩ N_{re+1}`.
    pub hypothesis_met: bool,
    /// `x ∈ U_{re+1}`.
    pub conclusion_met: bool,
}

impl NormLevelVerdict {
    pub fn holds(&self) -> bool {
        !self.hypothesis_met || self.conclusion_met
    }
}

fn require_precision<T: Residue>(ctx: &TameContext<T>, r: u64) -> Result<()> {
    let needed = r * ctx.e + 2;
    if r < 1 || ctx.precision() < needed {
        return Err(Error::precision(needed, ctx.precision()));
    }
    Ok(())
}

/// Tests one unit against `U_{re} ∩ N_{re+1} = U_{re+1}`.
pub fn check_cor5_sample<T: Residue>(x: &TameElem<T>, r: u64) -> Result<NormLevelVerdict> {
    let ctx = x.ctx();
    require_precision(ctx, r)?;
    if !x.is_unit() {
        return Err(Error::NotAUnit);
    }
    let e = ctx.e;
    let m = ctx.modulus();
    let level = (x - &ctx.one()).valuation().value();
    let norm_level = scalar_valuation(ctx, m.sub(x.norm().value, T::one()));
    Ok(NormLevelVerdict {
        hypothesis_met: level >= r * e && norm_level > r * e,
        conclusion_met: level > r * e,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormCongruenceVerdict {
    /// `x ≡ a (mod p^r)` and `N(x) ≡ a^e (mod p^r π_L)`.
    pub hypothesis_met: bool,
    /// `x ≡ a (mod p^r π_L)`.
    pub conclusion_met: bool,
}

/// The congruence form: for `a ∈ Z_p^×`, `x ≡ a (mod π_F^r)` together with
/// `N(x) ≡ a^e (mod π_F^r π_L)` forces `x ≡ a (mod π_F^r π_L)`.
pub fn check_norm_congruence_sample<T: Residue>(
    x: &TameElem<T>,
    a: T,
    r: u64,
) -> Result<NormCongruenceVerdict> {
    let ctx = x.ctx();
    require_precision(ctx, r)?;
    let m = ctx.modulus();
    if m.mod_p(a) == 0 {
        return Err(Error::NotAUnit);
    }
    let e = ctx.e;
    let level = (x - &ctx.from_residue(a)).valuation().value();
    let norm_level = scalar_valuation(ctx, m.sub(x.norm().value, m.pow(a, e as u128)));
    Ok(NormCongruenceVerdict {
        hypothesis_met: level >= r * e && norm_level > r * e,
        conclusion_met: level > r * e,
    })
}

/// How a norm-level sample is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    /// Uniform unit of `o_L`.
    AnyUnit,
    /// Uniform element of `U_{re}`: `1 + p^r c` with `c` uniform.
    Level,
    /// `1 + p^r c` with the constant term of `c` forced into `p Z_p`.
    LevelConstantAdjusted,
}

/// Draws a sample for the norm-level grid.
pub fn sample_unit<T: Residue, R: Rng>(
    ctx: &Arc<TameContext<T>>,
    r: u64,
    kind: SampleKind,
    rng: &mut R,
) -> TameElem<T> {
    let m = ctx.modulus();
    match kind {
        SampleKind::AnyUnit => loop {
            let x = ctx.random(rng);
            if x.is_unit() {
                return x;
            }
        },
        SampleKind::Level | SampleKind::LevelConstantAdjusted => {
            let mut c = ctx.random(rng);
            if kind == SampleKind::LevelConstantAdjusted {
                let c0 = c.coeffs[0];
                c.coeffs[0] = m.sub(c0, T::lit(m.mod_p(c0)));
            }
            let pr = m.pow(m.p_residue() % m.modulus(), r as u128);
            &ctx.one()
                + &TameElem {
                    coeffs: c.coeffs.iter().map(|&v| m.mul(v, pr)).collect(),
                    ctx: Arc::clone(ctx),
                }
        }
    }
}

/// Outcome of one `(p, e, r)` cell of the norm-level grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormLevelCellReport {
    pub p: u64,
    pub e: u64,
    pub r: u64,
    pub k: u32,
    pub samples: usize,
    pub seed: u64,
    pub hypothesis_met: usize,
    pub violations: usize,
    /// `1 + p^r` fails the norm hypothesis, as it must.
    pub boundary_fails_hypothesis: bool,
}

/// Draws `samples` units (a third from each [`SampleKind`]) with the given
/// seed and counts norm-level violations.
pub fn run_norm_level_cell(
    p: u64,
    e: u64,
    r: u64,
    k: u32,
    samples: usize,
    seed: u64,
) -> Result<NormLevelCellReport> {
    let ctx = TameContext::<u64>::new(p, e, k)?;
    require_precision(&ctx, r)?;
    let verdicts = seeded_map(seed, samples, |rng| {
        let kind = match rng.gen_range(0..3) {
            0 => SampleKind::AnyUnit,
            1 => SampleKind::Level,
            _ => SampleKind::LevelConstantAdjusted,
        };
        check_cor5_sample(&sample_unit(&ctx, r, kind, rng), r)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let pr = (p as i64).pow(r as u32);
    let boundary = check_cor5_sample(&ctx.from_int(1 + pr), r)?;
    Ok(NormLevelCellReport {
        p,
        e,
        r,
        k,
        samples,
        seed,
        hypothesis_met: verdicts.iter().filter(|v| v.hypothesis_met).count(),
        violations: verdicts.iter().filter(|v| !v.holds()).count(),
        boundary_fails_hypothesis: !boundary.hypothesis_met,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Ctx = Arc<TameContext<u64>>;

    fn ctx(p: u64, e: u64, k: u32) -> Ctx {
        TameContext::new(p, e, k).unwrap()
    }

    #[test]
    fn context_examples() {
        assert!(TameContext::<u64>::new(5, 4, 3).is_ok());
        assert!(TameContext::<u64>::new(2, 3, 4).is_ok());
        assert_eq!(
            TameContext::<u64>::new(5, 10, 3).unwrap_err(),
            Error::WildRamification { p: 5, e: 10 }
        );
        assert_eq!(
            TameContext::<u64>::new(5, 1, 3).unwrap_err(),
            Error::BadDegree(1)
        );
        assert_eq!(
            TameContext::<u64>::new(6, 5, 3).unwrap_err(),
            Error::NotPrime(6)
        );
    }

    #[test]
    fn valuation_examples() {
        let c = ctx(5, 3, 4);
        assert_eq!(c.uniformizer().valuation(), ValuationResult::Exact(1));
        assert_eq!(c.from_int(5).valuation(), ValuationResult::Exact(3));
        assert_eq!(c.one().valuation(), ValuationResult::Exact(0));
        assert_eq!(c.uniformizer().pow(3), c.from_int(-5));
    }

    #[test]
    fn norm_examples() {
        for (p, e) in [(5, 2), (5, 3), (2, 3), (7, 6), (3, 4)] {
            let c = ctx(p, e, 4);
            let m = c.modulus();
            // companion matrix of x^e + p
            let expect = if e % 2 == 0 { p as i128 } else { -(p as i128) };
            assert_eq!(
                c.uniformizer().norm().value,
                m.reduce_i128(expect),
                "p={p} e={e}"
            );
            assert_eq!(c.from_int(3).norm().value, m.pow(3, e as u128));
        }
        // e = 2, p = 5: det [[1, -5], [1, 1]] = 6
        assert_eq!(ctx(5, 2, 3).from_ints(&[1, 1]).norm().value, 6);
    }

    #[test]
    fn norm_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, e) in [(2, 3), (3, 4), (5, 6), (7, 2)] {
            let c = ctx(p, e, 4);
            let m = c.modulus();
            for _ in 0..50 {
                let x = c.random(&mut rng);
                let y = c.random(&mut rng);
                assert_eq!(
                    (&x * &y).norm().value,
                    m.mul(x.norm().value, y.norm().value)
                );
            }
        }
    }

    #[test]
    fn norm_level_examples() {
        for (p, e) in [(5, 2), (3, 4), (2, 3)] {
            let c = ctx(p, e, 4);
            for r in 1..=2u32 {
                let boundary = c.from_int(1 + (p as i64).pow(r));
                let v = check_cor5_sample(&boundary, r as u64).unwrap();
                assert!(!v.hypothesis_met && !v.conclusion_met);
                let one = check_cor5_sample(&c.one(), r as u64).unwrap();
                assert!(one.hypothesis_met && one.conclusion_met);
                let deep = &c.one() + &c.uniformizer().pow(r as u64 * e + 1);
                assert!(check_cor5_sample(&deep, r as u64).unwrap().conclusion_met);
            }
        }
        let c = ctx(5, 2, 2);
        assert!(matches!(
            check_cor5_sample(&c.one(), 2),
            Err(Error::PrecisionTooLow { .. })
        ));
        assert_eq!(
            check_cor5_sample(&ctx(5, 2, 4).uniformizer(), 1),
            Err(Error::NotAUnit)
        );
    }

    #[test]
    fn sampled_level_units_have_the_requested_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = ctx(7, 3, 4);
        for kind in [SampleKind::Level, SampleKind::LevelConstantAdjusted] {
            for _ in 0..100 {
                let x = sample_unit(&c, 2, kind, &mut rng);
                assert!((&x - &c.one()).valuation().value() >= 6);
            }
        }
    }
}
