//! Exhaustive models of `(o/𝔭^m)^×` and `(o/p)` for tiny `p`, answering
//! membership questions straight from the definitions. These are the oracles
//! the fast paths in [`crate::classify`] and [`crate::class_space`] are tested
//! against.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::{CycloElem, RingContext};
use crate::error::{Error, Result};
use crate::scalar::Residue;

/// Largest group the models will enumerate unless told otherwise.
pub const DEFAULT_BUDGET: u128 = 2_000_000;

/// `(o/𝔭^m)^×` as the explicit list of representatives `Σ_{i<m} d_i π^i`,
/// `d_0 ≠ 0`, together with its subgroup of `p`-th powers.
///
/// At `m = p + 1` the quotient by the `p`-th powers is `o^×/o^{×p}` itself,
/// because `U_{p+1}` consists of `p`-th powers; the class queries below
/// require that level.
pub struct BruteForceModel<T: Residue> {
    ctx: Arc<RingContext<T>>,
    m: u64,
    elements: Vec<CycloElem<T>>,
    pth_powers: Vec<CycloElem<T>>,
    pth_power_keys: HashSet<Vec<T>>,
}

impl<T: Residue> BruteForceModel<T> {
    pub fn new(ctx: &Arc<RingContext<T>>, m: u64) -> Result<Self> {
        Self::with_budget(ctx, m, DEFAULT_BUDGET)
    }

    pub fn with_budget(ctx: &Arc<RingContext<T>>, m: u64, budget: u128) -> Result<Self> {
        let p = ctx.p();
        if !(1..=p + 1).contains(&m) {
            return Err(Error::BadIndex(m as i64));
        }
        if ctx.precision() < p + 1 {
            return Err(Error::precision(p + 1, ctx.precision()));
        }
        let order = group_order(p, m);
        if order > budget {
            return Err(Error::TooLarge {
                size: order,
                budget,
            });
        }
        let pi_pows: Vec<_> = (0..m).map(|i| ctx.pi().pow(i as u128)).collect();
        let elements: Vec<_> = (0..order as u64)
            .into_par_iter()
            .map(|idx| {
                let mut rest = idx / (p - 1);
                let mut x = ctx.from_int((1 + idx % (p - 1)) as i64);
                for pw in &pi_pows[1..] {
                    let d = rest % p;
                    rest /= p;
                    if d != 0 {
                        x = &x + &pw.scale(T::lit(d));
                    }
                }
                x
            })
            .collect();

        let mut pth_power_keys = HashSet::new();
        let mut pth_powers = Vec::new();
        let powers: Vec<_> = elements.par_iter().map(|z| z.pow(p as u128)).collect();
        for y in powers {
            if pth_power_keys.insert(y.residue_key(m)) {
                pth_powers.push(y);
            }
        }
        Ok(BruteForceModel {
            ctx: Arc::clone(ctx),
            m,
            elements,
            pth_powers,
            pth_power_keys,
        })
    }

    pub fn ctx(&self) -> &Arc<RingContext<T>> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn level(&self) -> u64 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CycloElem<T>] {
        &self.elements
    }

    /// Distinct representatives of the `p`-th-power subgroup.
    pub fn pth_powers(&self) -> &[CycloElem<T>] {
        &self.pth_powers
    }

    /// Whether `x` is a `p`-th power in `(o/𝔭^m)^×`.
    pub fn is_pth_power(&self, x: &CycloElem<T>) -> bool {
        self.pth_power_keys.contains(&x.residue_key(self.m))
    }

    fn require_class_level(&self) -> Result<()> {
        if self.m != self.p() + 1 {
            return Err(Error::BadIndex(self.m as i64));
        }
        Ok(())
    }

    /// Whether the class of `x` modulo `p`-th powers meets `U_n`.
    pub fn class_in_filtration(&self, x: &CycloElem<T>, n: u64) -> Result<bool> {
        self.require_class_level()?;
        let one = self.ctx.one();
        Ok(self
            .pth_powers
            .iter()
            .any(|g| (&(x * g) - &one).pi_valuation().value() >= n))
    }

    /// Whether the class of `x` contains a *primär* unit.
    pub fn class_is_primar(&self, x: &CycloElem<T>) -> Result<bool> {
        self.require_class_level()?;
        Ok(self
            .pth_powers
            .iter()
            .any(|g| primar_by_definition(&(x * g))))
    }

    /// `F_p`-dimension of the set of classes whose members satisfy `pred`;
    /// `pred` must be constant on classes.
    pub fn class_dim<F>(&self, pred: F) -> Result<u32>
    where
        F: Fn(&CycloElem<T>) -> Result<bool> + Sync,
    {
        self.require_class_level()?;
        let hits = self
            .elements
            .par_iter()
            .map(|x| pred(x).map(usize::from))
            .sum::<Result<usize>>()?;
        let classes = hits / self.pth_powers.len();
        let p = self.p() as usize;
        let mut dim = 0;
        let mut size = 1;
        while size < classes {
            size *= p;
            dim += 1;
        }
        assert_eq!(size, classes, "{hits} members do not form a subgroup");
        Ok(dim)
    }
}

/// `|(o/𝔭^m)^×| = (p - 1) p^(m-1)`.
pub fn group_order(p: u64, m: u64) -> u128 {
    (p - 1) as u128 * (p as u128).pow(m.saturating_sub(1) as u32)
}

/// `x ≡ a (mod p)` for some integer `a` prime to `p`.
pub fn primaire_by_definition<T: Residue>(x: &CycloElem<T>) -> bool {
    let p = x.p();
    let ctx = x.ctx();
    (1..p).any(|a| (x - &ctx.from_int(a as i64)).pi_valuation().value() >= p - 1)
}

/// `x ≡ a (mod π²)` and `x σ_{-1}(x) ≡ b (mod p)` for integers `a`, `b` prime
/// to `p`.
pub fn primar_by_definition<T: Residue>(x: &CycloElem<T>) -> bool {
    let p = x.p();
    let ctx = x.ctx();
    let h = x.half_norm();
    (1..p).any(|a| (x - &ctx.from_int(a as i64)).pi_valuation().value() >= 2)
        && (1..p).any(|b| (&h - &ctx.from_int(b as i64)).pi_valuation().value() >= p - 1)
}

/// Exhaustive check of `(o/p)^{×p} = F_p^×` and of `z^p = Σ a_i` for every
/// `z = Σ a_i ζ^i` in `o/p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusReport {
    pub p: u64,
    pub elements: usize,
    pub units: usize,
    /// Number of distinct `p`-th powers of units.
    pub pth_powers: usize,
    /// The `p`-th powers of units are exactly the nonzero integers mod `p`.
    pub equals_prime_field: bool,
    pub digit_sum_violations: usize,
}

impl FrobeniusReport {
    pub fn holds(&self) -> bool {
        self.pth_powers as u64 == self.p - 1
            && self.equals_prime_field
            && self.digit_sum_violations == 0
    }
}

pub fn frobenius_check(p: u64) -> Result<FrobeniusReport> {
    frobenius_check_with_budget(p, DEFAULT_BUDGET)
}

pub fn frobenius_check_with_budget(p: u64, budget: u128) -> Result<FrobeniusReport> {
    let ctx = RingContext::<u64>::new(p, 1)?;
    let d = ctx.degree() as u32;
    let size = (p as u128).pow(d);
    if size > budget {
        return Err(Error::TooLarge { size, budget });
    }
    let rows: Vec<(bool, Vec<u64>, bool)> = (0..size as u64)
        .into_par_iter()
        .map(|idx| {
            let mut rest = idx;
            let digits: Vec<u64> = (0..d)
                .map(|_| {
                    let a = rest % p;
                    rest /= p;
                    a
                })
                .collect();
            let z = ctx.elem(digits.clone());
            let zp = z.pow(p as u128);
            let digit_sum = digits.iter().sum::<u64>() % p;
            let ok = zp == ctx.from_int(digit_sum as i64);
            (z.is_unit(), zp.coeffs().to_vec(), ok)
        })
        .collect();

    let powers: HashSet<Vec<u64>> = rows.iter().filter(|r| r.0).map(|r| r.1.clone()).collect();
    let prime_field: HashSet<Vec<u64>> = (1..p)
        .map(|a| ctx.from_int(a as i64).coeffs().to_vec())
        .collect();
    Ok(FrobeniusReport {
        p,
        elements: rows.len(),
        units: rows.iter().filter(|r| r.0).count(),
        pth_powers: powers.len(),
        equals_prime_field: powers == prime_field,
        digit_sum_violations: rows.iter().filter(|r| !r.2).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(p: u64, m: u64) -> BruteForceModel<u64> {
        BruteForceModel::new(&RingContext::new(p, 4).unwrap(), m).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(model(3, 4).order(), 54);
        assert_eq!(model(5, 6).order(), 12500);
        assert_eq!(group_order(5, 6), 12500);
    }

    #[test]
    fn representatives_are_distinct_mod_level() {
        let g = model(3, 4);
        let keys: HashSet<_> = g.elements().iter().map(|x| x.residue_key(4)).collect();
        assert_eq!(keys.len(), g.order());
    }

    #[test]
    fn pth_powers_at_top_level_are_teichmuller() {
        for p in [3, 5] {
            let g = model(p, p + 1);
            assert_eq!(g.pth_powers().len() as u64, p - 1);
            for a in 1..p as i64 {
                assert!(g.is_pth_power(&g.ctx().teichmuller(a).unwrap()));
            }
            assert!(!g.is_pth_power(&g.ctx().zeta()));
        }
    }

    #[test]
    fn too_large() {
        let ctx = RingContext::<u64>::new(7, 4).unwrap();
        assert!(matches!(
            BruteForceModel::new(&ctx, 8),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            BruteForceModel::new(&ctx, 9),
            Err(Error::BadIndex(9))
        ));
        assert!(matches!(
            frobenius_check_with_budget(7, 1000),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn class_dims_small() {
        let g = model(3, 4);
        assert_eq!(g.class_dim(|_| Ok(true)).unwrap(), 3);
        for n in 1..=4 {
            assert_eq!(
                g.class_dim(|x| g.class_in_filtration(x, n)).unwrap() as u64,
                4 - n
            );
        }
        assert_eq!(g.class_dim(|x| g.class_is_primar(x)).unwrap(), 2);
        assert!(matches!(
            model(3, 3).class_dim(|_| Ok(true)),
            Err(Error::BadIndex(3))
        ));
    }

    #[test]
    fn frobenius_small() {
        for p in [3, 5] {
            let r = frobenius_check(p).unwrap();
            assert!(r.holds(), "{r:?}");
            assert_eq!(r.elements as u64, p.pow(p as u32 - 1));
            assert_eq!(r.units as u64, (p - 1) * p.pow(p as u32 - 2));
        }
    }

    #[test]
    fn definitions_on_known_units() {
        let ctx = RingContext::<u64>::new(5, 4).unwrap();
        assert!(primaire_by_definition(&ctx.from_int(6)));
        assert!(!primaire_by_definition(&ctx.zeta()));
        let alpha = &ctx.one() + &ctx.varpi_pow(3).unwrap();
        assert!(primar_by_definition(&alpha));
        assert!(!primaire_by_definition(&alpha));
        assert!(!primar_by_definition(
            &(&ctx.one() + &ctx.canonical_varpi().unwrap())
        ));
    }
}
