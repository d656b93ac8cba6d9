//! Coordinates on `o^×/o^{×p} ≅ F_p^p` and filtered linear algebra there.
//!
//! A unit class is written as `Π η_n^{d_n}` over the frame `η_n = 1 + ϖ^n`,
//! `1 ≤ n ≤ p`. Every 1-unit satisfies `u^p ∈ U_{p+1}`, and `U_{p+1}` consists
//! of `p`-th powers, so the quotient is an `F_p`-space and multiplying classes
//! adds digit vectors.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{is_primar, teich_split};
use crate::cyclotomic::{CycloElem, RingContext};
use crate::error::{Error, Result};
use crate::linalg::{inv_mod_p, kernel_mod_p};
use crate::scalar::Residue;

/// Digit vector of a unit class; `digits[n - 1]` is the exponent of `η_n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UnitClassVector {
    #[serde(skip)]
    p: u64,
    digits: Vec<u64>,
}

impl fmt::Debug for UnitClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.digits)
    }
}

impl UnitClassVector {
    pub fn zero(p: u64) -> Self {
        UnitClassVector {
            p,
            digits: vec![0; p as usize],
        }
    }

    /// The class of `η_level`.
    pub fn basis(p: u64, level: u64) -> Self {
        let mut v = Self::zero(p);
        v.digits[level as usize - 1] = 1;
        v
    }

    pub fn from_digits(p: u64, digits: Vec<u64>) -> Self {
        assert_eq!(digits.len() as u64, p);
        UnitClassVector {
            p,
            digits: digits.into_iter().map(|d| d % p).collect(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Digit at filtration level `n ∈ [1, p]`.
    pub fn digit(&self, level: u64) -> u64 {
        self.digits[level as usize - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Lowest level with a nonzero digit.
    pub fn pivot(&self) -> Option<u64> {
        self.digits
            .iter()
            .position(|&d| d != 0)
            .map(|i| i as u64 + 1)
    }

    /// `self + c · other`, the class of `α β^c`.
    pub fn add_scaled(&self, other: &Self, c: u64) -> Self {
        let p = self.p;
        UnitClassVector {
            p,
            digits: self
                .digits
                .iter()
                .zip(&other.digits)
                .map(|(&a, &b)| (a + c % p * b) % p)
                .collect(),
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::zero(self.p).add_scaled(self, c)
    }
}

/// A subspace of `o^×/o^{×p}` in reduced echelon form: pivot levels strictly
/// increasing, pivot digits 1, and zeros above/below every pivot. The form is
/// canonical, so equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subspace {
    #[serde(skip)]
    p: u64,
    rows: Vec<UnitClassVector>,
}

impl Subspace {
    pub fn zero(p: u64) -> Self {
        Subspace {
            p,
            rows: Vec::new(),
        }
    }

    /// The subgroup generated by `generators`, modulo `p`-th powers.
    pub fn span<'a, I>(p: u64, generators: I) -> Self
    where
        I: IntoIterator<Item = &'a UnitClassVector>,
    {
        let mut s = Self::zero(p);
        for g in generators {
            s.insert(g);
        }
        s
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[UnitClassVector] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<u64> {
        self.rows
            .iter()
            .map(|r| r.pivot().expect("rows are nonzero"))
            .collect()
    }

    /// Remainder of `v` after eliminating every pivot of `self`.
    pub fn reduce(&self, v: &UnitClassVector) -> UnitClassVector {
        let p = self.p;
        self.rows.iter().fold(v.clone(), |acc, row| {
            let lvl = row.pivot().expect("rows are nonzero");
            match acc.digit(lvl) {
                0 => acc,
                d => acc.add_scaled(row, p - d),
            }
        })
    }

    pub fn contains(&self, v: &UnitClassVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds a generator; returns whether the dimension grew.
    pub fn insert(&mut self, v: &UnitClassVector) -> bool {
        let r = self.reduce(v);
        let Some(lvl) = r.pivot() else {
            return false;
        };
        let p = self.p;
        let r = r.scale(inv_mod_p(r.digit(lvl), p));
        for row in &mut self.rows {
            let d = row.digit(lvl);
            if d != 0 {
                *row = row.add_scaled(&r, p - d);
            }
        }
        let at = self.rows.partition_point(|row| row.pivot() < Some(lvl));
        self.rows.insert(at, r);
        true
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Intersection by the Zassenhaus construction: echelonize the rows
    /// `(a | a)` for `a ∈ self` and `(b | 0)` for `b ∈ other`; rows whose left
    /// half vanishes carry a basis of the intersection in their right half.
    pub fn intersection(&self, other: &Self) -> Self {
        let p = self.p;
        let n = p as usize;
        let mut rows: Vec<Vec<u64>> = self
            .rows
            .iter()
            .map(|a| a.digits.iter().chain(&a.digits).copied().collect())
            .chain(other.rows.iter().map(|b| {
                b.digits
                    .iter()
                    .copied()
                    .chain(std::iter::repeat_n(0, n))
                    .collect()
            }))
            .collect();
        crate::linalg::row_reduce_mod_p(&mut rows, p);
        let basis: Vec<UnitClassVector> = rows
            .into_iter()
            .filter(|r| r[..n].iter().all(|&d| d == 0) && r[n..].iter().any(|&d| d != 0))
            .map(|r| UnitClassVector::from_digits(p, r[n..].to_vec()))
            .collect();
        Self::span(p, &basis)
    }
}

/// `I = {a odd : 3 ≤ a ≤ p-2, 2a ≥ p-1}`.
pub fn primar_index_set(p: u64) -> Vec<u64> {
    (3..=p.saturating_sub(2))
        .filter(|a| a % 2 == 1 && 2 * a >= p - 1)
        .collect()
}

/// The frame `η_n = 1 + ϖ^n` over a fixed ring, with the coordinate map.
pub struct ClassSpace<T: Residue> {
    ctx: Arc<RingContext<T>>,
    frame: Vec<CycloElem<T>>,
    frame_inv: Vec<CycloElem<T>>,
}

/// Units drawn per context for the `u^p ∈ U_{p+1}` self-check.
const STRUCTURE_CHECKS: usize = 100;

impl<T: Residue> ClassSpace<T> {
    pub fn new(ctx: &Arc<RingContext<T>>) -> Result<Self> {
        let p = ctx.p();
        if ctx.precision() < p + 1 || ctx.k() < 2 {
            return Err(Error::precision((p + 1).max(2 * (p - 1)), ctx.precision()));
        }
        let one = ctx.one();
        let frame: Vec<_> = (1..=p)
            .map(|n| Ok(&one + &ctx.varpi_pow(n)?))
            .collect::<Result<_>>()?;
        let frame_inv = frame.iter().map(|e| e.invert()).collect::<Result<_>>()?;

        let mut rng = ChaCha8Rng::seed_from_u64(0x6b756d6d6572 ^ p);
        for _ in 0..STRUCTURE_CHECKS {
            let u = &one + &(&ctx.pi() * &random_elem(ctx, &mut rng));
            let level = (&u.pow(p as u128) - &one).pi_valuation().value();
            assert!(level > p, "u^p ∉ U_(p+1) for p = {p}");
        }
        Ok(ClassSpace {
            ctx: Arc::clone(ctx),
            frame,
            frame_inv,
        })
    }

    pub fn ctx(&self) -> &Arc<RingContext<T>> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    /// `η_n = 1 + ϖ^n`.
    pub fn frame(&self, n: u64) -> &CycloElem<T> {
        &self.frame[n as usize - 1]
    }

    /// Digits of the class of a unit, by greedy reduction against the frame.
    pub fn digit_coordinates(&self, x: &CycloElem<T>) -> Result<UnitClassVector> {
        let p = self.p();
        let (_, mut u) = teich_split(x)?;
        let one = self.ctx.one();
        let mut digits = vec![0u64; p as usize];
        for n in 1..=p {
            match (&u - &one).leading_digit() {
                Some((lvl, d)) if lvl == n => {
                    digits[n as usize - 1] = d;
                    u = &u * &self.frame_inv[n as usize - 1].pow(d as u128);
                }
                Some((lvl, _)) if lvl > n => {}
                None => break,
                Some((lvl, _)) => unreachable!("level {lvl} dropped below {n}"),
            }
        }
        debug_assert!((&u - &one).pi_valuation().value() > p);
        Ok(UnitClassVector { p, digits })
    }

    /// `Π η_n^{d_n}`.
    pub fn reconstruct(&self, v: &UnitClassVector) -> CycloElem<T> {
        v.digits
            .iter()
            .zip(&self.frame)
            .fold(self.ctx.one(), |acc, (&d, eta)| &acc * &eta.pow(d as u128))
    }

    /// `Ū_n`, spanned by the classes of `η_a`, `n ≤ a ≤ p`.
    pub fn filtration_subspace(&self, n: u64) -> Result<Subspace> {
        let p = self.p();
        if !(1..=p + 1).contains(&n) {
            return Err(Error::BadIndex(n as i64));
        }
        let gens = (n..=p)
            .map(|a| self.digit_coordinates(self.frame(a)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(p, &gens))
    }

    /// `Ū_{p-1} + span{η_a : a ∈ I}`, each generator checked *primär*.
    ///
    /// This is a subspace of `P̄` of dimension `2 + |I|`, but for `p ≥ 11` it
    /// is a proper one: see [`ClassSpace::primar_subspace`].
    pub fn index_set_subspace(&self) -> Result<Subspace> {
        let p = self.p();
        let mut s = self.filtration_subspace(p - 1)?;
        for a in primar_index_set(p) {
            let eta = self.frame(a);
            if !is_primar(eta)?.holds() {
                return Err(Error::GeneratorNotPrimar(a));
            }
            s.insert(&self.digit_coordinates(eta)?);
        }
        Ok(s)
    }

    /// A *primär* unit whose class has pivot at the odd level `a ∈ [3, p-2]`:
    /// `η_a` times corrections `η_l^c` at even levels `l ≥ 2a` that cancel the
    /// half norm below level `p - 1`. When `2a ≥ p - 1` no correction is
    /// needed and the result is `η_a` itself.
    ///
    /// The half norm of any unit lies in `K⁺`, whose classes only start at even
    /// levels, and `N_{K|K⁺}(η_l) ≡ η_l^2` at even `l`, so each correction
    /// strictly raises the level of the half norm.
    pub fn primar_generator(&self, a: u64) -> Result<CycloElem<T>> {
        let p = self.p();
        if a.is_multiple_of(2) || !(3..=p - 2).contains(&a) {
            return Err(Error::BadIndex(a as i64));
        }
        let half = p.div_ceil(2);
        let mut g = self.frame(a).clone();
        loop {
            let h = self.digit_coordinates(&g.half_norm())?;
            match h.pivot() {
                Some(l) if l < p - 1 => {
                    debug_assert!(l % 2 == 0 && l >= 2 * a);
                    let c = (p - h.digit(l)) * half % p;
                    g = &g * &self.frame(l).pow(c as u128);
                }
                _ => break,
            }
        }
        if !is_primar(&g)?.holds() {
            return Err(Error::GeneratorNotPrimar(a));
        }
        Ok(g)
    }

    /// `P̄`, the image of the *primär* units: `Ū_{p-1}` plus one constructed
    /// *primär* generator for every odd level `a ∈ [3, p-2]`, so
    /// `dim P̄ = 2 + (p-3)/2`.
    pub fn primar_subspace(&self) -> Result<Subspace> {
        let p = self.p();
        let mut s = self.filtration_subspace(p - 1)?;
        for a in (3..=p.saturating_sub(2)).step_by(2) {
            s.insert(&self.digit_coordinates(&self.primar_generator(a)?)?);
        }
        Ok(s)
    }

    /// `P̄` computed independently of the index set, as the kernel of the
    /// linear conditions defining *primär* classes: the level-1 digit
    /// vanishes, and the class of `N_{K|K⁺}(α)` lies in `Ū_{p-1}`.
    pub fn primar_subspace_by_kernel(&self) -> Result<Subspace> {
        let p = self.p();
        let images = (1..=p)
            .map(|n| self.digit_coordinates(&self.frame(n).half_norm()))
            .collect::<Result<Vec<_>>>()?;
        // rows: digit 1 of v; digits 1..p-2 of H(v)
        let mut rows = vec![(0..p).map(|n| u64::from(n == 0)).collect::<Vec<_>>()];
        for lvl in 1..=p - 2 {
            rows.push(images.iter().map(|img| img.digit(lvl)).collect());
        }
        let kernel = kernel_mod_p(&rows, p as usize, p);
        let vectors: Vec<_> = kernel
            .into_iter()
            .map(|d| UnitClassVector::from_digits(p, d))
            .collect();
        Ok(Subspace::span(p, &vectors))
    }
}

pub(crate) fn random_elem<T: Residue, R: Rng>(
    ctx: &Arc<RingContext<T>>,
    rng: &mut R,
) -> CycloElem<T> {
    let m = ctx.modulus();
    let bound = m.modulus().as_u128();
    ctx.elem(
        (0..ctx.degree())
            .map(|_| m.reduce_u128(rng.gen_range(0..bound)))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(p: u64) -> ClassSpace<u64> {
        ClassSpace::new(&RingContext::new(p, 4).unwrap()).unwrap()
    }

    #[test]
    fn index_set_counts() {
        assert_eq!(primar_index_set(3), Vec::<u64>::new());
        assert_eq!(primar_index_set(5), vec![3]);
        assert_eq!(primar_index_set(7), vec![3, 5]);
        assert_eq!(primar_index_set(31), vec![15, 17, 19, 21, 23, 25, 27, 29]);
    }

    #[test]
    fn coordinates_of_frame_and_powers() {
        let s = space(7);
        assert_eq!(
            s.digit_coordinates(s.frame(3)).unwrap(),
            UnitClassVector::basis(7, 3)
        );
        let y = &s.ctx().from_ints(&[2, 1, 0, 5]) + &s.ctx().pi();
        assert!(s.digit_coordinates(&y.pow(7)).unwrap().is_zero());
        let v = s.digit_coordinates(&s.ctx().from_int(8)).unwrap();
        assert_eq!(v.pivot(), Some(6));
        assert!(v.digits()[..5].iter().all(|&d| d == 0));
    }

    #[test]
    fn coordinates_are_additive() {
        let s = space(5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = random_elem(s.ctx(), &mut rng);
            let y = random_elem(s.ctx(), &mut rng);
            if !x.is_unit() || !y.is_unit() {
                continue;
            }
            let cx = s.digit_coordinates(&x).unwrap();
            let cy = s.digit_coordinates(&y).unwrap();
            assert_eq!(
                s.digit_coordinates(&(&x * &y)).unwrap(),
                cx.add_scaled(&cy, 1)
            );
        }
    }

    #[test]
    fn span_examples() {
        let p = 5;
        let v = UnitClassVector::from_digits(p, vec![0, 1, 2, 0, 3]);
        assert_eq!(Subspace::span(p, []).dim(), 0);
        assert_eq!(Subspace::span(p, [&v, &v]).dim(), 1);
        assert_eq!(Subspace::span(p, [&v, &v.scale(3)]).dim(), 1);
        let s = Subspace::span(p, [&v]);
        assert!(s.contains(&UnitClassVector::zero(p)));
        assert!(s.contains(&v.scale(4)));
    }

    #[test]
    fn filtration_dims() {
        for p in [3, 5, 7, 11] {
            let s = space(p);
            for n in 1..=p + 1 {
                assert_eq!(s.filtration_subspace(n).unwrap().dim() as u64, p + 1 - n);
            }
            assert!(s.filtration_subspace(0).is_err());
        }
    }

    #[test]
    fn primar_subspace_dims() {
        assert_eq!(
            space(3).primar_subspace().unwrap(),
            space(3).filtration_subspace(2).unwrap()
        );
        assert_eq!(space(7).primar_subspace().unwrap().dim(), 4);
        for p in [3, 5, 7, 11, 13] {
            let s = space(p);
            let pbar = s.primar_subspace().unwrap();
            assert_eq!(pbar, s.primar_subspace_by_kernel().unwrap());
            assert_eq!(pbar.dim() as u64, 2 + (p - 3) / 2);
            let indexed = s.index_set_subspace().unwrap();
            assert_eq!(indexed.dim(), 2 + primar_index_set(p).len());
            assert!(indexed.is_subspace_of(&pbar));
        }
    }

    #[test]
    fn primar_unit_below_the_index_set_at_p11() {
        // (1+ϖ³)(1+ϖ⁶)⁶: half norm (1-ϖ⁶)(1+ϖ⁶)¹² ≡ (1-ϖ⁶)(1+ϖ⁶) ≡ 1 (mod 𝔭¹⁰)
        let s = space(11);
        let c = s.ctx();
        let alpha =
            &(&c.one() + &c.varpi_pow(3).unwrap()) * &(&c.one() + &c.varpi_pow(6).unwrap()).pow(6);
        assert!(is_primar(&alpha).unwrap().holds());
        assert_eq!(s.primar_generator(3).unwrap(), alpha);
        let v = s.digit_coordinates(&alpha).unwrap();
        assert_eq!(v.pivot(), Some(3));
        assert!(!s.index_set_subspace().unwrap().contains(&v));
        assert!(s.primar_subspace().unwrap().contains(&v));
    }

    #[test]
    fn membership_examples() {
        for p in [5, 7] {
            let s = space(p);
            let one_plus_p = s
                .digit_coordinates(&s.ctx().from_int(1 + p as i64))
                .unwrap();
            assert!(!s.filtration_subspace(p).unwrap().contains(&one_plus_p));
            let alpha = &s.ctx().one() + &s.ctx().varpi_pow(p - 2).unwrap();
            let alpha = s.digit_coordinates(&alpha).unwrap();
            assert!(s.primar_subspace().unwrap().contains(&alpha));
            assert!(s.index_set_subspace().unwrap().contains(&alpha));
        }
    }

    #[test]
    fn intersection_matches_dimension_formula() {
        let p = 7;
        let a = Subspace::span(
            p,
            &[UnitClassVector::basis(p, 2), UnitClassVector::basis(p, 4)],
        );
        let b = Subspace::span(
            p,
            &[
                UnitClassVector::basis(p, 4).add_scaled(&UnitClassVector::basis(p, 5), 1),
                UnitClassVector::basis(p, 2).add_scaled(&UnitClassVector::basis(p, 5), 6),
            ],
        );
        let i = a.intersection(&b);
        assert_eq!(i.dim() + a.sum(&b).dim(), a.dim() + b.dim());
        assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        assert_eq!(i.dim(), 1);
    }
}
