//! Global units of `Z[ζ]` (the cyclotomic units and `-ζ`), their local images,
//! and the checks that global *primaire*/*primär* units are local `p`-th powers.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::class_space::{ClassSpace, Subspace};
use crate::classify::{classify, ClassificationReport};
use crate::cyclotomic::{CycloElem, RingContext};
use crate::error::{Error, Result};
use crate::sampling::seeded_map;
use crate::scalar::Residue;

/// Where a global unit came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    NegZeta,
    /// `c_a = (1 - ζ^a)/(1 - ζ)`.
    Cyclotomic {
        a: u64,
    },
    Product {
        exponents: ExponentVector,
    },
}

/// Exponents over the generators `-ζ, c_2, …, c_{(p-1)/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn is_divisible_by(&self, p: u64) -> bool {
        self.0.iter().all(|&e| e.rem_euclid(p as i64) == 0)
    }
}

/// A unit of `Z[ζ]`, kept symbolically as a product of generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalUnit {
    pub p: u64,
    pub provenance: Provenance,
}

/// Number of generators `-ζ, c_2, …, c_{(p-1)/2}`.
pub fn generator_count(p: u64) -> usize {
    ((p - 1) / 2) as usize
}

pub fn cyclotomic_unit(p: u64, a: u64) -> Result<GlobalUnit> {
    if !(2..p).contains(&a) {
        return Err(Error::BadIndex(a as i64));
    }
    Ok(GlobalUnit {
        p,
        provenance: Provenance::Cyclotomic { a },
    })
}

impl GlobalUnit {
    pub fn neg_zeta(p: u64) -> Self {
        GlobalUnit {
            p,
            provenance: Provenance::NegZeta,
        }
    }

    pub fn product(p: u64, exponents: ExponentVector) -> Result<Self> {
        if exponents.0.len() != generator_count(p) {
            return Err(Error::BadIndex(exponents.0.len() as i64));
        }
        Ok(GlobalUnit {
            p,
            provenance: Provenance::Product { exponents },
        })
    }

    /// The `i`-th generator: `-ζ` for `i = 0`, else `c_{i+1}`.
    pub fn generator(p: u64, i: usize) -> Self {
        match i {
            0 => Self::neg_zeta(p),
            _ => GlobalUnit {
                p,
                provenance: Provenance::Cyclotomic { a: i as u64 + 1 },
            },
        }
    }

    pub fn generators(p: u64) -> Vec<Self> {
        (0..generator_count(p))
            .map(|i| Self::generator(p, i))
            .collect()
    }

    /// Exact coefficients in `Z[ζ]`, basis `1, ζ, …, ζ^(p-2)`.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let p = self.p;
        match &self.provenance {
            Provenance::NegZeta => zeta_sum(p, &[1], true),
            Provenance::Cyclotomic { a } => zeta_sum(p, &(0..*a).collect::<Vec<_>>(), false),
            Provenance::Product { exponents } => {
                let mut acc = int_one(p);
                for (i, &e) in exponents.0.iter().enumerate() {
                    let base = if e >= 0 {
                        Self::generator(p, i).integer_coeffs()
                    } else {
                        Self::generator(p, i).integer_inverse()
                    };
                    for _ in 0..e.unsigned_abs() {
                        acc = int_mul(p, &acc, &base);
                    }
                }
                acc
            }
        }
    }

    /// Exact inverse of a generator: `(-ζ)^{-1} = -ζ^{p-1}` and
    /// `c_a^{-1} = Σ_{i<b} ζ^{ai}` with `ab ≡ 1 (mod p)`.
    fn integer_inverse(&self) -> Vec<BigInt> {
        let p = self.p;
        match self.provenance {
            Provenance::NegZeta => zeta_sum(p, &[p - 1], true),
            Provenance::Cyclotomic { a } => {
                let b = (1..p).find(|b| a * b % p == 1).expect("a is prime to p");
                zeta_sum(p, &(0..b).map(|i| a * i % p).collect::<Vec<_>>(), false)
            }
            Provenance::Product { .. } => unreachable!("only generators are inverted"),
        }
    }

    /// Image in `Z_p[ζ]` modulo `p^k`. Products are evaluated locally, which
    /// is the same ring map applied factor by factor.
    pub fn local_image<T: Residue>(&self, ctx: &Arc<RingContext<T>>) -> Result<CycloElem<T>> {
        if ctx.p() != self.p {
            return Err(Error::ContextMismatch);
        }
        match &self.provenance {
            Provenance::Product { exponents } => {
                let mut acc = ctx.one();
                for (i, &e) in exponents.0.iter().enumerate() {
                    let g = Self::generator(self.p, i).local_image(ctx)?;
                    acc = &acc * &g.pow_signed(e as i128)?;
                }
                Ok(acc)
            }
            _ => {
                let m = ctx.modulus();
                Ok(ctx.elem(
                    self.integer_coeffs()
                        .iter()
                        .map(|c| m.reduce_big(c))
                        .collect(),
                ))
            }
        }
    }
}

impl fmt::Display for GlobalUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.provenance {
            Provenance::NegZeta => f.write_str("-zeta"),
            Provenance::Cyclotomic { a } => write!(f, "c_{a}"),
            Provenance::Product { exponents } => {
                let mut first = true;
                for (i, &e) in exponents.0.iter().enumerate().filter(|(_, &e)| e != 0) {
                    if !first {
                        f.write_str(" * ")?;
                    }
                    first = false;
                    write!(f, "({})^{e}", Self::generator(self.p, i))?;
                }
                if first {
                    f.write_str("1")?;
                }
                Ok(())
            }
        }
    }
}

fn int_one(p: u64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); (p - 1) as usize];
    v[0] = BigInt::one();
    v
}

/// `±Σ ζ^e` over the given exponents in `[0, p)`, reduced by `Φ_p`.
fn zeta_sum(p: u64, exps: &[u64], negate: bool) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); p as usize];
    for &e in exps {
        acc[e as usize] += 1;
    }
    let mut v = fold_int(acc);
    if negate {
        v.iter_mut().for_each(|c| *c = -&*c);
    }
    v
}

/// Reduce a length-`p` coefficient vector by `ζ^(p-1) = -(1 + … + ζ^(p-2))`.
fn fold_int(mut acc: Vec<BigInt>) -> Vec<BigInt> {
    let top = acc.pop().expect("length p");
    acc.iter_mut().for_each(|c| *c -= &top);
    acc
}

fn int_mul(p: u64, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let p = p as usize;
    let mut acc = vec![BigInt::zero(); p];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate() {
            acc[(i + j) % p] += x * y;
        }
    }
    fold_int(acc)
}

/// `u = ξ w` with `ξ^p = 1` and `w` fixed by `σ_{-1}`:
/// `ξ = (u/σ_{-1}(u))^((p+1)/2)`, `w = u/ξ`.
///
/// Every global unit decomposes this way; a local unit need not, in which case
/// the postconditions fail and `NoRealDecomposition` is returned.
pub fn split_real<T: Residue>(u: &CycloElem<T>) -> Result<(CycloElem<T>, CycloElem<T>)> {
    let p = u.p();
    let ratio = u.try_div(&u.conj())?;
    let xi = ratio.pow(p.div_ceil(2) as u128);
    let w = u.try_div(&xi)?;
    if !xi.pow(p as u128).is_one() || w.conj() != w || &xi * &w != *u {
        return Err(Error::NoRealDecomposition);
    }
    Ok((xi, w))
}

/// `Ē`, spanned by the classes of `-ζ` and `c_a`, `2 ≤ a ≤ (p-1)/2`.
pub fn global_image<T: Residue>(space: &ClassSpace<T>) -> Result<Subspace> {
    let p = space.p();
    let vectors = GlobalUnit::generators(p)
        .iter()
        .map(|u| space.digit_coordinates(&u.local_image(space.ctx())?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subspace::span(p, &vectors))
}

/// Standing assumption behind [`global_image`], carried into every report.
pub const CYCLOTOMIC_UNITS_ASSUMPTION: &str =
    "global unit image generated by -zeta and the cyclotomic units c_a; \
     this is all of Z[zeta]^x modulo p-th powers when p does not divide the real class number h+, \
     which holds for every p <= 31";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalReport {
    pub p: u64,
    pub k: u32,
    pub dim_global_image: usize,
    pub dim_primar: usize,
    pub dim_u_p_minus_1: usize,
    pub dim_global_cap_primar: usize,
    pub dim_global_cap_u_p_minus_1: usize,
    /// Every generator has absolute norm 1.
    pub generator_norms_one: bool,
    pub assumptions: Vec<String>,
}

impl GlobalReport {
    pub fn holds(&self) -> bool {
        self.dim_global_cap_primar == 0
            && self.dim_global_cap_u_p_minus_1 == 0
            && self.generator_norms_one
    }
}

/// Dimensions of `Ē`, `P̄`, `Ū_{p-1}` and of `Ē ∩ P̄`, `Ē ∩ Ū_{p-1}`.
pub fn global_report<T: Residue>(space: &ClassSpace<T>) -> Result<GlobalReport> {
    let ctx = space.ctx();
    let e = global_image(space)?;
    let pbar = space.primar_subspace()?;
    let u = space.filtration_subspace(space.p() - 1)?;
    let generator_norms_one = GlobalUnit::generators(space.p())
        .iter()
        .map(|g| Ok(g.local_image(ctx)?.absolute_norm().value == T::one()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    Ok(GlobalReport {
        p: space.p(),
        k: ctx.k(),
        dim_global_image: e.dim(),
        dim_primar: pbar.dim(),
        dim_u_p_minus_1: u.dim(),
        dim_global_cap_primar: e.intersection(&pbar).dim(),
        dim_global_cap_u_p_minus_1: e.intersection(&u).dim(),
        generator_norms_one,
        assumptions: vec![CYCLOTOMIC_UNITS_ASSUMPTION.to_string()],
    })
}

/// [`global_report`], failing unless both intersections vanish.
pub fn check_prop3_prop6<T: Residue>(space: &ClassSpace<T>) -> Result<GlobalReport> {
    let report = global_report(space)?;
    if report.dim_global_cap_primar != 0 {
        return Err(Error::IntersectionNonTrivial {
            which: "global/primar",
            dim: report.dim_global_cap_primar,
        });
    }
    if report.dim_global_cap_u_p_minus_1 != 0 {
        return Err(Error::IntersectionNonTrivial {
            which: "global/U_(p-1)",
            dim: report.dim_global_cap_u_p_minus_1,
        });
    }
    Ok(report)
}

/// Outcome of asking for a local `p`-th root of a global unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case", bound = "")]
pub enum LocalCertificate<T: Residue> {
    /// `root^p ≡ unit (mod 𝔭^verified_level)`.
    Root {
        root: CycloElem<T>,
        verified_level: u64,
    },
    /// The unit is not *primär*; `failed` names the conditions that fail.
    Refused {
        failed: Vec<&'static str>,
        classification: ClassificationReport<T>,
    },
}

impl<T: Residue> LocalCertificate<T> {
    pub fn root(&self) -> Option<&CycloElem<T>> {
        match self {
            LocalCertificate::Root { root, .. } => Some(root),
            LocalCertificate::Refused { .. } => None,
        }
    }
}

/// A `p`-th root of a *primär* global unit, or a refusal.
///
/// For global units *primär* implies being a local `p`-th power, so a *primär*
/// unit without a root is reported as `CertificateImpossible`.
pub fn kummer_local_certificate<T: Residue>(
    u: &GlobalUnit,
    ctx: &Arc<RingContext<T>>,
) -> Result<LocalCertificate<T>> {
    certify_local(&u.local_image(ctx)?)
}

/// [`kummer_local_certificate`] for a local image already in hand.
pub fn certify_local<T: Residue>(x: &CycloElem<T>) -> Result<LocalCertificate<T>> {
    let report = classify(x)?;
    if !report.is_primar {
        let mut failed = Vec::new();
        if !report.primar_detail.congruent_mod_pi_squared {
            failed.push("congruent_mod_pi_squared");
        }
        if !report.primar_detail.half_norm_primaire {
            failed.push("half_norm_primaire");
        }
        return Ok(LocalCertificate::Refused {
            failed,
            classification: report,
        });
    }
    let root = x
        .pth_root()
        .map_err(|e| Error::CertificateImpossible(e.to_string()))?;
    let verified_level = x.ctx().precision() - (x.p() - 1);
    if !root.pow(x.p() as u128).congruent(x, verified_level) {
        return Err(Error::CertificateImpossible(format!(
            "root fails to verify at level {verified_level}"
        )));
    }
    Ok(LocalCertificate::Root {
        root,
        verified_level,
    })
}

/// Random exponent vector with entries in `[-bound, bound]`; with probability
/// one half every entry is then multiplied by `p`, so that the sample set
/// contains `p`-th powers.
pub fn sample_exponent_vector<R: Rng>(p: u64, bound: i64, rng: &mut R) -> ExponentVector {
    let scale = if rng.gen_bool(0.5) { p as i64 } else { 1 };
    ExponentVector(
        (0..generator_count(p))
            .map(|_| scale * rng.gen_range(-bound..=bound))
            .collect(),
    )
}

/// `n` seeded random products of the generators (see
/// [`sample_exponent_vector`]), in a fixed order.
pub fn sample_products(p: u64, n: usize, seed: u64) -> Vec<GlobalUnit> {
    seeded_map(seed, n, |rng| {
        GlobalUnit::product(p, sample_exponent_vector(p, 2, rng))
            .expect("one exponent per generator")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> Arc<RingContext<u64>> {
        RingContext::new(p, 4).unwrap()
    }

    #[test]
    fn cyclotomic_unit_examples() {
        let c = ctx(5);
        assert_eq!(
            cyclotomic_unit(5, 2).unwrap().local_image(&c).unwrap(),
            c.from_ints(&[1, 1])
        );
        assert_eq!(cyclotomic_unit(5, 5), Err(Error::BadIndex(5)));
        assert_eq!(cyclotomic_unit(5, 1), Err(Error::BadIndex(1)));
        for p in [5, 7, 11] {
            let c = ctx(p);
            for a in 2..p {
                let u = cyclotomic_unit(p, a).unwrap().local_image(&c).unwrap();
                assert!(u.absolute_norm().value == 1, "N(c_{a}) != 1 at p = {p}");
            }
        }
    }

    #[test]
    fn integer_inverses_are_exact() {
        for p in [5, 7, 13] {
            for i in 0..generator_count(p) {
                let g = GlobalUnit::generator(p, i);
                let one = int_mul(p, &g.integer_coeffs(), &g.integer_inverse());
                assert_eq!(one, int_one(p), "{g} at p = {p}");
            }
        }
    }

    #[test]
    fn product_image_matches_integer_coefficients() {
        let p = 7;
        let c = ctx(p);
        let u = GlobalUnit::product(p, ExponentVector(vec![3, -2, 5])).unwrap();
        let m = c.modulus();
        let exact = c.elem(u.integer_coeffs().iter().map(|v| m.reduce_big(v)).collect());
        assert_eq!(u.local_image(&c).unwrap(), exact);
        assert_eq!(u.to_string(), "(-zeta)^3 * (c_2)^-2 * (c_3)^5");
    }

    #[test]
    fn split_real_examples() {
        let c = ctx(5);
        let (xi, w) = split_real(&-c.zeta_pow(3)).unwrap();
        assert_eq!(xi, c.zeta_pow(3));
        assert_eq!(w, c.from_int(-1));
        let one_p = c.from_int(6);
        assert_eq!(split_real(&one_p).unwrap(), (c.one(), one_p));
        let real = &c.zeta() + &c.zeta_pow(-1);
        let u = &(&c.one() + &c.zeta()) * &c.zeta_pow(2).invert().unwrap();
        let (xi, w) = split_real(&u).unwrap();
        assert!(xi.pow(5).is_one());
        assert_eq!(w.conj(), w);
        assert_eq!(&xi * &w, u);
        assert_eq!(split_real(&(&c.from_int(2) + &real)).unwrap().0, c.one());
        let alpha = &c.one() + &c.varpi_pow(3).unwrap();
        assert_eq!(split_real(&alpha), Err(Error::NoRealDecomposition));
    }

    #[test]
    fn global_image_dims() {
        for p in [3, 5, 7] {
            let s = ClassSpace::new(&ctx(p)).unwrap();
            assert_eq!(global_image(&s).unwrap().dim() as u64, (p - 1) / 2);
        }
        let s = ClassSpace::new(&ctx(5)).unwrap();
        let c2p = cyclotomic_unit(5, 2)
            .unwrap()
            .local_image(s.ctx())
            .unwrap()
            .pow(5);
        assert!(s.digit_coordinates(&c2p).unwrap().is_zero());
    }

    #[test]
    fn global_intersections_small() {
        for p in [5, 7, 11] {
            let s = ClassSpace::new(&ctx(p)).unwrap();
            let r = check_prop3_prop6(&s).unwrap();
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn certificates() {
        let c = ctx(7);
        let c2 = cyclotomic_unit(7, 2).unwrap();
        let pow = GlobalUnit::product(7, ExponentVector(vec![0, 7, 0])).unwrap();
        let cert = kummer_local_certificate(&pow, &c).unwrap();
        let root = cert.root().expect("c_2^7 has a root");
        let c2_local = c2.local_image(&c).unwrap();
        let level = c.precision() - 6;
        assert!((0..7).any(|j| root.congruent(&(&c2_local * &c.zeta_pow(j)), level)));

        match kummer_local_certificate(&c2, &c).unwrap() {
            LocalCertificate::Refused { classification, .. } => {
                assert!(!classification.is_primaire && !classification.is_primar)
            }
            other => panic!("unexpected {other:?}"),
        }
        match kummer_local_certificate(&GlobalUnit::neg_zeta(7), &c).unwrap() {
            LocalCertificate::Refused {
                failed,
                classification,
            } => {
                assert_eq!(classification.level, 1);
                assert!(failed.contains(&"congruent_mod_pi_squared"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
