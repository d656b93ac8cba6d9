//! The four notions of "primary" for units of `Z_p[ζ]`.
//!
//! For a unit `α = ⟨a⟩ u` with `u ∈ U_1`, let `n = v_π(u - 1)` capped at `p+1`:
//!
//! * `p`-th power ⟺ `n ≥ p + 1`,
//! * `p`-primary ⟺ `n ≥ p`,
//! * *primaire* ⟺ `α ≡ a (mod p)` for some `a ∈ Z_p^×`,
//! * *primär* ⟺ `α ≡ a (mod π²)` and `N_{K|K⁺}(α) ≡ b (mod p)`.
//!
//! The Teichmüller factor is always a `p`-th power (`⟨a⟩^p = ⟨a⟩`) and
//! `U_1^p = U_{p+1}`, which is why the level of the 1-unit part alone
//! decides the first two notions.

use serde::Serialize;

use crate::cyclotomic::CycloElem;
use crate::error::{Error, Result};
use crate::scalar::Residue;

/// `(a, u)` with `a ≡ x (mod 𝔭)`, `a ∈ [1, p)`, and `x = ⟨a⟩ u`, `u ∈ U_1`.
pub fn teich_split<T: Residue>(x: &CycloElem<T>) -> Result<(u64, CycloElem<T>)> {
    let a = x.residue_mod_p();
    if a == 0 {
        return Err(Error::NotAUnit);
    }
    let omega = x.ctx().teichmuller(a as i64)?;
    Ok((a, x * &omega.invert()?))
}

fn require_precision<T: Residue>(x: &CycloElem<T>, needed: u64) -> Result<()> {
    let available = x.ctx().precision();
    if available < needed {
        return Err(Error::precision(needed, available));
    }
    Ok(())
}

/// Filtration level of the unit's class: `min(p+1, v_π(u - 1))` for the 1-unit
/// part `u`.
pub fn unit_class_level<T: Residue>(x: &CycloElem<T>) -> Result<u64> {
    let p = x.p();
    require_precision(x, p + 1)?;
    let (_, u) = teich_split(x)?;
    Ok((&u - &x.ctx().one()).pi_valuation().value().min(p + 1))
}

/// *Primaire*: `x ≡ a (mod p)` with `a ∈ Z_p^×`. Since `o/p` has basis
/// `1, ζ, …, ζ^(p-2)`, this says `c_1 ≡ … ≡ c_{p-2} ≡ 0` and `c_0 ≢ 0 (mod p)`.
/// The witness is `c_0` itself.
pub fn is_primaire<T: Residue>(x: &CycloElem<T>) -> Result<(bool, Option<T>)> {
    if !x.is_unit() {
        return Err(Error::NotAUnit);
    }
    let m = x.ctx().modulus();
    let c = x.coeffs();
    let holds = m.mod_p(c[0]) != 0 && c[1..].iter().all(|&v| m.mod_p(v) == 0);
    Ok((holds, holds.then_some(c[0])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimarWitnesses {
    /// `α ≡ t (mod π²)`.
    pub t: u64,
    /// `N_{K|K⁺}(α) ≡ b (mod p)`.
    pub b: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimarVerdict {
    /// `α ≡ a (mod π²)` for some `a ∈ Z_p^×`.
    pub congruent_mod_pi_squared: bool,
    /// `N_{K|K⁺}(α)` is *primaire*.
    pub half_norm_primaire: bool,
    pub witnesses: Option<PrimarWitnesses>,
}

impl PrimarVerdict {
    pub fn holds(&self) -> bool {
        self.congruent_mod_pi_squared && self.half_norm_primaire
    }
}

/// *Primär* test.
///
/// The image of `Z_p` in `o/𝔭²` is only the line `F_p` (as `p ∈ 𝔭²`), so the
/// first condition is tested against the integer representative `t ∈ [1, p)`
/// of the residue.
pub fn is_primar<T: Residue>(x: &CycloElem<T>) -> Result<PrimarVerdict> {
    let p = x.p();
    if !x.is_unit() {
        return Err(Error::NotAUnit);
    }
    require_precision(x, 2.max(p - 1) + 1)?;
    let t = x.residue_mod_p();
    let congruent = (x - &x.ctx().from_int(t as i64)).pi_valuation().value() >= 2;
    let (half_ok, b) = is_primaire(&x.half_norm())?;
    let witnesses = (congruent && half_ok).then(|| PrimarWitnesses {
        t,
        b: x.ctx()
            .modulus()
            .mod_p(b.expect("witness present when primaire")),
    });
    Ok(PrimarVerdict {
        congruent_mod_pi_squared: congruent,
        half_norm_primaire: half_ok,
        witnesses,
    })
}

fn decimal<S: serde::Serializer, T: Residue>(
    v: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct ClassificationReport<T: Residue> {
    pub is_pth_power: bool,
    pub is_p_primary: bool,
    pub is_primaire: bool,
    pub is_primar: bool,
    /// Level of the 1-unit part, capped at `p + 1`.
    pub level: u64,
    pub teichmuller_residue: u64,
    #[serde(serialize_with = "decimal")]
    pub primaire_witness: Option<T>,
    pub primar_witnesses: Option<PrimarWitnesses>,
    pub primar_detail: PrimarVerdict,
    pub p: u64,
    pub k: u32,
    pub precision_used: u64,
}

impl<T: Residue> ClassificationReport<T> {
    /// `p`-th power ⇒ `p`-primary ⇒ *primaire* ⇒ *primär*.
    pub fn satisfies_chain(&self) -> bool {
        (!self.is_pth_power || self.is_p_primary)
            && (!self.is_p_primary || self.is_primaire)
            && (!self.is_primaire || self.is_primar)
    }
}

pub fn classify<T: Residue>(x: &CycloElem<T>) -> Result<ClassificationReport<T>> {
    let p = x.p();
    require_precision(x, p + 1)?;
    let (residue, _) = teich_split(x)?;
    let level = unit_class_level(x)?;
    let (primaire, primaire_witness) = is_primaire(x)?;
    let primar = is_primar(x)?;
    let report = ClassificationReport {
        is_pth_power: level > p,
        is_p_primary: level >= p,
        is_primaire: primaire,
        is_primar: primar.holds(),
        level,
        teichmuller_residue: residue,
        primaire_witness,
        primar_witnesses: primar.witnesses,
        primar_detail: primar,
        p,
        k: x.ctx().k(),
        precision_used: x.ctx().precision(),
    };
    debug_assert!(report.satisfies_chain(), "chain violated for {x:?}");
    Ok(report)
}
