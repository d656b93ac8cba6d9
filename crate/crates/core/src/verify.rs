//! The numbered verification checks run by `selftest` and by the acceptance
//! test target. Every check is deterministic: sampling uses fixed seeds, and
//! parallel work is reduced in a fixed order.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bernoulli::is_regular;
use crate::brute::{frobenius_check, BruteForceModel};
use crate::class_space::{primar_index_set, random_elem, ClassSpace};
use crate::classify::{classify, is_primaire, is_primar};
use crate::error::Result;
use crate::global::{
    certify_local, check_prop3_prop6, sample_products, split_real, LocalCertificate,
};
use crate::sampling::seeded_map;
use crate::scalar::is_prime;
use crate::tame::run_norm_level_cell;
use crate::{CycloElem, Ring, DEFAULT_PRECISION};

/// How much sampling the checks do. `Full` is the acceptance configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    Small,
    Full,
}

impl Grid {
    fn samples(self, full: usize) -> usize {
        match self {
            Grid::Full => full,
            Grid::Small => (full / 10).max(1),
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "small" => Ok(Grid::Small),
            "full" => Ok(Grid::Full),
            _ => Err(format!("unknown grid {s:?} (expected small or full)")),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grid::Small => "small",
            Grid::Full => "full",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub budget: Duration,
}

impl CheckOutcome {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }
}

type CheckFn = fn(Grid) -> Result<(bool, String)>;

/// `(id, name, runtime budget in seconds, check)`.
const CHECKS: [(u8, &str, u64, CheckFn); 10] = [
    (1, "filtration dimensions", 10, filtration_dims),
    (2, "counterexamples", 1, counterexamples),
    (3, "chain strictness", 30, chain_strictness),
    (4, "norm-one primaire", 60, norm_one_primaire),
    (5, "frobenius mod p", 30, frobenius_mod_p),
    (6, "tame norm levels", 60, tame_norm_levels),
    (7, "global units", 120, global_units),
    (8, "counting formula", 10, counting_formula),
    (9, "numerical infrastructure", 60, numerics),
    (10, "regularity", 30, regularity),
];

pub fn check_ids() -> impl Iterator<Item = u8> {
    CHECKS.iter().map(|c| c.0)
}

pub fn run_check(id: u8, grid: Grid) -> Option<CheckOutcome> {
    let &(id, name, budget, f) = CHECKS.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (passed, detail) = f(grid).unwrap_or_else(|e| (false, format!("error: {e}")));
    Some(CheckOutcome {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget),
    })
}

pub fn run_all(grid: Grid) -> Vec<CheckOutcome> {
    check_ids().filter_map(|id| run_check(id, grid)).collect()
}

/// Odd primes in `[lo, hi]`.
pub fn odd_primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&n| is_prime(n)).collect()
}

fn ring(p: u64) -> Result<Arc<Ring>> {
    Ring::new(p, DEFAULT_PRECISION)
}

fn verdict(failures: Vec<String>, ok: String) -> (bool, String) {
    if failures.is_empty() {
        (true, ok)
    } else {
        (false, failures.join("; "))
    }
}

fn random_unit<R: Rng>(ctx: &Arc<Ring>, rng: &mut R) -> CycloElem<u64> {
    loop {
        let x = random_elem(ctx, rng);
        if x.is_unit() {
            return x;
        }
    }
}

fn filtration_dims(_: Grid) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for p in [3, 5] {
        let ctx = ring(p)?;
        let space = ClassSpace::new(&ctx)?;
        let model = BruteForceModel::new(&ctx, p + 1)?;
        let coords = model
            .elements()
            .par_iter()
            .map(|x| space.digit_coordinates(x))
            .collect::<Result<Vec<_>>>()?;
        for n in 1..=p + 1 {
            let sub = space.filtration_subspace(n)?;
            let brute = model.class_dim(|x| model.class_in_filtration(x, n))? as u64;
            if brute != p + 1 - n || sub.dim() as u64 != p + 1 - n {
                failures.push(format!("p={p} n={n}: brute {brute}, frame {}", sub.dim()));
            }
            let disagreements = model
                .elements()
                .par_iter()
                .zip(&coords)
                .map(|(x, v)| {
                    Ok(usize::from(
                        sub.contains(v) != model.class_in_filtration(x, n)?,
                    ))
                })
                .sum::<Result<usize>>()?;
            if disagreements > 0 {
                failures.push(format!(
                    "p={p} n={n}: {disagreements} membership disagreements"
                ));
            }
        }
    }
    for p in odd_primes(7, 31) {
        let space = ClassSpace::new(&ring(p)?)?;
        for n in 1..=p + 1 {
            let d = space.filtration_subspace(n)?.dim() as u64;
            if d != p + 1 - n {
                failures.push(format!("p={p} n={n}: frame {d}"));
            }
        }
    }
    Ok(verdict(
        failures,
        "dim U_n = p+1-n for all p <= 31; brute force agrees for p in {3,5}".into(),
    ))
}

fn counterexamples(_: Grid) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for p in [5, 7, 11, 13] {
        let ctx = ring(p)?;
        let r = classify(&ctx.from_int(1 + p as i64))?;
        if !(r.is_primaire && !r.is_p_primary && r.level == p - 1) {
            failures.push(format!("p={p}: 1+p gave {r:?}"));
        }
        let alpha = &ctx.one() + &ctx.varpi_pow(p - 2)?;
        let r = classify(&alpha)?;
        if !(r.is_primar && !r.is_primaire) {
            failures.push(format!("p={p}: 1+varpi^(p-2) gave {r:?}"));
        }
    }
    let ctx = ring(3)?;
    let r = classify(&(&ctx.one() + &ctx.canonical_varpi()?))?;
    if r.is_primar {
        failures.push("p=3: 1+varpi is primar".into());
    }
    Ok(verdict(
        failures,
        "1+p primaire, not p-primary; 1+varpi^(p-2) primar, not primaire (p=5,7,11,13); 1+varpi not primar at p=3".into(),
    ))
}

fn chain_strictness(grid: Grid) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for p in odd_primes(5, 31) {
        let ctx = ring(p)?;
        let one = ctx.one();
        let witnesses = [
            ("p-th power", (&one + &ctx.pi().pow(2)).pow(p as u128)),
            ("p-primary, not p-th power", &one + &ctx.varpi_pow(p)?),
            ("primaire, not p-primary", ctx.from_int(1 + p as i64)),
            ("primar, not primaire", &one + &ctx.varpi_pow(p - 2)?),
            ("not primar", ctx.zeta()),
        ];
        let expected = [
            [true, true, true, true],
            [false, true, true, true],
            [false, false, true, true],
            [false, false, false, true],
            [false, false, false, false],
        ];
        for ((label, x), want) in witnesses.iter().zip(expected) {
            let r = classify(x)?;
            let got = [r.is_pth_power, r.is_p_primary, r.is_primaire, r.is_primar];
            if got != want || !r.satisfies_chain() {
                failures.push(format!("p={p} {label}: {got:?}"));
            }
        }
    }
    let ctx = ring(3)?;
    let model = BruteForceModel::new(&ctx, 4)?;
    let mut units: Vec<_> = model.elements().to_vec();
    units.extend(seeded_map(3, grid.samples(1000), |rng| {
        random_unit(&ctx, rng)
    }));
    let mismatches = units
        .par_iter()
        .map(|x| Ok(usize::from(is_primaire(x)?.0 != is_primar(x)?.holds())))
        .sum::<Result<usize>>()?;
    if mismatches > 0 {
        failures.push(format!(
            "p=3: primar and primaire differ on {mismatches} units"
        ));
    }
    Ok(verdict(
        failures,
        format!(
            "four notions separated for p = 5..31; primar <=> primaire at p=3 on {} units",
            units.len()
        ),
    ))
}

/// `x` primaire with `N(x) ≡ 1 (mod pπ)` must be `p`-primary.
fn norm_one_violation(x: &CycloElem<u64>) -> Result<Option<bool>> {
    // v_π(N - 1) ≥ p  ⟺  v_p(N - 1) ≥ 2
    let m = x.ctx().modulus();
    let norm_one = m
        .val_p(m.sub(x.absolute_norm().value, 1))
        .is_none_or(|v| v >= 2);
    if !(is_primaire(x)?.0 && norm_one) {
        return Ok(None);
    }
    Ok(Some(!classify(x)?.is_p_primary))
}

fn norm_one_primaire(grid: Grid) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut tested = Vec::new();
    for p in [3, 5] {
        let ctx = ring(p)?;
        let model = BruteForceModel::new(&ctx, p + 1)?;
        let results = model
            .elements()
            .par_iter()
            .map(norm_one_violation)
            .collect::<Result<Vec<_>>>()?;
        let hits = results.iter().flatten().count();
        let bad = results.iter().flatten().filter(|&&v| v).count();
        if bad > 0 || hits == 0 {
            failures.push(format!(
                "p={p}: {bad} violations among {hits} qualifying units"
            ));
        }
        // p-primary by level agrees with being a p-th power in (o/𝔭^p)^×
        let lower = BruteForceModel::new(&ctx, p)?;
        let disagreements = lower
            .elements()
            .par_iter()
            .map(|x| {
                Ok(usize::from(
                    classify(x)?.is_p_primary != lower.is_pth_power(x),
                ))
            })
            .sum::<Result<usize>>()?;
        if disagreements > 0 {
            failures.push(format!(
                "p={p}: p-primary oracle disagrees on {disagreements} units"
            ));
        }
        tested.push(format!("p={p}: {hits} of {}", model.order()));
    }
    for p in [7, 11] {
        let ctx = ring(p)?;
        let samples = seeded_map(p, grid.samples(10_000), |rng| loop {
            let a = rng.gen_range(1..p) as i64;
            let x = &ctx.from_int(a) + &random_elem(&ctx, rng).scale(p);
            if let Ok(Some(v)) = norm_one_violation(&x) {
                return v;
            }
        });
        let bad = samples.iter().filter(|&&v| v).count();
        if bad > 0 {
            failures.push(format!(
                "p={p}: {bad} violations in {} samples",
                samples.len()
            ));
        }
        tested.push(format!("p={p}: {} filtered samples", samples.len()));
    }
    Ok(verdict(
        failures,
        format!("no violations ({})", tested.join(", ")),
    ))
}

fn frobenius_mod_p(_: Grid) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for p in [3, 5, 7] {
        let r = frobenius_check(p)?;
        if !r.holds() {
            failures.push(format!("{r:?}"));
        }
    }
    Ok(verdict(
        failures,
        "(o/p)^(xp) = F_p^x and z^p = sum a_i on all of o/p for p = 3, 5, 7".into(),
    ))
}

fn tame_norm_levels(grid: Grid) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut cells = 0;
    let mut hypotheses = 0;
    let samples = grid.samples(1000);
    for p in [2, 3, 5, 7] {
        for e in [2, 3, 4, 6].into_iter().filter(|e| e % p != 0) {
            for r in [1u64, 2] {
                cells += 1;
                let cell =
                    run_norm_level_cell(p, e, r, r as u32 + 2, samples, p * 1000 + e * 10 + r)?;
                hypotheses += cell.hypothesis_met;
                if cell.violations > 0 {
                    failures.push(format!("p={p} e={e} r={r}: {} violations", cell.violations));
                }
                if !cell.boundary_fails_hypothesis {
                    failures.push(format!(
                        "p={p} e={e} r={r}: 1+p^r meets the norm hypothesis"
                    ));
                }
            }
        }
    }
    Ok(verdict(
        failures,
        format!(
            "{cells} cells x {samples} samples, {hypotheses} met the hypothesis, no violations; \
             1+p^r fails the norm hypothesis in every cell"
        ),
    ))
}

fn global_units(grid: Grid) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let samples = grid.samples(1000);
    let mut certified = 0;
    for p in odd_primes(5, 31) {
        let ctx = ring(p)?;
        let space = ClassSpace::new(&ctx)?;
        match check_prop3_prop6(&space) {
            Ok(r) if r.holds() => {}
            Ok(r) => failures.push(format!("p={p}: {r:?}")),
            Err(e) => failures.push(format!("p={p}: {e}")),
        }
        let pbar = space.primar_subspace()?;
        let outcomes: Vec<Result<Option<String>>> = sample_products(p, samples, p)
            .par_iter()
            .map(|u| {
                let x = u.local_image(&ctx)?;
                let (xi, w) = split_real(&x)?;
                debug_assert!(xi.pow(p as u128).is_one() && w.conj() == w);
                let v = space.digit_coordinates(&x)?;
                let primar = classify(&x)?.is_primar;
                if primar != pbar.contains(&v) {
                    return Ok(Some(format!(
                        "{u}: primar {primar} but class membership disagrees"
                    )));
                }
                if !primar {
                    return Ok(None);
                }
                if !v.is_zero() {
                    return Ok(Some(format!("{u}: primar with nonzero class {v:?}")));
                }
                match certify_local(&x) {
                    Ok(LocalCertificate::Root { .. }) => Ok(Some(String::new())),
                    Ok(other) => Ok(Some(format!("{u}: {other:?}"))),
                    Err(e) => Ok(Some(format!("{u}: {e}"))),
                }
            })
            .collect();
        for o in outcomes {
            match o? {
                Some(msg) if msg.is_empty() => certified += 1,
                Some(msg) => failures.push(format!("p={p}: {msg}")),
                None => {}
            }
        }
    }
    Ok(verdict(
        failures,
        format!("E cap P = E cap U_(p-1) = 0 for p = 5..31; {certified} primar samples certified"),
    ))
}

fn counting_formula(_: Grid) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut table = Vec::new();
    for p in odd_primes(3, 31) {
        let space = ClassSpace::new(&ring(p)?)?;
        let pbar = space.primar_subspace()?;
        if pbar != space.primar_subspace_by_kernel()? {
            failures.push(format!("p={p}: the two computations of P disagree"));
        }
        let dim = pbar.dim() - space.filtration_subspace(p - 1)?.dim();
        let count = primar_index_set(p).len();
        table.push(format!("{p}:{dim}/{count}"));
        if dim != count {
            failures.push(format!("p={p}: dim P/U_(p-1) = {dim}, count = {count}"));
        }
    }
    for (p, want) in [(3, 0), (5, 1), (7, 2), (31, 8)] {
        let got = primar_index_set(p).len();
        if got != want {
            failures.push(format!("|I| at p={p} is {got}, expected {want}"));
        }
    }
    let summary = format!("dim/count by p: {}", table.join(" "));
    let (passed, detail) = verdict(failures, String::new());
    Ok((
        passed,
        if passed {
            summary
        } else {
            format!("{detail} [{summary}]")
        },
    ))
}

fn numerics(grid: Grid) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let samples = grid.samples(1000);
    for p in odd_primes(3, 13) {
        let ctx = ring(p)?;
        let level = ctx.precision() - (p - 1);
        let results = seeded_map(p, samples, |rng| -> Result<(bool, bool)> {
            let x = random_elem(&ctx, rng);
            let norms_agree = x.absolute_norm() == x.absolute_norm_det();
            let y = random_unit(&ctx, rng);
            let yp = y.pow(p as u128);
            let r = yp.pth_root()?;
            let roundtrip = r.pow(p as u128).congruent(&yp, level)
                && (0..p as i64).any(|j| r.congruent(&(&y * &ctx.zeta_pow(j)), level));
            Ok((norms_agree, roundtrip))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let norm_bad = results.iter().filter(|r| !r.0).count();
        let root_bad = results.iter().filter(|r| !r.1).count();
        if norm_bad + root_bad > 0 {
            failures.push(format!(
                "p={p}: {norm_bad} norm mismatches, {root_bad} root failures"
            ));
        }
    }
    Ok(verdict(
        failures,
        format!("{samples} cases per p in 3..13: norms agree, roots verify"),
    ))
}

/// Irregular primes in range, with the indices `2j` where `p | B_2j`.
pub const KNOWN_IRREGULAR: [(u64, &[u64]); 5] = [
    (37, &[32]),
    (59, &[44]),
    (67, &[58]),
    (101, &[68]),
    (103, &[24]),
];

fn regularity(_: Grid) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for p in odd_primes(3, 31) {
        let r = is_regular(p)?;
        if !r.regular {
            failures.push(format!(
                "p={p} reported irregular {:?}",
                r.irregular_indices
            ));
        }
    }
    for (p, idx) in KNOWN_IRREGULAR {
        let r = is_regular(p)?;
        if r.regular || r.irregular_indices != idx {
            failures.push(format!("p={p}: got {:?}", r.irregular_indices));
        }
    }
    Ok(verdict(
        failures,
        "3..31 regular; 37[32] 59[44] 67[58] 101[68] 103[24]".into(),
    ))
}
