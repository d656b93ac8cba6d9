use std::sync::Arc;

use kummerlab::bernoulli::is_regular;
use kummerlab::class_space::{primar_index_set, ClassSpace};
use kummerlab::classify::classify as classify_elem;
use kummerlab::global::{certify_local, global_report, sample_products, GlobalUnit};
use kummerlab::report::ReportDocument;
use kummerlab::tame::run_norm_level_cell;
use kummerlab::verify::{run_all, Grid};
use kummerlab::{Error, Residue, Result, RingContext};
use rayon::prelude::*;
use serde_json::json;

use crate::Outcome;

/// Calls `$f(&ctx, args..)` with a `u64` ring, or a `u128` one when `p^k`
/// does not fit.
macro_rules! on_ring {
    ($p:expr, $k:expr, $f:ident $(, $arg:expr)*) => {
        match RingContext::<u64>::new($p, $k) {
            Err(Error::CapacityExceeded { .. }) => $f(&RingContext::<u128>::new($p, $k)?, $($arg),*),
            ctx => $f(&ctx?, $($arg),*),
        }
    };
}

fn to_value<S: serde::Serialize>(v: &S) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn classify(p: u64, k: u32, element: &str) -> Result<Outcome> {
    on_ring!(p, k, classify_in, element)
}

fn classify_in<T: Residue>(ctx: &Arc<RingContext<T>>, element: &str) -> Result<Outcome> {
    let doc = ReportDocument::parse_and_classify(element, ctx)?;
    let holds = doc.classification.satisfies_chain();
    Ok(Outcome {
        document: to_value(&doc),
        holds,
    })
}

pub fn chain(p: u64, k: u32) -> Result<Outcome> {
    on_ring!(p, k, chain_in)
}

fn chain_in<T: Residue>(ctx: &Arc<RingContext<T>>) -> Result<Outcome> {
    let p = ctx.p();
    let space = ClassSpace::new(ctx)?;
    let filtration = (1..=p + 1)
        .map(|n| space.filtration_subspace(n))
        .collect::<Result<Vec<_>>>()?;
    let dims: Vec<usize> = filtration.iter().map(|s| s.dim()).collect();
    let u = |n: u64| &filtration[n as usize - 1];
    let pbar = space.primar_subspace()?;
    let by_kernel = space.primar_subspace_by_kernel()?;
    let indexed = space.index_set_subspace()?;

    let top_trivial = u(p + 1).dim() == 0;
    let u_p_nonzero = u(p).dim() > 0;
    let u_p_strict = u(p).is_subspace_of(u(p - 1)) && u(p).dim() < u(p - 1).dim();
    let contains = u(p - 1).is_subspace_of(&pbar);
    let equal = contains && pbar.dim() == u(p - 1).dim();
    let kernel_agrees = pbar.is_subspace_of(&by_kernel) && by_kernel.is_subspace_of(&pbar);
    let holds =
        top_trivial && u_p_nonzero && u_p_strict && contains && equal == (p == 3) && kernel_agrees;

    let count = primar_index_set(p).len();
    let document = json!({
        "p": p,
        "k": ctx.k(),
        "filtration_dims": dims,
        "dim_primar": pbar.dim(),
        "primar_pivots": pbar.pivots(),
        "primar_equals_u_p_minus_1": equal,
        "verdicts": {
            "u_p_plus_1_trivial": top_trivial,
            "u_p_nontrivial": u_p_nonzero,
            "u_p_strictly_inside_u_p_minus_1": u_p_strict,
            "u_p_minus_1_inside_primar": contains,
            "equality_exactly_when_p_is_3": equal == (p == 3),
            "generators_agree_with_kernel": kernel_agrees,
        },
        "counting_formula": {
            "count": count,
            "dim_index_set_span": indexed.dim(),
            "predicted_dim_primar": u(p - 1).dim() + count,
            "matches": u(p - 1).dim() + count == pbar.dim(),
        },
    });
    Ok(Outcome { document, holds })
}

pub fn counterexamples(p: u64, k: u32) -> Result<Outcome> {
    on_ring!(p, k, counterexamples_in)
}

fn counterexamples_in<T: Residue>(ctx: &Arc<RingContext<T>>) -> Result<Outcome> {
    let p = ctx.p();
    let one_plus_p = classify_elem(&ctx.from_int(1 + p as i64))?;
    let alpha = classify_elem(&(&ctx.one() + &ctx.varpi_pow(p - 2)?))?;
    // 1+varpi^(p-2) separates primar from primaire only once p > 3
    let alpha_primar = p > 3;
    let cases = [
        ("1+p", [false, false, true, true], &one_plus_p),
        ("1+varpi^(p-2)", [false, false, false, alpha_primar], &alpha),
    ];
    let mut holds = true;
    let entries: Vec<_> = cases
        .iter()
        .map(|(input, want, r)| {
            let got = [r.is_pth_power, r.is_p_primary, r.is_primaire, r.is_primar];
            holds &= got == *want;
            let flags = |v: [bool; 4]| {
                json!({"pth_power": v[0], "p_primary": v[1], "primaire": v[2], "primar": v[3]})
            };
            json!({
                "input": input,
                "expected": flags(*want),
                "actual": flags(got),
                "matches": got == *want,
                "classification": to_value(*r),
            })
        })
        .collect();
    Ok(Outcome {
        document: json!({"p": p, "k": ctx.k(), "cases": entries}),
        holds,
    })
}

pub fn global(p: u64, k: u32, samples: usize, seed: u64) -> Result<Outcome> {
    on_ring!(p, k, global_in, samples, seed)
}

fn global_in<T: Residue>(ctx: &Arc<RingContext<T>>, samples: usize, seed: u64) -> Result<Outcome> {
    let p = ctx.p();
    let space = ClassSpace::new(ctx)?;
    let report = global_report(&space)?;
    let generators = GlobalUnit::generators(p)
        .iter()
        .map(|g| {
            let x = g.local_image(ctx)?;
            Ok(json!({
                "unit": g.to_string(),
                "class": space.digit_coordinates(&x)?.digits(),
                "classification": to_value(&classify_elem(&x)?),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let units = sample_products(p, samples, seed);
    let certificates = units
        .par_iter()
        .map(|u| {
            let cert = certify_local(&u.local_image(ctx)?)?;
            Ok(json!({"unit": u.to_string(), "certificate": to_value(&cert)}))
        })
        .collect::<Result<Vec<_>>>()?;
    let rooted = certificates
        .iter()
        .filter(|c| c["certificate"]["outcome"] == "root")
        .count();
    let holds = report.holds();
    Ok(Outcome {
        document: json!({
            "report": to_value(&report),
            "generators": generators,
            "samples": samples,
            "seed": seed,
            "rooted": rooted,
            "certificates": certificates,
        }),
        holds,
    })
}

pub fn cor5(p: u64, e: u64, r: u64, k: u32, samples: usize, seed: u64) -> Result<Outcome> {
    let report = run_norm_level_cell(p, e, r, k, samples, seed)?;
    Ok(Outcome {
        holds: report.violations == 0 && report.boundary_fails_hypothesis,
        document: to_value(&report),
    })
}

pub fn regular(p: u64) -> Result<Outcome> {
    Ok(Outcome {
        document: to_value(&is_regular(p)?),
        holds: true,
    })
}

pub fn selftest(grid: Grid) -> Result<Outcome> {
    let checks = run_all(grid);
    for c in &checks {
        eprintln!(
            "check {:>2} {:<26} {} in {:.3?}",
            c.id,
            c.name,
            if c.passed { "passed" } else { "FAILED" },
            c.elapsed
        );
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(Outcome {
        document: json!({"grid": grid, "checks": to_value(&checks), "passed": passed}),
        holds: passed,
    })
}
