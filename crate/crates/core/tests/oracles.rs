//! Fast predicates against exhaustive enumeration of `o^×/o^{×p}` for `p = 3, 5`.

use std::sync::Arc;

use kummerlab::brute::{primaire_by_definition, primar_by_definition, BruteForceModel};
use kummerlab::class_space::ClassSpace;
use kummerlab::classify::classify;
use kummerlab::{RingContext, DEFAULT_PRECISION};
use rayon::prelude::*;

fn setup(p: u64) -> (BruteForceModel<u64>, ClassSpace<u64>) {
    let ctx: Arc<RingContext<u64>> = RingContext::new(p, DEFAULT_PRECISION).unwrap();
    (
        BruteForceModel::new(&ctx, p + 1).unwrap(),
        ClassSpace::new(&ctx).unwrap(),
    )
}

#[test]
fn element_predicates_match_definitions() {
    for p in [3, 5] {
        let (model, _) = setup(p);
        let bad = model
            .elements()
            .par_iter()
            .filter(|x| {
                let r = classify(*x).unwrap();
                r.is_primaire != primaire_by_definition(*x)
                    || r.is_primar != primar_by_definition(*x)
                    || r.is_pth_power != model.is_pth_power(x)
            })
            .count();
        assert_eq!(bad, 0, "p={p}");
    }
}

#[test]
fn filtration_membership_matches_enumeration() {
    for p in [3, 5] {
        let (model, space) = setup(p);
        for n in 1..=p + 1 {
            let sub = space.filtration_subspace(n).unwrap();
            let bad = model
                .elements()
                .par_iter()
                .filter(|x| {
                    let v = space.digit_coordinates(x).unwrap();
                    sub.contains(&v) != model.class_in_filtration(x, n).unwrap()
                })
                .count();
            assert_eq!(bad, 0, "p={p}, n={n}");
        }
    }
}

#[test]
fn primar_subspace_matches_enumeration() {
    for p in [3, 5] {
        let (model, space) = setup(p);
        let pbar = space.primar_subspace().unwrap();
        let bad = model
            .elements()
            .par_iter()
            .filter(|x| {
                let v = space.digit_coordinates(x).unwrap();
                pbar.contains(&v) != model.class_is_primar(x).unwrap()
            })
            .count();
        assert_eq!(bad, 0, "p={p}");
        let dim = model.class_dim(|x| model.class_is_primar(x)).unwrap();
        assert_eq!(dim as usize, pbar.dim(), "p={p}");
    }
}

/// Digit coordinates are a homomorphism to `F_p^p` that kills exactly the
/// `p`-th powers.
#[test]
fn coordinates_are_a_class_isomorphism() {
    for p in [3, 5] {
        let (model, space) = setup(p);
        let xs = model.elements();
        for (i, x) in xs.iter().enumerate().step_by(97) {
            let y = &xs[(i * 31 + 7) % xs.len()];
            let sum = space
                .digit_coordinates(x)
                .unwrap()
                .add_scaled(&space.digit_coordinates(y).unwrap(), 1);
            assert_eq!(space.digit_coordinates(&(x * y)).unwrap(), sum);
        }
        for g in model.pth_powers() {
            assert!(space.digit_coordinates(g).unwrap().is_zero());
        }
        let dim = model.class_dim(|_| Ok(true)).unwrap();
        assert_eq!(dim as u64, p);
    }
}

/// Norm-one *primaire* units are `p`-primary.
#[test]
fn norm_one_primaire_is_p_primary() {
    for p in [3, 5] {
        let (model, _) = setup(p);
        let bad = model
            .elements()
            .par_iter()
            .filter(|x| {
                let m = x.ctx().modulus();
                let n = x.absolute_norm().value;
                let norm_one = m.val_p(m.sub(n, 1)).is_none_or(|v| v >= 2);
                primaire_by_definition(*x) && norm_one && !classify(*x).unwrap().is_p_primary
            })
            .count();
        assert_eq!(bad, 0, "p={p}");
    }
}
