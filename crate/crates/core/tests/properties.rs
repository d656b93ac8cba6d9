use std::sync::Arc;

use kummerlab::classify::classify;
use kummerlab::parse::parse_element;
use kummerlab::{CycloElem, RingContext};
use proptest::prelude::*;

const K: u32 = 4;

fn ctx(p: u64) -> Arc<RingContext<u64>> {
    RingContext::new(p, K).unwrap()
}

/// `(p, coefficients)` with coefficients reduced modulo `p^K`.
fn raw(primes: &'static [u64]) -> impl Strategy<Value = (u64, Vec<i64>)> {
    prop::sample::select(primes).prop_flat_map(|p| {
        let pk = p.pow(K) as i64;
        (Just(p), prop::collection::vec(0..pk, p as usize - 1))
    })
}

fn unit(primes: &'static [u64]) -> impl Strategy<Value = (u64, Vec<i64>)> {
    raw(primes).prop_filter("unit", |(p, c)| ctx(*p).from_ints(c).is_unit())
}

fn elem(p: u64, c: &[i64]) -> CycloElem<u64> {
    ctx(p).from_ints(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_form_parses_back((p, c) in raw(&[3, 5, 7, 11, 13])) {
        let x = elem(p, &c);
        prop_assert_eq!(parse_element(&x.to_string(), x.ctx()).unwrap(), x);
    }

    #[test]
    fn norm_by_galois_product_matches_determinant((p, c) in raw(&[3, 5, 7, 11])) {
        let x = elem(p, &c);
        prop_assert_eq!(x.absolute_norm(), x.absolute_norm_det());
    }

    #[test]
    fn norm_is_multiplicative((p, a) in raw(&[5, 7]), b in prop::collection::vec(0i64..1000, 6)) {
        let x = elem(p, &a);
        let y = elem(p, &b[..p as usize - 1]);
        let m = x.ctx().modulus();
        prop_assert_eq!(
            (&x * &y).absolute_norm().value,
            m.mul(x.absolute_norm().value, y.absolute_norm().value)
        );
    }

    #[test]
    fn inverse_is_two_sided((p, c) in unit(&[3, 5, 7, 11])) {
        let x = elem(p, &c);
        let y = x.invert().unwrap();
        prop_assert!((&x * &y).is_one());
        prop_assert!((&y * &x).is_one());
    }

    #[test]
    fn pth_root_round_trip((p, c) in unit(&[3, 5, 7, 11])) {
        let x = elem(p, &c);
        let y = x.pow(p as u128);
        let root = y.pth_root().unwrap();
        let level = x.ctx().precision() - (p - 1);
        prop_assert!(root.pow(p as u128).congruent(&y, level));
        prop_assert!(classify(&y).unwrap().is_pth_power);
    }

    #[test]
    fn classification_respects_chain((p, c) in unit(&[3, 5, 7, 11, 13])) {
        let r = classify(&elem(p, &c)).unwrap();
        prop_assert!(r.satisfies_chain());
        prop_assert!(r.level <= p + 1);
    }

    /// All four notions depend only on the class modulo `p`-th powers.
    #[test]
    fn classification_is_a_class_invariant(
        (p, a) in unit(&[3, 5, 7, 11]),
        b in prop::collection::vec(0i64..1000, 10),
    ) {
        let x = elem(p, &a);
        let y = elem(p, &b[..p as usize - 1]);
        prop_assume!(y.is_unit());
        let flags = |z: &CycloElem<u64>| {
            let r = classify(z).unwrap();
            (r.is_pth_power, r.is_p_primary, r.is_primaire, r.is_primar, r.level)
        };
        prop_assert_eq!(flags(&x), flags(&(&x * &y.pow(p as u128))));
    }

    #[test]
    fn galois_action_preserves_norm((p, c) in raw(&[5, 7, 11]), j in 1i64..100) {
        let x = elem(p, &c);
        prop_assume!(j % p as i64 != 0);
        let g = x.galois(j).unwrap();
        prop_assert_eq!(g.absolute_norm(), x.absolute_norm());
        prop_assert_eq!(x.galois(-1).unwrap(), x.conj());
    }

    /// The same computation in `u32`, `u64` and `u128` residues agrees.
    #[test]
    fn residue_widths_agree(
        (p, a) in raw(&[3, 5, 7]),
        b in prop::collection::vec(-5000i64..5000, 6),
        e in 0u128..40,
    ) {
        let b = &b[..p as usize - 1];
        fn run<T: kummerlab::Residue>(p: u64, a: &[i64], b: &[i64], e: u128) -> (String, String) {
            let ctx = RingContext::<T>::new(p, K).unwrap();
            let x = ctx.from_ints(a);
            let y = ctx.from_ints(b);
            let z = &(&x * &y).pow(e) - &y.conj();
            (z.to_string(), x.absolute_norm().to_string())
        }
        let narrow = run::<u32>(p, &a, b, e);
        prop_assert_eq!(&narrow, &run::<u64>(p, &a, b, e));
        prop_assert_eq!(&narrow, &run::<u128>(p, &a, b, e));
    }
}
