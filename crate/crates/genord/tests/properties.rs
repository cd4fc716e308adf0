//! Property tests for the arithmetic kernels.

use genord::cyclo::{cyclotomic, factor_generic_order, multiplicative_order, CycProduct};
use genord::decompose::CharCombination;
use genord::frac::Rat;
use genord::unipotent::Partition;
use proptest::prelude::*;

fn arb_cyc_product() -> impl Strategy<Value = CycProduct> {
    (
        prop::bool::ANY,
        0u32..5,
        prop::collection::btree_map(1u32..20, 1u32..4, 0..4),
    )
        .prop_map(|(neg, xp, factors)| {
            CycProduct::new(if neg { -1 } else { 1 }, xp, factors)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// factor_generic_order is a left inverse of expansion, and the result
    /// is in canonical form.
    #[test]
    fn factor_expand_round_trip(t in arb_cyc_product()) {
        let f = factor_generic_order(&t.expand()).unwrap();
        prop_assert_eq!(f, t);
    }

    /// Textual rendering of generic orders round-trips.
    #[test]
    fn render_parse_round_trip(t in arb_cyc_product()) {
        prop_assert_eq!(CycProduct::parse(&t.render()).unwrap(), t);
    }

    /// The multiplicative order divides ell - 1, and ell divides Phi_e(q)
    /// at the order e.
    #[test]
    fn order_divides_and_detects(q in 2i64..60, idx in 0usize..10) {
        let primes = [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31];
        let ell = primes[idx];
        prop_assume!(q % ell != 0);
        let e = multiplicative_order(q, ell).unwrap();
        prop_assert_eq!((ell - 1) % e as i64, 0);
        prop_assert_eq!(cyclotomic(e).eval_mod(q, ell), 0);
    }

    /// The Phi_e projection is idempotent and multiplicative.
    #[test]
    fn phi_part_laws(a in arb_cyc_product(), b in arb_cyc_product(), e in 1u32..20) {
        prop_assert_eq!(a.phi_e_part(e).phi_e_part(e), a.phi_e_part(e));
        prop_assert_eq!(
            a.mul(&b).phi_e_part(e),
            a.phi_e_part(e).mul(&b.phi_e_part(e))
        );
    }

    /// Hook removal is confluent: the core is a fixed point and removing
    /// hooks in any order stabilizes there.
    #[test]
    fn core_is_confluent(parts in prop::collection::vec(1u32..7, 0..7), d in 2u32..7) {
        let p = Partition::new(parts);
        let core = p.core(d);
        prop_assert!(!core.has_hook(d));
        prop_assert_eq!(core.core(d), p.core(d));
    }

    /// Orthogonal supports add in squares.
    #[test]
    fn norms_add_on_disjoint_support(xs in prop::collection::vec(-3i128..4, 1..5)) {
        let a = CharCombination::from_pairs(
            xs.iter().enumerate().map(|(i, &x)| (format!("a{i}"), Rat::int(x))),
        );
        let b = CharCombination::from_pairs(
            xs.iter().enumerate().map(|(i, &x)| (format!("b{i}"), Rat::int(x))),
        );
        prop_assert_eq!(a.plus(&b).norm_sq(), a.norm_sq() + b.norm_sq());
    }
}
