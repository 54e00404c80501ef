//! Transform correctness against independent oracles: the character-sum
//! definition of the Walsh transform, Parseval, and Moebius involution on
//! arbitrary (not just trace-monomial) truth tables.

use std::sync::Arc;

use proptest::prelude::*;

use nlkit_core::field::{FieldContext, FieldElement};
use nlkit_core::TruthTable;

fn ctx(n: u32) -> Arc<FieldContext> {
    Arc::new(FieldContext::new(n).unwrap())
}

fn arb_table(n: u32) -> impl Strategy<Value = TruthTable> {
    prop::collection::vec(any::<bool>(), 1usize << n).prop_map(move |bits| {
        TruthTable::from_fn(ctx(n), |x| bits[x as usize])
    })
}

/// Character-sum oracle: W_f(alpha) = sum_x (-1)^{f(x) + tr(alpha x)}.
fn walsh_naive(f: &TruthTable, alpha: FieldElement) -> i64 {
    let c = f.ctx();
    (0..f.len() as u32)
        .map(|x| {
            let t = f.get(x) as u8 ^ c.abs_trace(c.mul(alpha, FieldElement(x)));
            if t == 0 {
                1i64
            } else {
                -1
            }
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn walsh_matches_character_sum(f in (2u32..=6).prop_flat_map(arb_table)) {
        let spec = f.walsh_transform();
        prop_assert!(spec.parseval_holds());
        for alpha in f.ctx().elements() {
            prop_assert_eq!(spec.value_at(alpha) as i64, walsh_naive(&f, alpha));
        }
    }

    #[test]
    fn moebius_is_an_involution(f in (2u32..=8).prop_flat_map(arb_table)) {
        let anf = f.anf();
        prop_assert_eq!(anf.to_truth_table(f.ctx().clone()), f);
    }

    #[test]
    fn distance_is_weight_of_xor(
        pair in (2u32..=7).prop_flat_map(|n| (arb_table(n), arb_table(n)))
    ) {
        let (f, g) = pair;
        prop_assert_eq!(f.distance(&g).unwrap(), f.xor(&g).unwrap().weight());
        prop_assert_eq!(f.distance(&f).unwrap(), 0);
    }

    #[test]
    fn spectrum_parity_is_uniform(f in (1u32..=8).prop_flat_map(arb_table)) {
        // All Walsh values share the parity of 2^n (even for n >= 1).
        let spec = f.walsh_transform();
        for &v in spec.values() {
            prop_assert_eq!(v.rem_euclid(2), (1i32 << f.n()).rem_euclid(2));
        }
    }

    #[test]
    fn hex_roundtrip_random(f in (2u32..=8).prop_flat_map(arb_table)) {
        let hex = f.to_hex();
        prop_assert_eq!(TruthTable::from_hex(f.ctx().clone(), &hex).unwrap(), f);
    }
}

#[test]
fn derivative_degree_drop_across_families() {
    // deg(D_a f) <= deg(f) - 1 for the cubic, quartic, and x^{2^r+3}
    // exponents, every nonzero direction, n <= 10.
    for n in 4..=10u32 {
        let c = ctx(n);
        let mut exponents = vec![7u64, 15];
        if n % 2 == 0 {
            exponents.push((1 << (n / 2)) + 3);
        }
        for d in exponents {
            let f = TruthTable::trace_monomial(c.clone(), FieldElement::ONE, d);
            if f.weight() == 0 {
                continue; // e.g. tr_4(x^15) vanishes identically
            }
            let deg = f.algebraic_degree();
            for a in c.nonzero_elements() {
                let da = f.derivative(a).unwrap();
                assert!(
                    da.algebraic_degree() <= deg - 1,
                    "n={n} d={d} a={a}: degree did not drop"
                );
            }
        }
    }
}

#[test]
fn exact_nl2_bracketed_by_first_order() {
    let c = ctx(5);
    let f = TruthTable::trace_monomial(c, FieldElement::ONE, 7);
    let nl1 = f.nonlinearity();
    let nl2 = f.exact_nl_r(2, 1 << 22).unwrap();
    assert!(nl2 <= nl1);
    assert!(nl2 >= 6, "second-order value for tr_5(x^7) is at least 6");
}

#[test]
fn exact_nl_r_thread_count_independent() {
    // The sweep's min-reduction must not depend on the chunking.
    let c = ctx(5);
    let f = TruthTable::trace_monomial(c, FieldElement::ONE, 7);
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| f.exact_nl_r(2, 1 << 22).unwrap());
    let quad = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| f.exact_nl_r(2, 1 << 22).unwrap());
    assert_eq!(single, quad);
}
