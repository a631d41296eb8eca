use proptest::prelude::*;
use trefoil_core::knots::braid::{alexander_from_braid, lorenz_braid, Braid};
use trefoil_core::knots::{alexander_from_diagram, word_to_matrix, KnotDiagram, LorenzWord};

fn word(max: usize) -> impl Strategy<Value = LorenzWord> {
    prop::collection::vec(prop::bool::ANY, 1..=max).prop_map(|bits| {
        let s: String = bits.iter().map(|&b| if b { 'R' } else { 'L' }).collect();
        s.parse().unwrap()
    })
}

fn positive_braid() -> impl Strategy<Value = Braid> {
    (2usize..=6).prop_flat_map(|n| {
        prop::collection::vec(1..n, 0..=12).prop_map(move |w| Braid::new(n, w).unwrap())
    })
}

fn is_single_cycle(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut i = 0;
    for _ in 0..perm.len() {
        if seen[i] {
            return false;
        }
        seen[i] = true;
        i = perm[i];
    }
    i == 0 && seen.iter().all(|&s| s)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, max_global_rejects: 50_000, ..ProptestConfig::default() })]

    #[test]
    fn trace_is_rotation_invariant_and_det_is_one(w in word(16), k in 0usize..16) {
        let m = word_to_matrix(&w);
        prop_assert_eq!(m.det(), 1);
        prop_assert_eq!(word_to_matrix(&w.rotate(k)).trace(), m.trace());
    }

    #[test]
    fn lorenz_permutation_is_a_cycle_iff_primitive(w in word(10)) {
        prop_assume!(w.is_mixed());
        // a proper power has tied rotations, so there is no braid to build
        match lorenz_braid(&w) {
            Ok(b) => prop_assert!(w.is_primitive() && is_single_cycle(&b.permutation())),
            Err(e) => prop_assert!(!w.is_primitive(), "{w}: {e}"),
        }
    }

    #[test]
    fn alexander_is_symmetric_and_unit_at_one(b in positive_braid()) {
        prop_assume!(b.components() == 1);
        let a = alexander_from_braid(&b).unwrap();
        prop_assert!(a.unit_at_one(), "{a}");
        prop_assert!(a.is_palindromic(), "{a}");
        let d = alexander_from_diagram(&KnotDiagram::from_braid(&b, true)).unwrap();
        prop_assert_eq!(d, a);
    }

    #[test]
    fn lorenz_knots_have_symmetric_alexander(w in word(9)) {
        prop_assume!(w.is_mixed() && w.is_primitive());
        let b = lorenz_braid(&w).unwrap();
        let a = alexander_from_braid(&b).unwrap();
        prop_assert!(a.unit_at_one() && a.is_palindromic(), "{w}: {a}");
    }
}
