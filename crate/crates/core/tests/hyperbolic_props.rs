use num_complex::Complex64;
use proptest::prelude::*;
use trefoil_core::hyperbolic::{
    closed_geodesic_length, geodesic_flow, reduce_to_fundamental_domain, HyperbolicFrame, Matrix2, S, T,
};
use trefoil_core::modular::build_representation;

fn matrix() -> impl Strategy<Value = Matrix2> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_filter_map("determinant too small", |(a, b, c, d)| {
            let det = a * d - b * c;
            (det > 0.2).then(|| Matrix2::new(a, b, c, d).unwrap())
        })
}

fn hyperbolic() -> impl Strategy<Value = Matrix2> {
    (matrix(), 0.05..3.0f64).prop_map(|(g, l)| g.mul(&Matrix2::diag(l.exp())).mul(&g.inv()))
}

fn point() -> impl Strategy<Value = Complex64> {
    (-4.0..4.0f64, 0.05..4.0f64).prop_map(|(x, y)| Complex64::new(x, y))
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mobius_is_a_homomorphism(m in matrix(), n in matrix(), z in point()) {
        let lhs = m.mul(&n).apply_c(z);
        let rhs = m.apply_c(n.apply_c(z));
        prop_assert!(close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
    }

    #[test]
    fn flow_keeps_determinant_one(m in matrix(), t in -40.0..40.0f64) {
        let mut f = HyperbolicFrame { g: m };
        for _ in 0..100 {
            f = geodesic_flow(&f, t / 100.0).unwrap();
        }
        let g = f.g.renormalized();
        prop_assert!((g.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn length_is_conjugation_invariant(m in hyperbolic(), w in matrix()) {
        let conj = w.mul(&m).mul(&w.inv());
        let a = closed_geodesic_length(&m).unwrap();
        let b = closed_geodesic_length(&conj).unwrap();
        prop_assert!((a - b).abs() < 1e-10 * (1.0 + a), "{a} vs {b}");
    }

    #[test]
    fn modular_reduction_is_idempotent(z in point()) {
        let (z1, _) = reduce_to_fundamental_domain(z, &[S, T]).unwrap();
        let (z2, w) = reduce_to_fundamental_domain(z1, &[S, T]).unwrap();
        prop_assert_eq!(z1, z2);
        prop_assert!(w.proj_eq(&Matrix2::IDENTITY, 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn deformed_reduction_is_idempotent(z in point(), l in 0.2..1.5f64) {
        let rep = build_representation(l).unwrap();
        let gens = [rep.a, rep.b];
        let (z1, w1) = reduce_to_fundamental_domain(z, &gens).unwrap();
        prop_assert!(close(w1.apply_c(z), z1, 1e-9));
        let (z2, _) = reduce_to_fundamental_domain(z1, &gens).unwrap();
        prop_assert!(close(z1, z2, 1e-12), "{z1} vs {z2}");
    }
}
