use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trefoil_core::hyperbolic::{reduce_to_fundamental_domain, HyperbolicFrame, Matrix2};
use trefoil_core::modular::{
    build_representation, first_return, section_geometry, theta_bounds, wandering_time, CrossSection, ModularError,
    Representation, SectionPoint,
};

fn setup(l: f64) -> (Representation, CrossSection) {
    let rep = build_representation(l).unwrap();
    let sec = section_geometry(&rep).unwrap();
    (rep, sec)
}

fn reduced(f: &HyperbolicFrame, gens: &[Matrix2]) -> HyperbolicFrame {
    let (_, w) = reduce_to_fundamental_domain(f.base_point(), gens).unwrap();
    f.translate(&w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn corner_angles_are_ordered(l in 0.2..2.0f64, u in -0.999..0.999f64) {
        let (_, sec) = setup(l);
        let b = theta_bounds(&sec, u * sec.trim).unwrap();
        prop_assert!(b.theta0_u - b.theta0_s > 1e-6, "{b:?}");
        prop_assert!(b.theta1_s - b.theta1_u > 1e-6, "{b:?}");
    }

    #[test]
    fn outside_the_forward_band_wanders(l in 0.2..1.5f64, u in -0.99..0.99f64, v in 0.001..0.999f64, above in prop::bool::ANY) {
        let (rep, sec) = setup(l);
        let x = u * sec.trim;
        let b = theta_bounds(&sec, x).unwrap();
        let (lo, hi) = b.forward_band();
        let theta = if above { hi + v * (PI - hi) } else { v * lo };
        prop_assume!(theta > 0.0 && theta < PI && (theta < lo || theta > hi));
        let t = wandering_time(&rep, &sec, &SectionPoint { x, theta }, 50.0).unwrap();
        prop_assert!(t.is_some_and(|t| t < 50.0), "x = {x}, theta = {theta}: {t:?}");
    }

    #[test]
    fn reduction_commutes_with_flow(l in 0.3..1.2f64, x in -2.0..2.0f64, y in 0.2..3.0f64, phi in 0.0..std::f64::consts::TAU, t in 0.1..3.0f64) {
        let rep = build_representation(l).unwrap();
        let gens = [rep.a, rep.b];
        let f = HyperbolicFrame::from_point_direction(Complex64::new(x, y), phi).unwrap();
        let one = reduced(&reduced(&f, &gens).flow(t).unwrap(), &gens);
        let two = reduced(&f.flow(t).unwrap(), &gens);
        prop_assert!(one.g.proj_eq(&two.g, 1e-7), "{:?} vs {:?}", one.g, two.g);
    }
}

#[test]
fn return_time_is_bounded_below() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut next = || rng.gen::<f64>();
    for l in [0.3, 0.6, 1.0] {
        let (rep, sec) = setup(l);
        let mut min_time = f64::INFINITY;
        let mut returned = 0;
        for _ in 0..1000 {
            let pt = SectionPoint { x: (2.0 * next() - 1.0) * sec.trim * 0.999, theta: PI * (0.001 + 0.998 * next()) };
            match first_return(&rep, &sec, &pt, 50.0) {
                Ok(step) => {
                    returned += 1;
                    min_time = min_time.min(step.time);
                }
                Err(ModularError::Wandering { .. }) => {}
                Err(e) => panic!("{pt:?}: {e}"),
            }
        }
        assert!(returned > 100, "l = {l}: only {returned} returns");
        assert!(min_time > 0.1, "l = {l}: min return time {min_time}");
    }
}
