use proptest::prelude::*;
use rayon::prelude::*;
use trefoil_core::lorenz::{
    eigen_origin, find_tpoint, integrate, mirror, unstable_separatrix, vector_field, Branch, LorenzParams,
    TPointConfig,
};

fn params() -> impl Strategy<Value = LorenzParams> {
    (1.0..20.0f64, 0.5..60.0f64, 0.5..5.0f64).prop_map(|(s, r, b)| LorenzParams::new(s, r, b).unwrap())
}

fn state() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-40.0..40.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn field_is_mirror_equivariant(p in params(), s in state()) {
        prop_assert_eq!(vector_field(&mirror(&s), &p), mirror(&vector_field(&s, &p)));
    }

    #[test]
    fn origin_ordering_on_the_parameter_box(sigma in 9.0..=12.0f64, rho in 20.0..=35.0f64) {
        let p = LorenzParams::new(sigma, rho, 8.0 / 3.0).unwrap();
        prop_assert!(eigen_origin(&p).geometric_ordering);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trajectories_are_mirror_equivariant(s in state(), t in 1.0..10.0f64) {
        let p = LorenzParams::classical();
        let a = integrate(s, &p, t, 1e-10).unwrap().last().1;
        let b = integrate(mirror(&s), &p, t, 1e-10).unwrap().last().1;
        let m = mirror(&a);
        for i in 0..3 {
            prop_assert!((m[i] - b[i]).abs() <= 1e-9 * (1.0 + a[i].abs()));
        }
    }
}

#[test]
fn unstable_branches_mirror_each_other() {
    let p = LorenzParams::classical();
    let plus = unstable_separatrix(&p, Branch::Plus, 1e-7, 20.0, 1e-10).unwrap();
    let minus = unstable_separatrix(&p, Branch::Minus, 1e-7, 20.0, 1e-10).unwrap();
    assert_eq!(plus.samples.len(), minus.samples.len());
    for ((tp, a), (tm, b)) in plus.samples.iter().zip(&minus.samples) {
        assert_eq!(tp, tm);
        let m = mirror(a);
        for i in 0..3 {
            assert!((m[i] - b[i]).abs() <= 1e-9 * (1.0 + a[i].abs()));
        }
    }
}

#[test]
fn trajectories_stay_trapped() {
    let p = LorenzParams::classical();
    let axis = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / 9.0;
    let grid: Vec<[f64; 3]> = (0..1000)
        .map(|k| [axis(-30.0, 30.0, k % 10), axis(-30.0, 30.0, k / 10 % 10), axis(0.0, 60.0, k / 100)])
        .collect();
    let worst = grid
        .par_iter()
        .map(|&s| {
            let tr = integrate(s, &p, 100.0, 1e-8).unwrap();
            tr.samples.iter().map(|(_, y)| y.iter().map(|c| c * c).sum::<f64>().sqrt()).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst < 200.0, "max radius {worst}");
}

#[test]
fn tpoint_is_independent_of_the_start() {
    let corners = [(28.0, 9.0), (28.0, 12.0), (34.0, 9.0), (34.0, 12.0)];
    let found: Vec<LorenzParams> = corners
        .par_iter()
        .map(|&(rho, sigma)| {
            let start = LorenzParams::new(sigma, rho, 8.0 / 3.0).unwrap();
            find_tpoint(&start, &TPointConfig::default()).unwrap().params
        })
        .collect();
    for p in &found[1..] {
        assert!((p.rho - found[0].rho).abs() < 1e-4 && (p.sigma - found[0].sigma).abs() < 1e-4, "{found:?}");
    }
}
