//! In-binary invariant suites behind `--selftest`, one per module. These are
//! quick versions of the test-suite properties, run against the installed
//! build.

use serde::Serialize;

use trefoil_core::knots::braid::{alexander_from_braid, genus_positive_braid, lorenz_braid, Braid};
use trefoil_core::knots::{
    alexander_from_diagram, ghys_word_check, primitive_words, seifert_genus, word_to_matrix, AlexanderPoly,
    KnotDiagram, LorenzWord,
};
use trefoil_core::lorenz::{
    eigen_origin, find_tpoint, hopf_crossing_detector, hopf_threshold, integrate, mirror, vector_field,
    LorenzParams, TPointConfig,
};
use trefoil_core::model::{
    classify_regime, entropy_estimate, interval_map, itinerary, lap_number, periodic_orbit_from_word, return_map,
    ModelParams, Regime, ReturnMapPoint,
};
use trefoil_core::modular::{
    build_representation, orbit, periodic_seed, section_geometry, theta_bounds, verify_two_leaf_image,
};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type CheckFn = fn() -> Result<(bool, String), String>;

fn run(checks: &[(&'static str, CheckFn)]) -> Vec<Check> {
    checks
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
            Check { name, passed, detail }
        })
        .collect()
}

/// Which module a command belongs to.
pub fn module_of(command: &str) -> &'static str {
    match command {
        "tpoint-find" | "trefoil-certify" | "lorenz-orbit" => "lorenz",
        "model-classify" | "model-horseshoe" | "model-orbit" => "model",
        "modular-return" | "modular-itinerary" => "modular",
        "knot-from-word" => "knots",
        "ghys-check" => "ghys",
        _ => "all",
    }
}

pub fn selftest(module: &str) -> Vec<Check> {
    match module {
        "lorenz" => run(LORENZ),
        "model" => run(MODEL),
        "modular" => run(MODULAR),
        "knots" => run(KNOTS),
        "ghys" => run(GHYS),
        _ => [LORENZ, MODEL, MODULAR, KNOTS, GHYS].iter().flat_map(|c| run(c)).collect(),
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

const LORENZ: &[(&str, CheckFn)] = &[
    ("origin_spectrum", || {
        let s = eigen_origin(&LorenzParams::classical());
        let ok = (s.lambda1 - 11.8277).abs() < 1e-3
            && s.lambda2 == -8.0 / 3.0
            && (s.lambda3 + 22.8277).abs() < 1e-3
            && s.geometric_ordering;
        Ok((ok, format!("{:.6} {:.6} {:.6}", s.lambda1, s.lambda2, s.lambda3)))
    }),
    ("ordering_on_grid", || {
        let mut bad = 0;
        for i in 0..=12 {
            for j in 0..=15 {
                let p = LorenzParams::new(9.0 + 0.25 * i as f64, 20.0 + j as f64, 8.0 / 3.0).map_err(err)?;
                bad += usize::from(!eigen_origin(&p).geometric_ordering);
            }
        }
        Ok((bad == 0, format!("{bad} grid points violate the ordering")))
    }),
    ("hopf_threshold", || {
        let a = hopf_threshold(10.0, 8.0 / 3.0).map_err(err)?;
        let b = hopf_crossing_detector(10.0, 8.0 / 3.0, 1e-12).map_err(err)?;
        Ok(((a - 470.0 / 19.0).abs() < 1e-12 && (a - b).abs() < 1e-6, format!("{a} vs {b}")))
    }),
    ("mirror_equivariance", || {
        let p = LorenzParams::classical();
        let s = [3.0, -7.0, 20.0];
        let field = vector_field(&mirror(&s), &p) == mirror(&vector_field(&s, &p));
        let a = integrate(s, &p, 5.0, 1e-10).map_err(err)?.last().1;
        let b = integrate(mirror(&s), &p, 5.0, 1e-10).map_err(err)?.last().1;
        let m = mirror(&a);
        let gap = (0..3).map(|i| (m[i] - b[i]).abs()).fold(0.0, f64::max);
        Ok((field && gap < 1e-9, format!("trajectory gap {gap:e}")))
    }),
    ("trapping", || {
        let p = LorenzParams::classical();
        let mut worst = 0.0f64;
        for k in 0..27 {
            let s = [-30.0 + 30.0 * (k % 3) as f64, -30.0 + 30.0 * (k / 3 % 3) as f64, 30.0 * (k / 9) as f64];
            let tr = integrate(s, &p, 100.0, 1e-8).map_err(err)?;
            for (_, y) in &tr.samples {
                worst = worst.max((y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt());
            }
        }
        Ok((worst < 200.0, format!("max radius {worst:.3}")))
    }),
    ("tpoint", || {
        let r = find_tpoint(&LorenzParams::new(10.0, 30.0, 8.0 / 3.0).map_err(err)?, &TPointConfig::default())
            .map_err(err)?;
        let ok = r.miss.norm() < 1e-6 && (r.params.rho - 30.87).abs() < 0.05 && (r.params.sigma - 10.17).abs() < 0.05;
        Ok((ok, format!("rho {} sigma {} miss {:e}", r.params.rho, r.params.sigma, r.miss.norm())))
    }),
];

const MODEL: &[(&str, CheckFn)] = &[
    ("map_values", || {
        let m = ModelParams::with_r(0.1).map_err(err)?;
        let m0 = ModelParams::with_r(0.0).map_err(err)?;
        let a = interval_map(0.01, &m).map_err(err)?;
        let b = interval_map(1.0, &m0).map_err(err)?;
        Ok(((a + 1.079).abs() < 1e-12 && b == 1.0, format!("f(0.01) = {a}, f_0(1) = {b}")))
    }),
    ("fibre_contraction", || {
        let mp = ModelParams::default();
        let (mut lo, mut hi) = (ReturnMapPoint::alive(0.7, -1.0), ReturnMapPoint::alive(0.7, 1.0));
        for _ in 0..3 {
            lo = return_map(&lo, &mp);
            hi = return_map(&hi, &mp);
        }
        let d = hi.y - lo.y;
        Ok(((d - 2.0 * mp.nu.powi(3)).abs() < 1e-14, format!("diameter {d}")))
    }),
    ("full_shift", || {
        let mp = ModelParams::default();
        let mut xs = Vec::new();
        for bits in 0u32..64 {
            let s: String = (0..6).map(|i| if bits >> i & 1 == 1 { 'R' } else { 'L' }).collect();
            let w: LorenzWord = s.parse().map_err(err)?;
            let p = periodic_orbit_from_word(&w, &mp);
            if itinerary(&p, 6, &mp) != w.letters() {
                return Ok((false, format!("{w} not realized")));
            }
            xs.push(p.x);
        }
        xs.sort_by(f64::total_cmp);
        let distinct = xs.windows(2).all(|v| v[1] - v[0] > 1e-9);
        Ok((distinct, "64 words of length 6".into()))
    }),
    ("laps_near_zero", || {
        let mp = ModelParams::with_r(-1e-4).map_err(err)?;
        let ok = (1..=10).all(|n| lap_number(&mp, n) == 1 << n);
        Ok((ok, "2^n branches for n <= 10 at r = -1e-4".into()))
    }),
    ("regime_flip", || {
        let at = |r: f64| -> Result<Regime, String> {
            Ok(classify_regime(&ModelParams::with_r(r).map_err(err)?, 12).map_err(err)?.regime)
        };
        let (a, b, c) = (at(-1e-6)?, at(0.0)?, at(1e-6)?);
        let ok = a == Regime::LorenzAttractor && b == Regime::BoundaryHeteroclinic && c == Regime::FakeHorseshoe;
        Ok((ok, format!("{a:?} / {b:?} / {c:?}")))
    }),
    ("entropy", || {
        let h = entropy_estimate(&ModelParams::default(), 16);
        Ok(((h - 2f64.ln()).abs() < 0.01, format!("{h}")))
    }),
];

const MODULAR: &[(&str, CheckFn)] = &[
    ("representation", || {
        let mut ok = true;
        for l in [0.0, 0.3, 1.0] {
            let r = build_representation(l).map_err(err)?;
            ok &= r.a.mul(&r.a).proj_eq(&trefoil_core::hyperbolic::Matrix2::IDENTITY, 1e-10);
            ok &= r.b.pow(3).proj_eq(&trefoil_core::hyperbolic::Matrix2::IDENTITY, 1e-10);
            ok &= ((r.h().trace().abs() / 2.0).acosh() * 2.0 - l).abs() < 1e-9;
        }
        Ok((ok, "a^2 = b^3 = 1, translation length of ab = l".into()))
    }),
    ("corner_angles", || {
        let sec = section_geometry(&build_representation(0.5).map_err(err)?).map_err(err)?;
        let mut margin = f64::INFINITY;
        for k in 1..40 {
            let x = sec.trim * (k as f64 / 20.0 - 1.0);
            let b = theta_bounds(&sec, x).map_err(err)?;
            margin = margin.min(b.theta0_u - b.theta0_s).min(b.theta1_s - b.theta1_u);
        }
        Ok((margin > 1e-6, format!("smallest gap {margin:e}")))
    }),
    ("periodic_words", || {
        let rep = build_representation(0.5).map_err(err)?;
        let sec = section_geometry(&rep).map_err(err)?;
        for w in ["LR", "LLR", "LRR", "LRLRR"] {
            let w: LorenzWord = w.parse().map_err(err)?;
            let seed = periodic_seed(&rep, &sec, &w).map_err(err)?;
            let steps = orbit(&rep, &sec, &seed.point, w.len(), 50.0).map_err(err)?;
            let got = LorenzWord::new(steps.iter().map(|s| s.letter).collect()).map_err(err)?;
            let time: f64 = steps.iter().map(|s| s.time).sum();
            if !got.cyclically_equal(&w) || (time - seed.length).abs() > 1e-8 {
                return Ok((false, format!("{w} -> {got}, time {time} vs {}", seed.length)));
            }
        }
        Ok((true, "itineraries and return times match".into()))
    }),
    ("two_leaves", || {
        let rep = build_representation(0.6).map_err(err)?;
        let sec = section_geometry(&rep).map_err(err)?;
        let seed = periodic_seed(&rep, &sec, &"LLR".parse().map_err(err)?).map_err(err)?;
        let z = sec.frame(&seed.point).map_err(err)?.backward_endpoint();
        let r = verify_two_leaf_image(&rep, &sec, z, 32).map_err(err)?;
        Ok((r.passed, format!("{} clusters, dispersion {:e}", r.clusters.len(), r.max_dispersion)))
    }),
];

const KNOTS: &[(&str, CheckFn)] = &[
    ("textbook_knots", || {
        let tre = KnotDiagram::from_pd(&[[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]], &[1, 1, 1]).map_err(err)?;
        let fig8 = KnotDiagram::from_pd(&[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]], &[1, 1, -1, -1])
            .map_err(err)?;
        let a = alexander_from_diagram(&tre).map_err(err)?;
        let f = alexander_from_diagram(&fig8).map_err(err)?;
        let w: LorenzWord = "LRLRR".parse().map_err(err)?;
        let b = alexander_from_braid(&lorenz_braid(&w).map_err(err)?).map_err(err)?;
        let ok = a == AlexanderPoly::trefoil() && b == AlexanderPoly::trefoil() && f == AlexanderPoly::from_i64(&[1, -3, 1]);
        Ok((ok, format!("trefoil {a}; figure-eight {f}; LRLRR {b}")))
    }),
    ("braid_vs_diagram", || {
        let mut n_checked = 0;
        for strands in 2..=4usize {
            let g = strands - 1;
            for len in 0..=6u32 {
                for mut code in 0..g.pow(len) {
                    let word: Vec<usize> = (0..len).map(|_| { let d = code % g; code /= g; d + 1 }).collect();
                    let b = Braid::new(strands, word).map_err(err)?;
                    if b.components() != 1 {
                        continue;
                    }
                    let x = alexander_from_braid(&b).map_err(err)?;
                    let y = alexander_from_diagram(&KnotDiagram::from_braid(&b, true)).map_err(err)?;
                    if x != y || !x.unit_at_one() || !x.is_palindromic() {
                        return Ok((false, format!("{:?}: {x} vs {y}", b.word)));
                    }
                    n_checked += 1;
                }
            }
        }
        Ok((true, format!("{n_checked} closures")))
    }),
    ("torus_genus", || {
        let ok = (0..=4usize).all(|k| {
            let b = Braid::new(2, vec![1; 2 * k + 1]).expect("valid braid");
            genus_positive_braid(&b).ok() == Some(k as i64)
                && seifert_genus(&KnotDiagram::from_braid(&b, true)).ok() == Some(k as i64)
        });
        Ok((ok, "sigma_1^(2k+1), k <= 4".into()))
    }),
    ("matrix_words", || {
        let w: LorenzWord = "LLRLRRLR".parse().map_err(err)?;
        let m = word_to_matrix(&w);
        let ok = m.det() == 1 && (0..w.len()).all(|k| word_to_matrix(&w.rotate(k)).trace() == m.trace());
        Ok((ok, format!("trace {}", m.trace())))
    }),
];

const GHYS: &[(&str, CheckFn)] = &[("word_agreement", || {
    let rep = build_representation(0.5).map_err(err)?;
    let sec = section_geometry(&rep).map_err(err)?;
    let mp = ModelParams::default();
    let words: Vec<LorenzWord> = (2..=6).flat_map(primitive_words).filter(|w| w.is_mixed()).collect();
    let mut bad = Vec::new();
    for w in &words {
        if !ghys_word_check(w, &rep, &sec, &mp).map_err(err)?.agree {
            bad.push(w.to_string());
        }
    }
    Ok((bad.is_empty(), format!("{} words, disagreeing {bad:?}", words.len())))
})];
