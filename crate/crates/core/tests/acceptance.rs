//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! run with `cargo test -p trefoil-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use trefoil_core::knots::braid::{alexander_from_braid, genus_positive_braid, Braid};
use trefoil_core::knots::{
    alexander_from_diagram, ghys_word_check, polyline_to_diagram, primitive_words, seifert_genus, AlexanderPoly,
    KnotDiagram, LorenzWord, ProjectionConfig,
};
use trefoil_core::lorenz::{
    assemble_trefoil, eigen_origin, find_tpoint, hopf_crossing_detector, hopf_threshold, LorenzParams, TPointConfig,
    TrefoilConfig,
};
use trefoil_core::model::{
    classify_regime, entropy_estimate, horseshoe_markov, itinerary, periodic_orbit_from_word, ModelParams, Regime,
};
use trefoil_core::modular::{build_representation, periodic_seed, section_geometry, verify_two_leaf_image};

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(n: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    println!(
        "criterion {n} [{}] {name}: {} ({:.2?})",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        t.elapsed()
    );
    o.pass
}

fn tpoint() -> Outcome {
    let t = Instant::now();
    let start = LorenzParams::new(10.0, 30.0, 8.0 / 3.0).unwrap();
    match find_tpoint(&start, &TPointConfig::default()) {
        Ok(r) => {
            let miss = r.miss.norm();
            let pass = miss < 1e-6
                && (r.params.rho - 30.87).abs() < 0.05
                && (r.params.sigma - 10.17).abs() < 0.05
                && t.elapsed() < Duration::from_secs(300);
            Outcome {
                pass,
                detail: format!("rho* = {:.10}, sigma* = {:.10}, |miss| = {:.3e}", r.params.rho, r.params.sigma, miss),
            }
        }
        Err(e) => Outcome { pass: false, detail: format!("search failed: {e}") },
    }
}

fn trefoil() -> Outcome {
    let t = Instant::now();
    let start = LorenzParams::new(10.0, 30.0, 8.0 / 3.0).unwrap();
    let p = match find_tpoint(&start, &TPointConfig::default()) {
        Ok(r) => r.params,
        Err(e) => return Outcome { pass: false, detail: format!("no T-point: {e}") },
    };
    let dirs = [[0.3, 0.5, 0.8], [1.0, 0.2, -0.1], [-0.4, 0.9, 0.3]];
    let mut found = Vec::new();
    for r_infinity in [500.0, 1000.0] {
        let cfg = TrefoilConfig { r_infinity, ..Default::default() };
        let curve = match assemble_trefoil(&p, &cfg) {
            Ok(c) => c,
            Err(e) => return Outcome { pass: false, detail: format!("R = {r_infinity}: {e}") },
        };
        for d in dirs {
            let pc = ProjectionConfig { direction: Some(d), ..Default::default() };
            let poly = polyline_to_diagram(&curve, &pc).and_then(|dg| alexander_from_diagram(&dg));
            found.push((r_infinity, d, poly));
        }
    }
    let pass = found.iter().all(|(_, _, a)| a.as_ref().ok() == Some(&AlexanderPoly::trefoil()))
        && t.elapsed() < Duration::from_secs(60);
    let polys: Vec<String> = found
        .iter()
        .map(|(r, _, a)| match a {
            Ok(a) => format!("R={r}: {a}"),
            Err(e) => format!("R={r}: {e}"),
        })
        .collect();
    Outcome { pass, detail: polys.join("; ") }
}

fn eigenvalues() -> Outcome {
    let s = eigen_origin(&LorenzParams::classical());
    let pass = (s.lambda1 - 11.8277).abs() < 1e-3
        && s.lambda2 == -8.0 / 3.0
        && (s.lambda3 + 22.8277).abs() < 1e-3
        && s.geometric_ordering;
    Outcome {
        pass,
        detail: format!("lambda = ({:.6}, {:.6}, {:.6}), ordering {}", s.lambda1, s.lambda2, s.lambda3, s.geometric_ordering),
    }
}

fn hopf() -> Outcome {
    let beta = 8.0 / 3.0;
    match (hopf_threshold(10.0, beta), hopf_crossing_detector(10.0, beta, 1e-12)) {
        (Ok(closed), Ok(detected)) => Outcome {
            pass: (closed - 470.0 / 19.0).abs() < 1e-12 && (closed - detected).abs() < 1e-6,
            detail: format!("closed form {closed:.12}, bisection {detected:.12}"),
        },
        (a, b) => Outcome { pass: false, detail: format!("{a:?} {b:?}") },
    }
}

fn all_words(n: usize) -> Vec<LorenzWord> {
    (0u32..1 << n)
        .map(|bits| {
            let s: String = (0..n).map(|i| if bits >> i & 1 == 1 { 'R' } else { 'L' }).collect();
            s.parse().unwrap()
        })
        .collect()
}

fn horseshoe() -> Outcome {
    let t = Instant::now();
    let mp = ModelParams::with_r(0.1).unwrap();
    let hs = match horseshoe_markov(&mp) {
        Ok(h) => h,
        Err(e) => return Outcome { pass: false, detail: format!("{e}") },
    };
    let all_ones = hs.transition == [[1, 1], [1, 1]];
    let oriented = hs.unstable_orientation_preserved && hs.stable_orientation_preserved;

    let words = all_words(8);
    let pts: Vec<_> = words.iter().map(|w| periodic_orbit_from_word(w, &mp)).collect();
    let realized = words.iter().zip(&pts).all(|(w, p)| {
        let it = itinerary(p, 16, &mp);
        it.len() == 16 && it[..8] == *w.letters() && it[8..] == *w.letters()
    });
    let mut xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let distinct = xs.len();

    let h = entropy_estimate(&mp, 16);
    let entropy_ok = (h - 2f64.ln()).abs() < 0.01;

    let regime = |r: f64| classify_regime(&ModelParams::with_r(r).unwrap(), 16).map(|rep| rep.regime);
    let flips = regime(1e-6) == Ok(Regime::FakeHorseshoe)
        && regime(-1e-6) == Ok(Regime::LorenzAttractor)
        && regime(0.0) == Ok(Regime::BoundaryHeteroclinic);

    let pass = all_ones && oriented && realized && distinct == 256 && entropy_ok && flips
        && t.elapsed() < Duration::from_secs(30);
    Outcome {
        pass,
        detail: format!(
            "transition {:?}, orientations {oriented}, {distinct}/256 distinct orbits (itineraries ok: {realized}), entropy {h:.6} vs log 2, flips at 0: {flips}",
            hs.transition
        ),
    }
}

fn word_agreement() -> Outcome {
    let t = Instant::now();
    let rep = build_representation(0.5).unwrap();
    let sec = section_geometry(&rep).unwrap();
    let mp = ModelParams::default();
    let words: Vec<LorenzWord> = (2..=6).flat_map(primitive_words).filter(|w| w.is_mixed()).collect();
    let results: Vec<(String, bool)> = words
        .par_iter()
        .map(|w| {
            let ok = ghys_word_check(w, &rep, &sec, &mp).map(|r| r.agree).unwrap_or(false);
            (w.to_string(), ok)
        })
        .collect();
    let bad: Vec<&str> = results.iter().filter(|(_, ok)| !ok).map(|(w, _)| w.as_str()).collect();
    Outcome {
        pass: words.len() == 21 && bad.is_empty() && t.elapsed() < Duration::from_secs(600),
        detail: format!("{} cyclic classes checked, disagreeing: {bad:?}", words.len()),
    }
}

fn two_leaves() -> Outcome {
    let words: Vec<LorenzWord> =
        (2..=5).flat_map(primitive_words).filter(|w| w.is_mixed()).take(10).collect();
    let mut lines = Vec::new();
    let mut pass = words.len() == 10;
    for l in [0.3, 0.6, 1.0] {
        let rep = build_representation(l).unwrap();
        let sec = section_geometry(&rep).unwrap();
        let mut worst = 0.0f64;
        let mut passed = 0;
        for w in &words {
            let r = periodic_seed(&rep, &sec, w)
                .and_then(|s| sec.frame(&s.point))
                .and_then(|f| verify_two_leaf_image(&rep, &sec, f.backward_endpoint(), 32));
            if let Ok(r) = r {
                worst = worst.max(r.max_dispersion);
                passed += usize::from(r.passed && r.max_dispersion < 1e-8);
            }
        }
        pass &= passed == words.len();
        lines.push(format!("l={l}: {passed}/10 leaves, max dispersion {worst:.2e}"));
    }
    Outcome { pass, detail: lines.join("; ") }
}

fn positive_braids(strands: usize, max_len: usize) -> Vec<Braid> {
    let g = strands - 1;
    let mut out = Vec::new();
    for len in 0..=max_len {
        let total = g.pow(len as u32);
        for mut code in 0..total {
            let word = (0..len)
                .map(|_| {
                    let d = code % g;
                    code /= g;
                    d + 1
                })
                .collect();
            out.push(Braid::new(strands, word).unwrap());
        }
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let braids: Vec<Braid> = (2..=5)
        .flat_map(|n| positive_braids(n, 8))
        .filter(|b| b.components() == 1)
        .collect();
    let mismatches: Vec<String> = braids
        .par_iter()
        .filter_map(|b| {
            let by_braid = alexander_from_braid(b);
            let by_diagram = alexander_from_diagram(&KnotDiagram::from_braid(b, true));
            match (by_braid, by_diagram) {
                (Ok(x), Ok(y)) if x == y => None,
                (x, y) => Some(format!("{:?}: {x:?} vs {y:?}", b.word)),
            }
        })
        .collect();
    let genus_ok = (0..=4).all(|k| {
        let b = Braid::new(2, vec![1; 2 * k + 1]).unwrap();
        let d = KnotDiagram::from_braid(&b, true);
        genus_positive_braid(&b).ok() == Some(k as i64) && seifert_genus(&d).ok() == Some(k as i64)
    });
    Outcome {
        pass: mismatches.is_empty() && genus_ok,
        detail: format!(
            "{} knotted closures compared, {} mismatches{}, genus formula on torus knots: {genus_ok}",
            braids.len(),
            mismatches.len(),
            mismatches.first().map(|m| format!(" (first {m})")).unwrap_or_default()
        ),
    }
}

#[test]
fn acceptance() {
    let results = [
        report(1, "T-point recovery", tpoint),
        report(2, "trefoil certification", trefoil),
        report(3, "eigenvalue ordering", eigenvalues),
        report(4, "Hopf threshold", hopf),
        report(5, "fake horseshoe at r = 0.1", horseshoe),
        report(6, "modular and model word agreement", word_agreement),
        report(7, "two-leaf return property", two_leaves),
        report(8, "braid and diagram oracle equivalence", oracle_equivalence),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
