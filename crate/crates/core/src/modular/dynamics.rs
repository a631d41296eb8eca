//! First return to the section, symbolic itineraries, periodic orbits seeded
//! from word axes, and the images of stable and unstable leaves.

use serde::{Deserialize, Serialize};

use super::{CrossSection, ModularError, Representation, SectionPoint};
use crate::hyperbolic::{axis, closed_geodesic_length, Boundary, HyperbolicFrame, Matrix2};
use crate::knots::{Letter, LorenzWord};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnStep {
    pub point: SectionPoint,
    pub letter: Letter,
    pub time: f64,
    /// Element pulling the exit point back onto l₀.
    pub reidentification: Matrix2,
}

const CORNER_TOL: f64 = 1e-12;

/// Time at which the orbit leaves D₃ through the given side, if before tmax.
/// A geodesic meets another at most once, so a side is crossed before tmax
/// exactly when the point at tmax is on its far side.
fn crossing_time(g: &HyperbolicFrame, side: &crate::hyperbolic::GeodesicLine, inside: f64, tmax: f64) -> Result<Option<f64>, ModularError> {
    let out = |t: f64| -> Result<bool, ModularError> { Ok(side.side(g.flow(t)?.base_point()) * inside < 0.0) };
    if !out(tmax)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, tmax);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if out(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

fn check_point(sec: &CrossSection, pt: &SectionPoint) -> Result<(), ModularError> {
    if sec.ideal {
        return Err(ModularError::Cusped);
    }
    if (pt.x.abs() - sec.trim).abs() <= CORNER_TOL {
        return Err(ModularError::DegenerateCorner(pt.x));
    }
    if !(pt.x.abs() < sec.trim && pt.theta > 0.0 && pt.theta < std::f64::consts::PI) {
        return Err(ModularError::OutsideSection { x: pt.x, theta: pt.theta });
    }
    Ok(())
}

/// Flows from pt until it leaves the hexagon D₃. Leaving through l₁ = b·l₀
/// is the letter R and through l₂ = b²·l₀ the letter L; the exit point is
/// pulled back by ab⁻¹ or ab⁻² so it re-enters through l₀. Leaving through a
/// lift of the boundary geodesic is reported as wandering.
pub fn first_return(rep: &Representation, sec: &CrossSection, pt: &SectionPoint, tmax: f64) -> Result<ReturnStep, ModularError> {
    check_point(sec, pt)?;
    let g = sec.frame(pt)?;
    let mut best: Option<(f64, usize)> = None;
    for (k, (side, inside)) in sec.sides().iter().enumerate() {
        if let Some(t) = crossing_time(&g, side, *inside, tmax)? {
            if best.is_none_or(|(bt, _)| t < bt) {
                best = Some((t, k));
            }
        }
    }
    let (time, k) = best.ok_or(ModularError::Timeout(tmax))?;
    let binv = rep.b.inv();
    let (letter, reid) = match k {
        0 => (Letter::R, rep.a.mul(&binv)),
        1 => (Letter::L, rep.a.mul(&binv).mul(&binv)),
        _ => return Err(ModularError::Wandering { side: k - 2, time }),
    };
    let exit = g.flow(time)?.translate(&reid);
    Ok(ReturnStep { point: sec.coords(&exit), letter, time, reidentification: reid })
}

/// n successive returns.
pub fn orbit(rep: &Representation, sec: &CrossSection, pt: &SectionPoint, n: usize, tmax: f64) -> Result<Vec<ReturnStep>, ModularError> {
    let mut out = Vec::with_capacity(n);
    let mut p = *pt;
    for _ in 0..n {
        let s = first_return(rep, sec, &p, tmax)?;
        p = s.point;
        out.push(s);
    }
    Ok(out)
}

pub fn itinerary(rep: &Representation, sec: &CrossSection, pt: &SectionPoint, n: usize) -> Result<Vec<Letter>, ModularError> {
    Ok(orbit(rep, sec, pt, n, 50.0)?.into_iter().map(|s| s.letter).collect())
}

/// Total flow time until the orbit of pt wanders into the funnel, if that
/// happens within `tmax`.
pub fn wandering_time(rep: &Representation, sec: &CrossSection, pt: &SectionPoint, tmax: f64) -> Result<Option<f64>, ModularError> {
    let mut p = *pt;
    let mut total = 0.0;
    while total < tmax {
        match first_return(rep, sec, &p, tmax - total) {
            Ok(s) => {
                total += s.time;
                p = s.point;
            }
            Err(ModularError::Wandering { time, .. }) => return Ok(Some(total + time)),
            Err(ModularError::Timeout(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// A section point on the closed geodesic of a word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSeed {
    pub point: SectionPoint,
    /// Rotation of the word whose axis met the section.
    pub rotation: usize,
    /// Hyperbolic element whose axis passes through the seed.
    pub matrix: Matrix2,
    pub length: f64,
}

/// Intersects the axis of M_w (or of a cyclic rotation) with l₀; if the
/// axis crosses l₀ outward the point is moved by a, which reverses l₀.
pub fn periodic_seed(rep: &Representation, sec: &CrossSection, w: &LorenzWord) -> Result<PeriodicSeed, ModularError> {
    if !w.is_mixed() {
        return Err(ModularError::NoSeed);
    }
    for k in 0..w.len() {
        let rot = w.rotate(k);
        let m = rep.word_matrix(rot.letters());
        let ax = axis(&m)?;
        let Some(z) = sec.l0.intersection(&ax) else { continue };
        let g = ax.frame_at(z)?;
        let mut pt = sec.coords(&g);
        let mut mat = m;
        if pt.theta < 0.0 {
            pt = sec.coords(&g.translate(&rep.a));
            mat = rep.a.mul(&m).mul(&rep.a.inv());
        }
        if pt.x.abs() < sec.trim {
            let length = closed_geodesic_length(&m)?;
            return Ok(PeriodicSeed { point: pt, rotation: k, matrix: mat, length });
        }
    }
    Err(ModularError::NoSeed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Leaf {
    /// Directions leaving the given backward endpoint.
    Unstable(Boundary),
    /// Directions heading to the given forward endpoint.
    Stable(Boundary),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafCluster {
    pub endpoint: Boundary,
    pub dispersion: f64,
    pub count: usize,
    pub letters: Vec<Letter>,
    /// x′ strictly increasing in x along the cluster.
    pub orientation_preserved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafImageReport {
    pub leaf: Leaf,
    pub x_range: (f64, f64),
    pub samples: usize,
    pub wandering: usize,
    pub clusters: Vec<LeafCluster>,
    pub max_dispersion: f64,
    pub orientation_preserved: bool,
    pub passed: bool,
}

fn leaf_theta(sec: &CrossSection, leaf: &Leaf, x: f64) -> Result<f64, ModularError> {
    match *leaf {
        Leaf::Unstable(a) => sec.theta_from(x, a),
        Leaf::Stable(b) => sec.theta_towards(x, b),
    }
}

fn circle_angle(b: Boundary) -> f64 {
    match b {
        Boundary::Infinity => std::f64::consts::PI,
        Boundary::Real(x) => 2.0 * x.atan(),
    }
}

/// Samples m points of the leaf inside the forward band of the section,
/// returns each once and groups the images by the endpoint that defines the
/// image leaf.
pub fn leaf_image(rep: &Representation, sec: &CrossSection, leaf: Leaf, m: usize) -> Result<LeafImageReport, ModularError> {
    if sec.ideal {
        return Err(ModularError::Cusped);
    }
    // x-range of the leaf inside the band, on a fine grid
    let grid = 4000;
    let mut range: Option<(f64, f64)> = None;
    for k in 1..grid {
        let x = sec.trim * (-1.0 + 2.0 * k as f64 / grid as f64);
        let th = leaf_theta(sec, &leaf, x)?;
        let tb = super::theta_bounds(sec, x)?;
        let (lo, hi) = tb.forward_band();
        if th > lo && th < hi && th > 0.0 && th < std::f64::consts::PI {
            range = Some(range.map_or((x, x), |(a, _)| (a, x)));
        }
    }
    let (x0, x1) = range.ok_or(ModularError::OutsideSection { x: f64::NAN, theta: f64::NAN })?;
    let mut images = Vec::new();
    let mut wandering = 0;
    for k in 0..m {
        let x = x0 + (k as f64 + 0.5) * (x1 - x0) / m as f64;
        let pt = SectionPoint { x, theta: leaf_theta(sec, &leaf, x)? };
        match first_return(rep, sec, &pt, 50.0) {
            Ok(s) => {
                let g = sec.frame(&s.point)?;
                let end = match leaf {
                    Leaf::Unstable(_) => g.backward_endpoint(),
                    Leaf::Stable(_) => g.forward_endpoint(),
                };
                images.push((x, s, end));
            }
            Err(ModularError::Wandering { .. }) => wandering += 1,
            Err(e) => return Err(e),
        }
    }
    images.sort_by(|a, b| circle_angle(a.2).total_cmp(&circle_angle(b.2)));
    let mut groups: Vec<Vec<(f64, ReturnStep, Boundary)>> = Vec::new();
    for im in images {
        match groups.last_mut() {
            Some(gr) if (circle_angle(im.2) - circle_angle(gr.last().unwrap().2)).abs() < 1e-6 => gr.push(im),
            _ => groups.push(vec![im]),
        }
    }
    // the circle wraps at ±π (the point at infinity)
    if groups.len() > 1 {
        let first = circle_angle(groups[0][0].2);
        let last = circle_angle(groups.last().unwrap().last().unwrap().2);
        if (first + std::f64::consts::TAU - last).abs() < 1e-6 {
            let tail = groups.pop().unwrap();
            groups[0].extend(tail);
        }
    }
    let clusters: Vec<LeafCluster> = groups
        .into_iter()
        .map(|mut gr| {
            let vals: Vec<f64> = gr.iter().filter_map(|g| g.2.real()).collect();
            let dispersion = if vals.len() == gr.len() {
                let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            } else if vals.is_empty() {
                0.0
            } else {
                f64::INFINITY
            };
            gr.sort_by(|a, b| a.0.total_cmp(&b.0));
            let orientation_preserved = gr.windows(2).all(|w| w[1].1.point.x > w[0].1.point.x);
            let mut letters: Vec<Letter> = gr.iter().map(|g| g.1.letter).collect();
            letters.sort();
            letters.dedup();
            LeafCluster { endpoint: gr[0].2, dispersion, count: gr.len(), letters, orientation_preserved }
        })
        .collect();
    let max_dispersion = clusters.iter().map(|c| c.dispersion).fold(0.0, f64::max);
    let orientation_preserved = clusters.iter().all(|c| c.orientation_preserved);
    Ok(LeafImageReport {
        leaf,
        x_range: (x0, x1),
        samples: m,
        wandering,
        clusters,
        max_dispersion,
        orientation_preserved,
        passed: false,
    })
}

/// An unstable leaf returns as exactly two unstable leaves, each with the
/// orientation of x preserved. With fewer than two samples nothing is
/// asserted.
pub fn verify_two_leaf_image(rep: &Representation, sec: &CrossSection, backward_endpoint: Boundary, m: usize) -> Result<LeafImageReport, ModularError> {
    if rep.l <= 0.0 {
        return Err(ModularError::Cusped);
    }
    let mut r = leaf_image(rep, sec, Leaf::Unstable(backward_endpoint), m)?;
    r.passed = m < 2 || (r.clusters.len() == 2 && r.max_dispersion < 1e-8 && r.orientation_preserved);
    Ok(r)
}

/// CSV rows `x,theta,x',theta',letter,time`.
pub fn return_map_csv(rows: &[(SectionPoint, ReturnStep)]) -> String {
    let mut s = String::from("x,theta,x',theta',letter,time\n");
    for (p, r) in rows {
        s.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}\n",
            p.x,
            p.theta,
            r.point.x,
            r.point.theta,
            r.letter.as_char(),
            r.time
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::super::{build_representation, section_geometry, theta_bounds};
    use super::*;

    fn setup(l: f64) -> (Representation, CrossSection) {
        let rep = build_representation(l).unwrap();
        let sec = section_geometry(&rep).unwrap();
        (rep, sec)
    }

    #[test]
    fn periodic_words_return_with_their_letters() {
        let (rep, sec) = setup(0.5);
        for w in ["LR", "LLR", "LRR", "RLLRL", "LLLRR", "LRLRR"] {
            let w: LorenzWord = w.parse().unwrap();
            let seed = periodic_seed(&rep, &sec, &w).unwrap();
            let steps = orbit(&rep, &sec, &seed.point, w.len(), 50.0).unwrap();
            let word = LorenzWord::new(steps.iter().map(|s| s.letter).collect()).unwrap();
            assert!(word.cyclically_equal(&w), "{w} -> {word}");
            let total: f64 = steps.iter().map(|s| s.time).sum();
            assert!((total - seed.length).abs() < 1e-8);
            let back = steps.last().unwrap().point;
            assert!((back.x - seed.point.x).abs() < 1e-8 && (back.theta - seed.point.theta).abs() < 1e-8);
        }
    }

    #[test]
    fn corner_and_cusp_are_refused() {
        let (rep, sec) = setup(0.5);
        let corner = SectionPoint { x: sec.trim, theta: 1.0 };
        assert!(matches!(first_return(&rep, &sec, &corner, 50.0), Err(ModularError::DegenerateCorner(_))));
        let (rep0, sec0) = setup(0.0);
        let p = SectionPoint { x: 0.0, theta: 1.0 };
        assert_eq!(first_return(&rep0, &sec0, &p, 50.0), Err(ModularError::Cusped));
    }

    #[test]
    fn outside_the_forward_band_wanders() {
        let (rep, sec) = setup(0.5);
        let tb = theta_bounds(&sec, 0.1).unwrap();
        for theta in [0.5 * tb.theta0_s, 0.5 * (tb.theta1_s + std::f64::consts::PI)] {
            let p = SectionPoint { x: 0.1, theta };
            let t = wandering_time(&rep, &sec, &p, 50.0).unwrap();
            assert!(t.is_some_and(|t| t < 50.0));
        }
    }

    #[test]
    fn periodic_orbits_stay_in_the_band() {
        let (rep, sec) = setup(0.5);
        for w in ["LR", "LLRLR", "LRRRLLR", "LLLLLLR", "RRRRRRL"] {
            let w: LorenzWord = w.parse().unwrap();
            let seed = periodic_seed(&rep, &sec, &w).unwrap();
            let steps = orbit(&rep, &sec, &seed.point, w.len(), 50.0).unwrap();
            for s in &steps {
                let tb = theta_bounds(&sec, s.point.x).unwrap();
                assert!(tb.contains(s.point.theta));
                assert!(s.time > 0.1);
            }
        }
    }

    #[test]
    fn two_leaves() {
        let (rep, sec) = setup(0.5);
        let seed = periodic_seed(&rep, &sec, &"LR".parse().unwrap()).unwrap();
        let z0 = sec.frame(&seed.point).unwrap().backward_endpoint();
        let r = verify_two_leaf_image(&rep, &sec, z0, 64).unwrap();
        assert!(r.passed, "{r:?}");
        let one = verify_two_leaf_image(&rep, &sec, z0, 1).unwrap();
        assert!(one.passed);
    }
}
