//! The geometric-model family X_r through its section map: an odd, piecewise
//! affine expanding map f_r of [−1, 1] with a discontinuity at 0, skewed with
//! a vertical contraction.
//!
//! f_r(x) = μ(r)·x − 1 − r for x > 0, μ(r) = 2 + r + min(0, r), extended as an
//! odd map; y′ = ν·y + sign(x)·δ.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::knots::{Letter, LorenzWord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("x = 0 lies on the discontinuity")]
    OnDiscontinuity,
    #[error("depth {0} exceeds the limit {1}")]
    TooDeep(usize, usize),
    #[error("horseshoe requires r > 0, got {0}")]
    NotHorseshoe(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub r: f64,
    pub nu: f64,
    pub delta: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { r: 0.1, nu: 0.3, delta: 0.6 }
    }
}

impl ModelParams {
    pub fn new(r: f64, nu: f64, delta: f64) -> Result<Self, ModelError> {
        let p = Self { r, nu, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn with_r(r: f64) -> Result<Self, ModelError> {
        Self::new(r, 0.3, 0.6)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: &str| Err(ModelError::InvalidParams(m.to_string()));
        if !(-0.25..=0.25).contains(&self.r) {
            return bad("r must lie in [-1/4, 1/4]");
        }
        if !(self.nu > 0.0 && self.nu < 0.5) {
            return bad("nu must lie in (0, 1/2)");
        }
        if !(self.nu + self.delta <= 1.0 && self.delta - self.nu >= 0.0) {
            return bad("need nu + delta <= 1 and delta >= nu");
        }
        Ok(())
    }

    /// Expansion rate μ(r) = 2 + r + min(0, r).
    pub fn mu(&self) -> f64 {
        2.0 + self.r + self.r.min(0.0)
    }

    /// Half-width r/μ of the escape gap around 0 (zero for r ≤ 0).
    pub fn gap(&self) -> f64 {
        (self.r / self.mu()).max(0.0)
    }
}

/// f_r(x) for x ≠ 0.
pub fn interval_map(x: f64, mp: &ModelParams) -> Result<f64, ModelError> {
    if x == 0.0 {
        return Err(ModelError::OnDiscontinuity);
    }
    let v = mp.mu() * x.abs() - 1.0 - mp.r;
    Ok(if x > 0.0 { v } else { -v })
}

/// One-sided limits f_r(0⁺) = −1 − r and f_r(0⁻) = 1 + r.
pub fn tips(mp: &ModelParams) -> (f64, f64) {
    (-1.0 - mp.r, 1.0 + mp.r)
}

/// Inverse branch onto x > 0 (`R`) or x < 0 (`L`).
pub fn inverse_branch(x: f64, letter: Letter, mp: &ModelParams) -> f64 {
    match letter {
        Letter::R => (x + 1.0 + mp.r) / mp.mu(),
        Letter::L => (x - 1.0 - mp.r) / mp.mu(),
    }
}

pub fn letter_of(x: f64) -> Option<Letter> {
    if x > 0.0 {
        Some(Letter::R)
    } else if x < 0.0 {
        Some(Letter::L)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Alive,
    EscapedRightSink,
    EscapedLeftSink,
    OnDiscontinuity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnMapPoint {
    pub x: f64,
    pub y: f64,
    pub status: PointStatus,
}

impl ReturnMapPoint {
    pub fn alive(x: f64, y: f64) -> Self {
        Self { x, y, status: PointStatus::Alive }
    }
}

/// One application of the section map. Points that leave [−1, 1] are
/// absorbed by the sink on the side they land on; dead points are returned
/// unchanged.
pub fn return_map(pt: &ReturnMapPoint, mp: &ModelParams) -> ReturnMapPoint {
    if pt.status != PointStatus::Alive {
        return *pt;
    }
    let Ok(x) = interval_map(pt.x, mp) else {
        return ReturnMapPoint { status: PointStatus::OnDiscontinuity, ..*pt };
    };
    let y = mp.nu * pt.y + pt.x.signum() * mp.delta;
    let status = if x > 1.0 {
        PointStatus::EscapedRightSink
    } else if x < -1.0 {
        PointStatus::EscapedLeftSink
    } else {
        PointStatus::Alive
    };
    ReturnMapPoint { x, y, status }
}

/// Letters of pt, f(pt), … while the orbit stays alive (at most n).
pub fn itinerary(pt: &ReturnMapPoint, n: usize, mp: &ModelParams) -> Vec<Letter> {
    let mut out = Vec::with_capacity(n);
    let mut p = *pt;
    for _ in 0..n {
        if p.status != PointStatus::Alive {
            break;
        }
        let Some(l) = letter_of(p.x) else { break };
        out.push(l);
        p = return_map(&p, mp);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    LorenzAttractor,
    BoundaryHeteroclinic,
    FakeHorseshoe,
    Unresolved,
}

/// Chain-recurrent classes of the flow, by kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inventory {
    pub sinks: usize,
    pub sources: usize,
    /// Saddles forming their own classes (periodic or singular).
    pub saddles: usize,
    pub nontrivial_classes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub r: f64,
    pub regime: Regime,
    pub inventory: Option<Inventory>,
    pub witnesses: Vec<String>,
    pub failing_interval: Option<(f64, f64)>,
}

pub const MAX_DEPTH: usize = 24;

/// Merges a list of closed intervals.
fn merge(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Image of a closed interval under f_r, split at the discontinuity.
fn image(a: f64, b: f64, mp: &ModelParams) -> Vec<(f64, f64)> {
    let (tm, tp) = tips(mp);
    let mut out = Vec::new();
    if b > 0.0 {
        let lo = if a > 0.0 { interval_map(a, mp).unwrap() } else { tm };
        out.push((lo, interval_map(b, mp).unwrap()));
    }
    if a < 0.0 {
        let hi = if b < 0.0 { interval_map(b, mp).unwrap() } else { tp };
        out.push((interval_map(a, mp).unwrap(), hi));
    }
    out
}

/// Whether f_rⁿ(I) covers the core [f(0⁺), f(0⁻)] for some n ≤ `max_iter`.
fn eventually_onto(a: f64, b: f64, mp: &ModelParams, max_iter: usize) -> bool {
    let (tm, tp) = tips(mp);
    let mut set = vec![(a, b)];
    for _ in 0..max_iter {
        set = merge(set.iter().flat_map(|&(a, b)| image(a, b, mp)).collect());
        if set.iter().any(|&(a, b)| a <= tm + 1e-12 && b >= tp - 1e-12) {
            return true;
        }
    }
    false
}

/// Survivor set after n steps for r > 0: points whose first n images stay in
/// [−1, 1]. Returned as 2ⁿ closed intervals in increasing order.
pub fn survivor_intervals(mp: &ModelParams, n: usize) -> Vec<(f64, f64)> {
    let mut level = vec![(-1.0, 1.0)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * level.len());
        for l in [Letter::L, Letter::R] {
            for &(a, b) in &level {
                next.push((inverse_branch(a, l, mp), inverse_branch(b, l, mp)));
            }
        }
        next.sort_by(|a, b| a.0.total_cmp(&b.0));
        level = next;
    }
    level
}

/// Number of maximal intervals on which f_rⁿ is continuous and monotone,
/// counted on [−1, 1] for r ≤ 0 and on the survivors for r > 0.
pub fn lap_number(mp: &ModelParams, n: usize) -> usize {
    if mp.r > 0.0 {
        // distinct components of the survivor set
        merge(survivor_intervals(mp, n)).len()
    } else {
        lap_count_by_pullback(mp, n)
    }
}

/// Laps of f_rⁿ on [−1, 1]: each lap is tracked through its current image,
/// and splits whenever that image straddles 0.
fn lap_count_by_pullback(mp: &ModelParams, n: usize) -> usize {
    let mut imgs: Vec<(f64, f64)> = image(-1.0, 1.0, mp);
    for _ in 1..n {
        let mut next = Vec::with_capacity(2 * imgs.len());
        for &(a, b) in &imgs {
            if a < 0.0 && b > 0.0 {
                next.extend(image(a, 0.0, mp));
                next.extend(image(0.0, b, mp));
            } else {
                next.extend(image(a, b, mp));
            }
        }
        imgs = next;
    }
    imgs.len()
}

/// Regime classification for X_r from its section map.
pub fn classify_regime(mp: &ModelParams, depth: usize) -> Result<RegimeReport, ModelError> {
    mp.validate()?;
    if depth > MAX_DEPTH {
        return Err(ModelError::TooDeep(depth, MAX_DEPTH));
    }
    let r = mp.r;
    let (tm, tp) = tips(mp);
    let mut witnesses = Vec::new();
    if r < 0.0 {
        let f1 = interval_map(1.0, mp)?;
        let inside = tm > -1.0 && tp < 1.0 && f1 < 1.0 && f1 > -1.0;
        witnesses.push(format!("f(0+) = {tm}, f(0-) = {tp}, f(1) = {f1}: image inside (-1, 1) = {inside}"));
        if !inside {
            return Ok(RegimeReport { r, regime: Regime::Unresolved, inventory: None, witnesses, failing_interval: Some((-1.0, 1.0)) });
        }
        let level = depth.min(12);
        let k = 1usize << level;
        let h = 2.0 / k as f64;
        for j in 0..k {
            let (a, b) = (-1.0 + j as f64 * h, -1.0 + (j + 1) as f64 * h);
            if !eventually_onto(a, b, mp, 64) {
                return Ok(RegimeReport { r, regime: Regime::Unresolved, inventory: None, witnesses, failing_interval: Some((a, b)) });
            }
        }
        witnesses.push(format!("all {k} dyadic intervals of length {h} are eventually onto the core [{tm}, {tp}]"));
        let xs = (1.0 + r) / (mp.mu() - 1.0);
        witnesses.push(format!(
            "branch fixed points +-{xs} lie outside [-1, 1]; the periodic saddles are not on this section"
        ));
        return Ok(RegimeReport {
            r,
            regime: Regime::LorenzAttractor,
            inventory: Some(Inventory { sinks: 2, sources: 1, saddles: 2, nontrivial_classes: 1 }),
            witnesses,
            failing_interval: None,
        });
    }
    if r == 0.0 {
        let f1 = interval_map(1.0, mp)?;
        let ok = tm == -1.0 && tp == 1.0 && f1 == 1.0;
        witnesses.push(format!("f(0+) = {tm} (corner -1), f(0-) = {tp} (corner 1), f(1) = {f1}"));
        let regime = if ok { Regime::BoundaryHeteroclinic } else { Regime::Unresolved };
        return Ok(RegimeReport {
            r,
            regime,
            inventory: ok.then_some(Inventory { sinks: 2, sources: 1, saddles: 0, nontrivial_classes: 1 }),
            witnesses,
            failing_interval: None,
        });
    }
    // r > 0
    let g = mp.gap();
    let samples = 1000;
    for k in 1..samples {
        let x = g * k as f64 / samples as f64;
        for s in [x, -x] {
            let p = return_map(&ReturnMapPoint::alive(s, 0.0), mp);
            if p.status == PointStatus::Alive {
                return Ok(RegimeReport { r, regime: Regime::Unresolved, inventory: None, witnesses, failing_interval: Some((-g, g)) });
            }
        }
    }
    witnesses.push(format!("gap (-{g}, {g}) escapes in one step"));
    let level = depth.min(16);
    let surv = survivor_intervals(mp, level);
    let comps = merge(surv.clone()).len();
    let total: f64 = surv.iter().map(|(a, b)| b - a).sum();
    let cantor = comps == 1 << level;
    witnesses.push(format!("level {level}: {comps} survivor intervals, total length {total:e}"));
    let regime = if cantor { Regime::FakeHorseshoe } else { Regime::Unresolved };
    Ok(RegimeReport {
        r,
        regime,
        inventory: cantor.then_some(Inventory { sinks: 2, sources: 1, saddles: 1, nontrivial_classes: 1 }),
        witnesses,
        failing_interval: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorseshoeData {
    /// [x-range, y-range] of the left and right rectangles.
    pub rectangles: [[(f64, f64); 2]; 2],
    pub transition: [[u8; 2]; 2],
    pub unstable_orientation_preserved: bool,
    pub stable_orientation_preserved: bool,
}

/// The two-rectangle Markov partition for r > 0.
pub fn horseshoe_markov(mp: &ModelParams) -> Result<HorseshoeData, ModelError> {
    mp.validate()?;
    if !(mp.r > 0.0) {
        return Err(ModelError::NotHorseshoe(mp.r));
    }
    let g = mp.gap();
    let rects = [[(-1.0, -g), (-1.0, 1.0)], [(g, 1.0), (-1.0, 1.0)]];
    let mut transition = [[0u8; 2]; 2];
    for (i, rect) in rects.iter().enumerate() {
        let (a, b) = rect[0];
        let ia = interval_map(a, mp)?;
        let ib = interval_map(b, mp)?;
        let (lo, hi) = (ia.min(ib), ia.max(ib));
        for (j, target) in rects.iter().enumerate() {
            let (ta, tb) = target[0];
            // full crossing: the x-image contains the target's x-range
            if lo <= ta + 1e-12 && hi >= tb - 1e-12 {
                transition[i][j] = 1;
            }
        }
    }
    // orientation: compare images of two ordered points on each foliation
    let mut unstable = true;
    let mut stable = true;
    for rect in &rects {
        let (a, b) = rect[0];
        let (x0, x1) = (a + 0.25 * (b - a), a + 0.75 * (b - a));
        let p0 = return_map(&ReturnMapPoint::alive(x0, 0.0), mp);
        let p1 = return_map(&ReturnMapPoint::alive(x1, 0.0), mp);
        unstable &= p1.x > p0.x;
        let q0 = return_map(&ReturnMapPoint::alive(x0, -0.5), mp);
        let q1 = return_map(&ReturnMapPoint::alive(x0, 0.5), mp);
        stable &= q1.y > q0.y;
    }
    Ok(HorseshoeData {
        rectangles: rects,
        transition,
        unstable_orientation_preserved: unstable,
        stable_orientation_preserved: stable,
    })
}

/// log(laps)/n on the survivors, an estimate of topological entropy.
pub fn entropy_estimate(mp: &ModelParams, n: usize) -> f64 {
    (lap_number(mp, n) as f64).ln() / n as f64
}

/// The periodic point whose itinerary is w repeated, for r > 0.
pub fn periodic_orbit_from_word(w: &LorenzWord, mp: &ModelParams) -> ReturnMapPoint {
    let letters = w.letters();
    let mut x = 0.0;
    for _ in 0..10_000 {
        let nx = letters.iter().rev().fold(x, |acc, &l| inverse_branch(acc, l, mp));
        let done = (nx - x).abs() < 1e-15;
        x = nx;
        if done {
            break;
        }
    }
    let mut y = 0.0;
    for _ in 0..10_000 {
        let ny = letters.iter().fold(y, |acc, &l| {
            mp.nu * acc + if l == Letter::R { mp.delta } else { -mp.delta }
        });
        let done = (ny - y).abs() < 1e-15;
        y = ny;
        if done {
            break;
        }
    }
    ReturnMapPoint::alive(x, y)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KneadingData {
    /// Letters of f(0⁺), f²(0⁺), … while alive.
    pub plus: Vec<Letter>,
    pub minus: Vec<Letter>,
    /// Step at which the orbit of f(0⁺) left [−1, 1], and where it went.
    pub escape_plus: Option<(usize, PointStatus)>,
    pub escape_minus: Option<(usize, PointStatus)>,
    /// An orbit landed exactly on 0.
    pub truncated: bool,
}

pub const MAX_KNEADING: usize = 64;

/// Itineraries of the two one-sided images of the discontinuity.
pub fn kneading(mp: &ModelParams, n: usize) -> Result<KneadingData, ModelError> {
    mp.validate()?;
    if n > MAX_KNEADING {
        return Err(ModelError::TooDeep(n, MAX_KNEADING));
    }
    let (tm, tp) = tips(mp);
    let run = |x0: f64| {
        let mut letters = Vec::new();
        let mut x = x0;
        let mut escape = None;
        let mut truncated = false;
        for step in 0..n {
            if x > 1.0 {
                escape = Some((step, PointStatus::EscapedRightSink));
                break;
            }
            if x < -1.0 {
                escape = Some((step, PointStatus::EscapedLeftSink));
                break;
            }
            let Some(l) = letter_of(x) else {
                truncated = true;
                break;
            };
            letters.push(l);
            x = interval_map(x, mp).unwrap();
        }
        (letters, escape, truncated)
    };
    let (plus, escape_plus, t1) = run(tm);
    let (minus, escape_minus, t2) = run(tp);
    Ok(KneadingData { plus, minus, escape_plus, escape_minus, truncated: t1 || t2 })
}

/// Sampled graph of f_r as CSV `x,fx`.
pub fn graph_csv(mp: &ModelParams, samples: usize) -> String {
    let mut s = String::from("x,fx\n");
    for k in 0..=samples {
        let x = -1.0 + 2.0 * k as f64 / samples as f64;
        if let Ok(fx) = interval_map(x, mp) {
            s.push_str(&format!("{x:.16e},{fx:.16e}\n"));
        }
    }
    s
}

pub fn intervals_csv(iv: &[(f64, f64)]) -> String {
    let mut s = String::from("a,b\n");
    for (a, b) in iv {
        s.push_str(&format!("{a:.16e},{b:.16e}\n"));
    }
    s
}

pub fn periodic_table_csv(rows: &[(LorenzWord, ReturnMapPoint)]) -> String {
    let mut s = String::from("word,x,y,period\n");
    for (w, p) in rows {
        s.push_str(&format!("{w},{:.16e},{:.16e},{}\n", p.x, p.y, w.len()));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_examples() {
        let m0 = ModelParams::with_r(0.0).unwrap();
        assert_eq!(interval_map(1.0, &m0).unwrap(), 1.0);
        let m = ModelParams::with_r(0.1).unwrap();
        assert!((interval_map(0.01, &m).unwrap() + 1.079).abs() < 1e-12);
        assert_eq!(interval_map(0.0, &m), Err(ModelError::OnDiscontinuity));
        let p = return_map(&ReturnMapPoint::alive(0.01, 0.0), &m);
        assert_eq!(p.status, PointStatus::EscapedLeftSink);
        let q = return_map(&ReturnMapPoint::alive(1.0, 1.0), &m0);
        assert_eq!((q.x, q.status), (1.0, PointStatus::Alive));
        assert!((q.y - 0.9).abs() < 1e-15);
    }

    #[test]
    fn corner_orbit() {
        let m = ModelParams::default();
        let p = periodic_orbit_from_word(&"R".parse().unwrap(), &m);
        assert!((p.x - 1.0).abs() < 1e-12);
        assert!((p.y - 6.0 / 7.0).abs() < 1e-12);
        let q = periodic_orbit_from_word(&"LR".parse().unwrap(), &m);
        let q1 = return_map(&q, &m);
        assert!((q.x + q1.x).abs() < 1e-12);
    }

    #[test]
    fn regimes() {
        let t = |r: f64| classify_regime(&ModelParams::with_r(r).unwrap(), 12).unwrap().regime;
        assert_eq!(t(-0.1), Regime::LorenzAttractor);
        assert_eq!(t(0.0), Regime::BoundaryHeteroclinic);
        assert_eq!(t(0.1), Regime::FakeHorseshoe);
        assert_eq!(t(-1e-6), Regime::LorenzAttractor);
        assert_eq!(t(1e-6), Regime::FakeHorseshoe);
        assert!(classify_regime(&ModelParams::default(), 25).is_err());
    }

    #[test]
    fn kneading_cases() {
        let k = kneading(&ModelParams::with_r(0.1).unwrap(), 10).unwrap();
        assert_eq!(k.escape_plus, Some((0, PointStatus::EscapedLeftSink)));
        assert_eq!(k.escape_minus, Some((0, PointStatus::EscapedRightSink)));
        let k0 = kneading(&ModelParams::with_r(0.0).unwrap(), 10).unwrap();
        assert_eq!(k0.plus, vec![Letter::L; 10]);
        assert_eq!(k0.minus, vec![Letter::R; 10]);
    }

    #[test]
    fn laps() {
        let m = ModelParams::with_r(-1e-4).unwrap();
        for n in 1..=12 {
            assert_eq!(lap_number(&m, n), 1 << n);
        }
        // further from 0 branches stop surviving; the growth rate is log μ
        let m = ModelParams::with_r(-0.1).unwrap();
        assert_eq!(lap_number(&m, 5), 28);
        let rate = (lap_number(&m, 16) as f64 / lap_number(&m, 15) as f64).ln();
        assert!((rate - m.mu().ln()).abs() < 0.02);
        let h = ModelParams::with_r(0.1).unwrap();
        assert!((entropy_estimate(&h, 16) - 2f64.ln()).abs() < 0.01);
    }
}
