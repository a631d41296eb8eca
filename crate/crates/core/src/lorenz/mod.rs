//! The classical Lorenz system: vector field, equilibria, spectra, adaptive
//! integration, separatrices, the T-point search, the Hopf threshold and the
//! heteroclinic trefoil.

pub mod hopf;
pub mod integrator;
pub mod separatrix;
pub mod tpoint;
pub mod trefoil;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;


pub use integrator::{Control, DenseStep, Dopri5, IntegrateError, IntegratorStats, State};
pub use separatrix::{
    miss_distance, miss_distance_to, stable_separatrix_cplus, unstable_separatrix, Branch,
    MissVector,
    SeparatrixConfig,
};
pub use tpoint::{condition_number, find_tpoint, miss_jacobian, TPointConfig, TPointResult, TPointStep};
pub use trefoil::{assemble_trefoil, closure_loop, TrefoilConfig};

pub use crate::curve::Polyline3;
pub use hopf::{hopf_crossing_detector, hopf_threshold, secondary_max_real_part};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LorenzError {
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("wrong regime: {0}")]
    WrongRegime(String),
    #[error("no crossing of the section plane within t = {0}")]
    NoCrossing(f64),
    #[error("T-point search diverged after {iterations} iterations (last |miss| = {last_residual:e})")]
    Diverged {
        iterations: usize,
        last_residual: f64,
        history: Vec<f64>,
    },
    #[error("not at T-point: {0}")]
    NotAtTPoint(String),
    #[error("no Hopf threshold: sigma = {sigma} <= beta + 1 = {}", beta + 1.0)]
    NoHopfThreshold { sigma: f64, beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorenzParams {
    pub sigma: f64,
    pub rho: f64,
    pub beta: f64,
}

impl LorenzParams {
    pub fn new(sigma: f64, rho: f64, beta: f64) -> Result<Self, LorenzError> {
        let p = Self { sigma, rho, beta };
        p.validate()?;
        Ok(p)
    }

    /// σ = 10, ρ = 28, β = 8/3.
    pub fn classical() -> Self {
        Self {
            sigma: 10.0,
            rho: 28.0,
            beta: 8.0 / 3.0,
        }
    }

    pub fn validate(&self) -> Result<(), LorenzError> {
        if [self.sigma, self.rho, self.beta]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
        {
            Ok(())
        } else {
            Err(LorenzError::InvalidParams(format!("{self:?}")))
        }
    }
}

pub fn vector_field(s: &State, p: &LorenzParams) -> State {
    let [x, y, z] = *s;
    [p.sigma * (y - x), x * (p.rho - z) - y, x * y - p.beta * z]
}

pub fn jacobian(s: &State, p: &LorenzParams) -> [[f64; 3]; 3] {
    let [x, y, z] = *s;
    [
        [-p.sigma, p.sigma, 0.0],
        [p.rho - z, -1.0, -x],
        [y, x, -p.beta],
    ]
}

/// The (x, y, z) ↦ (−x, −y, z) symmetry.
pub fn mirror(s: &State) -> State {
    [-s[0], -s[1], s[2]]
}

/// Origin, then C⁺ and C⁻ when ρ > 1.
pub fn equilibria(p: &LorenzParams) -> Vec<State> {
    let mut out = vec![[0.0; 3]];
    if p.rho > 1.0 {
        let c = (p.beta * (p.rho - 1.0)).sqrt();
        out.push([c, c, p.rho - 1.0]);
        out.push([-c, -c, p.rho - 1.0]);
    }
    out
}

pub fn c_plus(p: &LorenzParams) -> Result<State, LorenzError> {
    if p.rho <= 1.0 {
        return Err(LorenzError::WrongRegime(format!(
            "rho = {} <= 1 has no secondary equilibria",
            p.rho
        )));
    }
    let c = (p.beta * (p.rho - 1.0)).sqrt();
    Ok([c, c, p.rho - 1.0])
}

/// Spectrum of the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OriginSpectrum {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    /// Unit eigenvector of λ₁ with positive x-component.
    pub unstable_vector: State,
    /// λ₃ < λ₂ < 0 < λ₁ + λ₂ < λ₁.
    pub geometric_ordering: bool,
}

/// Spectrum of C± (identical for both by symmetry).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondarySpectrum {
    pub real: f64,
    pub pair: Complex64,
    /// Unit eigenvector of the real eigenvalue at C⁺, with positive z-component.
    pub real_vector: State,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenData {
    pub origin: OriginSpectrum,
    pub secondary: Option<SecondarySpectrum>,
}

pub fn eigen_origin(p: &LorenzParams) -> OriginSpectrum {
    let s1 = p.sigma + 1.0;
    let disc = (s1 * s1 + 4.0 * p.sigma * (p.rho - 1.0)).sqrt();
    let lambda1 = 0.5 * (-s1 + disc);
    let lambda3 = 0.5 * (-s1 - disc);
    let lambda2 = -p.beta;
    let v = normalize([p.sigma, p.sigma + lambda1, 0.0]);
    let geometric_ordering =
        lambda3 < lambda2 && lambda2 < 0.0 && 0.0 < lambda1 + lambda2 && lambda1 + lambda2 < lambda1;
    OriginSpectrum {
        lambda1,
        lambda2,
        lambda3,
        unstable_vector: v,
        geometric_ordering,
    }
}

pub fn eigen_data(p: &LorenzParams) -> EigenData {
    EigenData {
        origin: eigen_origin(p),
        secondary: secondary_spectrum(p),
    }
}

/// Coefficients (a2, a1, a0) of λ³ + a2 λ² + a1 λ + a0 at C±.
pub fn secondary_char_poly(p: &LorenzParams) -> (f64, f64, f64) {
    (
        p.sigma + p.beta + 1.0,
        p.beta * (p.sigma + p.rho),
        2.0 * p.sigma * p.beta * (p.rho - 1.0),
    )
}

/// Spectrum at C⁺ when it consists of one real eigenvalue and a complex pair.
pub fn secondary_spectrum(p: &LorenzParams) -> Option<SecondarySpectrum> {
    if p.rho <= 1.0 {
        return None;
    }
    let (a2, a1, a0) = secondary_char_poly(p);
    let roots = cubic_roots(a2, a1, a0);
    let CubicRoots::OneRealPair(real, pair) = roots else {
        return None;
    };
    let c = (p.beta * (p.rho - 1.0)).sqrt();
    // (J − λ)v = 0: v2 = v1 (σ + λ)/σ, v3 = c (v1 + v2)/(β + λ)
    let v1 = 1.0;
    let v2 = (p.sigma + real) / p.sigma;
    let v3 = c * (v1 + v2) / (p.beta + real);
    let mut v = normalize([v1, v2, v3]);
    if v[2] < 0.0 {
        v = [-v[0], -v[1], -v[2]];
    }
    Some(SecondarySpectrum {
        real,
        pair,
        real_vector: v,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CubicRoots {
    /// One real root and a conjugate pair (the one with positive imaginary part).
    OneRealPair(f64, Complex64),
    ThreeReal([f64; 3]),
}

/// Roots of λ³ + a2 λ² + a1 λ + a0.
pub fn cubic_roots(a2: f64, a1: f64, a0: f64) -> CubicRoots {
    let poly = |x: f64| ((x + a2) * x + a1) * x + a0;
    let dpoly = |x: f64| (3.0 * x + 2.0 * a2) * x + a1;
    // Cauchy bound brackets every real root.
    let bound = 1.0 + a2.abs().max(a1.abs()).max(a0.abs());
    let (mut lo, mut hi) = (-bound, bound);
    // bisect for one real root, then polish with Newton
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if poly(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 * bound {
            break;
        }
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = dpoly(r);
        if d != 0.0 {
            r -= poly(r) / d;
        }
    }
    // deflate: λ² + b λ + c
    let b = a2 + r;
    let c = a1 + r * b;
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        CubicRoots::OneRealPair(r, Complex64::new(-0.5 * b, 0.5 * (-disc).sqrt()))
    } else {
        let sq = disc.sqrt();
        let q = -0.5 * (b + b.signum() * sq);
        let (r2, r3) = if q != 0.0 { (q, c / q) } else { (0.0, -b) };
        let mut v = [r, r2, r3];
        v.sort_by(|x, y| x.partial_cmp(y).unwrap());
        CubicRoots::ThreeReal(v)
    }
}

fn normalize(v: State) -> State {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

pub(crate) fn dist(a: &State, b: &State) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Sampled solution of the Lorenz system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<(f64, State)>,
    pub stats: IntegratorStats,
}

impl Trajectory {
    pub fn last(&self) -> (f64, State) {
        *self.samples.last().expect("trajectory has at least the initial sample")
    }

    /// Linear interpolation between samples (exact at sample times).
    pub fn state_at(&self, t: f64) -> Option<State> {
        let s = &self.samples;
        let forward = s.len() < 2 || s[1].0 >= s[0].0;
        let idx = s.partition_point(|(ti, _)| if forward { *ti < t } else { *ti > t });
        if idx == 0 {
            return (s[0].0 == t).then_some(s[0].1);
        }
        if idx >= s.len() {
            return None;
        }
        let (t0, y0) = s[idx - 1];
        let (t1, y1) = s[idx];
        let w = (t - t0) / (t1 - t0);
        Some(std::array::from_fn(|i| y0[i] + w * (y1[i] - y0[i])))
    }
}

/// Adaptive DOPRI5 integration over `[0, t_end]` (negative `t_end` integrates
/// backward). Samples are the accepted step points.
pub fn integrate(state: State, p: &LorenzParams, t_end: f64, tol: f64) -> Result<Trajectory, LorenzError> {
    p.validate()?;
    let solver = Dopri5::new(tol)?;
    let mut samples = vec![(0.0, state)];
    let (_, _, stats) = solver.solve(|y| vector_field(y, p), 0.0, state, t_end, |s| {
        samples.push((s.t1, s.y1));
        Control::Continue
    })?;
    Ok(Trajectory { samples, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLASSICAL_TOL: f64 = 1e-12;

    #[test]
    fn field_at_equilibria_vanishes() {
        let p = LorenzParams::classical();
        for e in equilibria(&p) {
            let v = vector_field(&e, &p);
            assert!(v.iter().all(|c| c.abs() < 1e-12), "{v:?}");
        }
    }

    #[test]
    fn field_direct_substitution() {
        let p = LorenzParams::classical();
        let v = vector_field(&[1.0, 1.0, 1.0], &p);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[1], 26.0);
        assert!((v[2] + 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn equilibria_classical_and_threshold() {
        let p = LorenzParams::classical();
        let e = equilibria(&p);
        assert_eq!(e.len(), 3);
        assert!((e[1][0] - 72f64.sqrt()).abs() < CLASSICAL_TOL);
        assert!((e[1][0] - 8.48528).abs() < 1e-5);
        assert_eq!(e[1][2], 27.0);
        assert_eq!(e[2], mirror(&e[1]));
        let p1 = LorenzParams { rho: 1.0, ..p };
        assert_eq!(equilibria(&p1), vec![[0.0; 3]]);
    }

    #[test]
    fn origin_spectrum_classical() {
        let s = eigen_origin(&LorenzParams::classical());
        assert!((s.lambda1 - 11.8277).abs() < 1e-4);
        assert_eq!(s.lambda2, -8.0 / 3.0);
        assert!((s.lambda3 + 22.8277).abs() < 1e-4);
        assert!(s.geometric_ordering);
        assert!(s.unstable_vector[0] > 0.0);
    }

    #[test]
    fn origin_spectrum_degenerate_at_pitchfork() {
        let p = LorenzParams {
            rho: 1.0,
            ..LorenzParams::classical()
        };
        let s = eigen_origin(&p);
        assert_eq!(s.lambda1, 0.0);
        assert!(!s.geometric_ordering);
    }

    #[test]
    fn secondary_spectrum_classical() {
        let s = secondary_spectrum(&LorenzParams::classical()).unwrap();
        assert!((s.real + 13.8546).abs() < 1e-4, "{}", s.real);
        assert!((s.pair.re - 0.09396).abs() < 1e-5, "{}", s.pair);
        assert!((s.pair.im - 10.1945).abs() < 1e-4, "{}", s.pair);
        // eigenvector check: J v = λ v
        let p = LorenzParams::classical();
        let j = jacobian(&c_plus(&p).unwrap(), &p);
        let v = s.real_vector;
        for (row, vi) in j.iter().zip(v) {
            let jv: f64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
            assert!((jv - s.real * vi).abs() < 1e-10);
        }
    }

    #[test]
    fn cubic_roots_three_real() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let CubicRoots::ThreeReal(r) = cubic_roots(0.0, -7.0, 6.0) else {
            panic!()
        };
        assert!((r[0] + 3.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12 && (r[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn equilibrium_trajectory_is_constant() {
        let p = LorenzParams::classical();
        let c = c_plus(&p).unwrap();
        let tr = integrate(c, &p, 5.0, 1e-10).unwrap();
        for (_, y) in &tr.samples {
            assert!(dist(y, &c) < 1e-9);
        }
    }

    #[test]
    fn integrate_is_equivariant() {
        let p = LorenzParams::classical();
        let s0 = [1.0, 2.0, 20.0];
        let a = integrate(s0, &p, 2.0, 1e-11).unwrap();
        let b = integrate(mirror(&s0), &p, 2.0, 1e-11).unwrap();
        assert_eq!(a.samples.len(), b.samples.len());
        for ((ta, ya), (tb, yb)) in a.samples.iter().zip(&b.samples) {
            assert_eq!(ta, tb);
            assert!(dist(&mirror(ya), yb) < 1e-12);
        }
    }

    #[test]
    fn backward_forward_round_trip() {
        let p = LorenzParams::classical();
        let tol = 1e-12;
        let t = 1.0;
        let s0 = [1.0, 1.0, 1.0];
        let fwd = integrate(s0, &p, t, tol).unwrap();
        let back = integrate(fwd.last().1, &p, -t, tol).unwrap();
        let lam1 = eigen_origin(&p).lambda1;
        let bound = 100.0 * tol * (lam1 * t).exp();
        assert!(dist(&back.last().1, &s0) < bound, "{} vs {bound}", dist(&back.last().1, &s0));
    }

    #[test]
    fn trajectory_error_estimates_within_tolerance() {
        let p = LorenzParams::classical();
        let tr = integrate([1.0, 1.0, 1.0], &p, 10.0, 1e-9).unwrap();
        assert!(tr.stats.max_error_estimate <= 1e-9);
        assert!(tr.samples.windows(2).all(|w| w[1].0 > w[0].0));
    }
}
