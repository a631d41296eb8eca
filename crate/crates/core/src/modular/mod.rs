//! Geodesic flow on the modular surface with its cusp opened into a funnel
//! of boundary length l: the representation ρ_l, the cross-section on l₀,
//! the angle bounds of the corner orbits and the first-return map.

mod dynamics;

pub use dynamics::{
    first_return, itinerary, leaf_image, orbit, periodic_seed, return_map_csv,
    verify_two_leaf_image, wandering_time, Leaf, LeafCluster, LeafImageReport, PeriodicSeed, ReturnStep,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperbolic::{axis, Boundary, GeodesicLine, HyperbolicError, HyperbolicFrame, Matrix2};
use crate::knots::Letter;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModularError {
    #[error("funnel length must be finite and >= 0, got {0}")]
    BadLength(f64),
    #[error("representation root-find failed for l = {0}")]
    RootFind(f64),
    #[error("representation check failed: {0}")]
    BadRepresentation(String),
    #[error("the cusped section (l = 0) is not compact; first return is undefined")]
    Cusped,
    #[error("point (x = {x}, theta = {theta}) is outside the section rectangle")]
    OutsideSection { x: f64, theta: f64 },
    #[error("point at x = {0} sits on a corner orbit of the section")]
    DegenerateCorner(f64),
    #[error("wandering: crossed boundary side h{side} at time {time}")]
    Wandering { side: usize, time: f64 },
    #[error("no return within tmax = {0}")]
    Timeout(f64),
    #[error("axis of the word matrix never meets the section")]
    NoSeed,
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
}

/// Order-2 generator a fixing q and order-3 generator b fixing p, with ab
/// hyperbolic of translation length l (parabolic at l = 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Representation {
    pub a: Matrix2,
    pub b: Matrix2,
    pub l: f64,
    /// Deformation parameter: b = D·b₀·D⁻¹ with D = diag(e^{s/2}, e^{−s/2}).
    pub s: f64,
    pub p: Complex64,
    pub q: Complex64,
}

fn b_of(s: f64) -> Matrix2 {
    // D·[[0, −1], [1, 1]]·D⁻¹
    Matrix2::new_unchecked(0.0, -s.exp(), (-s).exp(), 1.0)
}

fn equal_up_to_sign(m: &Matrix2, tol: f64) -> bool {
    m.proj_eq(&Matrix2::IDENTITY, tol)
}

pub fn build_representation(l: f64) -> Result<Representation, ModularError> {
    if !(l.is_finite() && l >= 0.0) {
        return Err(ModularError::BadLength(l));
    }
    let a = Matrix2::new_unchecked(0.0, -1.0, 1.0, 0.0);
    let target = 2.0 * (0.5 * l).cosh();
    let f = |s: f64| a.mul(&b_of(s)).trace().abs() - target;
    // f is increasing in s ≥ 0 and f(0) ≤ 0
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 64.0 {
            return Err(ModularError::RootFind(l));
        }
    }
    if f(lo) >= 0.0 {
        hi = 0.0;
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = hi;
    let b = b_of(s);
    let tol = 1e-10;
    if !equal_up_to_sign(&a.mul(&a), tol) || !equal_up_to_sign(&b.mul(&b).mul(&b), tol) {
        return Err(ModularError::BadRepresentation("a^2 or b^3 is not the identity".into()));
    }
    if (a.mul(&b).trace().abs() - target).abs() > 1e-10 {
        return Err(ModularError::RootFind(l));
    }
    let rho3 = Complex64::new(-0.5, 0.75f64.sqrt());
    Ok(Representation { a, b, l, s, p: rho3 * s.exp(), q: Complex64::i() })
}

impl Representation {
    /// The boundary element ab.
    pub fn h(&self) -> Matrix2 {
        self.a.mul(&self.b)
    }

    /// Matrix of a letter: R ↦ ab, L ↦ ab⁻¹.
    pub fn letter_matrix(&self, l: Letter) -> Matrix2 {
        match l {
            Letter::R => self.a.mul(&self.b),
            Letter::L => self.a.mul(&self.b.inv()),
        }
    }

    pub fn word_matrix(&self, w: &[Letter]) -> Matrix2 {
        w.iter().fold(Matrix2::IDENTITY, |m, &l| m.mul(&self.letter_matrix(l)))
    }
}

/// The section rectangle on l₀ and the hexagon D₃ bounded by l₀, l₁ = b·l₀,
/// l₂ = b²·l₀ and three lifts of the boundary geodesic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub l0: GeodesicLine,
    pub l1: GeodesicLine,
    pub l2: GeodesicLine,
    /// Boundary sides of D₃; empty in the cusped case.
    pub h_sides: Vec<GeodesicLine>,
    /// Frame at q tangent to l₀; x is arclength along its flow line.
    pub frame0: HyperbolicFrame,
    /// Section occupies |x| < trim; infinite (ideal) when l = 0.
    pub trim: f64,
    pub ideal: bool,
    /// Corner orbits h₀ (at x = +trim) and h₁ = a·h₀ (at x = −trim).
    pub h0: Option<GeodesicLine>,
    pub h1: Option<GeodesicLine>,
    /// Sign of each side function at p, in the order l₁, l₂, h-sides.
    inside: Vec<f64>,
}

fn boundary_real(x: f64) -> Boundary {
    if x.is_finite() && x.abs() < 1e12 {
        Boundary::Real(x)
    } else {
        Boundary::Infinity
    }
}

fn snap(g: GeodesicLine) -> GeodesicLine {
    let f = |b: Boundary| match b {
        Boundary::Real(x) => boundary_real(x),
        i => i,
    };
    GeodesicLine { u: f(g.u), v: f(g.v) }
}

pub fn section_geometry(rep: &Representation) -> Result<CrossSection, ModularError> {
    let (p, q) = (rep.p, rep.q);
    // geodesic [q, p] lies on the circle centred at c; l₀ is the orthogonal
    // circle through q, centred at c′ = −1/c
    let c = (p.norm_sqr() - q.norm_sqr()) / (2.0 * (p.re - q.re));
    let l0 = if c.abs() < 1e-14 {
        GeodesicLine::new(Boundary::Real(0.0), Boundary::Infinity)?
    } else {
        let cp = -1.0 / c;
        let r = (cp * cp + 1.0).sqrt();
        GeodesicLine::new(Boundary::Real(cp - r), Boundary::Real(cp + r))?
    };
    let l0 = if l0.side(p) > 0.0 { l0 } else { l0.reversed() };
    let frame0 = l0.frame_at(q)?;
    let l1 = snap(l0.image(&rep.b));
    let l2 = snap(l0.image(&rep.b.mul(&rep.b)));
    let mut sides = vec![l1, l2];
    let (h_sides, trim, ideal, h0, h1) = if rep.l > 0.0 {
        let hb = axis(&rep.h())?;
        let hs = vec![snap(hb), snap(hb.image(&rep.a)), snap(hb.image(&rep.b.mul(&rep.a)))];
        let meet = l0.intersection(&hs[0]).ok_or(ModularError::BadRepresentation(
            "boundary geodesic misses l0".into(),
        ))?;
        let x = section_coords(&frame0, &HyperbolicFrame::from_point_direction(meet, 0.0)?).0;
        // h₀ crosses l₀ into D₃ (right to left)
        let h0 = if enters_left(&l0, &hs[0]) { hs[0] } else { hs[0].reversed() };
        // a reverses l₀, so the image of h₀ must be reversed to enter D₃
        let h1 = snap(h0.image(&rep.a)).reversed();
        (hs, x.abs(), false, Some(h0), Some(h1))
    } else {
        (Vec::new(), f64::INFINITY, true, None, None)
    };
    sides.extend(h_sides.iter().copied());
    let inside = sides.iter().map(|s| s.side(p).signum()).collect();
    Ok(CrossSection { l0, l1, l2, h_sides, frame0, trim, ideal, h0, h1, inside })
}

/// Whether the oriented line g crosses l₀ from its right to its left.
fn enters_left(l0: &GeodesicLine, g: &GeodesicLine) -> bool {
    let probe = |b: Boundary| match b {
        Boundary::Real(x) => Complex64::new(x, 1e-9),
        Boundary::Infinity => Complex64::new(0.0, 1e12),
    };
    l0.side(probe(g.u)) < 0.0 && l0.side(probe(g.v)) > 0.0
}

/// (x, θ) of a frame whose base point lies on l₀, plus the distance of the
/// base point from l₀ as |sinh|.
pub(crate) fn section_coords(frame0: &HyperbolicFrame, g: &HyperbolicFrame) -> (f64, f64, f64) {
    let w = frame0.g.inv().apply_c(g.base_point());
    let x = w.norm().ln();
    let gl = frame0.flow(x).expect("section coordinate within flow range");
    let h = gl.g.inv().mul(&g.g);
    let mut theta = 2.0 * h.b.atan2(h.a);
    if theta > std::f64::consts::PI {
        theta -= std::f64::consts::TAU;
    } else if theta <= -std::f64::consts::PI {
        theta += std::f64::consts::TAU;
    }
    (x, theta, w.re.abs() / w.norm())
}

/// Counterclockwise rotation by θ about i.
fn rotation(theta: f64) -> Matrix2 {
    let (s, c) = (0.5 * theta).sin_cos();
    Matrix2::new_unchecked(c, s, -s, c)
}

/// A point of the section: arclength x along l₀ from q and angle θ ∈ (0, π)
/// from the oriented tangent of l₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionPoint {
    pub x: f64,
    pub theta: f64,
}

impl CrossSection {
    pub fn frame(&self, pt: &SectionPoint) -> Result<HyperbolicFrame, ModularError> {
        let g = self.frame0.flow(pt.x)?;
        Ok(HyperbolicFrame { g: g.g.mul(&rotation(pt.theta)) })
    }

    /// Section coordinates of a frame based on l₀.
    pub fn coords(&self, g: &HyperbolicFrame) -> SectionPoint {
        let (x, theta, _) = section_coords(&self.frame0, g);
        SectionPoint { x, theta }
    }

    pub(crate) fn sides(&self) -> Vec<(GeodesicLine, f64)> {
        let mut s = vec![self.l1, self.l2];
        s.extend(self.h_sides.iter().copied());
        s.into_iter().zip(self.inside.iter().copied()).collect()
    }

    /// Angle at x of the direction whose forward endpoint is β.
    pub fn theta_towards(&self, x: f64, beta: Boundary) -> Result<f64, ModularError> {
        let g = self.frame0.flow(x)?;
        Ok(match g.g.inv().apply_boundary(beta) {
            Boundary::Infinity => 0.0,
            Boundary::Real(w) => 2.0 * 1.0f64.atan2(-w),
        })
    }

    /// Angle at x of the direction whose backward endpoint is α.
    pub fn theta_from(&self, x: f64, alpha: Boundary) -> Result<f64, ModularError> {
        let g = self.frame0.flow(x)?;
        Ok(match g.g.inv().apply_boundary(alpha) {
            Boundary::Infinity => std::f64::consts::PI,
            Boundary::Real(w) if w >= 0.0 => 2.0 * w.atan(),
            Boundary::Real(w) => 2.0 * (w.atan() + std::f64::consts::PI),
        })
    }
}

/// Angles at x toward the endpoints of the corner orbits: θᵢˢ points at the
/// forward endpoint bᵢ of hᵢ, θᵢᵘ away from the backward endpoint aᵢ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaBounds {
    pub x: f64,
    pub theta0_s: f64,
    pub theta0_u: f64,
    pub theta1_s: f64,
    pub theta1_u: f64,
    pub a0: Boundary,
    pub b0: Boundary,
    pub a1: Boundary,
    pub b1: Boundary,
}

impl ThetaBounds {
    /// The open band of angles whose forward and backward endpoints lie
    /// between those of the two corner orbits.
    pub fn band(&self) -> (f64, f64) {
        (self.theta0_s.max(self.theta1_u), self.theta0_u.min(self.theta1_s))
    }

    /// The forward band: directions whose forward endpoint lies between b₀
    /// and b₁.
    pub fn forward_band(&self) -> (f64, f64) {
        (self.theta0_s, self.theta1_s)
    }

    pub fn contains(&self, theta: f64) -> bool {
        let (lo, hi) = self.band();
        theta > lo && theta < hi
    }
}

pub fn theta_bounds(sec: &CrossSection, x: f64) -> Result<ThetaBounds, ModularError> {
    let (Some(h0), Some(h1)) = (sec.h0, sec.h1) else {
        return Err(ModularError::Cusped);
    };
    if !(x.abs() < sec.trim) {
        return Err(ModularError::OutsideSection { x, theta: f64::NAN });
    }
    Ok(ThetaBounds {
        x,
        theta0_s: sec.theta_towards(x, h0.v)?,
        theta0_u: sec.theta_from(x, h0.u)?,
        theta1_s: sec.theta_towards(x, h1.v)?,
        theta1_u: sec.theta_from(x, h1.u)?,
        a0: h0.u,
        b0: h0.v,
        a1: h1.u,
        b1: h1.v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::distance;

    #[test]
    fn representation_family() {
        let r0 = build_representation(0.0).unwrap();
        assert!((r0.h().trace().abs() - 2.0).abs() < 1e-12);
        assert!(r0.b.proj_eq(&Matrix2::new_unchecked(0.0, -1.0, 1.0, 1.0), 1e-12));
        let r1 = build_representation(1.0).unwrap();
        assert!((r1.h().trace().abs() - 2.255_251_9).abs() < 1e-7);
        assert!((r1.s - 0.5).abs() < 1e-12);
        for l in [0.0, 0.3, 1.0, 4.0] {
            let r = build_representation(l).unwrap();
            assert!(r.a.mul(&r.a).proj_eq(&Matrix2::IDENTITY, 1e-10));
            assert!(r.b.pow(3).proj_eq(&Matrix2::IDENTITY, 1e-10));
            assert!((r.b.apply_c(r.p) - r.p).norm() < 1e-12);
        }
        assert!(build_representation(-1.0).is_err());
    }

    #[test]
    fn cusped_geometry() {
        let sec = section_geometry(&build_representation(0.0).unwrap()).unwrap();
        assert!(sec.ideal && sec.trim.is_infinite());
        assert_eq!(sec.l0.u, Boundary::Real(0.0));
        assert_eq!(sec.l0.v, Boundary::Infinity);
    }

    #[test]
    fn trim_is_symmetric() {
        let rep = build_representation(0.5).unwrap();
        let sec = section_geometry(&rep).unwrap();
        assert!(sec.trim.is_finite() && sec.trim > 0.0);
        let h0 = sec.h0.unwrap();
        let h1 = sec.h1.unwrap();
        let z0 = sec.l0.intersection(&h0).unwrap();
        let z1 = sec.l0.intersection(&h1).unwrap();
        assert!((distance(z0, rep.q) - distance(z1, rep.q)).abs() < 1e-12);
        assert!((sec.coords(&sec.frame(&SectionPoint { x: 0.3, theta: 1.0 }).unwrap()).x - 0.3).abs() < 1e-12);
    }

    #[test]
    fn corner_angle_inequalities() {
        for l in [0.2, 0.5, 1.0, 2.0] {
            let sec = section_geometry(&build_representation(l).unwrap()).unwrap();
            for k in 1..100 {
                let x = sec.trim * (-1.0 + 2.0 * k as f64 / 100.0);
                let tb = theta_bounds(&sec, x).unwrap();
                assert!(tb.theta0_s + 1e-6 < tb.theta0_u, "{l} {x} {tb:?}");
                assert!(tb.theta1_u + 1e-6 < tb.theta1_s, "{l} {x} {tb:?}");
                let mirror = theta_bounds(&sec, -x).unwrap();
                assert!((tb.theta0_s + mirror.theta1_s - std::f64::consts::PI).abs() < 1e-12);
                assert!((tb.theta0_s - mirror.theta1_u).abs() < 1e-12);
                for t in [tb.theta0_s, tb.theta0_u, tb.theta1_s, tb.theta1_u] {
                    assert!(t > 0.0 && t < std::f64::consts::PI);
                }
            }
        }
    }
}
