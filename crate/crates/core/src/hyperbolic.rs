//! PSL(2,R) acting on the upper half-plane: Möbius maps, geodesics, the
//! frame-bundle geodesic flow and fundamental-domain reduction.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("determinant {0} is not positive")]
    BadDeterminant(f64),
    #[error("not hyperbolic: |trace| = {0} <= 2")]
    NotHyperbolic(f64),
    #[error("flow time {0} exceeds the overflow guard |t| <= 700")]
    FlowOverflow(f64),
    #[error("point {0} is not in the upper half-plane")]
    NotInUpperHalfPlane(Complex64),
    #[error("geodesic endpoints coincide")]
    DegenerateGeodesic,
    #[error("reduction did not terminate within {0} steps (group not discrete?)")]
    IterationCap(usize),
    #[error("empty generator list")]
    NoGenerators,
}

/// Point of the closed upper half-plane or ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HPoint {
    Finite(Complex64),
    Infinity,
}

impl HPoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            HPoint::Finite(z) => Some(z),
            HPoint::Infinity => None,
        }
    }
}

impl From<Complex64> for HPoint {
    fn from(z: Complex64) -> Self {
        HPoint::Finite(z)
    }
}

/// Point of the ideal boundary R ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Boundary {
    Real(f64),
    Infinity,
}

impl Boundary {
    pub fn real(self) -> Option<f64> {
        match self {
            Boundary::Real(x) => Some(x),
            Boundary::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Boundary::Infinity)
    }

    /// Equality with absolute tolerance on finite values.
    pub fn approx_eq(self, o: Boundary, tol: f64) -> bool {
        match (self, o) {
            (Boundary::Infinity, Boundary::Infinity) => true,
            (Boundary::Real(a), Boundary::Real(b)) => (a - b).abs() <= tol,
            _ => false,
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Real(x) => write!(f, "{x}"),
            Boundary::Infinity => write!(f, "inf"),
        }
    }
}

/// Real 2×2 matrix of determinant 1, taken up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Scales to determinant 1; fails if the determinant is not positive.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, HyperbolicError> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(HyperbolicError::BadDeterminant(det));
        }
        let s = det.sqrt();
        Ok(Self { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub const fn new_unchecked(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn diag(x: f64) -> Self {
        Self { a: x, b: 0.0, c: 0.0, d: 1.0 / x }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        Matrix2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse assuming determinant 1.
    pub fn inv(&self) -> Matrix2 {
        Matrix2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn pow(&self, n: i64) -> Matrix2 {
        let base = if n < 0 { self.inv() } else { *self };
        (0..n.unsigned_abs()).fold(Matrix2::IDENTITY, |m, _| m.mul(&base))
    }

    /// Divides by √det to restore determinant 1.
    pub fn renormalized(&self) -> Matrix2 {
        let s = self.det().sqrt();
        Matrix2 { a: self.a / s, b: self.b / s, c: self.c / s, d: self.d / s }
    }

    /// Representative of ±M whose first nonzero entry is positive.
    pub fn sign_normalized(&self) -> Matrix2 {
        let first = [self.a, self.b, self.c, self.d].into_iter().find(|x| *x != 0.0).unwrap_or(1.0);
        if first < 0.0 {
            Matrix2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            *self
        }
    }

    /// M ≡ N in PSL(2,R), entrywise within `tol`.
    pub fn proj_eq(&self, o: &Matrix2, tol: f64) -> bool {
        let close = |m: &Matrix2, n: &Matrix2| {
            (m.a - n.a).abs() <= tol
                && (m.b - n.b).abs() <= tol
                && (m.c - n.c).abs() <= tol
                && (m.d - n.d).abs() <= tol
        };
        let neg = Matrix2 { a: -o.a, b: -o.b, c: -o.c, d: -o.d };
        close(self, o) || close(self, &neg)
    }

    pub fn apply(&self, z: HPoint) -> HPoint {
        mobius_apply(self, z)
    }

    /// Action on the ideal boundary.
    pub fn apply_boundary(&self, x: Boundary) -> Boundary {
        match x {
            Boundary::Infinity => {
                if self.c == 0.0 {
                    Boundary::Infinity
                } else {
                    Boundary::Real(self.a / self.c)
                }
            }
            Boundary::Real(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    Boundary::Infinity
                } else {
                    Boundary::Real((self.a * x + self.b) / den)
                }
            }
        }
    }

    /// Action on finite points of the open half-plane.
    pub fn apply_c(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }
}

/// (az + b)/(cz + d), with ∞ handled as a tagged value.
pub fn mobius_apply(m: &Matrix2, z: HPoint) -> HPoint {
    match z {
        HPoint::Infinity => {
            if m.c == 0.0 {
                HPoint::Infinity
            } else {
                HPoint::Finite(Complex64::new(m.a / m.c, 0.0))
            }
        }
        HPoint::Finite(z) => {
            let den = m.c * z + m.d;
            if den == Complex64::new(0.0, 0.0) {
                HPoint::Infinity
            } else {
                HPoint::Finite((m.a * z + m.b) / den)
            }
        }
    }
}

/// Hyperbolic distance in the upper half-plane.
pub fn distance(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm_sqr();
    (1.0 + num / (2.0 * z.im * w.im)).acosh()
}

/// Unit tangent vector at g·i, pointing in the direction g′(i)·(upward).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicFrame {
    pub g: Matrix2,
}

impl HyperbolicFrame {
    pub fn identity() -> Self {
        Self { g: Matrix2::IDENTITY }
    }

    /// Frame at z whose direction makes angle φ with the positive real axis
    /// (counterclockwise, Euclidean angle in the half-plane picture).
    pub fn from_point_direction(z: Complex64, phi: f64) -> Result<Self, HyperbolicError> {
        if !(z.im > 0.0) {
            return Err(HyperbolicError::NotInUpperHalfPlane(z));
        }
        let sy = z.im.sqrt();
        let az = Matrix2::new_unchecked(sy, z.re / sy, 0.0, 1.0 / sy);
        let al = 0.5 * (phi - std::f64::consts::FRAC_PI_2);
        let k = Matrix2::new_unchecked(al.cos(), al.sin(), -al.sin(), al.cos());
        Ok(Self { g: az.mul(&k) })
    }

    pub fn base_point(&self) -> Complex64 {
        self.g.apply_c(Complex64::i())
    }

    /// Direction angle measured from the positive real axis, modulo 2π.
    pub fn direction(&self) -> f64 {
        let w = Complex64::new(self.g.d, self.g.c);
        std::f64::consts::FRAC_PI_2 - 2.0 * w.arg()
    }

    /// Endpoint of the geodesic as t → −∞.
    pub fn backward_endpoint(&self) -> Boundary {
        self.g.apply_boundary(Boundary::Real(0.0))
    }

    /// Endpoint of the geodesic as t → +∞.
    pub fn forward_endpoint(&self) -> Boundary {
        self.g.apply_boundary(Boundary::Infinity)
    }

    pub fn geodesic(&self) -> GeodesicLine {
        GeodesicLine { u: self.backward_endpoint(), v: self.forward_endpoint() }
    }

    /// Left action of an isometry.
    pub fn translate(&self, m: &Matrix2) -> HyperbolicFrame {
        HyperbolicFrame { g: m.mul(&self.g) }
    }

    pub fn flow(&self, t: f64) -> Result<HyperbolicFrame, HyperbolicError> {
        geodesic_flow(self, t)
    }
}

/// g·diag(e^{t/2}, e^{−t/2}).
pub fn geodesic_flow(f: &HyperbolicFrame, t: f64) -> Result<HyperbolicFrame, HyperbolicError> {
    if !(t.abs() <= 700.0) {
        return Err(HyperbolicError::FlowOverflow(t));
    }
    let e = (0.5 * t).exp();
    let g = &f.g;
    Ok(HyperbolicFrame {
        g: Matrix2 { a: g.a * e, b: g.b / e, c: g.c * e, d: g.d / e },
    })
}

/// Oriented geodesic from `u` (backward) to `v` (forward).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicLine {
    pub u: Boundary,
    pub v: Boundary,
}

impl GeodesicLine {
    pub fn new(u: Boundary, v: Boundary) -> Result<Self, HyperbolicError> {
        if u.approx_eq(v, 0.0) {
            return Err(HyperbolicError::DegenerateGeodesic);
        }
        Ok(Self { u, v })
    }

    pub fn reversed(&self) -> GeodesicLine {
        GeodesicLine { u: self.v, v: self.u }
    }

    pub fn image(&self, m: &Matrix2) -> GeodesicLine {
        GeodesicLine { u: m.apply_boundary(self.u), v: m.apply_boundary(self.v) }
    }

    /// sinh of the signed distance from z, positive on the left of the
    /// oriented line.
    pub fn side(&self, z: Complex64) -> f64 {
        let (x, y) = (z.re, z.im);
        match (self.u, self.v) {
            (Boundary::Infinity, Boundary::Real(v)) => (x - v) / y,
            (Boundary::Real(u), Boundary::Infinity) => -(x - u) / y,
            (Boundary::Real(u), Boundary::Real(v)) => {
                let m = 0.5 * (u + v);
                let r = 0.5 * (v - u).abs();
                let s = ((z - m).norm_sqr() - r * r) / (2.0 * r * y);
                if u < v {
                    s
                } else {
                    -s
                }
            }
            (Boundary::Infinity, Boundary::Infinity) => f64::NAN,
        }
    }

    /// Centre and radius for a semicircle, `None` for a vertical line.
    pub fn circle(&self) -> Option<(f64, f64)> {
        match (self.u, self.v) {
            (Boundary::Real(u), Boundary::Real(v)) => Some((0.5 * (u + v), 0.5 * (v - u).abs())),
            _ => None,
        }
    }

    /// Frame at `z` (assumed on the line) pointing along the orientation.
    pub fn frame_at(&self, z: Complex64) -> Result<HyperbolicFrame, HyperbolicError> {
        let phi = self.tangent_angle(z);
        HyperbolicFrame::from_point_direction(z, phi)
    }

    /// Euclidean angle of the oriented tangent at a point z on the line.
    pub fn tangent_angle(&self, z: Complex64) -> f64 {
        use std::f64::consts::FRAC_PI_2;
        match (self.u, self.v) {
            (Boundary::Real(_), Boundary::Infinity) => FRAC_PI_2,
            (Boundary::Infinity, Boundary::Real(_)) => -FRAC_PI_2,
            (Boundary::Real(u), Boundary::Real(v)) => {
                let m = 0.5 * (u + v);
                let radial = (z - m).arg();
                // counterclockwise tangent when moving from larger to smaller x
                if u > v {
                    radial + FRAC_PI_2
                } else {
                    radial - FRAC_PI_2
                }
            }
            _ => f64::NAN,
        }
    }

    /// Intersection point with another geodesic, if they cross.
    pub fn intersection(&self, o: &GeodesicLine) -> Option<Complex64> {
        match (self.circle(), o.circle()) {
            (Some((m1, r1)), Some((m2, r2))) => {
                if (m1 - m2).abs() < 1e-300 {
                    return None;
                }
                // x from the radical axis
                let x = (r1 * r1 - r2 * r2 + m2 * m2 - m1 * m1) / (2.0 * (m2 - m1));
                let y2 = r1 * r1 - (x - m1).powi(2);
                (y2 > 0.0).then(|| Complex64::new(x, y2.sqrt()))
            }
            (Some((m, r)), None) | (None, Some((m, r))) => {
                let line = if self.circle().is_none() { self } else { o };
                let x0 = line.u.real().or(line.v.real())?;
                let y2 = r * r - (x0 - m).powi(2);
                (y2 > 0.0).then(|| Complex64::new(x0, y2.sqrt()))
            }
            (None, None) => None,
        }
    }
}

/// 2·arccosh(|tr M|/2).
pub fn closed_geodesic_length(m: &Matrix2) -> Result<f64, HyperbolicError> {
    let t = m.trace().abs();
    if !(t > 2.0) {
        return Err(HyperbolicError::NotHyperbolic(t));
    }
    Ok(2.0 * (t / 2.0).acosh())
}

/// Axis of a hyperbolic element, oriented from the repelling to the
/// attracting fixed point.
pub fn axis(m: &Matrix2) -> Result<GeodesicLine, HyperbolicError> {
    let tr = m.trace();
    if !(tr.abs() > 2.0) {
        return Err(HyperbolicError::NotHyperbolic(tr.abs()));
    }
    // Work with the representative of positive trace.
    let m = if tr < 0.0 { Matrix2 { a: -m.a, b: -m.b, c: -m.c, d: -m.d } } else { *m };
    let (a, b, c, d) = (m.a, m.b, m.c, m.d);
    let (rep, att) = if c == 0.0 {
        // fixed points ∞ and b/(d − a); ∞ attracts iff a > d
        let x = Boundary::Real(b / (d - a));
        if a > d {
            (x, Boundary::Infinity)
        } else {
            (Boundary::Infinity, x)
        }
    } else {
        // c x² + (d − a) x − b = 0; derivative at x is 1/(cx + d)²
        let disc = ((d - a).powi(2) + 4.0 * b * c).sqrt();
        let x1 = (a - d + disc) / (2.0 * c);
        let x2 = (a - d - disc) / (2.0 * c);
        if (c * x1 + d).abs() > 1.0 {
            (Boundary::Real(x2), Boundary::Real(x1))
        } else {
            (Boundary::Real(x1), Boundary::Real(x2))
        }
    };
    // a fixed point with |cx + d| > 1 has derivative < 1: attracting
    Ok(GeodesicLine { u: rep, v: att })
}

pub const S: Matrix2 = Matrix2::new_unchecked(0.0, -1.0, 1.0, 0.0);
pub const T: Matrix2 = Matrix2::new_unchecked(1.0, 1.0, 0.0, 1.0);

fn is_integral(m: &Matrix2) -> bool {
    [m.a, m.b, m.c, m.d].iter().all(|x| (x - x.round()).abs() < 1e-12)
}

/// Whether the generators contain a generating pair of PSL(2,Z): {S, T} or
/// {S, ST} up to sign and inversion.
fn generates_modular_group(gens: &[Matrix2]) -> bool {
    let has = |m: &Matrix2| gens.iter().any(|g| g.proj_eq(m, 1e-12) || g.inv().proj_eq(m, 1e-12));
    gens.iter().all(is_integral) && has(&S) && (has(&T) || has(&S.mul(&T)) || has(&T.mul(&S)))
}

/// Reduces z into a fundamental domain; returns (z′, w) with z′ = w·z.
///
/// For PSL(2,Z) the domain is {|Re z| ≤ 1/2, |z| ≥ 1}. Other groups use a
/// Dirichlet domain centred at a fixed base point: greedy moves by the
/// generators, then a search over group elements of word length ≤ 12 until
/// no element brings z closer to the centre.
pub fn reduce_to_fundamental_domain(
    z: Complex64,
    group: &[Matrix2],
) -> Result<(Complex64, Matrix2), HyperbolicError> {
    if !(z.im > 0.0) {
        return Err(HyperbolicError::NotInUpperHalfPlane(z));
    }
    if group.is_empty() {
        return Err(HyperbolicError::NoGenerators);
    }
    if generates_modular_group(group) {
        reduce_modular(z)
    } else {
        reduce_dirichlet(z, group, DIRICHLET_CENTRE, 12)
    }
}

pub const MAX_REDUCTION_STEPS: usize = 10_000;

fn reduce_modular(mut z: Complex64) -> Result<(Complex64, Matrix2), HyperbolicError> {
    let mut w = Matrix2::IDENTITY;
    for _ in 0..MAX_REDUCTION_STEPS {
        if z.re.abs() > 0.5 {
            let n = z.re.round();
            z = Complex64::new(z.re - n, z.im);
            w = T.pow(-(n as i64)).mul(&w);
        } else if z.norm_sqr() < 1.0 {
            z = -1.0 / z;
            w = S.mul(&w);
        } else {
            return Ok((z, w.sign_normalized()));
        }
    }
    Err(HyperbolicError::IterationCap(MAX_REDUCTION_STEPS))
}

/// Centre of Dirichlet domains; not fixed by any of the elliptic elements
/// used in this crate.
pub const DIRICHLET_CENTRE: Complex64 = Complex64::new(0.1, 1.7);

/// Distinct group elements of word length ≤ `max_len` (at most `cap` of them).
pub fn word_ball(gens: &[Matrix2], max_len: usize, cap: usize) -> Vec<Matrix2> {
    let mut letters: Vec<Matrix2> = Vec::new();
    for g in gens {
        for h in [*g, g.inv()] {
            if !letters.iter().any(|l| l.proj_eq(&h, 1e-9)) {
                letters.push(h);
            }
        }
    }
    let key = |m: &Matrix2| {
        let n = m.sign_normalized();
        [n.a, n.b, n.c, n.d].map(|x| (x * 1e7).round() as i64)
    };
    let mut seen: HashMap<[i64; 4], ()> = HashMap::new();
    seen.insert(key(&Matrix2::IDENTITY), ());
    let mut out = vec![Matrix2::IDENTITY];
    let mut queue = VecDeque::from([(Matrix2::IDENTITY, 0usize)]);
    while let Some((m, len)) = queue.pop_front() {
        if len == max_len {
            continue;
        }
        for l in &letters {
            let p = l.mul(&m).renormalized();
            if seen.insert(key(&p), ()).is_none() {
                out.push(p);
                if out.len() >= cap {
                    return out;
                }
                queue.push_back((p, len + 1));
            }
        }
    }
    out
}

/// Dirichlet-domain reduction about `centre`.
pub fn reduce_dirichlet(
    mut z: Complex64,
    gens: &[Matrix2],
    centre: Complex64,
    max_len: usize,
) -> Result<(Complex64, Matrix2), HyperbolicError> {
    let short = word_ball(gens, 1, usize::MAX);
    let mut ball: Option<Vec<Matrix2>> = None;
    let mut w = Matrix2::IDENTITY;
    let improve = |z: Complex64, set: &[Matrix2]| {
        let d0 = distance(z, centre);
        set.iter()
            .map(|h| (h, distance(h.apply_c(z), centre)))
            .filter(|(_, d)| *d < d0 - 1e-12)
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(h, _)| *h)
    };
    for _ in 0..MAX_REDUCTION_STEPS {
        let h = match improve(z, &short) {
            Some(h) => Some(h),
            None => {
                let b = ball.get_or_insert_with(|| word_ball(gens, max_len, 200_000));
                improve(z, b)
            }
        };
        match h {
            Some(h) => {
                z = h.apply_c(z);
                w = h.mul(&w).renormalized();
            }
            None => return Ok((z, w.sign_normalized())),
        }
    }
    Err(HyperbolicError::IterationCap(MAX_REDUCTION_STEPS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn mobius_examples() {
        let z = HPoint::Finite(c(2.0, 3.0));
        assert_eq!(mobius_apply(&Matrix2::IDENTITY, z), z);
        assert_eq!(mobius_apply(&T, HPoint::Finite(c(0.0, 1.0))), HPoint::Finite(c(1.0, 1.0)));
        let HPoint::Finite(w) = mobius_apply(&S, HPoint::Finite(c(0.0, 1.0))) else { panic!() };
        assert!((w - c(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(mobius_apply(&T, HPoint::Infinity), HPoint::Infinity);
        assert_eq!(mobius_apply(&S, HPoint::Infinity), HPoint::Finite(c(0.0, 0.0)));
    }

    #[test]
    fn flow_up_the_imaginary_axis() {
        let f = geodesic_flow(&HyperbolicFrame::identity(), 2.0 * 2f64.ln()).unwrap();
        assert!((f.base_point() - c(0.0, 4.0)).norm() < 1e-14);
        assert!((f.direction() - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!(geodesic_flow(&f, 701.0).is_err());
    }

    #[test]
    fn frames_from_point_and_direction() {
        for &(x, y, phi) in &[(0.3, 2.0, 0.4), (-1.0, 0.5, 2.5), (4.0, 1.0, -1.2)] {
            let f = HyperbolicFrame::from_point_direction(c(x, y), phi).unwrap();
            assert!((f.base_point() - c(x, y)).norm() < 1e-13);
            let d = (f.direction() - phi).rem_euclid(std::f64::consts::TAU);
            assert!(!(1e-12..=std::f64::consts::TAU - 1e-12).contains(&d));
            assert!((f.g.det() - 1.0).abs() < 1e-13);
        }
        // horizontal to the right at i: geodesic is the unit circle from −1 to 1
        let f = HyperbolicFrame::from_point_direction(c(0.0, 1.0), 0.0).unwrap();
        assert!(f.backward_endpoint().approx_eq(Boundary::Real(-1.0), 1e-14));
        assert!(f.forward_endpoint().approx_eq(Boundary::Real(1.0), 1e-14));
    }

    #[test]
    fn lengths_and_axes() {
        let m = Matrix2::new_unchecked(2.0, 1.0, 1.0, 1.0);
        assert!((closed_geodesic_length(&m).unwrap() - 1.924_847_300_238_413).abs() < 1e-12);
        let e = Matrix2::diag(1f64.exp());
        assert!((closed_geodesic_length(&e).unwrap() - 2.0).abs() < 1e-14);
        assert!(closed_geodesic_length(&T).is_err());
        let ax = axis(&e).unwrap();
        assert_eq!(ax, GeodesicLine { u: Boundary::Real(0.0), v: Boundary::Infinity });
        let ax = axis(&m).unwrap();
        let s5 = 5f64.sqrt();
        assert!(ax.u.approx_eq(Boundary::Real((1.0 - s5) / 2.0), 1e-14));
        assert!(ax.v.approx_eq(Boundary::Real((1.0 + s5) / 2.0), 1e-14));
        assert_eq!(axis(&m.inv()).unwrap(), ax.reversed());
    }

    #[test]
    fn modular_reduction_examples() {
        let (z, w) = reduce_to_fundamental_domain(c(2.0, 0.5), &[S, T]).unwrap();
        assert!((z - c(0.0, 2.0)).norm() < 1e-14);
        assert!(w.proj_eq(&S.mul(&T.pow(-2)), 1e-14));
        let (z, w) = reduce_to_fundamental_domain(c(0.25, 2.0), &[S, T]).unwrap();
        assert_eq!(z, c(0.25, 2.0));
        assert!(w.proj_eq(&Matrix2::IDENTITY, 0.0));
    }

    #[test]
    fn side_function_signs() {
        let up = GeodesicLine { u: Boundary::Real(0.0), v: Boundary::Infinity };
        assert!(up.side(c(-1.0, 1.0)) > 0.0);
        let arc = GeodesicLine { u: Boundary::Real(-1.0), v: Boundary::Real(1.0) };
        // moving left to right over the top, the left side is outside
        assert!(arc.side(c(0.0, 2.0)) > 0.0);
        assert!(arc.reversed().side(c(0.0, 2.0)) < 0.0);
        assert!(arc.side(c(0.0, 1.0)).abs() < 1e-15);
    }
}
