//! The invariant trefoil at the T-point: the two heteroclinic arcs 0 → C±,
//! the outer stable branches of C± that come in from infinity, and a closure
//! on a large sphere standing in for the point at infinity.

use serde::{Deserialize, Serialize};

use super::{
    c_plus, eigen_origin, miss_distance, mirror, secondary_spectrum, vector_field, Control, Dopri5,
    LorenzError, LorenzParams, SeparatrixConfig, State,
};
use crate::curve::{dist, Point3, Polyline3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrefoilConfig {
    /// Radius of the sphere that replaces the point at infinity.
    pub r_infinity: f64,
    /// Heteroclinic arcs are cut once they come this close to C±.
    pub truncation: f64,
    pub eps: f64,
    pub tol: f64,
    /// Time budget for each heteroclinic arc.
    pub t_max: f64,
    /// Spacing of dense-output samples along trajectories.
    pub sample_dt: f64,
    /// The outer stable branches are integrated until they leave this ball,
    /// then continued radially.
    pub inner_radius: f64,
    /// Vertices on each closure arc.
    pub arc_points: usize,
    /// Largest ‖miss‖ accepted as "at the T-point".
    pub miss_threshold: f64,
    /// Vertices closer than this to their predecessor are dropped.
    pub min_spacing: f64,
}

impl Default for TrefoilConfig {
    fn default() -> Self {
        Self {
            r_infinity: 500.0,
            truncation: 1e-4,
            eps: 1e-7,
            tol: 1e-10,
            t_max: 20.0,
            sample_dt: 2e-3,
            inner_radius: 100.0,
            arc_points: 200,
            miss_threshold: 1e-6,
            min_spacing: 1e-2,
        }
    }
}

/// Dense samples of a trajectory, stopping when `stop` fires on a sample.
fn sample_until<S>(
    p: &LorenzParams,
    seed: State,
    t_end: f64,
    cfg: &TrefoilConfig,
    stop: S,
) -> Result<(Vec<Point3>, bool), LorenzError>
where
    S: Fn(&State) -> bool,
{
    let solver = Dopri5::new(cfg.tol)?;
    let mut pts = vec![seed];
    let mut stopped = false;
    let dt = cfg.sample_dt.abs() * t_end.signum();
    let mut next = dt;
    solver.solve(|y| vector_field(y, p), 0.0, seed, t_end, |st| {
        let inside = |t: f64| if dt > 0.0 { t <= st.t1 } else { t >= st.t1 };
        while inside(next) {
            let y = st.eval(next);
            pts.push(y);
            next += dt;
            if stop(&y) {
                stopped = true;
                return Control::Stop;
            }
        }
        pts.push(st.y1);
        if stop(&st.y1) {
            stopped = true;
            return Control::Stop;
        }
        Control::Continue
    })?;
    Ok((pts, stopped))
}

fn scale(v: &Point3, s: f64) -> Point3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

fn norm(v: &Point3) -> f64 {
    dist(v, &[0.0; 3])
}

/// Points along the great-circle arc from `a` to `b` on the sphere of radius
/// `r`, excluding `a`.
fn great_arc(a: &Point3, b: &Point3, r: f64, n: usize) -> Vec<Point3> {
    let ua = scale(a, 1.0 / norm(a));
    let ub = scale(b, 1.0 / norm(b));
    let dot = (ua[0] * ub[0] + ua[1] * ub[1] + ua[2] * ub[2]).clamp(-1.0, 1.0);
    let omega = dot.acos();
    (1..=n)
        .map(|k| {
            let s = k as f64 / n as f64;
            let (wa, wb) = if omega < 1e-12 {
                (1.0 - s, s)
            } else {
                (((1.0 - s) * omega).sin() / omega.sin(), (s * omega).sin() / omega.sin())
            };
            let v = [wa * ua[0] + wb * ub[0], wa * ua[1] + wb * ub[1], wa * ua[2] + wb * ub[2]];
            scale(&v, r / norm(&v))
        })
        .collect()
}

/// Radial segment from `from` out to the sphere of radius `r`, excluding `from`.
fn radial(from: &Point3, r: f64, n: usize) -> Vec<Point3> {
    let r0 = norm(from);
    (1..=n)
        .map(|k| scale(from, (r0 + (r - r0) * k as f64 / n as f64) / r0))
        .collect()
}

struct Pieces {
    /// W^u(0)−: origin → C⁺, ending at C⁺.
    to_cplus: Vec<Point3>,
    /// Outer W^s(C⁺) branch, from C⁺ out to the sphere.
    out_cplus: Vec<Point3>,
}

fn pieces(p: &LorenzParams, cfg: &TrefoilConfig) -> Result<Pieces, LorenzError> {
    let c = c_plus(p)?;
    let v = eigen_origin(p).unstable_vector;
    let seed = scale(&v, -cfg.eps);
    let (mut to_cplus, reached) =
        sample_until(p, seed, cfg.t_max, cfg, |y| dist(y, &c) < cfg.truncation)?;
    if !reached {
        let closest = to_cplus.iter().map(|y| dist(y, &c)).fold(f64::INFINITY, f64::min);
        return Err(LorenzError::NotAtTPoint(format!(
            "W^u(0) comes no closer than {closest:e} to C+ (needs {:e})",
            cfg.truncation
        )));
    }
    to_cplus.insert(0, [0.0; 3]);
    to_cplus.push(c);

    let spec = secondary_spectrum(p)
        .ok_or_else(|| LorenzError::WrongRegime("C+ spectrum is not (real, complex pair)".into()))?;
    // The heteroclinic arc arrives from above; the outer branch leaves below.
    let w = spec.real_vector;
    let s_seed = [c[0] - cfg.eps * w[0], c[1] - cfg.eps * w[1], c[2] - cfg.eps * w[2]];
    let (mut out, escaped) =
        sample_until(p, s_seed, -cfg.t_max, cfg, |y| norm(y) > cfg.inner_radius)?;
    if !escaped {
        return Err(LorenzError::WrongRegime(format!(
            "outer stable branch of C+ stays inside radius {} for t = {}",
            cfg.inner_radius, cfg.t_max
        )));
    }
    let last = *out.last().unwrap();
    out.extend(radial(&last, cfg.r_infinity, 50));
    Ok(Pieces { to_cplus, out_cplus: out })
}

/// The common point of the two closure arcs. It sits on the far side of the
/// sphere from the mean exit direction's z component, so the arcs run well
/// away from the bounded part of the curve.
fn pole(exit: &Point3, r: f64) -> Point3 {
    let s = if exit[2] >= 0.0 { -1.0 } else { 1.0 };
    [0.0, 0.0, s * r]
}

/// Assembles the closed trefoil polyline. Fails with `NotAtTPoint` when
/// ‖miss‖ exceeds the threshold or the arc never reaches C⁺.
pub fn assemble_trefoil(p: &LorenzParams, cfg: &TrefoilConfig) -> Result<Polyline3, LorenzError> {
    p.validate()?;
    let sep = SeparatrixConfig { eps: cfg.eps, tol: cfg.tol, ..SeparatrixConfig::default() };
    let miss = miss_distance(p, &sep)?;
    if !(miss.norm() < cfg.miss_threshold) {
        return Err(LorenzError::NotAtTPoint(format!(
            "|miss| = {:e} exceeds {:e}",
            miss.norm(),
            cfg.miss_threshold
        )));
    }
    let pc = pieces(p, cfg)?;
    let exit_plus = *pc.out_cplus.last().unwrap();
    let exit_minus = mirror(&exit_plus);
    let pole = pole(&exit_plus, cfg.r_infinity);

    // Exit(C⁻) at infinity, in along W^s(C⁻), C⁻ → 0 along W^u(0)+ reversed,
    // 0 → C⁺ along W^u(0)−, out along W^s(C⁺), then back over the pole.
    let mut pts: Vec<Point3> = Vec::new();
    pts.extend(pc.out_cplus.iter().rev().map(mirror));
    pts.extend(pc.to_cplus.iter().rev().map(mirror));
    pts.extend(pc.to_cplus.iter().skip(1).copied());
    pts.extend(pc.out_cplus.iter().copied());
    pts.extend(great_arc(&exit_plus, &pole, cfg.r_infinity, cfg.arc_points));
    pts.extend(great_arc(&pole, &exit_minus, cfg.r_infinity, cfg.arc_points));
    Polyline3::new(pts, true)
        .and_then(|c| c.decimated(cfg.min_spacing))
        .map_err(|e| LorenzError::InvalidParams(format!("degenerate trefoil polyline: {e}")))
}

/// The closure on the sphere alone: the two great-circle arcs through the
/// pole, closed by the chord between the exit points.
pub fn closure_loop(p: &LorenzParams, cfg: &TrefoilConfig) -> Result<Polyline3, LorenzError> {
    let pc = pieces(p, cfg)?;
    let exit_plus = *pc.out_cplus.last().unwrap();
    let exit_minus = mirror(&exit_plus);
    let pole = pole(&exit_plus, cfg.r_infinity);
    let mut pts = vec![exit_plus];
    pts.extend(great_arc(&exit_plus, &pole, cfg.r_infinity, cfg.arc_points));
    pts.extend(great_arc(&pole, &exit_minus, cfg.r_infinity, cfg.arc_points));
    let n = cfg.arc_points;
    pts.extend((1..n).map(|k| {
        let s = k as f64 / n as f64;
        std::array::from_fn(|i| exit_minus[i] + s * (exit_plus[i] - exit_minus[i]))
    }));
    Polyline3::new(pts, true)
        .map_err(|e| LorenzError::InvalidParams(format!("degenerate closure loop: {e}")))
}
