//! One-dimensional invariant manifolds: the unstable separatrices of the
//! origin, the stable separatrices of C±, and the miss vector between them on
//! the plane z = ρ − 1.
//!
//! Near the principal T-point the branch W^u(0)− (seeded with x < 0) makes
//! one turn around the left wing and falls into C⁺, and W^u(0)+ falls into C⁻
//! by symmetry. The miss vector pairs W^u(0)− with the backward branch of
//! W^s(C⁺) that leaves C⁺ upward.

use serde::{Deserialize, Serialize};

use super::{
    c_plus, eigen_origin, mirror, secondary_spectrum, vector_field, Control, Dopri5, LorenzError,
    LorenzParams, State, Trajectory,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparatrixConfig {
    /// Seed offset along the eigenvector.
    pub eps: f64,
    /// Integrator tolerance.
    pub tol: f64,
    /// Forward time budget for W^u(0).
    pub t_unstable: f64,
    /// Backward time budget for W^s(C⁺).
    pub t_stable: f64,
    /// Backward integrations stop once |state| exceeds this.
    pub escape_radius: f64,
    /// Which stable branch of C⁺ is matched against W^u(0)−. `Plus` is the side
    /// of the eigenvector with positive z component.
    pub stable_branch: Branch,
    /// Upward crossings of z = ρ − 1 skipped on W^u(0)− before matching.
    pub unstable_crossing: usize,
}

impl Default for SeparatrixConfig {
    fn default() -> Self {
        Self {
            eps: 1e-7,
            tol: 1e-10,
            t_unstable: 30.0,
            t_stable: 10.0,
            escape_radius: 1e3,
            stable_branch: Branch::Plus,
            unstable_crossing: 0,
        }
    }
}

/// W^u(0) branch seeded at ±eps·v₁ and integrated forward for `t_end`.
pub fn unstable_separatrix(
    p: &LorenzParams,
    branch: Branch,
    eps: f64,
    t_end: f64,
    tol: f64,
) -> Result<Trajectory, LorenzError> {
    check_eps(eps)?;
    let v = eigen_origin(p).unstable_vector;
    let s = branch.sign() * eps;
    super::integrate([s * v[0], s * v[1], s * v[2]], p, t_end, tol)
}

/// W^s(C⁺) branch seeded at C⁺ ± eps·v_s and integrated backward for up to
/// `t_end` time units, stopping early if the orbit leaves the ball of radius
/// `escape_radius`. Sample times are negative.
pub fn stable_separatrix_cplus(
    p: &LorenzParams,
    side: Branch,
    eps: f64,
    t_end: f64,
    tol: f64,
    escape_radius: f64,
) -> Result<Trajectory, LorenzError> {
    check_eps(eps)?;
    let spec = secondary_spectrum(p).ok_or_else(|| {
        LorenzError::WrongRegime("C+ spectrum is not (real, complex pair)".into())
    })?;
    if !(spec.real < 0.0 && spec.pair.re > 0.0) {
        return Err(LorenzError::WrongRegime(format!(
            "C+ spectrum {} , {} is not (negative real, pair with positive real part)",
            spec.real, spec.pair
        )));
    }
    let c = c_plus(p)?;
    let v = spec.real_vector;
    let s = side.sign() * eps;
    let seed = [c[0] + s * v[0], c[1] + s * v[1], c[2] + s * v[2]];
    let solver = Dopri5::new(tol)?;
    let mut samples = vec![(0.0, seed)];
    let (_, _, stats) = solver.solve(
        |y| vector_field(y, p),
        0.0,
        seed,
        -t_end.abs(),
        |st| {
            samples.push((st.t1, st.y1));
            if norm(&st.y1) > escape_radius {
                Control::Stop
            } else {
                Control::Continue
            }
        },
    )?;
    Ok(Trajectory { samples, stats })
}

/// Gap between W^u(0)− and W^s(C⁺) on the plane z = ρ − 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MissVector {
    pub dx: f64,
    pub dy: f64,
    /// Crossing point of the unstable separatrix.
    pub unstable_hit: State,
    /// Crossing point of the stable separatrix.
    pub stable_hit: State,
}

impl MissVector {
    pub fn norm(&self) -> f64 {
        self.dx.hypot(self.dy)
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.dx, self.dy]
    }
}

/// Upward crossings (ż > 0 in forward time) of z = ρ − 1, in the order the
/// orbit meets them.
#[allow(clippy::too_many_arguments)]
fn plane_crossings<F>(
    p: &LorenzParams,
    seed: State,
    t_end: f64,
    tol: f64,
    max_hits: usize,
    skip: F,
    escape_radius: f64,
) -> Result<Vec<State>, LorenzError>
where
    F: Fn(&State) -> bool,
{
    let solver = Dopri5::new(tol)?;
    let level = p.rho - 1.0;
    let mut hits = Vec::new();
    solver.solve(|y| vector_field(y, p), 0.0, seed, t_end, |st| {
        if let Some((_, y)) = st.locate(|y| y[2] - level, 1e-14) {
            let zdot = y[0] * y[1] - p.beta * y[2];
            if zdot > 0.0 && !skip(&y) {
                hits.push(y);
                if hits.len() >= max_hits {
                    return Control::Stop;
                }
            }
        }
        if norm(&st.y1) > escape_radius {
            return Control::Stop;
        }
        Control::Continue
    })?;
    Ok(hits)
}

/// Miss vector between W^u(0)− and the backward W^s(C⁺) branch on the plane
/// z = ρ − 1, each taken at its designated upward crossing.
///
/// The stable side skips crossings within `10·eps` of C⁺ (the seed lies on
/// the plane up to O(eps)).
pub fn miss_distance(p: &LorenzParams, cfg: &SeparatrixConfig) -> Result<MissVector, LorenzError> {
    miss_distance_to(p, cfg, Branch::Plus)
}

/// Miss vector against W^s(C±). `target = Plus` is [`miss_distance`];
/// `target = Minus` integrates the mirrored seeds (W^u(0)+ against W^s(C⁻),
/// same crossings) and reports the gap mirrored back, so by symmetry
/// both agree up to integration error.
pub fn miss_distance_to(
    p: &LorenzParams,
    cfg: &SeparatrixConfig,
    target: Branch,
) -> Result<MissVector, LorenzError> {
    check_eps(cfg.eps)?;
    let sgn = -target.sign();
    let v = eigen_origin(p).unstable_vector;
    let e = sgn * cfg.eps;
    let seed_u = [e * v[0], e * v[1], e * v[2]];
    let hits_u = plane_crossings(
        p,
        seed_u,
        cfg.t_unstable,
        cfg.tol,
        cfg.unstable_crossing + 1,
        |_| false,
        cfg.escape_radius,
    )?;
    let unstable_hit = *hits_u
        .get(cfg.unstable_crossing)
        .ok_or(LorenzError::NoCrossing(cfg.t_unstable))?;

    let spec = secondary_spectrum(p)
        .ok_or_else(|| LorenzError::WrongRegime("C+ spectrum is not (real, complex pair)".into()))?;
    if !(spec.real < 0.0 && spec.pair.re > 0.0) {
        return Err(LorenzError::WrongRegime(format!(
            "C+ spectrum {}, {} is not (negative real, pair with positive real part)",
            spec.real, spec.pair
        )));
    }
    let mut c = c_plus(p)?;
    let mut w = spec.real_vector;
    if target == Branch::Minus {
        c = mirror(&c);
        w = mirror(&w);
    }
    let s = cfg.stable_branch.sign() * cfg.eps;
    let seed_s = [c[0] + s * w[0], c[1] + s * w[1], c[2] + s * w[2]];
    let near = 10.0 * cfg.eps;
    let hits_s = plane_crossings(
        p,
        seed_s,
        -cfg.t_stable.abs(),
        cfg.tol,
        1,
        |y| super::dist(y, &c) < near,
        cfg.escape_radius,
    )?;
    let stable_hit = *hits_s.first().ok_or(LorenzError::NoCrossing(cfg.t_stable))?;
    let flip = target.sign();
    Ok(MissVector {
        dx: flip * (unstable_hit[0] - stable_hit[0]),
        dy: flip * (unstable_hit[1] - stable_hit[1]),
        unstable_hit,
        stable_hit,
    })
}

fn check_eps(eps: f64) -> Result<(), LorenzError> {
    if (1e-9..=1e-5).contains(&eps) {
        Ok(())
    } else {
        Err(LorenzError::InvalidParams(format!("eps = {eps} outside [1e-9, 1e-5]")))
    }
}

pub(crate) fn norm(s: &State) -> f64 {
    (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt()
}
