//! Two-parameter shooting for the T-point: Newton on (ρ, σ) with β fixed,
//! finite-difference Jacobian and a halving line search.

use serde::{Deserialize, Serialize};

use super::{miss_distance, LorenzError, LorenzParams, MissVector, SeparatrixConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TPointConfig {
    /// Stop once ‖miss‖ falls below this.
    pub miss_tol: f64,
    pub max_iter: usize,
    /// Central-difference step in ρ and σ.
    pub fd_step: f64,
    /// Smallest damping factor tried by the line search.
    pub min_damping: f64,
    pub separatrix: SeparatrixConfig,
}

impl Default for TPointConfig {
    fn default() -> Self {
        Self {
            miss_tol: 1e-8,
            max_iter: 100,
            fd_step: 1e-6,
            min_damping: 1.0 / 1024.0,
            separatrix: SeparatrixConfig::default(),
        }
    }
}

/// One row of the search log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TPointStep {
    pub iteration: usize,
    pub rho: f64,
    pub sigma: f64,
    pub miss_norm: f64,
    pub damping: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TPointResult {
    pub params: LorenzParams,
    pub miss: MissVector,
    /// ∂(dx, dy)/∂(ρ, σ) at the returned point.
    pub jacobian: [[f64; 2]; 2],
    pub condition_number: f64,
    pub log: Vec<TPointStep>,
}

fn eval(beta: f64, rho: f64, sigma: f64, cfg: &SeparatrixConfig) -> Result<MissVector, LorenzError> {
    let p = LorenzParams::new(sigma, rho, beta)?;
    miss_distance(&p, cfg)
}

/// Central-difference Jacobian of the miss vector in (ρ, σ). The four
/// evaluations run in parallel.
pub fn miss_jacobian(
    p: &LorenzParams,
    cfg: &SeparatrixConfig,
    h: f64,
) -> Result<[[f64; 2]; 2], LorenzError> {
    let offsets = [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)];
    let evals: Vec<Result<MissVector, LorenzError>> = {
        use rayon::prelude::*;
        offsets
            .par_iter()
            .map(|&(dr, ds)| eval(p.beta, p.rho + dr, p.sigma + ds, cfg))
            .collect()
    };
    let mut m = Vec::with_capacity(4);
    for e in evals {
        m.push(e?);
    }
    let d = 2.0 * h;
    Ok([
        [(m[0].dx - m[1].dx) / d, (m[2].dx - m[3].dx) / d],
        [(m[0].dy - m[1].dy) / d, (m[2].dy - m[3].dy) / d],
    ])
}

/// 2-norm condition number of a 2×2 matrix.
pub fn condition_number(j: &[[f64; 2]; 2]) -> f64 {
    let [[a, b], [c, d]] = *j;
    let fro2 = a * a + b * b + c * c + d * d;
    let det = (a * d - b * c).abs();
    if det == 0.0 {
        return f64::INFINITY;
    }
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let s_max = ((fro2 + disc) / 2.0).sqrt();
    let s_min = det / s_max;
    s_max / s_min
}

/// Newton iteration on miss_distance(ρ, σ) = 0 from `initial` (β is kept).
pub fn find_tpoint(initial: &LorenzParams, cfg: &TPointConfig) -> Result<TPointResult, LorenzError> {
    initial.validate()?;
    let beta = initial.beta;
    let (mut rho, mut sigma) = (initial.rho, initial.sigma);
    let mut miss = eval(beta, rho, sigma, &cfg.separatrix)?;
    let mut log = vec![TPointStep { iteration: 0, rho, sigma, miss_norm: miss.norm(), damping: 0.0 }];

    for it in 1..=cfg.max_iter {
        let p = LorenzParams::new(sigma, rho, beta)?;
        let j = miss_jacobian(&p, &cfg.separatrix, cfg.fd_step)?;
        if miss.norm() < cfg.miss_tol {
            return Ok(TPointResult {
                params: p,
                miss,
                jacobian: j,
                condition_number: condition_number(&j),
                log,
            });
        }
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let step_r = -(j[1][1] * miss.dx - j[0][1] * miss.dy) / det;
        let step_s = -(-j[1][0] * miss.dx + j[0][0] * miss.dy) / det;

        let mut lambda = 1.0;
        let mut accepted = None;
        while lambda >= cfg.min_damping {
            let (r, s) = (rho + lambda * step_r, sigma + lambda * step_s);
            if r > 1.0 && s > 0.0 {
                if let Ok(m) = eval(beta, r, s, &cfg.separatrix) {
                    if m.norm() < miss.norm() {
                        accepted = Some((r, s, m));
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        let Some((r, s, m)) = accepted else { break };
        rho = r;
        sigma = s;
        miss = m;
        log.push(TPointStep { iteration: it, rho, sigma, miss_norm: miss.norm(), damping: lambda });
    }

    // The final iterate may have converged on the last step.
    if miss.norm() < cfg.miss_tol {
        let p = LorenzParams::new(sigma, rho, beta)?;
        let j = miss_jacobian(&p, &cfg.separatrix, cfg.fd_step)?;
        return Ok(TPointResult { params: p, miss, jacobian: j, condition_number: condition_number(&j), log });
    }
    Err(LorenzError::Diverged {
        iterations: log.len() - 1,
        last_residual: miss.norm(),
        history: log.iter().map(|s| s.miss_norm).collect(),
    })
}
