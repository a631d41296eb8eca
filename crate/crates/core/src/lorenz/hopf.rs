//! Hopf threshold of C±: closed form and an eigenvalue-crossing detector.

use super::{cubic_roots, secondary_char_poly, CubicRoots, LorenzError, LorenzParams};

/// ρ_H = σ(σ + β + 3)/(σ − β − 1), where the complex pair at C± crosses the
/// imaginary axis.
pub fn hopf_threshold(sigma: f64, beta: f64) -> Result<f64, LorenzError> {
    if !(sigma > 0.0 && beta > 0.0) {
        return Err(LorenzError::InvalidParams(format!("sigma = {sigma}, beta = {beta}")));
    }
    if sigma <= beta + 1.0 {
        return Err(LorenzError::NoHopfThreshold { sigma, beta });
    }
    Ok(sigma * (sigma + beta + 3.0) / (sigma - beta - 1.0))
}

/// Largest real part in the spectrum of C± at (σ, ρ, β).
pub fn secondary_max_real_part(sigma: f64, rho: f64, beta: f64) -> f64 {
    let p = LorenzParams { sigma, rho, beta };
    let (a2, a1, a0) = secondary_char_poly(&p);
    match cubic_roots(a2, a1, a0) {
        CubicRoots::OneRealPair(r, z) => r.max(z.re),
        CubicRoots::ThreeReal(v) => v[2],
    }
}

/// Bisection on ρ for the sign change of the largest real part at C±,
/// independent of the closed form. The bracket starts at ρ = 1 and doubles
/// its upper end until the sign flips. `rel_tol` is relative to ρ.
pub fn hopf_crossing_detector(sigma: f64, beta: f64, rel_tol: f64) -> Result<f64, LorenzError> {
    if !(sigma > 0.0 && beta > 0.0) {
        return Err(LorenzError::InvalidParams(format!("sigma = {sigma}, beta = {beta}")));
    }
    let f = |rho: f64| secondary_max_real_part(sigma, rho, beta);
    let mut lo = 1.0 + 1e-9;
    let mut hi = 2.0;
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(LorenzError::NoHopfThreshold { sigma, beta });
        }
    }
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_threshold() {
        let rh = hopf_threshold(10.0, 8.0 / 3.0).unwrap();
        assert!((rh - 470.0 / 19.0).abs() < 1e-12);
        let det = hopf_crossing_detector(10.0, 8.0 / 3.0, 1e-12).unwrap();
        assert!((det - rh).abs() < 1e-6, "{det} vs {rh}");
    }

    #[test]
    fn no_threshold_below_beta_plus_one() {
        assert!(matches!(
            hopf_threshold(3.0, 8.0 / 3.0),
            Err(LorenzError::NoHopfThreshold { .. })
        ));
        assert!(hopf_crossing_detector(3.0, 8.0 / 3.0, 1e-10).is_err());
    }

    #[test]
    fn near_degenerate_sigma() {
        let beta = 8.0 / 3.0;
        let sigma = beta + 1.0 + 0.001;
        let rh = hopf_threshold(sigma, beta).unwrap();
        assert!(rh > 1e4);
        let det = hopf_crossing_detector(sigma, beta, 1e-12).unwrap();
        assert!((det - rh).abs() / rh < 1e-6, "{det} vs {rh}");
    }

    #[test]
    fn sign_change_straddles_threshold() {
        let rh = 470.0 / 19.0;
        assert!(secondary_max_real_part(10.0, rh - 0.01, 8.0 / 3.0) < 0.0);
        assert!(secondary_max_real_part(10.0, rh + 0.01, 8.0 / 3.0) > 0.0);
    }
}
