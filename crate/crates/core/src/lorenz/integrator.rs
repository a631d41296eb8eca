//! Dormand–Prince 5(4) integrator with continuous extension.
//!
//! The stepper is written for three-dimensional autonomous systems, which is
//! all the Lorenz code needs. Each accepted step exposes a [`DenseStep`] so
//! callers can locate events (plane crossings, distance thresholds) without
//! re-integrating.

use thiserror::Error;

pub type State = [f64; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrateError {
    #[error("tolerance {0} outside [1e-13, 1e-6]")]
    BadTolerance(f64),
    #[error("step size underflow at t = {t}; last good state {state:?}")]
    StepUnderflow { t: f64, state: State },
    #[error("non-finite state at t = {t}; last good state {state:?}")]
    NonFinite { t: f64, state: State },
    #[error("step budget of {0} exhausted")]
    TooManySteps(usize),
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step together with its continuous extension.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep {
    pub t0: f64,
    pub t1: f64,
    pub y0: State,
    pub y1: State,
    rcont: [State; 5],
}

impl DenseStep {
    /// Fourth-order interpolant on `[t0, t1]` (or `[t1, t0]` for backward steps).
    pub fn eval(&self, t: f64) -> State {
        let h = self.t1 - self.t0;
        let theta = (t - self.t0) / h;
        let theta1 = 1.0 - theta;
        let r = &self.rcont;
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = r[0][i]
                + theta * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i])));
        }
        out
    }

    /// Locates a sign change of `g` inside the step by bisection on the
    /// interpolant. Returns `None` when `g` has the same sign at both ends.
    pub fn locate<G: Fn(&State) -> f64>(&self, g: G, time_tol: f64) -> Option<(f64, State)> {
        let g0 = g(&self.y0);
        let g1 = g(&self.y1);
        if g0 == 0.0 {
            return Some((self.t0, self.y0));
        }
        if g0.signum() == g1.signum() {
            return None;
        }
        let (mut lo, mut hi) = (self.t0, self.t1);
        for _ in 0..200 {
            if (hi - lo).abs() <= time_tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let gm = g(&self.eval(mid));
            if gm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if gm.signum() == g0.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        Some((t, self.eval(t)))
    }
}

/// Counters accumulated over one integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejected: usize,
    /// Largest accepted local error estimate, in units of the requested tolerance
    /// times `max(1, |y|)`; never exceeds the tolerance.
    pub max_error_estimate: f64,
}

/// What an observer wants after seeing a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub tol: f64,
    pub max_steps: usize,
    pub h_max: f64,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Result<Self, IntegrateError> {
        if !(1e-13..=1e-6).contains(&tol) {
            return Err(IntegrateError::BadTolerance(tol));
        }
        Ok(Self {
            tol,
            max_steps: 2_000_000,
            h_max: 0.1,
        })
    }

    /// Integrates `f` from `(t0, y0)` to `t_end` (either direction), handing each
    /// accepted step to `observer`. Returns the final time, state and stats.
    pub fn solve<F, O>(
        &self,
        f: F,
        t0: f64,
        y0: State,
        t_end: f64,
        mut observer: O,
    ) -> Result<(f64, State, IntegratorStats), IntegrateError>
    where
        F: Fn(&State) -> State,
        O: FnMut(&DenseStep) -> Control,
    {
        let mut stats = IntegratorStats::default();
        if t_end == t0 {
            return Ok((t0, y0, stats));
        }
        let dir = (t_end - t0).signum();
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(&y);
        let mut h = dir * self.initial_step(&f, &y, &k1, t_end - t0);
        let mut err_old: f64 = 1e-4;

        loop {
            if stats.steps + stats.rejected > self.max_steps {
                return Err(IntegrateError::TooManySteps(self.max_steps));
            }
            if (t_end - t) * dir <= 0.0 {
                break;
            }
            if (t + h - t_end) * dir > 0.0 {
                h = t_end - t;
            }
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(IntegrateError::StepUnderflow { t, state: y });
            }

            let (y1, k7, err, rcont) = self.step(&f, &y, &k1, h);
            if !err.is_finite() || y1.iter().any(|v| !v.is_finite()) {
                // treat as a rejection with a sharp cut
                stats.rejected += 1;
                h *= 0.2;
                if h.abs() < 1e-14 * t.abs().max(1.0) {
                    return Err(IntegrateError::NonFinite { t, state: y });
                }
                continue;
            }
            if err <= 1.0 {
                stats.steps += 1;
                stats.max_error_estimate = stats.max_error_estimate.max(err * self.tol);
                let t_new = if (t + h - t_end) * dir >= 0.0 { t_end } else { t + h };
                let ds = DenseStep {
                    t0: t,
                    t1: t_new,
                    y0: y,
                    y1,
                    rcont,
                };
                t = t_new;
                y = y1;
                k1 = k7;
                let ctl = observer(&ds);
                // PI step-size control (Hairer's beta = 0.04)
                let fac = 0.9 * err.max(1e-10).powf(-0.2 + 0.04 * 0.75) * err_old.powf(0.04);
                err_old = err.max(1e-4);
                h *= fac.clamp(0.2, 10.0);
                if h.abs() > self.h_max {
                    h = dir * self.h_max;
                }
                if ctl == Control::Stop {
                    break;
                }
            } else {
                stats.rejected += 1;
                let fac = 0.9 * err.powf(-0.2);
                h *= fac.clamp(0.2, 1.0);
            }
        }
        Ok((t, y, stats))
    }

    fn initial_step<F: Fn(&State) -> State>(&self, f: &F, y: &State, k1: &State, span: f64) -> f64 {
        let sc = |v: f64| self.tol * v.abs().max(1.0);
        let d0 = rms(y.iter().map(|v| v / sc(*v)));
        let d1 = rms(k1.iter().zip(y).map(|(k, v)| k / sc(*v)));
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min(span.abs()).min(self.h_max);
        let y1: State = std::array::from_fn(|i| y[i] + h0 * span.signum() * k1[i]);
        let k2 = f(&y1);
        let d2 = rms(k2.iter().zip(k1).zip(y).map(|((a, b), v)| (a - b) / sc(*v))) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(span.abs()).min(self.h_max)
    }

    #[allow(clippy::type_complexity)]
    fn step<F: Fn(&State) -> State>(
        &self,
        f: &F,
        y: &State,
        k1: &State,
        h: f64,
    ) -> (State, State, f64, [State; 5]) {
        let lin = |coef: &[(f64, &State)]| -> State {
            std::array::from_fn(|i| y[i] + h * coef.iter().map(|(c, k)| c * k[i]).sum::<f64>())
        };
        let k2 = f(&lin(&[(A21, k1)]));
        let k3 = f(&lin(&[(A31, k1), (A32, &k2)]));
        let k4 = f(&lin(&[(A41, k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(&lin(&[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(&lin(&[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y1 = lin(&[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(&y1);

        let mut acc = 0.0;
        for i in 0..3 {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = self.tol * y[i].abs().max(y1[i].abs()).max(1.0);
            acc += (e / sc).powi(2);
        }
        let err = (acc / 3.0).sqrt();

        let mut rcont = [[0.0; 3]; 5];
        for i in 0..3 {
            let ydiff = y1[i] - y[i];
            let bspl = h * k1[i] - ydiff;
            rcont[0][i] = y[i];
            rcont[1][i] = ydiff;
            rcont[2][i] = bspl;
            rcont[3][i] = ydiff - h * k7[i] - bspl;
            rcont[4][i] = h
                * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        (y1, k7, err, rcont)
    }
}

fn rms<I: Iterator<Item = f64>>(it: I) -> f64 {
    let (s, n) = it.fold((0.0, 0usize), |(s, n), v| (s + v * v, n + 1));
    (s / n.max(1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(y: &State) -> State {
        [-y[1], y[0], -0.5 * y[2]]
    }

    #[test]
    fn harmonic_oscillator_matches_closed_form() {
        let solver = Dopri5::new(1e-11).unwrap();
        let (t, y, stats) = solver
            .solve(rotation, 0.0, [1.0, 0.0, 1.0], 10.0, |_| Control::Continue)
            .unwrap();
        assert_eq!(t, 10.0);
        assert!((y[0] - 10f64.cos()).abs() < 1e-8);
        assert!((y[1] - 10f64.sin()).abs() < 1e-8);
        assert!((y[2] - (-5f64).exp()).abs() < 1e-9);
        assert!(stats.max_error_estimate <= 1e-11);
    }

    #[test]
    fn backward_integration() {
        let solver = Dopri5::new(1e-10).unwrap();
        let (_, y, _) = solver
            .solve(rotation, 0.0, [1.0, 0.0, 1.0], -3.0, |_| Control::Continue)
            .unwrap();
        assert!((y[0] - 3f64.cos()).abs() < 1e-7);
        assert!((y[1] + 3f64.sin()).abs() < 1e-7);
        assert!((y[2] - 1.5f64.exp()).abs() < 1e-7);
    }

    #[test]
    fn dense_output_and_event_location() {
        let solver = Dopri5::new(1e-11).unwrap();
        let mut hit = None;
        solver
            .solve(rotation, 0.0, [1.0, 0.0, 0.0], 3.0, |s| {
                if let Some(ev) = s.locate(|y| y[0], 1e-13) {
                    hit = Some(ev);
                    return Control::Stop;
                }
                Control::Continue
            })
            .unwrap();
        let (t, y) = hit.unwrap();
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-8, "t = {t}");
        assert!((y[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(Dopri5::new(1e-3).is_err());
        assert!(Dopri5::new(1e-14).is_err());
    }
}
