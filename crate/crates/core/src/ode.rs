//! Adaptive explicit Runge-Kutta integration for planar systems.
//!
//! The scheme is the classical embedded 5(4) Dormand-Prince pair: seven
//! stages, first-same-as-last, fifth-order propagation with a fourth-order
//! error estimate. Step size is driven by a PI controller on the weighted
//! RMS error with per-component scale `tol * (1 + |y|)`, so `tol` acts as a
//! relative tolerance on O(1) states and an absolute one near zero.
//!
//! Every accepted step stores the endpoint states and derivatives, giving a
//! free C1 cubic Hermite interpolant per step ([`OdeStep::interpolate`]).
//! Event handling is the caller's: a `stop_when` predicate ends integration
//! after the first step whose endpoint satisfies it, and the crossing can
//! then be refined on the interpolant. A separate `diverge_when` guard
//! truncates runs that leave the region of interest.

use crate::{Error, Result};

/// Supported tolerance range; outside it either rounding noise dominates or
/// the controller is meaningless.
pub const MIN_TOL: f64 = 1e-13;
pub const MAX_TOL: f64 = 1e-3;

/// Steps are never allowed below this fraction of the requested time span.
const UNDERFLOW_FRACTION: f64 = 1e-15;

/// One accepted step with endpoint derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeStep {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; 2],
    pub y1: [f64; 2],
    pub f0: [f64; 2],
    pub f1: [f64; 2],
}

impl OdeStep {
    /// Cubic Hermite interpolation; exact at both endpoints, C1 across steps.
    pub fn interpolate(&self, t: f64) -> [f64; 2] {
        let h = self.t1 - self.t0;
        let u = (t - self.t0) / h;
        let u2 = u * u;
        let u3 = u2 * u;
        let c00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let c10 = u3 - 2.0 * u2 + u;
        let c01 = -2.0 * u3 + 3.0 * u2;
        let c11 = u3 - u2;
        let mut y = [0.0; 2];
        for i in 0..2 {
            y[i] =
                c00 * self.y0[i] + c10 * h * self.f0[i] + c01 * self.y1[i] + c11 * h * self.f1[i];
        }
        y
    }
}

/// How an integration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeOutcome {
    /// Reached `t_end`.
    ReachedEnd,
    /// `stop_when` fired; the final step's endpoint satisfies it.
    Stopped,
    /// `diverge_when` fired; the run is truncated there.
    GuardTriggered,
}

/// The accepted-step record of one integration.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub steps: Vec<OdeStep>,
    pub outcome: OdeOutcome,
    pub n_accepted: usize,
    pub n_rejected: usize,
}

impl OdeSolution {
    /// Final time reached.
    pub fn t_final(&self) -> f64 {
        self.steps.last().map(|s| s.t1).unwrap_or(f64::NAN)
    }

    /// Final state.
    pub fn y_final(&self) -> [f64; 2] {
        self.steps.last().map(|s| s.y1).unwrap_or([f64::NAN; 2])
    }

    /// Dense evaluation at any time covered by the accepted steps.
    pub fn sample(&self, t: f64) -> Option<[f64; 2]> {
        let first = self.steps.first()?;
        if t < first.t0 || t > self.t_final() {
            return None;
        }
        let idx = self
            .steps
            .partition_point(|s| s.t1 < t)
            .min(self.steps.len() - 1);
        Some(self.steps[idx].interpolate(t))
    }
}

/// Integration controls. `stop_when` and `diverge_when` are evaluated at
/// each accepted step endpoint; divergence wins if both fire.
pub struct OdeOptions<'a> {
    pub tol: f64,
    pub stop_when: Option<&'a dyn Fn(f64, &[f64; 2]) -> bool>,
    pub diverge_when: Option<&'a dyn Fn(f64, &[f64; 2]) -> bool>,
    pub max_steps: usize,
}

impl<'a> OdeOptions<'a> {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            stop_when: None,
            diverge_when: None,
            max_steps: 1_000_000,
        }
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights (row 7 of A; the pair is first-same-as-last).
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// Error weights: fifth-order minus the embedded fourth-order row.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `dy/dt = f(t, y)` from `(t0, y0)` to `t_end > t0`.
pub fn solve_ivp<F>(
    mut f: F,
    t0: f64,
    y0: [f64; 2],
    t_end: f64,
    opts: &OdeOptions,
) -> Result<OdeSolution>
where
    F: FnMut(f64, &[f64; 2]) -> [f64; 2],
{
    if !(opts.tol >= MIN_TOL && opts.tol <= MAX_TOL) {
        return Err(Error::InvalidTolerance { tol: opts.tol });
    }
    if !(t_end > t0) || !t_end.is_finite() || !t0.is_finite() {
        return Err(Error::InvalidInput {
            reason: format!("time span [{t0}, {t_end}] is not forward and finite"),
        });
    }

    let tol = opts.tol;
    let span = t_end - t0;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut steps: Vec<OdeStep> = Vec::new();
    let mut solution_outcome = OdeOutcome::ReachedEnd;

    if let Some(guard) = opts.diverge_when {
        if guard(t, &y) {
            return Ok(OdeSolution {
                steps,
                outcome: OdeOutcome::GuardTriggered,
                n_accepted: 0,
                n_rejected: 0,
            });
        }
    }
    if let Some(stop) = opts.stop_when {
        if stop(t, &y) {
            return Ok(OdeSolution {
                steps,
                outcome: OdeOutcome::Stopped,
                n_accepted: 0,
                n_rejected: 0,
            });
        }
    }

    let mut h = initial_step(&mut f, t0, &y0, &k1, tol, span);
    let mut n_accepted = 0usize;
    let mut n_rejected = 0usize;
    let mut facold: f64 = 1e-4;
    let mut just_rejected = false;

    const SAFETY: f64 = 0.9;
    const BETA: f64 = 0.04;
    const EXPO: f64 = 0.2 - BETA * 0.75;

    while t < t_end {
        if n_accepted + n_rejected >= opts.max_steps {
            return Err(Error::ConvergenceFailure {
                context: "integrator exceeded its step budget",
            });
        }
        if h < UNDERFLOW_FRACTION * span || !h.is_finite() {
            return Err(Error::StepSizeUnderflow { t });
        }
        let clipped = h >= t_end - t;
        if clipped {
            h = t_end - t;
        }

        // The six fresh stages; k1 carries over (first-same-as-last).
        let mut k = [[0.0; 2]; 7];
        k[0] = k1;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s - 1][j];
                if a != 0.0 {
                    ys[0] += h * a * kj[0];
                    ys[1] += h * a * kj[1];
                }
            }
            k[s] = f(t + C[s] * h, &ys);
        }

        let mut y_next = y;
        for (j, kj) in k.iter().enumerate() {
            if B[j] != 0.0 {
                y_next[0] += h * B[j] * kj[0];
                y_next[1] += h * B[j] * kj[1];
            }
        }

        let mut err_sq = 0.0;
        for i in 0..2 {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h;
            let scale = tol * (1.0 + y[i].abs().max(y_next[i].abs()));
            err_sq += (e / scale) * (e / scale);
        }
        let err = (0.5 * err_sq).sqrt();

        if err <= 1.0 {
            let t_next = if clipped { t_end } else { t + h };
            let f_next = k[6]; // stage 7 is f(t+h, y_next)
            steps.push(OdeStep {
                t0: t,
                t1: t_next,
                y0: y,
                y1: y_next,
                f0: k1,
                f1: f_next,
            });
            n_accepted += 1;
            t = t_next;
            y = y_next;
            k1 = f_next;

            if let Some(guard) = opts.diverge_when {
                if guard(t, &y) {
                    solution_outcome = OdeOutcome::GuardTriggered;
                    break;
                }
            }
            if let Some(stop) = opts.stop_when {
                if stop(t, &y) {
                    solution_outcome = OdeOutcome::Stopped;
                    break;
                }
            }

            let mut scale = SAFETY * err.powf(-EXPO) * facold.powf(BETA);
            scale = scale.clamp(0.2, 10.0);
            if just_rejected {
                scale = scale.min(1.0);
            }
            facold = err.max(1e-4);
            just_rejected = false;
            h *= scale;
        } else {
            n_rejected += 1;
            just_rejected = true;
            h *= (SAFETY * err.powf(-0.2)).clamp(0.1, 1.0);
        }
    }

    Ok(OdeSolution {
        steps,
        outcome: solution_outcome,
        n_accepted,
        n_rejected,
    })
}

/// Standard automatic initial step: balance the first derivative against the
/// state scale, probe one Euler step, and bound by the implied fifth-order
/// accuracy requirement.
fn initial_step<F>(f: &mut F, t0: f64, y0: &[f64; 2], f0: &[f64; 2], tol: f64, span: f64) -> f64
where
    F: FnMut(f64, &[f64; 2]) -> [f64; 2],
{
    let sc = [tol * (1.0 + y0[0].abs()), tol * (1.0 + y0[1].abs())];
    let d0 = ((y0[0] / sc[0]).powi(2) + (y0[1] / sc[1]).powi(2)).sqrt();
    let d1 = ((f0[0] / sc[0]).powi(2) + (f0[1] / sc[1]).powi(2)).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * (d0 / d1)
    };
    let h0 = h0.min(span);

    let y1 = [y0[0] + h0 * f0[0], y0[1] + h0 * f0[1]];
    let f1 = f(t0 + h0, &y1);
    let d2 = (((f1[0] - f0[0]) / sc[0]).powi(2) + ((f1[1] - f0[1]) / sc[1]).powi(2)).sqrt() / h0;

    let d_max = d1.max(d2);
    let h1 = if d_max <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d_max).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}
