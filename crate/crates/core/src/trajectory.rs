//! Particle trajectories in the moving frame and in physical space.
//!
//! In the frame travelling with the wave, a particle at `(X, Y)` obeys
//!
//! ```text
//! dX/dt = k M e^Y cos X - omega
//! dY/dt = k M e^Y sin X
//! ```
//!
//! which is the Hamiltonian flow of [`phase_portrait::hamiltonian`]. The
//! physical path follows from `x = X/k + (omega/k) t`, `y = Y/k`. Orbits
//! below the separatrix are closed curves in the frame; one circuit (from
//! `X = pi` down to `X = -pi`) takes slightly longer than the wave period,
//! and that excess is exactly what displaces the particle forward: the
//! per-orbit drift obeys `x(theta) - x(0) = (theta omega - 2 pi)/k`.
//!
//! [`integrate_phase`] produces a sampled trajectory with a conservation
//! audit, [`measure_period_and_drift`] locates the orbit period by event
//! detection and measures the drift, and [`sign_pattern_check`] verifies
//! the characteristic velocity-sign pattern in each quadrant of the orbit.

use std::f64::consts::PI;

use crate::drift_analysis;
use crate::ode::{solve_ivp, OdeOptions, OdeOutcome, OdeStep};
use crate::phase_portrait::{self, PhasePoint};
use crate::wave_field::WaveParams;
use crate::{Error, Result};

/// Orbits above the separatrix rise without bound; integration is cut off
/// this far above the critical layer to avoid `e^Y` overflow.
const DIVERGENCE_MARGIN: f64 = 20.0;

/// Relative width for event bisection on the dense-output interpolant.
const EVENT_TOL: f64 = 1e-13;

/// Accepted depth mismatch after one orbit, `|Y(theta) - Y0|`.
const RETURN_TOL: f64 = 1e-8;

/// How an integration run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Reached the requested end time.
    Completed,
    /// Left the bounded region (`Y > Y* + 20`); the record is truncated.
    Diverged,
}

/// A sampled moving-frame trajectory with its physical-frame image.
///
/// Samples sit at the integrator's accepted steps, with the initial state
/// first; dense evaluation between samples is available through
/// [`TrajectoryRecord::phase_at`].
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub params: WaveParams,
    /// Sample times, strictly increasing, starting at 0.
    pub t: Vec<f64>,
    /// Moving-frame state per sample.
    pub phase: Vec<PhasePoint>,
    /// Physical position per sample: `(X/k + (omega/k) t, Y/k)`.
    pub physical: Vec<(f64, f64)>,
    /// Hamiltonian at the initial state.
    pub h0: f64,
    /// Max over samples of `|H - H0| / (1 + |H0|)`.
    pub max_h_drift: f64,
    pub status: RunStatus,
    steps: Vec<OdeStep>,
}

impl TrajectoryRecord {
    /// Dense moving-frame state at any time inside the sampled range.
    pub fn phase_at(&self, t: f64) -> Option<PhasePoint> {
        if t == 0.0 {
            return self.phase.first().copied();
        }
        let idx = self.steps.partition_point(|s| s.t1 < t);
        let step = self.steps.get(idx.min(self.steps.len().checked_sub(1)?))?;
        if t < step.t0 || t > step.t1 {
            return None;
        }
        let y = step.interpolate(t);
        Some(PhasePoint::new(y[0], y[1]))
    }

    /// Dense physical position at any time inside the sampled range.
    pub fn physical_at(&self, t: f64) -> Option<(f64, f64)> {
        self.phase_at(t).map(|pt| to_physical(&self.params, t, pt))
    }
}

/// Result of one event-located period measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodMeasurement {
    /// Orbit period: time from `X = pi` to the first arrival at `X = -pi`.
    pub theta: f64,
    /// Net forward displacement over the orbit, `x(theta) - x(0)`.
    pub drift: f64,
    /// Starting moving-frame depth.
    pub y0: f64,
    /// Number of crossings used to define the period.
    pub crossings: u32,
}

/// Tally of the per-quadrant velocity-sign verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignPatternReport {
    pub y0: f64,
    /// Orbit period over which the samples were taken.
    pub theta: f64,
    /// Accepted-step samples checked in each open quadrant, ordered
    /// `(-pi,-pi/2)`, `(-pi/2,0)`, `(0,pi/2)`, `(pi/2,pi)`.
    pub quadrant_counts: [usize; 4],
    /// Samples on (or within 1e-12 of) a quadrant boundary, exempt from
    /// the sign test.
    pub skipped: usize,
}

/// Moving-frame velocity `(dX/dt, dY/dt)` at a phase point.
///
/// Evaluated as `omega * (e^(Y - Y*) cos X - 1, e^(Y - Y*) sin X)`, which is
/// the same flow with `k M` eliminated through `Y* = ln(omega / (k M))`.
/// This arrangement vanishes exactly at the critical point `(0, Y*)`; the
/// naive form leaves a one-ulp residual there that the saddle's `e^(omega t)`
/// instability would amplify into a visible spurious orbit.
pub fn rhs_phase(p: &WaveParams, pt: PhasePoint) -> (f64, f64) {
    let e = (pt.y - p.y_star).exp();
    (p.omega * (e * pt.x.cos() - 1.0), p.omega * e * pt.x.sin())
}

/// Physical-frame particle velocity; identical to the fluid velocity of
/// the wave field at that point.
pub fn rhs_physical(p: &WaveParams, t: f64, x: f64, y: f64) -> (f64, f64) {
    p.velocity(t, x, y)
}

fn to_physical(p: &WaveParams, t: f64, pt: PhasePoint) -> (f64, f64) {
    (pt.x / p.k + (p.omega / p.k) * t, pt.y / p.k)
}

/// Integrates the moving-frame system from `start` over `[0, t_end]`.
///
/// Runs that climb past `Y* + 20` are truncated with
/// [`RunStatus::Diverged`]; runs whose step size collapses instead fail
/// with [`Error::StepSizeUnderflow`]. Either fate is expected for starts
/// above the separatrix.
pub fn integrate_phase(
    p: &WaveParams,
    start: PhasePoint,
    t_end: f64,
    tol: f64,
) -> Result<TrajectoryRecord> {
    let ceiling = p.y_star + DIVERGENCE_MARGIN;
    let diverge = move |_: f64, y: &[f64; 2]| y[1] > ceiling;
    let mut opts = OdeOptions::new(tol);
    opts.diverge_when = Some(&diverge);
    let sol = solve_ivp(phase_rhs_fn(p), 0.0, [start.x, start.y], t_end, &opts)?;
    let status = match sol.outcome {
        OdeOutcome::GuardTriggered => RunStatus::Diverged,
        _ => RunStatus::Completed,
    };
    Ok(build_record(p, start, sol.steps, status))
}

/// Measures the orbit period of the particle released at `(pi, Y0)` and
/// the forward drift it accumulates over that orbit.
///
/// The period is the first arrival time at `X = -pi`, refined by bisection
/// on the dense-output interpolant to a relative width of 1e-13. The drift
/// is measured directly as `x(theta) - x(0)` and cross-checked against the
/// identity `(theta omega - 2 pi)/k`.
pub fn measure_period_and_drift(p: &WaveParams, y0: f64, tol: f64) -> Result<PeriodMeasurement> {
    let (sol, theta, end) = integrate_one_orbit(p, y0, tol)?;
    let _ = sol;

    if (end.y - y0).abs() > RETURN_TOL {
        return Err(Error::ConvergenceFailure {
            context: "orbit failed to return to its starting depth",
        });
    }

    // x(theta) - x(0) with x(0) = pi/k.
    let drift = (end.x - PI) / p.k + (p.omega / p.k) * theta;
    let identity = (theta * p.omega - 2.0 * PI) / p.k;
    let x_end = end.x / p.k + (p.omega / p.k) * theta;
    if (drift - identity).abs() > 1e-12 * x_end.abs() {
        return Err(Error::ConvergenceFailure {
            context: "event location breaks the drift identity",
        });
    }

    Ok(PeriodMeasurement {
        theta,
        drift,
        y0,
        crossings: 1,
    })
}

/// Verifies the quadrant sign pattern of the physical velocity over one
/// orbit started at `(pi, Y0)`.
///
/// At every accepted step strictly inside an open quadrant of `X`, the
/// physical velocity must satisfy the pattern `(-,-)`, `(+,-)`, `(+,+)`,
/// `(-,+)` on `(-pi,-pi/2)`, `(-pi/2,0)`, `(0,pi/2)`, `(pi/2,pi)`
/// respectively. Samples on a boundary are skipped, not failed.
pub fn sign_pattern_check(p: &WaveParams, y0: f64, tol: f64) -> Result<SignPatternReport> {
    let (sol, theta, _) = integrate_one_orbit(p, y0, tol)?;
    let record = build_record(p, PhasePoint::new(PI, y0), sol, RunStatus::Completed);

    let mut quadrant_counts = [0usize; 4];
    let mut skipped = 0usize;
    for ((&t, pt), &(x, y)) in record.t.iter().zip(&record.phase).zip(&record.physical) {
        let xw = wrap_to_pi(pt.x);
        match quadrant_of(xw) {
            None => skipped += 1,
            Some(q) => {
                let (dxdt, dydt) = rhs_physical(p, t, x, y);
                let (want_dx_pos, want_dy_pos) =
                    [(false, false), (true, false), (true, true), (false, true)][q];
                if (dxdt > 0.0) != want_dx_pos || (dydt > 0.0) != want_dy_pos {
                    return Err(Error::SignViolation {
                        t,
                        x: xw,
                        dxdt,
                        dydt,
                    });
                }
                quadrant_counts[q] += 1;
            }
        }
    }

    Ok(SignPatternReport {
        y0,
        theta,
        quadrant_counts,
        skipped,
    })
}

/// Shared machinery: release at `(pi, Y0)`, stop on reaching `X <= -pi`,
/// and refine the crossing time on the interpolant.
fn integrate_one_orbit(
    p: &WaveParams,
    y0: f64,
    tol: f64,
) -> Result<(Vec<OdeStep>, f64, PhasePoint)> {
    if !y0.is_finite() {
        return Err(Error::InvalidInput {
            reason: format!("starting depth Y0 = {y0} is not finite"),
        });
    }
    let y_pi_star = phase_portrait::solve_y_pi(p, p.alpha_star)?;
    if y0 >= y_pi_star {
        return Err(Error::AboveSeparatrix { y0, y_pi_star });
    }

    // Generous horizon: orbit periods grow only logarithmically towards
    // the separatrix, so 200 fixed-depth periods is ample.
    let t_cap = 200.0 * drift_analysis::theta_closed_form(p, y0)?;
    let stop = |_: f64, y: &[f64; 2]| y[0] <= -PI;
    let mut opts = OdeOptions::new(tol);
    opts.stop_when = Some(&stop);
    let sol = solve_ivp(phase_rhs_fn(p), 0.0, [PI, y0], t_cap, &opts)?;
    if sol.outcome != OdeOutcome::Stopped {
        return Err(Error::ConvergenceFailure {
            context: "orbit never reached the trailing trough line X = -pi",
        });
    }

    // The cubic dense output of a fifth-order step is only fourth-order
    // accurate in the step interior, which is too coarse for the depth
    // check below. Re-run just the final step's window at a much tighter
    // tolerance (with a half-step margin in case the crossing shifts) so
    // the interpolant handed to the bisection is accurate to near rounding.
    let coarse = *sol.steps.last().expect("a stopped run has steps");
    let refine_tol = crate::ode::MIN_TOL.max(1e-3 * tol);
    let mut fine_opts = OdeOptions::new(refine_tol);
    fine_opts.stop_when = Some(&stop);
    let fine_end = coarse.t1 + 0.5 * (coarse.t1 - coarse.t0);
    let fine = solve_ivp(phase_rhs_fn(p), coarse.t0, coarse.y0, fine_end, &fine_opts)?;
    let step = if fine.outcome == OdeOutcome::Stopped {
        *fine.steps.last().expect("a stopped run has steps")
    } else {
        coarse
    };

    let (mut lo, mut hi) = (step.t0, step.t1);
    while hi - lo > EVENT_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if step.interpolate(mid)[0] + PI > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let end = step.interpolate(theta);
    Ok((sol.steps, theta, PhasePoint::new(end[0], end[1])))
}

fn phase_rhs_fn(p: &WaveParams) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    let y_star = p.y_star;
    let omega = p.omega;
    move |_, y| {
        let e = (y[1] - y_star).exp();
        [omega * (e * y[0].cos() - 1.0), omega * e * y[0].sin()]
    }
}

fn build_record(
    p: &WaveParams,
    start: PhasePoint,
    steps: Vec<OdeStep>,
    status: RunStatus,
) -> TrajectoryRecord {
    let h0 = phase_portrait::hamiltonian(p, start);
    let mut t = Vec::with_capacity(steps.len() + 1);
    let mut phase = Vec::with_capacity(steps.len() + 1);
    t.push(0.0);
    phase.push(start);
    for s in &steps {
        t.push(s.t1);
        phase.push(PhasePoint::new(s.y1[0], s.y1[1]));
    }
    let physical: Vec<(f64, f64)> = t
        .iter()
        .zip(&phase)
        .map(|(&ti, &pt)| to_physical(p, ti, pt))
        .collect();
    let max_h_drift = phase
        .iter()
        .map(|&pt| (phase_portrait::hamiltonian(p, pt) - h0).abs() / (1.0 + h0.abs()))
        .fold(0.0, f64::max);
    TrajectoryRecord {
        params: *p,
        t,
        phase,
        physical,
        h0,
        max_h_drift,
        status,
        steps,
    }
}

/// Wraps an angle into `(-pi, pi]`.
fn wrap_to_pi(x: f64) -> f64 {
    let mut w = (x + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        w = PI;
    }
    w
}

/// Open-quadrant index of a wrapped angle, or `None` on a boundary.
fn quadrant_of(xw: f64) -> Option<usize> {
    const BOUNDARY_TOL: f64 = 1e-12;
    for b in [-PI, -PI / 2.0, 0.0, PI / 2.0, PI] {
        if (xw - b).abs() <= BOUNDARY_TOL {
            return None;
        }
    }
    Some(if xw < -PI / 2.0 {
        0
    } else if xw < 0.0 {
        1
    } else if xw < PI / 2.0 {
        2
    } else {
        3
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_portrait::{critical_point, grad_hamiltonian, level_x};

    const EPSILON: f64 = 0.1;
    const K: f64 = 1.0;
    const G: f64 = 9.81;

    /// Orbit period from (pi, -1), measured once with an independent
    /// high-order integrator at tolerance 1e-13 and frozen.
    const THETA_ODE_AT_M1: f64 = 2.009_006_034_622_569;
    /// Per-orbit drift from (pi, -1), frozen from the same run.
    const DRIFT_ODE_AT_M1: f64 = 0.009_206_326_733_588_5;

    fn params() -> WaveParams {
        WaveParams::new(EPSILON, K, G).unwrap()
    }

    #[test]
    fn phase_velocity_vanishes_at_critical_point() {
        let p = params();
        let (cp, _) = critical_point(&p);
        let (dx, dy) = rhs_phase(&p, cp);
        assert!(dx.abs() < 1e-13, "dX/dt = {dx}");
        assert_eq!(dy, 0.0);
    }

    #[test]
    fn phase_velocity_on_trough_line_is_strictly_leftward() {
        let p = params();
        for y in [-3.0, -1.0, 0.0, 1.0] {
            let (dx, dy) = rhs_phase(&p, PhasePoint::new(PI, y));
            let expected = -p.k * p.velocity_scale * y.exp() - p.omega;
            assert!((dx - expected).abs() < 1e-13 * expected.abs());
            assert!(dy.abs() < 1e-15, "dY/dt = {dy} should vanish on X = pi");
        }
    }

    #[test]
    fn phase_velocity_agrees_with_hamiltonian_gradient() {
        let p = params();
        let mut state = 0x2545f4914f6cdd1du64;
        for _ in 0..100 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let x = -PI + 2.0 * PI * (state >> 11) as f64 / (1u64 << 53) as f64;
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let y = -5.0 + 7.0 * (state >> 11) as f64 / (1u64 << 53) as f64;
            let pt = PhasePoint::new(x, y);
            let (dx, dy) = rhs_phase(&p, pt);
            let (hx, hy) = grad_hamiltonian(&p, pt);
            assert!((dx - hy).abs() <= 1e-13 * (1.0 + hy.abs()));
            assert!((dy + hx).abs() <= 1e-13 * (1.0 + hx.abs()));
        }
    }

    #[test]
    fn physical_velocity_matches_wave_field() {
        let p = params();
        let (u, v) = rhs_physical(&p, 0.7, 1.3, -0.4);
        let field = p.velocity(0.7, 1.3, -0.4);
        assert_eq!((u, v), field);
        let at_origin = rhs_physical(&p, 0.0, 0.0, 0.0);
        assert_eq!(at_origin, (p.velocity_scale, 0.0));
    }

    #[test]
    fn frames_are_consistent_under_the_coordinate_map() {
        let p = params();
        for (t, x, y) in [(0.0, 0.5, -1.0), (1.7, -2.0, -0.3), (10.0, 4.0, 0.2)] {
            let (dx, dy) = rhs_physical(&p, t, x, y);
            let pt = PhasePoint::new(p.k * x - p.omega * t, p.k * y);
            let (dbig_x, dbig_y) = rhs_phase(&p, pt);
            assert!((dbig_x - (p.k * dx - p.omega)).abs() < 1e-13);
            assert!((dbig_y - p.k * dy).abs() < 1e-13);
        }
    }

    #[test]
    fn critical_point_is_stationary_under_integration() {
        let p = params();
        let (cp, _) = critical_point(&p);
        let rec = integrate_phase(&p, cp, 10.0, 1e-10).unwrap();
        assert_eq!(rec.status, RunStatus::Completed);
        assert!(rec.max_h_drift <= 1e-14, "H drift {}", rec.max_h_drift);
        for pt in &rec.phase {
            assert!((pt.x - cp.x).abs() < 1e-9 && (pt.y - cp.y).abs() < 1e-9);
        }
    }

    #[test]
    fn long_run_keeps_hamiltonian_within_budget() {
        let p = params();
        let t_end = 50.0 * 2.0 * PI / p.omega;
        let rec = integrate_phase(&p, PhasePoint::new(PI, -1.0), t_end, 1e-10).unwrap();
        assert_eq!(rec.status, RunStatus::Completed);
        assert!(rec.max_h_drift <= 1e-8, "H drift {}", rec.max_h_drift);
        for w in rec.t.windows(2) {
            assert!(w[1] > w[0], "sample times must increase");
        }
        // The physical image is the exact coordinate map of the phase samples.
        for i in 0..rec.t.len() {
            let expect = (
                rec.phase[i].x / p.k + (p.omega / p.k) * rec.t[i],
                rec.phase[i].y / p.k,
            );
            assert_eq!(rec.physical[i], expect);
        }
    }

    #[test]
    fn dense_output_matches_samples_at_nodes() {
        let p = params();
        let rec = integrate_phase(&p, PhasePoint::new(PI, -1.0), 5.0, 1e-10).unwrap();
        for (i, &t) in rec.t.iter().enumerate() {
            let pt = rec.phase_at(t).unwrap();
            assert!((pt.x - rec.phase[i].x).abs() < 1e-12);
            assert!((pt.y - rec.phase[i].y).abs() < 1e-12);
        }
        assert!(rec.phase_at(rec.t.last().unwrap() + 1.0).is_none());
    }

    #[test]
    fn above_separatrix_start_diverges_or_underflows() {
        let p = params();
        let y0 = p.y_star + 0.5;
        let x0 = level_x(&p, p.alpha_star, y0).unwrap();
        let t_end = 50.0 * 2.0 * PI / p.omega;
        match integrate_phase(&p, PhasePoint::new(x0, y0), t_end, 1e-10) {
            Ok(rec) => {
                assert_eq!(rec.status, RunStatus::Diverged);
                assert!(rec.phase.last().unwrap().y > p.y_star + DIVERGENCE_MARGIN);
            }
            Err(Error::StepSizeUnderflow { .. }) => {}
            Err(other) => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn period_at_unit_depth_matches_frozen_reference() {
        let p = params();
        let m = measure_period_and_drift(&p, -1.0, 1e-10).unwrap();
        assert!(
            (m.theta - THETA_ODE_AT_M1).abs() < 2e-8,
            "theta = {:.15}",
            m.theta
        );
        assert!(
            (m.drift - DRIFT_ODE_AT_M1).abs() < 1e-9,
            "drift = {:.15}",
            m.drift
        );
        assert_eq!(m.crossings, 1);
        assert_eq!(m.y0, -1.0);
        // The drift identity holds well within its testable tolerance.
        let identity = (m.theta * p.omega - 2.0 * PI) / p.k;
        assert!((m.drift - identity).abs() <= 1e-12 * (PI / p.k + identity).abs());
    }

    #[test]
    fn deep_particles_recover_the_wave_period() {
        let p = params();
        let m = measure_period_and_drift(&p, -6.0, 1e-11).unwrap();
        let wave_period = 2.0 * PI / p.omega;
        let excess = m.theta - wave_period;
        assert!(excess > 0.0, "period floor violated: {excess}");
        assert!(excess <= 1e-5 * wave_period, "excess {excess}");
    }

    #[test]
    fn drift_is_forward_at_every_tested_depth() {
        let p = params();
        let mut last = f64::INFINITY;
        for y0 in [0.0, -0.5, -1.0, -2.0, -4.0, -6.0] {
            let m = measure_period_and_drift(&p, y0, 1e-10).unwrap();
            assert!(m.drift > 0.0, "drift at Y0 = {y0} is {}", m.drift);
            assert!(m.drift < last, "drift must decay with depth");
            last = m.drift;
        }
    }

    #[test]
    fn starts_on_or_above_the_separatrix_crossing_are_rejected() {
        let p = params();
        let err = measure_period_and_drift(&p, 1.5, 1e-10).unwrap_err();
        match err {
            Error::AboveSeparatrix { y0, y_pi_star } => {
                assert_eq!(y0, 1.5);
                assert!((y_pi_star - 1.024_120_550_232_971_9).abs() < 1e-12);
            }
            other => panic!("unexpected error: {other}"),
        }
        assert!(matches!(
            measure_period_and_drift(&p, f64::NAN, 1e-10),
            Err(Error::InvalidInput { .. })
        ));
    }

    #[test]
    fn sign_pattern_holds_in_all_four_quadrants() {
        let p = params();
        for y0 in [-1.0, -4.0] {
            let report = sign_pattern_check(&p, y0, 1e-10).unwrap();
            for (q, &n) in report.quadrant_counts.iter().enumerate() {
                assert!(n >= 1, "quadrant {q} unvisited at Y0 = {y0}");
            }
            // The release point X = pi sits exactly on a boundary.
            assert!(report.skipped >= 1);
            assert!(report.theta > 0.0);
        }
    }

    #[test]
    fn angle_wrapping_and_quadrants() {
        assert_eq!(wrap_to_pi(3.0 * PI), PI);
        assert!((wrap_to_pi(-PI - 0.1) - (PI - 0.1)).abs() < 1e-12);
        assert_eq!(quadrant_of(PI), None);
        assert_eq!(quadrant_of(PI / 2.0), None);
        assert_eq!(quadrant_of(-2.0), Some(0));
        assert_eq!(quadrant_of(-1.0), Some(1));
        assert_eq!(quadrant_of(1.0), Some(2));
        assert_eq!(quadrant_of(2.0), Some(3));
    }
}
