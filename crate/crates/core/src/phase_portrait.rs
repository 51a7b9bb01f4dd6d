//! Phase portrait of particle motion in the frame moving with the wave.
//!
//! In the coordinates `X = kx - omega t`, `Y = ky` the particle equations
//! become autonomous and Hamiltonian,
//!
//! ```text
//! dX/dt =  kM e^Y cos X - omega = dH/dY
//! dY/dt =  kM e^Y sin X         = -dH/dX
//! H(X, Y) = kM e^Y cos X - omega Y,        M = epsilon * omega,
//! ```
//!
//! so orbits are level curves of `H`. One critical point organizes the whole
//! picture: a saddle at `(0, Y*)` with `Y* = ln(1/(epsilon k))`, lying on the
//! level `alpha* = omega (1 - Y*)`. Levels are classified against `alpha*`;
//! the separatrix through the saddle divides looping orbits from upward
//! escape.
//!
//! A point `(X, Y)` lies on the level `alpha` iff `cos X = g(Y)` with
//! `g(Y) = (alpha + omega Y) / (kM e^Y)` ([`level_cosine`]). Where
//! `|g| <= 1` the curve is the graph `X = arccos g` ([`level_x`]), taken in
//! `[0, pi]` and mirrored evenly in X. Each curve meets `X = pi` at a unique
//! lowest ordinate `Y_pi` solving `-kM e^Y - omega Y = alpha`
//! ([`solve_y_pi`]); supercritical curves additionally meet `X = 0` at two
//! branch points `Y_1 < Y_2` solving `g(Y) = 1` ([`solve_branch_points`]),
//! which bound the closed lower branch and the open upper branch.

use crate::roots;
use crate::wave_field::WaveParams;
use crate::{DomainSide, Error, Result};

/// A point in the moving frame: `x` is the phase abscissa `X = kx - omega t`,
/// `y` the scaled ordinate `Y = ky`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Position of a Hamiltonian level relative to the critical level `alpha*`.
///
/// The comparison carries an absolute tolerance `1e-12 * (1 + |alpha*|)`;
/// levels inside it are `Critical`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelClass {
    SubCritical,
    Critical,
    SuperCritical,
}

/// Characteristic ordinates of one level curve.
///
/// `y_pi` always exists. The branch points are present exactly for
/// supercritical levels, and then `y_pi < y_1 < (omega - alpha)/omega < y_2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelDomain {
    /// Ordinate where the curve meets `X = pi`; the curve's lowest point.
    pub y_pi: f64,
    /// Lower branch point (curve meets `X = 0`), supercritical levels only.
    pub y_1: Option<f64>,
    /// Upper branch point, supercritical levels only.
    pub y_2: Option<f64>,
}

/// A sampled level curve. Samples are `(X, Y)` with `X = level_x(alpha, Y)`,
/// ordered by increasing `Y`; the lower branch starts at the `X = pi`
/// crossing. Every sample satisfies `|H(X, Y) - alpha| <= 1e-10 (1 + |alpha|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelCurve {
    pub alpha: f64,
    pub class: LevelClass,
    pub domain: LevelDomain,
    /// Samples on `[y_pi, y_1]` (supercritical) or `[y_pi, y_max]`.
    pub lower_branch: Vec<PhasePoint>,
    /// Samples on `[y_2, y_max]`; present for supercritical levels.
    pub upper_branch: Option<Vec<PhasePoint>>,
}

/// Tolerance for accepting a level-set cosine marginally outside `[-1, 1]`.
const COS_EDGE_TOL: f64 = 1e-12;

/// The stream-function Hamiltonian `kM e^Y cos X - omega Y`.
pub fn hamiltonian(p: &WaveParams, pt: PhasePoint) -> f64 {
    p.k * p.velocity_scale * pt.y.exp() * pt.x.cos() - p.omega * pt.y
}

/// Gradient `(dH/dX, dH/dY)`.
pub fn grad_hamiltonian(p: &WaveParams, pt: PhasePoint) -> (f64, f64) {
    let e = p.k * p.velocity_scale * pt.y.exp();
    (-e * pt.x.sin(), e * pt.x.cos() - p.omega)
}

/// The unique critical point `(0, Y*)` and its level `alpha*`.
pub fn critical_point(p: &WaveParams) -> (PhasePoint, f64) {
    (PhasePoint::new(0.0, p.y_star), p.alpha_star)
}

/// Eigenvalues of the Hessian of `H` at the critical point, ascending.
///
/// The matrix is evaluated there and diagonalized exactly (symmetric 2x2).
/// Opposite signs confirm the saddle; analytically the pair is
/// `(-omega, +omega)` because `kM e^{Y*} = omega`.
pub fn hessian_at_critical(p: &WaveParams) -> (f64, f64) {
    let (cp, _) = critical_point(p);
    let e = p.k * p.velocity_scale * cp.y.exp();
    let (h_xx, h_xy, h_yy) = (-e * cp.x.cos(), -e * cp.x.sin(), e * cp.x.cos());
    let mean = 0.5 * (h_xx + h_yy);
    let radius = (0.25 * (h_xx - h_yy) * (h_xx - h_yy) + h_xy * h_xy).sqrt();
    (mean - radius, mean + radius)
}

/// The value `cos X` must take for `(X, Y)` to lie on the level `alpha`:
/// `g(Y) = (alpha + omega Y) / (kM e^Y)`.
pub fn level_cosine(p: &WaveParams, alpha: f64, y: f64) -> f64 {
    (alpha + p.omega * y) / (p.k * p.velocity_scale * y.exp())
}

/// Classifies `alpha` against the critical level.
pub fn classify_level(p: &WaveParams, alpha: f64) -> LevelClass {
    let tol = 1e-12 * (1.0 + p.alpha_star.abs());
    if (alpha - p.alpha_star).abs() <= tol {
        LevelClass::Critical
    } else if alpha > p.alpha_star {
        LevelClass::SuperCritical
    } else {
        LevelClass::SubCritical
    }
}

/// Ordinate of the level curve's crossing with `X = pi`: the unique root of
/// `-kM e^Y - omega Y = alpha`. Strictly decreasing in `alpha`, defined for
/// every real level.
pub fn solve_y_pi(p: &WaveParams, alpha: f64) -> Result<f64> {
    let km = p.k * p.velocity_scale;
    let omega = p.omega;
    let f = move |y: f64| -km * y.exp() - omega * y - alpha;
    let df = move |y: f64| -km * y.exp() - omega;
    let (lo, hi) = roots::expand_bracket(f, -1.0, 1.0)?;
    let mut y = roots::solve_bracketed(f, df, lo, hi)?;
    // The bracketed solve stops at a width tolerance whose residual is
    // visible in downstream level-curve checks; a few Newton steps polish
    // the root down to the evaluation noise floor. The derivative is
    // bounded away from zero (<= -omega), so the iteration is safe.
    for _ in 0..3 {
        let step = f(y) / df(y);
        if !step.is_finite() || step == 0.0 {
            break;
        }
        y -= step;
    }
    Ok(y)
}

/// Branch points `(Y_1, Y_2)` of a supercritical level: the two roots of
/// `g(Y) = 1`, straddling the maximizer `(omega - alpha)/omega` of `g`.
pub fn solve_branch_points(p: &WaveParams, alpha: f64) -> Result<(f64, f64)> {
    if classify_level(p, alpha) != LevelClass::SuperCritical {
        return Err(Error::NotSuperCritical {
            alpha,
            alpha_star: p.alpha_star,
        });
    }
    let km = p.k * p.velocity_scale;
    let omega = p.omega;
    let f = move |y: f64| (alpha + omega * y) / (km * y.exp()) - 1.0;
    let df = move |y: f64| (omega - alpha - omega * y) / (km * y.exp());

    let y_pi = solve_y_pi(p, alpha)?;
    let turn = (omega - alpha) / omega;
    let y_1 = roots::solve_bracketed(f, df, y_pi, turn)?;

    let mut offset = 1.0;
    let mut hi = turn + offset;
    for _ in 0..200 {
        if f(hi) < 0.0 {
            break;
        }
        offset *= 2.0;
        hi = turn + offset;
    }
    if f(hi) >= 0.0 {
        return Err(Error::ConvergenceFailure {
            context: "upper branch point bracket expansion failed",
        });
    }
    let y_2 = roots::solve_bracketed(f, df, turn, hi)?;
    Ok((y_1, y_2))
}

/// The nonnegative branch abscissa `X = arccos g(Y)` in `[0, pi]`.
///
/// Ordinates with `g` outside `[-1, 1]` (beyond a `1e-12` edge tolerance,
/// inside which `g` is clamped) are off the curve and yield `OutOfDomain`
/// naming the violated side.
pub fn level_x(p: &WaveParams, alpha: f64, y: f64) -> Result<f64> {
    let g = level_cosine(p, alpha, y);
    if g > 1.0 + COS_EDGE_TOL {
        return Err(Error::OutOfDomain {
            y,
            side: DomainSide::AboveUpper,
        });
    }
    if g < -1.0 - COS_EDGE_TOL {
        return Err(Error::OutOfDomain {
            y,
            side: DomainSide::BelowLower,
        });
    }
    Ok(g.clamp(-1.0, 1.0).acos())
}

/// Samples one level curve on a uniform `Y` grid of `n_samples` points per
/// branch. The lower branch covers `[y_pi, y_1]` for supercritical levels
/// and `[y_pi, y_max]` otherwise; the upper branch, when present, covers
/// `[y_2, y_max]` and then requires `y_max > y_2`.
pub fn sample_level_curve(
    p: &WaveParams,
    alpha: f64,
    n_samples: usize,
    y_max: f64,
) -> Result<LevelCurve> {
    if n_samples < 2 {
        return Err(Error::InvalidInput {
            reason: format!("n_samples must be at least 2, got {n_samples}"),
        });
    }
    let class = classify_level(p, alpha);
    let y_pi = solve_y_pi(p, alpha)?;

    let (domain, lower_end, upper_start) = if class == LevelClass::SuperCritical {
        let (y_1, y_2) = solve_branch_points(p, alpha)?;
        (
            LevelDomain {
                y_pi,
                y_1: Some(y_1),
                y_2: Some(y_2),
            },
            y_1,
            Some(y_2),
        )
    } else {
        if y_max <= y_pi {
            return Err(Error::InvalidInput {
                reason: format!("y_max = {y_max} does not exceed the lowest point {y_pi}"),
            });
        }
        (
            LevelDomain {
                y_pi,
                y_1: None,
                y_2: None,
            },
            y_max,
            None,
        )
    };

    let lower_branch = sample_branch(p, alpha, y_pi, lower_end, n_samples)?;
    let upper_branch = match upper_start {
        Some(y_2) => {
            if y_max <= y_2 {
                return Err(Error::InvalidInput {
                    reason: format!("y_max = {y_max} does not exceed the upper branch point {y_2}"),
                });
            }
            Some(sample_branch(p, alpha, y_2, y_max, n_samples)?)
        }
        None => None,
    };

    Ok(LevelCurve {
        alpha,
        class,
        domain,
        lower_branch,
        upper_branch,
    })
}

fn sample_branch(
    p: &WaveParams,
    alpha: f64,
    y_lo: f64,
    y_hi: f64,
    n: usize,
) -> Result<Vec<PhasePoint>> {
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let y = if i == n - 1 {
            y_hi
        } else {
            y_lo + (y_hi - y_lo) * i as f64 / (n - 1) as f64
        };
        samples.push(PhasePoint::new(level_x(p, alpha, y)?, y));
    }
    Ok(samples)
}

/// Samples a family of level curves, one per entry of `alphas`, preserving
/// input order. A failure on any level is reported with its index.
pub fn portrait(
    p: &WaveParams,
    alphas: &[f64],
    n_samples: usize,
    y_max: f64,
) -> Result<Vec<LevelCurve>> {
    if alphas.is_empty() {
        return Err(Error::EmptyInput {
            what: "portrait alpha list",
        });
    }
    alphas
        .iter()
        .enumerate()
        .map(|(index, &alpha)| {
            sample_level_curve(p, alpha, n_samples, y_max).map_err(|e| Error::LevelCurveFailed {
                index,
                alpha,
                source: Box::new(e),
            })
        })
        .collect()
}
