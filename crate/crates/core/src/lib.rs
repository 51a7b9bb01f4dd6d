//! Particle kinematics of linear deep-water waves.
//!
//! The library models the first-order (Airy) wave field on deep water and the
//! motion of fluid particles inside it. In a frame moving with the wave crest
//! the particle motion is an autonomous planar Hamiltonian system; everything
//! here is organized around that observation:
//!
//! - [`wave_field`]: the closed-form field (surface elevation, velocity,
//!   pressure) and the parameter bundle [`WaveParams`] with its validity
//!   condition.
//! - [`phase_portrait`]: the stream-function Hamiltonian in the moving frame,
//!   its saddle point, and the structure of its level curves (branch points,
//!   lowest points, sampled curves).
//! - [`trajectory`]: adaptive Runge-Kutta integration of particle paths in
//!   either frame, with event-located orbit periods.
//! - [`drift_analysis`]: the per-period forward (Stokes) drift, computed three
//!   ways (closed form, quadrature, measured from the ODE) so the routes can
//!   be cross-checked.
//!
//! Support modules: [`ode`] (embedded Runge-Kutta 5(4) with dense output) and
//! private root-finding and quadrature kernels.

pub mod drift_analysis;
mod error;
pub mod ode;
pub mod phase_portrait;
mod quadrature;
mod roots;
pub mod trajectory;
pub mod wave_field;

pub use drift_analysis::{DriftMethod, DriftProfile};
pub use error::{DomainSide, Error};
pub use phase_portrait::{LevelClass, LevelCurve, LevelDomain, PhasePoint};
pub use trajectory::{PeriodMeasurement, RunStatus, SignPatternReport, TrajectoryRecord};
pub use wave_field::{FieldSample, WaveParams};

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
