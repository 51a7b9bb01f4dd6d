//! First-order deep-water wave field.
//!
//! The model is the classical linear (Airy) solution on infinite depth with
//! unit density: a single harmonic profile `eta = epsilon cos(kx - omega t)`
//! traveling right, with velocity and pressure fields decaying like `e^{ky}`
//! below the surface. The frequency is pinned to the deep-water dispersion
//! relation `omega = sqrt(g k)`; it is always derived, never supplied.
//!
//! Linearisation is trusted only while the steepness is small in the sense
//! `epsilon * k * exp(epsilon * k) <= 1`. [`WaveParams::new`] enforces that
//! condition; [`WaveParams::new_unchecked`] skips it (and only it) so that
//! out-of-range behaviour can be probed deliberately.

use crate::{Error, Result};

/// Validated parameter bundle for one wave, plus derived constants.
///
/// All fields are plain data and public; the constructors populate the
/// derived ones. `y_star` and `alpha_star` locate the critical point of the
/// moving-frame Hamiltonian (see [`crate::phase_portrait`]): the saddle sits
/// at `(0, y_star)` on the level `alpha_star`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParams {
    /// Wave amplitude (m).
    pub epsilon: f64,
    /// Wavenumber (rad/m).
    pub k: f64,
    /// Gravitational acceleration (m/s^2).
    pub g: f64,
    /// Angular frequency from the dispersion relation, `sqrt(g k)` (rad/s).
    pub omega: f64,
    /// Velocity scale `epsilon * omega` (m/s); the particle speed amplitude.
    pub velocity_scale: f64,
    /// Phase speed `omega / k` (m/s).
    pub phase_speed: f64,
    /// Wavelength `2 pi / k` (m).
    pub wavelength: f64,
    /// Moving-frame ordinate of the critical point, `ln(1 / (epsilon k))`.
    pub y_star: f64,
    /// Hamiltonian level of the critical point, `omega (1 - y_star)`.
    pub alpha_star: f64,
}

/// All four field quantities at one space-time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// Surface elevation above the point's x (m); independent of y.
    pub eta: f64,
    /// Horizontal velocity (m/s).
    pub u: f64,
    /// Vertical velocity (m/s).
    pub v: f64,
    /// Pressure (Pa with unit density).
    pub pressure: f64,
}

impl WaveParams {
    /// Builds the bundle, enforcing positivity and the validity condition
    /// `epsilon * k * exp(epsilon * k) <= 1`.
    pub fn new(epsilon: f64, k: f64, g: f64) -> Result<Self> {
        let p = Self::new_unchecked(epsilon, k, g)?;
        let product = epsilon * k * (epsilon * k).exp();
        if product > 1.0 {
            return Err(Error::ValidityViolation { product });
        }
        Ok(p)
    }

    /// Builds the bundle without the validity condition. Positivity is still
    /// required: the derived constants are meaningless otherwise.
    pub fn new_unchecked(epsilon: f64, k: f64, g: f64) -> Result<Self> {
        for (name, value) in [("epsilon", epsilon), ("k", k), ("g", g)] {
            if !(value > 0.0) {
                return Err(Error::NonPositiveParameter { name, value });
            }
            if !value.is_finite() {
                return Err(Error::InvalidInput {
                    reason: format!("parameter {name} must be finite, got {value}"),
                });
            }
        }
        let omega = (g * k).sqrt();
        let velocity_scale = epsilon * omega;
        let y_star = (omega / (k * velocity_scale)).ln();
        Ok(Self {
            epsilon,
            k,
            g,
            omega,
            velocity_scale,
            phase_speed: omega / k,
            wavelength: 2.0 * std::f64::consts::PI / k,
            y_star,
            alpha_star: omega * (1.0 - y_star),
        })
    }

    /// Distance to the validity boundary: `1 - epsilon k e^{epsilon k}`.
    /// Positive inside the validated regime, negative outside.
    pub fn validity_margin(&self) -> f64 {
        let s = self.epsilon * self.k;
        1.0 - s * s.exp()
    }

    /// Wave phase `k x - omega t`; equals the moving-frame abscissa X.
    pub fn phase(&self, t: f64, x: f64) -> f64 {
        self.k * x - self.omega * t
    }

    /// Surface elevation `eta(t, x) = epsilon cos(kx - omega t)`.
    pub fn surface_elevation(&self, t: f64, x: f64) -> f64 {
        self.epsilon * self.phase(t, x).cos()
    }

    /// Velocity `(u, v)` at a point. The formula extrapolates smoothly above
    /// the wave zone `y > epsilon`; samples taken there describe no fluid.
    pub fn velocity(&self, t: f64, x: f64, y: f64) -> (f64, f64) {
        let amp = self.velocity_scale * (self.k * y).exp();
        let phase = self.phase(t, x);
        (amp * phase.cos(), amp * phase.sin())
    }

    /// Pressure at a point: atmospheric `p0` plus hydrostatic `-g y` plus the
    /// first-order dynamic part `epsilon g e^{ky} cos(kx - omega t)`.
    pub fn pressure(&self, t: f64, x: f64, y: f64, p0: f64) -> f64 {
        p0 - self.g * y + self.epsilon * self.g * (self.k * y).exp() * self.phase(t, x).cos()
    }

    /// All four field quantities at once.
    pub fn sample(&self, t: f64, x: f64, y: f64, p0: f64) -> FieldSample {
        let (u, v) = self.velocity(t, x, y);
        FieldSample {
            eta: self.surface_elevation(t, x),
            u,
            v,
            pressure: self.pressure(t, x, y, p0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Frozen by independent high-precision evaluation (50-digit arithmetic).
    // For these parameters the critical ordinate happens to be ln(10); the
    // frozen decimal literal is kept as the oracle on purpose.
    #[allow(clippy::approx_constant)]
    const Y_STAR_REF: f64 = 2.302585092994046;
    const OMEGA_REF: f64 = 3.132091952673165;
    const ALPHA_STAR_REF: f64 = -4.079816287438677;

    fn r_params() -> WaveParams {
        WaveParams::new(0.1, 1.0, 9.81).unwrap()
    }

    #[test]
    fn derived_constants_match_reference() {
        let p = r_params();
        assert!((p.omega - OMEGA_REF).abs() < 1e-14);
        assert!((p.velocity_scale - 0.1 * OMEGA_REF).abs() < 1e-15);
        assert!((p.phase_speed - OMEGA_REF).abs() < 1e-14);
        assert!((p.wavelength - 2.0 * PI).abs() < 1e-14);
        assert!((p.y_star - Y_STAR_REF).abs() < 1e-14);
        assert!((p.alpha_star - ALPHA_STAR_REF).abs() < 1e-13);
    }

    #[test]
    fn dispersion_relation_holds_to_rounding() {
        for (eps, k, g) in [(0.1, 1.0, 9.81), (0.01, 2.5, 9.81), (0.2, 0.5, 1.62)] {
            let p = WaveParams::new(eps, k, g).unwrap();
            let rel = (p.omega * p.omega - g * k).abs() / (g * k);
            assert!(rel <= 1e-15, "dispersion residual {rel}");
        }
    }

    #[test]
    fn validity_margin_values() {
        assert!((r_params().validity_margin() - 0.889_482_908_192_435_3).abs() < 1e-15);
        let steep = WaveParams::new_unchecked(1.0, 2.0, 9.81).unwrap();
        assert!((steep.validity_margin() - (-13.778_112_197_861_3)).abs() < 1e-12);
    }

    #[test]
    fn validity_condition_enforced_only_when_checked() {
        assert!(matches!(
            WaveParams::new(1.0, 2.0, 9.81),
            Err(Error::ValidityViolation { .. })
        ));
        assert!(WaveParams::new_unchecked(1.0, 2.0, 9.81).is_ok());
        // The boundary itself is admissible.
        let w = 0.567_143_290_409_783_8; // root of w e^w = 1
        assert!(WaveParams::new(w, 1.0, 9.81).is_ok());
    }

    #[test]
    fn nonpositive_parameters_rejected_even_unchecked() {
        for (e, k, g) in [(0.0, 1.0, 9.81), (0.1, -1.0, 9.81), (0.1, 1.0, 0.0)] {
            assert!(matches!(
                WaveParams::new_unchecked(e, k, g),
                Err(Error::NonPositiveParameter { .. })
            ));
        }
        assert!(WaveParams::new_unchecked(1e-12, 1.0, 9.81).is_ok());
        assert!(matches!(
            WaveParams::new(f64::NAN, 1.0, 9.81),
            Err(Error::NonPositiveParameter { .. })
        ));
        assert!(WaveParams::new(f64::INFINITY, 1.0, 9.81).is_err());
    }

    #[test]
    fn surface_elevation_crest_trough_periodicity() {
        let p = r_params();
        assert_eq!(p.surface_elevation(0.0, 0.0), 0.1);
        assert!((p.surface_elevation(0.0, PI) - (-0.1)).abs() < 1e-15);
        let (t, x) = (0.37, 1.9);
        let shifted = p.surface_elevation(t, x + p.wavelength);
        assert!((shifted - p.surface_elevation(t, x)).abs() <= 1e-12 * 0.1);
    }

    #[test]
    fn velocity_at_crest_is_horizontal_with_scale_amplitude() {
        let p = r_params();
        let (u, v) = p.velocity(0.0, 0.0, 0.0);
        assert!((u - p.velocity_scale).abs() < 1e-15);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn velocity_decays_exponentially_with_depth() {
        let p = r_params();
        let (t, x) = (0.21, 0.6);
        let (u0, v0) = p.velocity(t, x, 0.0);
        let speed0 = u0.hypot(v0);
        for y in [-0.5, -1.0, -PI, -6.0] {
            let (u, v) = p.velocity(t, x, y);
            let ratio = u.hypot(v) / speed0;
            assert!(
                (ratio - (p.k * y).exp()).abs() <= 1e-13,
                "depth decay off at y = {y}"
            );
        }
        // Reference value: one wavelength's half down, the ratio is e^{-pi}.
        let (u, v) = p.velocity(t, x, -PI);
        assert!((u.hypot(v) / speed0 - 0.043_213_918_263_772_25).abs() < 1e-12);
    }

    #[test]
    fn pressure_dynamic_part_and_hydrostatic_limit() {
        let p = r_params();
        // Crest, surface, zero atmospheric: purely the dynamic head.
        assert!((p.pressure(0.0, 0.0, 0.0, 0.0) - 0.981).abs() < 1e-15);
        // Deep down the dynamic part is negligible against -g y.
        let deep = p.pressure(0.3, 1.0, -50.0, 0.0);
        assert!((deep - 9.81 * 50.0).abs() / (9.81 * 50.0) < 1e-12);
        // Atmospheric offset enters additively.
        assert!(
            (p.pressure(0.3, 1.0, -2.0, 101.3) - p.pressure(0.3, 1.0, -2.0, 0.0) - 101.3).abs()
                < 1e-12
        );
    }

    #[test]
    fn incompressible_and_irrotational_by_central_differences() {
        let p = r_params();
        let scale = p.epsilon * p.omega * p.k;
        let points: [(f64, f64, f64); 3] = [(0.0, 0.3, -0.4), (1.7, -2.0, -3.0), (0.9, 5.0, -0.05)];
        for &(t, x, y) in &points {
            let h_x = 1e-5 * x.abs().max(1.0);
            let h_y = 1e-5 * y.abs().max(1.0);
            let du_dx = (p.velocity(t, x + h_x, y).0 - p.velocity(t, x - h_x, y).0) / (2.0 * h_x);
            let dv_dy = (p.velocity(t, x, y + h_y).1 - p.velocity(t, x, y - h_y).1) / (2.0 * h_y);
            let du_dy = (p.velocity(t, x, y + h_y).0 - p.velocity(t, x, y - h_y).0) / (2.0 * h_y);
            let dv_dx = (p.velocity(t, x + h_x, y).1 - p.velocity(t, x - h_x, y).1) / (2.0 * h_x);
            assert!(
                (du_dx + dv_dy).abs() <= 1e-6 * scale,
                "divergence at ({t},{x},{y})"
            );
            assert!(
                (du_dy - dv_dx).abs() <= 1e-6 * scale,
                "curl at ({t},{x},{y})"
            );
        }
    }

    #[test]
    fn sample_bundles_the_field_quantities() {
        let p = r_params();
        let s = p.sample(0.4, 1.1, -0.7, 5.0);
        assert_eq!(s.eta, p.surface_elevation(0.4, 1.1));
        assert_eq!((s.u, s.v), p.velocity(0.4, 1.1, -0.7));
        assert_eq!(s.pressure, p.pressure(0.4, 1.1, -0.7, 5.0));
        assert!(s.eta.abs() <= p.epsilon);
        assert!(s.u.hypot(s.v) <= p.velocity_scale * (p.k * -0.7).exp() + 1e-15);
    }
}
