//! The five CLI operations.
//!
//! Each command resolves its inputs, calls into the library, and writes
//! deterministic artifacts into the configured output directory: CSV with
//! a fixed header, `.` decimal separator, 17 significant digits, and bare
//! `\n` line endings, so identical configurations reproduce identical
//! bytes.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use deepwater::{drift_analysis, phase_portrait, trajectory, PhasePoint, WaveParams};

use crate::config::RunConfig;
use crate::error::AppError;
use crate::svg;
use crate::validation::{self, ValidationReport};

/// One floating-point CSV cell: scientific notation with 17 significant
/// digits, enough to round-trip any f64 exactly.
fn cell(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `contents` under the output directory, creating it on demand.
fn write_artifact(cfg: &RunConfig, name: &str, contents: &str) -> Result<PathBuf, AppError> {
    std::fs::create_dir_all(&cfg.out)?;
    let path = cfg.out.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn require_finite(flag: &str, v: f64) -> Result<(), AppError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(AppError::Usage(format!("{flag} must be finite, got {v}")))
    }
}

/// Rectangular sampling grid, parsed from `x0:x1:nx,y0:y1:ny`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub nx: usize,
    pub y0: f64,
    pub y1: f64,
    pub ny: usize,
}

impl GridSpec {
    pub fn parse(spec: &str) -> Result<Self, AppError> {
        let bad = |detail: String| {
            AppError::Usage(format!(
                "--grid expects 'x0:x1:nx,y0:y1:ny', got '{spec}': {detail}"
            ))
        };
        let (xs, ys) = spec
            .split_once(',')
            .ok_or_else(|| bad("missing ',' between the axes".into()))?;
        let (x0, x1, nx) = parse_axis(xs).map_err(&bad)?;
        let (y0, y1, ny) = parse_axis(ys).map_err(&bad)?;
        Ok(GridSpec {
            x0,
            x1,
            nx,
            y0,
            y1,
            ny,
        })
    }

    fn x_points(&self) -> Vec<f64> {
        axis_points(self.x0, self.x1, self.nx)
    }

    fn y_points(&self) -> Vec<f64> {
        axis_points(self.y0, self.y1, self.ny)
    }
}

fn parse_axis(axis: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = axis.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("axis '{axis}' is not 'start:end:count'"));
    };
    let a: f64 = a.parse().map_err(|_| format!("'{a}' is not a number"))?;
    let b: f64 = b.parse().map_err(|_| format!("'{b}' is not a number"))?;
    if !a.is_finite() || !b.is_finite() {
        return Err(format!("axis '{axis}' has a non-finite endpoint"));
    }
    let n: usize = n
        .parse()
        .map_err(|_| format!("'{n}' is not a positive count"))?;
    if n == 0 {
        return Err(format!("axis '{axis}' has a zero count"));
    }
    Ok((a, b, n))
}

/// `n` evenly spaced points from `a` to `b` inclusive; just `a` when n = 1.
fn axis_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Samples the closed-form field on the grid at one instant and writes
/// `field.csv` with columns `x,y,eta,u,v,P`. Rows iterate x in the outer
/// loop, so the elevation column repeats within each x group.
pub fn cmd_field(
    cfg: &RunConfig,
    t: f64,
    p0: f64,
    grid: &GridSpec,
) -> Result<Vec<PathBuf>, AppError> {
    require_finite("--t", t)?;
    require_finite("--p0", p0)?;
    let p = cfg.wave_params()?;

    let mut csv = String::from("x,y,eta,u,v,P\n");
    for &x in &grid.x_points() {
        for &y in &grid.y_points() {
            let s = p.sample(t, x, y, p0);
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{}",
                cell(x),
                cell(y),
                cell(s.eta),
                cell(s.u),
                cell(s.v),
                cell(s.pressure)
            );
        }
    }
    Ok(vec![write_artifact(cfg, "field.csv", &csv)?])
}

/// Default portrait levels: a spread of two below and two above the
/// critical level, plus the separatrix itself.
fn auto_alphas(p: &WaveParams) -> Vec<f64> {
    let a = p.alpha_star;
    vec![a - 2.0, a - 1.0, a, a + 1.0, a + 2.0, a]
}

/// Samples level curves and writes `portrait.csv` (columns
/// `alpha,branch,X,Y`) and/or `portrait.svg`. Every CSV row is
/// re-evaluated against its level before being written.
pub fn cmd_portrait(
    cfg: &RunConfig,
    alphas: Option<Vec<f64>>,
    n_samples: usize,
    y_max: Option<f64>,
) -> Result<Vec<PathBuf>, AppError> {
    let p = cfg.wave_params()?;
    let alphas = alphas.unwrap_or_else(|| auto_alphas(&p));
    for &a in &alphas {
        require_finite("--alphas", a)?;
    }
    let y_max = y_max.unwrap_or(3.0 * p.y_star);
    require_finite("--y-max", y_max)?;

    let curves = phase_portrait::portrait(&p, &alphas, n_samples, y_max)?;

    let mut written = Vec::new();
    if cfg.format.wants_csv() {
        let mut csv = String::from("alpha,branch,X,Y\n");
        for curve in &curves {
            let branches = [
                Some(("lower", &curve.lower_branch)),
                curve.upper_branch.as_ref().map(|b| ("upper", b)),
            ];
            for (label, branch) in branches.into_iter().flatten() {
                for pt in branch {
                    let h = phase_portrait::hamiltonian(&p, *pt);
                    if (h - curve.alpha).abs() > 1e-10 * (1.0 + curve.alpha.abs()) {
                        return Err(AppError::Lib(deepwater::Error::ConvergenceFailure {
                            context: "portrait sample left its level curve",
                        }));
                    }
                    let _ = writeln!(
                        csv,
                        "{},{label},{},{}",
                        cell(curve.alpha),
                        cell(pt.x),
                        cell(pt.y)
                    );
                }
            }
        }
        written.push(write_artifact(cfg, "portrait.csv", &csv)?);
    }
    if cfg.format.wants_svg() {
        written.push(write_artifact(
            cfg,
            "portrait.svg",
            &svg::portrait_svg(&p, &curves),
        )?);
    }
    Ok(written)
}

/// Integrates a particle released on the trough line at physical depth
/// `y0` for a whole number of measured orbit periods and writes
/// `trajectory.csv` (columns `t,x,y,X,Y,H`, one row per accepted step)
/// and/or `trajectory.svg`.
///
/// The end time uses the event-located ODE period, not the fixed-depth
/// closed form: the two differ by a few parts in a thousand, and over
/// several orbits that phase slip would push the return depth visibly off
/// the release depth.
pub fn cmd_trajectory(cfg: &RunConfig, y0: f64, periods: f64) -> Result<Vec<PathBuf>, AppError> {
    require_finite("--y0", y0)?;
    require_finite("--periods", periods)?;
    if periods <= 0.0 {
        return Err(AppError::Usage(format!(
            "--periods must be positive, got {periods}"
        )));
    }
    let p = cfg.wave_params()?;
    let y0_frame = p.k * y0;

    let measured = trajectory::measure_period_and_drift(&p, y0_frame, cfg.tol)?;
    let t_end = periods * measured.theta;
    let record = trajectory::integrate_phase(&p, PhasePoint::new(PI, y0_frame), t_end, cfg.tol)?;

    let mut written = Vec::new();
    if cfg.format.wants_csv() {
        let mut csv = String::from("t,x,y,X,Y,H\n");
        for i in 0..record.t.len() {
            let pt = record.phase[i];
            let (x, y) = record.physical[i];
            let h = phase_portrait::hamiltonian(&p, pt);
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{}",
                cell(record.t[i]),
                cell(x),
                cell(y),
                cell(pt.x),
                cell(pt.y),
                cell(h)
            );
        }
        written.push(write_artifact(cfg, "trajectory.csv", &csv)?);
    }
    if cfg.format.wants_svg() {
        written.push(write_artifact(
            cfg,
            "trajectory.svg",
            &svg::trajectory_svg(&record.physical),
        )?);
    }
    Ok(written)
}

/// Tabulates orbit period and per-period drift against depth and writes
/// `drift.csv`. The two ODE columns are filled only when requested; they
/// stay empty otherwise so the header never changes shape.
pub fn cmd_drift(
    cfg: &RunConfig,
    y_top: f64,
    y_bottom: f64,
    n: usize,
    include_ode: bool,
) -> Result<Vec<PathBuf>, AppError> {
    require_finite("--y-top", y_top)?;
    require_finite("--y-bottom", y_bottom)?;
    let p = cfg.wave_params()?;

    let ode_tol = include_ode.then_some(cfg.tol);
    let profile = drift_analysis::drift_profile(&p, y_top, y_bottom, n, ode_tol)?;

    let mut csv = String::from("Y,a,theta_quad,theta_closed,theta_ode,drift_quad,drift_ode\n");
    for i in 0..profile.y_values.len() {
        let theta_ode = profile
            .theta_ode
            .as_ref()
            .map_or(String::new(), |v| cell(v[i]));
        let drift_ode = profile
            .drift_ode
            .as_ref()
            .map_or(String::new(), |v| cell(v[i]));
        let _ = writeln!(
            csv,
            "{},{},{},{},{theta_ode},{},{drift_ode}",
            cell(profile.y_values[i]),
            cell(profile.a_values[i]),
            cell(profile.theta_quad[i]),
            cell(profile.theta_closed[i]),
            cell(profile.drift_quad[i])
        );
    }
    Ok(vec![write_artifact(cfg, "drift.csv", &csv)?])
}

/// Runs the library self-checks and writes `validation.json`; the caller
/// renders the text report and picks the exit code from `overall`.
pub fn cmd_validate(cfg: &RunConfig) -> Result<(ValidationReport, Vec<PathBuf>), AppError> {
    let p = cfg.wave_params()?;
    let report = validation::run_validation(&p, cfg.tol, cfg.seed);
    let path = write_artifact(cfg, "validation.json", &report.to_json())?;
    Ok((report, vec![path]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OutputFormat;

    fn config_in(dir: &std::path::Path) -> RunConfig {
        RunConfig {
            epsilon: 0.1,
            k: 1.0,
            g: 9.81,
            tol: 1e-10,
            out: dir.to_path_buf(),
            format: OutputFormat::Csv,
            seed: 0,
        }
    }

    #[test]
    fn grid_spec_round_trips() {
        let g = GridSpec::parse("0:6:3,-2:0:3").unwrap();
        assert_eq!(g.nx, 3);
        assert_eq!(g.ny, 3);
        assert_eq!(g.x_points(), vec![0.0, 3.0, 6.0]);
        assert_eq!(g.y_points(), vec![-2.0, -1.0, 0.0]);
    }

    #[test]
    fn malformed_grid_specs_name_the_flag() {
        for bad in [
            "0:1",
            "0:1:3",
            "0:1:3,",
            "a:1:3,0:1:2",
            "0:1:0,0:1:2",
            "0:1:3,0:inf:2",
        ] {
            let err = GridSpec::parse(bad).unwrap_err();
            assert_eq!(err.exit_code(), crate::error::EXIT_USAGE, "spec '{bad}'");
            assert!(err.to_string().contains("--grid"), "spec '{bad}': {err}");
        }
    }

    #[test]
    fn single_point_axis_collapses_to_the_start() {
        let g = GridSpec::parse("1.5:9:1,0:0:1").unwrap();
        assert_eq!(g.x_points(), vec![1.5]);
        assert_eq!(g.y_points(), vec![0.0]);
    }

    #[test]
    fn field_csv_has_one_row_per_node_plus_header() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config_in(dir.path());
        let grid = GridSpec::parse("0:6:3,-2:0:3").unwrap();
        let paths = cmd_field(&cfg, 0.0, 0.0, &grid).unwrap();

        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[0], "x,y,eta,u,v,P");

        let crest: Vec<f64> = lines[3].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(crest[0], 0.0, "third data row sits at x = 0, y = 0");
        assert_eq!(crest[1], 0.0);
        let p = cfg.wave_params().unwrap();
        assert!((crest[3] - p.velocity_scale).abs() <= 1e-15);
        assert_eq!(crest[4], 0.0, "vertical velocity vanishes under the crest");
    }

    #[test]
    fn drift_csv_leaves_ode_columns_empty_without_the_flag() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config_in(dir.path());
        let paths = cmd_drift(&cfg, 0.0, -2.0, 3, false).unwrap();

        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "Y,a,theta_quad,theta_closed,theta_ode,drift_quad,drift_ode"
        );
        for line in &lines[1..] {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 7);
            assert!(cells[4].is_empty(), "theta_ode must stay empty");
            assert!(cells[6].is_empty(), "drift_ode must stay empty");
        }
    }

    #[test]
    fn trajectory_rows_start_on_the_trough_line() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config_in(dir.path());
        let paths = cmd_trajectory(&cfg, -1.0, 1.0).unwrap();

        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x,y,X,Y,H");
        let first: Vec<f64> = lines[1].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(first[0], 0.0);
        assert_eq!(first[3], PI, "release phase is X = pi");
        assert_eq!(first[4], -1.0);
    }

    #[test]
    fn auto_alpha_list_brackets_the_critical_level() {
        let p = WaveParams::new(0.1, 1.0, 9.81).unwrap();
        let alphas = auto_alphas(&p);
        assert_eq!(alphas.len(), 6);
        assert_eq!(alphas[2], p.alpha_star);
        assert_eq!(alphas[5], p.alpha_star, "the separatrix is always included");
    }

    #[test]
    fn cell_formatting_round_trips_exactly() {
        for v in [0.0, 1.0, -2.0061398, 3.132091952673165e-13, 1.7e308] {
            assert_eq!(cell(v).parse::<f64>().unwrap(), v);
        }
    }
}
