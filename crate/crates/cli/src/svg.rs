//! Minimal hand-rolled SVG output for the portrait and trajectory commands.
//!
//! Only three primitives are needed: a white canvas, stroked polyline
//! paths, and a filled circle marking a special point. Coordinates are
//! emitted with two decimals, which is below a pixel on the fixed canvas.

use std::f64::consts::PI;
use std::fmt::Write as _;

use deepwater::{LevelCurve, PhasePoint, WaveParams};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Affine map from data space onto the canvas, y axis flipped so larger
/// ordinates plot higher.
struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn from_bounds(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        let pad = |lo: f64, hi: f64| {
            let span = (hi - lo).max(1e-9);
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (y_min, y_max) = pad(y_min, y_max);
        Frame {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = MARGIN + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - 2.0 * MARGIN);
        let sy = HEIGHT
            - MARGIN
            - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - 2.0 * MARGIN);
        (sx, sy)
    }
}

fn document(body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         {body}</svg>\n"
    )
}

fn path_element(frame: &Frame, points: &[(f64, f64)], color: &str) -> String {
    let mut d = String::new();
    for (i, &(x, y)) in points.iter().enumerate() {
        let (sx, sy) = frame.map(x, y);
        let verb = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{verb}{sx:.2} {sy:.2} ");
    }
    format!(
        "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"/>\n",
        d.trim_end()
    )
}

fn circle_element(frame: &Frame, x: f64, y: f64, color: &str) -> String {
    let (sx, sy) = frame.map(x, y);
    format!("<circle cx=\"{sx:.2}\" cy=\"{sy:.2}\" r=\"4\" fill=\"{color}\"/>\n")
}

/// Reflects one sampled branch about the vertical axis and joins the two
/// halves into a single polyline spanning the strip from -X to +X.
fn mirrored(branch: &[PhasePoint]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = branch.iter().rev().map(|p| (-p.x, p.y)).collect();
    pts.extend(branch.iter().map(|p| (p.x, p.y)));
    pts
}

/// Phase portrait: one path per sampled branch, evenly reflected onto
/// the full strip `[-pi, pi]`, plus a marker on the critical point.
pub fn portrait_svg(p: &WaveParams, curves: &[LevelCurve]) -> String {
    let mut y_min = p.y_star;
    let mut y_max = p.y_star;
    for curve in curves {
        for pt in curve
            .lower_branch
            .iter()
            .chain(curve.upper_branch.iter().flatten())
        {
            y_min = y_min.min(pt.y);
            y_max = y_max.max(pt.y);
        }
    }
    let frame = Frame::from_bounds(-PI, PI, y_min, y_max);

    let mut body = String::new();
    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        body.push_str(&path_element(&frame, &mirrored(&curve.lower_branch), color));
        if let Some(upper) = &curve.upper_branch {
            body.push_str(&path_element(&frame, &mirrored(upper), color));
        }
    }
    body.push_str(&circle_element(&frame, 0.0, p.y_star, "black"));
    document(&body)
}

/// Physical-space particle path: a single polyline through the sampled
/// positions with a marker on the release point.
pub fn trajectory_svg(positions: &[(f64, f64)]) -> String {
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in positions {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    let frame = Frame {
        x_min: x_min - 0.05 * (x_max - x_min).max(1e-9),
        x_max: x_max + 0.05 * (x_max - x_min).max(1e-9),
        y_min: y_min - 0.05 * (y_max - y_min).max(1e-9),
        y_max: y_max + 0.05 * (y_max - y_min).max(1e-9),
    };

    let mut body = path_element(&frame, positions, PALETTE[0]);
    if let Some(&start) = positions.first() {
        body.push_str(&circle_element(&frame, start.0, start.1, "black"));
    }
    document(&body)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> WaveParams {
        WaveParams::new(0.1, 1.0, 9.81).expect("valid params")
    }

    #[test]
    fn portrait_svg_has_one_path_per_branch_and_a_marker() {
        let p = params();
        let alphas = [p.alpha_star - 1.0, p.alpha_star + 1.0];
        let curves = deepwater::phase_portrait::portrait(&p, &alphas, 40, 3.0 * p.y_star).unwrap();
        let branches: usize = curves
            .iter()
            .map(|c| 1 + usize::from(c.upper_branch.is_some()))
            .sum();

        let svg = portrait_svg(&p, &curves);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<path ").count(), branches);
        assert_eq!(svg.matches("<circle ").count(), 1);
    }

    #[test]
    fn trajectory_svg_is_a_single_path() {
        let svg = trajectory_svg(&[(0.0, -1.0), (0.5, -0.9), (1.0, -1.1)]);
        assert_eq!(svg.matches("<path ").count(), 1);
        assert!(svg.contains("<circle "));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn mirrored_branch_spans_both_signs() {
        let branch = vec![PhasePoint::new(PI, -1.0), PhasePoint::new(0.5, 0.0)];
        let pts = mirrored(&branch);
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0], (-0.5, 0.0));
        assert_eq!(pts[1], (-PI, -1.0));
        assert_eq!(pts[2], (PI, -1.0));
        assert_eq!(pts[3], (0.5, 0.0));
    }
}
