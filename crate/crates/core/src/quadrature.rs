//! Adaptive Gauss-Kronrod quadrature.
//!
//! Each interval is estimated with the 21-point Kronrod rule; the embedded
//! 10-point Gauss value supplies the error estimate, sharpened by the usual
//! `(200 e / resasc)^{3/2}` rescaling so smooth integrands converge in one
//! or two panels. The driver repeatedly bisects the interval with the
//! largest error until the summed estimate meets a relative target.
//!
//! All nodes are interior, so integrable endpoint behaviour is tolerated,
//! but the integrand must be finite at every sampled point. The convergence
//! target is purely relative, which suits the strictly positive integrands
//! used here; a non-integrable integrand can inflate the accumulated value
//! faster than the error estimate and must not be passed in.

use crate::{Error, Result};

/// Kronrod abscissae on (0, 1]; the rule is symmetric about the midpoint.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_21,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_996,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

/// 10-point Gauss weights; the Gauss nodes are the odd-index entries of `XGK`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

const MAX_BISECTIONS: usize = 2000;

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// One 21-point Kronrod evaluation over `[a, b]`.
fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = WGK[10] * fc.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..5 {
        let idx = 2 * j + 1;
        let x = half * XGK[idx];
        let (f1, f2) = (f(center - x), f(center + x));
        fv1[idx] = f1;
        fv2[idx] = f2;
        resg += WG[j] * (f1 + f2);
        resk += WGK[idx] * (f1 + f2);
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let idx = 2 * j;
        let x = half * XGK[idx];
        let (f1, f2) = (f(center - x), f(center + x));
        fv1[idx] = f1;
        fv2[idx] = f2;
        resk += WGK[idx] * (f1 + f2);
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }

    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for idx in 0..10 {
        resasc += WGK[idx] * ((fv1[idx] - reskh).abs() + (fv2[idx] - reskh).abs());
    }

    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * ((200.0 * error / resasc).powf(1.5)).min(1.0);
    }
    let round_off = 50.0 * f64::EPSILON * resabs;
    if round_off > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(round_off);
    }
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]` until the summed error estimate drops below
/// `rel_tol` times the accumulated value.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    context: &'static str,
) -> Result<f64> {
    let mut panels = vec![kronrod_panel(&f, a, b)];
    for _ in 0..MAX_BISECTIONS {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= rel_tol * total.abs().max(f64::MIN_POSITIVE) {
            return Ok(total);
        }

        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        panels.push(kronrod_panel(&f, a, mid));
        panels.push(kronrod_panel(&f, mid, b));
    }
    Err(Error::QuadratureNonConvergence { context })
}
