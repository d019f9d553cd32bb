//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.
//!
//! Integrands in this crate are sums of narrow Gaussians, some of them
//! truncated. Callers pass the truncation boundaries and component centers as
//! breakpoints so every panel sees a smooth function.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { abs_tol: 1e-10, rel_tol: 1e-12, max_depth: 48 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

struct Adaptive<'a, F> {
    f: &'a F,
    cfg: QuadConfig,
    evaluations: usize,
    unconverged: Option<(f64, f64)>,
}

impl<F: Fn(f64) -> f64> Adaptive<'_, F> {
    fn run(&mut self, a: f64, b: f64, tol: f64, depth: u32) -> (f64, f64) {
        let (v, e) = gk15(self.f, a, b);
        self.evaluations += 15;
        if e <= tol.max(self.cfg.rel_tol * v.abs()) || b - a <= f64::EPSILON * a.abs().max(b.abs()) * 8.0 {
            return (v, e);
        }
        if depth >= self.cfg.max_depth {
            self.unconverged.get_or_insert((a, b));
            return (v, e);
        }
        let m = 0.5 * (a + b);
        let (l, le) = self.run(a, m, 0.5 * tol, depth + 1);
        let (r, re) = self.run(m, b, 0.5 * tol, depth + 1);
        (l + r, le + re)
    }
}

/// `∫_a^b f`, split at every breakpoint inside `(a, b)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breakpoints: &[f64], cfg: QuadConfig) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::Domain(format!("invalid integration interval [{a}, {b}]")));
    }
    let mut pts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut edges = Vec::with_capacity(pts.len() + 2);
    edges.push(a);
    edges.extend(pts);
    edges.push(b);

    let panels = (edges.len() - 1) as f64;
    let mut run = Adaptive { f: &f, cfg, evaluations: 0, unconverged: None };
    let mut value = 0.0;
    let mut error = 0.0;
    for win in edges.windows(2) {
        let (v, e) = run.run(win[0], win[1], cfg.abs_tol / panels, 0);
        value += v;
        error += e;
    }
    if !value.is_finite() {
        return Err(Error::Numeric(format!("integral over [{a}, {b}] is not finite")));
    }
    if let Some((lo, hi)) = run.unconverged {
        if error > cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            return Err(Error::Numeric(format!(
                "quadrature did not converge on [{lo}, {hi}] (estimate {value}, error {error}, {} evaluations)",
                run.evaluations
            )));
        }
    }
    Ok(QuadResult { value, error_estimate: error, evaluations: run.evaluations })
}

/// Iterated integral `∫_{x0}^{x1} ∫_{y0}^{y1} f(x, y) dy dx`.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    x_breaks: &[f64],
    y_breaks: &[f64],
    cfg: QuadConfig,
) -> Result<QuadResult> {
    let inner_cfg = QuadConfig { abs_tol: cfg.abs_tol / (x1 - x0).max(1.0), ..cfg };
    let failure = std::cell::RefCell::new(None);
    let evals = std::cell::Cell::new(0usize);
    let outer = integrate(
        |x| match integrate(|y| f(x, y), y0, y1, y_breaks, inner_cfg) {
            Ok(r) => {
                evals.set(evals.get() + r.evaluations);
                r.value
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        x0,
        x1,
        x_breaks,
        cfg,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r = outer?;
    Ok(QuadResult { evaluations: evals.get() + r.evaluations, ..r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x * x * x - 2.0 * x + 1.0, -1.0, 2.0, &[], QuadConfig::default()).unwrap();
        // ∫ = [x⁴/4 - x² + x] from -1 to 2 = 2 - (-1.75) = 3.75
        assert!((r.value - 3.75).abs() < 1e-13);
    }

    #[test]
    fn step_with_breakpoint() {
        let f = |x: f64| if x < 0.3 { 1.0 } else { 0.0 };
        let r = integrate(f, 0.0, 1.0, &[0.3], QuadConfig::default()).unwrap();
        assert!((r.value - 0.3).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_interval() {
        assert!(integrate(|x| x, 1.0, 0.0, &[], QuadConfig::default()).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, &[], QuadConfig::default()).is_err());
    }

    #[test]
    fn two_dimensional_product() {
        let r = integrate_2d(|x, y| x * y, (0.0, 1.0), (0.0, 2.0), &[], &[], QuadConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
    }
}
