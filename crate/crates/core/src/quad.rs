//! Quadrature rules shared by the evaluators.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::legendre::GaussLegendre;

fn reference_rule(n: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quadrature cache poisoned");
    map.entry(n)
        .or_insert_with(|| {
            let rule = GaussLegendre::new(n).expect("degree >= 2");
            Arc::new(rule.as_node_weight_pairs().to_vec())
        })
        .clone()
}

/// Gauss-Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = reference_rule(n.max(2));
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.iter().map(|&(x, w)| (mid + half * x, half * w)).collect()
}

/// Composite Gauss-Legendre over the given breakpoints, `n` nodes per panel.
pub fn composite_gl(breaks: &[f64], n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n * breaks.len());
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            out.extend(gauss_legendre(n, w[0], w[1]));
        }
    }
    out
}

/// Equispaced periodic nodes on `[0, period)` with equal weights summing to one.
pub fn trapezoid_periodic(n: usize, period: f64) -> Vec<(f64, f64)> {
    let h = period / n as f64;
    (0..n).map(|j| (j as f64 * h, 1.0 / n as f64)).collect()
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().ln()).collect();
    fit_line(&lx, &ly).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials() {
        let q = gauss_legendre(5, 0.0, 2.0);
        let s: f64 = q.iter().map(|(x, w)| w * x.powi(9)).sum();
        assert!((s - 2f64.powi(10) / 10.0).abs() < 1e-10);
    }

    #[test]
    fn trapezoid_exact_on_trig() {
        let q = trapezoid_periodic(16, std::f64::consts::TAU);
        let s: f64 = q.iter().map(|(x, w)| w * (3.0 * x).cos().powi(2)).sum();
        assert!((s - 0.5).abs() < 1e-14);
    }

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-0.5)).collect();
        assert!((loglog_slope(&x, &y) + 0.5).abs() < 1e-12);
    }
}
