//! Numerical integration: adaptive composite Simpson with a Richardson
//! error estimate for the 1-D integrals on intervals, and Gauss-Legendre
//! nodes for the model-manifold quadrature.

/// Integral value together with a heuristic error estimate (Richardson
/// extrapolation residue; it bounds the change under one further halving
/// of the step in practice, not rigorously).
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// Maximum recursion depth: at most 2^20 subintervals.
const MAX_DEPTH: u32 = 20;

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> QuadratureEstimate {
    if a == b {
        return QuadratureEstimate {
            value: 0.0,
            error_estimate: 0.0,
        };
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let (value, error_estimate) = simpson_step(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH);
    QuadratureEstimate {
        value,
        error_estimate,
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        // Richardson: S2 + delta/15 has one order higher accuracy
        (left + right + delta / 15.0, delta.abs() / 15.0)
    } else {
        let (lv, le) = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
        let (rv, re) = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        (lv + rv, le + re)
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre polynomial recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "need at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_on_smooth_integrands() {
        let est = adaptive_simpson(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((est.value - 2.0).abs() < 1e-11);
        let est = adaptive_simpson(|x| x * x, 0.0, 1.0, 1e-12);
        assert!((est.value - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn error_estimate_brackets_refinement() {
        let coarse = adaptive_simpson(|x| (5.0 * x).cos() * x.exp(), 0.0, 2.0, 1e-8);
        let fine = adaptive_simpson(|x| (5.0 * x).cos() * x.exp(), 0.0, 2.0, 1e-12);
        assert!((coarse.value - fine.value).abs() <= coarse.error_estimate + 1e-12);
    }

    #[test]
    fn gauss_legendre_exactness() {
        // order-n rule is exact for polynomials of degree 2n-1
        let (x, w) = gauss_legendre(8);
        let integral: f64 = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| wi * xi.powi(14))
            .sum();
        assert!((integral - 2.0 / 15.0).abs() < 1e-13);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
    }

    #[test]
    fn gauss_legendre_64_matches_simpson() {
        let (x, w) = gauss_legendre(64);
        let gl: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * (3.0 * xi).exp()).sum();
        let simpson = adaptive_simpson(|t| (3.0 * t).exp(), -1.0, 1.0, 1e-13).value;
        assert!((gl - simpson).abs() < 1e-10);
    }
}
