//! Gauss-Legendre quadrature.
//!
//! Nodes are the roots of the Legendre polynomial `P_n`, found by Newton
//! iteration from the Chebyshev-like initial guess; weights follow from the
//! derivative. Accuracy is close to machine precision for the node counts
//! used here (up to a few hundred).

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// A Gauss-Legendre rule on the reference interval `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Evaluate `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p_next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature order must be at least 1");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            // Tricomi-style initial guess for the i-th root in (0, 1].
            let mut x =
                (core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / dp;
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
            let (_, dp) = legendre_and_derivative(n, 0.0);
            weights[n / 2] = 2.0 / (dp * dp);
        }
        Self { nodes, weights }
    }

    /// Integrate `f` over `[a, b]` with this rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(self.weights.iter()) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let nodes = self.nodes.iter().map(|&x| mid + half * x).collect();
        let weights = self.weights.iter().map(|&w| w * half).collect();
        (nodes, weights)
    }
}

/// Integrate `f` over `[a, b]` split into `panels` equal panels, each
/// handled by an `order`-point Gauss-Legendre rule. Useful for oscillatory
/// integrands where a single high-order rule would waste nodes.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
    mut f: F,
) -> f64 {
    let rule = GaussLegendre::new(order);
    let width = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        acc += rule.integrate(lo, lo + width, &mut f);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn integrates_polynomials_exactly() {
        // n-point rule is exact through degree 2n-1.
        let rule = GaussLegendre::new(5);
        let exact = 2.0 / 10.0; // int_{-1}^{1} x^9 dx = 0; x^8 -> 2/9
        let _ = exact;
        assert_abs_diff_eq!(rule.integrate(-1.0, 1.0, |x| x.powi(9)), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            rule.integrate(-1.0, 1.0, |x| x.powi(8)),
            2.0 / 9.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for &n in &[1usize, 2, 7, 64, 200] {
            let rule = GaussLegendre::new(n);
            let sum: f64 = rule.weights.iter().sum();
            assert_abs_diff_eq!(sum, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn panel_integration_of_oscillatory_function() {
        // int_0^{20} sin(x) dx = 1 - cos(20)
        let got = integrate_panels(0.0, 20.0, 64, 8, |x| x.sin());
        assert_abs_diff_eq!(got, 1.0 - 20.0f64.cos(), epsilon = 1e-12);
    }

    #[test]
    fn mapped_nodes_cover_target_interval() {
        let rule = GaussLegendre::new(40);
        let (nodes, weights) = rule.mapped(2.0, 5.0);
        assert!(nodes.iter().all(|&x| x > 2.0 && x < 5.0));
        let sum: f64 = weights.iter().sum();
        assert_abs_diff_eq!(sum, 3.0, epsilon = 1e-12);
    }
}
