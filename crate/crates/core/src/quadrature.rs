//! Fixed-order Gauss–Legendre quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;
use once_cell::race::OnceBox;

/// Number of nodes of the shared rule used for tail integrals.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `order`-point rule on [-1, 1] by Newton iteration on the
    /// Legendre polynomial, starting from the Tricomi approximation.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        let n = order as f64;
        for i in 0..order {
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (n + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if libm::fabs(dx) < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Integrates over `[0, b]` on panels refined geometrically toward zero,
    /// for integrands with an integrable kink or sharp feature at the origin.
    pub fn integrate_graded<F: FnMut(f64) -> f64>(&self, b: f64, levels: u32, mut f: F) -> f64 {
        let mut total = 0.0;
        let mut hi = b;
        for _ in 0..levels {
            let lo = 0.5 * hi;
            total += self.integrate(lo, hi, &mut f);
            hi = lo;
        }
        total + self.integrate(0.0, hi, &mut f)
    }
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = order as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The process-wide 64-node rule.
pub fn gauss_legendre_64() -> &'static GaussLegendre {
    static RULE: OnceBox<GaussLegendre> = OnceBox::new();
    RULE.get_or_init(|| alloc::boxed::Box::new(GaussLegendre::new(DEFAULT_ORDER)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        let rule = gauss_legendre_64();
        let s: f64 = rule.weights().iter().sum();
        assert!((s - 2.0).abs() < 1e-13);
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        let rule = gauss_legendre_64();
        // degree 127 is the limit for 64 nodes
        let v = rule.integrate(0.0, 1.0, |x| libm::pow(x, 127.0));
        assert!((v - 1.0 / 128.0).abs() < 1e-14);
        let v = rule.integrate(-1.0, 3.0, |x| x * x);
        assert!((v - 28.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn small_rule_matches_textbook_nodes() {
        let rule = GaussLegendre::new(2);
        let r = 1.0 / libm::sqrt(3.0);
        let mut xs: std::vec::Vec<f64> = rule.nodes().to_vec();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((xs[0] + r).abs() < 1e-15 && (xs[1] - r).abs() < 1e-15);
    }

    #[test]
    fn graded_panels_handle_square_root_kink() {
        let rule = gauss_legendre_64();
        let v = rule.integrate_graded(1.0, 40, libm::sqrt);
        assert!((v - 2.0 / 3.0).abs() < 1e-13);
    }
}
