//! Special functions and summary statistics shared by the simulators.

use alloc::vec::Vec;

use crate::sum::Accumulator;
use crate::{Error, Result};

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-17;
const TINY: f64 = 1e-300;

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Regularized lower incomplete gamma function
/// `P(a, x) = (1/Γ(a)) ∫₀ˣ y^{a-1} e^{-y} dy`.
///
/// Series expansion below `x = a + 1`, Lentz continued fraction above.
/// Returns NaN outside `a > 0, x >= 0`.
pub fn regularized_lower_gamma(a: f64, x: f64) -> f64 {
    if !(a > 0.0) || !(x >= 0.0) {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x < a + 1.0 {
        lower_series(a, x)
    } else {
        1.0 - upper_continued_fraction(a, x)
    }
}

/// `Q(a, x) = 1 - P(a, x)`, computed without cancellation in the upper tail.
pub fn regularized_upper_gamma(a: f64, x: f64) -> f64 {
    if !(a > 0.0) || !(x >= 0.0) {
        return f64::NAN;
    }
    if x == 0.0 {
        return 1.0;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x < a + 1.0 {
        1.0 - lower_series(a, x)
    } else {
        upper_continued_fraction(a, x)
    }
}

fn log_prefactor(a: f64, x: f64) -> f64 {
    -x + a * libm::log(x) - ln_gamma(a)
}

pub(crate) fn lower_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if libm::fabs(term) < libm::fabs(sum) * EPS {
            break;
        }
    }
    (sum * libm::exp(log_prefactor(a, x))).min(1.0)
}

pub(crate) fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if libm::fabs(d) < TINY {
            d = TINY;
        }
        c = b + an / c;
        if libm::fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if libm::fabs(delta - 1.0) < EPS {
            break;
        }
    }
    (libm::exp(log_prefactor(a, x)) * h).clamp(0.0, 1.0)
}

/// Upper tail probability of a chi-square statistic with `df` degrees of freedom.
pub fn chi_square_sf(statistic: f64, df: usize) -> f64 {
    regularized_upper_gamma(0.5 * df as f64, 0.5 * statistic)
}

/// Pearson statistic over paired observed counts and expected counts.
pub fn chi_square_statistic(observed: &[f64], expected: &[f64]) -> f64 {
    observed.iter().zip(expected).map(|(o, e)| (o - e) * (o - e) / e).sum()
}

/// Pearson test of counts against a Poisson law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Bins `0, 1, ..., K-1` and a pooled tail `≥ K`, with `K` the first value
/// whose remaining expected count falls below 5; one parameter is known,
/// so `df = bins - 1`.
pub fn poisson_goodness_of_fit(samples: &[u64], mean: f64) -> Result<ChiSquareTest> {
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(Error::InvalidParameter { name: "mean", reason: "must be positive" });
    }
    let total = samples.len() as f64;
    let mut expected = Vec::new();
    let mut p = libm::exp(-mean);
    let mut cdf = 0.0;
    let mut k = 0u64;
    loop {
        let remaining = 1.0 - cdf - p;
        if p * total < 5.0 || remaining * total < 5.0 {
            break;
        }
        expected.push(p * total);
        cdf += p;
        k += 1;
        p *= mean / k as f64;
    }
    let cut = expected.len();
    if cut == 0 {
        return Err(Error::Degenerate("too few samples for a chi-square test"));
    }
    expected.push((1.0 - cdf) * total);
    let mut observed = alloc::vec![0.0; cut + 1];
    for &s in samples {
        observed[(s as usize).min(cut)] += 1.0;
    }
    let statistic = chi_square_statistic(&observed, &expected);
    let df = cut;
    Ok(ChiSquareTest { statistic, df, p_value: chi_square_sf(statistic, df) })
}

/// Supremum distance between two CDF-like sequences sampled on a shared grid.
///
/// The empirical sequence must be nondecreasing.
pub fn ks_distance(empirical: &[f64], model: &[f64]) -> Result<f64> {
    if empirical.len() != model.len() {
        return Err(Error::InvalidParameter { name: "model", reason: "length differs from empirical" });
    }
    if empirical.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Degenerate("empirical sequence is not monotone"));
    }
    Ok(empirical.iter().zip(model).map(|(e, m)| libm::fabs(e - m)).fold(0.0, f64::max))
}

/// Result of fitting a scaled gamma CDF to a wave profile.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFit {
    pub shape: f64,
    pub mass: f64,
    pub ks_distance: f64,
    pub xs: Vec<f64>,
}

/// Fit grid used when no explicit one is given: 0.25, 0.5, ..., 8.
pub fn default_fit_grid() -> Vec<f64> {
    (1..=32).map(|k| 0.25 * k as f64).collect()
}

/// Plateau location read off for normalisation.
pub const DEFAULT_PLATEAU_X: f64 = 50.0;

/// Least-squares gamma shape for `masses[i] / plateau ≈ P(shape, xs[i])`.
pub fn fit_gamma_shape(xs: &[f64], masses: &[f64], plateau: f64) -> Result<WaveFit> {
    if !(plateau > 0.0) || !plateau.is_finite() {
        return Err(Error::Degenerate("wave plateau must be positive"));
    }
    if xs.len() != masses.len() || xs.is_empty() {
        return Err(Error::InvalidParameter { name: "masses", reason: "need one mass per grid point" });
    }
    if masses.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Degenerate("wave masses are not monotone"));
    }
    let normalized: Vec<f64> = masses.iter().map(|m| m / plateau).collect();
    let sse = |log_shape: f64| {
        let a = libm::exp(log_shape);
        xs.iter()
            .zip(&normalized)
            .map(|(&x, &y)| {
                let d = y - regularized_lower_gamma(a, x);
                d * d
            })
            .sum::<f64>()
    };

    // coarse scan brackets the minimum, golden section refines it
    let (lo, hi) = (libm::log(0.05), libm::log(50.0));
    let steps = 400;
    let grid: Vec<f64> = (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect();
    let best = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| (i, sse(t)))
        .fold((0, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc })
        .0;
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(steps)];
    let ratio = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (sse(c), sse(d));
    while b - a > 1e-13 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = sse(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = sse(d);
        }
    }
    let shape = libm::exp(0.5 * (a + b));
    let model: Vec<f64> = xs.iter().map(|&x| regularized_lower_gamma(shape, x)).collect();
    let ks = ks_distance(&normalized, &model)?;
    Ok(WaveFit { shape, mass: plateau, ks_distance: ks, xs: xs.to_vec() })
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub replicas: usize,
}

impl McEstimate {
    /// Reduces per-replica values in the given order.
    pub fn from_samples(values: &[f64]) -> Self {
        let r = values.len();
        let mut acc = Accumulator::new();
        acc.extend(values.iter().copied());
        let mean = if r == 0 { f64::NAN } else { acc.value() / r as f64 };
        let std_error = if r < 2 {
            f64::NAN
        } else {
            let mut sq = Accumulator::new();
            sq.extend(values.iter().map(|v| (v - mean) * (v - mean)));
            libm::sqrt(sq.value() / (r - 1) as f64 / r as f64)
        };
        Self { mean, std_error, replicas: r }
    }

    /// Agreement test used by the Monte Carlo acceptance checks:
    /// `|mean - target| <= max(k * SE, rel * |target|)`.
    pub fn agrees_with(&self, target: f64, k_se: f64, rel: f64) -> bool {
        libm::fabs(self.mean - target) <= (k_se * self.std_error).max(rel * libm::fabs(target))
    }
}

/// Column-wise estimates from per-replica rows.
pub fn column_estimates(rows: &[Vec<f64>]) -> Vec<McEstimate> {
    let width = rows.first().map_or(0, Vec::len);
    (0..width)
        .map(|j| {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            McEstimate::from_samples(&col)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre_64;
    use proptest::prelude::*;

    #[test]
    fn exponential_case() {
        for &x in &[0.1, 1.0, 2.5, 10.0, 40.0] {
            let p = regularized_lower_gamma(1.0, x);
            assert!((p - (1.0 - libm::exp(-x))).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn endpoints() {
        assert_eq!(regularized_lower_gamma(2.5, 0.0), 0.0);
        assert_eq!(regularized_lower_gamma(2.5, f64::INFINITY), 1.0);
        assert!((regularized_lower_gamma(2.5, 500.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn shape_two_at_one_matches_quadrature() {
        let closed = 1.0 - 2.0 * libm::exp(-1.0);
        let quad = gauss_legendre_64().integrate(0.0, 1.0, |y| y * libm::exp(-y));
        assert!((closed - quad).abs() < 1e-15);
        assert!((regularized_lower_gamma(2.0, 1.0) - closed).abs() < 1e-14);
        assert!((closed - 0.2642411176571153).abs() < 1e-15);
    }

    #[test]
    fn branches_agree_at_switchover() {
        for &a in &[0.3, 1.0, 1.5, 2.0, 3.7, 10.0, 55.0] {
            let x = a + 1.0;
            let s = lower_series(a, x);
            let c = 1.0 - upper_continued_fraction(a, x);
            assert!((s - c).abs() < 1e-12, "a={a}: {s} vs {c}");
        }
    }

    #[test]
    fn chi_square_reference_quantiles() {
        // 99% quantiles of chi-square(5) and chi-square(1)
        assert!((chi_square_sf(15.086272469388987, 5) - 0.01).abs() < 1e-9);
        assert!((chi_square_sf(6.6348966010212145, 1) - 0.01).abs() < 1e-9);
    }

    #[test]
    fn ks_identical_and_extreme() {
        let m = [0.1, 0.4, 0.9, 1.0];
        assert_eq!(ks_distance(&m, &m).unwrap(), 0.0);
        assert_eq!(ks_distance(&[0.0; 4], &m).unwrap(), 1.0);
        assert!(ks_distance(&[0.2, 0.1, 0.3, 0.4], &m).is_err());
    }

    #[test]
    fn ks_step_against_linear_refinement() {
        // step CDF jumping 0 -> 0.5 -> 1 at grid points 0, 1, 2; linear
        // interpolation evaluated on the refinement {0, 0.5, 1, 1.5, 2}
        let step = [0.0, 0.0, 0.5, 0.5, 1.0];
        let linear = [0.0, 0.25, 0.5, 0.75, 1.0];
        let d = ks_distance(&step, &linear).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
        assert!(d <= 0.5 / 2.0 + 1e-15);
    }

    #[test]
    fn self_fit_recovers_shape_and_mass() {
        let xs = default_fit_grid();
        let masses: Vec<f64> = xs.iter().map(|&x| 0.5 * regularized_lower_gamma(2.0, x)).collect();
        let fit = fit_gamma_shape(&xs, &masses, 0.5).unwrap();
        assert!((fit.shape - 2.0).abs() < 1e-6, "{}", fit.shape);
        assert_eq!(fit.mass, 0.5);
        assert!(fit.ks_distance < 1e-9);

        let masses: Vec<f64> = xs.iter().map(|&x| regularized_lower_gamma(1.0, x)).collect();
        let fit = fit_gamma_shape(&xs, &masses, 1.0).unwrap();
        assert!((fit.shape - 1.0).abs() < 1e-6);
    }

    #[test]
    fn zero_plateau_is_degenerate() {
        let xs = default_fit_grid();
        let zeros = std::vec![0.0; xs.len()];
        assert!(matches!(fit_gamma_shape(&xs, &zeros, 0.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn mc_estimate_of_constant_has_zero_error() {
        let e = McEstimate::from_samples(&[0.25; 10]);
        assert_eq!(e.mean, 0.25);
        assert_eq!(e.std_error, 0.0);
        assert!(e.agrees_with(0.27, 3.0, 0.1));
        assert!(!e.agrees_with(0.5, 3.0, 0.1));
    }

    proptest! {
        #[test]
        fn increasing_in_x_decreasing_in_shape(a in 0.2f64..20.0, x in 0.01f64..40.0) {
            let p = regularized_lower_gamma(a, x);
            prop_assert!((0.0..=1.0).contains(&p));
            if p > 1e-300 && p < 1.0 - 1e-12 {
                prop_assert!(regularized_lower_gamma(a, x * 1.05) > p);
                prop_assert!(regularized_lower_gamma(a * 1.05, x) < p);
            }
        }
    }

    #[test]
    fn poisson_fit_accepts_exact_frequencies() {
        // counts proportional to Poisson(1) with 10^4 samples
        let mut samples = Vec::new();
        for (k, c) in [(0u64, 3679), (1, 3679), (2, 1839), (3, 613), (4, 153), (5, 31), (6, 6)] {
            samples.extend(core::iter::repeat_n(k, c));
        }
        let t = poisson_goodness_of_fit(&samples, 1.0).unwrap();
        assert!(t.p_value > 0.99, "{t:?}");
        let shifted: Vec<u64> = samples.iter().map(|s| s + 1).collect();
        assert!(poisson_goodness_of_fit(&shifted, 1.0).unwrap().p_value < 1e-10);
        assert!(poisson_goodness_of_fit(&[0, 1], 1.0).is_err());
    }
}
