//! Defective renewal equations `u_n = Σ_{r=1}^{n-1} a_r u_{n-r} + b_n`.
//!
//! The solver is a direct O(N²) convolution. Kernels that sum to less than
//! one give summable solutions whose total is `Σ b_n / (1 - Σ a_r)`.

use alloc::vec::Vec;

use crate::sum::Accumulator;
use crate::{Error, Result};

/// Kernel `a_r` (r ≥ 1) and forcing `b_n` (n ≥ 1) given as oracles, plus the
/// kernel's total mass.
pub struct RenewalSystem<K, B> {
    kernel: K,
    forcing: B,
    kernel_total: f64,
}

impl<K, B> RenewalSystem<K, B>
where
    K: Fn(usize) -> f64,
    B: Fn(usize) -> f64,
{
    pub fn new(kernel: K, forcing: B, kernel_total: f64) -> Self {
        Self { kernel, forcing, kernel_total }
    }

    pub fn kernel_total(&self) -> f64 {
        self.kernel_total
    }

    pub fn is_defective(&self) -> bool {
        self.kernel_total < 1.0
    }

    /// `u_1..u_N`; element `i` of the result is `u_{i+1}`.
    pub fn solve(&self, len: usize) -> Vec<f64> {
        let kernel: Vec<f64> = (1..len.max(1)).map(|r| (self.kernel)(r)).collect();
        let forcing: Vec<f64> = (1..=len).map(|n| (self.forcing)(n)).collect();
        solve_convolution(&kernel, &forcing)
    }

    /// `Σ_n u_n = forcing_total / (1 - kernel_total)`.
    pub fn total_sum(&self, forcing_total: f64) -> Result<f64> {
        if !self.is_defective() {
            return Err(Error::NotDefective(self.kernel_total));
        }
        if !forcing_total.is_finite() {
            return Err(Error::NonFinite("forcing total"));
        }
        Ok(forcing_total / (1.0 - self.kernel_total))
    }
}

/// Solves the recursion from tabulated sequences: `kernel[r-1] = a_r`,
/// `forcing[n-1] = b_n`. Needs `kernel.len() + 1 >= forcing.len()`.
pub fn solve_convolution(kernel: &[f64], forcing: &[f64]) -> Vec<f64> {
    let len = forcing.len();
    assert!(kernel.len() + 1 >= len, "kernel too short for requested length");
    let mut u: Vec<f64> = Vec::with_capacity(len);
    for n in 1..=len {
        let mut acc = 0.0;
        // Σ_{r=1}^{n-1} a_r u_{n-r}
        for r in 1..n {
            acc += kernel[r - 1] * u[n - r - 1];
        }
        u.push(acc + forcing[n - 1]);
    }
    u
}

/// Truncated series with the remainder after its last term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub partial: f64,
    /// Remainder `Σ_{k > last} t_k`, from a closed form or certified bound.
    pub tail: f64,
    pub terms: usize,
}

impl SeriesSum {
    pub fn value(&self) -> f64 {
        self.partial + self.tail
    }
}

/// Sums `term(first), term(first+1), ...` until the remainder
/// `tail_after(n)` falls below `rel_tol` of the running sum, or `max_terms`
/// terms have been added. The remainder is reported either way.
pub fn sum_series<T, R>(first: usize, mut term: T, mut tail_after: R, rel_tol: f64, max_terms: usize) -> SeriesSum
where
    T: FnMut(usize) -> f64,
    R: FnMut(usize) -> f64,
{
    let mut acc = Accumulator::new();
    let mut n = first;
    let mut terms = 0;
    loop {
        let t = term(n);
        acc.add(t);
        terms += 1;
        let tail = tail_after(n);
        let sum = acc.value();
        if tail <= rel_tol * libm::fabs(sum) || terms >= max_terms {
            return SeriesSum { partial: sum, tail, terms };
        }
        n += 1;
    }
}

/// Exponential tilt `c*` with `Σ_{n≥1} e^{-c* n} h_n = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MalthusianRoot {
    pub rate: f64,
    /// `Σ_{n≤N} e^{-c* n} h_n - 1` at the certified truncation `N`.
    pub residual: f64,
    pub terms: usize,
}

const TAIL_TOL: f64 = 1e-12;
const RATIO_WINDOW: usize = 16;
const MAX_SERIES_TERMS: usize = 1_000_000;

enum TiltedSum {
    /// Partial sums already exceed one.
    Above,
    Value {
        sum: f64,
        terms: usize,
    },
    /// Remainder could not be certified within the term budget.
    Uncertain {
        partial: f64,
    },
}

/// Evaluates `Σ_{n≥1} e^{-c n} h_n`. The remainder after `N` terms is
/// bounded by a geometric series whose ratio is the largest of the last 16
/// observed term ratios; this assumes the term ratios do not increase
/// beyond the truncation point.
fn tilted_sum<F: Fn(usize) -> f64>(h: &F, c: f64, stop_above: bool) -> TiltedSum {
    let decay = libm::exp(-c);
    let mut acc = Accumulator::new();
    let mut ratios = [f64::INFINITY; RATIO_WINDOW];
    let mut prev = 0.0;
    let mut weight = 1.0;
    for n in 1..=MAX_SERIES_TERMS {
        weight *= decay;
        let t = weight * h(n);
        acc.add(t);
        let sum = acc.value();
        if stop_above && sum > 1.0 {
            return TiltedSum::Above;
        }
        ratios[n % RATIO_WINDOW] = if prev > 0.0 { t / prev } else { f64::INFINITY };
        if n > RATIO_WINDOW {
            let ratio = ratios.iter().copied().fold(0.0, f64::max);
            if ratio < 1.0 {
                let tail = t * ratio / (1.0 - ratio);
                if t <= 1e-15 * sum && tail < TAIL_TOL {
                    return TiltedSum::Value { sum, terms: n };
                }
            }
        }
        prev = t;
    }
    TiltedSum::Uncertain { partial: acc.value() }
}

/// Finds the Malthusian parameter by bisection on the decreasing map
/// `c ↦ Σ e^{-cn} h_n`. The bracket starts at `[1e-12, bracket_hint]` and the
/// upper end is doubled until the sum drops below one.
pub fn malthusian_root<F: Fn(usize) -> f64>(h: F, bracket_hint: f64) -> Result<MalthusianRoot> {
    if h(1) <= 0.0 {
        return Err(Error::InvalidParameter { name: "h", reason: "h_1 must be positive" });
    }
    let mut lo = 1e-12;
    match tilted_sum(&h, lo, true) {
        TiltedSum::Above => {}
        TiltedSum::Value { sum, .. } | TiltedSum::Uncertain { partial: sum } => {
            return Err(Error::NoMalthusianRoot(sum))
        }
    }
    let mut hi = if bracket_hint > lo { bracket_hint } else { 1.0 };
    let mut doublings = 0;
    loop {
        match tilted_sum(&h, hi, true) {
            TiltedSum::Value { sum, .. } if sum <= 1.0 => break,
            _ => {
                lo = hi;
                hi *= 2.0;
                doublings += 1;
                if doublings > 60 {
                    return Err(Error::Bracketing("upper bracket not found"));
                }
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match tilted_sum(&h, mid, true) {
            TiltedSum::Above => lo = mid,
            TiltedSum::Value { sum, .. } => {
                if sum > 1.0 {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            TiltedSum::Uncertain { .. } => lo = mid,
        }
    }
    let rate = 0.5 * (lo + hi);
    match tilted_sum(&h, rate, false) {
        TiltedSum::Value { sum, terms } => Ok(MalthusianRoot { rate, residual: sum - 1.0, terms }),
        _ => Err(Error::Bracketing("remainder at root not certified")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_kernel_returns_forcing() {
        let sys = RenewalSystem::new(|_| 0.0, |n| 1.0 / n as f64, 0.0);
        let u = sys.solve(50);
        for (i, v) in u.iter().enumerate() {
            assert_eq!(*v, 1.0 / (i + 1) as f64);
        }
        assert_eq!(sys.total_sum(3.5).unwrap(), 3.5);
    }

    #[test]
    fn kingman_instance_first_terms() {
        // a_r = (β/(1-β)) μ_r with μ_r = 2/((r+1)(r+2)), b_n = 2^{-n}, β = 1/4
        let sys = RenewalSystem::new(
            |r| (1.0 / 3.0) * 2.0 / ((r as f64 + 1.0) * (r as f64 + 2.0)),
            |n| libm::pow(0.5, n as f64),
            1.0 / 3.0,
        );
        let u = sys.solve(2);
        assert_eq!(u[0], 0.5);
        assert!((u[1] - (1.0 / 3.0 * 0.5 / 3.0 + 0.25)).abs() < 1e-15);
        assert!((u[1] - 0.3055556).abs() < 1e-7);
        assert!((sys.total_sum(1.0).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn partial_sums_converge_to_total() {
        let sys = RenewalSystem::new(
            |r| (1.0 / 3.0) * 2.0 / ((r as f64 + 1.0) * (r as f64 + 2.0)),
            |n| libm::pow(0.5, n as f64),
            1.0 / 3.0,
        );
        let u = sys.solve(10_000);
        let partial = crate::sum::compensated_sum(u.iter().copied());
        let total = sys.total_sum(1.0).unwrap();
        assert!(partial < total);
        assert!((total - partial) / total < 1e-3);
    }

    #[test]
    fn non_defective_kernel_is_rejected() {
        let sys = RenewalSystem::new(|_| 0.5, |_| 1.0, 1.0);
        assert_eq!(sys.total_sum(1.0), Err(Error::NotDefective(1.0)));
    }

    #[test]
    fn geometric_series_root() {
        let root = malthusian_root(|_| 1.0, 1.0).unwrap();
        assert!((root.rate - core::f64::consts::LN_2).abs() < 1e-12);
        assert!(root.residual.abs() < 1e-10);
    }

    #[test]
    fn exponential_weights_root() {
        let root = malthusian_root(|n| libm::pow(2.0, n as f64), 0.5).unwrap();
        assert!((root.rate - libm::log(4.0)).abs() < 1e-12);
        assert!(root.residual.abs() < 1e-10);
    }

    #[test]
    fn root_increases_with_weights() {
        let base = malthusian_root(|n| 1.0 / (n * n) as f64 + 0.5 * libm::exp(-(n as f64)), 1.0);
        // Σ h_n at c=0 is ζ(2) + 0.5/(e-1) ≈ 1.94 > 1
        let base = base.unwrap().rate;
        let bigger = malthusian_root(|n| 1.1 / (n * n) as f64 + 0.5 * libm::exp(-(n as f64)), 1.0).unwrap().rate;
        assert!(bigger > base);
    }

    #[test]
    fn sub_critical_weights_have_no_root() {
        let err = malthusian_root(|n| libm::pow(0.25, n as f64), 1.0).unwrap_err();
        assert!(matches!(err, Error::NoMalthusianRoot(s) if (s - 1.0 / 3.0).abs() < 1e-9));
    }

    #[test]
    fn geometric_series_sum_with_closed_tail() {
        let s = sum_series(0, |n| libm::pow(0.5, n as f64), |n| libm::pow(0.5, n as f64), 1e-14, 1000);
        assert!((s.value() - 2.0).abs() < 1e-14);
        assert!(s.terms < 60);
    }

    proptest! {
        #[test]
        fn nonnegative_and_additive(
            kernel in proptest::collection::vec(0.0f64..0.2, 30),
            f1 in proptest::collection::vec(0.0f64..1.0, 30),
            f2 in proptest::collection::vec(0.0f64..1.0, 30),
        ) {
            let u1 = solve_convolution(&kernel, &f1);
            let u2 = solve_convolution(&kernel, &f2);
            let sum: Vec<f64> = f1.iter().zip(&f2).map(|(a, b)| a + b).collect();
            let u12 = solve_convolution(&kernel, &sum);
            for i in 0..30 {
                prop_assert!(u1[i] >= 0.0);
                prop_assert!((u12[i] - u1[i] - u2[i]).abs() <= 1e-12 * (1.0 + u12[i]));
            }
        }
    }
}
