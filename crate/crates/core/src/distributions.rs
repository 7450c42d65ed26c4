//! Fitness distributions on [0, 1] described through their moments and
//! tail integrals.
//!
//! The mutant distribution used throughout is the polynomial-tail family
//! with `q(1-h, 1] = h^α` exactly, i.e. density `α (1-x)^{α-1}`. Initial
//! populations are usually point masses below 1.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::analysis::ln_gamma;
use crate::quadrature::gauss_legendre_64;
use crate::renewal::{sum_series, SeriesSum};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum FitnessDistribution {
    /// `q(1-h, 1] = h^alpha`.
    PolynomialTail { alpha: f64 },
    /// Unit atom at `location`.
    PointMass { location: f64 },
    /// Bin masses on the midpoint grid `(i + 1/2) / G`.
    Grid(GridMeasure),
}

impl FitnessDistribution {
    pub fn polynomial_tail(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter { name: "alpha", reason: "must be positive and finite" });
        }
        Ok(Self::PolynomialTail { alpha })
    }

    pub fn point_mass(location: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&location) {
            return Err(Error::InvalidParameter { name: "location", reason: "must lie in [0, 1]" });
        }
        Ok(Self::PointMass { location })
    }

    /// Tail exponent for the polynomial-tail family.
    pub fn tail_exponent(&self) -> Option<f64> {
        match self {
            Self::PolynomialTail { alpha } => Some(*alpha),
            _ => None,
        }
    }

    /// `∫ x^n d(dx)`.
    pub fn moment(&self, n: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        match self {
            Self::PolynomialTail { alpha } => {
                let n = n as f64;
                // n! Γ(α+1) / Γ(n+α+1) in log space
                libm::exp(ln_gamma(n + 1.0) + ln_gamma(alpha + 1.0) - ln_gamma(n + alpha + 1.0))
            }
            Self::PointMass { location } => libm::pow(*location, n as f64),
            Self::Grid(g) => g.power_sum(n, 1.0),
        }
    }

    /// `q(1-h, 1]`. The whole space when `h >= 1`.
    pub fn tail_mass(&self, h: f64) -> f64 {
        let h = h.clamp(0.0, 1.0);
        match self {
            Self::PolynomialTail { alpha } => libm::pow(h, *alpha),
            _ => self.tail_power_integral(0, h).unwrap_or(f64::NAN),
        }
    }

    /// `∫_{(1-h, 1]} y^r d(dy)`, with `h = 1` covering all of [0, 1].
    ///
    /// For the polynomial-tail family this is evaluated by 64-node
    /// Gauss–Legendre quadrature after substituting `u = 1 - y` and
    /// `u = c s^{k/α}` with `k = 2⌈α⌉`, which makes the Jacobian polynomial
    /// and the `r = 0` case exact. For large `r` the range is cut where
    /// `(1-u)^r` has decayed far below double precision.
    pub fn tail_power_integral(&self, r: u64, h: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&h) {
            return Err(Error::InvalidParameter { name: "h", reason: "must lie in [0, 1]" });
        }
        Ok(match self {
            Self::PolynomialTail { alpha } => polytail_tail_power(*alpha, r, h),
            Self::PointMass { location } => {
                if h >= 1.0 || *location > 1.0 - h {
                    libm::pow(*location, r as f64)
                } else {
                    0.0
                }
            }
            Self::Grid(g) => g.power_sum(r, h),
        })
    }

    /// `∫ d(dx) / (1 - x)`; `+∞` when the integral diverges.
    pub fn reciprocal_gap_integral(&self) -> f64 {
        match self {
            Self::PolynomialTail { alpha } => {
                if *alpha > 1.0 {
                    alpha / (alpha - 1.0)
                } else {
                    f64::INFINITY
                }
            }
            Self::PointMass { location } => {
                if *location < 1.0 {
                    1.0 / (1.0 - location)
                } else {
                    f64::INFINITY
                }
            }
            Self::Grid(g) => g.reciprocal_gap(1.0),
        }
    }

    /// `∫_{(1-h, 1]} d(dx) / (1 - x)`.
    pub fn reciprocal_gap_over(&self, h: f64) -> f64 {
        let h = h.clamp(0.0, 1.0);
        match self {
            Self::PolynomialTail { alpha } => {
                if *alpha > 1.0 {
                    alpha / (alpha - 1.0) * libm::pow(h, alpha - 1.0)
                } else if h > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            Self::PointMass { location } => {
                if h >= 1.0 || *location > 1.0 - h {
                    1.0 / (1.0 - location)
                } else {
                    0.0
                }
            }
            Self::Grid(g) => g.reciprocal_gap(h),
        }
    }

    /// `Σ_{n≥0} ∫ x^n d(dx)` summed term by term, with the remainder after
    /// the last term taken from the telescoping (polynomial tail) or
    /// geometric (point mass) closed form.
    pub fn moment_series(&self, rel_tol: f64, max_terms: usize) -> Result<SeriesSum> {
        match self {
            Self::PolynomialTail { alpha } => {
                if *alpha <= 1.0 {
                    return Err(Error::Degenerate("moment series diverges for alpha <= 1"));
                }
                let a = *alpha;
                Ok(sum_series(
                    0,
                    |n| self.moment(n as u64),
                    // Σ_{k>n} μ_k = μ_{n+1} (n+1+α) / (α-1)
                    |n| self.moment(n as u64 + 1) * (n as f64 + 1.0 + a) / (a - 1.0),
                    rel_tol,
                    max_terms,
                ))
            }
            Self::PointMass { location } => {
                if *location >= 1.0 {
                    return Err(Error::Degenerate("moment series diverges for an atom at 1"));
                }
                let a = *location;
                Ok(sum_series(
                    0,
                    |n| self.moment(n as u64),
                    |n| libm::pow(a, n as f64 + 1.0) / (1.0 - a),
                    rel_tol,
                    max_terms,
                ))
            }
            Self::Grid(g) => Ok(SeriesSum { partial: g.reciprocal_gap(1.0), tail: 0.0, terms: 0 }),
        }
    }

    /// `∫ f(x) d(dx)` over `(lo, hi]`, or `[lo, hi]` when `left_closed`.
    /// The endpoint flag only matters for atoms.
    pub fn integrate_over<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, left_closed: bool, f: F) -> f64 {
        let lo = lo.max(0.0);
        let hi = hi.min(1.0);
        if hi < lo {
            return 0.0;
        }
        let inside = |x: f64| (x > lo || (left_closed && x == lo)) && x <= hi;
        match self {
            Self::PolynomialTail { alpha } => {
                // u = (1-x)^α turns α(1-x)^{α-1} dx into du
                let a = *alpha;
                let x_of = |u: f64| 1.0 - libm::pow(u, 1.0 / a);
                let u_lo = libm::pow(1.0 - hi, a);
                let u_hi = libm::pow(1.0 - lo, a);
                let gl = gauss_legendre_64();
                if u_lo == 0.0 {
                    gl.integrate_graded(u_hi, GRADED_LEVELS, |u| f(x_of(u)))
                } else {
                    let mut total = 0.0;
                    let mut a0 = u_lo;
                    while a0 < u_hi {
                        let b0 = (2.0 * a0).min(u_hi);
                        total += gl.integrate(a0, b0, |u| f(x_of(u)));
                        a0 = b0;
                    }
                    total
                }
            }
            Self::PointMass { location } => {
                if inside(*location) {
                    f(*location)
                } else {
                    0.0
                }
            }
            Self::Grid(g) => crate::sum::compensated_sum(
                (0..g.resolution()).filter(|&i| inside(g.center(i))).map(|i| g.masses()[i] * f(g.center(i))),
            ),
        }
    }

    /// One fitness value drawn from the distribution.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::PolynomialTail { alpha } => {
                // 1 - F = U^{1/α} for U uniform on (0, 1]
                let u = 1.0 - rng.gen::<f64>();
                1.0 - libm::pow(u, 1.0 / alpha)
            }
            Self::PointMass { location } => *location,
            Self::Grid(g) => g.sample(rng),
        }
    }
}

const GRADED_LEVELS: u32 = 80;

fn polytail_tail_power(alpha: f64, r: u64, h: f64) -> f64 {
    if h == 0.0 {
        return 0.0;
    }
    let cut = if r == 0 { h } else { h.min((40.0 + 4.0 * alpha) / r as f64) };
    let k = 2.0 * libm::ceil(alpha);
    let ratio = k / alpha;
    let r = r as f64;
    let body = gauss_legendre_64().integrate(0.0, 1.0, |s| {
        let jac = k * libm::pow(s, k - 1.0);
        if r == 0.0 {
            jac
        } else {
            jac * libm::pow(1.0 - cut * libm::pow(s, ratio), r)
        }
    });
    libm::pow(cut, alpha) * body
}

impl fmt::Display for FitnessDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PolynomialTail { alpha } => write!(f, "polytail:{alpha}"),
            Self::PointMass { location } => write!(f, "point:{location}"),
            Self::Grid(g) => write!(f, "grid:{}", g.resolution()),
        }
    }
}

impl FromStr for FitnessDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseDistribution(s.to_string());
        let (kind, value) = s.trim().split_once(':').ok_or_else(bad)?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "polytail" => Self::polynomial_tail(value),
            "point" => Self::point_mass(value),
            _ => Err(bad()),
        }
    }
}

/// Measure on the midpoint grid `{(i + 1/2) / G : 0 <= i < G}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMeasure {
    masses: Vec<f64>,
}

impl GridMeasure {
    pub fn from_masses(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() || masses.iter().any(|m| !(*m >= 0.0)) {
            return Err(Error::InvalidParameter { name: "masses", reason: "need nonnegative bin masses" });
        }
        Ok(Self { masses })
    }

    /// Bins `d` onto `resolution` cells. Continuous parts get exact bin
    /// masses from tail-mass differences; atoms go to the cell holding them.
    pub fn discretize(d: &FitnessDistribution, resolution: usize) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::InvalidParameter { name: "resolution", reason: "must be positive" });
        }
        let g = resolution as f64;
        let masses = match d {
            FitnessDistribution::PolynomialTail { alpha } => (0..resolution)
                .map(|i| libm::pow(1.0 - i as f64 / g, *alpha) - libm::pow(1.0 - (i + 1) as f64 / g, *alpha))
                .collect(),
            FitnessDistribution::PointMass { location } => {
                let mut m = alloc::vec![0.0; resolution];
                let i = (libm::floor(location * g) as usize).min(resolution - 1);
                m[i] = 1.0;
                m
            }
            FitnessDistribution::Grid(other) if other.resolution() == resolution => other.masses.clone(),
            FitnessDistribution::Grid(_) => {
                return Err(Error::InvalidParameter { name: "resolution", reason: "cannot rebin a grid measure" })
            }
        };
        Ok(Self { masses })
    }

    pub fn resolution(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.masses.len() as f64
    }

    pub fn total_mass(&self) -> f64 {
        crate::sum::compensated_sum(self.masses.iter().copied())
    }

    /// Mass of the cells whose centre lies in `(1 - h, 1]`.
    pub fn tail_mass(&self, h: f64) -> f64 {
        self.power_sum(0, h)
    }

    /// First index whose centre lies in `(1-h, 1]`.
    fn first_in_tail(&self, h: f64) -> usize {
        if h >= 1.0 {
            return 0;
        }
        let g = self.masses.len();
        let threshold = 1.0 - h;
        // centre (i + 1/2)/G > threshold  <=>  i > threshold G - 1/2
        let mut i = libm::floor(threshold * g as f64 - 0.5).max(0.0) as usize;
        while i < g && self.center(i) <= threshold {
            i += 1;
        }
        while i > 0 && self.center(i - 1) > threshold {
            i -= 1;
        }
        i
    }

    /// `Σ_{centre > 1-h} m_i x_i^r`; `h >= 1` selects all cells.
    fn power_sum(&self, r: u64, h: f64) -> f64 {
        let start = self.first_in_tail(h);
        let mut acc = crate::sum::Accumulator::new();
        for i in start..self.masses.len() {
            let m = self.masses[i];
            if m != 0.0 {
                acc.add(m * libm::pow(self.center(i), r as f64));
            }
        }
        acc.value()
    }

    fn reciprocal_gap(&self, h: f64) -> f64 {
        let start = self.first_in_tail(h);
        crate::sum::compensated_sum((start..self.masses.len()).map(|i| self.masses[i] / (1.0 - self.center(i))))
    }

    pub fn mean(&self) -> f64 {
        self.power_sum(1, 1.0)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let target = rng.gen::<f64>() * self.total_mass();
        let mut acc = 0.0;
        for (i, m) in self.masses.iter().enumerate() {
            acc += m;
            if acc > target {
                return self.center(i);
            }
        }
        self.center(self.masses.len() - 1)
    }
}

impl From<GridMeasure> for FitnessDistribution {
    fn from(g: GridMeasure) -> Self {
        Self::Grid(g)
    }
}

/// Shorthand used in diagnostics and file names.
pub fn describe(d: &FitnessDistribution) -> String {
    d.to_string()
}
