//! Kingman's selection-mutation model.
//!
//! Generation `n+1` is `(1-β) x p_n(dx) / w_n + β q(dx)`. Rather than
//! iterating measures, the fitness distributions are reconstructed from the
//! moment representation
//!
//! ```text
//! p_n(1-h, 1] = Σ_{r<n} β (u_{n-r}/u_n) ∫_{1-h}^1 y^r q(dy)
//!             + ((1-β)/u_n) ∫_{1-h}^1 y^n p₀(dy)
//! ```
//!
//! where `u_n = W_n (1-β)^{1-n}` solves a defective renewal equation with
//! kernel `(β/(1-β)) μ_r` and forcing `m_n`. Working with `u_n` keeps every
//! quantity in normal floating range; `W_n` itself decays like `(1-β)^n`.

use alloc::vec::Vec;

use crate::analysis::{gamma, regularized_lower_gamma};
use crate::distributions::{FitnessDistribution, GridMeasure};
use crate::renewal::{solve_convolution, RenewalSystem};
use crate::sum::{compensated_sum, Accumulator};
use crate::{Error, Result};

/// Generation count above which the O(N²) weight recursion gets slow.
pub const SLOW_GENERATION_THRESHOLD: usize = 100_000;
/// Largest generation the weight recursion accepts.
pub const MAX_GENERATION: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    beta: f64,
    q: FitnessDistribution,
    p0: FitnessDistribution,
}

impl ModelParams {
    pub fn new(beta: f64, q: FitnessDistribution, p0: FitnessDistribution) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidParameter { name: "beta", reason: "must lie in (0, 1)" });
        }
        Ok(Self { beta, q, p0 })
    }

    /// `q = polytail(2)`, `β = 1/4`, `p₀ = δ_{1/2}`, so `γ(β) = 1/2`.
    pub fn standard() -> Self {
        Self {
            beta: 0.25,
            q: FitnessDistribution::PolynomialTail { alpha: 2.0 },
            p0: FitnessDistribution::PointMass { location: 0.5 },
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mutant(&self) -> &FitnessDistribution {
        &self.q
    }

    pub fn initial(&self) -> &FitnessDistribution {
        &self.p0
    }

    /// `γ(β) = 1 - β ∫ q(dx)/(1-x)`; `-∞` when the integral diverges.
    pub fn gamma_beta(&self) -> f64 {
        let r = self.q.reciprocal_gap_integral();
        if r.is_infinite() {
            f64::NEG_INFINITY
        } else {
            1.0 - self.beta * r
        }
    }

    pub fn is_condensing(&self) -> bool {
        self.gamma_beta() > 0.0
    }

    fn require_condensation(&self) -> Result<f64> {
        let g = self.gamma_beta();
        if g > 0.0 {
            Ok(g)
        } else {
            Err(Error::NoCondensation(g))
        }
    }

    fn tail_exponent(&self) -> Result<f64> {
        self.q.tail_exponent().ok_or(Error::InvalidParameter {
            name: "q",
            reason: "wave asymptotics need a polynomial-tail mutant distribution",
        })
    }

    /// `(β/(1-β)) Σ_{r≥1} μ_r`, the mass of the renewal kernel.
    pub fn kernel_total(&self) -> f64 {
        self.beta / (1.0 - self.beta) * (self.q.reciprocal_gap_integral() - 1.0)
    }

    /// `Σ_{n≥1} m_n = ∫ p₀(dx)/(1-x) - 1`.
    pub fn forcing_total(&self) -> f64 {
        self.p0.reciprocal_gap_integral() - 1.0
    }

    pub fn renewal_system(&self) -> RenewalSystem<impl Fn(usize) -> f64 + '_, impl Fn(usize) -> f64 + '_> {
        let tilt = self.beta / (1.0 - self.beta);
        RenewalSystem::new(move |r| tilt * self.q.moment(r as u64), |n| self.p0.moment(n as u64), self.kernel_total())
    }

    /// Solves for `u_1..u_len`.
    pub fn weight_sequence(&self, len: usize) -> Result<TiltedWeightSequence> {
        if len == 0 || len > MAX_GENERATION {
            return Err(Error::InvalidParameter { name: "len", reason: "must lie in 1..=1_000_000" });
        }
        let tilt = self.beta / (1.0 - self.beta);
        let kernel: Vec<f64> = (1..len).map(|r| tilt * self.q.moment(r as u64)).collect();
        let forcing: Vec<f64> = (1..=len).map(|n| self.p0.moment(n as u64)).collect();
        let u = solve_convolution(&kernel, &forcing);
        if u.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::NonFinite("tilted weight sequence"));
        }
        Ok(TiltedWeightSequence { u, beta: self.beta })
    }

    /// Constant `c` of `W_n ~ c n^{-α} (1-β)^{n-1}`.
    ///
    /// `value` uses the renewal-theorem total `Σ u_k = (1-β)/γ(β) Σ m_n`;
    /// `truncated` sums the computed `u_k` and adds an Euler–Maclaurin
    /// estimate of `Σ_{k>N} u_N (N/k)^α`.
    pub fn weight_asymptotic_constant(&self, u: &TiltedWeightSequence) -> Result<AsymptoticConstant> {
        let gamma_beta = self.require_condensation()?;
        let alpha = self.tail_exponent()?;
        let prefactor = self.beta / gamma_beta * gamma(alpha + 1.0);
        let total = self.renewal_system().total_sum(self.forcing_total())?;
        let n = u.len() as f64;
        let u_last = u.u(u.len());
        let tail = u_last
            * libm::pow(n, alpha)
            * (libm::pow(n, 1.0 - alpha) / (alpha - 1.0) - 0.5 * libm::pow(n, -alpha)
                + alpha / 12.0 * libm::pow(n, -alpha - 1.0));
        let partial = u.partial_sum();
        Ok(AsymptoticConstant {
            value: prefactor * total,
            truncated: prefactor * (partial + tail),
            partial_sum: partial,
            total_sum: total,
        })
    }

    /// `p_n(1-h, 1]` from the moment representation.
    pub fn interval_mass(&self, u: &TiltedWeightSequence, n: usize, h: f64) -> Result<f64> {
        let table = TailTable::new(&self.q, h, n)?;
        self.interval_mass_with(u, n, &table)
    }

    /// As [`Self::interval_mass`] with the mutant tail integrals for `h`
    /// already tabulated.
    pub fn interval_mass_with(&self, u: &TiltedWeightSequence, n: usize, table: &TailTable) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "generation 0 is p0 itself; query the initial distribution",
            });
        }
        if n > u.len() {
            return Err(Error::InvalidParameter { name: "n", reason: "exceeds computed weight sequence" });
        }
        if table.len() < n {
            return Err(Error::InvalidParameter { name: "table", reason: "tail table too short" });
        }
        let un = u.u(n);
        let mut acc = Accumulator::new();
        acc.add(self.beta * table.get(0));
        for r in 1..n {
            acc.add(self.beta * (u.u(n - r) / un) * table.get(r));
        }
        acc.add((1.0 - self.beta) / un * self.p0.tail_power_integral(n as u64, table.h())?);
        Ok(acc.value())
    }

    /// Masses `p_n(1 - x/n, 1]` and their limits `γ(β) P(α, x)` over `xs`.
    pub fn wave_profile(&self, n: usize, xs: &[f64]) -> Result<WaveProfile> {
        let u = self.weight_sequence(n)?;
        self.wave_profile_with(&u, n, xs)
    }

    pub fn wave_profile_with(&self, u: &TiltedWeightSequence, n: usize, xs: &[f64]) -> Result<WaveProfile> {
        let gamma_beta = self.require_condensation()?;
        let alpha = self.tail_exponent()?;
        if xs.iter().any(|x| !(*x > 0.0)) || xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter { name: "xs", reason: "must be positive and strictly increasing" });
        }
        let mut masses = Vec::with_capacity(xs.len());
        for &x in xs {
            masses.push(self.interval_mass(u, n, (x / n as f64).min(1.0))?);
        }
        let limits = xs.iter().map(|&x| self.wave_limit(gamma_beta, alpha, x)).collect();
        Ok(WaveProfile { n, xs: xs.to_vec(), masses, limits })
    }

    fn wave_limit(&self, gamma_beta: f64, alpha: f64, x: f64) -> f64 {
        gamma_beta * regularized_lower_gamma(alpha, x)
    }

    /// `γ(β) P(α, x)`, the limit of `p_n(1 - x/n, 1]`.
    pub fn wave_limit_at(&self, x: f64) -> Result<f64> {
        let gamma_beta = self.require_condensation()?;
        Ok(self.wave_limit(gamma_beta, self.tail_exponent()?, x))
    }

    /// Mass of `(1-h, 1]` under the limit law `β q(dx)/(1-x) + γ(β) δ₁`.
    pub fn limit_mass(&self, h: f64) -> Result<f64> {
        let gamma_beta = self.require_condensation()?;
        if !(0.0..=1.0).contains(&h) {
            return Err(Error::InvalidParameter { name: "h", reason: "must lie in [0, 1]" });
        }
        Ok(self.beta * self.q.reciprocal_gap_over(h) + gamma_beta)
    }

    /// Runs the defining recursion on a grid of `resolution` cells.
    pub fn direct_iterate(&self, resolution: usize, generations: usize) -> Result<GridMeasure> {
        direct_iterate(self.beta, &self.q, &self.p0, resolution, generations)
    }
}

/// Iterates `p ↦ (1-β) x p / ∫x p + β q` literally on the midpoint grid.
///
/// `β = 0` and `β = 1` are accepted here (and only here) for the
/// pure-selection and pure-mutation sentinels.
pub fn direct_iterate(
    beta: f64,
    q: &FitnessDistribution,
    p0: &FitnessDistribution,
    resolution: usize,
    generations: usize,
) -> Result<GridMeasure> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidParameter { name: "beta", reason: "must lie in [0, 1]" });
    }
    if resolution < 100 {
        return Err(Error::InvalidParameter { name: "resolution", reason: "need at least 100 cells" });
    }
    let qg = GridMeasure::discretize(q, resolution)?;
    let mut p = GridMeasure::discretize(p0, resolution)?.masses().to_vec();
    let g = resolution as f64;
    let centers: Vec<f64> = (0..resolution).map(|i| (i as f64 + 0.5) / g).collect();
    for _ in 0..generations {
        let w = compensated_sum(p.iter().zip(&centers).map(|(m, x)| m * x));
        if !(w > 0.0) {
            return Err(Error::Degenerate("mean fitness vanished"));
        }
        let scale = (1.0 - beta) / w;
        for ((m, x), qm) in p.iter_mut().zip(&centers).zip(qg.masses()) {
            *m = scale * x * *m + beta * qm;
        }
    }
    GridMeasure::from_masses(p)
}

/// `u_n = W_n (1-β)^{1-n}` for `n = 1..=len`.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedWeightSequence {
    u: Vec<f64>,
    beta: f64,
}

impl TiltedWeightSequence {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `u_n`, 1-based.
    pub fn u(&self, n: usize) -> f64 {
        self.u[n - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.u
    }

    /// `ln W_n = ln u_n + (n-1) ln(1-β)`.
    pub fn log_w(&self, n: usize) -> f64 {
        libm::log(self.u(n)) + (n as f64 - 1.0) * libm::log1p(-self.beta)
    }

    /// Mean fitness of generation `n`, `W_{n+1}/W_n = (1-β) u_{n+1}/u_n`.
    pub fn mean_fitness(&self, n: usize) -> f64 {
        (1.0 - self.beta) * self.u(n + 1) / self.u(n)
    }

    /// `u_n n^α`, which tends to the constant of `W_n ~ c n^{-α} (1-β)^{n-1}`.
    pub fn scaled(&self, n: usize, alpha: f64) -> f64 {
        self.u(n) * libm::pow(n as f64, alpha)
    }

    pub fn partial_sum(&self) -> f64 {
        compensated_sum(self.u.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticConstant {
    pub value: f64,
    pub truncated: f64,
    pub partial_sum: f64,
    pub total_sum: f64,
}

/// `∫_{1-h}^1 y^r q(dy)` for `r = 0..len`, memoised for one `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailTable {
    h: f64,
    values: Vec<f64>,
}

impl TailTable {
    pub fn new(q: &FitnessDistribution, h: f64, len: usize) -> Result<Self> {
        let values = (0..len as u64).map(|r| q.tail_power_integral(r, h)).collect::<Result<Vec<_>>>()?;
        Ok(Self { h, values })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, r: usize) -> f64 {
        self.values[r]
    }
}

/// Sampled wave `p_n(1 - x/n, 1]` against its gamma limit.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveProfile {
    pub n: usize,
    pub xs: Vec<f64>,
    pub masses: Vec<f64>,
    pub limits: Vec<f64>,
}

impl WaveProfile {
    pub fn relative_errors(&self) -> Vec<f64> {
        self.masses.iter().zip(&self.limits).map(|(m, l)| libm::fabs(m - l) / l).collect()
    }

    pub fn max_relative_error(&self) -> f64 {
        self.relative_errors().into_iter().fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard_u(len: usize) -> (ModelParams, TiltedWeightSequence) {
        let p = ModelParams::standard();
        let u = p.weight_sequence(len).unwrap();
        (p, u)
    }

    #[test]
    fn gamma_beta_values() {
        let q = FitnessDistribution::polynomial_tail(2.0).unwrap();
        let p0 = FitnessDistribution::point_mass(0.5).unwrap();
        assert_eq!(ModelParams::standard().gamma_beta(), 0.5);
        let boundary = ModelParams::new(0.5, q.clone(), p0.clone()).unwrap();
        assert_eq!(boundary.gamma_beta(), 0.0);
        assert!(!boundary.is_condensing());
        let tiny = ModelParams::new(1e-9, q, p0.clone()).unwrap();
        assert!((tiny.gamma_beta() - 1.0).abs() < 1e-8);
        let heavy = ModelParams::new(0.1, FitnessDistribution::polynomial_tail(0.8).unwrap(), p0).unwrap();
        assert_eq!(heavy.gamma_beta(), f64::NEG_INFINITY);
    }

    #[test]
    fn rejects_degenerate_beta() {
        let q = FitnessDistribution::polynomial_tail(2.0).unwrap();
        let p0 = FitnessDistribution::point_mass(0.5).unwrap();
        assert!(ModelParams::new(0.0, q.clone(), p0.clone()).is_err());
        assert!(ModelParams::new(1.0, q, p0).is_err());
    }

    #[test]
    fn kernel_total_identity() {
        for &(alpha, beta) in &[(2.0, 0.25), (3.0, 0.4), (1.5, 0.2)] {
            let p = ModelParams::new(
                beta,
                FitnessDistribution::polynomial_tail(alpha).unwrap(),
                FitnessDistribution::point_mass(0.5).unwrap(),
            )
            .unwrap();
            let g = p.gamma_beta();
            let identity = (1.0 - g - beta) / (1.0 - beta);
            assert!((p.kernel_total() - identity).abs() < 1e-14);
            assert_eq!(p.kernel_total() < 1.0, g > 0.0);
        }
    }

    #[test]
    fn first_weights() {
        let (_, u) = standard_u(2);
        assert_eq!(u.u(1), 0.5);
        assert!((u.u(2) - 0.3055555555555556).abs() < 1e-15);
    }

    #[test]
    fn weight_partial_sums_approach_renewal_total() {
        let (p, u) = standard_u(4000);
        let c = p.weight_asymptotic_constant(&u).unwrap();
        assert!((c.total_sum - 1.5).abs() < 1e-15);
        assert!(c.partial_sum < 1.5 && 1.5 - c.partial_sum < 2e-3);
        assert!((c.value - 1.5).abs() < 1e-12);
        assert!((c.truncated - 1.5).abs() < 1e-3);
    }

    #[test]
    fn asymptotic_constant_scales_with_forcing() {
        let q = FitnessDistribution::polynomial_tail(2.0).unwrap();
        // Σ m_n = a/(1-a): 1 for a = 1/2, 2 for a = 2/3
        let one = ModelParams::new(0.25, q.clone(), FitnessDistribution::point_mass(0.5).unwrap()).unwrap();
        let two = ModelParams::new(0.25, q, FitnessDistribution::point_mass(2.0 / 3.0).unwrap()).unwrap();
        let c1 = one.weight_asymptotic_constant(&one.weight_sequence(10).unwrap()).unwrap().value;
        let c2 = two.weight_asymptotic_constant(&two.weight_sequence(10).unwrap()).unwrap().value;
        assert!((c2 - 2.0 * c1).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_constant_requires_condensation() {
        let p = ModelParams::new(
            0.6,
            FitnessDistribution::polynomial_tail(2.0).unwrap(),
            FitnessDistribution::point_mass(0.5).unwrap(),
        )
        .unwrap();
        let u = p.weight_sequence(5).unwrap();
        assert!(matches!(p.weight_asymptotic_constant(&u), Err(Error::NoCondensation(_))));
        assert!(p.limit_mass(0.1).is_err());
    }

    #[test]
    fn normalization_holds() {
        let (p, u) = standard_u(300);
        let table = TailTable::new(p.mutant(), 1.0, 300).unwrap();
        for n in 1..=300 {
            let m = p.interval_mass_with(&u, n, &table).unwrap();
            assert!((m - 1.0).abs() < 1e-12, "n={n}: {m}");
        }
    }

    #[test]
    fn empty_interval_and_bad_inputs() {
        let (p, u) = standard_u(20);
        assert_eq!(p.interval_mass(&u, 10, 0.0).unwrap(), 0.0);
        assert!(p.interval_mass(&u, 0, 0.5).is_err());
        assert!(p.interval_mass(&u, 21, 0.5).is_err());
        assert!(p.interval_mass(&u, 5, 1.5).is_err());
    }

    #[test]
    fn mean_fitness_matches_grid_iteration() {
        let (p, u) = standard_u(12);
        // odd resolution puts the initial atom exactly on a cell centre
        let grid = p.direct_iterate(20_001, 10).unwrap();
        assert!((grid.mean() - u.mean_fitness(10)).abs() < 1e-6, "{} vs {}", grid.mean(), u.mean_fitness(10));
    }

    #[test]
    fn limit_mass_values() {
        let p = ModelParams::standard();
        assert!((p.limit_mass(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(p.limit_mass(0.0).unwrap(), 0.5);
        assert!((p.limit_mass(0.25).unwrap() - 0.625).abs() < 1e-15);
    }

    #[test]
    fn pure_mutation_and_pure_selection_sentinels() {
        let q = FitnessDistribution::polynomial_tail(2.0).unwrap();
        let p0 = FitnessDistribution::point_mass(0.5).unwrap();
        let qg = GridMeasure::discretize(&q, 1000).unwrap();
        let mutated = direct_iterate(1.0, &q, &p0, 1000, 3).unwrap();
        assert_eq!(mutated.masses(), qg.masses());
        let selected = direct_iterate(0.0, &q, &p0, 1000, 7).unwrap();
        assert_eq!(selected, GridMeasure::discretize(&p0, 1000).unwrap());
        assert!(direct_iterate(0.5, &q, &p0, 50, 1).is_err());
    }

    #[test]
    fn grid_iteration_matches_moment_representation() {
        let (p, u) = standard_u(50);
        let grid = p.direct_iterate(100_000, 50).unwrap();
        for &h in &[0.01, 0.1] {
            let exact = p.interval_mass(&u, 50, h).unwrap();
            assert!((grid.tail_mass(h) - exact).abs() < 1e-3, "h={h}");
        }
    }

    #[test]
    fn wave_masses_are_cauchy() {
        let p = ModelParams::standard();
        let u = p.weight_sequence(8000).unwrap();
        let at = |n: usize| p.interval_mass(&u, n, 1.0 / n as f64).unwrap();
        let vals: Vec<f64> = [500, 1000, 2000, 4000, 8000].iter().map(|&n| at(n)).collect();
        let diffs: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(diffs.windows(2).all(|d| d[1] < d[0]), "{diffs:?}");
    }

    #[test]
    fn wave_profile_is_monotone_with_gamma_limits() {
        let p = ModelParams::standard();
        let prof = p.wave_profile(2000, &[0.5, 1.0, 2.0, 4.0, 50.0]).unwrap();
        assert!(prof.masses.windows(2).all(|w| w[1] >= w[0]));
        assert!(prof.limits.windows(2).all(|w| w[1] >= w[0]));
        assert!(prof.limits.iter().all(|l| *l <= 0.5));
        assert!(prof.masses.iter().all(|m| (0.0..=1.0).contains(m)));
        assert!(p.wave_profile(100, &[1.0, 0.5]).is_err());
    }
}
