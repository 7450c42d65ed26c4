//! Directed preferential attachment with fitness.
//!
//! Vertex `m` has fitness `F_m ~ q` and impact `imp(m) = indegree + 1`.
//! Given the graph on `n` vertices, vertex `n+1` sends an independent
//! `Poisson(F_m imp(m) / (n Z_n))` number of edges to every `m`. Only
//! fitnesses, impacts and outdegrees are stored.
//!
//! The independent Poisson counts are drawn as one `Poisson(Λ)` total,
//! `Λ = Σ F_m imp(m) / (n Z_n)`, split multinomially in proportion to
//! `F_m imp(m)`; the two constructions have the same law.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::analysis::{column_estimates, fit_gamma_shape, gamma, regularized_lower_gamma, McEstimate, WaveFit};
use crate::distributions::FitnessDistribution;
use crate::rng::replica_stream;
use crate::sum::Accumulator;
use crate::{Error, Result};

/// Deterministic normalisation sequence `Z_1, Z_2, ...`.
#[derive(Debug, Clone, PartialEq)]
pub enum ZSequence {
    /// `Z_n = 1 - α / ln(n + e^{α+1})`, positive for every `n`.
    LogCorrected {
        alpha: f64,
    },
    Constant(f64),
    /// `Z_n = table[n - 1]`.
    Table(Vec<f64>),
}

impl ZSequence {
    pub fn log_corrected(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter { name: "alpha", reason: "must be positive" });
        }
        Ok(Self::LogCorrected { alpha })
    }

    pub fn z(&self, n: usize) -> Result<f64> {
        let z = match self {
            Self::LogCorrected { alpha } => 1.0 - alpha / libm::log(n as f64 + libm::exp(alpha + 1.0)),
            Self::Constant(c) => *c,
            Self::Table(t) => *t
                .get(n.wrapping_sub(1))
                .ok_or(Error::InvalidParameter { name: "z", reason: "normalisation table too short" })?,
        };
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::InvalidParameter { name: "z", reason: "normalisation must be positive and finite" });
        }
        Ok(z)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormalizationRule {
    /// `Z_n = (1/(λ n)) Σ F_m imp(m)` on the current graph.
    Adaptive {
        lambda: f64,
    },
    Deterministic(ZSequence),
}

impl NormalizationRule {
    pub fn adaptive(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter { name: "lambda", reason: "must be positive" });
        }
        Ok(Self::Adaptive { lambda })
    }
}

/// Fenwick tree of nonnegative weights supporting proportional draws.
#[derive(Debug, Clone, Default)]
struct SumTree {
    tree: Vec<f64>,
    weights: Vec<f64>,
}

impl SumTree {
    fn push(&mut self, w: f64) {
        self.weights.push(w);
        let i = self.weights.len();
        // node i covers (i - lowbit(i), i]
        let low = i & i.wrapping_neg();
        let mut v = w;
        let mut j = i - 1;
        while j > i - low {
            v += self.tree[j - 1];
            j &= j - 1;
        }
        self.tree.push(v);
    }

    fn add(&mut self, idx: usize, delta: f64) {
        self.weights[idx] += delta;
        let mut i = idx + 1;
        while i <= self.tree.len() {
            self.tree[i - 1] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// First index whose running sum exceeds `u`.
    fn find(&self, u: f64) -> usize {
        let n = self.tree.len();
        let mut pos = 0;
        let mut rem = u;
        let mut step = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next - 1] <= rem {
                pos = next;
                rem -= self.tree[next - 1];
            }
            step >>= 1;
        }
        if pos < n && self.weights[pos] > 0.0 {
            pos
        } else {
            // rounding pushed past the last positive weight
            (0..n).rev().find(|&i| self.weights[i] > 0.0).unwrap_or(n - 1)
        }
    }
}

/// Poisson variate: inversion below mean 10, the `rand_distr` sampler above.
pub fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if !mean.is_finite() || mean < 0.0 {
        return Err(Error::NonFinite("poisson parameter"));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    if mean < 10.0 {
        let u = rng.gen::<f64>();
        let mut k = 0u64;
        let mut p = libm::exp(-mean);
        let mut cdf = p;
        while u >= cdf {
            k += 1;
            p *= mean / k as f64;
            let next = cdf + p;
            if next == cdf {
                break;
            }
            cdf = next;
        }
        return Ok(k);
    }
    let dist = Poisson::new(mean).map_err(|_| Error::NonFinite("poisson parameter"))?;
    Ok(dist.sample(rng) as u64)
}

#[derive(Debug, Clone)]
pub struct FitnessGraph {
    fitness: Vec<f64>,
    impact: Vec<u64>,
    outdegree: Vec<u64>,
    edges: u64,
    rule: NormalizationRule,
    attraction: SumTree,
    attraction_total: Accumulator,
}

impl FitnessGraph {
    /// One vertex with fitness drawn from `q`.
    pub fn new<R: Rng + ?Sized>(rule: NormalizationRule, q: &FitnessDistribution, rng: &mut R) -> Self {
        Self::with_first_fitness(rule, q.sample(rng))
    }

    pub fn with_first_fitness(rule: NormalizationRule, fitness: f64) -> Self {
        let mut g = Self {
            fitness: Vec::new(),
            impact: Vec::new(),
            outdegree: Vec::new(),
            edges: 0,
            rule,
            attraction: SumTree::default(),
            attraction_total: Accumulator::new(),
        };
        g.push_vertex(fitness, 0);
        g
    }

    fn push_vertex(&mut self, fitness: f64, outdegree: u64) {
        self.fitness.push(fitness);
        self.impact.push(1);
        self.outdegree.push(outdegree);
        self.attraction.push(fitness);
        self.attraction_total.add(fitness);
    }

    pub fn len(&self) -> usize {
        self.fitness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fitness.is_empty()
    }

    pub fn fitness(&self) -> &[f64] {
        &self.fitness
    }

    pub fn impact(&self) -> &[u64] {
        &self.impact
    }

    /// Outdegree of each vertex; vertex 1 has none.
    pub fn outdegree(&self) -> &[u64] {
        &self.outdegree
    }

    pub fn edge_count(&self) -> u64 {
        self.edges
    }

    pub fn total_impact(&self) -> u64 {
        self.impact.iter().sum()
    }

    pub fn rule(&self) -> &NormalizationRule {
        &self.rule
    }

    /// `Z_n` for the current graph. Zero under the adaptive rule when every
    /// fitness vanishes.
    pub fn normalization(&self) -> Result<f64> {
        let n = self.len() as f64;
        match &self.rule {
            NormalizationRule::Adaptive { lambda } => Ok(self.attraction_total.value() / (lambda * n)),
            NormalizationRule::Deterministic(z) => z.z(self.len()),
        }
    }

    /// Expected outdegree `Λ = Σ F_m imp(m) / (n Z_n)` of the next vertex.
    pub fn total_rate(&self) -> Result<f64> {
        let s = self.attraction_total.value();
        if s == 0.0 {
            return Ok(0.0);
        }
        let rate = match &self.rule {
            NormalizationRule::Adaptive { lambda } => *lambda,
            NormalizationRule::Deterministic(z) => s / (self.len() as f64 * z.z(self.len())?),
        };
        if !rate.is_finite() {
            return Err(Error::NonFinite("poisson parameter"));
        }
        Ok(rate)
    }

    /// Adds vertex `n+1` and returns its outdegree.
    pub fn grow_step<R: Rng + ?Sized>(&mut self, q: &FitnessDistribution, rng: &mut R) -> Result<u64> {
        let rate = self.total_rate()?;
        let k = poisson(rate, rng)?;
        for _ in 0..k {
            let target = self.attraction.find(rng.gen::<f64>() * self.attraction_total.value());
            self.attach(target);
        }
        let f = q.sample(rng);
        self.push_vertex(f, k);
        Ok(k)
    }

    /// Same step with one Poisson draw per existing vertex.
    pub fn grow_step_per_vertex<R: Rng + ?Sized>(&mut self, q: &FitnessDistribution, rng: &mut R) -> Result<u64> {
        let n = self.len();
        let s = self.attraction_total.value();
        let scale = if s == 0.0 { 0.0 } else { self.total_rate()? / s };
        let mut counts = vec![0u64; n];
        for (m, c) in counts.iter_mut().enumerate() {
            *c = poisson(self.fitness[m] * self.impact[m] as f64 * scale, rng)?;
        }
        let mut k = 0;
        for (m, c) in counts.into_iter().enumerate() {
            for _ in 0..c {
                self.attach(m);
            }
            k += c;
        }
        let f = q.sample(rng);
        self.push_vertex(f, k);
        Ok(k)
    }

    fn attach(&mut self, m: usize) {
        self.impact[m] += 1;
        self.edges += 1;
        let f = self.fitness[m];
        self.attraction.add(m, f);
        self.attraction_total.add(f);
    }

    pub fn impact_measure(&self) -> ImpactMeasure {
        let n = self.len() as f64;
        ImpactMeasure { atoms: self.fitness.iter().zip(&self.impact).map(|(&f, &i)| (f, i as f64 / n)).collect() }
    }
}

/// Grows a graph to `n_final` vertices.
pub fn simulate<R: Rng + ?Sized>(
    n_final: usize,
    rule: NormalizationRule,
    q: &FitnessDistribution,
    rng: &mut R,
) -> Result<FitnessGraph> {
    if n_final == 0 {
        return Err(Error::InvalidParameter { name: "n", reason: "must be positive" });
    }
    let mut g = FitnessGraph::new(rule, q, rng);
    while g.len() < n_final {
        g.grow_step(q, rng)?;
    }
    Ok(g)
}

/// Replica `r` of an ensemble seeded by `seed`.
pub fn simulate_replica(
    n_final: usize,
    rule: &NormalizationRule,
    q: &FitnessDistribution,
    seed: u64,
    replica: u64,
) -> Result<FitnessGraph> {
    simulate(n_final, rule.clone(), q, &mut replica_stream(seed, replica))
}

/// `Ξ_n = (1/n) Σ imp(m) δ_{F_m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactMeasure {
    pub atoms: Vec<(f64, f64)>,
}

impl ImpactMeasure {
    pub fn total_mass(&self) -> f64 {
        crate::sum::compensated_sum(self.atoms.iter().map(|a| a.1))
    }

    /// `Ξ_n(t, 1]`.
    pub fn mass_above(&self, t: f64) -> f64 {
        crate::sum::compensated_sum(self.atoms.iter().filter(|a| a.0 > t).map(|a| a.1))
    }

    /// `Ξ_n[a, b]`.
    pub fn mass_in(&self, a: f64, b: f64) -> f64 {
        crate::sum::compensated_sum(self.atoms.iter().filter(|x| x.0 >= a && x.0 <= b).map(|x| x.1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Fit get richer: `∫ q(dx)/(1-x) ≥ 1 + λ`.
    FitGetRicher,
    /// Bose–Einstein: a macroscopic share of impact condenses at fitness 1.
    BoseEinstein,
}

pub fn phase_classify(q: &FitnessDistribution, lambda: f64) -> Phase {
    if q.reciprocal_gap_integral() >= 1.0 + lambda {
        Phase::FitGetRicher
    } else {
        Phase::BoseEinstein
    }
}

/// `∫ s/(s-x) q(dx)`, decreasing in `s > 1`.
fn fgr_map(q: &FitnessDistribution, s: f64) -> f64 {
    if s == 1.0 {
        return q.reciprocal_gap_integral();
    }
    q.integrate_over(0.0, 1.0, true, |x| s / (s - x))
}

/// `λ*` solving `∫ λ*/(λ*-x) q(dx) = 1 + λ`.
pub fn fgr_lambda_star(q: &FitnessDistribution, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter { name: "lambda", reason: "must be positive" });
    }
    let target = 1.0 + lambda;
    let at_one = q.reciprocal_gap_integral();
    if at_one < target {
        return Err(Error::BosePhase);
    }
    if at_one == target {
        return Ok(1.0);
    }
    let mut lo = 1.0;
    let mut hi = 2.0;
    while fgr_map(q, hi) > target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Bracketing("lambda star"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if fgr_map(q, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (flo, fhi) = (fgr_map(q, lo) - target, fgr_map(q, hi) - target);
    Ok(if libm::fabs(flo) < libm::fabs(fhi) { lo } else { hi })
}

/// `2s(1 - (s-1) ln(s/(s-1)))`, the map `∫ s/(s-x) q(dx)` for the
/// polynomial tail with exponent 2.
pub fn fgr_map_polytail2(s: f64) -> f64 {
    if s == 1.0 {
        return 2.0;
    }
    2.0 * s * (1.0 - (s - 1.0) * libm::log(s / (s - 1.0)))
}

/// Interval `A ⊂ [0, 1]` for limit masses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub left_closed: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, left_closed: true }
    }

    /// `(lo, hi]`.
    pub fn left_open(lo: f64, hi: f64) -> Self {
        Self { lo, hi, left_closed: false }
    }
}

/// `Ξ(A)` for the almost sure limit of the impact measure.
pub fn limit_measure(q: &FitnessDistribution, lambda: f64, a: Interval) -> Result<f64> {
    match phase_classify(q, lambda) {
        Phase::FitGetRicher => {
            let s = fgr_lambda_star(q, lambda)?;
            if s == 1.0 {
                return Ok(q.integrate_over(a.lo, a.hi, a.left_closed, |x| 1.0 / (1.0 - x)));
            }
            Ok(q.integrate_over(a.lo, a.hi, a.left_closed, |x| s / (s - x)))
        }
        Phase::BoseEinstein => {
            let gap = q.reciprocal_gap_integral();
            if !gap.is_finite() {
                return Err(Error::Degenerate("reciprocal gap integral diverges"));
            }
            let body = q.integrate_over(a.lo, a.hi, a.left_closed, |x| if x < 1.0 { 1.0 / (1.0 - x) } else { 0.0 });
            let atom = if a.hi >= 1.0 && (a.lo < 1.0 || a.left_closed) { 1.0 + lambda - gap } else { 0.0 };
            Ok(body + atom)
        }
    }
}

/// `Υ[m, n] = Σ_{k=⌊m⌋}^{⌊n⌋} (1 - Z_k)/k`.
pub fn upsilon<Z: FnMut(usize) -> f64>(mut z: Z, m: f64, n: f64) -> f64 {
    let lo = (libm::floor(m) as usize).max(1);
    let hi = libm::floor(n) as usize;
    let mut acc = Accumulator::new();
    for k in lo..=hi {
        acc.add((1.0 - z(k)) / k as f64);
    }
    acc.value()
}

/// `(α/(α-1)) Γ(α) (ln n)^α · α ln ln n · exp(Υ[ln n, n])` with slowly
/// varying factor 1. Only meaningful as a sequence in `n`.
pub fn gamma_estimate(z: &ZSequence, alpha: f64, n: usize) -> Result<f64> {
    let ln_n = libm::log(n as f64);
    if !(ln_n > 1.0) {
        return Err(Error::InvalidParameter { name: "n", reason: "need ln ln n > 0" });
    }
    let mut bad = None;
    let ups = upsilon(
        |k| match z.z(k) {
            Ok(v) => v,
            Err(e) => {
                bad = Some(e);
                f64::NAN
            }
        },
        ln_n,
        n as f64,
    );
    if let Some(e) = bad {
        return Err(e);
    }
    Ok(alpha / (alpha - 1.0) * gamma(alpha) * libm::pow(ln_n, alpha) * alpha * libm::log(ln_n) * libm::exp(ups))
}

/// Ensemble diagnostics of `Ξ_n(1 - x/ln n, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkWave {
    pub xs: Vec<f64>,
    pub per_replica: Vec<Vec<f64>>,
    pub estimates: Vec<McEstimate>,
    pub gamma_estimate: f64,
    /// `γ_est · P(α, x)`.
    pub comparator: Vec<f64>,
    pub monotone: bool,
    pub fit: Option<WaveFit>,
}

pub fn wave_masses(g: &FitnessGraph, xs: &[f64]) -> Vec<f64> {
    let ln_n = libm::log(g.len() as f64);
    let xi = g.impact_measure();
    xs.iter().map(|&x| xi.mass_above(1.0 - x / ln_n)).collect()
}

/// Wave statistics over an ensemble of equally sized graphs grown with a
/// deterministic rule. The shape fit normalises by the mass at the last `x`.
pub fn wave_estimate(graphs: &[FitnessGraph], xs: &[f64], alpha: f64) -> Result<NetworkWave> {
    let first = graphs.first().ok_or(Error::InvalidParameter { name: "graphs", reason: "empty ensemble" })?;
    let z = match first.rule() {
        NormalizationRule::Deterministic(z) => z.clone(),
        NormalizationRule::Adaptive { .. } => {
            return Err(Error::InvalidParameter { name: "rule", reason: "wave needs deterministic normalisation" })
        }
    };
    let per_replica: Vec<Vec<f64>> = graphs.iter().map(|g| wave_masses(g, xs)).collect();
    let monotone = per_replica.iter().all(|r| r.windows(2).all(|w| w[1] >= w[0]));
    let estimates = column_estimates(&per_replica);
    let gamma_est = gamma_estimate(&z, alpha, first.len())?;
    let comparator = xs.iter().map(|&x| gamma_est * regularized_lower_gamma(alpha, x)).collect();
    let means: Vec<f64> = estimates.iter().map(|e| e.mean).collect();
    let fit = means.last().and_then(|&p| fit_gamma_shape(xs, &means, p).ok());
    Ok(NetworkWave { xs: xs.to_vec(), per_replica, estimates, gamma_estimate: gamma_est, comparator, monotone, fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polytail2() -> FitnessDistribution {
        FitnessDistribution::polynomial_tail(2.0).unwrap()
    }

    #[test]
    fn sum_tree_draws_proportionally() {
        let mut t = SumTree::default();
        for w in [1.0, 0.0, 3.0, 0.0, 4.0] {
            t.push(w);
        }
        assert_eq!(t.find(0.0), 0);
        assert_eq!(t.find(0.999), 0);
        assert_eq!(t.find(1.0), 2);
        assert_eq!(t.find(3.999), 2);
        assert_eq!(t.find(4.0), 4);
        assert_eq!(t.find(8.5), 4);
        t.add(1, 2.0);
        assert_eq!(t.find(1.5), 1);
        assert_eq!(t.find(3.5), 2);
    }

    #[test]
    fn first_step_rate_is_lambda() {
        let g = FitnessGraph::with_first_fitness(NormalizationRule::adaptive(0.7).unwrap(), 0.3);
        assert!((g.normalization().unwrap() - 0.3 / 0.7).abs() < 1e-15);
        assert_eq!(g.total_rate().unwrap(), 0.7);
    }

    #[test]
    fn zero_fitness_graph_never_gains_edges() {
        let q = FitnessDistribution::point_mass(0.0).unwrap();
        let mut rng = replica_stream(1, 0);
        let g = simulate(500, NormalizationRule::adaptive(1.0).unwrap(), &q, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(g.impact().iter().all(|&i| i == 1));
    }

    #[test]
    fn impact_bookkeeping() {
        let mut rng = replica_stream(2, 0);
        let q = polytail2();
        let mut g = FitnessGraph::new(NormalizationRule::adaptive(1.5).unwrap(), &q, &mut rng);
        for _ in 0..2000 {
            g.grow_step(&q, &mut rng).unwrap();
            assert_eq!(g.total_impact(), g.len() as u64 + g.edge_count());
            assert_eq!(g.outdegree().iter().sum::<u64>(), g.edge_count());
        }
        let mut h = g.clone();
        for _ in 0..200 {
            h.grow_step_per_vertex(&q, &mut rng).unwrap();
            assert_eq!(h.total_impact(), h.len() as u64 + h.edge_count());
        }
    }

    #[test]
    fn single_vertex_measure() {
        let g = FitnessGraph::with_first_fitness(NormalizationRule::adaptive(1.0).unwrap(), 0.25);
        assert_eq!(g.impact_measure().atoms, vec![(0.25, 1.0)]);
    }

    #[test]
    fn same_seed_same_graph() {
        let q = polytail2();
        let rule = NormalizationRule::Deterministic(ZSequence::log_corrected(2.0).unwrap());
        let a = simulate_replica(3000, &rule, &q, 9, 4).unwrap();
        let b = simulate_replica(3000, &rule, &q, 9, 4).unwrap();
        assert_eq!(a.fitness(), b.fitness());
        assert_eq!(a.impact(), b.impact());
    }

    #[test]
    fn non_finite_rate_is_rejected() {
        let rule = NormalizationRule::Deterministic(ZSequence::Constant(f64::MIN_POSITIVE));
        let mut g = FitnessGraph::with_first_fitness(rule, 1.0);
        g.attraction_total.add(f64::MAX);
        assert!(g.grow_step(&polytail2(), &mut replica_stream(0, 0)).is_err());
        assert!(poisson(f64::NAN, &mut replica_stream(0, 0)).is_err());
    }

    #[test]
    fn poisson_moments() {
        for mean in [0.05, 0.5, 3.0, 9.5, 25.0, 400.0] {
            let mut rng = replica_stream(5, (mean * 100.0) as u64);
            let draws: Vec<f64> = (0..200_000).map(|_| poisson(mean, &mut rng).unwrap() as f64).collect();
            let e = McEstimate::from_samples(&draws);
            assert!((e.mean - mean).abs() < 5.0 * e.std_error, "mean {mean}: {e:?}");
            let var = draws.iter().map(|d| (d - e.mean) * (d - e.mean)).sum::<f64>() / draws.len() as f64;
            assert!((var / mean - 1.0).abs() < 0.03, "mean {mean}: var {var}");
        }
    }

    #[test]
    fn phases_for_polynomial_tail() {
        let q = polytail2();
        assert_eq!(phase_classify(&q, 0.5), Phase::FitGetRicher);
        assert_eq!(phase_classify(&q, 1.0), Phase::FitGetRicher);
        assert_eq!(phase_classify(&q, 1.0001), Phase::BoseEinstein);
        let be_atom = limit_measure(&q, 2.0, Interval::left_open(0.999_999, 1.0)).unwrap();
        assert!((be_atom - 1.0).abs() < 1e-5);
        let total = limit_measure(&q, 2.0, Interval::closed(0.0, 1.0)).unwrap();
        assert!((total - 3.0).abs() < 1e-10);
    }

    #[test]
    fn lambda_star_examples() {
        let q = polytail2();
        assert_eq!(fgr_lambda_star(&q, 1.0).unwrap(), 1.0);
        let s = fgr_lambda_star(&q, 0.5).unwrap();
        assert!((fgr_map_polytail2(s) - 1.5).abs() < 1e-10, "{s}");
        assert!((s - 1.2436).abs() < 1e-3);
        assert!(fgr_lambda_star(&q, 1e-6).unwrap() > 1e4);
        assert!(matches!(fgr_lambda_star(&q, 2.0), Err(Error::BosePhase)));
        let total = limit_measure(&q, 0.5, Interval::closed(0.0, 1.0)).unwrap();
        assert!((total - 1.5).abs() < 1e-10);
        assert!((fgr_map_polytail2(1.0 + 1e-12) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn upsilon_examples() {
        assert_eq!(upsilon(|_| 1.0, 1.0, 100.0), 0.0);
        let z = |k: usize| 1.0 - 1.0 / k as f64;
        assert!((upsilon(z, 1.0, 4.0) - 1.4236111111111112).abs() < 1e-15);
        assert_eq!(upsilon(z, 1.9, 4.2), upsilon(z, 1.0, 4.0));
        for (m, n, p) in [(1, 5, 20), (3, 3, 4), (7, 50, 51)] {
            let whole = upsilon(z, m as f64, p as f64);
            let split = upsilon(z, m as f64, n as f64) + upsilon(z, (n + 1) as f64, p as f64);
            assert!((whole - split).abs() < 1e-14);
        }
    }

    #[test]
    fn log_corrected_z_is_positive() {
        let z = ZSequence::log_corrected(2.0).unwrap();
        assert!((1..10_000).all(|n| z.z(n).unwrap() > 0.0));
        assert!(ZSequence::Table(vec![0.5]).z(2).is_err());
        assert!(gamma_estimate(&z, 2.0, 10_000).unwrap().is_finite());
    }
}
