//! Random permutations with cycle weights.
//!
//! `P_n(σ) = (1/(n! h_n)) Π_j θ_j^{R_j(σ)}` where `R_j` counts cycles of
//! length `j`. Only the cycle type matters for every statistic computed
//! here, so samples are multisets of cycle lengths.
//!
//! The normalisation obeys `n h_n = Σ_{j=1}^n θ_j h_{n-j}`, and the cycle
//! through the lowest remaining element of a set of size `m` has length `j`
//! with probability `θ_j h_{m-j} / (m h_m)`. Peeling cycles off one at a time
//! with that law samples the cycle type exactly.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::analysis::{regularized_lower_gamma, McEstimate};
use crate::renewal::{malthusian_root, MalthusianRoot};
use crate::rng::replica_stream;
use crate::sum::Accumulator;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum CycleWeights {
    /// `θ_j = j^exponent`.
    Power { exponent: f64 },
    /// `θ_j = weights[j - 1]`.
    Explicit(Vec<f64>),
}

impl CycleWeights {
    pub fn power(exponent: f64) -> Result<Self> {
        if !exponent.is_finite() {
            return Err(Error::InvalidParameter { name: "gamma", reason: "must be finite" });
        }
        Ok(Self::Power { exponent })
    }

    pub fn explicit(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter { name: "weights", reason: "cycle weights must be positive" });
        }
        Ok(Self::Explicit(weights))
    }

    pub fn theta(&self, j: usize) -> f64 {
        match self {
            Self::Power { exponent } => libm::pow(j as f64, *exponent),
            Self::Explicit(w) => w[j - 1],
        }
    }

    pub fn exponent(&self) -> Option<f64> {
        match self {
            Self::Power { exponent } => Some(*exponent),
            Self::Explicit(_) => None,
        }
    }

    fn supports(&self, n: usize) -> bool {
        match self {
            Self::Power { .. } => true,
            Self::Explicit(w) => w.len() >= n,
        }
    }
}

/// `h_0..h_N`, stored as `g_n = h_n e^{-κ n}` so that super-polynomial
/// growth stays in range.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationSeq {
    scaled: Vec<f64>,
    log_tilt: f64,
}

const RESCALE_ABOVE: f64 = 1e280;

impl NormalizationSeq {
    pub fn len(&self) -> usize {
        self.scaled.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `h_n`; may overflow to infinity when the tilt is nonzero.
    pub fn h(&self, n: usize) -> f64 {
        self.scaled[n] * libm::exp(self.log_tilt * n as f64)
    }

    pub fn ln_h(&self, n: usize) -> f64 {
        libm::log(self.scaled[n]) + self.log_tilt * n as f64
    }

    pub fn log_tilt(&self) -> f64 {
        self.log_tilt
    }

    /// `h_n` past the table, extrapolated with the local power law at the
    /// last entry.
    pub fn h_extended(&self, n: usize) -> f64 {
        let last = self.len();
        if n <= last {
            return self.h(n);
        }
        let slope = if last >= 2 {
            (self.ln_h(last) - self.ln_h(last - 1)) / libm::log(last as f64 / (last - 1) as f64)
        } else {
            0.0
        };
        libm::exp(self.ln_h(last) + slope * libm::log(n as f64 / last as f64))
    }

    /// Least-squares slope of `ln h_n` against `ln n` over `lo..=hi`.
    pub fn fitted_exponent(&self, lo: usize, hi: usize) -> f64 {
        let pts: Vec<(f64, f64)> = (lo..=hi).map(|n| (libm::log(n as f64), self.ln_h(n))).collect();
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        sxy / sxx
    }
}

/// Computes `h_0..h_len` from `n h_n = Σ_j θ_j h_{n-j}`.
pub fn compute_h(weights: &CycleWeights, len: usize) -> Result<NormalizationSeq> {
    if len == 0 {
        return Err(Error::InvalidParameter { name: "len", reason: "must be positive" });
    }
    if !weights.supports(len) {
        return Err(Error::InvalidParameter {
            name: "weights",
            reason: "fewer explicit weights than requested length",
        });
    }
    let theta: Vec<f64> = (1..=len).map(|j| weights.theta(j)).collect();
    let mut log_tilt = 0.0;
    'restart: for _ in 0..64 {
        let tilted: Vec<f64> =
            theta.iter().enumerate().map(|(i, t)| t * libm::exp(-log_tilt * (i + 1) as f64)).collect();
        let mut g = Vec::with_capacity(len + 1);
        g.push(1.0);
        for n in 1..=len {
            let mut acc = Accumulator::new();
            for j in 1..=n {
                acc.add(tilted[j - 1] * g[n - j]);
            }
            let v = acc.value() / n as f64;
            if v > RESCALE_ABOVE {
                log_tilt += libm::log(v) / n as f64;
                continue 'restart;
            }
            if !(v > 0.0) {
                return Err(Error::NonFinite("normalisation underflow"));
            }
            g.push(v);
        }
        return Ok(NormalizationSeq { scaled: g, log_tilt });
    }
    Err(Error::NonFinite("normalisation rescaling did not settle"))
}

/// Cycle type of one weighted random permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclePartitionSample {
    /// Cycle lengths in nonincreasing order.
    pub lengths: Vec<usize>,
    pub size: usize,
}

impl CyclePartitionSample {
    pub fn from_lengths(mut lengths: Vec<usize>) -> Self {
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        let size = lengths.iter().sum();
        Self { lengths, size }
    }

    /// `R_j` for `j = 1..=size`, indexed from 0.
    pub fn cycle_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.size];
        for &l in &self.lengths {
            counts[l - 1] += 1;
        }
        counts
    }

    /// Atoms `(λ_i/n, λ_i/n)` of the empirical cycle length distribution.
    pub fn empirical_measure(&self) -> Vec<(f64, f64)> {
        let n = self.size as f64;
        self.lengths.iter().map(|&l| (l as f64 / n, l as f64 / n)).collect()
    }

    /// `μ_n[0, t)`.
    pub fn mass_below(&self, t: f64) -> f64 {
        let n = self.size as f64;
        self.lengths.iter().filter(|&&l| (l as f64 / n) < t).map(|&l| l as f64 / n).sum()
    }

    /// `μ_n[1 - m/n, 1]`, i.e. the share of cycles of length at least `n - m`.
    pub fn mass_near_top(&self, m: usize) -> f64 {
        let n = self.size as f64;
        let cutoff = self.size.saturating_sub(m);
        self.lengths.iter().filter(|&&l| l >= cutoff).map(|&l| l as f64 / n).sum()
    }
}

/// Sequential conditional sampler sharing one normalisation table.
#[derive(Debug, Clone)]
pub struct CycleSampler {
    tilted_theta: Vec<f64>,
    scaled_h: Vec<f64>,
}

impl CycleSampler {
    /// Checks `Σ_j θ_j h_{m-j} = m h_m` to 1e-9 for every tabulated `m`.
    pub fn new(weights: &CycleWeights, h: &NormalizationSeq) -> Result<Self> {
        let len = h.len();
        let tilted_theta: Vec<f64> = (1..=len).map(|j| weights.theta(j) * libm::exp(-h.log_tilt * j as f64)).collect();
        let sampler = Self { tilted_theta, scaled_h: h.scaled.clone() };
        for m in 1..=len {
            let total = sampler.total_weight(m);
            let ratio = total / (m as f64 * sampler.scaled_h[m]);
            if libm::fabs(ratio - 1.0) > 1e-9 {
                return Err(Error::CorruptWeights(ratio));
            }
        }
        Ok(sampler)
    }

    fn total_weight(&self, m: usize) -> f64 {
        let mut acc = Accumulator::new();
        for j in 1..=m {
            acc.add(self.tilted_theta[j - 1] * self.scaled_h[m - j]);
        }
        acc.value()
    }

    pub fn max_size(&self) -> usize {
        self.scaled_h.len() - 1
    }

    /// `P(L = j)` for the cycle through the lowest element of `m` elements.
    pub fn first_cycle_marginal(&self, m: usize) -> Vec<f64> {
        let denom = m as f64 * self.scaled_h[m];
        (1..=m).map(|j| self.tilted_theta[j - 1] * self.scaled_h[m - j] / denom).collect()
    }

    /// Length of the cycle through the lowest element of `m` elements.
    pub fn draw_cycle<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Result<usize> {
        let denom = m as f64 * self.scaled_h[m];
        let target = rng.gen::<f64>() * denom;
        let mut acc = 0.0;
        for j in 1..=m {
            acc += self.tilted_theta[j - 1] * self.scaled_h[m - j];
            if acc > target {
                return Ok(j);
            }
        }
        // only reachable through rounding at the very top of the range
        let ratio = acc / denom;
        if libm::fabs(ratio - 1.0) > 1e-9 {
            return Err(Error::CorruptWeights(ratio));
        }
        Ok((1..=m).rev().find(|&j| self.tilted_theta[j - 1] * self.scaled_h[m - j] > 0.0).unwrap_or(m))
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<CyclePartitionSample> {
        if n > self.max_size() {
            return Err(Error::InvalidParameter { name: "n", reason: "exceeds normalisation table" });
        }
        let mut remaining = n;
        let mut lengths = Vec::new();
        while remaining > 0 {
            let l = self.draw_cycle(remaining, rng)?;
            lengths.push(l);
            remaining -= l;
        }
        Ok(CyclePartitionSample::from_lengths(lengths))
    }
}

/// One weighted random permutation's cycle type.
pub fn sample_cycles<R: Rng + ?Sized>(
    weights: &CycleWeights,
    h: &NormalizationSeq,
    n: usize,
    rng: &mut R,
) -> Result<CyclePartitionSample> {
    CycleSampler::new(weights, h)?.sample(n, rng)
}

/// `α = γ/(γ+1)`, the left-edge scaling exponent.
pub fn left_edge_exponent(gamma_p: f64) -> f64 {
    gamma_p / (gamma_p + 1.0)
}

/// `(1/Γ(γ+1)) ∫₀^x y^γ e^{-y} dy`.
pub fn left_wave_limit(gamma_p: f64, x: f64) -> f64 {
    regularized_lower_gamma(gamma_p + 1.0, x)
}

fn positive_exponent(weights: &CycleWeights) -> Result<f64> {
    match weights.exponent() {
        Some(g) if g > 0.0 => Ok(g),
        _ => Err(Error::InvalidParameter { name: "gamma", reason: "left edge wave needs a positive exponent" }),
    }
}

fn negative_exponent(weights: &CycleWeights) -> Result<f64> {
    match weights.exponent() {
        Some(g) if g < 0.0 => Ok(g),
        _ => Err(Error::InvalidParameter { name: "gamma", reason: "right edge wave needs a negative exponent" }),
    }
}

/// `μ_n[0, x n^{-α})` for each `x` on one sample.
pub fn left_wave_replica<R: Rng + ?Sized>(
    sampler: &CycleSampler,
    gamma_p: f64,
    n: usize,
    xs: &[f64],
    rng: &mut R,
) -> Result<Vec<f64>> {
    let s = sampler.sample(n, rng)?;
    let scale = libm::pow(n as f64, -left_edge_exponent(gamma_p));
    Ok(xs.iter().map(|&x| s.mass_below(x * scale)).collect())
}

/// `μ_n[1 - m/n, 1]` for each cutoff on one sample.
pub fn right_wave_replica<R: Rng + ?Sized>(
    sampler: &CycleSampler,
    n: usize,
    ms: &[usize],
    rng: &mut R,
) -> Result<Vec<f64>> {
    let s = sampler.sample(n, rng)?;
    Ok(ms.iter().map(|&m| s.mass_near_top(m)).collect())
}

/// Left-edge wave estimate with comparators, one row per `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWaveEstimate {
    pub points: Vec<f64>,
    pub estimates: Vec<McEstimate>,
    pub limits: Vec<f64>,
}

/// Monte Carlo estimate of `E μ_n[0, x n^{-α})`, replicas run in order
/// on streams `(seed, replica)`.
pub fn left_wave_mc(
    weights: &CycleWeights,
    n: usize,
    xs: &[f64],
    replicas: usize,
    seed: u64,
) -> Result<EdgeWaveEstimate> {
    let gamma_p = positive_exponent(weights)?;
    let h = compute_h(weights, n)?;
    let sampler = CycleSampler::new(weights, &h)?;
    let rows = (0..replicas)
        .map(|r| left_wave_replica(&sampler, gamma_p, n, xs, &mut replica_stream(seed, r as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EdgeWaveEstimate {
        points: xs.to_vec(),
        estimates: crate::analysis::column_estimates(&rows),
        limits: xs.iter().map(|&x| left_wave_limit(gamma_p, x)).collect(),
    })
}

/// Length of the normalisation table used for the Malthusian root.
pub const MALTHUSIAN_TABLE_LEN: usize = 4096;

/// Right-edge comparator `½ Σ_{k=0}^m e^{-c* k} h_k` with its root.
#[derive(Debug, Clone, PartialEq)]
pub struct RightEdgeLimit {
    pub root: MalthusianRoot,
    h: NormalizationSeq,
}

impl RightEdgeLimit {
    pub fn new(weights: &CycleWeights) -> Result<Self> {
        negative_exponent(weights)?;
        let h = compute_h(weights, MALTHUSIAN_TABLE_LEN)?;
        let root = malthusian_root(|k| h.h_extended(k), 1.0)?;
        Ok(Self { root, h })
    }

    pub fn at(&self, m: usize) -> f64 {
        let c = self.root.rate;
        let mut acc = Accumulator::new();
        for k in 0..=m {
            acc.add(libm::exp(-c * k as f64) * self.h.h_extended(k));
        }
        0.5 * acc.value()
    }

    /// Limit of `P(largest cycle >= n - m)` from the size-biased split
    /// `P(largest = n - k) -> h_k / Σ_j h_j`. This is a companion
    /// diagnostic; [`Self::at`] is the quoted comparator.
    pub fn giant_cycle_at(&self, m: usize) -> f64 {
        let mut num = Accumulator::new();
        for k in 0..=m {
            num.add(self.h.h_extended(k));
        }
        num.value() / self.total_h()
    }

    /// `Σ_{k≥0} h_k = exp(Σ_j θ_j / j)` for power weights; the table sum
    /// plus a power-law remainder otherwise.
    fn total_h(&self) -> f64 {
        let last = self.h.len();
        let mut acc = Accumulator::new();
        for k in 0..=last {
            acc.add(self.h.h(k));
        }
        let slope = (self.h.ln_h(last) - self.h.ln_h(last - 1)) / libm::log(last as f64 / (last - 1) as f64);
        // Σ_{k>N} h_N (k/N)^s ≈ h_N N / (-s - 1)
        acc.add(self.h.h(last) * (last as f64 + 0.5) / (-slope - 1.0));
        acc.value()
    }
}

/// Right-edge wave estimate for `m` cutoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct RightWaveEstimate {
    pub cutoffs: Vec<usize>,
    pub estimates: Vec<McEstimate>,
    pub limits: Vec<f64>,
    pub giant_cycle_limits: Vec<f64>,
    pub root: MalthusianRoot,
}

pub fn right_wave_mc(
    weights: &CycleWeights,
    n: usize,
    ms: &[usize],
    replicas: usize,
    seed: u64,
) -> Result<RightWaveEstimate> {
    let limit = RightEdgeLimit::new(weights)?;
    let h = compute_h(weights, n)?;
    let sampler = CycleSampler::new(weights, &h)?;
    let rows = (0..replicas)
        .map(|r| right_wave_replica(&sampler, n, ms, &mut replica_stream(seed, r as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RightWaveEstimate {
        cutoffs: ms.to_vec(),
        estimates: crate::analysis::column_estimates(&rows),
        limits: ms.iter().map(|&m| limit.at(m)).collect(),
        giant_cycle_limits: ms.iter().map(|&m| limit.giant_cycle_at(m)).collect(),
        root: limit.root,
    })
}

/// Exhaustive enumeration of `S_n`, for checking the recursions on small `n`.
pub mod enumerate {
    use super::*;

    /// Weighted statistics of all permutations of `n` elements.
    #[derive(Debug, Clone, PartialEq)]
    pub struct Enumeration {
        /// `Σ_σ Π θ_j^{R_j} / n!`.
        pub h: f64,
        /// Probability that element 0 lies in a cycle of length `j`, index `j-1`.
        pub first_cycle: Vec<f64>,
        /// Probability of each cycle type (lengths in nonincreasing order).
        pub cycle_types: BTreeMap<Vec<usize>, f64>,
    }

    fn cycle_lengths(perm: &[usize]) -> (Vec<usize>, usize) {
        let n = perm.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        let mut first = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            if start == 0 {
                first = len;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        (lengths, first)
    }

    /// Visits every permutation of `n` elements (Heap's algorithm).
    fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut f: F) {
        let mut a: Vec<usize> = (0..n).collect();
        let mut c = vec![0; n];
        f(&a);
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                f(&a);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
    }

    pub fn enumerate(weights: &CycleWeights, n: usize) -> Result<Enumeration> {
        if n == 0 || n > 10 {
            return Err(Error::InvalidParameter { name: "n", reason: "enumeration supports 1..=10" });
        }
        let mut total = 0.0;
        let mut first = vec![0.0; n];
        let mut types: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for_each_permutation(n, |perm| {
            let (lengths, first_len) = cycle_lengths(perm);
            let w: f64 = lengths.iter().map(|&l| weights.theta(l)).product();
            total += w;
            first[first_len - 1] += w;
            *types.entry(lengths).or_insert(0.0) += w;
        });
        let factorial: f64 = (1..=n).map(|k| k as f64).product();
        for f in &mut first {
            *f /= total;
        }
        for v in types.values_mut() {
            *v /= total;
        }
        Ok(Enumeration { h: total / factorial, first_cycle: first, cycle_types: types })
    }
}

#[cfg(test)]
mod tests {
    use super::enumerate::enumerate;
    use super::*;

    fn weight_families() -> Vec<CycleWeights> {
        vec![
            CycleWeights::power(0.0).unwrap(),
            CycleWeights::explicit(vec![2.0; 7]).unwrap(),
            CycleWeights::power(1.0).unwrap(),
            CycleWeights::power(-1.0).unwrap(),
        ]
    }

    #[test]
    fn recursion_matches_enumeration() {
        for w in weight_families() {
            let h = compute_h(&w, 7).unwrap();
            for n in 1..=7 {
                let brute = enumerate(&w, n).unwrap().h;
                assert!((h.h(n) - brute).abs() <= 1e-12 * brute, "{w:?} n={n}");
            }
        }
    }

    #[test]
    fn uniform_weights_give_unit_normalisation() {
        let h = compute_h(&CycleWeights::power(0.0).unwrap(), 50).unwrap();
        assert!((0..=50).all(|n| (h.h(n) - 1.0).abs() < 1e-12));
    }

    #[test]
    fn constant_weight_two_is_rising_factorial() {
        let h = compute_h(&CycleWeights::explicit(vec![2.0; 10]).unwrap(), 10).unwrap();
        assert_eq!(h.h(1), 2.0);
        assert_eq!(h.h(2), 3.0);
        // θ(θ+1)...(θ+n-1)/n! = n + 1 for θ = 2
        assert!((1..=10).all(|n| (h.h(n) - (n + 1) as f64).abs() < 1e-12));
    }

    #[test]
    fn first_cycle_marginal_matches_enumeration() {
        for w in weight_families() {
            let h = compute_h(&w, 7).unwrap();
            let sampler = CycleSampler::new(&w, &h).unwrap();
            for n in 1..=7 {
                let exact = enumerate(&w, n).unwrap().first_cycle;
                let rec = sampler.first_cycle_marginal(n);
                for (a, b) in exact.iter().zip(&rec) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
        let uniform = CycleWeights::power(0.0).unwrap();
        let sampler = CycleSampler::new(&uniform, &compute_h(&uniform, 3).unwrap()).unwrap();
        assert!(sampler.first_cycle_marginal(3).iter().all(|p| (p - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn trivial_size_one() {
        let w = CycleWeights::power(0.7).unwrap();
        let h = compute_h(&w, 1).unwrap();
        let s = sample_cycles(&w, &h, 1, &mut replica_stream(0, 0)).unwrap();
        assert_eq!(s.lengths, vec![1]);
    }

    #[test]
    fn large_positive_exponent_uses_tilt() {
        let w = CycleWeights::power(2.0).unwrap();
        let h = compute_h(&w, 20_000).unwrap();
        assert!(h.log_tilt() > 0.0);
        assert!(h.ln_h(20_000).is_finite() && h.ln_h(20_000) > 700.0);
        CycleSampler::new(&w, &h).unwrap();
    }

    #[test]
    fn empirical_measure_examples() {
        let s = CyclePartitionSample::from_lengths(vec![1, 3, 2]);
        assert_eq!(s.lengths, vec![3, 2, 1]);
        assert_eq!(s.empirical_measure(), vec![(0.5, 0.5), (1.0 / 3.0, 1.0 / 3.0), (1.0 / 6.0, 1.0 / 6.0)]);
        let whole = CyclePartitionSample::from_lengths(vec![9]);
        assert_eq!(whole.empirical_measure(), vec![(1.0, 1.0)]);
        let fixed = CyclePartitionSample::from_lengths(vec![1; 8]);
        let total: f64 = fixed.empirical_measure().iter().map(|a| a.1).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(fixed.empirical_measure().iter().all(|a| a.0 == 0.125));
        assert_eq!(s.mass_near_top(0), 0.0);
        assert_eq!(s.mass_near_top(3), 0.5);
        assert_eq!(s.mass_below(0.4), 0.5);
    }

    #[test]
    fn samples_conserve_size() {
        for w in weight_families().into_iter().filter(|w| w.exponent().is_some()) {
            let h = compute_h(&w, 500).unwrap();
            let sampler = CycleSampler::new(&w, &h).unwrap();
            let mut rng = replica_stream(3, 0);
            for n in [1, 2, 17, 500] {
                let s = sampler.sample(n, &mut rng).unwrap();
                assert_eq!(s.lengths.iter().sum::<usize>(), n);
                assert!(s.lengths.windows(2).all(|p| p[0] >= p[1]));
            }
        }
    }

    #[test]
    fn wave_argument_checks() {
        assert!(left_wave_mc(&CycleWeights::power(-1.0).unwrap(), 10, &[1.0], 2, 0).is_err());
        assert!(right_wave_mc(&CycleWeights::power(1.0).unwrap(), 10, &[1], 2, 0).is_err());
    }

    #[test]
    fn right_edge_comparator_properties() {
        let lim = RightEdgeLimit::new(&CycleWeights::power(-1.0).unwrap()).unwrap();
        assert_eq!(lim.at(0), 0.5);
        assert!(lim.root.residual.abs() < 1e-10);
        let vals: Vec<f64> = (0..200).map(|m| lim.at(m)).collect();
        assert!(vals.windows(2).all(|w| w[1] >= w[0]));
        assert!(vals[199] <= 1.0 + 1e-12 && vals[199] > 0.999);
    }

    #[test]
    fn left_wave_limit_values() {
        assert!((left_wave_limit(1.0, 1.0) - 0.2642411176571153).abs() < 1e-14);
        assert!((left_wave_limit(1.0, 200.0) - 1.0).abs() < 1e-15);
        assert_eq!(left_edge_exponent(1.0), 0.5);
    }
}
