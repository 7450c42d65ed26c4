//! One function per subcommand, each producing a [`Report`].

use std::path::Path;

use condlab_core::analysis::{
    column_estimates, default_fit_grid, fit_gamma_shape, poisson_goodness_of_fit, McEstimate,
};
use condlab_core::distributions::FitnessDistribution;
use condlab_core::kingman::{ModelParams, SLOW_GENERATION_THRESHOLD};
use condlab_core::panetwork::{
    fgr_lambda_star, limit_measure, phase_classify, simulate_replica, wave_estimate, FitnessGraph, Interval,
    NormalizationRule, Phase, ZSequence,
};
use condlab_core::permutations::enumerate::enumerate;
use condlab_core::permutations::{
    compute_h, left_wave_limit, left_wave_replica, right_wave_replica, CycleSampler, CycleWeights, RightEdgeLimit,
};
use condlab_core::renewal::solve_convolution;
use condlab_core::rng::replica_stream;

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::output::{read_to_string, Cell, Table};
use crate::parallel::run_replicas;

/// Seed used when neither `--seed` nor `CONDLAB_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_121_015;

/// Outcome of one subcommand.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    /// Human-readable lines (stdout with `--out`, stderr otherwise).
    pub summary: Vec<String>,
    /// Set when a numerical check failed; the run exits with code 2.
    pub failure: Option<String>,
    /// Column `x` and the `y` columns to draw with `--plot`.
    pub plot: Option<(usize, Vec<usize>)>,
    /// Replaces the table on stdout when no `--out` is given.
    pub stdout_value: Option<String>,
    pub seed: Option<u64>,
}

impl Report {
    fn new(table: Table) -> Self {
        Self { table, summary: Vec::new(), failure: None, plot: None, stdout_value: None, seed: None }
    }

    fn plot(mut self, x: usize, ys: &[usize]) -> Self {
        self.plot = Some((x, ys.to_vec()));
        self
    }
}

/// `--seed`, then `CONDLAB_SEED`, then [`DEFAULT_SEED`].
pub fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("CONDLAB_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("CONDLAB_SEED must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn model(m: &ModelArgs) -> CliResult<ModelParams> {
    let q = FitnessDistribution::polynomial_tail(m.alpha)?;
    let p0: FitnessDistribution = m.p0.parse()?;
    Ok(ModelParams::new(m.beta, q, p0)?)
}

/// The renewal solve is quadratic in the generation count.
fn weights_for(p: &ModelParams, len: usize) -> CliResult<condlab_core::kingman::TiltedWeightSequence> {
    if len > SLOW_GENERATION_THRESHOLD {
        eprintln!("warning: {len} generations; the weight recursion costs O(n^2) and may take minutes");
    }
    Ok(p.weight_sequence(len)?)
}

fn power_weights(gamma: f64) -> CliResult<CycleWeights> {
    Ok(CycleWeights::power(gamma)?)
}

fn require_positive(name: &str, v: usize) -> CliResult<()> {
    if v == 0 {
        return Err(CliError::Usage(format!("--{name} must be at least 1")));
    }
    Ok(())
}

fn estimate_cells(e: &McEstimate) -> [Cell; 2] {
    [e.mean.into(), e.std_error.into()]
}

pub fn gamma(a: &GammaArgs) -> CliResult<Report> {
    let p = model(&a.model)?;
    let g = p.gamma_beta();
    let mut t = Table::new(&["alpha", "beta", "gamma", "condensing"]);
    t.push(vec![a.model.alpha.into(), a.model.beta.into(), g.into(), p.is_condensing().into()]);
    let mut r = Report::new(t);
    r.stdout_value = Some(format!("{g}\n"));
    r.summary.push(format!("gamma = {g}"));
    Ok(r)
}

pub fn kingman_w(a: &KingmanWArgs) -> CliResult<Report> {
    require_positive("n", a.n)?;
    require_positive("every", a.every)?;
    let p = model(&a.model)?;
    let u = weights_for(&p, a.n + 1)?;
    let mut t = Table::new(&["n", "u", "log_w", "u_scaled", "mean_fitness"]);
    for n in (1..=a.n).filter(|n| (n - 1) % a.every == 0 || *n == a.n) {
        t.push(vec![
            n.into(),
            u.u(n).into(),
            u.log_w(n).into(),
            u.scaled(n, a.model.alpha).into(),
            u.mean_fitness(n).into(),
        ]);
    }
    let mut r = Report::new(t).plot(0, &[3]);
    if p.is_condensing() {
        let c = p.weight_asymptotic_constant(&u)?;
        r.summary.push(format!("c = {} (from partial sums: {})", c.value, c.truncated));
    } else {
        r.summary.push("no condensation: gamma(beta) <= 0".into());
    }
    Ok(r)
}

pub fn kingman_wave(a: &KingmanWaveArgs) -> CliResult<Report> {
    require_positive("n", a.n)?;
    let p = model(&a.model)?;
    let u = weights_for(&p, a.n)?;
    let profile = p.wave_profile_with(&u, a.n, &a.x)?;
    let mut t = Table::new(&["x", "mass", "limit", "rel_err"]);
    for (((x, m), l), e) in profile.xs.iter().zip(&profile.masses).zip(&profile.limits).zip(profile.relative_errors()) {
        t.push(vec![(*x).into(), (*m).into(), (*l).into(), e.into()]);
    }
    let mut r = Report::new(t).plot(0, &[1, 2]);
    r.summary.push(format!("max relative error {}", profile.max_relative_error()));
    Ok(r)
}

pub fn kingman_grid_check(a: &GridCheckArgs) -> CliResult<Report> {
    require_positive("n", a.n)?;
    let p = model(&a.model)?;
    let u = weights_for(&p, a.n)?;
    let grid = p.direct_iterate(a.grid, a.n)?;
    let mut t = Table::new(&["h", "grid", "moment", "abs_diff"]);
    let mut worst: f64 = 0.0;
    for &h in &a.h {
        let exact = p.interval_mass(&u, a.n, h)?;
        let g = grid.tail_mass(h);
        worst = worst.max((g - exact).abs());
        t.push(vec![h.into(), g.into(), exact.into(), (g - exact).abs().into()]);
    }
    let mut r = Report::new(t);
    r.summary.push(format!("largest difference {worst:e}"));
    if !(worst <= a.tol) {
        r.failure = Some(format!("grid and moment masses differ by {worst} > {}", a.tol));
    }
    Ok(r)
}

pub fn limit_mass(a: &LimitMassArgs) -> CliResult<Report> {
    let p = model(&a.model)?;
    let mut t = Table::new(&["h", "limit_mass"]);
    for &h in &a.h {
        t.push(vec![h.into(), p.limit_mass(h)?.into()]);
    }
    Ok(Report::new(t).plot(0, &[1]))
}

fn padded(v: &[f64], len: usize) -> Vec<f64> {
    let mut out: Vec<f64> = v.iter().copied().take(len).collect();
    out.resize(len, 0.0);
    out
}

pub fn renewal_solve(a: &RenewalArgs) -> CliResult<Report> {
    require_positive("n", a.n)?;
    let mut t = Table::new(&["n", "u"]);
    let mut r;
    match (&a.kernel, &a.forcing) {
        (Some(k), Some(b)) => {
            // sequences shorter than n are continued by zeros
            let u = solve_convolution(&padded(k, a.n - 1), &padded(b, a.n));
            for (i, v) in u.iter().enumerate() {
                t.push(vec![(i + 1).into(), (*v).into()]);
            }
            r = Report::new(t);
            let kt: f64 = k.iter().sum();
            let bt: f64 = b.iter().sum();
            if kt < 1.0 {
                r.summary.push(format!("total sum {}", bt / (1.0 - kt)));
            }
        }
        _ => {
            let p = model(&a.model)?;
            let u = weights_for(&p, a.n)?;
            for (i, v) in u.as_slice().iter().enumerate() {
                t.push(vec![(i + 1).into(), (*v).into()]);
            }
            r = Report::new(t);
            let total = p.renewal_system().total_sum(p.forcing_total());
            match total {
                Ok(s) => r.summary.push(format!("total sum {s}")),
                Err(e) => r.summary.push(format!("total sum unavailable: {e}")),
            }
        }
    }
    Ok(r.plot(0, &[1]))
}

pub fn malthus(a: &MalthusArgs) -> CliResult<Report> {
    let limit = RightEdgeLimit::new(&power_weights(a.gamma)?)?;
    let mut t = Table::new(&["m", "comparator", "giant_cycle_limit", "rate", "residual"]);
    for &m in &a.m {
        t.push(vec![
            m.into(),
            limit.at(m).into(),
            limit.giant_cycle_at(m).into(),
            limit.root.rate.into(),
            limit.root.residual.into(),
        ]);
    }
    let mut r = Report::new(t).plot(0, &[1, 2]);
    r.summary.push(format!("malthusian rate {} residual {:e}", limit.root.rate, limit.root.residual));
    Ok(r)
}

pub fn perm_h(a: &PermHArgs) -> CliResult<Report> {
    require_positive("n", a.n)?;
    let w = power_weights(a.gamma)?;
    let h = compute_h(&w, a.n)?;
    let mut r;
    if a.brute_check {
        if a.n > 10 {
            return Err(CliError::Usage("--brute-check enumerates S_n and supports n <= 10".into()));
        }
        let sampler = CycleSampler::new(&w, &h)?;
        let mut t = Table::new(&["n", "h", "ln_h", "brute_h", "rel_diff", "marginal_max_diff"]);
        let mut worst_h: f64 = 0.0;
        let mut worst_marginal: f64 = 0.0;
        for n in 1..=a.n {
            let e = enumerate(&w, n)?;
            let rel = (h.h(n) - e.h).abs() / e.h;
            let marginal = sampler
                .first_cycle_marginal(n)
                .iter()
                .zip(&e.first_cycle)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            worst_h = worst_h.max(rel);
            worst_marginal = worst_marginal.max(marginal);
            t.push(vec![n.into(), h.h(n).into(), h.ln_h(n).into(), e.h.into(), rel.into(), marginal.into()]);
        }
        r = Report::new(t);
        if worst_h <= 1e-12 && worst_marginal <= 1e-12 {
            r.summary.push(format!("enumeration check passed for n <= {}", a.n));
        } else {
            r.failure =
                Some(format!("enumeration mismatch: h relative {worst_h:e}, first-cycle marginal {worst_marginal:e}"));
        }
    } else {
        let mut t = Table::new(&["n", "h", "ln_h"]);
        for n in 0..=a.n {
            t.push(vec![n.into(), h.h(n).into(), h.ln_h(n).into()]);
        }
        r = Report::new(t);
    }
    Ok(r.plot(0, &[2]))
}

pub fn perm_sample(a: &PermSampleArgs) -> CliResult<Report> {
    require_positive("n", a.n)?;
    let seed = resolve_seed(a.mc.seed)?;
    let w = power_weights(a.gamma)?;
    let sampler = CycleSampler::new(&w, &compute_h(&w, a.n)?)?;
    let samples = run_replicas(a.replicas, a.mc.workers, |r| Ok(sampler.sample(a.n, &mut replica_stream(seed, r))?))?;
    let mut t = Table::new(&["replica", "length", "count"]);
    for (r, s) in samples.iter().enumerate() {
        for (len, &c) in s.cycle_counts().iter().enumerate().filter(|(_, c)| **c > 0) {
            t.push(vec![r.into(), (len + 1).into(), c.into()]);
        }
    }
    let mut rep = Report::new(t);
    rep.seed = Some(seed);
    Ok(rep)
}

pub fn perm_wave_left(a: &PermWaveLeftArgs) -> CliResult<Report> {
    require_positive("n", a.n)?;
    require_positive("replicas", a.replicas)?;
    if !(a.gamma > 0.0) {
        return Err(CliError::Usage("perm-wave-left needs --gamma > 0".into()));
    }
    let seed = resolve_seed(a.mc.seed)?;
    let w = power_weights(a.gamma)?;
    let sampler = CycleSampler::new(&w, &compute_h(&w, a.n)?)?;
    let rows = run_replicas(a.replicas, a.mc.workers, |r| {
        Ok(left_wave_replica(&sampler, a.gamma, a.n, &a.x, &mut replica_stream(seed, r))?)
    })?;
    let est = column_estimates(&rows);
    let mut t = Table::new(&["x", "mean", "std_error", "limit", "rel_err"]);
    for (x, e) in a.x.iter().zip(&est) {
        let l = left_wave_limit(a.gamma, *x);
        let [m, s] = estimate_cells(e);
        t.push(vec![(*x).into(), m, s, l.into(), ((e.mean - l).abs() / l).into()]);
    }
    let mut rep = Report::new(t).plot(0, &[1, 3]);
    rep.seed = Some(seed);
    Ok(rep)
}

pub fn perm_wave_right(a: &PermWaveRightArgs) -> CliResult<Report> {
    require_positive("n", a.n)?;
    require_positive("replicas", a.replicas)?;
    if !(a.gamma < 0.0) {
        return Err(CliError::Usage("perm-wave-right needs --gamma < 0".into()));
    }
    let seed = resolve_seed(a.mc.seed)?;
    let w = power_weights(a.gamma)?;
    let limit = RightEdgeLimit::new(&w)?;
    let sampler = CycleSampler::new(&w, &compute_h(&w, a.n)?)?;
    let rows = run_replicas(a.replicas, a.mc.workers, |r| {
        Ok(right_wave_replica(&sampler, a.n, &a.m, &mut replica_stream(seed, r))?)
    })?;
    let est = column_estimates(&rows);
    let mut t = Table::new(&["m", "mean", "std_error", "comparator", "giant_cycle_limit"]);
    for (m, e) in a.m.iter().zip(&est) {
        let [mean, se] = estimate_cells(e);
        t.push(vec![(*m).into(), mean, se, limit.at(*m).into(), limit.giant_cycle_at(*m).into()]);
    }
    let mut rep = Report::new(t).plot(0, &[1, 3, 4]);
    rep.summary.push(format!("malthusian rate {} residual {:e}", limit.root.rate, limit.root.residual));
    rep.seed = Some(seed);
    Ok(rep)
}

fn network_rule(znorm: Znorm, lambda: f64, alpha: f64) -> CliResult<NormalizationRule> {
    Ok(match znorm {
        Znorm::Adaptive => NormalizationRule::adaptive(lambda)?,
        Znorm::DefaultDet => NormalizationRule::Deterministic(ZSequence::log_corrected(alpha)?),
    })
}

/// Top-fitness window used for condensation summaries.
pub const TOP_WINDOW: f64 = 0.05;

pub fn net_sim(a: &NetSimArgs) -> CliResult<Report> {
    require_positive("n", a.n)?;
    let seed = resolve_seed(a.mc.seed)?;
    let q = FitnessDistribution::polynomial_tail(a.alpha)?;
    let rule = network_rule(a.znorm, a.lambda, a.alpha)?;
    let runs = run_replicas(a.replicas, a.mc.workers, |r| {
        let g = simulate_replica(a.n, &rule, &q, seed, r)?;
        let xi = g.impact_measure();
        let row = vec![
            Cell::from(r),
            g.len().into(),
            g.edge_count().into(),
            xi.total_mass().into(),
            (g.edge_count() as f64 / (g.len() - 1).max(1) as f64).into(),
            xi.mass_in(0.0, 0.5).into(),
            xi.mass_above(1.0 - TOP_WINDOW).into(),
        ];
        Ok((row, g.outdegree()[1..].to_vec()))
    })?;
    let mut t =
        Table::new(&["replica", "vertices", "edges", "total_mass", "mean_outdegree", "mass_lower_half", "mass_top"]);
    let mut pooled = Vec::new();
    for (row, out) in runs {
        t.push(row);
        pooled.extend(out);
    }
    let mut rep = Report::new(t);
    if a.znorm == Znorm::Adaptive {
        match poisson_goodness_of_fit(&pooled, a.lambda) {
            Ok(test) => rep.summary.push(format!(
                "pooled outdegree vs Poisson({}): chi2 {} df {} p {}",
                a.lambda, test.statistic, test.df, test.p_value
            )),
            Err(e) => rep.summary.push(format!("pooled outdegree test unavailable: {e}")),
        }
    }
    rep.seed = Some(seed);
    Ok(rep)
}

pub fn net_phase(a: &NetPhaseArgs) -> CliResult<Report> {
    let q = FitnessDistribution::polynomial_tail(a.alpha)?;
    let gap = q.reciprocal_gap_integral();
    let mut t =
        Table::new(&["lambda", "phase", "gap_integral", "lambda_star", "limit_lower_half", "limit_top", "atom"]);
    for &lambda in &a.lambda {
        let phase = phase_classify(&q, lambda);
        let (name, star, atom) = match phase {
            Phase::FitGetRicher => ("fgr", fgr_lambda_star(&q, lambda)?, 0.0),
            Phase::BoseEinstein => ("be", f64::NAN, 1.0 + lambda - gap),
        };
        t.push(vec![
            lambda.into(),
            name.into(),
            gap.into(),
            star.into(),
            limit_measure(&q, lambda, Interval::closed(0.0, 0.5))?.into(),
            limit_measure(&q, lambda, Interval::left_open(1.0 - TOP_WINDOW, 1.0))?.into(),
            atom.into(),
        ]);
    }
    Ok(Report::new(t))
}

pub fn net_wave(a: &NetWaveArgs) -> CliResult<Report> {
    require_positive("n", a.n)?;
    require_positive("replicas", a.replicas)?;
    let seed = resolve_seed(a.mc.seed)?;
    let q = FitnessDistribution::polynomial_tail(a.alpha)?;
    let rule = NormalizationRule::Deterministic(ZSequence::log_corrected(a.alpha)?);
    let graphs: Vec<FitnessGraph> =
        run_replicas(a.replicas, a.mc.workers, |r| Ok(simulate_replica(a.n, &rule, &q, seed, r)?))?;
    let wave = wave_estimate(&graphs, &a.x, a.alpha)?;
    let mut t = Table::new(&["x", "mean", "std_error", "comparator"]);
    for ((x, e), c) in wave.xs.iter().zip(&wave.estimates).zip(&wave.comparator) {
        let [m, s] = estimate_cells(e);
        t.push(vec![(*x).into(), m, s, (*c).into()]);
    }
    let mut rep = Report::new(t).plot(0, &[1]);
    rep.summary.push(format!("gamma estimate {}", wave.gamma_estimate));
    rep.summary.push(format!("monotone in every replica: {}", wave.monotone));
    match &wave.fit {
        Some(f) => rep.summary.push(format!("fitted shape {} ks {}", f.shape, f.ks_distance)),
        None => rep.summary.push("shape fit unavailable".into()),
    }
    rep.seed = Some(seed);
    Ok(rep)
}

fn read_wave_csv(path: &Path) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let text = read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').map(str::trim).collect();
    let find = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| CliError::Usage(format!("{}: missing `{name}` column", path.display())))
    };
    let (ix, im) = (find("x")?, find("mass")?);
    let (mut xs, mut ms) = (Vec::new(), Vec::new());
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |j: usize| {
            fields
                .get(j)
                .and_then(|f| f.trim().parse::<f64>().ok())
                .ok_or_else(|| CliError::Usage(format!("{}: bad number on data row {}", path.display(), i + 1)))
        };
        xs.push(parse(ix)?);
        ms.push(parse(im)?);
    }
    Ok((xs, ms))
}

pub fn fit_wave(a: &FitWaveArgs) -> CliResult<Report> {
    let (xs, masses, plateau) = match &a.input {
        Some(path) => {
            let (xs, ms) = read_wave_csv(path)?;
            let last = *ms.last().ok_or_else(|| CliError::Usage(format!("{}: no data rows", path.display())))?;
            let plateau = a.plateau_mass.unwrap_or(last);
            (xs, ms, plateau)
        }
        None => {
            require_positive("n", a.n)?;
            let p = model(&a.model)?;
            let xs = a.x.clone().unwrap_or_else(default_fit_grid);
            let u = weights_for(&p, a.n)?;
            let masses = p.wave_profile_with(&u, a.n, &xs)?.masses;
            let plateau = match a.plateau_mass {
                Some(m) => m,
                None => p.interval_mass(&u, a.n, (a.plateau_x / a.n as f64).min(1.0))?,
            };
            (xs, masses, plateau)
        }
    };
    let fit = fit_gamma_shape(&xs, &masses, plateau)?;
    let mut t = Table::new(&["shape", "mass", "ks_distance", "points"]);
    t.push(vec![fit.shape.into(), fit.mass.into(), fit.ks_distance.into(), xs.len().into()]);
    let mut rep = Report::new(t);
    rep.summary.push(format!("fitted shape {} ks {}", fit.shape, fit.ks_distance));
    Ok(rep)
}
