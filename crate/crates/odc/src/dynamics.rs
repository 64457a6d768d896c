//! The opinion dynamics itself: synchronous averaging over a shrinking
//! confidence neighborhood.
//!
//! At step `t` agent `i` listens to graph neighbors whose opinion differs by
//! at most `R * rho^t` (non-strict) and moves toward their average. Once the
//! radius undercuts every surviving disagreement the interaction graph
//! freezes; the simulation stops when the radius drops below `eps_stop` and
//! the interaction set has not changed for `stable_window` steps.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// How neighbor differences are weighted in one update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightMode {
    /// `x_i += alpha * mean(x_j - x_i)` over the confidence neighborhood.
    DegreeAverage,
    /// Metropolis weights `alpha / (1 + max(|N_i|, |N_j|))`: symmetric, hence
    /// doubly stochastic and opinion-mean preserving.
    Metropolis,
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightMode::DegreeAverage => write!(f, "degree-average"),
            WeightMode::Metropolis => write!(f, "metropolis"),
        }
    }
}

impl FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<WeightMode> {
        match s {
            "degree-average" | "degree_average" => Ok(WeightMode::DegreeAverage),
            "metropolis" => Ok(WeightMode::Metropolis),
            other => Err(Error::InvalidArgument(format!(
                "unknown weight mode {other:?} (expected degree-average or metropolis)"
            ))),
        }
    }
}

/// Validated simulation parameters.
///
/// `r > 0`, `rho` in (0, 1), `alpha` in (0, 1/2); the remaining knobs default
/// to `eps_stop = 1e-13`, `stable_window = 50`, `max_steps = 100000`.
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    r: f64,
    rho: f64,
    alpha: f64,
    weight_mode: WeightMode,
    eps_stop: f64,
    stable_window: usize,
    max_steps: usize,
    seed: u64,
}

impl SimulationConfig {
    pub fn new(r: f64, rho: f64, alpha: f64) -> Result<SimulationConfig> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidConfig(format!("R must be positive, got {r}")));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "rho must lie in (0, 1), got {rho}"
            )));
        }
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1/2), got {alpha}"
            )));
        }
        Ok(SimulationConfig {
            r,
            rho,
            alpha,
            weight_mode: WeightMode::DegreeAverage,
            eps_stop: 1e-13,
            stable_window: 50,
            max_steps: 100_000,
            seed: 0,
        })
    }

    pub fn with_weight_mode(mut self, mode: WeightMode) -> SimulationConfig {
        self.weight_mode = mode;
        self
    }

    pub fn with_eps_stop(mut self, eps: f64) -> Result<SimulationConfig> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "eps_stop must be positive, got {eps}"
            )));
        }
        self.eps_stop = eps;
        Ok(self)
    }

    pub fn with_stable_window(mut self, window: usize) -> Result<SimulationConfig> {
        if window == 0 {
            return Err(Error::InvalidConfig("stable_window must be >= 1".into()));
        }
        self.stable_window = window;
        Ok(self)
    }

    pub fn with_max_steps(mut self, steps: usize) -> Result<SimulationConfig> {
        if steps == 0 || steps > i32::MAX as usize {
            return Err(Error::InvalidConfig(format!(
                "max_steps must lie in 1..=2^31-1, got {steps}"
            )));
        }
        self.max_steps = steps;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> SimulationConfig {
        self.seed = seed;
        self
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn weight_mode(&self) -> WeightMode {
        self.weight_mode
    }

    pub fn eps_stop(&self) -> f64 {
        self.eps_stop
    }

    pub fn stable_window(&self) -> usize {
        self.stable_window
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Confidence radius at step `t`. The single source of the threshold, so
    /// replaying a stored state reproduces recorded interaction sets exactly.
    pub fn confidence_bound(&self, t: usize) -> f64 {
        self.r * self.rho.powi(t as i32)
    }
}

/// Subset of a graph's edges active at one step, stored as a bitmask over the
/// parent graph's edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionSet {
    capacity: usize,
    words: Vec<u64>,
    active: usize,
}

impl InteractionSet {
    fn empty(capacity: usize) -> InteractionSet {
        InteractionSet {
            capacity,
            words: vec![0; capacity.div_ceil(64)],
            active: 0,
        }
    }

    fn insert(&mut self, idx: usize) {
        debug_assert!(idx < self.capacity);
        let (w, b) = (idx / 64, idx % 64);
        if self.words[w] & (1 << b) == 0 {
            self.words[w] |= 1 << b;
            self.active += 1;
        }
    }

    pub fn contains(&self, idx: usize) -> bool {
        let (w, b) = (idx / 64, idx % 64);
        self.words[w] & (1 << b) != 0
    }

    pub fn active_count(&self) -> usize {
        self.active
    }

    pub fn is_empty(&self) -> bool {
        self.active == 0
    }

    /// Materializes the active edges as index pairs of `g`.
    pub fn edge_pairs(&self, g: &Graph) -> Vec<(usize, usize)> {
        assert_eq!(g.edge_count(), self.capacity, "set built from another graph");
        g.edges()
            .iter()
            .enumerate()
            .filter(|(k, _)| self.contains(*k))
            .map(|(_, &e)| e)
            .collect()
    }
}

/// Neighbors of `i` within the confidence radius at step `t` (non-strict
/// comparison, so a gap exactly equal to the radius still interacts).
pub fn confidence_neighborhood(
    g: &Graph,
    x: &[f64],
    t: usize,
    cfg: &SimulationConfig,
    i: usize,
) -> Vec<usize> {
    assert_eq!(x.len(), g.vertex_count());
    let bound = cfg.confidence_bound(t);
    g.neighbors(i)
        .iter()
        .copied()
        .filter(|&j| (x[i] - x[j]).abs() <= bound)
        .collect()
}

fn interaction_set(g: &Graph, x: &[f64], bound: f64) -> (InteractionSet, Vec<usize>) {
    let mut set = InteractionSet::empty(g.edge_count());
    let mut deg = vec![0usize; g.vertex_count()];
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        if (x[i] - x[j]).abs() <= bound {
            set.insert(k);
            deg[i] += 1;
            deg[j] += 1;
        }
    }
    (set, deg)
}

/// One synchronous update. Returns the next opinion vector and the
/// interaction set `E(t)` that produced it. Agents with an empty neighborhood
/// keep their opinion bit-for-bit.
pub fn step(g: &Graph, x: &[f64], t: usize, cfg: &SimulationConfig) -> (Vec<f64>, InteractionSet) {
    assert_eq!(x.len(), g.vertex_count());
    let bound = cfg.confidence_bound(t);
    let (set, deg) = interaction_set(g, x, bound);
    let n = g.vertex_count();
    let mut acc = vec![0.0; n];
    match cfg.weight_mode {
        WeightMode::DegreeAverage => {
            for (k, &(i, j)) in g.edges().iter().enumerate() {
                if set.contains(k) {
                    let d = x[j] - x[i];
                    acc[i] += d;
                    acc[j] -= d;
                }
            }
            let mut next = x.to_vec();
            for i in 0..n {
                if deg[i] > 0 {
                    next[i] = x[i] + cfg.alpha * (acc[i] / deg[i] as f64);
                }
            }
            (next, set)
        }
        WeightMode::Metropolis => {
            for (k, &(i, j)) in g.edges().iter().enumerate() {
                if set.contains(k) {
                    let w = cfg.alpha / (1 + deg[i].max(deg[j])) as f64;
                    let d = w * (x[j] - x[i]);
                    acc[i] += d;
                    acc[j] -= d;
                }
            }
            let mut next = x.to_vec();
            for i in 0..n {
                if deg[i] > 0 {
                    next[i] = x[i] + acc[i];
                }
            }
            (next, set)
        }
    }
}

/// Full record of one simulation.
///
/// `opinions` holds `x(0) ..= x(T_end)`; `interaction_history` holds
/// `E(0) .. E(T_end - 1)`; `final_graph` is the interaction graph evaluated
/// on `x(T_end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpinionTrace {
    opinions: Vec<Vec<f64>>,
    interaction_history: Vec<InteractionSet>,
    t_stable: Option<usize>,
    stabilized: bool,
    final_graph: Graph,
}

impl OpinionTrace {
    pub fn agent_count(&self) -> usize {
        self.opinions[0].len()
    }

    pub fn t_end(&self) -> usize {
        self.interaction_history.len()
    }

    pub fn opinions(&self, t: usize) -> &[f64] {
        &self.opinions[t]
    }

    pub fn all_opinions(&self) -> &[Vec<f64>] {
        &self.opinions
    }

    pub fn final_opinions(&self) -> &[f64] {
        self.opinions.last().expect("trace holds x(0)..=x(T_end)")
    }

    pub fn interaction_history(&self) -> &[InteractionSet] {
        &self.interaction_history
    }

    /// First step after which the interaction set stayed constant through
    /// `T_end`; absent when the run hit `max_steps` instead of settling.
    pub fn t_stable(&self) -> Option<usize> {
        self.t_stable
    }

    pub fn is_stabilized(&self) -> bool {
        self.stabilized
    }

    /// Interaction graph `G(T_end)`, labels inherited from the input graph.
    pub fn final_graph(&self) -> &Graph {
        &self.final_graph
    }
}

/// Runs the dynamics from `x0` until the stopping rule fires or `max_steps`
/// is reached. Hitting the cap is not an error; the trace comes back with
/// `is_stabilized() == false`.
pub fn simulate(g: &Graph, x0: &[f64], cfg: &SimulationConfig) -> Result<OpinionTrace> {
    if x0.len() != g.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "got {} opinions for {} vertices",
            x0.len(),
            g.vertex_count()
        )));
    }
    if let Some(bad) = x0.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "initial opinions must be finite, got {bad}"
        )));
    }

    let mut opinions = vec![x0.to_vec()];
    let mut history: Vec<InteractionSet> = Vec::new();
    let mut stable_run = 0usize;
    let mut stabilized = false;
    let mut t = 0usize;
    loop {
        let (next, set) = step(g, &opinions[t], t, cfg);
        if history.last() == Some(&set) {
            stable_run += 1;
        } else {
            stable_run = 1;
        }
        history.push(set);
        opinions.push(next);
        let radius = cfg.confidence_bound(t);
        t += 1;
        if radius < cfg.eps_stop && stable_run >= cfg.stable_window {
            stabilized = true;
            break;
        }
        if t >= cfg.max_steps {
            break;
        }
    }

    let t_end = t;
    let bound = cfg.confidence_bound(t_end);
    let (final_set, _) = interaction_set(g, &opinions[t_end], bound);
    let final_graph = g.spanning_subgraph(final_set.edge_pairs(g));
    Ok(OpinionTrace {
        opinions,
        interaction_history: history,
        t_stable: stabilized.then(|| t_end - stable_run),
        stabilized,
        final_graph,
    })
}

/// Uniform `[0, 1)` opinions from a seeded ChaCha stream; the same seed
/// always reproduces the same vector, on any platform.
pub fn sample_initial_opinions(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// Convenience wrapper: draw `x0` from the config's seed, then simulate.
pub fn simulate_seeded(g: &Graph, cfg: &SimulationConfig) -> Result<OpinionTrace> {
    let x0 = sample_initial_opinions(g.vertex_count(), cfg.seed());
    simulate(g, &x0, cfg)
}

/// Worst violation of the geometric convergence envelope
/// `|x_i(t) - x_i(T_end)| <= R / (1 - rho) * rho^t`, maximized over all
/// agents and steps. Negative for a correct run; anything above roughly
/// 1e-9 would falsify the envelope.
pub fn check_convergence_bound(trace: &OpinionTrace, cfg: &SimulationConfig) -> Result<f64> {
    if !trace.is_stabilized() {
        return Err(Error::NotStabilized);
    }
    let limit = trace.final_opinions();
    let scale = cfg.r() / (1.0 - cfg.rho());
    let mut worst = f64::NEG_INFINITY;
    for (t, x) in trace.all_opinions().iter().enumerate() {
        let envelope = scale * cfg.rho().powi(t as i32);
        for (xi, li) in x.iter().zip(limit) {
            worst = worst.max((xi - li).abs() - envelope);
        }
    }
    Ok(worst)
}

/// Per-agent geometric convergence rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateEstimate {
    /// The agent sat at its limit for (almost) the whole usable tail; there
    /// is nothing to fit.
    Exact,
    /// Least-squares estimate of `rho_i` from the decay of
    /// `|x_i(t) - x_i(T_end)|`.
    Rate(f64),
}

/// Fits `log |x_i(t) - x_i(T_end)|` against `t` from the step the interaction
/// graph settled onward, skipping samples inside numerical noise
/// (`1e3 * machine epsilon * scale`). Fewer than 10 usable samples means the
/// agent is already exact.
pub fn estimate_convergence_rate(trace: &OpinionTrace) -> Vec<RateEstimate> {
    let limit = trace.final_opinions().to_vec();
    let start = trace.t_stable().unwrap_or(0);
    let scale = trace
        .all_opinions()
        .iter()
        .flatten()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let noise = 1e3 * f64::EPSILON * scale;
    (0..trace.agent_count())
        .map(|i| {
            let samples: Vec<(f64, f64)> = (start..=trace.t_end())
                .filter_map(|t| {
                    let gap = (trace.opinions(t)[i] - limit[i]).abs();
                    (gap > noise).then(|| (t as f64, gap.ln()))
                })
                .collect();
            if samples.len() < 10 {
                return RateEstimate::Exact;
            }
            let n = samples.len() as f64;
            let mean_t = samples.iter().map(|s| s.0).sum::<f64>() / n;
            let mean_y = samples.iter().map(|s| s.1).sum::<f64>() / n;
            let mut num = 0.0;
            let mut den = 0.0;
            for &(t, y) in &samples {
                num += (t - mean_t) * (y - mean_y);
                den += (t - mean_t) * (t - mean_t);
            }
            RateEstimate::Rate((num / den).exp())
        })
        .collect()
}

/// Dumps the whole trace as `t,agent,opinion` CSV rows.
pub fn write_trace_csv<W: Write>(trace: &OpinionTrace, mut out: W) -> Result<()> {
    writeln!(out, "t,agent,opinion")?;
    for (t, x) in trace.all_opinions().iter().enumerate() {
        for (i, v) in x.iter().enumerate() {
            writeln!(out, "{t},{i},{v}")?;
        }
    }
    Ok(())
}

/// Stopping outcome of a run, for JSON dumps next to a trace CSV.
#[derive(Debug, Clone, Serialize)]
pub struct StabilizationSummary {
    pub t_end: usize,
    pub t_stable: Option<usize>,
    pub stabilized: bool,
    pub final_active_edges: usize,
}

pub fn stabilization_summary(trace: &OpinionTrace) -> StabilizationSummary {
    StabilizationSummary {
        t_end: trace.t_end(),
        t_stable: trace.t_stable(),
        stabilized: trace.is_stabilized(),
        final_active_edges: trace.final_graph().edge_count(),
    }
}
