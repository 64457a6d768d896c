//! Monte-Carlo experiment runner: many simulations from random initial
//! opinions on one graph, partitions aggregated by canonical key into a
//! report that can be emitted as JSON, CSV, or DOT.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::community::extract;
use crate::dynamics::{
    estimate_convergence_rate, sample_initial_opinions, simulate, RateEstimate, SimulationConfig,
    WeightMode,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::{Graph, Partition};
use crate::quality::{modularity, stability, StabilityCurve};

/// Where an experiment's graph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    /// A bundled benchmark ("karate").
    Builtin(String),
    /// Any edge-list file.
    File(PathBuf),
    /// A named benchmark loaded from a user-supplied edge list, validated
    /// against its published vertex count ("books", "blogs").
    Named { name: String, path: PathBuf },
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSource::Builtin(name) if name == "karate" => Ok(fixtures::karate()),
            GraphSource::Builtin(name) if fixtures::expected_vertices(name).is_some() => {
                Err(Error::InvalidArgument(format!(
                    "benchmark {name:?} ships without data; supply its edge-list file"
                )))
            }
            GraphSource::Builtin(name) => Err(Error::InvalidArgument(format!(
                "unknown benchmark {name:?}; known names: karate, books, blogs"
            ))),
            GraphSource::File(path) => Graph::load_edge_list_path(path),
            GraphSource::Named { name, path } => fixtures::load_named(name, path),
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::Builtin(name) => write!(f, "{name}"),
            GraphSource::File(path) => write!(f, "{}", path.display()),
            GraphSource::Named { name, path } => write!(f, "{name} ({})", path.display()),
        }
    }
}

/// Everything that determines an experiment. The confidence decay rate is
/// always derived as `rho = 1 - alpha * delta`, never set independently:
/// that coupling is what ties the detected communities to the spectral
/// threshold `delta`.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    source: GraphSource,
    delta: f64,
    r: f64,
    alpha: f64,
    runs: usize,
    seed: u64,
    weight_mode: WeightMode,
    stability_times: Option<Vec<f64>>,
    max_steps: usize,
}

fn validate_delta(delta: f64) -> Result<f64> {
    if !delta.is_finite() || delta <= 0.0 || delta > 1.0 {
        return Err(Error::InvalidConfig(format!(
            "delta must lie in (0, 1], got {delta}"
        )));
    }
    Ok(delta)
}

impl ExperimentSpec {
    /// Defaults: R = 1, alpha = 0.1, runs = 100, seed = 0, degree-average
    /// weights, no stability curves.
    pub fn new(source: GraphSource, delta: f64) -> Result<ExperimentSpec> {
        let delta = validate_delta(delta)?;
        Ok(ExperimentSpec {
            source,
            delta,
            r: 1.0,
            alpha: 0.1,
            runs: 100,
            seed: 0,
            weight_mode: WeightMode::DegreeAverage,
            stability_times: None,
            max_steps: SimulationConfig::new(1.0, 0.5, 0.1)?.max_steps(),
        })
    }

    pub fn with_r(mut self, r: f64) -> ExperimentSpec {
        self.r = r;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> ExperimentSpec {
        self.alpha = alpha;
        self
    }

    pub fn with_runs(mut self, runs: usize) -> Result<ExperimentSpec> {
        if runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        self.runs = runs;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> ExperimentSpec {
        self.seed = seed;
        self
    }

    pub fn with_weight_mode(mut self, mode: WeightMode) -> ExperimentSpec {
        self.weight_mode = mode;
        self
    }

    pub fn with_stability_times(mut self, times: Vec<f64>) -> ExperimentSpec {
        self.stability_times = Some(times);
        self
    }

    pub fn with_max_steps(mut self, steps: usize) -> ExperimentSpec {
        self.max_steps = steps;
        self
    }

    pub fn source(&self) -> &GraphSource {
        &self.source
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derived decay rate `1 - alpha * delta`.
    pub fn rho(&self) -> f64 {
        1.0 - self.alpha * self.delta
    }

    /// The per-run simulation configuration (also validates R and alpha).
    pub fn simulation_config(&self) -> Result<SimulationConfig> {
        Ok(SimulationConfig::new(self.r, self.rho(), self.alpha)?
            .with_weight_mode(self.weight_mode)
            .with_max_steps(self.max_steps)?)
    }

    pub fn load_graph(&self) -> Result<Graph> {
        self.source.load()
    }
}

/// Per-run seed, derived so that run `r`'s opinions depend only on the
/// master seed and `r` (SplitMix64 over the golden-ratio sequence).
pub fn derive_run_seed(master: u64, run: usize) -> u64 {
    let mut z = master.wrapping_add(0x9E3779B97F4A7C15u64.wrapping_mul(run as u64 + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// One distinct observed partition, aggregated over the runs that hit it.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionRow {
    key: String,
    classes: Vec<Vec<String>>,
    class_count: usize,
    occurrences: usize,
    agreements: usize,
    agreement_rate: f64,
    min_mu2: Option<f64>,
    modularity: Option<f64>,
    problem1_satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    stability: Option<StabilityCurve>,
}

impl PartitionRow {
    pub fn key(&self) -> &str {
        &self.key
    }

    /// Classes as external labels, sorted within each class.
    pub fn classes(&self) -> &[Vec<String>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn occurrences(&self) -> usize {
        self.occurrences
    }

    pub fn agreements(&self) -> usize {
        self.agreements
    }

    /// Smallest spectral gap over classes with at least two members.
    pub fn min_mu2(&self) -> Option<f64> {
        self.min_mu2
    }

    /// `None` on an edgeless graph, where the score is undefined.
    pub fn modularity(&self) -> Option<f64> {
        self.modularity
    }

    pub fn problem1_satisfied(&self) -> bool {
        self.problem1_satisfied
    }

    pub fn stability(&self) -> Option<&StabilityCurve> {
        self.stability.as_ref()
    }
}

#[derive(Debug, Clone, Serialize)]
struct GraphMeta {
    source: String,
    vertices: usize,
    edges: usize,
}

#[derive(Debug, Clone, Serialize)]
struct Parameters {
    delta: f64,
    r: f64,
    alpha: f64,
    rho: f64,
    runs: usize,
    seed: u64,
    weight_mode: WeightMode,
    max_steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    stability_times: Option<Vec<f64>>,
}

/// Spread of stopping times across the runs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TEndStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

/// Aggregate of the per-run geometric-rate fits. `all_below_rho` is the
/// empirical fast-convergence check: when it fails, `slow_runs` of the runs
/// had some agent settle more slowly than the confidence bound shrinks, and
/// the spectral-threshold guarantee does not cover those runs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AssumptionSummary {
    pub agents_fitted: usize,
    pub agents_exact: usize,
    pub max_rate: Option<f64>,
    pub all_below_rho: bool,
    pub slow_runs: usize,
}

/// Everything an experiment produced, in deterministic order: rows sorted
/// by occurrences (descending), ties by canonical key.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    schema_version: u32,
    graph: GraphMeta,
    #[serde(skip)]
    source: GraphSource,
    parameters: Parameters,
    partitions: Vec<PartitionRow>,
    not_stabilized: usize,
    t_end: TEndStats,
    assumption_check: AssumptionSummary,
}

impl ExperimentReport {
    pub fn partitions(&self) -> &[PartitionRow] {
        &self.partitions
    }

    /// The most frequent partition, when any run stabilized.
    pub fn modal(&self) -> Option<&PartitionRow> {
        self.partitions.first()
    }

    pub fn not_stabilized(&self) -> usize {
        self.not_stabilized
    }

    pub fn t_end(&self) -> TEndStats {
        self.t_end
    }

    pub fn assumption_check(&self) -> AssumptionSummary {
        self.assumption_check
    }

    pub fn delta(&self) -> f64 {
        self.parameters.delta
    }

    pub fn runs(&self) -> usize {
        self.parameters.runs
    }
}

/// Load the graph `spec` names, then run on it.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    let g = spec.load_graph()?;
    run_experiment_on(spec, &g)
}

/// Run against an already-loaded graph (to reuse one load across a sweep,
/// or to drive graphs that no edge list can express, like edgeless ones).
pub fn run_experiment_on(spec: &ExperimentSpec, g: &Graph) -> Result<ExperimentReport> {
    let cfg = spec.simulation_config()?;
    if let Some(times) = &spec.stability_times {
        if g.degrees().contains(&0) {
            return Err(Error::InvalidConfig(
                "stability curves need a graph without isolated vertices".into(),
            ));
        }
        if let Some(bad) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(Error::InvalidConfig(format!(
                "stability horizons must be finite and nonnegative, got {bad}"
            )));
        }
    }

    struct Agg {
        partition: Partition,
        occurrences: usize,
        agreements: usize,
        min_mu2: Option<f64>,
        modularity: Option<f64>,
        problem1_satisfied: bool,
        stability: Option<StabilityCurve>,
    }

    let n = g.vertex_count();
    let mut rows: BTreeMap<String, Agg> = BTreeMap::new();
    let mut not_stabilized = 0usize;
    let mut t_end_min = usize::MAX;
    let mut t_end_max = 0usize;
    let mut t_end_sum = 0usize;
    let mut agents_fitted = 0usize;
    let mut agents_exact = 0usize;
    let mut max_rate: Option<f64> = None;
    let mut slow_runs = 0usize;

    for run in 0..spec.runs {
        let x0 = sample_initial_opinions(n, derive_run_seed(spec.seed, run));
        let trace = simulate(g, &x0, &cfg)?;
        t_end_min = t_end_min.min(trace.t_end());
        t_end_max = t_end_max.max(trace.t_end());
        t_end_sum += trace.t_end();
        if !trace.is_stabilized() {
            not_stabilized += 1;
            continue;
        }

        let res = extract(g, &trace, &cfg, spec.delta)?;

        let mut run_max: Option<f64> = None;
        for rate in estimate_convergence_rate(&trace) {
            match rate {
                RateEstimate::Exact => agents_exact += 1,
                RateEstimate::Rate(v) => {
                    agents_fitted += 1;
                    run_max = Some(run_max.map_or(v, |m| m.max(v)));
                }
            }
        }
        if let Some(v) = run_max {
            max_rate = Some(max_rate.map_or(v, |m| m.max(v)));
        }
        let in_rate = run_max.is_none_or(|m| m <= cfg.rho());
        if !in_rate {
            slow_runs += 1;
        }
        // The spectral-threshold guarantee covers runs that settle at least
        // as fast as the bound shrinks; a slow run can legitimately carry an
        // undersplit partition (e.g. a whole-network freeze), which the
        // summary reports instead.
        if res.agreement_flag() && in_rate {
            assert!(
                res.problem1_satisfied(),
                "run {run}: partition agreed on by both routes violates the spectral \
                 threshold despite in-rate convergence"
            );
        }

        let key = res.partition().canonical_key();
        let entry = match rows.entry(key) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => {
                let q = if g.edge_count() > 0 {
                    Some(modularity(g, res.partition())?)
                } else {
                    None
                };
                let curve = match &spec.stability_times {
                    Some(times) => Some(stability(g, res.partition(), times)?),
                    None => None,
                };
                e.insert(Agg {
                    partition: res.partition().clone(),
                    occurrences: 0,
                    agreements: 0,
                    min_mu2: res.min_mu2(),
                    modularity: q,
                    problem1_satisfied: res.problem1_satisfied(),
                    stability: curve,
                })
            }
        };
        entry.occurrences += 1;
        entry.agreements += res.agreement_flag() as usize;
    }

    let mut partitions: Vec<PartitionRow> = rows
        .into_iter()
        .map(|(key, agg)| PartitionRow {
            key,
            classes: agg
                .partition
                .classes()
                .iter()
                .map(|c| {
                    let mut labels: Vec<String> =
                        c.iter().map(|&v| g.label(v).to_string()).collect();
                    labels.sort_unstable();
                    labels
                })
                .collect(),
            class_count: agg.partition.class_count(),
            occurrences: agg.occurrences,
            agreements: agg.agreements,
            agreement_rate: agg.agreements as f64 / agg.occurrences as f64,
            min_mu2: agg.min_mu2,
            modularity: agg.modularity,
            problem1_satisfied: agg.problem1_satisfied,
            stability: agg.stability,
        })
        .collect();
    partitions.sort_by(|a, b| b.occurrences.cmp(&a.occurrences).then(a.key.cmp(&b.key)));

    Ok(ExperimentReport {
        schema_version: 1,
        graph: GraphMeta {
            source: spec.source.to_string(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
        },
        source: spec.source.clone(),
        parameters: Parameters {
            delta: spec.delta,
            r: spec.r,
            alpha: spec.alpha,
            rho: spec.rho(),
            runs: spec.runs,
            seed: spec.seed,
            weight_mode: spec.weight_mode,
            max_steps: spec.max_steps,
            stability_times: spec.stability_times.clone(),
        },
        partitions,
        not_stabilized,
        t_end: TEndStats {
            min: t_end_min,
            max: t_end_max,
            mean: t_end_sum as f64 / spec.runs as f64,
        },
        assumption_check: AssumptionSummary {
            agents_fitted,
            agents_exact,
            max_rate,
            all_below_rho: slow_runs == 0,
            slow_runs,
        },
    })
}

/// One report per threshold, all sharing the master seed so that run `r`
/// uses the same initial opinions at every delta.
pub fn delta_sweep(spec: &ExperimentSpec, deltas: &[f64]) -> Result<Vec<ExperimentReport>> {
    if deltas.is_empty() {
        return Err(Error::InvalidConfig("sweep needs at least one delta".into()));
    }
    let g = spec.load_graph()?;
    deltas
        .iter()
        .map(|&delta| {
            let mut one = spec.clone();
            one.delta = validate_delta(delta)?;
            run_experiment_on(&one, &g)
        })
        .collect()
}

/// Human-readable sweep summary: one line per threshold with the modal
/// partition's shape.
pub fn sweep_summary(reports: &[ExperimentReport]) -> String {
    let mut out = String::from("delta  classes  modal_Q  occurrences\n");
    for report in reports {
        match report.modal() {
            Some(row) => {
                let q = row
                    .modularity()
                    .map_or("n/a".to_string(), |q| format!("{q:.3}"));
                out += &format!(
                    "{:<5}  {:<7}  {:<7}  {}/{}\n",
                    report.delta(),
                    row.class_count(),
                    q,
                    row.occurrences(),
                    report.runs(),
                );
            }
            None => {
                out += &format!(
                    "{:<5}  no run stabilized ({} runs)\n",
                    report.delta(),
                    report.runs()
                );
            }
        }
    }
    out
}

/// Output encodings for a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Dot,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ReportFormat> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "dot" => Ok(ReportFormat::Dot),
            other => Err(Error::InvalidArgument(format!(
                "unknown format {other:?}; expected json, csv, or dot"
            ))),
        }
    }
}

/// Serialize a report. JSON carries the whole report; CSV has one row per
/// distinct partition; DOT renders the modal partition over its graph with
/// inter-class edges dashed (the graph is reloaded from the recorded
/// source, so it must still be readable).
pub fn emit_report(report: &ExperimentReport, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            let mut bytes = serde_json::to_vec_pretty(report)?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        ReportFormat::Csv => {
            let mut out = String::from("delta,classes,occurrences,min_mu2,modularity,problem1\n");
            for row in &report.partitions {
                let mu = row.min_mu2.map_or(String::new(), |v| v.to_string());
                let q = row.modularity.map_or(String::new(), |v| v.to_string());
                out += &format!(
                    "{},{},{},{},{},{}\n",
                    report.parameters.delta,
                    row.class_count,
                    row.occurrences,
                    mu,
                    q,
                    row.problem1_satisfied,
                );
            }
            Ok(out.into_bytes())
        }
        ReportFormat::Dot => {
            let row = report.modal().ok_or_else(|| {
                Error::InvalidArgument("no stabilized run; nothing to render".into())
            })?;
            let g = report.source.load()?;
            let mut membership = vec![0usize; g.vertex_count()];
            for (class, labels) in row.classes.iter().enumerate() {
                for label in labels {
                    let v = g.index_of(label).ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "vertex {label:?} from the report is missing from the reloaded graph"
                        ))
                    })?;
                    membership[v] = class;
                }
            }
            let partition = Partition::from_membership(&membership);
            Ok(g.to_dot(Some(&partition))?.into_bytes())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn karate_spec(delta: f64) -> ExperimentSpec {
        ExperimentSpec::new(GraphSource::Builtin("karate".into()), delta).unwrap()
    }

    #[test]
    fn spec_validates_inputs() {
        assert!(ExperimentSpec::new(GraphSource::Builtin("karate".into()), 0.0).is_err());
        assert!(ExperimentSpec::new(GraphSource::Builtin("karate".into()), 1.5).is_err());
        assert!(karate_spec(0.2).with_runs(0).is_err());
        assert!((karate_spec(0.2).with_alpha(0.25).rho() - 0.95).abs() < 1e-15);
    }

    #[test]
    fn load_graph_knows_the_bundled_benchmark() {
        assert_eq!(karate_spec(0.2).load_graph().unwrap().vertex_count(), 34);
        let books = ExperimentSpec::new(GraphSource::Builtin("books".into()), 0.2).unwrap();
        assert!(books.load_graph().is_err());
        let unknown = ExperimentSpec::new(GraphSource::Builtin("nope".into()), 0.2).unwrap();
        assert!(unknown.load_graph().is_err());
    }

    #[test]
    fn derived_seeds_do_not_collide_and_ignore_order() {
        let mut seen = std::collections::HashSet::new();
        for run in 0..10_000 {
            assert!(seen.insert(derive_run_seed(0, run)));
        }
        assert_ne!(derive_run_seed(0, 3), derive_run_seed(1, 3));
        assert_eq!(derive_run_seed(42, 7), derive_run_seed(42, 7));
    }

    #[test]
    fn club_experiment_reproduces_the_two_class_row() {
        let report = run_experiment(&karate_spec(0.2)).unwrap();
        let modal = report.modal().unwrap();
        assert_eq!(modal.class_count(), 2);
        assert!(modal.occurrences() >= 95, "{}", modal.occurrences());
        assert!((modal.min_mu2().unwrap() - 0.250).abs() <= 0.005);
        assert!((modal.modularity().unwrap() - 0.360).abs() <= 0.005);
        assert_eq!(report.not_stabilized(), 0);
        let total: usize = report.partitions().iter().map(|r| r.occurrences()).sum();
        assert_eq!(total + report.not_stabilized(), report.runs());
    }

    #[test]
    fn club_experiment_at_low_threshold_keeps_the_network_whole() {
        let report = run_experiment(&karate_spec(0.1).with_runs(20).unwrap()).unwrap();
        assert_eq!(report.partitions().len(), 1);
        let modal = report.modal().unwrap();
        assert_eq!(modal.class_count(), 1);
        assert_eq!(modal.occurrences(), 20);
        assert_eq!(modal.modularity().unwrap(), 0.0);
        assert!((modal.min_mu2().unwrap() - 0.132).abs() < 1e-3);
    }

    #[test]
    fn edgeless_graph_gives_singletons_every_run() {
        let g = Graph::from_edges(3, &[]).unwrap();
        let spec = karate_spec(0.5).with_runs(10).unwrap();
        let report = run_experiment_on(&spec, &g).unwrap();
        assert_eq!(report.partitions().len(), 1);
        let modal = report.modal().unwrap();
        assert_eq!(modal.class_count(), 3);
        assert_eq!(modal.occurrences(), 10);
        assert_eq!(modal.min_mu2(), None);
        assert_eq!(modal.modularity(), None);
        assert!(modal.problem1_satisfied());
    }

    #[test]
    fn unstabilized_runs_land_in_their_bucket() {
        let spec = karate_spec(0.2).with_runs(5).unwrap().with_max_steps(3);
        let report = run_experiment(&spec).unwrap();
        assert_eq!(report.not_stabilized(), 5);
        assert!(report.partitions().is_empty());
        assert_eq!(report.t_end().max, 3);
        assert!(emit_report(&report, ReportFormat::Dot).is_err());
    }

    #[test]
    fn reports_are_byte_identical_across_reruns() {
        let spec = karate_spec(0.3)
            .with_runs(10)
            .unwrap()
            .with_stability_times(vec![0.5, 5.0]);
        let a = emit_report(&run_experiment(&spec).unwrap(), ReportFormat::Json).unwrap();
        let b = emit_report(&run_experiment(&spec).unwrap(), ReportFormat::Json).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"stability\""));
    }

    #[test]
    fn sweep_finds_the_class_count_ladder() {
        let spec = karate_spec(0.2).with_runs(50).unwrap();
        let reports = delta_sweep(&spec, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        let counts: Vec<usize> = reports
            .iter()
            .map(|r| r.modal().unwrap().class_count())
            .collect();
        assert_eq!(counts, vec![1, 2, 3, 4]);
        let summary = sweep_summary(&reports);
        assert_eq!(summary.lines().count(), 5);
        assert!(summary.lines().nth(2).unwrap().starts_with("0.2"));
    }

    #[test]
    fn single_delta_sweep_matches_run_experiment() {
        let spec = karate_spec(0.2).with_runs(10).unwrap();
        let sweep = delta_sweep(&spec, &[0.2]).unwrap();
        let direct = run_experiment(&spec).unwrap();
        assert_eq!(
            emit_report(&sweep[0], ReportFormat::Json).unwrap(),
            emit_report(&direct, ReportFormat::Json).unwrap()
        );
        assert!(delta_sweep(&spec, &[]).is_err());
    }

    #[test]
    fn csv_has_one_row_per_distinct_partition() {
        let spec = karate_spec(0.3).with_runs(30).unwrap();
        let report = run_experiment(&spec).unwrap();
        let csv = String::from_utf8(emit_report(&report, ReportFormat::Csv).unwrap())
            .unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "delta,classes,occurrences,min_mu2,modularity,problem1"
        );
        assert_eq!(lines.count(), report.partitions().len());
        assert!(csv.contains("0.3,3,"));
    }

    #[test]
    fn dot_renders_the_modal_partition() {
        let spec = karate_spec(0.2).with_runs(10).unwrap();
        let report = run_experiment(&spec).unwrap();
        let dot =
            String::from_utf8(emit_report(&report, ReportFormat::Dot).unwrap()).unwrap();
        assert_eq!(dot.matches("fillcolor=").count(), 34);
        assert!(dot.contains("fillcolor=1"));
        assert!(dot.contains("fillcolor=2"));
        assert!(dot.contains("style=dashed"));
        assert!(dot.starts_with("graph"));
    }

    #[test]
    fn stability_times_reject_isolated_vertices() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let spec = karate_spec(0.2)
            .with_runs(2)
            .unwrap()
            .with_stability_times(vec![1.0]);
        assert!(run_experiment_on(&spec, &g).is_err());
    }

    #[test]
    fn format_names_parse() {
        assert_eq!("json".parse::<ReportFormat>().unwrap(), ReportFormat::Json);
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert_eq!("dot".parse::<ReportFormat>().unwrap(), ReportFormat::Dot);
        assert!("yaml".parse::<ReportFormat>().is_err());
    }
}
