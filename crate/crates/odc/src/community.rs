//! Community extraction from a stabilized trace, by two independent routes:
//! connected components of the final interaction graph (authoritative) and
//! single-linkage clustering of final opinions (cross-check). A disagreement
//! between the routes is reported, never raised.

use serde::Serialize;

use crate::dynamics::{OpinionTrace, SimulationConfig};
use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::spectral;

/// Which route produced the partition carried by a [`CommunityResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    InteractionGraph,
    OpinionClustering,
}

/// Connected components of the final interaction graph. Requires a
/// stabilized trace: only then is the last recorded graph the settled one.
pub fn communities_from_interaction_graph(g: &Graph, trace: &OpinionTrace) -> Result<Partition> {
    if trace.agent_count() != g.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "trace has {} agents, graph has {} vertices",
            trace.agent_count(),
            g.vertex_count()
        )));
    }
    if !trace.is_stabilized() {
        return Err(Error::NotStabilized);
    }
    Ok(trace.final_graph().connected_components())
}

/// Single-linkage grouping of the final opinions: sort, then cut at every
/// gap strictly larger than `tolerance` (a gap exactly equal to it does not
/// split, matching the non-strict confidence test).
pub fn communities_from_opinions(trace: &OpinionTrace, tolerance: f64) -> Partition {
    let x = trace.final_opinions();
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_unstable_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut membership = vec![0usize; x.len()];
    let mut class = 0usize;
    for w in order.windows(2) {
        if x[w[1]] - x[w[0]] > tolerance {
            class += 1;
        }
        membership[w[1]] = class;
    }
    if let Some(&first) = order.first() {
        membership[first] = 0;
    }
    Partition::from_membership(&membership)
}

/// Tolerance used by [`extract`] for the opinion-clustering cross-check:
/// twice the remaining-motion envelope at the final step, plus a small
/// absolute floor. Two agents of one community sit within one envelope of
/// the common limit, so their gap is at most twice it.
pub fn default_clustering_tolerance(cfg: &SimulationConfig, t_end: usize) -> f64 {
    2.0 * cfg.confidence_bound(t_end) / (1.0 - cfg.rho()) + 1e3 * f64::EPSILON
}

/// A detected partition plus everything needed to audit it.
#[derive(Debug, Clone)]
pub struct CommunityResult {
    partition: Partition,
    limit_opinions: Vec<f64>,
    source: Source,
    agreement_flag: bool,
    mu2_per_class: Vec<Option<f64>>,
    problem1_satisfied: bool,
}

impl CommunityResult {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Common limit value of each class, in class order.
    pub fn limit_opinions(&self) -> &[f64] {
        &self.limit_opinions
    }

    pub fn source(&self) -> Source {
        self.source
    }

    /// True when both extraction routes produced the same partition.
    pub fn agreement_flag(&self) -> bool {
        self.agreement_flag
    }

    /// Spectral gap of each class's induced subgraph; `None` for singletons.
    pub fn mu2_per_class(&self) -> &[Option<f64>] {
        &self.mu2_per_class
    }

    /// Smallest spectral gap over classes with at least two members.
    pub fn min_mu2(&self) -> Option<f64> {
        self.mu2_per_class
            .iter()
            .flatten()
            .copied()
            .min_by(f64::total_cmp)
    }

    /// True when every class with at least two members has spectral gap
    /// strictly above the threshold it was extracted at.
    pub fn problem1_satisfied(&self) -> bool {
        self.problem1_satisfied
    }

    /// JSON with classes spelled as sorted external labels.
    pub fn to_json(&self, g: &Graph) -> Result<String> {
        let classes: Vec<Vec<&str>> = self
            .partition
            .classes()
            .iter()
            .map(|c| {
                let mut labels: Vec<&str> = c.iter().map(|&v| g.label(v)).collect();
                labels.sort_unstable();
                labels
            })
            .collect();
        let value = serde_json::json!({
            "partition": classes,
            "limit_opinions": self.limit_opinions,
            "source": self.source,
            "agreement_flag": self.agreement_flag,
            "mu2_per_class": self.mu2_per_class,
            "problem1_satisfied": self.problem1_satisfied,
        });
        Ok(serde_json::to_string(&value)?)
    }
}

/// Run both routes on a stabilized trace and audit the result: route
/// agreement, per-class spectral gaps on subgraphs induced in `g`, and the
/// gap-threshold criterion at `delta`. Disagreement between routes sets
/// `agreement_flag = false` and logs every offending opinion gap to stderr;
/// it is not an error.
pub fn extract(
    g: &Graph,
    trace: &OpinionTrace,
    cfg: &SimulationConfig,
    delta: f64,
) -> Result<CommunityResult> {
    let partition = communities_from_interaction_graph(g, trace)?;
    let tolerance = default_clustering_tolerance(cfg, trace.t_end());
    let clustered = communities_from_opinions(trace, tolerance);
    let agreement_flag = partition == clustered;
    if !agreement_flag {
        log_disagreement(g, trace, &partition, &clustered, tolerance);
    }

    let x = trace.final_opinions();
    let mut limit_opinions = Vec::with_capacity(partition.class_count());
    let mut mu2_per_class = Vec::with_capacity(partition.class_count());
    let mut problem1_satisfied = true;
    for class in partition.classes() {
        let mean = class.iter().map(|&v| x[v]).sum::<f64>() / class.len() as f64;
        limit_opinions.push(mean);
        if class.len() >= 2 {
            let mu2 = spectral::mu2(&g.induced_subgraph(class)?)?;
            problem1_satisfied &= mu2 > delta;
            mu2_per_class.push(Some(mu2));
        } else {
            mu2_per_class.push(None);
        }
    }

    Ok(CommunityResult {
        partition,
        limit_opinions,
        source: Source::InteractionGraph,
        agreement_flag,
        mu2_per_class,
        problem1_satisfied,
    })
}

/// Report each adjacent opinion gap the two routes read differently: inside
/// one interaction component but wider than the tolerance, or spanning two
/// components yet within it.
fn log_disagreement(
    g: &Graph,
    trace: &OpinionTrace,
    components: &Partition,
    clustered: &Partition,
    tolerance: f64,
) {
    let x = trace.final_opinions();
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_unstable_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut reported = false;
    for w in order.windows(2) {
        let gap = x[w[1]] - x[w[0]];
        let together = components.class_of(w[0]) == components.class_of(w[1]);
        if together != (gap <= tolerance) {
            reported = true;
            eprintln!(
                "community route disagreement: agents {:?} and {:?} are {} in the \
                 interaction graph but their opinion gap is {gap:e} (tolerance {tolerance:e})",
                g.label(w[0]),
                g.label(w[1]),
                if together { "together" } else { "apart" },
            );
        }
    }
    if !reported {
        eprintln!(
            "community route disagreement: interaction graph gives {:?}, opinion \
             clustering gives {:?} (tolerance {tolerance:e})",
            components.canonical_key(),
            clustered.canonical_key(),
        );
    }
}
