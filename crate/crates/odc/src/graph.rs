//! Undirected simple graphs with external labels, plus vertex partitions.
//!
//! Vertices are dense indices `0..n`; every vertex also carries the label it
//! had in the source file so subgraphs stay traceable to the original data.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};

/// Undirected graph without self-loops or parallel edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    label_index: HashMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph on `n` vertices labelled `"0".."n-1"`.
    ///
    /// Edges are normalized to `(min, max)` and deduplicated. Self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "graph needs at least one vertex".into(),
            ));
        }
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut pairs = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
            }
            pairs.push((a.min(b), a.max(b)));
        }
        Ok(Graph::assemble(labels, pairs))
    }

    /// Parses a whitespace-separated edge list.
    ///
    /// Each non-blank line holds exactly two labels; lines starting with `#`
    /// are comments. Labels get indices in order of first appearance.
    /// Duplicate edges collapse; self-loops are an error carrying the line
    /// number.
    pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
        let mut labels: Vec<String> = Vec::new();
        let mut label_index: HashMap<String, usize> = HashMap::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut intern = |tok: &str, labels: &mut Vec<String>| -> usize {
            *label_index.entry(tok.to_string()).or_insert_with(|| {
                labels.push(tok.to_string());
                labels.len() - 1
            })
        };
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_ascii_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected 2 vertex labels, found {}", tokens.len()),
                });
            }
            if tokens[0] == tokens[1] {
                return Err(Error::SelfLoop {
                    line: lineno,
                    label: tokens[0].to_string(),
                });
            }
            let a = intern(tokens[0], &mut labels);
            let b = intern(tokens[1], &mut labels);
            pairs.push((a.min(b), a.max(b)));
        }
        if labels.is_empty() {
            return Err(Error::InvalidArgument(
                "edge list is empty: graph needs at least one vertex".into(),
            ));
        }
        Ok(Graph::assemble(labels, pairs))
    }

    /// Reads an edge list from a file path.
    pub fn load_edge_list_path(path: &Path) -> Result<Graph> {
        let file = std::fs::File::open(path)?;
        Graph::load_edge_list(std::io::BufReader::new(file))
    }

    fn assemble(labels: Vec<String>, mut pairs: Vec<(usize, usize)>) -> Graph {
        pairs.sort_unstable();
        pairs.dedup();
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &pairs {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let label_index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Graph {
            labels,
            label_index,
            adjacency,
            edges: pairs,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` index pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.label_index.get(label).copied()
    }

    /// Connected components as a partition (breadth-first search).
    pub fn connected_components(&self) -> Partition {
        let n = self.vertex_count();
        let mut membership = vec![usize::MAX; n];
        let mut next_class = 0;
        let mut queue = Vec::new();
        for start in 0..n {
            if membership[start] != usize::MAX {
                continue;
            }
            membership[start] = next_class;
            queue.push(start);
            while let Some(v) = queue.pop() {
                for &w in self.neighbors(v) {
                    if membership[w] == usize::MAX {
                        membership[w] = next_class;
                        queue.push(w);
                    }
                }
            }
            next_class += 1;
        }
        Partition::from_membership(&membership)
    }

    /// Subgraph on `vertices` with edges among them; original labels are kept,
    /// so the index remapping stays recoverable.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut verts: Vec<usize> = vertices.to_vec();
        verts.sort_unstable();
        verts.dedup();
        if verts.is_empty() {
            return Err(Error::InvalidArgument(
                "induced subgraph needs a non-empty vertex set".into(),
            ));
        }
        if let Some(&v) = verts.iter().find(|&&v| v >= self.vertex_count()) {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} out of range for {} vertices",
                self.vertex_count()
            )));
        }
        let mut remap = vec![usize::MAX; self.vertex_count()];
        for (new, &old) in verts.iter().enumerate() {
            remap[old] = new;
        }
        let labels = verts.iter().map(|&v| self.labels[v].clone()).collect();
        let pairs = self
            .edges
            .iter()
            .filter(|&&(a, b)| remap[a] != usize::MAX && remap[b] != usize::MAX)
            .map(|&(a, b)| (remap[a], remap[b]))
            .collect();
        Ok(Graph::assemble(labels, pairs))
    }

    /// Same vertex set and labels, arbitrary edge subset (callers guarantee
    /// the pairs are valid edges of `self`).
    pub(crate) fn spanning_subgraph(&self, pairs: Vec<(usize, usize)>) -> Graph {
        Graph::assemble(self.labels.clone(), pairs)
    }

    /// Same vertex set, keeping only edges internal to a class of `p`.
    pub fn partition_spanning_subgraph(&self, p: &Partition) -> Result<Graph> {
        if p.n() != self.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "partition covers {} vertices, graph has {}",
                p.n(),
                self.vertex_count()
            )));
        }
        let pairs = self
            .edges
            .iter()
            .filter(|&&(a, b)| p.class_of(a) == p.class_of(b))
            .copied()
            .collect();
        Ok(Graph::assemble(self.labels.clone(), pairs))
    }

    /// Graphviz source. With a partition, nodes are filled by class (twelve
    /// colors, cycled) and edges between classes are dashed.
    pub fn to_dot(&self, partition: Option<&Partition>) -> Result<String> {
        if let Some(p) = partition {
            if p.n() != self.vertex_count() {
                return Err(Error::InvalidArgument(format!(
                    "partition covers {} vertices, graph has {}",
                    p.n(),
                    self.vertex_count()
                )));
            }
        }
        let mut out = String::from("graph communities {\n");
        out.push_str("  node [shape=circle, style=filled, colorscheme=set312];\n");
        for v in 0..self.vertex_count() {
            match partition {
                Some(p) => {
                    let color = p.class_of(v) % 12 + 1;
                    let _ = writeln!(out, "  \"{}\" [fillcolor={color}];", self.labels[v]);
                }
                None => {
                    let _ = writeln!(out, "  \"{}\";", self.labels[v]);
                }
            }
        }
        for &(a, b) in &self.edges {
            let dashed = partition.is_some_and(|p| p.class_of(a) != p.class_of(b));
            let attrs = if dashed { " [style=dashed]" } else { "" };
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\"{attrs};",
                self.labels[a], self.labels[b]
            );
        }
        out.push_str("}\n");
        Ok(out)
    }
}

/// Disjoint cover of `0..n` by non-empty classes, held in canonical form:
/// members ascending, classes ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    classes: Vec<Vec<usize>>,
    membership: Vec<usize>,
}

impl Partition {
    /// Validates that `classes` exactly cover `0..n` and canonicalizes.
    pub fn new(n: usize, classes: Vec<Vec<usize>>) -> Result<Partition> {
        let mut membership = vec![usize::MAX; n];
        for class in &classes {
            if class.is_empty() {
                return Err(Error::InvalidArgument("empty partition class".into()));
            }
            for &v in class {
                if v >= n {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {v} out of range for {n} vertices"
                    )));
                }
                if membership[v] != usize::MAX {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {v} appears in two classes"
                    )));
                }
                membership[v] = 0;
            }
        }
        if let Some(v) = membership.iter().position(|&m| m == usize::MAX) {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} missing from partition"
            )));
        }
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        classes.sort_unstable_by_key(|c| c[0]);
        for (idx, class) in classes.iter().enumerate() {
            for &v in class {
                membership[v] = idx;
            }
        }
        Ok(Partition {
            n,
            classes,
            membership,
        })
    }

    /// Groups vertices by class id; ids may be arbitrary, order is ignored.
    pub fn from_membership(membership: &[usize]) -> Partition {
        let mut by_id: HashMap<usize, Vec<usize>> = HashMap::new();
        for (v, &id) in membership.iter().enumerate() {
            by_id.entry(id).or_default().push(v);
        }
        let classes: Vec<Vec<usize>> = by_id.into_values().collect();
        Partition::new(membership.len(), classes).expect("membership covers 0..n by construction")
    }

    /// One class per vertex.
    pub fn singletons(n: usize) -> Partition {
        Partition::from_membership(&(0..n).collect::<Vec<_>>())
    }

    /// Single class holding every vertex.
    pub fn whole(n: usize) -> Partition {
        Partition::from_membership(&vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.membership[v]
    }

    /// Stable text key: members joined by spaces, classes by `|`.
    /// Equal partitions always produce equal keys, so this doubles as an
    /// aggregation key.
    pub fn canonical_key(&self) -> String {
        let mut out = String::new();
        for (i, class) in self.classes.iter().enumerate() {
            if i > 0 {
                out.push('|');
            }
            for (j, v) in class.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{v}");
            }
        }
        out
    }

    /// True when every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.n == other.n
            && self
                .classes
                .iter()
                .all(|c| c.iter().all(|&v| other.class_of(v) == other.class_of(c[0])))
    }
}
