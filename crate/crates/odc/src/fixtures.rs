//! Benchmark graphs. The karate club is bundled; the larger political
//! networks ship with no data files and are loaded from user-supplied edge
//! lists, validated against their published vertex counts.

use std::io::Cursor;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

const KARATE_EDGES: &str = include_str!("../data/karate.edges");

/// Expected vertex count for each named benchmark.
pub fn expected_vertices(name: &str) -> Option<usize> {
    match name {
        "karate" => Some(34),
        "books" => Some(105),
        "blogs" => Some(1222),
        _ => None,
    }
}

/// Zachary's karate club: 34 members, 78 ties.
pub fn karate() -> Graph {
    let g = Graph::load_edge_list(Cursor::new(KARATE_EDGES)).expect("bundled edge list parses");
    assert_eq!(g.vertex_count(), 34);
    assert_eq!(g.edge_count(), 78);
    g
}

/// Load a named benchmark from a user-supplied edge list, enforcing its
/// published vertex count (105 books, 1222 blogs, 34 karate members).
/// Directed duplicates collapse on ingestion, so a directed hyperlink list
/// comes out symmetrized.
pub fn load_named(name: &str, path: &Path) -> Result<Graph> {
    let expected = expected_vertices(name).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown benchmark {name:?}; known names: karate, books, blogs"
        ))
    })?;
    let g = Graph::load_edge_list_path(path)?;
    if g.vertex_count() != expected {
        return Err(Error::VertexCountMismatch {
            name: name.to_string(),
            expected,
            found: g.vertex_count(),
        });
    }
    Ok(g)
}
