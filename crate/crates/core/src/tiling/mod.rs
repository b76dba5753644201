//! Tensor-network graphs of `{p,q}` hyperbolic tilings.
//!
//! One tensor sits on every tile; tiles sharing a side are joined by a bulk
//! edge and every unshared side of an outer tile is a dangling boundary leg.
//! Graphs are grown by vertex inflation: layer 1 is a central `p`-gon and
//! layer `l+1` consists of all tiles touching a vertex of the layer-`l`
//! frontier, so every interior tiling vertex ends up with exactly `q` tiles.
//!
//! Boundary positions (the sites of a [`SupportMask`]) index
//! [`TilingGraph::boundary_order`], which runs counterclockwise.

mod dual;
mod generate;

pub use dual::{dual_graph, DualGraph};
pub use generate::{boundary_sizes, generate_tiling, growth_rate, CONVENTION, MAX_BOUNDARY};

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::replica::SupportMask;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub layer: usize,
    pub boundary_legs: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryLeg {
    pub leg: usize,
    pub vertex: usize,
}

/// One entry of a vertex's counterclockwise side list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Side {
    Neighbor { vertex: usize },
    Leg { leg: usize },
}

/// Planar tensor-network graph with ordered boundary legs.
///
/// Only combinatorics are stored. The bulk (measured) leg of each tensor
/// carries no edge. `rotation`, when present, lists every vertex's bulk edges
/// and legs in counterclockwise order and fixes the planar embedding needed
/// by [`DualGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingGraph {
    pub p: usize,
    pub q: usize,
    pub layers: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<[usize; 2]>,
    pub boundary_order: Vec<BoundaryLeg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<Side>>>,
    /// Free-form description of how the graph was built.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
}

impl TilingGraph {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Number of boundary legs `N`.
    pub fn n_legs(&self) -> usize {
        self.boundary_order.len()
    }

    /// Owner of the leg at boundary position `pos`.
    pub fn owner(&self, pos: usize) -> usize {
        self.boundary_order[pos].vertex
    }

    /// Number of legs per vertex.
    pub fn leg_counts(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v.boundary_legs.len()).collect()
    }

    /// Vertices owning at least one leg, in id order.
    pub fn boundary_vertices(&self) -> Vec<usize> {
        self.vertices.iter().filter(|v| !v.boundary_legs.is_empty()).map(|v| v.id).collect()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &[u, v] in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Vertices owning at least one leg of `support`, sorted.
    pub fn owners_of(&self, support: &SupportMask) -> Result<Vec<usize>> {
        self.check_support(support)?;
        let mut owners: Vec<usize> = support.sites().iter().map(|&s| self.owner(s)).collect();
        owners.sort_unstable();
        owners.dedup();
        Ok(owners)
    }

    pub fn check_support(&self, support: &SupportMask) -> Result<()> {
        if support.n() != self.n_legs() {
            return Err(Error::SizeMismatch { expected: self.n_legs(), got: support.n() });
        }
        Ok(())
    }

    /// Whether the boundary gap after position `pos` separates legs of
    /// different vertices.
    pub fn is_vertex_gap(&self, pos: usize) -> bool {
        let n = self.n_legs();
        self.owner(pos % n) != self.owner((pos + 1) % n)
    }

    /// True when a nonempty proper interval covers whole vertices only.
    pub fn is_vertex_aligned(&self, start: usize, len: usize) -> bool {
        let n = self.n_legs();
        len == 0 || len == n || (self.is_vertex_gap(start + n - 1) && self.is_vertex_gap(start + len - 1))
    }

    /// `(start, len)` keys of every contiguous interval: the empty interval
    /// first, then `start`-major, `len` in `1..N`.
    pub fn interval_keys(&self, vertex_aligned_only: bool) -> Vec<(usize, usize)> {
        let n = self.n_legs();
        let mut keys = vec![(0, 0)];
        for start in 0..n {
            for len in 1..n {
                if !vertex_aligned_only || self.is_vertex_aligned(start, len) {
                    keys.push((start, len));
                }
            }
        }
        keys
    }

    /// Checks ids, edges, leg ownership and (if present) the rotation system.
    pub fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return Err(Error::Format(format!("vertex at index {i} has id {}", v.id)));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for &[u, v] in &self.edges {
            if u >= nv || v >= nv || u == v {
                return Err(Error::Format(format!("bad edge [{u}, {v}]")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Format(format!("duplicate edge [{u}, {v}]")));
            }
        }
        let mut owner_of_leg = std::collections::HashMap::new();
        for b in &self.boundary_order {
            if b.vertex >= nv {
                return Err(Error::Format(format!("leg {} owned by unknown vertex {}", b.leg, b.vertex)));
            }
            if owner_of_leg.insert(b.leg, b.vertex).is_some() {
                return Err(Error::Format(format!("leg {} appears twice in boundary_order", b.leg)));
            }
        }
        let mut listed = 0;
        for v in &self.vertices {
            for leg in &v.boundary_legs {
                listed += 1;
                if owner_of_leg.get(leg) != Some(&v.id) {
                    return Err(Error::Format(format!("vertex {} lists leg {leg} it does not own", v.id)));
                }
            }
        }
        if listed != self.boundary_order.len() {
            return Err(Error::Format("vertex leg lists disagree with boundary_order".into()));
        }
        if let Some(rot) = &self.rotation {
            self.validate_rotation(rot)?;
        }
        Ok(())
    }

    fn validate_rotation(&self, rot: &[Vec<Side>]) -> Result<()> {
        if rot.len() != self.vertices.len() {
            return Err(Error::Embedding(format!("{} rotations for {} vertices", rot.len(), self.vertices.len())));
        }
        let adj = self.adjacency();
        for (v, sides) in rot.iter().enumerate() {
            let mut nbrs: Vec<usize> = sides
                .iter()
                .filter_map(|s| match s {
                    Side::Neighbor { vertex } => Some(*vertex),
                    Side::Leg { .. } => None,
                })
                .collect();
            let mut legs: Vec<usize> = sides
                .iter()
                .filter_map(|s| match s {
                    Side::Leg { leg } => Some(*leg),
                    Side::Neighbor { .. } => None,
                })
                .collect();
            let mut expected_nbrs = adj[v].clone();
            let mut expected_legs = self.vertices[v].boundary_legs.clone();
            nbrs.sort_unstable();
            legs.sort_unstable();
            expected_nbrs.sort_unstable();
            expected_legs.sort_unstable();
            if nbrs != expected_nbrs || legs != expected_legs {
                return Err(Error::Embedding(format!("rotation of vertex {v} does not match its edges and legs")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: Self = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        g.validate()?;
        Ok(g)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_json(&text)
    }

    /// Two triangles sharing one side, each with two boundary legs
    /// (vertex 0 owns legs 0 and 1, vertex 1 owns legs 2 and 3).
    pub fn two_triangles() -> Self {
        TilingGraph {
            p: 3,
            q: 7,
            layers: 1,
            vertices: vec![
                Vertex { id: 0, layer: 1, boundary_legs: vec![0, 1] },
                Vertex { id: 1, layer: 1, boundary_legs: vec![2, 3] },
            ],
            edges: vec![[0, 1]],
            boundary_order: vec![
                BoundaryLeg { leg: 0, vertex: 0 },
                BoundaryLeg { leg: 1, vertex: 0 },
                BoundaryLeg { leg: 2, vertex: 1 },
                BoundaryLeg { leg: 3, vertex: 1 },
            ],
            rotation: Some(vec![
                vec![Side::Leg { leg: 0 }, Side::Leg { leg: 1 }, Side::Neighbor { vertex: 1 }],
                vec![Side::Leg { leg: 2 }, Side::Leg { leg: 3 }, Side::Neighbor { vertex: 0 }],
            ]),
            convention: None,
        }
    }

    /// Contiguous intervals as support masks (see [`Self::interval_keys`]).
    pub fn boundary_intervals(&self, vertex_aligned_only: bool) -> Vec<SupportMask> {
        let n = self.n_legs();
        self.interval_keys(vertex_aligned_only)
            .into_iter()
            .map(|(s, l)| SupportMask::interval(n, s, l).expect("keys are in range"))
            .collect()
    }
}

/// Free-function form of [`TilingGraph::boundary_intervals`].
pub fn boundary_intervals(g: &TilingGraph, vertex_aligned_only: bool) -> Vec<SupportMask> {
    g.boundary_intervals(vertex_aligned_only)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_triangles_is_valid() {
        let g = TilingGraph::two_triangles();
        g.validate().unwrap();
        assert_eq!(g.n_legs(), 4);
        assert_eq!(g.boundary_vertices(), vec![0, 1]);
        assert!(g.is_vertex_gap(1) && g.is_vertex_gap(3));
        assert!(!g.is_vertex_gap(0));
    }

    #[test]
    fn json_schema_field_names() {
        let g = TilingGraph::two_triangles();
        let v: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
        for key in ["p", "q", "layers", "vertices", "edges", "boundary_order"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["vertices"][0]["boundary_legs"], serde_json::json!([0, 1]));
        assert_eq!(v["boundary_order"][2], serde_json::json!({"leg": 2, "vertex": 1}));
        assert_eq!(v["edges"], serde_json::json!([[0, 1]]));
    }

    #[test]
    fn reads_graph_without_rotation() {
        let text = r#"{"p":3,"q":7,"layers":1,"vertices":[{"id":0,"layer":1,"boundary_legs":[0,1,2]}],
            "edges":[],"boundary_order":[{"leg":0,"vertex":0},{"leg":1,"vertex":0},{"leg":2,"vertex":0}]}"#;
        let g = TilingGraph::from_json(text).unwrap();
        assert!(g.rotation.is_none());
        assert_eq!(g.n_legs(), 3);
    }

    #[test]
    fn rejects_inconsistent_files() {
        let mut g = TilingGraph::two_triangles();
        g.edges.push([1, 0]);
        assert!(g.validate().is_err());
        let mut g = TilingGraph::two_triangles();
        g.vertices[0].boundary_legs = vec![0];
        assert!(g.validate().is_err());
        let mut g = TilingGraph::two_triangles();
        g.rotation.as_mut().unwrap()[0].pop();
        assert!(matches!(g.validate(), Err(Error::Embedding(_))));
        assert!(TilingGraph::from_json("{").is_err());
    }

    #[test]
    fn interval_counts() {
        let g = TilingGraph::two_triangles();
        assert_eq!(g.boundary_intervals(false).len(), 4 * 3 + 1);
        let aligned = g.boundary_intervals(true);
        // empty, {0,1} and {2,3}
        assert_eq!(aligned.len(), 3);
        assert!(aligned.iter().all(|m| m.len() % 2 == 0));
    }
}
