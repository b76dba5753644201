use std::collections::VecDeque;

use super::{Side, TilingGraph};
use crate::error::{Error, Result};

/// Planar dual of a tensor-network graph.
///
/// The graph is closed off by one node per boundary leg and a ring joining
/// consecutive leg nodes. Faces of that augmented graph, minus the face
/// outside the ring, become dual nodes: nodes `0..N` are the gap faces (gap
/// `i` lies between boundary positions `i` and `i+1`), interior faces follow.
/// Arcs cross bulk edges only and are index-aligned with `TilingGraph::edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub n_nodes: usize,
    pub arcs: Vec<[usize; 2]>,
    pub gap_index: Vec<usize>,
    adj: Vec<Vec<usize>>,
    euler: i64,
}

struct Darts {
    // rotation position of each dart within its tail's rotation
    slot: Vec<usize>,
    tail: Vec<usize>,
    rot: Vec<Vec<usize>>,
}

impl Darts {
    // dart 2e and 2e+1 are the two orientations of undirected edge e
    fn twin(d: usize) -> usize {
        d ^ 1
    }

    fn next_in_face(&self, d: usize) -> usize {
        let t = Self::twin(d);
        let y = self.tail[t];
        let r = &self.rot[y];
        r[(self.slot[t] + r.len() - 1) % r.len()]
    }
}

impl DualGraph {
    pub fn new(g: &TilingGraph) -> Result<Self> {
        let rotation = g.rotation.as_ref().ok_or_else(|| Error::Embedding("graph has no rotation system".into()))?;
        g.validate()?;
        let nv = g.n_vertices();
        let n = g.n_legs();
        let leg_pos: std::collections::HashMap<usize, usize> =
            g.boundary_order.iter().enumerate().map(|(i, b)| (b.leg, i)).collect();

        // edges: bulk (e), leg (m + i), ring (m + n + i: leg node i -> i+1)
        let m = g.edges.len();
        let n_edges = m + 2 * n;
        let mut tail = vec![0; 2 * n_edges];
        let mut head = vec![0; 2 * n_edges];
        let mut set = |e: usize, a: usize, b: usize| {
            tail[2 * e] = a;
            head[2 * e] = b;
            tail[2 * e + 1] = b;
            head[2 * e + 1] = a;
        };
        for (e, &[u, v]) in g.edges.iter().enumerate() {
            set(e, u, v);
        }
        for (i, b) in g.boundary_order.iter().enumerate() {
            set(m + i, b.vertex, nv + i);
            set(m + n + i, nv + i, nv + (i + 1) % n);
        }

        let mut out_bulk: std::collections::HashMap<(usize, usize), usize> = std::collections::HashMap::new();
        for e in 0..m {
            for d in [2 * e, 2 * e + 1] {
                out_bulk.insert((tail[d], head[d]), d);
            }
        }
        let mut rot: Vec<Vec<usize>> = Vec::with_capacity(nv + n);
        for (v, sides) in rotation.iter().enumerate() {
            let mut r = Vec::with_capacity(sides.len());
            for s in sides {
                r.push(match *s {
                    Side::Neighbor { vertex } => *out_bulk
                        .get(&(v, vertex))
                        .ok_or_else(|| Error::Embedding(format!("rotation of {v} names non-edge to {vertex}")))?,
                    Side::Leg { leg } => 2 * (m + leg_pos[&leg]),
                });
            }
            rot.push(r);
        }
        for i in 0..n {
            // ring forward, leg back into the tensor, ring backward
            let back = 2 * (m + n + (i + n - 1) % n) + 1;
            rot.push(vec![2 * (m + n + i), 2 * (m + i) + 1, back]);
        }
        let mut slot = vec![usize::MAX; 2 * n_edges];
        for r in &rot {
            for (k, &d) in r.iter().enumerate() {
                if slot[d] != usize::MAX {
                    return Err(Error::Embedding(format!("dart {d} listed twice")));
                }
                slot[d] = k;
            }
        }
        if slot.contains(&usize::MAX) {
            return Err(Error::Embedding("rotation system misses a dart".into()));
        }
        let darts = Darts { slot, tail, rot };

        let mut face = vec![usize::MAX; 2 * n_edges];
        let mut n_faces = 0;
        for start in 0..2 * n_edges {
            if face[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            loop {
                face[d] = n_faces;
                d = darts.next_in_face(d);
                if d == start {
                    break;
                }
                if face[d] != usize::MAX {
                    return Err(Error::Embedding("face tracing did not close".into()));
                }
            }
            n_faces += 1;
        }

        let outer = if n > 0 { Some(face[2 * (m + n) + 1]) } else { None };
        let mut node_of_face = vec![usize::MAX; n_faces];
        let mut n_nodes = 0;
        let mut gap_index = Vec::with_capacity(n);
        for i in 0..n {
            let f = face[2 * (m + n + i)];
            if Some(f) == outer {
                return Err(Error::Embedding(format!("gap {i} lies on the outer face")));
            }
            if node_of_face[f] == usize::MAX {
                node_of_face[f] = n_nodes;
                n_nodes += 1;
            }
            gap_index.push(node_of_face[f]);
        }
        for (f, node) in node_of_face.iter_mut().enumerate() {
            if Some(f) != outer && *node == usize::MAX {
                *node = n_nodes;
                n_nodes += 1;
            }
        }
        let mut adj = vec![Vec::new(); n_nodes];
        let arcs: Vec<[usize; 2]> = (0..m)
            .map(|e| {
                let a = node_of_face[face[2 * e]];
                let b = node_of_face[face[2 * e + 1]];
                adj[a].push(b);
                adj[b].push(a);
                [a, b]
            })
            .collect();
        let euler = (nv + n) as i64 - n_edges as i64 + n_faces as i64;
        Ok(DualGraph { n_nodes, arcs, gap_index, adj, euler })
    }

    /// `V − E + F` of the augmented graph; 2 for a connected plane embedding.
    pub fn euler_characteristic(&self) -> i64 {
        self.euler
    }

    /// Number of non-gap dual nodes.
    pub fn n_interior(&self) -> usize {
        let mut gaps = self.gap_index.clone();
        gaps.sort_unstable();
        gaps.dedup();
        self.n_nodes - gaps.len()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adj[node]
    }

    /// Unweighted BFS distances from `source` (`usize::MAX` if unreachable).
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n_nodes];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Arc count of the shortest dual path between two boundary gaps.
    pub fn gap_distance(&self, gap_a: usize, gap_b: usize) -> Option<usize> {
        let d = self.distances_from(self.gap_index[gap_a])[self.gap_index[gap_b]];
        (d != usize::MAX).then_some(d)
    }

    /// Dual path between two gaps, choosing the smallest node id at every
    /// step back from the target.
    pub fn gap_path(&self, gap_a: usize, gap_b: usize) -> Option<Vec<usize>> {
        let (s, t) = (self.gap_index[gap_a], self.gap_index[gap_b]);
        let dist = self.distances_from(t);
        if dist[s] == usize::MAX {
            return None;
        }
        let mut path = vec![s];
        let mut x = s;
        while x != t {
            x = *self.adj[x].iter().filter(|&&y| dist[y] + 1 == dist[x]).min().expect("bfs layer");
            path.push(x);
        }
        Some(path)
    }
}

/// Free-function form of [`DualGraph::new`].
pub fn dual_graph(g: &TilingGraph) -> Result<DualGraph> {
    DualGraph::new(g)
}
