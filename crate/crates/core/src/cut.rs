//! Minimal cuts on tensor-network graphs.
//!
//! At large bond dimension the PLR of a Pauli supported on boundary legs `A`
//! becomes `d^-minC(A)`, where `minC` is the cheapest domain wall separating
//! the pinned boundary vertices from the rest: bulk edges cut plus a
//! boundary cost for every flipped boundary vertex. Two independent solvers
//! are provided: BFS on the planar dual (contiguous intervals only) and an
//! exact max-flow over spin configurations.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maxflow::{FlowNetwork, INF};
use crate::replica::{PlrResult, SupportMask};
use crate::tiling::{DualGraph, TilingGraph};

/// Boundary cost of flipping a boundary vertex: one unit, or one per leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostMode {
    PerLeg,
    PerVertex,
}

impl CostMode {
    /// Cost of flipping a vertex owning `legs` boundary legs.
    pub fn cost(self, legs: usize) -> usize {
        match self {
            CostMode::PerLeg => legs,
            CostMode::PerVertex => usize::from(legs > 0),
        }
    }
}

impl fmt::Display for CostMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostMode::PerLeg => "per-leg",
            CostMode::PerVertex => "per-vertex",
        })
    }
}

impl FromStr for CostMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-leg" => Ok(CostMode::PerLeg),
            "per-vertex" => Ok(CostMode::PerVertex),
            _ => Err(Error::InvalidParameter(format!("unknown mode {s:?} (per-leg | per-vertex)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CutResult {
    pub bdry: usize,
    pub bulk: usize,
    pub min: usize,
    pub mode: CostMode,
}

/// Optimal cut together with the flipped (`-1`) vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutWitness {
    pub cut: CutResult,
    pub flipped: Vec<usize>,
}

/// Length in dual arcs of the shortest wall cutting `interval` off the rest
/// of the boundary. Empty and full intervals give 0.
pub fn bulk_geodesic(g: &TilingGraph, dual: &DualGraph, interval: &SupportMask) -> Result<usize> {
    g.check_support(interval)?;
    let (start, len) = interval.as_interval().ok_or(Error::NotContiguous)?;
    let n = g.n_legs();
    if len == 0 || len == n {
        return Ok(0);
    }
    dual.gap_distance((start + n - 1) % n, (start + len - 1) % n)
        .ok_or_else(|| Error::Embedding("interval endpoints are disconnected in the dual".into()))
}

/// Exact minimum of `#antialigned bulk edges + boundary cost of -1 vertices`
/// with `pinned` fixed at `-1`. The reported optimum flips the smallest
/// possible vertex set.
pub fn min_cut_exact(g: &TilingGraph, pinned: &[usize], mode: CostMode) -> Result<CutResult> {
    min_cut_witness(g, pinned, mode).map(|w| w.cut)
}

pub fn min_cut_witness(g: &TilingGraph, pinned: &[usize], mode: CostMode) -> Result<CutWitness> {
    let nv = g.n_vertices();
    if nv == 0 {
        return Err(Error::EmptyGraph);
    }
    let cost: Vec<usize> = g.leg_counts().into_iter().map(|m| mode.cost(m)).collect();
    let mut is_pinned = vec![false; nv];
    for &v in pinned {
        if v >= nv {
            return Err(Error::MissingVertex(v));
        }
        if cost[v] == 0 {
            return Err(Error::InvalidParameter(format!("pinned vertex {v} owns no boundary leg")));
        }
        is_pinned[v] = true;
    }
    let (s, t) = (nv, nv + 1);
    let mut net = FlowNetwork::new(nv + 2);
    for &[u, v] in &g.edges {
        net.add_edge(u, v, 1, 1);
    }
    // a pinned vertex's sink edge is saturated by the source directly, so
    // it is dropped and its cost added up front
    let mut base = 0;
    for v in 0..nv {
        if is_pinned[v] {
            net.add_edge(s, v, INF, 0);
            base += cost[v];
        } else if cost[v] > 0 {
            net.add_edge(v, t, cost[v] as i64, 0);
        }
    }
    let flow = if pinned.is_empty() { 0 } else { net.max_flow(s, t) as usize };
    let side = net.source_side(s);
    let flipped: Vec<usize> = (0..nv).filter(|&v| side[v] || is_pinned[v]).collect();
    let bdry: usize = flipped.iter().map(|&v| cost[v]).sum();
    let bulk = g.edges.iter().filter(|&&[u, v]| side[u] != side[v]).count();
    debug_assert_eq!(bdry + bulk, base + flow);
    Ok(CutWitness { cut: CutResult { bdry, bulk, min: bdry + bulk, mode }, flipped })
}

/// Fewest bulk edges separating `inside` from `outside` (no boundary cost).
pub fn bulk_cut_between(g: &TilingGraph, inside: &[usize], outside: &[usize]) -> Result<usize> {
    let nv = g.n_vertices();
    if nv == 0 {
        return Err(Error::EmptyGraph);
    }
    if let Some(&v) = inside.iter().chain(outside).find(|&&v| v >= nv) {
        return Err(Error::MissingVertex(v));
    }
    if inside.iter().any(|v| outside.contains(v)) {
        return Err(Error::InvalidParameter("a vertex is on both sides of the cut".into()));
    }
    let (s, t) = (nv, nv + 1);
    let mut net = FlowNetwork::new(nv + 2);
    for &[u, v] in &g.edges {
        net.add_edge(u, v, 1, 1);
    }
    for &v in inside {
        net.add_edge(s, v, INF, 0);
    }
    for &v in outside {
        net.add_edge(v, t, INF, 0);
    }
    Ok(net.max_flow(s, t) as usize)
}

/// Large-`d` PLR `d^-minC`, pinning every vertex that owns a leg of
/// `support`.
pub fn plr_large_d(g: &TilingGraph, support: &SupportMask, d: u32, mode: CostMode) -> Result<PlrResult> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d must be >= 2, got {d}")));
    }
    let pinned = g.owners_of(support)?;
    let min = min_cut_exact(g, &pinned, mode)?.min;
    let ln_d = (d as f64).ln();
    Ok(PlrResult { w: (-(min as f64) * ln_d).exp(), shadow_norm_sq: (min as f64 * ln_d).exp(), log_d_norm: min as f64 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub start: usize,
    pub k: usize,
    #[serde(rename = "bdryC")]
    pub bdry: usize,
    #[serde(rename = "bulkC")]
    pub bulk: usize,
    #[serde(rename = "minC")]
    pub min: usize,
    /// Dual geodesic for intervals made of whole vertices.
    #[serde(skip)]
    pub geodesic: Option<usize>,
}

/// Minimal cuts of every contiguous interval, ordered as
/// [`TilingGraph::interval_keys`].
///
/// Whenever the optimum flips exactly the pinned vertices, its bulk wall
/// separates the interval's vertices from the rest of the boundary and must
/// match the dual geodesic; a disagreement is reported as an error.
pub fn cut_sweep(g: &TilingGraph, mode: CostMode, vertex_aligned_only: bool) -> Result<Vec<SweepRow>> {
    let dual = DualGraph::new(g)?;
    let n = g.n_legs();
    let gap_dist: Vec<Vec<usize>> =
        (0..n).into_par_iter().map(|i| dual.distances_from(dual.gap_index[i])).collect();
    let cost: Vec<usize> = g.leg_counts().into_iter().map(|m| mode.cost(m)).collect();
    g.interval_keys(vertex_aligned_only)
        .into_par_iter()
        .map(|(start, len)| {
            let mask = SupportMask::interval(n, start, len)?;
            let pinned = g.owners_of(&mask)?;
            let cut = min_cut_exact(g, &pinned, mode)?;
            let geodesic = (len > 0 && g.is_vertex_aligned(start, len)).then(|| {
                let a = (start + n - 1) % n;
                gap_dist[a][dual.gap_index[(start + len - 1) % n]]
            });
            let pinned_cost: usize = pinned.iter().map(|&v| cost[v]).sum();
            if let Some(geo) = geodesic {
                if cut.bdry == pinned_cost && geo != cut.bulk {
                    return Err(Error::Embedding(format!(
                        "interval {start}:{len}: dual geodesic {geo} but max-flow wall {}",
                        cut.bulk
                    )));
                }
            }
            Ok(SweepRow { start, k: len, bdry: cut.bdry, bulk: cut.bulk, min: cut.min, geodesic })
        })
        .collect()
}

/// Half-boundary interval starting at position 0, rounded up to whole
/// boundary vertices.
pub fn half_boundary(g: &TilingGraph) -> SupportMask {
    let n = g.n_legs();
    let mut len = n / 2;
    while len < n && !g.is_vertex_aligned(0, len) {
        len += 1;
    }
    SupportMask::interval(n, 0, len).expect("in range")
}
