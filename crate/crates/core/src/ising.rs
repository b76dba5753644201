//! Exhaustive Ising sums for the two-replica statistics of random tensor
//! networks.
//!
//! Each tensor carries a spin `σ_v = ±1` (identity or swap). With coupling
//! `J = ln(D_e)/2` and boundary field `h = ln(D_∂)/2` the weight of a
//! configuration is `e^{-E}`, `E = -J Σ σ_u σ_v - Σ_{v∈∂} h_v τ_v σ_v`. The
//! PLR pins every vertex owning a support leg to `-1`; the entanglement
//! feature flips the field sign `τ_v` inside a region.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cut::{bulk_cut_between, CostMode};
use crate::error::{Error, Result};
use crate::replica::{ModelParams, PlrResult, SupportMask};
use crate::tiling::TilingGraph;

/// Hard cap on enumerated vertices.
pub const MAX_VERTICES: usize = 24;

#[derive(Debug, Clone)]
pub struct SpinModel {
    graph: TilingGraph,
    params: ModelParams,
    mode: CostMode,
    offset: f64,
    adj: Vec<Vec<usize>>,
    mult: Vec<i64>,
}

impl SpinModel {
    /// `mode` sets the boundary field: `h` per boundary vertex or `m_v h`
    /// for a vertex with `m_v` legs.
    pub fn new(graph: &TilingGraph, params: ModelParams, mode: CostMode) -> Result<Self> {
        let nv = graph.n_vertices();
        if nv == 0 {
            return Err(Error::EmptyGraph);
        }
        if nv > MAX_VERTICES {
            return Err(Error::SizeCap { what: "spin model", size: nv, cap: MAX_VERTICES });
        }
        let mult = graph.leg_counts().into_iter().map(|m| mode.cost(m) as i64).collect();
        Ok(Self { graph: graph.clone(), params, mode, offset: 0.0, adj: graph.adjacency(), mult })
    }

    /// Adds a constant to every energy. Ratios are unaffected.
    pub fn with_energy_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn graph(&self) -> &TilingGraph {
        &self.graph
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn mode(&self) -> CostMode {
        self.mode
    }

    /// Same graph and mode at another dimension.
    pub fn with_params(&self, params: ModelParams) -> Self {
        Self { params, ..self.clone() }
    }

    /// Energy of a full assignment `vertex -> ±1`.
    pub fn energy(&self, config: &BTreeMap<usize, i8>) -> Result<f64> {
        let nv = self.graph.n_vertices();
        let mut spin = vec![0i64; nv];
        for (v, s) in spin.iter_mut().enumerate() {
            let x = *config.get(&v).ok_or(Error::MissingVertex(v))?;
            if x != 1 && x != -1 {
                return Err(Error::InvalidParameter(format!("spin of vertex {v} is {x}")));
            }
            *s = x as i64;
        }
        let bond: i64 = self.graph.edges.iter().map(|&[u, v]| spin[u] * spin[v]).sum();
        let field: i64 = (0..nv).map(|v| self.mult[v] * spin[v]).sum();
        Ok(-self.params.coupling() * bond as f64 - self.params.field() * field as f64 + self.offset)
    }

    /// `ln Σ e^{-E}` over configurations with `pinned` at `-1` and the field
    /// sign reversed on `flipped_field`.
    pub fn ln_partition(&self, pinned: &[usize], flipped_field: &[usize]) -> Result<f64> {
        let nv = self.graph.n_vertices();
        let mut spin = vec![1i64; nv];
        let mut tau = vec![1i64; nv];
        for &v in pinned {
            *spin.get_mut(v).ok_or(Error::MissingVertex(v))? = -1;
        }
        for &v in flipped_field {
            *tau.get_mut(v).ok_or(Error::MissingVertex(v))? = -1;
        }
        let free: Vec<usize> = (0..nv).filter(|&v| spin[v] == 1).collect();
        let field_w: Vec<i64> = (0..nv).map(|v| self.mult[v] * tau[v]).collect();

        let e_max = self.graph.edges.len() as i64;
        let f_max: i64 = self.mult.iter().sum();
        let width = (2 * f_max + 1) as usize;
        let mut hist = vec![0u64; (2 * e_max + 1) as usize * width];
        let mut bond: i64 = self.graph.edges.iter().map(|&[u, v]| spin[u] * spin[v]).sum();
        let mut field: i64 = (0..nv).map(|v| field_w[v] * spin[v]).sum();
        let bin = |b: i64, f: i64| (b + e_max) as usize * width + (f + f_max) as usize;
        hist[bin(bond, field)] += 1;
        // Gray code: step i flips the free vertex at the lowest set bit of i
        for i in 1u64..1 << free.len() {
            let v = free[i.trailing_zeros() as usize];
            let local: i64 = self.adj[v].iter().map(|&u| spin[u]).sum();
            bond -= 2 * spin[v] * local;
            field -= 2 * field_w[v] * spin[v];
            spin[v] = -spin[v];
            hist[bin(bond, field)] += 1;
        }

        let (j, h) = (self.params.coupling(), self.params.field());
        let terms: Vec<f64> = hist
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(idx, &c)| {
                let b = (idx / width) as i64 - e_max;
                let f = (idx % width) as i64 - f_max;
                (c as f64).ln() + j * b as f64 + h * f as f64 - self.offset
            })
            .collect();
        Ok(log_sum_exp(&terms))
    }

    /// Pinned-spin PLR: `Z[pinned]/Z`.
    pub fn plr_exact(&self, support: &SupportMask) -> Result<PlrResult> {
        let pinned = self.graph.owners_of(support)?;
        let ln_w = if pinned.is_empty() { 0.0 } else { self.ln_partition(&pinned, &[])? - self.ln_partition(&[], &[])? };
        Ok(PlrResult::from_ln_rate(ln_w, self.params.d()))
    }

    /// `Z[τ(region)]/Z[τ(∅)]` for a set of boundary vertices.
    pub fn entanglement_feature(&self, region: &[usize]) -> Result<f64> {
        Ok(self.ln_entanglement_feature(region)?.exp())
    }

    pub fn ln_entanglement_feature(&self, region: &[usize]) -> Result<f64> {
        if let Some(&v) = region.iter().find(|&&v| v >= self.graph.n_vertices() || self.mult[v] == 0) {
            return Err(Error::InvalidParameter(format!("vertex {v} is not a boundary vertex")));
        }
        if region.is_empty() {
            return Ok(0.0);
        }
        Ok(self.ln_partition(&[], region)? - self.ln_partition(&[], &[])?)
    }

    /// Minimum PLR over nonempty supports inside `region_legs` against
    /// `1/(d^|region|+1)`. The empty region passes.
    pub fn optimality_check(&self, region_legs: &SupportMask) -> Result<bool> {
        if region_legs.is_empty() {
            return Ok(true);
        }
        let mut min_w = f64::INFINITY;
        for sub in region_legs.subsets()?.skip(1) {
            min_w = min_w.min(self.plr_exact(&sub)?.w);
        }
        Ok(optimality_bound_holds(min_w, region_legs.len(), self.params.d()))
    }
}

/// `w <= 1/(d^k + 1)`.
pub fn optimality_bound_holds(min_w: f64, k: usize, d: u32) -> bool {
    min_w <= 1.0 / ((d as f64).powi(k as i32) + 1.0) * (1.0 + 1e-12)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenyiRow {
    pub d: u32,
    /// `-ln W / ln d`.
    pub renyi: f64,
    pub bulk: usize,
}

impl RenyiRow {
    pub fn gap(&self) -> f64 {
        (self.renyi - self.bulk as f64).abs()
    }
}

/// Second Rényi entropy in units of `ln d` for the vertices owning
/// `interval`, against the bulk wall separating them from the other
/// boundary vertices.
pub fn renyi_vs_cut(model: &SpinModel, interval: &SupportMask, d_list: &[u32]) -> Result<Vec<RenyiRow>> {
    let g = model.graph();
    let region = g.owners_of(interval)?;
    let outside: Vec<usize> = g.boundary_vertices().into_iter().filter(|v| !region.contains(v)).collect();
    let bulk = if region.is_empty() || outside.is_empty() { 0 } else { bulk_cut_between(g, &region, &outside)? };
    d_list
        .iter()
        .map(|&d| {
            let m = model.with_params(ModelParams::new(d)?);
            let ln_w = m.ln_entanglement_feature(&region)?;
            let renyi = if region.is_empty() { 0.0 } else { -ln_w / (d as f64).ln() };
            Ok(RenyiRow { d, renyi, bulk })
        })
        .collect()
}
