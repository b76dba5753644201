use std::collections::{BTreeMap, HashMap};

use super::{BoundaryLeg, Side, TilingGraph, Vertex};
use crate::error::{Error, Result};

/// Layer convention recorded in generated graph files.
pub const CONVENTION: &str = "vertex inflation; layer 1 is the central tile and layer l+1 completes every \
    frontier vertex to q tiles; a graph with L layers has L-1 rings, so the {3,7} half-boundary wall is 2(L-1)+1";

/// Largest boundary the generator will build.
pub const MAX_BOUNDARY: u128 = 2_000_000;

fn check_pq(p: usize, q: usize) -> Result<()> {
    if p < 3 || q < 3 || (p - 2) * (q - 2) <= 4 {
        return Err(Error::InvalidParameter(format!("{{{p},{q}}} is not hyperbolic")));
    }
    // vertex inflation needs at least two new tiles around every frontier
    // vertex; q = 3 leaves only one
    if q < 4 {
        return Err(Error::UnsupportedTiling { p, q });
    }
    Ok(())
}

/// Boundary leg counts `N(1..=layers)` from the layer-transfer rule, tracking
/// frontier vertices by how many tiles already meet them.
pub fn boundary_sizes(p: usize, q: usize, layers: usize) -> Result<Vec<u128>> {
    check_pq(p, q)?;
    let mut counts: BTreeMap<usize, u128> = BTreeMap::from([(1, p as u128)]);
    let mut sizes = Vec::with_capacity(layers);
    for layer in 1..=layers {
        sizes.push(counts.values().sum());
        if layer == layers {
            break;
        }
        let mut next: BTreeMap<usize, u128> = BTreeMap::new();
        for (&t, &c) in &counts {
            for (t_new, k) in frontier_offspring(p, q, t)? {
                *next.entry(t_new).or_default() += c * k as u128;
            }
        }
        counts = next;
    }
    Ok(sizes)
}

/// New frontier vertices attributed to one frontier vertex that already
/// meets `t` tiles, as `(tile count, multiplicity)`.
fn frontier_offspring(p: usize, q: usize, t: usize) -> Result<Vec<(usize, usize)>> {
    let n = q.checked_sub(t).filter(|&n| n >= if p == 3 { 3 } else { 2 }).ok_or(Error::UnsupportedTiling { p, q })?;
    Ok(if p == 3 {
        vec![(2, n - 3), (3, 1)]
    } else {
        vec![(2, n - 1), (1, (n - 2) * (p - 3) + (p - 4))]
    })
}

/// Dominant eigenvalue of the layer-transfer matrix by power iteration.
pub fn growth_rate(p: usize, q: usize) -> Result<f64> {
    check_pq(p, q)?;
    let types = [1usize, 2, 3];
    let mut v = [1.0f64, 0.0, 0.0];
    let mut lambda = 0.0;
    for _ in 0..500 {
        let mut next = [0.0; 3];
        for (i, &t) in types.iter().enumerate() {
            if v[i] == 0.0 {
                continue;
            }
            for (t_new, k) in frontier_offspring(p, q, t)? {
                next[t_new - 1] += v[i] * k as f64;
            }
        }
        let norm: f64 = next.iter().sum();
        lambda = norm / v.iter().sum::<f64>();
        v = next.map(|x| x / norm);
    }
    Ok(lambda)
}

/// Builds the `layers`-layer tensor network of the `{p,q}` tiling.
pub fn generate_tiling(p: usize, q: usize, layers: usize) -> Result<TilingGraph> {
    check_pq(p, q)?;
    if (p, q) != (3, 7) && (p, q) != (5, 4) {
        return Err(Error::UnsupportedTiling { p, q });
    }
    if layers < 1 {
        return Err(Error::InvalidParameter("layers must be >= 1".into()));
    }
    let expected = *boundary_sizes(p, q, layers)?.last().expect("layers >= 1");
    if expected > MAX_BOUNDARY {
        return Err(Error::SizeCap { what: "tiling boundary", size: expected.min(usize::MAX as u128) as usize, cap: MAX_BOUNDARY as usize });
    }
    let mut b = Builder::new(p, q);
    for layer in 2..=layers {
        b.inflate(layer)?;
    }
    b.finish(layers)
}

/// Tiling as a combinatorial map: tiles are counterclockwise cycles of
/// tiling-vertex ids, and the frontier is a counterclockwise cycle.
struct Builder {
    p: usize,
    q: usize,
    n_points: usize,
    tiles: Vec<Vec<usize>>,
    tile_layer: Vec<usize>,
    tiles_at: Vec<usize>,
    frontier: Vec<usize>,
}

impl Builder {
    fn new(p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            n_points: p,
            tiles: vec![(0..p).collect()],
            tile_layer: vec![1],
            tiles_at: vec![1; p],
            frontier: (0..p).collect(),
        }
    }

    fn point(&mut self) -> usize {
        self.n_points += 1;
        self.tiles_at.push(0);
        self.n_points - 1
    }

    fn points(&mut self, k: usize) -> Vec<usize> {
        (0..k).map(|_| self.point()).collect()
    }

    fn add_tile(&mut self, cycle: Vec<usize>, layer: usize) {
        debug_assert_eq!(cycle.len(), self.p);
        for &v in &cycle {
            self.tiles_at[v] += 1;
        }
        self.tiles.push(cycle);
        self.tile_layer.push(layer);
    }

    /// Completes the star of every frontier vertex. Around frontier vertex
    /// `v` the new tiles form a fan between rays `r_1..r_{n-1}`; consecutive
    /// fans share the tile sitting on the frontier edge between them.
    fn inflate(&mut self, layer: usize) -> Result<()> {
        let (p, q) = (self.p, self.q);
        let old = std::mem::take(&mut self.frontier);
        let m = old.len();
        let fan: Vec<usize> = old.iter().map(|&v| q.saturating_sub(self.tiles_at[v])).collect();
        if fan.iter().any(|&n| n < if p == 3 { 3 } else { 2 }) {
            return Err(Error::UnsupportedTiling { p, q });
        }
        // ray endpoints per frontier vertex; for triangles the outer rays are
        // the apexes of the edge tiles, shared with the neighbouring fans
        let rays: Vec<Vec<usize>> = if p == 3 {
            let apex = self.points(m);
            (0..m)
                .map(|i| {
                    let mut r = vec![apex[(i + m - 1) % m]];
                    r.extend(self.points(fan[i] - 3));
                    r.push(apex[i]);
                    r
                })
                .collect()
        } else {
            (0..m).map(|i| self.points(fan[i] - 1)).collect()
        };
        let mut frontier = Vec::new();
        for i in 0..m {
            let v = old[i];
            let r = &rays[i];
            for j in 0..r.len() {
                if !(p == 3 && j == 0) {
                    frontier.push(r[j]);
                }
                if j + 1 < r.len() {
                    let extras = self.points(p - 3);
                    frontier.extend(&extras);
                    let mut cycle = vec![v, r[j]];
                    cycle.extend(extras);
                    cycle.push(r[j + 1]);
                    self.add_tile(cycle, layer);
                }
            }
            let w = old[(i + 1) % m];
            let last = *r.last().expect("fan has rays");
            let cycle = if p == 3 {
                vec![v, last, w]
            } else {
                let extras = self.points(p - 4);
                frontier.extend(&extras);
                let mut c = vec![v, last];
                c.extend(extras);
                c.push(rays[(i + 1) % m][0]);
                c.push(w);
                c
            };
            self.add_tile(cycle, layer);
        }
        self.frontier = frontier;
        Ok(())
    }

    fn finish(self, layers: usize) -> Result<TilingGraph> {
        let p = self.p;
        let mut sides: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (t, cycle) in self.tiles.iter().enumerate() {
            for j in 0..p {
                let (a, b) = (cycle[j], cycle[(j + 1) % p]);
                sides.entry((a.min(b), a.max(b))).or_default().push(t);
            }
        }
        let m = self.frontier.len();
        let mut leg_at: HashMap<(usize, usize), usize> = HashMap::new();
        let mut boundary_order = Vec::with_capacity(m);
        for i in 0..m {
            let (a, b) = (self.frontier[i], self.frontier[(i + 1) % m]);
            let owners = &sides[&(a.min(b), a.max(b))];
            if owners.len() != 1 {
                return Err(Error::Embedding(format!("frontier edge ({a},{b}) borders {} tiles", owners.len())));
            }
            leg_at.insert((a, b), i);
            boundary_order.push(BoundaryLeg { leg: i, vertex: owners[0] });
        }
        let mut vertices: Vec<Vertex> = self
            .tile_layer
            .iter()
            .enumerate()
            .map(|(id, &layer)| Vertex { id, layer, boundary_legs: Vec::new() })
            .collect();
        for b in &boundary_order {
            vertices[b.vertex].boundary_legs.push(b.leg);
        }
        let mut edges = Vec::new();
        let mut rotation = Vec::with_capacity(self.tiles.len());
        for (t, cycle) in self.tiles.iter().enumerate() {
            let mut rot = Vec::with_capacity(p);
            for j in 0..p {
                let (a, b) = (cycle[j], cycle[(j + 1) % p]);
                let owners = &sides[&(a.min(b), a.max(b))];
                match owners.as_slice() {
                    [_] => {
                        let leg = *leg_at.get(&(a, b)).ok_or_else(|| {
                            Error::Embedding(format!("unshared side ({a},{b}) of tile {t} is not on the frontier"))
                        })?;
                        rot.push(Side::Leg { leg });
                    }
                    [x, y] => {
                        let other = if *x == t { *y } else { *x };
                        if t < other {
                            edges.push([t, other]);
                        }
                        rot.push(Side::Neighbor { vertex: other });
                    }
                    _ => return Err(Error::Embedding(format!("side ({a},{b}) borders {} tiles", owners.len()))),
                }
            }
            rotation.push(rot);
        }
        edges.sort_unstable();
        let g = TilingGraph {
            p,
            q: self.q,
            layers,
            vertices,
            edges,
            boundary_order,
            rotation: Some(rotation),
            convention: Some(CONVENTION.into()),
        };
        g.validate()?;
        Ok(g)
    }
}
