//! Pauli learning rates of binary tree circuits.
//!
//! A tree on `N = 2^T` qudits joins pairs of subtrees with Haar-random
//! two-qudit gates. After averaging, each subtree carries a two-component
//! replica vector ([`WVector`]) and two subtrees combine through [`fuse`].
//! Leaves are coarse-grained pairwise, `(2i, 2i+1)`: a pair touching the
//! support is particle-like, otherwise hole-like ([`leaf_vector`]).
//!
//! Besides the exact recursion this module provides an independent
//! brute-force entanglement-feature oracle ([`ef_bruteforce`]), the
//! contiguous-support series `Q(d)` and growth base `beta(d)`, the large-`d`
//! fusion algebra, and the comparison with optimal-depth shallow circuits.

use num_rational::BigRational;
use serde::Serialize;

use crate::cut::{CostMode, CutResult};
use crate::error::{Error, Result};
use crate::lambert::{lambert_w0, lambert_wm1};
use crate::replica::{gate_weight, PlrResult, Scalar, SupportMask, WVector};

/// Largest tree for which [`ef_bruteforce`] enumerates internal spins.
pub const MAX_BRUTEFORCE_LEAVES: usize = 16;

/// Default truncation tolerance of [`q_series`].
pub const Q_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSpec {
    n: usize,
    depth: u32,
    d: u32,
}

impl TreeSpec {
    pub fn new(n: usize, d: u32) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        if d < 2 {
            return Err(Error::InvalidParameter(format!("d must be >= 2, got {d}")));
        }
        Ok(Self { n, depth: n.trailing_zeros(), d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    fn check(&self, support: &SupportMask) -> Result<()> {
        if support.n() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, got: support.n() });
        }
        Ok(())
    }

    /// Whether coarse leaf `i` (qudits `2i`, `2i+1`) touches the support.
    fn coarse_particles(&self, support: &SupportMask) -> Vec<bool> {
        (0..self.n / 2).map(|i| support.contains(2 * i) || support.contains(2 * i + 1)).collect()
    }
}

/// Ratios `g_t = w_id / w_swap` along a fully occupied subtree.
#[derive(Debug, Clone, PartialEq)]
pub struct GSequence<T = f64> {
    pub terms: Vec<T>,
    pub d: u32,
}

/// Contiguous-support growth data: `||P||^2 ~ beta_norm^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaResult {
    pub q: f64,
    pub beta_norm: f64,
    pub beta_w: f64,
}

/// Large-`d` classification of a subtree by its dominant replica component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FusionLabel {
    /// swap component dominates
    Particle,
    /// identity component dominates
    Hole,
    /// both components of the same order
    Mixed,
}

impl FusionLabel {
    /// Fuses two labels; the flag marks a particle-hole fusion, which costs
    /// one extra power of `1/d`.
    pub fn fuse(self, other: FusionLabel) -> (FusionLabel, bool) {
        use FusionLabel::*;
        match (self, other) {
            (Particle, Hole) | (Hole, Particle) => (Mixed, true),
            (Particle, Particle) | (Particle, Mixed) | (Mixed, Particle) => (Particle, false),
            (Hole, Hole) | (Hole, Mixed) | (Mixed, Hole) => (Hole, false),
            (Mixed, Mixed) => (Mixed, false),
        }
    }
}

/// Single-qudit replica vector: `(-1, d) / (d^2 - 1)` inside the support,
/// `(1, 0)` outside.
pub fn qudit_vector<T: Scalar>(in_support: bool, d: u32) -> WVector<T> {
    if !in_support {
        return WVector::new(T::one(), T::zero());
    }
    let d = d as i64;
    WVector::new(T::ratio(-1, d * d - 1), T::ratio(d, d * d - 1))
}

/// Vector of a coarse-grained two-qudit leaf: `(-1, d^2) / (d^4 - 1)` when the
/// pair intersects the support, `(1, 0)` otherwise.
pub fn leaf_vector<T: Scalar>(intersects_support: bool, d: u32) -> WVector<T> {
    if !intersects_support {
        return WVector::new(T::one(), T::zero());
    }
    let d2 = (d as i64) * (d as i64);
    WVector::new(T::ratio(-1, d2 * d2 - 1), T::ratio(d2, d2 * d2 - 1))
}

/// Joins two subtrees under one gate.
pub fn fuse<T: Scalar>(left: &WVector<T>, right: &WVector<T>, d: u32) -> WVector<T> {
    fuse_with(left, right, &gate_weight::<T>(d))
}

fn fuse_with<T: Scalar>(l: &WVector<T>, r: &WVector<T>, a: &T) -> WVector<T> {
    let cross = a.clone() * (l.id.clone() * r.swap.clone() + l.swap.clone() * r.id.clone());
    WVector::new(l.id.clone() * r.id.clone() + cross.clone(), cross + l.swap.clone() * r.swap.clone())
}

/// Root vector of the whole tree in arbitrary arithmetic.
pub fn fold_tree<T: Scalar>(support: &SupportMask, spec: &TreeSpec) -> Result<WVector<T>> {
    spec.check(support)?;
    let a = gate_weight::<T>(spec.d);
    let mut level: Vec<WVector<T>> =
        spec.coarse_particles(support).into_iter().map(|p| leaf_vector(p, spec.d)).collect();
    while level.len() > 1 {
        level = level.chunks(2).map(|pair| fuse_with(&pair[0], &pair[1], &a)).collect();
    }
    Ok(level.pop().expect("tree has at least one coarse leaf"))
}

/// `(id, swap) * exp(ln_scale)` with `max(|id|, |swap|) = 1`.
#[derive(Debug, Clone, Copy)]
struct ScaledVector {
    id: f64,
    swap: f64,
    ln_scale: f64,
}

impl ScaledVector {
    fn new(v: WVector<f64>) -> Self {
        Self { id: v.id, swap: v.swap, ln_scale: 0.0 }.normalized()
    }

    fn normalized(mut self) -> Self {
        let m = self.id.abs().max(self.swap.abs());
        if m > 0.0 {
            self.id /= m;
            self.swap /= m;
            self.ln_scale += m.ln();
        }
        self
    }

    fn fuse(&self, other: &Self, a: f64) -> Self {
        let cross = a * (self.id * other.swap + self.swap * other.id);
        Self {
            id: self.id * other.id + cross,
            swap: cross + self.swap * other.swap,
            ln_scale: self.ln_scale + other.ln_scale,
        }
        .normalized()
    }
}

/// Pauli learning rate of a tree circuit for a Pauli operator supported on
/// `support`. Folds in scaled floating point, so large trees do not underflow.
pub fn plr_tree(support: &SupportMask, spec: &TreeSpec) -> Result<PlrResult> {
    spec.check(support)?;
    let a = gate_weight::<f64>(spec.d);
    let mut level: Vec<ScaledVector> = spec
        .coarse_particles(support)
        .into_iter()
        .map(|p| ScaledVector::new(leaf_vector(p, spec.d)))
        .collect();
    while level.len() > 1 {
        level = level.chunks(2).map(|pair| pair[0].fuse(&pair[1], a)).collect();
    }
    let root = level[0];
    let total = root.id + root.swap;
    if !(total > 0.0) {
        return Err(Error::NonPositiveRate(total));
    }
    Ok(PlrResult::from_ln_rate(total.ln() + root.ln_scale, spec.d))
}

/// Exact rational Pauli learning rate.
pub fn plr_tree_exact(support: &SupportMask, spec: &TreeSpec) -> Result<BigRational> {
    Ok(fold_tree::<BigRational>(support, spec)?.total())
}

/// Entanglement feature `W(B)` of the tree ensemble by direct enumeration of
/// all `2^(N-1)` internal permutation assignments.
///
/// Leaves in `b` carry the swap permutation, all others the identity. Every
/// internal node contributes `a` if its children differ, `1` if it agrees with
/// both, and `0` otherwise.
pub fn ef_bruteforce<T: Scalar>(b: &SupportMask, spec: &TreeSpec) -> Result<T> {
    spec.check(b)?;
    let n = spec.n;
    if n > MAX_BRUTEFORCE_LEAVES {
        return Err(Error::SizeCap { what: "tree", size: n, cap: MAX_BRUTEFORCE_LEAVES });
    }
    // heap layout: node 1 is the root, node i has children 2i and 2i+1,
    // leaves occupy n..2n
    let leaf_bits: u64 = b.sites().iter().fold(0, |acc, &s| acc | 1 << s);
    let mut counts = vec![0u64; n];
    for cfg in 0u64..1 << (n - 1) {
        let spin = |node: usize| -> u64 {
            if node >= n {
                leaf_bits >> (node - n) & 1
            } else {
                cfg >> (node - 1) & 1
            }
        };
        let mut mixed = 0;
        let mut alive = true;
        for node in 1..n {
            let (s, l, r) = (spin(node), spin(2 * node), spin(2 * node + 1));
            if l != r {
                mixed += 1;
            } else if s != l {
                alive = false;
                break;
            }
        }
        if alive {
            counts[mixed] += 1;
        }
    }
    let a = gate_weight::<T>(spec.d);
    Ok(counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(T::zero(), |acc, (j, &c)| acc + T::from_i64(c as i64) * a.powi(j as u32)))
}

/// g-sequence `g_0..g_{m-1}` and the depth-`m` vector for a support that
/// fills an aligned subtree of `k = 2^m` qudits.
pub fn contiguous_series<T: Scalar>(d: u32, m: u32) -> Result<(GSequence<T>, WVector<T>)> {
    if m < 1 || d < 2 {
        return Err(Error::InvalidParameter(format!("need m >= 1 and d >= 2 (m={m}, d={d})")));
    }
    let a = gate_weight::<T>(d);
    let two_a = T::from_i64(2) * a.clone();
    let mut g = T::ratio(-1, d as i64);
    let mut terms = Vec::with_capacity(m as usize);
    let mut v = qudit_vector::<T>(true, d);
    for _ in 0..m {
        terms.push(g.clone());
        g = g.clone() * (g.clone() + two_a.clone()) / (T::one() + two_a.clone() * g);
        v = fuse_with(&v, &v, &a);
    }
    Ok((GSequence { terms, d }, v))
}

/// One step of the ratio recursion `g -> g (g + 2a) / (1 + 2a g)`.
pub fn g_step(g: f64, d: u32) -> f64 {
    let two_a = 2.0 * gate_weight::<f64>(d);
    g * (g + two_a) / (1.0 + two_a * g)
}

/// `Q(d) = sum_i ln(1 + 2a g_i) / 2^(i+1)`.
///
/// Successive terms shrink by at least a factor of two (the weights halve and
/// `|g_i|` decreases), so the tail after a term is bounded by that term; the
/// sum stops at the first term below `tol`.
pub fn q_series(d: u32, tol: f64) -> Result<f64> {
    if d < 2 || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("need d >= 2 and tol > 0 (d={d}, tol={tol})")));
    }
    let two_a = 2.0 * gate_weight::<f64>(d);
    let mut g = -1.0 / d as f64;
    let mut weight = 0.5;
    let mut sum = 0.0;
    for _ in 0..4096 {
        let term = (two_a * g).ln_1p() * weight;
        sum += term;
        if term.abs() < tol {
            break;
        }
        g = g * (g + two_a) / (1.0 + two_a * g);
        weight *= 0.5;
    }
    Ok(sum)
}

pub fn beta(d: u32) -> Result<BetaResult> {
    let q = q_series(d, Q_TOLERANCE)?;
    let d = d as f64;
    let beta_norm = (d * d - 1.0) / (d * q.exp());
    Ok(BetaResult { q, beta_norm, beta_w: 1.0 / beta_norm })
}

/// Large-`d` exponent of the tree PLR from the fusion algebra:
/// `w ~ d^-(bdryC + bulkC)`.
///
/// `bdryC` is twice the number of particle-like coarse leaves and `bulkC`
/// counts particle-hole fusions.
pub fn tree_large_d_cuts(support: &SupportMask, spec: &TreeSpec) -> Result<CutResult> {
    spec.check(support)?;
    let particles = spec.coarse_particles(support);
    let bdry = 2 * particles.iter().filter(|&&p| p).count();
    let mut bulk = 0;
    let mut level: Vec<FusionLabel> = particles
        .into_iter()
        .map(|p| if p { FusionLabel::Particle } else { FusionLabel::Hole })
        .collect();
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| {
                let (label, cut) = pair[0].fuse(pair[1]);
                bulk += cut as usize;
                label
            })
            .collect();
    }
    Ok(CutResult { bdry, bulk, min: bdry + bulk, mode: CostMode::PerLeg })
}

/// A positive quantity stored by its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMagnitude {
    pub ln: f64,
}

impl LogMagnitude {
    /// Plain value; `+inf` once it leaves the `f64` range.
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    pub fn is_representable(&self) -> bool {
        self.value().is_finite()
    }
}

/// Reference squared shadow norm `k d^k` of an optimal-depth shallow circuit.
pub fn shallow_reference(k: u64, d: u32) -> Result<LogMagnitude> {
    if k < 1 {
        return Err(Error::InvalidParameter("support size must be >= 1".into()));
    }
    Ok(LogMagnitude { ln: (k as f64).ln() + k as f64 * (d as f64).ln() })
}

/// Natural log of the squared shadow norm of a support that fills a whole
/// tree of `2^m` qudits, evaluated in log space.
pub fn contiguous_ln_norm(d: u32, m: u32) -> f64 {
    let two_a = 2.0 * gate_weight::<f64>(d);
    let df = d as f64;
    let mut g = -1.0 / df;
    let mut ln_swap = (df / (df * df - 1.0)).ln();
    for _ in 0..m {
        ln_swap = 2.0 * ln_swap + (two_a * g).ln_1p();
        g = g * (g + two_a) / (1.0 + two_a * g);
    }
    -(ln_swap + g.ln_1p())
}

/// Crossover support sizes between tree and shallow circuits from the
/// closed form `k* = W(x) / x`, `x = Q(d) + ln(d^2 / (d^2 - 1))`.
///
/// Returns `(W_0(x)/x, W_{-1}(x)/x)`; the tree wins strictly between them.
pub fn crossover_kstar(d: u32) -> Result<(f64, f64)> {
    let x = crossover_argument(d)?;
    if !(x > -1.0 / std::f64::consts::E && x < 0.0) {
        return Err(Error::NoCrossover(x));
    }
    Ok((lambert_w0(x)? / x, lambert_wm1(x)? / x))
}

/// `x = Q(d) + ln(d^2 / (d^2 - 1))`.
pub fn crossover_argument(d: u32) -> Result<f64> {
    let q = q_series(d, 1e-15)?;
    let d2 = (d as f64).powi(2);
    Ok(q + (d2 / (d2 - 1.0)).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverRow {
    pub k: u64,
    pub ln_tree_norm: f64,
    pub ln_shallow_norm: f64,
    pub interpolated: bool,
}

impl CrossoverRow {
    pub fn tree_better(&self) -> bool {
        self.ln_tree_norm < self.ln_shallow_norm
    }
}

/// Tree versus shallow squared norms at `k = 2, 4, ..., k_max`. With
/// `interpolate`, every integer `k` in between is added with the tree norm
/// interpolated exponentially between the neighbouring powers of two.
pub fn crossover_table(d: u32, k_max: u64, interpolate: bool) -> Result<Vec<CrossoverRow>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d must be >= 2, got {d}")));
    }
    if k_max < 2 || !k_max.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(k_max as usize));
    }
    let exact: Vec<(u64, f64)> =
        (1..=k_max.trailing_zeros()).map(|m| (1u64 << m, contiguous_ln_norm(d, m))).collect();
    let mut rows = Vec::new();
    for (i, &(k, ln_tree)) in exact.iter().enumerate() {
        if interpolate && i > 0 {
            let (k0, ln0) = exact[i - 1];
            for kk in k0 + 1..k {
                let t = (kk - k0) as f64 / (k - k0) as f64;
                rows.push(CrossoverRow {
                    k: kk,
                    ln_tree_norm: ln0 + t * (ln_tree - ln0),
                    ln_shallow_norm: shallow_reference(kk, d)?.ln,
                    interpolated: true,
                });
            }
        }
        rows.push(CrossoverRow {
            k,
            ln_tree_norm: ln_tree,
            ln_shallow_norm: shallow_reference(k, d)?.ln,
            interpolated: false,
        });
    }
    Ok(rows)
}

/// Smallest `k = 2^m <= k_max` where the tree's exact contiguous squared norm
/// exceeds `k d^k`; `None` if the tree stays better up to `k_max`.
pub fn crossover_numeric(d: u32, k_max: u64) -> Result<Option<u64>> {
    Ok(crossover_table(d, k_max, false)?.into_iter().find(|r| !r.tree_better()).map(|r| r.k))
}
