//! Shared replica-level types and the PLR / shadow-norm / entanglement-feature
//! conversions used by every other module.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest support for which the `2^k` subset sums are enumerated.
pub const MAX_SUBSET_SUPPORT: usize = 20;

/// Field arithmetic shared by the floating-point and exact-rational paths.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn powi(&self, exp: u32) -> Self {
        f64::powi(*self, exp as i32)
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Local dimension `d` together with the derived couplings.
///
/// The bulk and boundary bond dimensions default to `d`; they can be set
/// independently to study networks with unequal leg dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelParams {
    d: u32,
    bulk_dim: u32,
    boundary_dim: u32,
}

impl ModelParams {
    pub fn new(d: u32) -> Result<Self> {
        Self::with_dims(d, d, d)
    }

    pub fn with_dims(d: u32, bulk_dim: u32, boundary_dim: u32) -> Result<Self> {
        if d < 2 || bulk_dim < 2 || boundary_dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimensions must be >= 2 (d={d}, bulk={bulk_dim}, boundary={boundary_dim})"
            )));
        }
        Ok(Self { d, bulk_dim, boundary_dim })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn bulk_dim(&self) -> u32 {
        self.bulk_dim
    }

    pub fn boundary_dim(&self) -> u32 {
        self.boundary_dim
    }

    /// Gate weight `a = d / (d^2 + 1)`.
    pub fn a(&self) -> f64 {
        gate_weight::<f64>(self.d)
    }

    /// Ising coupling `J = ln(D_e) / 2`.
    pub fn coupling(&self) -> f64 {
        0.5 * (self.bulk_dim as f64).ln()
    }

    /// Boundary field `h = ln(D_boundary) / 2`.
    pub fn field(&self) -> f64 {
        0.5 * (self.boundary_dim as f64).ln()
    }
}

/// `a = d / (d^2 + 1)` in the requested arithmetic.
pub fn gate_weight<T: Scalar>(d: u32) -> T {
    let d = d as i64;
    T::ratio(d, d * d + 1)
}

/// Replica weights `(w_id, w_swap)` carried by a subtree: the contributions
/// with the identity or the swap permutation at the subtree root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WVector<T = f64> {
    pub id: T,
    pub swap: T,
}

impl<T: Scalar> WVector<T> {
    pub fn new(id: T, swap: T) -> Self {
        Self { id, swap }
    }

    pub fn total(&self) -> T {
        self.id.clone() + self.swap.clone()
    }

    pub fn to_f64(&self) -> WVector<f64> {
        WVector::new(self.id.to_f64(), self.swap.to_f64())
    }
}

/// Subset of the `n` boundary sites (tree leaves or tiling boundary legs).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SupportMask {
    n: usize,
    sites: Vec<usize>,
}

impl SupportMask {
    pub fn new(n: usize, sites: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut sites: Vec<usize> = sites.into_iter().collect();
        sites.sort_unstable();
        sites.dedup();
        if let Some(&site) = sites.iter().find(|&&s| s >= n) {
            return Err(Error::SiteOutOfRange { site, n });
        }
        Ok(Self { n, sites })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, sites: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self { n, sites: (0..n).collect() }
    }

    /// `len` consecutive sites starting at `start`, wrapping around the ring.
    pub fn interval(n: usize, start: usize, len: usize) -> Result<Self> {
        if len > n {
            return Err(Error::InvalidParameter(format!("interval of {len} sites on a ring of {n}")));
        }
        if n > 0 && start >= n {
            return Err(Error::SiteOutOfRange { site: start, n });
        }
        Self::new(n, (0..len).map(|i| (start + i) % n))
    }

    /// Bit `i` of `bits` selects site `i`.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n < 64 && bits >> n != 0 {
            return Err(Error::SiteOutOfRange { site: 63 - bits.leading_zeros() as usize, n });
        }
        Self::new(n, (0..n.min(64)).filter(|i| bits >> i & 1 == 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    pub fn complement(&self) -> Self {
        Self { n: self.n, sites: (0..self.n).filter(|&s| !self.contains(s)).collect() }
    }

    /// `(start, len)` when the support is one contiguous run on the ring.
    /// The empty support is `(0, 0)` and the full ring is `(0, n)`.
    pub fn as_interval(&self) -> Option<(usize, usize)> {
        let k = self.sites.len();
        if k == 0 {
            return Some((0, 0));
        }
        if k == self.n {
            return Some((0, k));
        }
        // exactly one site whose predecessor on the ring is absent
        let mut starts = self.sites.iter().filter(|&&s| !self.contains((s + self.n - 1) % self.n));
        let start = *starts.next()?;
        if starts.next().is_some() {
            return None;
        }
        Some((start, k))
    }

    /// All subsets in lexicographic order of the bitmask over this support.
    pub fn subsets(&self) -> Result<impl Iterator<Item = SupportMask> + '_> {
        let k = self.sites.len();
        if k > MAX_SUBSET_SUPPORT {
            return Err(Error::SupportTooLarge { size: k, cap: MAX_SUBSET_SUPPORT });
        }
        Ok((0u64..1 << k).map(move |bits| SupportMask {
            n: self.n,
            sites: (0..k).filter(|j| bits >> j & 1 == 1).map(|j| self.sites[j]).collect(),
        }))
    }
}

/// Pauli learning rate with its derived shadow norms.
///
/// `log_d_norm` is kept separately so rates far below `f64::MIN_POSITIVE`
/// still report a finite exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlrResult {
    pub w: f64,
    pub shadow_norm_sq: f64,
    pub log_d_norm: f64,
}

impl PlrResult {
    pub fn from_rate(w: f64, d: u32) -> Self {
        Self { w, shadow_norm_sq: 1.0 / w, log_d_norm: -w.ln() / (d as f64).ln() }
    }

    /// Builds the result from `ln w`.
    pub fn from_ln_rate(ln_w: f64, d: u32) -> Self {
        Self { w: ln_w.exp(), shadow_norm_sq: (-ln_w).exp(), log_d_norm: -ln_w / (d as f64).ln() }
    }
}

/// Squared shadow norm `1 / w`.
pub fn shadow_norm(w: f64) -> Result<f64> {
    if w > 0.0 {
        Ok(1.0 / w)
    } else {
        Err(Error::NonPositiveRate(w))
    }
}

/// PLR from entanglement features:
/// `(-1)^|A| / (d^2-1)^|A| * sum_{B ⊆ A} (-d)^|B| W(B)`.
///
/// `ef` is queried once per subset of `support`; returning `None` for any
/// subset is an error.
pub fn plr_from_ef<T, F>(support: &SupportMask, d: u32, mut ef: F) -> Result<T>
where
    T: Scalar,
    F: FnMut(&SupportMask) -> Option<T>,
{
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d must be >= 2, got {d}")));
    }
    let k = support.len() as u32;
    let minus_d = T::from_i64(-(d as i64));
    let mut sum = T::zero();
    for b in support.subsets()? {
        let weight = ef(&b).ok_or_else(|| Error::IncompleteOracle(b.sites().to_vec()))?;
        sum = sum + minus_d.powi(b.len() as u32) * weight;
    }
    let d = d as i64;
    let norm = T::from_i64(d * d - 1).powi(k);
    let sign = if k.is_multiple_of(2) { T::one() } else { -T::one() };
    Ok(sign * sum / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::ratio(num, den)
    }

    #[test]
    fn shadow_norm_reciprocal() {
        assert_eq!(shadow_norm(1.0).unwrap(), 1.0);
        assert!((shadow_norm(0.2).unwrap() - 5.0).abs() < 1e-12);
        assert!((shadow_norm(2.0 / 7.0).unwrap() - 3.5).abs() < 1e-12);
        assert_eq!(shadow_norm(0.0), Err(Error::NonPositiveRate(0.0)));
        assert!(shadow_norm(-1.0).is_err());
    }

    #[test]
    fn model_params_derived() {
        let m = ModelParams::new(2).unwrap();
        assert!((m.a() - 0.4).abs() < 1e-15);
        assert_eq!(m.coupling(), m.field());
        assert!(ModelParams::new(1).is_err());
        let m = ModelParams::with_dims(3, 4, 5).unwrap();
        assert!((m.coupling() - 0.5 * 4f64.ln()).abs() < 1e-15);
        assert!((m.field() - 0.5 * 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn plr_from_ef_identity() {
        let a = SupportMask::empty(4);
        let w: f64 = plr_from_ef(&a, 2, |_| Some(1.0)).unwrap();
        assert_eq!(w, 1.0);
    }

    #[test]
    fn plr_from_ef_one_gate() {
        // one two-qudit gate, support on one leaf: W(∅)=1, W(A)=2a
        for (d, wa, expected) in [(2, q(4, 5), q(1, 5)), (3, q(6, 10), q(1, 10))] {
            let a = SupportMask::new(2, [0]).unwrap();
            let mut ef = HashMap::new();
            ef.insert(SupportMask::empty(2), q(1, 1));
            ef.insert(a.clone(), wa);
            let w: BigRational = plr_from_ef(&a, d, |b| ef.get(b).cloned()).unwrap();
            assert_eq!(w, expected);
        }
    }

    #[test]
    fn plr_from_ef_missing_entry() {
        let a = SupportMask::new(3, [0, 2]).unwrap();
        let err = plr_from_ef::<f64, _>(&a, 2, |b| (b.len() < 2).then_some(1.0)).unwrap_err();
        assert_eq!(err, Error::IncompleteOracle(vec![0, 2]));
    }

    #[test]
    fn plr_from_ef_subset_cap() {
        let a = SupportMask::full(21);
        assert!(matches!(
            plr_from_ef::<f64, _>(&a, 2, |_| Some(1.0)),
            Err(Error::SupportTooLarge { size: 21, .. })
        ));
    }

    #[test]
    fn constant_and_maximally_mixed_features() {
        for k in 0..=8usize {
            let a = SupportMask::new(8, 0..k).unwrap();
            for d in [2u32, 3] {
                // W ≡ 1 gives the single-qudit random-basis rate (d+1)^-k
                let w: BigRational = plr_from_ef(&a, d, |_| Some(q(1, 1))).unwrap();
                assert_eq!(w, q(1, d as i64 + 1).powi(k as u32));
                // W(B) = d^-|B| annihilates every nonidentity Pauli
                let w: BigRational =
                    plr_from_ef(&a, d, |b| Some(q(1, d as i64).powi(b.len() as u32))).unwrap();
                assert_eq!(w, if k == 0 { q(1, 1) } else { q(0, 1) });
            }
        }
    }

    #[test]
    fn support_mask_basics() {
        let m = SupportMask::new(6, [4, 1, 4]).unwrap();
        assert_eq!(m.sites(), &[1, 4]);
        assert!(m.contains(4) && !m.contains(0));
        assert!(SupportMask::new(3, [3]).is_err());
        assert_eq!(SupportMask::interval(6, 4, 3).unwrap().sites(), &[0, 4, 5]);
        assert_eq!(SupportMask::interval(6, 4, 3).unwrap().as_interval(), Some((4, 3)));
        assert_eq!(SupportMask::new(6, [0, 2]).unwrap().as_interval(), None);
        assert_eq!(SupportMask::empty(6).as_interval(), Some((0, 0)));
        assert_eq!(SupportMask::full(6).as_interval(), Some((0, 6)));
        assert_eq!(SupportMask::from_bits(4, 0b1010).unwrap().sites(), &[1, 3]);
        assert!(SupportMask::from_bits(3, 0b1000).is_err());
        assert_eq!(m.complement().sites(), &[0, 2, 3, 5]);
    }

    #[test]
    fn subsets_are_lexicographic() {
        let m = SupportMask::new(5, [1, 3]).unwrap();
        let subs: Vec<Vec<usize>> = m.subsets().unwrap().map(|s| s.sites().to_vec()).collect();
        assert_eq!(subs, vec![vec![], vec![1], vec![3], vec![1, 3]]);
    }

    #[test]
    fn plr_result_consistency() {
        let r = PlrResult::from_rate(0.04, 5);
        assert!((r.shadow_norm_sq * r.w - 1.0).abs() < 1e-15);
        assert!((r.log_d_norm - 2.0).abs() < 1e-12);
        let r = PlrResult::from_ln_rate(-5000.0, 2);
        assert_eq!(r.w, 0.0);
        assert!((r.log_d_norm - 5000.0 / 2f64.ln()).abs() < 1e-9);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn shadow_norm_strictly_decreasing(a in 1e-6f64..1.0, b in 1e-6f64..1.0) {
                prop_assume!(a < b);
                prop_assert!(shadow_norm(a).unwrap() > shadow_norm(b).unwrap());
            }

            #[test]
            fn interval_roundtrip(n in 1usize..40, start in 0usize..40, len in 0usize..40) {
                prop_assume!(start < n && len <= n);
                let m = SupportMask::interval(n, start, len).unwrap();
                prop_assert_eq!(m.len(), len);
                let (s, l) = m.as_interval().unwrap();
                prop_assert_eq!(l, len);
                if len > 0 && len < n {
                    prop_assert_eq!(s, start);
                }
            }
        }
    }
}
