use holoshadow::replica::plr_from_ef;
use holoshadow::tree::{ef_bruteforce, plr_tree, plr_tree_exact, tree_large_d_cuts, TreeSpec};
use holoshadow::SupportMask;
use num_rational::BigRational;
use proptest::prelude::*;

fn all_masks(n: usize) -> impl Iterator<Item = SupportMask> {
    (0u64..1 << n).map(move |bits| SupportMask::from_bits(n, bits).unwrap())
}

#[test]
fn recursion_matches_enumeration_float() {
    for n in [4, 8] {
        for d in [2, 3] {
            let spec = TreeSpec::new(n, d).unwrap();
            for mask in all_masks(n) {
                let fast = plr_tree(&mask, &spec).unwrap().w;
                let slow: f64 = plr_from_ef(&mask, d, |b| ef_bruteforce::<f64>(b, &spec).ok()).unwrap();
                assert!((fast - slow).abs() <= 1e-12 * fast, "n={n} d={d} {:?}: {fast} vs {slow}", mask.sites());
            }
        }
    }
}

#[test]
fn recursion_matches_enumeration_exact() {
    for d in [2, 3] {
        let spec = TreeSpec::new(8, d).unwrap();
        for mask in all_masks(8) {
            let fast = plr_tree_exact(&mask, &spec).unwrap();
            let slow: BigRational = plr_from_ef(&mask, d, |b| ef_bruteforce::<BigRational>(b, &spec).ok()).unwrap();
            assert_eq!(fast, slow, "d={d} {:?}", mask.sites());
        }
    }
}

#[test]
fn leading_exponent_is_the_cut() {
    let spec = TreeSpec::new(8, 64).unwrap();
    for mask in all_masks(8) {
        let exponent = plr_tree(&mask, &spec).unwrap().log_d_norm;
        let cut = tree_large_d_cuts(&mask, &spec).unwrap();
        assert!((exponent - cut.min as f64).abs() <= 0.3, "{:?}: {exponent} vs {}", mask.sites(), cut.min);
    }
}

// swapping the children of the node at `level` above the leaves, index `node`
fn swap_subtrees(mask: &SupportMask, level: u32, node: usize) -> SupportMask {
    let half = 1usize << level;
    let base = node * 2 * half;
    let sites = mask.sites().iter().map(|&s| {
        if s >= base && s < base + 2 * half {
            base + (s - base + half) % (2 * half)
        } else {
            s
        }
    });
    SupportMask::new(mask.n(), sites).unwrap()
}

proptest! {
    #[test]
    fn subtree_exchange_symmetry(bits in 0u64..1 << 16, level in 0u32..4, node in 0usize..8, d in 2u32..8) {
        let n = 16;
        let spec = TreeSpec::new(n, d).unwrap();
        let mask = SupportMask::from_bits(n, bits).unwrap();
        let node = node % (n >> (level + 1));
        let swapped = swap_subtrees(&mask, level, node);
        prop_assert_eq!(plr_tree_exact(&mask, &spec).unwrap(), plr_tree_exact(&swapped, &spec).unwrap());
    }

    #[test]
    fn rates_lie_in_unit_interval(bits in 1u64..1 << 16, d in 2u32..50) {
        let spec = TreeSpec::new(16, d).unwrap();
        let w = plr_tree(&SupportMask::from_bits(16, bits).unwrap(), &spec).unwrap().w;
        prop_assert!(w > 0.0 && w < 1.0);
    }

    #[test]
    fn float_fold_tracks_exact(bits in 0u64..1 << 16, d in 2u32..20) {
        let spec = TreeSpec::new(16, d).unwrap();
        let mask = SupportMask::from_bits(16, bits).unwrap();
        let exact = plr_tree_exact(&mask, &spec).unwrap();
        let exact = num_traits::ToPrimitive::to_f64(&exact).unwrap();
        let w = plr_tree(&mask, &spec).unwrap().w;
        prop_assert!((w - exact).abs() <= 1e-12 * exact);
    }
}
