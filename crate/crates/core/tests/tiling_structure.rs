use holoshadow::tiling::{boundary_sizes, dual_graph, generate_tiling, growth_rate, TilingGraph};

#[test]
fn json_roundtrip_is_byte_identical() {
    for (p, q, l) in [(3, 7, 3), (5, 4, 3)] {
        let g = generate_tiling(p, q, l).unwrap();
        let first = g.to_json();
        let back = TilingGraph::from_json(&first).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), first);
    }
    let dir = std::env::temp_dir().join(format!("holoshadow-rt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.json");
    let g = generate_tiling(3, 7, 2).unwrap();
    g.write_json(&path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    TilingGraph::read_json(&path).unwrap().write_json(&path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn euler_and_arc_counts() {
    for (p, q, layers) in [(3, 7, 5), (5, 4, 4)] {
        for l in 1..=layers {
            let g = generate_tiling(p, q, l).unwrap();
            let dual = dual_graph(&g).unwrap();
            assert_eq!(dual.euler_characteristic(), 2);
            assert_eq!(dual.arcs.len(), g.edges.len());
            assert_eq!(dual.n_nodes, g.n_legs() + dual.n_interior());
        }
    }
}

#[test]
fn interior_dual_nodes_have_degree_q() {
    // an interior dual face surrounds one tiling vertex with q tiles around it
    for (p, q) in [(3, 7), (5, 4)] {
        let g = generate_tiling(p, q, 4).unwrap();
        let dual = dual_graph(&g).unwrap();
        for node in g.n_legs()..dual.n_nodes {
            assert_eq!(dual.neighbors(node).len(), q, "{{{p},{q}}} node {node}");
        }
    }
}

#[test]
fn boundary_growth() {
    for (p, q) in [(3, 7), (5, 4)] {
        let sizes = boundary_sizes(p, q, 14).unwrap();
        assert!(sizes.windows(2).all(|w| w[1] > w[0]));
        let lambda = growth_rate(p, q).unwrap();
        for l in 6..14 {
            assert!(((sizes[l] as f64 / sizes[l - 1] as f64) / lambda - 1.0).abs() < 0.02);
        }
    }
}

#[test]
fn aligned_intervals_of_pentagons() {
    let g = generate_tiling(5, 4, 3).unwrap();
    let n = g.n_legs();
    let all = g.boundary_intervals(false);
    let aligned = g.boundary_intervals(true);
    assert_eq!(all.len(), n * (n - 1) + 1);
    assert!(aligned.len() < all.len());
    for mask in &aligned[1..] {
        // every owner of an aligned interval has all its legs inside
        for v in g.owners_of(mask).unwrap() {
            assert!(g.vertices[v].boundary_legs.iter().all(|&leg| mask.contains(leg)));
        }
    }
    // single-leg ownership makes the filter a no-op
    let g = generate_tiling(3, 7, 2).unwrap();
    assert!(g.leg_counts().iter().all(|&m| m <= 1));
    assert_eq!(g.boundary_intervals(true), g.boundary_intervals(false));
}
