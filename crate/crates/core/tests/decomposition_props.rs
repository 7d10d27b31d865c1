use ftlabels::decomposition::{build_decomposition_tree, separates, validate_decomposition, DecompositionTree};
use ftlabels::generators::{gen_grid, gen_tri_disk, OrientationMode};
use ftlabels::planar_core::EmbeddedDigraph;
use ftlabels::reduction::build_layering;

fn check(dt: &DecompositionTree, g: &EmbeddedDigraph) {
    validate_decomposition(dt).unwrap();
    for p in &dt.pieces {
        if p.child_ids.len() == 2 {
            let a = &dt.pieces[p.child_ids[0]].interior;
            let b = &dt.pieces[p.child_ids[1]].interior;
            for &(x, y) in g.arcs() {
                let cross = (a.contains(&x) && b.contains(&y)) || (b.contains(&x) && a.contains(&y));
                assert!(!cross, "arc {x}->{y} crosses the separator of piece {}", p.piece_id);
            }
        }
        for &v in &p.boundary {
            assert!(dt.sep_piece[v] < p.piece_id);
        }
        for s in &p.segments {
            for i in s.lo..=s.hi {
                assert!(p.boundary.contains(&dt.paths[s.path_id].vertices[i]));
            }
        }
    }
    for path in &dt.paths {
        for w in path.vertices.windows(2) {
            assert!(g.out_arcs(w[0]).iter().any(|&a| g.arc(a).1 == w[1]), "path not directed");
        }
    }
    for v in 0..g.vertex_count() {
        for &p in &dt.closure[v] {
            if let Some(q) = dt.pieces[p].parent_id {
                assert!(dt.closure[v].contains(&q));
            }
        }
    }
}

fn run(g: &EmbeddedDigraph) -> usize {
    let (comps, _) = build_layering(g);
    let mut depth = 0;
    for c in &comps {
        let dt = build_decomposition_tree(c).unwrap();
        check(&dt, &c.graph);
        depth = depth.max(dt.depth());
    }
    depth
}

#[test]
fn small_grids_and_disks() {
    for seed in 0..40 {
        run(&gen_grid(7, 7, seed, OrientationMode::Random));
        run(&gen_tri_disk(50, seed));
        run(&gen_tri_disk(8, seed));
    }
}

#[test]
fn larger_grids() {
    for (w, seed) in [(16, 1), (32, 2)] {
        run(&gen_grid(w, w, seed, OrientationMode::Random));
        run(&gen_grid(w, w, seed, OrientationMode::Layered));
    }
    run(&gen_tri_disk(600, 3));
}

#[test]
fn separates_clauses() {
    let g = gen_grid(5, 5, 0, OrientationMode::Layered);
    let (comps, _) = build_layering(&g);
    let dt = build_decomposition_tree(&comps[0]).unwrap();
    let root = &dt.pieces[0];
    let s = root.separator[0];
    assert!(separates(&dt, 0, s, s).unwrap());
    if root.child_ids.len() == 2 {
        let a = dt.pieces[root.child_ids[0]].interior[0];
        let b = dt.pieces[root.child_ids[1]].interior[0];
        assert!(separates(&dt, 0, a, b).unwrap());
    }
}
