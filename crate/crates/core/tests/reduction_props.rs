use ftlabels::generators::*;
use ftlabels::planar_core::*;
use ftlabels::reduction::*;

fn reach_without(g: &EmbeddedDigraph, s: usize, f: Option<usize>) -> Vec<bool> {
    let mut allowed = vec![true; g.vertex_count()];
    if let Some(f) = f {
        allowed[f] = false;
    }
    reach_mask(g, &[s], &allowed, false)
}

fn check(g: &EmbeddedDigraph, faults: bool) {
    let n = g.vertex_count();
    let (comps, map) = build_layering(g);
    for c in &comps {
        let r = validate_embedding(&c.graph);
        assert!(r.ok, "{:?}", r);
        let m = c.graph.vertex_count();
        for u in 0..m {
            for v in 0..m {
                let runs = tree_path_decomposition(c, u, v).unwrap();
                for p in &runs {
                    assert!(p.is_directed_in(&c.graph));
                }
                if u == c.root {
                    assert!(runs.len() <= 2);
                }
            }
        }
    }
    for v in 0..n {
        assert!(!map.entries[v].is_empty() && map.entries[v].len() <= 2);
    }
    let fs: Vec<Option<usize>> = if faults { std::iter::once(None).chain((0..n).map(Some)).collect() } else { vec![None] };
    for &f in &fs {
        for s in 0..n {
            if Some(s) == f {
                continue;
            }
            let want = reach_without(g, s, f);
            let mut got = vec![false; n];
            for &(ci, ls) in &map.entries[s] {
                let c = &comps[ci];
                let mut allowed = vec![true; c.graph.vertex_count()];
                if let Some(f) = f {
                    if let Some(&lf) = c.local.get(&f) {
                        allowed[lf] = false;
                    }
                }
                let seen = reach_mask(&c.graph, &[ls], &allowed, false);
                for (lv, gv) in c.global.iter().enumerate() {
                    if let Some(gv) = gv {
                        got[*gv] |= seen[lv];
                    }
                }
            }
            assert_eq!(want, got, "s={} f={:?}", s, f);
        }
    }
}

#[test]
fn layering_preserves_reachability() {
    for s in 0..30 {
        check(&gen_grid(6, 5, s, OrientationMode::Random), s < 10);
        check(&gen_tri_disk(30, s), s < 10);
    }
    check(&gen_grid(4, 4, 0, OrientationMode::Layered), true);
}
