use ftlabels::generators::{gen_grid, gen_tri_disk, random_cofacial_path, OrientationMode};
use ftlabels::planar_core::{ArcEnd, EmbeddedDigraph};
use ftlabels::secondary_path_labels::*;

fn small(n: usize, arcs: &[(usize, usize)]) -> EmbeddedDigraph {
    let mut rot = vec![Vec::new(); n];
    for (i, &(x, y)) in arcs.iter().enumerate() {
        rot[x].push(ArcEnd::tail(i));
        rot[y].push(ArcEnd::head(i));
    }
    EmbeddedDigraph::new(n, arcs.to_vec(), rot).unwrap()
}

fn check_instance(g: &EmbeddedDigraph, path: &[usize]) {
    let all = vec![true; g.vertex_count()];
    let labs = build_secondary_labels(g, &all, path, 0);
    let da = build_detour_graph(g, &all, path, Variant::A);
    assert!(is_laminar(&da));
    for l in &labs {
        assert!(l.detour_a.chain.len() <= chain_bound(path.len()));
        assert!(l.detour_b.chain.len() <= chain_bound(path.len()));
        assert!(l.crossings.bypasses.len() <= 2 && l.crossings.byways.len() <= 2, "{:?}", l.crossings);
    }
    let k = path.len() as u32;
    for b in 0..k {
        for f in 0..k {
            if b == f {
                continue;
            }
            for t in [Target::BeforeF, Target::AfterF] {
                let got = sec_query_first(&labs[b as usize], &labs[f as usize], t).unwrap();
                assert_eq!(got, brute_first(g, &all, path, b, f, t), "b={b} f={f} {t:?} path={path:?}");
            }
            let v = if f < b { Variant::A } else { Variant::B };
            let aux = aux_first(&labs[b as usize], &labs[f as usize], v).unwrap();
            assert_eq!(Some(aux), brute_aux(g, &all, path, b, f, v), "aux b={b} f={f}");
            if f < b {
                assert_eq!(Some(aux), aux_in_detour_graph(path.len(), &da, b, f));
            }
        }
    }
}

#[test]
fn worked_examples() {
    // vertices 0..3 stand for 1..4
    let g = small(4, &[(0, 1), (1, 2), (2, 3), (3, 1)]);
    let p = [0, 1, 2, 3];
    let all = vec![true; 4];
    assert_eq!(build_detour_graph(&g, &all, &p, Variant::A), vec![Detour { u: 3, v: 1 }]);
    let labs = build_secondary_labels(&g, &all, &p, 0);
    assert_eq!(aux_first(&labs[2], &labs[0], Variant::A).unwrap(), 1);
    assert_eq!(sec_query_first(&labs[2], &labs[1], Target::AfterF).unwrap(), Some(2));
    assert_eq!(sec_query_first(&labs[2], &labs[1], Target::BeforeF).unwrap(), None);
    check_instance(&g, &p);

    let tri = small(3, &[(0, 1), (1, 2), (2, 0)]);
    let labs = build_secondary_labels(&tri, &[true; 3], &[0, 1, 2], 0);
    assert_eq!(sec_query_first(&labs[2], &labs[1], Target::BeforeF).unwrap(), Some(0));

    let way = small(3, &[(0, 1), (1, 2), (0, 2)]);
    let labs = build_secondary_labels(&way, &[true; 3], &[0, 1, 2], 0);
    assert_eq!(sec_query_first(&labs[0], &labs[1], Target::AfterF).unwrap(), Some(2));
    assert!(labs[1].crossings.bypasses.is_empty());
    assert_eq!(labs[1].crossings.byways.len(), 1);
}

#[test]
fn random_instances_match_search() {
    let mut done = 0;
    let mut total = 0;
    for seed in 0..150u64 {
        let g = if seed % 3 == 0 {
            gen_grid(7, 7, seed, OrientationMode::Random)
        } else if seed % 3 == 1 {
            gen_grid(9, 9, seed, OrientationMode::Layered)
        } else {
            gen_tri_disk(40, seed)
        };
        if let Some(p) = random_cofacial_path(&g, seed, 40) {
            check_instance(&g, &p);
            done += 1;
            total += p.len();
        }
    }
    assert!(done > 100);
    println!("{done} instances, mean path length {}", total / done);
}
