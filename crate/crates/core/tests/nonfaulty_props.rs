use ftlabels::decomposition::build_decomposition_tree;
use ftlabels::generators::{gen_grid, gen_tri_disk, OrientationMode};
use ftlabels::nonfaulty_labels::{build_nonfaulty_labels, nf_query};
use ftlabels::planar_core::{reach_mask, EmbeddedDigraph};
use ftlabels::reduction::build_layering;

fn check(g: &EmbeddedDigraph) {
    let (comps, _) = build_layering(g);
    for c in &comps {
        let h = &c.graph;
        let dt = build_decomposition_tree(c).unwrap();
        let labels = build_nonfaulty_labels(h, &dt);
        let all = vec![true; h.vertex_count()];
        for u in 0..h.vertex_count() {
            let reach = reach_mask(h, &[u], &all, false);
            for v in 0..h.vertex_count() {
                assert_eq!(nf_query(&labels[u], &labels[v]), reach[v], "{u}->{v}");
            }
        }
    }
}

#[test]
fn nf_matches_reachability() {
    for seed in 0..30 {
        check(&gen_grid(7, 7, seed, OrientationMode::Random));
        check(&gen_tri_disk(50, seed));
    }
    check(&gen_grid(2, 2, 0, OrientationMode::Layered));
}
