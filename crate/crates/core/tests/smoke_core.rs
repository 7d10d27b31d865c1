use ftlabels::generators::*;
use ftlabels::planar_core::*;

#[test]
fn generated_graphs_validate() {
    for s in 0..100 {
        let g = gen_grid(7, 7, s, OrientationMode::Random);
        let r = validate_embedding(&g);
        assert!(r.ok, "{:?}", r);
        assert_eq!(r.face_count, 2 + g.arc_count() - g.vertex_count());
    }
    for s in 0..50 {
        for n in [3, 4, 5, 20, 50] {
            let g = gen_tri_disk(n, s);
            let r = validate_embedding(&g);
            assert!(r.ok, "n={} s={} {:?}", n, s, r);
        }
    }
    let g = gen_grid(3, 3, 1, OrientationMode::Random);
    let inc = incise_along(&g, &[1]).unwrap();
    assert!(validate_embedding(&inc.graph).ok);
    // a cut path through the centre
    let cut: Vec<usize> = (0..g.arc_count()).filter(|&a| { let (x, y) = g.arc(a); (x.min(y), x.max(y)) == (3, 4) || (x.min(y), x.max(y)) == (4, 5) }).collect();
    let inc = incise_along(&g, &cut).unwrap();
    let r = validate_embedding(&inc.graph);
    assert!(r.ok, "{:?}", r);
    assert_eq!(inc.graph.vertex_count(), 10);
}
