use ftlabels::ft_labels::build_ft_labels;
use ftlabels::generators::{gen_grid, gen_tri_disk, OrientationMode};
use ftlabels::planar_core::{reach_mask, EmbeddedDigraph};
use ftlabels::query_engine::ft_query;

fn check_all(g: &EmbeddedDigraph, name: &str) -> usize {
    let n = g.vertex_count();
    let ls = build_ft_labels(g).expect("build");
    let mut bad = 0;
    for f in 0..n {
        let mut allowed = vec![true; n];
        allowed[f] = false;
        for s in 0..n {
            if s == f {
                continue;
            }
            let reach = reach_mask(g, &[s], &allowed, false);
            for t in 0..n {
                if t == f || t == s {
                    continue;
                }
                let got = ft_query(&ls.labels[s], &ls.labels[t], &ls.labels[f]).unwrap_or_else(|e| panic!("{name} s={s} t={t} f={f}: {e}"));
                if got != reach[t] {
                    if bad < 5 {
                        eprintln!("{name}: s={s} t={t} f={f} want {} got {got}", reach[t]);
                    }
                    bad += 1;
                }
            }
        }
    }
    bad
}

#[test]
fn grids_match_oracle() {
    let mut bad = 0;
    for seed in 0..12 {
        let (w, h) = (3 + seed as usize % 4, 3 + (seed as usize / 4) % 4);
        bad += check_all(&gen_grid(w, h, seed, OrientationMode::Random), &format!("grid{w}x{h}/{seed}"));
    }
    assert_eq!(bad, 0);
}

#[test]
fn tri_disks_match_oracle() {
    let mut bad = 0;
    for seed in 0..12 {
        let n = 8 + 3 * seed as usize;
        bad += check_all(&gen_tri_disk(n, seed), &format!("tri{n}/{seed}"));
    }
    assert_eq!(bad, 0);
}

use ftlabels::decomposition::build_decomposition_tree;
use ftlabels::planar_core::{reverse_orientation, ArcEnd};
use ftlabels::query_engine::{corollary_first, resolve_context, Orientation};
use ftlabels::reduction::build_layering;

fn triangle() -> EmbeddedDigraph {
    // 0 -> 1 -> 2 -> 0
    let arcs = vec![(0, 1), (1, 2), (2, 0)];
    let rot = vec![vec![ArcEnd::tail(0), ArcEnd::head(2)], vec![ArcEnd::tail(1), ArcEnd::head(0)], vec![ArcEnd::tail(2), ArcEnd::head(1)]];
    EmbeddedDigraph::new(3, arcs, rot).unwrap()
}

#[test]
fn degenerate_and_triangle() {
    let g = triangle();
    let ls = build_ft_labels(&g).unwrap();
    let l = &ls.labels;
    assert!(!ft_query(&l[0], &l[2], &l[1]).unwrap());
    assert!(ft_query(&l[0], &l[0], &l[1]).unwrap());
    assert!(!ft_query(&l[0], &l[1], &l[1]).unwrap());
    assert!(!ft_query(&l[1], &l[0], &l[1]).unwrap());
    assert!(ft_query(&l[2], &l[1], &l[1]).is_ok_and(|r| !r));
    assert!(ft_query(&l[2], &l[1], &l[0]).unwrap() == false);
    assert!(ft_query(&l[1], &l[0], &l[2]).unwrap() == false);
    assert!(ft_query(&l[0], &l[1], &l[2]).unwrap());
}

#[test]
fn layered_two_by_two_all_triples() {
    let g = gen_grid(2, 2, 5, OrientationMode::Layered);
    assert_eq!(check_all(&g, "lgrid2x2"), 0);
}

#[test]
fn context_is_total_and_target_side_is_fault_free() {
    for seed in 0..6 {
        let g = gen_tri_disk(30, seed);
        let ls = build_ft_labels(&g).unwrap();
        for s in 0..30 {
            for t in 0..30 {
                for f in 0..30 {
                    if s == t || t == f || s == f {
                        continue;
                    }
                    let (ls_, lt, lf) = (&ls.labels[s], &ls.labels[t], &ls.labels[f]);
                    for ps in &ls_.parts {
                        let Some(pt) = lt.parts.iter().find(|p| p.component == ps.component) else { continue };
                        let Some(pf) = lf.parts.iter().find(|p| p.component == ps.component) else { continue };
                        let ctx = resolve_context(ps, pt, pf);
                        let y = if ctx.orientation == Orientation::Forward { pt } else { ps };
                        assert!(y.chain.contains(&ctx.hat_piece_id));
                        if let Some(h) = ctx.target_child_id {
                            assert!(!pf.chain.contains(&h));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn corollary_first_matches_restricted_search() {
    for seed in 0..8 {
        let g = if seed % 2 == 0 { gen_tri_disk(24 + seed as usize, seed) } else { gen_grid(5, 5, seed, OrientationMode::Random) };
        let ls = build_ft_labels(&g).unwrap();
        let (comps, _) = build_layering(&g);
        for c in &comps {
            let dt = build_decomposition_tree(c).unwrap();
            let n = c.graph.vertex_count();
            for reverse in [false, true] {
                let cg = if reverse { reverse_orientation(&c.graph) } else { c.graph.clone() };
                let part = |v: usize| ls.labels[c.global[v].unwrap()].parts.iter().find(|p| p.component == c.id).unwrap();
                for x in 0..n {
                    for f in 0..n {
                        if x == f || c.global[x].is_none() || c.global[f].is_none() {
                            continue;
                        }
                        let mut allowed = vec![true; n];
                        allowed[f] = false;
                        let reach = reach_mask(&cg, &[x], &allowed, false);
                        let common = dt.chain[x].iter().zip(&dt.chain[f]).take_while(|(a, b)| a == b).count();
                        for &h in &dt.chain[x][..common] {
                            for &pid in &dt.pieces[h].separator_path_ids {
                                let mut pv = dt.paths[pid].vertices.clone();
                                if pv.contains(&f) {
                                    continue;
                                }
                                if reverse {
                                    pv.reverse();
                                }
                                let want = pv.iter().position(|&v| reach[v]).map(|i| i as u32);
                                let got = corollary_first(part(x), part(f), pid, reverse).unwrap();
                                assert_eq!(got, want, "seed {seed} comp {} x {x} f {f} path {pid} reverse {reverse}", c.id);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn dispatch_entry_points_agree_with_ft_query() {
    use ftlabels::query_engine::{query_f_on_q, query_f_outside_q};
    let g = gen_tri_disk(18, 5);
    let ls = build_ft_labels(&g).unwrap();
    let n = g.vertex_count();
    for s in 0..n {
        for t in (0..n).filter(|&t| t != s) {
            for f in (0..n).filter(|&f| f != s && f != t) {
                let (ls_, lt, lf) = (&ls.labels[s], &ls.labels[t], &ls.labels[f]);
                let mut any = false;
                for ps in &ls_.parts {
                    let Some(pt) = lt.parts.iter().find(|p| p.component == ps.component) else { continue };
                    let Some(pf) = lf.parts.iter().find(|p| p.component == ps.component) else {
                        any |= ftlabels::nonfaulty_labels::nf_query(&ps.fwd.nf, &pt.fwd.nf);
                        continue;
                    };
                    let ctx = resolve_context(ps, pt, pf);
                    any |= if ctx.f_on_q { query_f_on_q(&ctx, ps, pt, pf) } else { query_f_outside_q(&ctx, ps, pt, pf) }.unwrap();
                }
                assert_eq!(any, ft_query(ls_, lt, lf).unwrap(), "s={s} t={t} f={f}");
            }
        }
    }
}
