use ftlabels::cli_io::{build_hash, load_labels, parse_graph_file, run_cli, save_labels, serialize_graph, FormatError};
use ftlabels::ft_labels::build_ft_labels;
use ftlabels::generators::{gen_grid, gen_tri_disk, OrientationMode};
use ftlabels::planar_core::{ArcEnd, EmbeddedDigraph};
use ftlabels::verification::{sample_triples, verify_labeling, Mode};

fn corpus() -> Vec<EmbeddedDigraph> {
    let mut v = Vec::new();
    for seed in 0..6 {
        v.push(gen_grid(3 + seed as usize % 3, 4, seed, OrientationMode::Random));
        v.push(gen_tri_disk(8 + seed as usize, seed));
    }
    v.push(gen_grid(4, 4, 1, OrientationMode::Layered));
    v
}

fn triangle() -> EmbeddedDigraph {
    let arcs = vec![(0, 1), (1, 2), (2, 0)];
    let rot = vec![vec![ArcEnd::tail(0), ArcEnd::head(2)], vec![ArcEnd::tail(1), ArcEnd::head(0)], vec![ArcEnd::tail(2), ArcEnd::head(1)]];
    EmbeddedDigraph::new(3, arcs, rot).unwrap()
}

#[test]
fn graph_round_trip() {
    for g in corpus() {
        let text = serialize_graph(&g);
        assert_eq!(parse_graph_file(&text).unwrap(), g);
    }
}

#[test]
fn graph_errors_are_positioned() {
    let bad = "pfg 1\nn 3\na 0 1\na 1 7\n";
    match parse_graph_file(bad) {
        Err(FormatError::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_graph_file("pfg 2\nn 0\n"), Err(FormatError::Version { .. })));
}

#[test]
fn labels_round_trip_and_rebuild_identically() {
    for g in corpus() {
        let ls = build_ft_labels(&g).unwrap();
        let text = save_labels(&ls, &build_hash(&g));
        let (back, hash) = load_labels(&text, Some(&g)).unwrap();
        assert_eq!(back, ls);
        assert_eq!(hash, build_hash(&g));
        assert_eq!(save_labels(&back, &hash), text);
        let again = build_ft_labels(&g).unwrap();
        assert_eq!(save_labels(&again, &build_hash(&g)), text);
    }
}

#[test]
fn truncated_label_file_is_rejected() {
    let g = gen_grid(3, 3, 2, OrientationMode::Random);
    let text = save_labels(&build_ft_labels(&g).unwrap(), &build_hash(&g));
    let lines: Vec<&str> = text.lines().collect();
    for cut in [1, lines.len() / 2, lines.len() - 1] {
        let short = lines[..cut].join("\n");
        assert!(load_labels(&short, None).is_err(), "cut at {cut}");
    }
    assert!(matches!(load_labels(&lines[..lines.len() - 1].join("\n"), None), Err(FormatError::Truncated(_))));
}

#[test]
fn labels_against_wrong_graph() {
    let g = gen_grid(3, 3, 2, OrientationMode::Random);
    let h = gen_grid(3, 3, 5, OrientationMode::Random);
    let text = save_labels(&build_ft_labels(&g).unwrap(), &build_hash(&g));
    assert!(matches!(load_labels(&text, Some(&h)), Err(FormatError::HashMismatch { .. })));
}

#[test]
fn sampled_triples_are_deterministic() {
    assert_eq!(sample_triples(30, 200, 9), sample_triples(30, 200, 9));
    assert_ne!(sample_triples(30, 200, 9), sample_triples(30, 200, 10));
}

#[test]
fn small_layered_grid_verifies() {
    let g = gen_grid(2, 2, 0, OrientationMode::Layered);
    let ls = build_ft_labels(&g).unwrap();
    let rep = verify_labeling(&g, &ls, Mode::Exhaustive, "grid2x2");
    assert_eq!(rep.triples_checked, 24);
    assert!(rep.passed());
}

#[test]
fn corrupted_label_is_caught() {
    let g = gen_grid(4, 4, 3, OrientationMode::Random);
    let ls = build_ft_labels(&g).unwrap();
    let text = save_labels(&ls, &build_hash(&g));
    // flip stored indices one at a time until a query notices
    let lines: Vec<&str> = text.lines().collect();
    let mut caught = false;
    for (i, l) in lines.iter().enumerate() {
        let t = l.trim_start();
        if !t.starts_with("e ") {
            continue;
        }
        let mut f: Vec<String> = t.split(' ').map(String::from).collect();
        f[2] = match f[2].as_str() {
            "-" => "0".into(),
            _ => "-".into(),
        };
        let mut bad = lines.clone();
        let edited = format!("{}{}", &l[..l.len() - t.len()], f.join(" "));
        bad[i] = &edited;
        let (broken, _) = load_labels(&bad.join("\n"), None).unwrap();
        if !verify_labeling(&g, &broken, Mode::Exhaustive, "grid4x4").passed() {
            caught = true;
            break;
        }
    }
    assert!(caught);
}

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run_cli(std::iter::once("ftlabels").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn cli_triangle_query_and_determinism() {
    let dir = std::env::temp_dir().join(format!("ftlabels-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    std::fs::write(p("tri.pfg"), serialize_graph(&triangle())).unwrap();
    assert_eq!(run(&["build", "--graph", &p("tri.pfg"), "--out", &p("tri.pfl")]).0, 0);
    let (code, out) = run(&["query", "--labels", &p("tri.pfl"), "-s", "0", "-t", "2", "-f", "1"]);
    assert_eq!((code, out.as_str()), (0, "unreachable\n"));
    let (_, out) = run(&["query", "--labels", &p("tri.pfl"), "--graph", &p("tri.pfg"), "-s", "2", "-t", "1", "-f", "1"]);
    assert_eq!(out, "unreachable\n");
    let (_, out) = run(&["query", "--labels", &p("tri.pfl"), "-s", "1", "-t", "0", "-f", "2"]);
    assert_eq!(out, "unreachable\n");
    let (_, out) = run(&["query", "--labels", &p("tri.pfl"), "-s", "2", "-t", "1", "-f", "3"]);
    assert_eq!(out, "");

    for name in ["a.pfg", "b.pfg"] {
        assert_eq!(run(&["gen", "--family", "tri", "--n", "20", "--seed", "4", "--out", &p(name)]).0, 0);
    }
    assert_eq!(std::fs::read(p("a.pfg")).unwrap(), std::fs::read(p("b.pfg")).unwrap());
    assert_eq!(run(&["verify", "--graph", &p("a.pfg"), "--exhaustive"]).0, 0);
    assert_eq!(run(&["verify", "--graph", &p("a.pfg"), "--samples", "500", "--seed", "1"]).0, 0);
    assert_eq!(run(&["gen", "--family", "grid", "--bogus"]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn single_vertex_has_no_records() {
    let g = EmbeddedDigraph::new(1, Vec::new(), vec![Vec::new()]).unwrap();
    let ls = build_ft_labels(&g).unwrap();
    let row = ftlabels::verification::label_statistics(&ls);
    assert_eq!((row.n, row.max_records), (1, 0));
    assert_eq!(load_labels(&save_labels(&ls, &build_hash(&g)), Some(&g)).unwrap().0, ls);
}
