//! All-triples oracle check over a seed range: `stress_ft <from> <to>`.

use ftlabels::ft_labels::build_ft_labels_with_report;
use ftlabels::generators::{gen_grid, gen_tri_disk, OrientationMode};
use ftlabels::planar_core::reach_mask;
use ftlabels::query_engine::ft_query;

fn main() {
    let a: Vec<String> = std::env::args().collect();
    let from: u64 = a[1].parse().unwrap();
    let to: u64 = a[2].parse().unwrap();
    let mut wide = 0;
    for seed in from..to {
        let (name, g) = match seed % 3 {
            0 => (format!("tri{}", 10 + seed % 41), gen_tri_disk(10 + (seed % 41) as usize, seed)),
            1 => (format!("grid {} {}", 2 + seed % 6, 2 + (seed / 6) % 6), gen_grid(2 + (seed % 6) as usize, 2 + ((seed / 6) % 6) as usize, seed, OrientationMode::Random)),
            _ => (format!("lgrid {} {}", 3 + seed % 5, 3 + (seed / 5) % 5), gen_grid(3 + (seed % 5) as usize, 3 + ((seed / 5) % 5) as usize, seed, OrientationMode::Layered)),
        };
        let n = g.vertex_count();
        let (ls, rep) = build_ft_labels_with_report(&g).unwrap();
        wide += rep.wide_funnels;
        let mut bad = 0;
        for f in 0..n {
            let mut allowed = vec![true; n];
            allowed[f] = false;
            for s in 0..n {
                let reach = reach_mask(&g, &[s], &allowed, false);
                for t in 0..n {
                    let want = s != f && t != f && reach[t];
                    match ft_query(&ls.labels[s], &ls.labels[t], &ls.labels[f]) {
                        Ok(got) if got == want => {}
                        r => {
                            if bad < 3 {
                                println!("{name} seed {seed}: s={s} t={t} f={f} want {want} got {r:?}");
                            }
                            bad += 1;
                        }
                    }
                }
            }
        }
        if bad > 0 {
            println!("{name} seed {seed}: {bad} bad");
        }
    }
    println!("done, wide funnels {wide}");
}
