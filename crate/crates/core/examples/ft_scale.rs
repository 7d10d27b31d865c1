//! Build time and record counts at one size: `ft_scale grid|tri <n>`.

use std::time::Instant;

use ftlabels::ft_labels::{build_ft_labels_with_report, label_records};
use ftlabels::generators::{gen_grid, gen_tri_disk, OrientationMode};

fn main() {
    let a: Vec<String> = std::env::args().collect();
    let n: usize = a[2].parse().unwrap();
    let g = if a[1] == "grid" {
        let w = (n as f64).sqrt() as usize;
        gen_grid(w, n / w, 1, OrientationMode::Random)
    } else {
        gen_tri_disk(n, 1)
    };
    let t0 = Instant::now();
    let (ls, rep) = build_ft_labels_with_report(&g).unwrap();
    let recs: Vec<usize> = ls.labels.iter().map(label_records).collect();
    let max = recs.iter().max().unwrap();
    let mean = recs.iter().sum::<usize>() as f64 / recs.len() as f64;
    let (vi, _) = recs.iter().enumerate().max_by_key(|e| e.1).unwrap();
    for p in &ls.labels[vi].parts {
        for b in [&p.fwd, &p.rev] {
            let seg: usize = b.frontier.values().map(|m| m.len()).sum();
            let segf: usize = b.frontier.values().flat_map(|m| m.values()).map(|e| e.first.len() + e.funnels.len()).sum();
            println!("  nf {} sub {} last_in {} seg {seg} segvals {segf} close {} through {} vafter {} along {} afun {} athr {} avaf {} cl {}",
                b.nf.entries.len(), b.sub.values().map(|s| s.entries.len()).sum::<usize>(), b.last_in.len(),
                b.close.values().map(|m| m.len()).sum::<usize>(), b.through.len(), b.vafter.len(), b.along.len(), b.along_funnels.len(), b.along_through.len(), b.along_vafter.len(), p.closure.len());
        }
    }
    println!("n={} build {:?} wide {} max {max} mean {mean:.0}", g.vertex_count(), t0.elapsed(), rep.wide_funnels);
}
