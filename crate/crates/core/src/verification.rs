//! Brute-force oracle, differential checks, label statistics and timing.

use std::time::{Duration, Instant};

use crate::ft_labels::{label_records, LabelSet};
use crate::generators::SplitMix64;
use crate::planar_core::{reach_mask, EmbeddedDigraph};
use crate::query_engine::{ft_query, ft_query_counted};

/// Reachability from s to t in g minus f, by plain search.
pub fn oracle_reach(g: &EmbeddedDigraph, s: usize, t: usize, f: usize) -> bool {
    if s == f || t == f {
        return false;
    }
    if s == t {
        return true;
    }
    let mut allowed = vec![true; g.vertex_count()];
    allowed[f] = false;
    reach_mask(g, &[s], &allowed, false)[t]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub graph: String,
    pub s: usize,
    pub t: usize,
    pub f: usize,
    pub expected: bool,
    /// `None` when the query itself failed.
    pub got: Option<bool>,
}

#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub instances: usize,
    pub triples_checked: usize,
    pub mismatches: Vec<Mismatch>,
    pub max_label_records: usize,
    pub mean_label_records: f64,
    pub query_time: Duration,
}

impl Mismatch {
    /// Shell line that rebuilds the labels and repeats this one query.
    pub fn rerun_line(&self) -> String {
        let want = if self.expected { "reachable" } else { "unreachable" };
        format!(
            "ftlabels build --graph {g} --out {g}.pfl && ftlabels query --labels {g}.pfl -s {} -t {} -f {}  # expected {want}",
            self.s,
            self.t,
            self.f,
            g = self.graph
        )
    }
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Seeded distinct triples (s, t, f).
pub fn sample_triples(n: usize, count: usize, seed: u64) -> Vec<(usize, usize, usize)> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    if n < 3 {
        return out;
    }
    while out.len() < count {
        let s = rng.below(n as u64) as usize;
        let t = rng.below(n as u64) as usize;
        let f = rng.below(n as u64) as usize;
        if s != t && t != f && s != f {
            out.push((s, t, f));
        }
    }
    out
}

pub fn verify_labeling(g: &EmbeddedDigraph, labels: &LabelSet, mode: Mode, graph: &str) -> VerificationReport {
    let n = g.vertex_count();
    let mut rep = VerificationReport { instances: 1, ..Default::default() };
    let (mx, mean) = record_summary(labels);
    rep.max_label_records = mx;
    rep.mean_label_records = mean;
    let mut check = |s: usize, t: usize, f: usize, reach: &[bool]| {
        let t0 = Instant::now();
        let got = ft_query(&labels.labels[s], &labels.labels[t], &labels.labels[f]).ok();
        rep.query_time += t0.elapsed();
        rep.triples_checked += 1;
        if got != Some(reach[t]) {
            rep.mismatches.push(Mismatch { graph: graph.to_string(), s, t, f, expected: reach[t], got });
        }
    };
    match mode {
        Mode::Exhaustive => {
            for f in 0..n {
                let mut allowed = vec![true; n];
                allowed[f] = false;
                for s in (0..n).filter(|&s| s != f) {
                    let reach = reach_mask(g, &[s], &allowed, false);
                    for t in (0..n).filter(|&t| t != s && t != f) {
                        check(s, t, f, &reach);
                    }
                }
            }
        }
        Mode::Sampled { count, seed } => {
            for (s, t, f) in sample_triples(n, count, seed) {
                let mut allowed = vec![true; n];
                allowed[f] = false;
                let reach = reach_mask(g, &[s], &allowed, false);
                check(s, t, f, &reach);
            }
        }
    }
    rep
}

fn record_summary(labels: &LabelSet) -> (usize, f64) {
    let recs: Vec<usize> = labels.labels.iter().map(label_records).collect();
    let max = recs.iter().copied().max().unwrap_or(0);
    let mean = if recs.is_empty() { 0.0 } else { recs.iter().sum::<usize>() as f64 / recs.len() as f64 };
    (max, mean)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub n: usize,
    pub max_records: usize,
    pub mean_records: f64,
    pub max_bytes: usize,
}

pub fn label_statistics(labels: &LabelSet) -> StatsRow {
    let (max_records, mean_records) = record_summary(labels);
    let max_bytes = labels.labels.iter().map(|l| crate::cli_io::label_bytes(l).len()).max().unwrap_or(0);
    StatsRow { n: labels.vertex_count, max_records, mean_records, max_bytes }
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub queries: usize,
    pub total_time: Duration,
    pub mean_touched: f64,
    pub max_touched: usize,
    pub reachable: usize,
}

impl BenchReport {
    pub fn mean_time(&self) -> Duration {
        if self.queries == 0 {
            Duration::ZERO
        } else {
            self.total_time / self.queries as u32
        }
    }
}

/// Times seeded queries and records how many label records each one read.
pub fn bench(labels: &LabelSet, queries: usize, seed: u64) -> BenchReport {
    let triples = sample_triples(labels.vertex_count, queries, seed);
    let mut rep = BenchReport { queries: triples.len(), ..Default::default() };
    let mut sum = 0usize;
    for (s, t, f) in triples {
        let mut touched = 0;
        let t0 = Instant::now();
        let r = ft_query_counted(&labels.labels[s], &labels.labels[t], &labels.labels[f], &mut touched);
        rep.total_time += t0.elapsed();
        if r == Ok(true) {
            rep.reachable += 1;
        }
        sum += touched;
        rep.max_touched = rep.max_touched.max(touched);
    }
    if rep.queries > 0 {
        rep.mean_touched = sum as f64 / rep.queries as f64;
    }
    rep
}
