//! Failure-free reachability labels over separator paths.
//!
//! Every vertex stores, for each separator path of the pieces holding it,
//! the first path vertex it reaches and the last path vertex reaching it.

use std::collections::{BTreeMap, VecDeque};

use crate::decomposition::DecompositionTree;
use crate::planar_core::EmbeddedDigraph;

pub const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PathEntry {
    pub first: Option<u32>,
    pub last: Option<u32>,
    pub own: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NonFaultyLabel {
    pub vertex_id: usize,
    pub entries: BTreeMap<usize, PathEntry>,
}

/// Result of a first-reach sweep: per vertex the first path index reached
/// and the next vertex on the canonical route there (`NONE` if absent).
#[derive(Debug, Clone)]
pub struct Sweep {
    pub idx: Vec<u32>,
    pub next: Vec<u32>,
}

/// Sweeps path indices in order (ascending for `first`, descending for
/// `last`) and grows a search from each one over unassigned vertices of
/// `allowed`, expanding arcs by ascending id. `first` searches backwards.
pub fn sweep(g: &EmbeddedDigraph, allowed: &[bool], path: &[usize], first: bool) -> Sweep {
    sweep_general(g, allowed, path, first, false)
}

/// Like [`sweep`] for a path lying outside `allowed`: path vertices only
/// seed the search and are never assigned themselves.
pub fn sweep_outside(g: &EmbeddedDigraph, allowed: &[bool], path: &[usize], first: bool) -> Sweep {
    sweep_general(g, allowed, path, first, true)
}

fn sweep_general(g: &EmbeddedDigraph, allowed: &[bool], path: &[usize], first: bool, outside: bool) -> Sweep {
    let n = g.vertex_count();
    let mut idx = vec![NONE; n];
    let mut next = vec![NONE; n];
    let mut queue = VecDeque::new();
    let order: Vec<usize> = if first { (0..path.len()).collect() } else { (0..path.len()).rev().collect() };
    for i in order {
        let s = path[i];
        if !outside {
            if idx[s] != NONE || !allowed[s] {
                continue;
            }
            idx[s] = i as u32;
        }
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            let arcs = if first { g.in_arcs(v) } else { g.out_arcs(v) };
            for &a in arcs {
                let (x, y) = g.arc(a);
                let w = if first { x } else { y };
                if allowed[w] && idx[w] == NONE {
                    idx[w] = i as u32;
                    next[w] = v as u32;
                    queue.push_back(w);
                }
            }
        }
    }
    Sweep { idx, next }
}

fn opt(x: u32) -> Option<u32> {
    (x != NONE).then_some(x)
}

/// Labels over `g` restricted to `allowed`; `wanted[v]` lists the path ids stored at v.
pub fn build_labels_on(g: &EmbeddedDigraph, allowed: &[bool], paths: &[Vec<usize>], wanted: &[Vec<usize>]) -> Vec<NonFaultyLabel> {
    let n = g.vertex_count();
    let mut labels: Vec<NonFaultyLabel> = (0..n).map(|v| NonFaultyLabel { vertex_id: v, entries: BTreeMap::new() }).collect();
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); paths.len()];
    for (v, w) in wanted.iter().enumerate() {
        for &p in w {
            users[p].push(v);
        }
    }
    for (pid, path) in paths.iter().enumerate() {
        if users[pid].is_empty() {
            continue;
        }
        let f = sweep(g, allowed, path, true);
        let l = sweep(g, allowed, path, false);
        for &v in &users[pid] {
            let own = path.iter().position(|&x| x == v).map(|i| i as u32);
            labels[v].entries.insert(pid, PathEntry { first: opt(f.idx[v]), last: opt(l.idx[v]), own });
        }
    }
    labels
}

/// Labels for a component: each vertex stores the paths of every piece in its chain.
pub fn build_nonfaulty_labels(g: &EmbeddedDigraph, dt: &DecompositionTree) -> Vec<NonFaultyLabel> {
    let n = g.vertex_count();
    let paths: Vec<Vec<usize>> = dt.paths.iter().map(|p| p.vertices.clone()).collect();
    let wanted: Vec<Vec<usize>> = (0..n)
        .map(|v| dt.chain[v].iter().flat_map(|&p| dt.pieces[p].separator_path_ids.iter().copied()).collect())
        .collect();
    build_labels_on(g, &vec![true; n], &paths, &wanted)
}

/// Reachability from `a`'s vertex to `b`'s vertex.
pub fn nf_query(a: &NonFaultyLabel, b: &NonFaultyLabel) -> bool {
    if a.vertex_id == b.vertex_id {
        return true;
    }
    a.entries.iter().any(|(pid, ea)| match (ea.first, b.entries.get(pid).and_then(|eb| eb.last)) {
        (Some(f), Some(l)) => f <= l,
        _ => false,
    })
}
