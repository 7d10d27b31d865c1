//! Labels for the vertices of one directed path P: from the labels of b and f
//! alone, find the first P-vertex before f and after f that b reaches in G - f.
//!
//! Indices are positions on P. All searches run inside an `allowed` mask.

use std::collections::VecDeque;

use thiserror::Error;

use crate::planar_core::{face_walks, EmbeddedDigraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SecondaryError {
    #[error("labels belong to paths {0} and {1}")]
    DifferentPaths(usize, usize),
    #[error("b={0} and f={1} violate the order required by variant {2:?}")]
    Order(u32, u32, Variant),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    BeforeF,
    AfterF,
}

/// A returning jump from the later index `u` to the earlier index `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Detour {
    pub u: u32,
    pub v: u32,
}

impl Detour {
    pub fn size(&self) -> u32 {
        self.u - self.v
    }

    pub fn contains(&self, x: u32) -> bool {
        self.v <= x && x <= self.u
    }

    pub fn contains_detour(&self, d: &Detour) -> bool {
        self.v <= d.v && d.u <= self.u
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DetourSystem {
    pub chain: Vec<(Detour, Option<Detour>)>,
}

/// An excursion leaving P at `from` and returning at `to`, internally
/// disjoint from P, with the first P-vertex before (`plus`) and after
/// (`minus`) f reachable in G - f from its endpoint after f.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub from: u32,
    pub to: u32,
    pub plus: Option<u32>,
    pub minus: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CrossingRecords {
    /// Maximal excursions from after f to before f.
    pub bypasses: Vec<Crossing>,
    /// Minimal excursions from before f to after f.
    pub byways: Vec<Crossing>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondaryLabel {
    pub path_id: usize,
    pub own_idx: u32,
    pub detour_a: DetourSystem,
    pub detour_b: DetourSystem,
    pub crossings: CrossingRecords,
}

/// Path-index lookup: `pos[v]` is v's index on P or `u32::MAX`.
fn positions(n: usize, path: &[usize]) -> Vec<u32> {
    let mut pos = vec![u32::MAX; n];
    for (i, &v) in path.iter().enumerate() {
        pos[v] = i as u32;
    }
    pos
}

/// Search from `src` over allowed vertices; `enter(i)` decides whether a
/// P-vertex of index i may be entered. Returns the P-indices reached.
fn search(g: &EmbeddedDigraph, allowed: &[bool], pos: &[u32], src: usize, backward: bool, enter: &dyn Fn(u32) -> bool, mark: &mut Vec<bool>) -> Vec<u32> {
    let mut hit = Vec::new();
    let mut queue = VecDeque::from(vec![src]);
    let mut touched = vec![src];
    mark[src] = true;
    if pos[src] != u32::MAX {
        hit.push(pos[src]);
    }
    while let Some(v) = queue.pop_front() {
        let arcs = if backward { g.in_arcs(v) } else { g.out_arcs(v) };
        for &a in arcs {
            let (x, y) = g.arc(a);
            let w = if backward { x } else { y };
            if !allowed[w] || mark[w] {
                continue;
            }
            if pos[w] != u32::MAX {
                if !enter(pos[w]) {
                    continue;
                }
                hit.push(pos[w]);
            }
            mark[w] = true;
            touched.push(w);
            queue.push_back(w);
        }
    }
    for v in touched {
        mark[v] = false;
    }
    hit
}

/// Variant A: for each v the largest u with a u-to-v path touching no
/// P-vertex before v. Variant B: for each u the smallest v reachable from u
/// touching no P-vertex after u.
pub fn build_detour_graph(g: &EmbeddedDigraph, allowed: &[bool], path: &[usize], variant: Variant) -> Vec<Detour> {
    let pos = positions(g.vertex_count(), path);
    let mut mark = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for i in 0..path.len() as u32 {
        match variant {
            Variant::A => {
                let hit = search(g, allowed, &pos, path[i as usize], true, &|j| j >= i, &mut mark);
                if let Some(&u) = hit.iter().max() {
                    if u > i {
                        out.push(Detour { u, v: i });
                    }
                }
            }
            Variant::B => {
                let hit = search(g, allowed, &pos, path[i as usize], false, &|j| j <= i, &mut mark);
                if let Some(&v) = hit.iter().min() {
                    if v < i {
                        out.push(Detour { u: i, v });
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// No (u,v),(w,x) with v < x < u < w.
pub fn is_laminar(detours: &[Detour]) -> bool {
    detours.iter().all(|a| detours.iter().all(|b| !(a.v < b.v && b.v < a.u && a.u < b.u)))
}

fn largest<'a>(it: impl Iterator<Item = &'a Detour>) -> Option<Detour> {
    // ties cannot occur among nested detours; fall back to smallest v
    it.copied().max_by_key(|d| (d.size(), std::cmp::Reverse(d.v)))
}

/// Nested chain of `x`: largest detour containing x, then repeatedly the
/// largest one of at most half the size; each paired with the largest
/// detour strictly inside it that avoids x.
pub fn detour_chain(detours: &[Detour], x: u32) -> DetourSystem {
    let holding: Vec<&Detour> = detours.iter().filter(|d| d.contains(x)).collect();
    let mut chain = Vec::new();
    let mut cur = largest(holding.iter().copied());
    while let Some(d) = cur {
        let hat = largest(detours.iter().filter(|e| **e != d && d.contains_detour(e) && !e.contains(x)));
        chain.push((d, hat));
        cur = largest(holding.iter().copied().filter(|e| 2 * e.size() <= d.size()));
    }
    DetourSystem { chain }
}

/// P-vertices reachable from each P-vertex by paths internally disjoint from P.
fn jumps(g: &EmbeddedDigraph, allowed: &[bool], pos: &[u32], path: &[usize]) -> Vec<(u32, u32)> {
    let mut mark = vec![false; g.vertex_count()];
    let mut pairs = Vec::new();
    for (i, &s) in path.iter().enumerate() {
        let mut queue = VecDeque::from(vec![s]);
        let mut touched = vec![s];
        mark[s] = true;
        let mut hit = Vec::new();
        while let Some(v) = queue.pop_front() {
            for &a in g.out_arcs(v) {
                let w = g.arc(a).1;
                if !allowed[w] || mark[w] {
                    continue;
                }
                mark[w] = true;
                touched.push(w);
                if pos[w] != u32::MAX {
                    hit.push(pos[w]);
                } else {
                    queue.push_back(w);
                }
            }
        }
        for v in touched {
            mark[v] = false;
        }
        hit.sort_unstable();
        pairs.extend(hit.into_iter().map(|j| (i as u32, j)));
    }
    pairs
}

/// First P-index before and after f reachable from `src` in G - f.
fn split_first(g: &EmbeddedDigraph, allowed: &[bool], pos: &[u32], src: usize, f: u32, mark: &mut Vec<bool>) -> (Option<u32>, Option<u32>) {
    let hit = search(g, allowed, pos, src, false, &|j| j != f, mark);
    (hit.iter().copied().filter(|&j| j < f).min(), hit.iter().copied().filter(|&j| j > f).min())
}

fn crossings_of(g: &EmbeddedDigraph, allowed: &[bool], pos: &[u32], path: &[usize], pairs: &[(u32, u32)], f: u32, mark: &mut Vec<bool>) -> CrossingRecords {
    // bypasses: from > f to < f, keep maximal intervals [to, from]
    let mut by: Vec<(u32, u32)> = pairs.iter().copied().filter(|&(a, b)| b < f && f < a).collect();
    by.sort_by_key(|&(a, b)| (b, std::cmp::Reverse(a)));
    let mut best_hi = None;
    let mut bypasses = Vec::new();
    for (a, b) in by {
        if best_hi.map_or(true, |h| a > h) {
            best_hi = Some(a);
            let (plus, minus) = split_first(g, allowed, pos, path[a as usize], f, mark);
            bypasses.push(Crossing { from: a, to: b, plus, minus });
        }
    }
    // byways: from < f to > f, keep minimal intervals [from, to]
    let mut wy: Vec<(u32, u32)> = pairs.iter().copied().filter(|&(a, b)| a < f && f < b).collect();
    wy.sort_by_key(|&(a, b)| (std::cmp::Reverse(a), b));
    let mut best_hi = None;
    let mut byways = Vec::new();
    for (a, b) in wy {
        if best_hi.map_or(true, |h| b < h) {
            best_hi = Some(b);
            let (plus, minus) = split_first(g, allowed, pos, path[b as usize], f, mark);
            byways.push(Crossing { from: a, to: b, plus, minus });
        }
    }
    CrossingRecords { bypasses, byways }
}

/// Labels of every vertex of `path`, indexed by position.
pub fn build_secondary_labels(g: &EmbeddedDigraph, allowed: &[bool], path: &[usize], path_id: usize) -> Vec<SecondaryLabel> {
    let pos = positions(g.vertex_count(), path);
    let da = build_detour_graph(g, allowed, path, Variant::A);
    let db = build_detour_graph(g, allowed, path, Variant::B);
    let pairs = jumps(g, allowed, &pos, path);
    let mut mark = vec![false; g.vertex_count()];
    (0..path.len() as u32)
        .map(|i| SecondaryLabel {
            path_id,
            own_idx: i,
            detour_a: detour_chain(&da, i),
            detour_b: detour_chain(&db, i),
            crossings: crossings_of(g, allowed, &pos, path, &pairs, i, &mut mark),
        })
        .collect()
}

/// Lower endpoint of the largest detour holding b but not f (b if none).
pub fn aux_first(lab_b: &SecondaryLabel, lab_f: &SecondaryLabel, variant: Variant) -> Result<u32, SecondaryError> {
    if lab_b.path_id != lab_f.path_id {
        return Err(SecondaryError::DifferentPaths(lab_b.path_id, lab_f.path_id));
    }
    let (b, f) = (lab_b.own_idx, lab_f.own_idx);
    let ok = match variant {
        Variant::A => f < b,
        Variant::B => b < f,
    };
    if !ok {
        return Err(SecondaryError::Order(b, f, variant));
    }
    let (cb, cf) = match variant {
        Variant::A => (&lab_b.detour_a.chain, &lab_f.detour_a.chain),
        Variant::B => (&lab_b.detour_b.chain, &lab_f.detour_b.chain),
    };
    let mut cands: Vec<Detour> = Vec::new();
    let common = cf.iter().enumerate().rev().find_map(|(j, (d, _))| cb.iter().position(|(e, _)| e == d).map(|i| (i, j)));
    match common {
        None => cands.extend(cb.first().map(|c| c.0)),
        Some((i, j)) => {
            cands.extend(cf[j].1);
            cands.extend(cb.get(i + 1).map(|c| c.0));
        }
    }
    let d = largest(cands.iter().filter(|d| d.contains(b) && !d.contains(f)));
    Ok(d.map_or(b, |d| d.v))
}

/// First P-index strictly before (or after) f reachable from b in G - f.
pub fn sec_query_first(lab_b: &SecondaryLabel, lab_f: &SecondaryLabel, target: Target) -> Result<Option<u32>, SecondaryError> {
    if lab_b.path_id != lab_f.path_id {
        return Err(SecondaryError::DifferentPaths(lab_b.path_id, lab_f.path_id));
    }
    let (b, f) = (lab_b.own_idx, lab_f.own_idx);
    if b == f {
        return Ok(None);
    }
    let cr = &lab_f.crossings;
    let pick = |c: &Crossing| match target {
        Target::BeforeF => c.plus,
        Target::AfterF => c.minus,
    };
    let mut best: Option<u32> = None;
    let mut offer = |x: Option<u32>| {
        if let Some(x) = x {
            best = Some(best.map_or(x, |y| y.min(x)));
        }
    };
    if f < b {
        let p = aux_first(lab_b, lab_f, Variant::A)?;
        for c in cr.bypasses.iter().filter(|c| p <= c.from) {
            offer(pick(c));
        }
        if target == Target::AfterF {
            offer(Some(p));
        }
    } else {
        let p = aux_first(lab_b, lab_f, Variant::B)?;
        for c in cr.byways.iter().filter(|c| p <= c.from) {
            offer(pick(c));
        }
        if target == Target::BeforeF {
            offer(Some(p));
        }
    }
    Ok(best)
}

/// Direct search: first P-index before/after f reachable from P[b] in G - f.
pub fn brute_first(g: &EmbeddedDigraph, allowed: &[bool], path: &[usize], b: u32, f: u32, target: Target) -> Option<u32> {
    let pos = positions(g.vertex_count(), path);
    let mut mark = vec![false; g.vertex_count()];
    let (lo, hi) = split_first(g, allowed, &pos, path[b as usize], f, &mut mark);
    match target {
        Target::BeforeF => lo,
        Target::AfterF => hi,
    }
}

/// Direct search for the auxiliary answer: variant A avoids P-indices <= f
/// and returns the first index > f reached; variant B avoids indices >= f
/// and returns the first index < f reached.
pub fn brute_aux(g: &EmbeddedDigraph, allowed: &[bool], path: &[usize], b: u32, f: u32, variant: Variant) -> Option<u32> {
    let pos = positions(g.vertex_count(), path);
    let mut mark = vec![false; g.vertex_count()];
    let hit = match variant {
        Variant::A => search(g, allowed, &pos, path[b as usize], false, &|j| j > f, &mut mark),
        Variant::B => search(g, allowed, &pos, path[b as usize], false, &|j| j < f, &mut mark),
    };
    hit.into_iter().min()
}

/// The variant-A auxiliary answer computed on H_P: P's own arcs plus one
/// arc per detour.
pub fn aux_in_detour_graph(len: usize, detours: &[Detour], b: u32, f: u32) -> Option<u32> {
    let mut seen = vec![false; len];
    let mut stack = vec![b];
    seen[b as usize] = true;
    while let Some(x) = stack.pop() {
        let mut nxt: Vec<u32> = detours.iter().filter(|d| d.u == x).map(|d| d.v).collect();
        if (x as usize) + 1 < len {
            nxt.push(x + 1);
        }
        for y in nxt {
            if y > f && !seen[y as usize] {
                seen[y as usize] = true;
                stack.push(y);
            }
        }
    }
    (0..len as u32).find(|&i| seen[i as usize])
}

/// Whether the two ends of `path` share a face of `g`.
pub fn endpoints_cofacial(g: &EmbeddedDigraph, path: &[usize]) -> bool {
    let (a, b) = (path[0], path[path.len() - 1]);
    face_walks(g).iter().any(|w| w.contains(&a) && w.contains(&b))
}

/// ceil(log2 len) + 1.
pub fn chain_bound(len: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < len {
        k += 1;
    }
    k + 1
}
