//! Complete per-vertex fault-tolerant labels.
//!
//! Each vertex gets one part per layered component holding it. A part has a
//! forward bundle (built on the component graph) and a reverse bundle (the
//! same construction on the reversed graph with every separator path read
//! backwards). See `LABEL_CONTENTS` for the record families.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::decomposition::{build_decomposition_tree, DecompositionError, DecompositionTree};
use crate::nonfaulty_labels::{build_labels_on, build_nonfaulty_labels, sweep, sweep_outside, NonFaultyLabel, NONE};
use crate::planar_core::{reverse_orientation, EmbeddedDigraph};
use crate::reduction::{build_layering, LayeredComponent};
use crate::secondary_path_labels::{build_secondary_labels, SecondaryLabel};

/// Record families stored per bundle, in serialization order.
pub const LABEL_CONTENTS: &[(&str, &str)] = &[
    ("nf", "first/last index on every separator path of the vertex's pieces"),
    ("sub", "per piece H holding the vertex: failure-free label inside G[Int H]"),
    ("last_in", "per (H, P): last vertex of an ancestor path P reaching the vertex inside H"),
    ("frontier", "per piece A with the vertex inside or on its boundary: per boundary segment, the entry vertex p, first_G(p,P) and first_{G-S}(p,P), p's secondary label, and the intervals of P(p) in P(z)"),
    ("close", "auxiliary: explicit first_{G-f} values for faults f on the vertex's own path inside its run towards P"),
    ("through", "f-side: per (A, segment, P) whose canonical suffix runs through f: end of I, the prefix of I reaching first_G(f,P) in G-f, and first_{G-f}(u,P)"),
    ("vafter", "f-side: per (A, segment, P) with f on P: first vertex of P(z) after f with its secondary label"),
    ("along", "per ancestor path P reachable at all: first_G and first_{G-S} from the vertex itself, with the end u of its run on its own path"),
    ("along_funnels", "intervals of P(x) in P(z), z the start of the vertex's own path"),
    ("along_through", "f-side twin of `through` for runs on a whole separator path"),
    ("along_vafter", "f-side twin of `vafter` for whole separator paths"),
    ("sec", "secondary label of the vertex on its own separator path"),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FtError {
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error("canonical path rule violated: {0}")]
    Canonical(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceInfo {
    pub parent: Option<usize>,
    pub depth: usize,
    /// Separator paths of the piece with their lengths.
    pub paths: Vec<(usize, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: u32,
    pub hi: u32,
    pub start_sec: Option<SecondaryLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegEntry {
    pub path_id: usize,
    pub p: u32,
    /// P -> (first_G(p,P), first_{G-S}(p,P)); P absent when p cannot reach it.
    pub first: BTreeMap<usize, (Option<u32>, Option<u32>)>,
    pub sec: Option<SecondaryLabel>,
    pub funnels: BTreeMap<usize, Vec<Interval>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Through {
    pub u: u32,
    pub reach_end: Option<u32>,
    pub first_u: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VAfter {
    pub v: Option<u32>,
    pub sec: Option<SecondaryLabel>,
}

/// x-side record for routes that start by walking x's own separator path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Along {
    pub first: Option<u32>,
    pub first_cut: Option<u32>,
    /// Last index of x's run of equal first_G values on its own path.
    pub u: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bundle {
    pub nf: NonFaultyLabel,
    pub sub: BTreeMap<usize, NonFaultyLabel>,
    pub last_in: BTreeMap<(usize, usize), u32>,
    pub frontier: BTreeMap<usize, BTreeMap<u32, SegEntry>>,
    /// f -> P -> first_{G-f}(x, P), for faults f later on x's own path.
    pub close: BTreeMap<usize, BTreeMap<usize, Option<u32>>>,
    pub through: BTreeMap<(usize, u32, usize), Through>,
    pub vafter: BTreeMap<(usize, u32, usize), VAfter>,
    pub along: BTreeMap<usize, Along>,
    pub along_funnels: BTreeMap<usize, Vec<Interval>>,
    /// Keyed by (own path of the x-side vertex, target path).
    pub along_through: BTreeMap<(usize, usize), Through>,
    pub along_vafter: BTreeMap<(usize, usize), VAfter>,
    pub sec: Option<SecondaryLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabel {
    pub component: usize,
    pub local: usize,
    pub chain: Vec<usize>,
    pub closure: Vec<usize>,
    pub pieces: BTreeMap<usize, PieceInfo>,
    pub fwd: Bundle,
    pub rev: Bundle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLabel {
    pub vertex_id: usize,
    pub parts: Vec<ComponentLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    pub vertex_count: usize,
    pub labels: Vec<VertexLabel>,
}

fn opt(x: u32) -> Option<u32> {
    (x != NONE).then_some(x)
}

fn mask_of(n: usize, vs: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in vs {
        m[v] = true;
    }
    m
}

struct Ctx<'a> {
    g: &'a EmbeddedDigraph,
    dt: &'a DecompositionTree,
    n: usize,
    real: &'a [bool],
    out: Vec<Bundle>,
    /// Secondary labels of every separator path, by position.
    sec_of: Vec<Vec<SecondaryLabel>>,
    /// (A, segment) -> (vertex inside A, entry index on the segment's path).
    psig: HashMap<(usize, u32), Vec<(usize, u32)>>,
    /// Paths of a piece and all its ancestors.
    anc_paths: Vec<Vec<usize>>,
}

impl<'a> Ctx<'a> {
    fn in_cl(&self, v: usize, piece: usize) -> bool {
        self.dt.closure[v].binary_search(&piece).is_ok()
    }

    fn in_chain(&self, v: usize, piece: usize) -> bool {
        self.dt.chain[v].binary_search(&piece).is_ok()
    }

    fn owner(&self, path: usize) -> usize {
        self.dt.paths[path].owner_piece_id
    }

    fn seg_vertices(&self, a: usize, si: usize) -> (u32, &'a [usize]) {
        let dt: &'a DecompositionTree = self.dt;
        let s = dt.pieces[a].segments[si];
        (s.lo as u32, &dt.paths[s.path_id].vertices[s.lo..=s.hi])
    }

    /// Failure-free labels, in G and inside every piece.
    fn nonfaulty(&mut self) {
        let nf = build_nonfaulty_labels(self.g, self.dt);
        for (v, l) in nf.into_iter().enumerate() {
            self.out[v].nf = l;
        }
        let paths: Vec<Vec<usize>> = self.dt.paths.iter().map(|p| p.vertices.clone()).collect();
        let dt: &'a DecompositionTree = self.dt;
        for h in &dt.pieces {
            let allowed = mask_of(self.n, &h.interior);
            let mut wanted = vec![Vec::new(); self.n];
            for &v in &h.interior {
                if !self.real[v] {
                    continue;
                }
                wanted[v] = self.dt.chain[v]
                    .iter()
                    .filter(|&&p| self.dt.pieces[p].depth >= h.depth)
                    .flat_map(|&p| self.dt.pieces[p].separator_path_ids.iter().copied())
                    .collect();
            }
            let labs = build_labels_on(self.g, &allowed, &paths, &wanted);
            for (v, l) in labs.into_iter().enumerate() {
                if !wanted[v].is_empty() {
                    self.out[v].sub.insert(h.piece_id, l);
                }
            }
        }
    }

    /// last_in records and the per-segment entry vertices.
    fn entries(&mut self) {
        let dt: &'a DecompositionTree = self.dt;
        for h in &dt.pieces {
            let Some(parent) = h.parent_id else { continue };
            let allowed = mask_of(self.n, &h.interior);
            for &pid in &self.anc_paths[parent] {
                let sw = sweep_outside(self.g, &allowed, &self.dt.paths[pid].vertices, false);
                for &v in &h.interior {
                    if self.real[v] && sw.idx[v] != NONE {
                        self.out[v].last_in.insert((h.piece_id, pid), sw.idx[v]);
                    }
                }
            }
            for si in 0..h.segments.len() {
                let (lo, verts) = self.seg_vertices(h.piece_id, si);
                let sw = sweep_outside(self.g, &allowed, verts, true);
                let list: Vec<(usize, u32)> = h.interior.iter().filter(|&&v| sw.idx[v] != NONE).map(|&v| (v, lo + sw.idx[v])).collect();
                let path_id = h.segments[si].path_id;
                for &(v, p) in &list {
                    if self.real[v] {
                        let e = self.new_entry(path_id, p);
                        self.out[v].frontier.entry(h.piece_id).or_default().insert(si as u32, e);
                    }
                }
                for (k, &v) in verts.iter().enumerate() {
                    if self.real[v] {
                        let e = self.new_entry(path_id, lo + k as u32);
                        self.out[v].frontier.entry(h.piece_id).or_default().insert(si as u32, e);
                    }
                }
                self.psig.insert((h.piece_id, si as u32), list);
            }
        }
    }

    fn new_entry(&self, path_id: usize, p: u32) -> SegEntry {
        SegEntry { path_id, p, first: BTreeMap::new(), sec: Some(self.sec_of[path_id][p as usize].clone()), funnels: BTreeMap::new() }
    }

    /// Secondary labels of each path inside its piece minus the rest of the separator.
    fn secondary(&mut self) {
        for path in &self.dt.paths {
            let h = &self.dt.pieces[path.owner_piece_id];
            let mut allowed = mask_of(self.n, &h.interior);
            for &v in &h.separator {
                allowed[v] = false;
            }
            for &v in &path.vertices {
                allowed[v] = true;
            }
            let labs = build_secondary_labels(self.g, &allowed, &path.vertices, path.path_id);
            for (i, &v) in path.vertices.iter().enumerate() {
                if self.real[v] {
                    self.out[v].sec = Some(labs[i].clone());
                }
            }
            self.sec_of.push(labs);
        }
    }
}

/// Per-path data shared by all runs towards one target path P.
struct Target<'t> {
    pv: &'t [usize],
    idx: Vec<u32>,
    next: Vec<u32>,
    own: Vec<u32>,
    kids: Vec<Vec<usize>>,
    alt_memo: HashMap<usize, HashMap<usize, u32>>,
    cut_memo: HashMap<usize, Vec<u32>>,
}

/// Result of splitting a directed vertex run into groups of equal first_G.
struct RunData {
    /// Per position: (first_G, first_{G-S(u)}, u's position).
    vals: Vec<(Option<u32>, Option<u32>, u32)>,
    /// Fault-side records produced along the way.
    recs: Vec<(usize, Through)>,
}

impl<'a> Ctx<'a> {
    fn target<'t>(&self, pv: &'t [usize]) -> Target<'t> {
        let sw = sweep(self.g, &vec![true; self.n], pv, true);
        let mut own = vec![NONE; self.n];
        for (i, &v) in pv.iter().enumerate() {
            own[v] = i as u32;
        }
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for v in 0..self.n {
            if sw.next[v] != NONE {
                kids[sw.next[v] as usize].push(v);
            }
        }
        Target { pv, idx: sw.idx, next: sw.next, own, kids, alt_memo: HashMap::new(), cut_memo: HashMap::new() }
    }

    /// Groups `verts` (positions lo..) by first_G(., P); for each group with
    /// end u, faults on the canonical route S(u) that pass `relevant` get a
    /// record.
    fn run_data(&self, tg: &mut Target, verts: &[usize], lo: u32, relevant: &dyn Fn(usize) -> bool) -> RunData {
        let mut vals = vec![(None, None, 0); verts.len()];
        let mut recs = Vec::new();
        let mut k0 = 0;
        while k0 < verts.len() {
            let i = tg.idx[verts[k0]];
            let mut k1 = k0;
            while k1 + 1 < verts.len() && tg.idx[verts[k1 + 1]] == i {
                k1 += 1;
            }
            let u = verts[k1];
            let mut route = Vec::new();
            if i != NONE {
                let mut w = u;
                while tg.next[w] != NONE {
                    if tg.own[w] == NONE {
                        route.push(w);
                    }
                    w = tg.next[w] as usize;
                }
            }
            let faults: Vec<usize> = route.iter().copied().filter(|&f| self.real[f] && relevant(f)).collect();
            let cut = if faults.is_empty() {
                None
            } else {
                let pv = tg.pv;
                Some(&*tg.cut_memo.entry(u).or_insert_with(|| {
                    let mut allowed = vec![true; self.n];
                    for &r in &route {
                        allowed[r] = false;
                    }
                    sweep(self.g, &allowed, pv, true).idx
                }))
            };
            for k in k0..=k1 {
                vals[k] = (opt(i), cut.and_then(|c| opt(c[verts[k]])), lo + k1 as u32);
            }
            for &f in &faults {
                let alt = tg.alt_memo.entry(f).or_insert_with(|| avoid_fault(self.g, &tg.idx, &tg.own, &tg.kids, f));
                let altv = |v: usize| alt.get(&v).copied().unwrap_or(tg.idx[v]);
                let reach_end = (k0..=k1).rev().find(|&k| altv(verts[k]) == i).map(|k| lo + k as u32);
                recs.push((f, Through { u: lo + k1 as u32, reach_end, first_u: opt(altv(u)) }));
            }
            k0 = k1 + 1;
        }
        RunData { vals, recs }
    }

    /// first_G(., P) and first_{G-S}(., P) at every entry vertex and along
    /// every separator path, plus the f-side records for faults on the
    /// canonical routes S.
    fn through(&mut self) {
        let dt: &'a DecompositionTree = self.dt;
        for pid in 0..dt.paths.len() {
            let owner = self.owner(pid);
            let mut tg = self.target(&dt.paths[pid].vertices);
            for a in 0..dt.pieces.len() {
                if a == owner || !dt.is_ancestor(owner, a) {
                    continue;
                }
                let parent = dt.pieces[a].parent_id.unwrap();
                for si in 0..dt.pieces[a].segments.len() {
                    let (lo, verts) = self.seg_vertices(a, si);
                    let rel = |f: usize| !self.in_cl(f, a) && self.in_cl(f, parent) && self.in_chain(f, owner);
                    let rd = self.run_data(&mut tg, verts, lo, &rel);
                    for (f, rec) in rd.recs {
                        self.out[f].through.insert((a, si as u32, pid), rec);
                    }
                    let mut users: Vec<(usize, u32)> = self.psig[&(a, si as u32)].clone();
                    users.extend(verts.iter().enumerate().map(|(k, &v)| (v, lo + k as u32)));
                    for (x, p) in users {
                        if let Some(e) = self.out[x].frontier.get_mut(&a).and_then(|m| m.get_mut(&(si as u32))) {
                            let v = rd.vals[(p - lo) as usize];
                            if v.0.is_some() {
                                e.first.insert(pid, (v.0, v.1));
                            }
                        }
                    }
                }
            }
            for qx in 0..dt.paths.len() {
                let d = self.owner(qx);
                if !dt.is_ancestor(owner, d) {
                    continue;
                }
                let verts = &dt.paths[qx].vertices;
                let rel = |f: usize| self.in_cl(f, d) && self.in_chain(f, owner);
                let rd = self.run_data(&mut tg, verts, 0, &rel);
                for (f, rec) in rd.recs {
                    self.out[f].along_through.insert((qx, pid), rec);
                }
                for (k, &x) in verts.iter().enumerate() {
                    if self.real[x] && rd.vals[k].0.is_some() {
                        let (first, first_cut, u) = rd.vals[k];
                        self.out[x].along.insert(pid, Along { first, first_cut, u });
                    }
                }
            }
                }
    }
}

/// first_{G-f}(., P) for the vertices whose canonical route runs through f;
/// everything else keeps its sweep value.
fn avoid_fault(g: &EmbeddedDigraph, idx: &[u32], own: &[u32], kids: &[Vec<usize>], f: usize) -> HashMap<usize, u32> {
    let mut sub: HashMap<usize, u32> = HashMap::new();
    let mut stack = vec![f];
    while let Some(v) = stack.pop() {
        sub.insert(v, NONE);
        stack.extend(kids[v].iter().copied());
    }
    let mut seeds: Vec<(u32, usize)> = Vec::new();
    for &v in sub.keys() {
        if v == f {
            continue;
        }
        let base = g
            .out_arcs(v)
            .iter()
            .map(|&a| g.arc(a).1)
            .filter(|w| *w != f && !sub.contains_key(w))
            .map(|w| idx[w])
            .min()
            .unwrap_or(NONE)
            .min(own[v]);
        if base != NONE {
            seeds.push((base, v));
        }
    }
    seeds.sort_unstable();
    let mut queue = VecDeque::new();
    for (base, s) in seeds {
        if sub[&s] != NONE {
            continue;
        }
        sub.insert(s, base);
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &a in g.in_arcs(v) {
                let w = g.arc(a).0;
                if w != f && sub.get(&w) == Some(&NONE) {
                    sub.insert(w, base);
                    queue.push_back(w);
                }
            }
        }
    }
    sub
}

impl<'a> Ctx<'a> {
    /// Entry intervals on the paths of an ancestor piece, and the f-side
    /// successor records for faults on those paths.
    fn funnels(&mut self) -> usize {
        let dt: &'a DecompositionTree = self.dt;
        let mut wide = 0;
        let mut loc = vec![usize::MAX; self.n];
        for hh in &dt.pieces {
            for &pid in &hh.separator_path_ids {
                let pv = &dt.paths[pid].vertices;
                let words = pv.len().div_ceil(64);
                for &x in &hh.child_ids {
                    let int_x = &dt.pieces[x].interior;
                    for (i, &v) in int_x.iter().enumerate() {
                        loc[v] = i;
                    }
                    let mut e = vec![0u64; int_x.len() * words];
                    let mut seen = vec![usize::MAX; int_x.len()];
                    for (i, &s) in pv.iter().enumerate() {
                        let mut queue = VecDeque::from(vec![s]);
                        while let Some(v) = queue.pop_front() {
                            for &arc in self.g.in_arcs(v) {
                                let w = self.g.arc(arc).0;
                                if loc[w] != usize::MAX && seen[loc[w]] != i {
                                    seen[loc[w]] = i;
                                    e[loc[w] * words + i / 64] |= 1 << (i % 64);
                                    queue.push_back(w);
                                }
                            }
                        }
                    }
                    let has = |v: usize, i: usize| e[loc[v] * words + i / 64] >> (i % 64) & 1 == 1;
                    for a in 0..dt.pieces.len() {
                        if a == x || !dt.is_ancestor(x, a) {
                            continue;
                        }
                        let parent = dt.pieces[a].parent_id.unwrap();
                        for (si, seg) in dt.pieces[a].segments.iter().enumerate() {
                            if dt.pieces[self.owner(seg.path_id)].depth <= hh.depth {
                                continue;
                            }
                            let (lo, verts) = self.seg_vertices(a, si);
                            let ez: Vec<u32> = (0..pv.len()).filter(|&i| has(verts[0], i)).map(|i| i as u32).collect();
                            let ivs: Vec<Vec<Interval>> = verts.iter().map(|&p| self.intervals(&ez, pid, |i| has(p, i))).collect();
                            wide += ivs.iter().filter(|v| v.len() > 2).count();
                            let mut users: Vec<(usize, u32)> = self.psig[&(a, si as u32)].clone();
                            users.extend(verts.iter().enumerate().map(|(k, &v)| (v, lo + k as u32)));
                            for (u, p) in users {
                                if ivs[(p - lo) as usize].is_empty() {
                                    continue;
                                }
                                if let Some(en) = self.out[u].frontier.get_mut(&a).and_then(|m| m.get_mut(&(si as u32))) {
                                    en.funnels.insert(pid, ivs[(p - lo) as usize].clone());
                                }
                            }
                            for (k, &f) in pv.iter().enumerate() {
                                if self.real[f] && !self.in_cl(f, a) && self.in_cl(f, parent) {
                                    let v = ez.iter().copied().find(|&i| i as usize > k);
                                    let sec = v.map(|i| self.sec_of[pid][i as usize].clone());
                                    self.out[f].vafter.insert((a, si as u32, pid), VAfter { v, sec });
                                }
                            }
                        }
                    }
                    for qx in 0..dt.paths.len() {
                        let d = self.owner(qx);
                        if !dt.is_ancestor(x, d) {
                            continue;
                        }
                        let verts = &dt.paths[qx].vertices;
                        let ez: Vec<u32> = (0..pv.len()).filter(|&i| has(verts[0], i)).map(|i| i as u32).collect();
                        for &v in verts {
                            if self.real[v] {
                                let ivs = self.intervals(&ez, pid, |i| has(v, i));
                                wide += usize::from(ivs.len() > 2);
                                if !ivs.is_empty() {
                                    self.out[v].along_funnels.insert(pid, ivs);
                                }
                            }
                        }
                        for (k, &f) in pv.iter().enumerate() {
                            if self.real[f] && self.in_cl(f, d) {
                                let v = ez.iter().copied().find(|&i| i as usize > k);
                                let sec = v.map(|i| self.sec_of[pid][i as usize].clone());
                                self.out[f].along_vafter.insert((qx, pid), VAfter { v, sec });
                            }
                        }
                    }
                    for &v in int_x {
                        loc[v] = usize::MAX;
                    }
                }
            }
        }
        wide
    }

    /// Maximal runs of `ez` (indices on path `pid`) whose members pass `inside`.
    fn intervals(&self, ez: &[u32], pid: usize, inside: impl Fn(usize) -> bool) -> Vec<Interval> {
        let mut out: Vec<Interval> = Vec::new();
        let mut prev = false;
        for &i in ez {
            let now = inside(i as usize);
            if now && prev {
                out.last_mut().unwrap().hi = i;
            } else if now {
                out.push(Interval { lo: i, hi: i, start_sec: Some(self.sec_of[pid][i as usize].clone()) });
            }
            prev = now;
        }
        out
    }

    /// Explicit answers where x's walk along its own path runs into f.
    fn close(&mut self) {
        let dt: &'a DecompositionTree = self.dt;
        let mut allowed = vec![true; self.n];
        for x in 0..self.n {
            if !self.real[x] {
                continue;
            }
            let (qx, kx) = dt.path_of[x];
            let verts = &dt.paths[qx].vertices;
            let along = self.out[x].along.clone();
            let umax = along.values().map(|a| a.u as usize).max().unwrap_or(kx);
            for (fk, &f) in verts.iter().enumerate().take(umax + 1).skip(kx + 1) {
                if !self.real[f] || !dt.closure[x].iter().all(|&p| self.in_cl(f, p)) {
                    continue;
                }
                allowed[f] = false;
                let reached = crate::planar_core::reach_mask(self.g, &[x], &allowed, false);
                allowed[f] = true;
                let mut rec = BTreeMap::new();
                for (&pid, a) in &along {
                    if pid != qx && fk as u32 <= a.u {
                        rec.insert(pid, dt.paths[pid].vertices.iter().position(|&v| reached[v]).map(|i| i as u32));
                    }
                }
                if !rec.is_empty() {
                    self.out[x].close.insert(f, rec);
                }
            }
        }
    }
}

/// Build statistics that are not part of the labels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    /// Entry vertices whose intervals on an ancestor path number more than two.
    pub wide_funnels: usize,
}

/// All record families for one orientation of a component.
pub fn build_bundles(g: &EmbeddedDigraph, dt: &DecompositionTree, real: &[bool]) -> (Vec<Bundle>, BuildReport) {
    let n = g.vertex_count();
    let anc_paths = (0..dt.pieces.len()).map(|p| dt.ancestor_paths(p)).collect();
    let mut ctx = Ctx { g, dt, n, real, out: vec![Bundle::default(); n], sec_of: Vec::new(), psig: HashMap::new(), anc_paths };
    ctx.secondary();
    ctx.nonfaulty();
    ctx.entries();
    ctx.through();
    let wide_funnels = ctx.funnels();
    ctx.close();
    for (v, b) in ctx.out.iter_mut().enumerate() {
        if !real[v] {
            *b = Bundle::default();
        }
    }
    (ctx.out, BuildReport { wide_funnels })
}

fn piece_info(dt: &DecompositionTree, p: usize) -> PieceInfo {
    let h = &dt.pieces[p];
    PieceInfo {
        parent: h.parent_id,
        depth: h.depth,
        paths: h.separator_path_ids.iter().map(|&pid| (pid, dt.paths[pid].vertices.len() as u32)).collect(),
    }
}

pub fn build_ft_labels(g: &EmbeddedDigraph) -> Result<LabelSet, FtError> {
    build_ft_labels_with_report(g).map(|(l, _)| l)
}

pub fn build_ft_labels_with_report(g: &EmbeddedDigraph) -> Result<(LabelSet, BuildReport), FtError> {
    let n = g.vertex_count();
    let (comps, _) = build_layering(g);
    let mut labels: Vec<VertexLabel> = (0..n).map(|v| VertexLabel { vertex_id: v, parts: Vec::new() }).collect();
    let mut report = BuildReport::default();
    // a lone real vertex never takes part in a query with distinct s, t, f
    for c in comps.iter().filter(|c| c.global.iter().flatten().count() > 1) {
        let parts = build_component(c, &mut report)?;
        for (v, part) in parts {
            labels[v].parts.push(part);
        }
    }
    Ok((LabelSet { vertex_count: n, labels }, report))
}

fn build_component(c: &LayeredComponent, report: &mut BuildReport) -> Result<Vec<(usize, ComponentLabel)>, FtError> {
    let dt = build_decomposition_tree(c)?;
    let real: Vec<bool> = c.global.iter().map(|v| v.is_some()).collect();
    let (fwd, r1) = build_bundles(&c.graph, &dt, &real);
    let (rev, r2) = build_bundles(&reverse_orientation(&c.graph), &dt.reversed(), &real);
    report.wide_funnels += r1.wide_funnels + r2.wide_funnels;
    let mut out = Vec::new();
    for (local, (f, r)) in fwd.into_iter().zip(rev).enumerate() {
        let Some(v) = c.global[local] else { continue };
        let pieces = dt.closure[local].iter().map(|&p| (p, piece_info(&dt, p))).collect();
        out.push((v, ComponentLabel { component: c.id, local, chain: dt.chain[local].clone(), closure: dt.closure[local].clone(), pieces, fwd: f, rev: r }));
    }
    Ok(out)
}

fn bundle_records(b: &Bundle) -> usize {
    let seg: usize = b.frontier.values().flat_map(|m| m.values()).map(|e| 1 + e.first.len() + e.funnels.len()).sum();
    b.nf.entries.len()
        + b.sub.values().map(|s| s.entries.len()).sum::<usize>()
        + b.last_in.len()
        + seg
        + b.close.values().map(|m| m.len()).sum::<usize>()
        + b.through.len()
        + b.vafter.len()
        + b.along.len()
        + b.along_funnels.len()
        + b.along_through.len()
        + b.along_vafter.len()
        + usize::from(b.sec.is_some())
}

/// Number of keyed records in a label: one per path entry, per (piece, path)
/// value, per fault-side record and per secondary label.
pub fn label_records(l: &VertexLabel) -> usize {
    l.parts.iter().map(|p| bundle_records(&p.fwd) + bundle_records(&p.rev)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelSize {
    pub records: usize,
    pub serialized_bytes: usize,
}

pub fn label_size(l: &VertexLabel) -> LabelSize {
    LabelSize { records: label_records(l), serialized_bytes: crate::cli_io::label_bytes(l).len() }
}
