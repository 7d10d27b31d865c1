//! Seeded generators for embedded planar digraphs.

use std::collections::{BTreeMap, BTreeSet};

use crate::planar_core::{ArcEnd, EmbeddedDigraph};

/// splitmix64: state += 0x9E3779B97F4A7C15, then two xor-shift-multiply rounds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (bound > 0), by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationMode {
    Random,
    Layered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Grid,
    TriDisk,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub w: usize,
    pub h: usize,
    pub n: usize,
    pub seed: u64,
    pub mode: OrientationMode,
}

pub fn generate(spec: &GenSpec) -> EmbeddedDigraph {
    match spec.family {
        Family::Grid => gen_grid(spec.w, spec.h, spec.seed, spec.mode),
        Family::TriDisk => gen_tri_disk(spec.n, spec.seed),
    }
}

/// w×h grid; vertex `r*w + c`. Arcs are emitted per vertex: right edge, then down edge.
pub fn gen_grid(w: usize, h: usize, seed: u64, mode: OrientationMode) -> EmbeddedDigraph {
    assert!(w >= 1 && h >= 1);
    let mut rng = SplitMix64::new(seed);
    let id = |r: usize, c: usize| r * w + c;
    let mut arcs = Vec::new();
    // edge slot per (vertex, direction): 0 east, 1 north, 2 west, 3 south
    let mut slot: BTreeMap<(usize, usize), ArcEnd> = BTreeMap::new();
    for r in 0..h {
        for c in 0..w {
            let v = id(r, c);
            let mut add = |u: usize, du: usize, x: usize, dx: usize, arcs: &mut Vec<(usize, usize)>| {
                let flip = mode == OrientationMode::Random && rng.coin();
                let a = arcs.len();
                if flip {
                    arcs.push((x, u));
                    slot.insert((x, dx), ArcEnd::tail(a));
                    slot.insert((u, du), ArcEnd::head(a));
                } else {
                    arcs.push((u, x));
                    slot.insert((u, du), ArcEnd::tail(a));
                    slot.insert((x, dx), ArcEnd::head(a));
                }
            };
            if c + 1 < w {
                add(v, 0, id(r, c + 1), 2, &mut arcs);
            }
            if r + 1 < h {
                add(v, 3, id(r + 1, c), 1, &mut arcs);
            }
        }
    }
    let rotation = (0..w * h)
        .map(|v| (0..4).filter_map(|d| slot.get(&(v, d)).copied()).collect())
        .collect();
    EmbeddedDigraph::new(w * h, arcs, rotation).expect("grid is well formed")
}

/// Random triangulated disk: fan-attach vertices to runs of the outer cycle,
/// then apply seeded diagonal flips. Edges get seeded orientations.
pub fn gen_tri_disk(n: usize, seed: u64) -> EmbeddedDigraph {
    assert!(n >= 3);
    let mut rng = SplitMix64::new(seed);
    // counter-clockwise triangles
    let mut tris: Vec<[usize; 3]> = vec![[0, 1, 2]];
    let mut outer: Vec<usize> = vec![0, 1, 2];
    for v in 3..n {
        let len = outer.len();
        let start = rng.below(len as u64) as usize;
        let run = 2 + rng.below((len - 1).min(3) as u64) as usize;
        let run = run.min(len - 1).max(2);
        let seq: Vec<usize> = (0..run).map(|k| outer[(start + k) % len]).collect();
        for k in 0..run - 1 {
            tris.push([seq[k], v, seq[k + 1]]);
        }
        // replace the inner part of the run with v
        let mut next = Vec::with_capacity(len + 1);
        for k in 0..len {
            let idx = (start + k) % len;
            if k == 0 {
                next.push(outer[idx]);
                next.push(v);
            } else if k >= run - 1 {
                next.push(outer[idx]);
            }
        }
        outer = next;
    }
    for _ in 0..n {
        flip_random(&mut tris, &mut rng);
    }
    embed_triangles(n, &tris, &mut rng)
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn flip_random(tris: &mut [[usize; 3]], rng: &mut SplitMix64) {
    // directed edge (a,b) -> triangle index holding it in ccw order
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, t) in tris.iter().enumerate() {
        for k in 0..3 {
            owner.insert((t[k], t[(k + 1) % 3]), i);
            edges.insert(edge_key(t[k], t[(k + 1) % 3]));
        }
    }
    let interior: Vec<(usize, usize)> = owner
        .keys()
        .filter(|&&(a, b)| a < b && owner.contains_key(&(b, a)))
        .copied()
        .collect();
    if interior.is_empty() {
        return;
    }
    let (u, v) = interior[rng.below(interior.len() as u64) as usize];
    let t1 = owner[&(u, v)];
    let t2 = owner[&(v, u)];
    let third = |t: [usize; 3]| t.iter().copied().find(|&x| x != u && x != v).unwrap();
    let w = third(tris[t1]);
    let x = third(tris[t2]);
    if w == x || edges.contains(&edge_key(w, x)) {
        return;
    }
    // quad u, x, v, w in ccw order
    tris[t1] = [u, x, w];
    tris[t2] = [x, v, w];
}

fn embed_triangles(n: usize, tris: &[[usize; 3]], rng: &mut SplitMix64) -> EmbeddedDigraph {
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    // at vertex a, neighbour c follows neighbour b counter-clockwise
    let mut succ: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for t in tris {
        for k in 0..3 {
            let (a, b, c) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
            edges.insert(edge_key(a, b));
            succ[a].insert(b, c);
        }
    }
    let mut arcs = Vec::new();
    let mut end_of: BTreeMap<(usize, usize), ArcEnd> = BTreeMap::new();
    for &(a, b) in &edges {
        let i = arcs.len();
        let (x, y) = if rng.coin() { (b, a) } else { (a, b) };
        arcs.push((x, y));
        end_of.insert((x, y), ArcEnd::tail(i));
        end_of.insert((y, x), ArcEnd::head(i));
    }
    let mut rotation = Vec::with_capacity(n);
    for a in 0..n {
        let s = &succ[a];
        let preds: BTreeSet<usize> = s.values().copied().collect();
        // boundary vertices have a neighbour with no predecessor
        let start = s.keys().copied().find(|b| !preds.contains(b)).unwrap_or_else(|| *s.keys().next().unwrap());
        let mut order = vec![start];
        let mut cur = start;
        while let Some(&nx) = s.get(&cur) {
            if nx == start {
                break;
            }
            order.push(nx);
            cur = nx;
        }
        rotation.push(order.iter().map(|&b| end_of[&(a, b)]).collect());
    }
    EmbeddedDigraph::new(n, arcs, rotation).expect("triangulation is well formed")
}

/// Seeded simple directed path of 2..=max_len vertices whose two ends share
/// a face: the longest such walk prefix over a fixed number of random walks.
pub fn random_cofacial_path(g: &EmbeddedDigraph, seed: u64, max_len: usize) -> Option<Vec<usize>> {
    let mut rng = SplitMix64::new(seed);
    let faces = crate::planar_core::face_walks(g);
    let n = g.vertex_count();
    let mut on_face: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, f) in faces.iter().enumerate() {
        for &v in f {
            if on_face[v].last() != Some(&i) {
                on_face[v].push(i);
            }
        }
    }
    let share = |a: usize, b: usize| on_face[a].iter().any(|x| on_face[b].contains(x));
    let mut best: Option<Vec<usize>> = None;
    for _ in 0..200 {
        let mut path = vec![rng.below(n as u64) as usize];
        let mut used = vec![false; n];
        used[path[0]] = true;
        while path.len() < max_len {
            let v = *path.last().unwrap();
            let opts: Vec<usize> = g.out_arcs(v).iter().map(|&a| g.arc(a).1).filter(|&w| !used[w]).collect();
            if opts.is_empty() {
                break;
            }
            let w = opts[rng.below(opts.len() as u64) as usize];
            used[w] = true;
            path.push(w);
        }
        while path.len() >= 2 && !share(path[0], path[path.len() - 1]) {
            path.pop();
        }
        if path.len() >= 2 && best.as_ref().map_or(true, |b| path.len() > b.len()) {
            best = Some(path);
        }
    }
    best
}
