//! Recursive decomposition of a layered component by fundamental-cycle separators.
//!
//! A piece is described by its interior `Int(H)`; its boundary set `Z_H` is the
//! union of all ancestor separators, a subtree of T that contains the root.
//! The separator search runs on `G[Int ∪ Z] / Z` (Z contracted to one vertex)
//! after an undirected triangulation. The separator of a piece is the union of
//! the tree paths from both ends of the chosen closing edge up to Z, so `Z`
//! stays closed under tree parents in every child.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::planar_core::EmbeddedDigraph;
use crate::reduction::LayeredComponent;

pub const ATOMIC_SIZE: usize = 6;
pub const DEPTH_FACTOR: f64 = 6.0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("vertex {0} is not in piece {1}")]
    NotInPiece(usize, usize),
    #[error("piece too small for a separator search")]
    TooSmall,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorPath {
    pub path_id: usize,
    pub owner_piece_id: usize,
    pub vertices: Vec<usize>,
    pub undirected_run_index: usize,
}

/// Maximal run `lo..=hi` of a separator path that lies in a piece boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub path_id: usize,
    pub lo: usize,
    pub hi: usize,
}

#[derive(Debug, Clone)]
pub struct Piece {
    pub piece_id: usize,
    pub parent_id: Option<usize>,
    pub depth: usize,
    pub interior: Vec<usize>,
    pub boundary: Vec<usize>,
    pub segments: Vec<Segment>,
    pub separator_path_ids: Vec<usize>,
    pub separator: Vec<usize>,
    pub apex_ids: Vec<usize>,
    pub child_ids: Vec<usize>,
    pub is_atomic: bool,
    /// Weight share of the heavier child, for balance checks.
    pub balance: f64,
}

impl Piece {
    /// Ids of ancestor separator paths met by the boundary.
    pub fn boundary_path_ids(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.segments.iter().map(|s| s.path_id).collect();
        s.into_iter().collect()
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionTree {
    pub pieces: Vec<Piece>,
    pub root_id: usize,
    pub paths: Vec<SeparatorPath>,
    /// Per vertex: the piece whose separator holds it.
    pub sep_piece: Vec<usize>,
    /// Per vertex: (path id, index) of its separator path.
    pub path_of: Vec<(usize, usize)>,
    /// Per vertex: pieces with the vertex in the interior, root first.
    pub chain: Vec<Vec<usize>>,
    /// Per vertex: pieces with the vertex in interior or boundary, ascending id.
    pub closure: Vec<Vec<usize>>,
}

/// Undirected embedded graph of one piece with Z contracted to `z`.
struct PieceGraph {
    /// Local vertex -> component vertex (`usize::MAX` for z).
    verts: Vec<usize>,
    z: Option<usize>,
    ends: Vec<(usize, usize)>,
    /// Component arc behind each edge; `None` for triangulation chords.
    arc_of: Vec<Option<usize>>,
    rot: Vec<Vec<usize>>,
    tparent: Vec<Option<(usize, usize)>>,
    troot: usize,
}

impl PieceGraph {
    fn build(c: &LayeredComponent, interior: &[usize], in_z: &[bool]) -> PieceGraph {
        let g = &c.graph;
        let n = g.vertex_count();
        let mut local = vec![usize::MAX; n];
        let mut verts = Vec::with_capacity(interior.len() + 1);
        for &v in interior {
            local[v] = verts.len();
            verts.push(v);
        }
        let has_z = in_z.iter().any(|&b| b);
        let z = if has_z {
            verts.push(usize::MAX);
            Some(verts.len() - 1)
        } else {
            None
        };
        let lid = |x: usize| if in_z[x] { z.unwrap() } else { local[x] };
        let keep = |x: usize| in_z[x] || local[x] != usize::MAX;
        let mut arcs = BTreeSet::new();
        for &v in interior {
            for e in g.rotation(v) {
                if keep(g.far_vertex(*e)) {
                    arcs.insert(e.arc);
                }
            }
        }
        let mut edge_of: HashMap<usize, usize> = HashMap::new();
        let mut ends = Vec::new();
        let mut arc_of = Vec::new();
        for &a in &arcs {
            let (x, y) = g.arc(a);
            edge_of.insert(a, ends.len());
            ends.push((lid(x), lid(y)));
            arc_of.push(Some(a));
        }
        let mut rot = vec![Vec::new(); verts.len()];
        for &v in interior {
            rot[local[v]] = g.rotation(v).iter().filter_map(|e| edge_of.get(&e.arc).copied()).collect();
        }
        if let Some(z) = z {
            let in_x = |x: usize| in_z[x];
            let in_c = |x: usize| keep(x);
            rot[z] = crate::planar_core::contracted_rotation(g, &in_x, &in_c)
                .iter()
                .filter_map(|e| edge_of.get(&e.arc).copied())
                .collect();
        }
        let mut tparent = vec![None; verts.len()];
        let mut troot = z.unwrap_or(usize::MAX);
        for &v in interior {
            match c.parent[v] {
                Some(p) => tparent[local[v]] = Some((lid(p), edge_of[&c.parent_arc[v].unwrap()])),
                None => troot = local[v],
            }
        }
        PieceGraph { verts, z, ends, arc_of, rot, tparent, troot }
    }

    fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.ends[e];
        if a == v {
            b
        } else {
            a
        }
    }

    fn pos_in(&self, v: usize, e: usize) -> usize {
        self.rot[v].iter().position(|&x| x == e).expect("edge at vertex")
    }

    /// Face walks as (vertex, edge leaving it) sequences.
    fn faces(&self) -> (Vec<Vec<(usize, usize)>>, Vec<[usize; 2]>) {
        let m = self.ends.len();
        let mut pos = vec![[0usize; 2]; m];
        for (v, r) in self.rot.iter().enumerate() {
            for (i, &e) in r.iter().enumerate() {
                let side = if self.ends[e].0 == v { 0 } else { 1 };
                pos[e][side] = i;
            }
        }
        let mut face_of = vec![[usize::MAX; 2]; m];
        let mut faces = Vec::new();
        for e0 in 0..m {
            for s0 in 0..2 {
                if face_of[e0][s0] != usize::MAX {
                    continue;
                }
                let fid = faces.len();
                let mut walk = Vec::new();
                let (mut e, mut s) = (e0, s0);
                while face_of[e][s] == usize::MAX {
                    face_of[e][s] = fid;
                    let v = if s == 0 { self.ends[e].0 } else { self.ends[e].1 };
                    walk.push((v, e));
                    let w = self.other(e, v);
                    let ws = if self.ends[e].0 == w { 0 } else { 1 };
                    let r = &self.rot[w];
                    let ne = r[(pos[e][ws] + 1) % r.len()];
                    e = ne;
                    s = if self.ends[ne].0 == w { 0 } else { 1 };
                }
                faces.push(walk);
            }
        }
        (faces, face_of)
    }

    /// Adds chords until every face is a triangle (where possible).
    fn triangulate(&mut self) {
        let (faces, _) = self.faces();
        for f in faces {
            let mut q: std::collections::VecDeque<(usize, usize)> = f.into_iter().collect();
            let mut fails = 0;
            while q.len() > 3 && fails <= q.len() {
                let (v0, _) = q[0];
                let (_, e1) = q[1];
                let (v2, _) = q[2];
                if v0 == v2 {
                    q.rotate_left(1);
                    fails += 1;
                    continue;
                }
                fails = 0;
                let elast = q[q.len() - 1].1;
                let c = self.ends.len();
                self.ends.push((v0, v2));
                self.arc_of.push(None);
                let p2 = self.pos_in(v2, e1);
                self.rot[v2].insert(p2 + 1, c);
                let p0 = self.pos_in(v0, elast);
                self.rot[v0].insert(p0 + 1, c);
                q.pop_front();
                q.pop_front();
                q.push_front((v0, c));
            }
        }
    }
}

/// Chosen fundamental cycle: closing edge (local ends) and the inside vertices.
struct CycleChoice {
    a: usize,
    b: usize,
    closing_arc: Option<usize>,
    inside: Vec<usize>,
    inside_weight: usize,
    outside_weight: usize,
}

struct Lifting {
    depth: Vec<usize>,
    up: Vec<Vec<usize>>,
}

impl Lifting {
    fn new(pg: &PieceGraph) -> Lifting {
        let n = pg.verts.len();
        let mut depth = vec![usize::MAX; n];
        depth[pg.troot] = 0;
        let mut stack = Vec::new();
        for v in 0..n {
            let mut x = v;
            while depth[x] == usize::MAX {
                stack.push(x);
                x = pg.tparent[x].expect("tree reaches root").0;
            }
            while let Some(y) = stack.pop() {
                depth[y] = depth[pg.tparent[y].unwrap().0] + 1;
            }
        }
        let mut up = vec![(0..n).map(|v| pg.tparent[v].map_or(v, |p| p.0)).collect::<Vec<_>>()];
        let maxd = depth.iter().copied().max().unwrap_or(0);
        let mut k = 1;
        while (1usize << k) <= maxd {
            let prev = &up[k - 1];
            let next = (0..n).map(|v| prev[prev[v]]).collect();
            up.push(next);
            k += 1;
        }
        Lifting { depth, up }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let diff = self.depth[a] - self.depth[b];
        for (k, row) in self.up.iter().enumerate() {
            if diff >> k & 1 == 1 {
                a = row[a];
            }
        }
        if a == b {
            return a;
        }
        for row in self.up.iter().rev() {
            if row[a] != row[b] {
                a = row[a];
                b = row[b];
            }
        }
        self.up[0][a]
    }
}

fn choose_cycle(pg: &mut PieceGraph) -> Result<CycleChoice, DecompositionError> {
    pg.triangulate();
    let (faces, face_of) = pg.faces();
    let m = pg.ends.len();
    let mut is_tree = vec![false; m];
    for p in pg.tparent.iter().flatten() {
        is_tree[p.1] = true;
    }
    let side = |e: usize, v: usize| if pg.ends[e].0 == v { 0 } else { 1 };
    let root_face = match pg.z {
        Some(z) if !pg.rot[z].is_empty() => face_of[pg.rot[z][0]][side(pg.rot[z][0], z)],
        _ => 0,
    };
    let nf = faces.len();
    let mut dparent: Vec<Option<usize>> = vec![None; nf];
    let mut seen = vec![false; nf];
    let mut order = vec![root_face];
    seen[root_face] = true;
    let mut i = 0;
    while i < order.len() {
        let f = order[i];
        i += 1;
        for &(v, e) in &faces[f] {
            if is_tree[e] {
                continue;
            }
            let g = face_of[e][1 - side(e, v)];
            if !seen[g] {
                seen[g] = true;
                dparent[g] = Some(e);
                order.push(g);
            }
        }
    }
    if order.len() != nf {
        return Err(DecompositionError::Invariant("dual of non-tree edges is not spanning".into()));
    }
    let mut size = vec![1usize; nf];
    let mut darts: Vec<usize> = faces.iter().map(|f| f.len()).collect();
    let mut child_face = vec![usize::MAX; m];
    for &f in order.iter().rev() {
        if let Some(e) = dparent[f] {
            child_face[e] = f;
            let (v, _) = faces[f].iter().copied().find(|&(_, x)| x == e).unwrap();
            let pf = face_of[e][1 - side(e, v)];
            size[pf] += size[f];
            darts[pf] += darts[f];
        }
    }
    let lift = Lifting::new(pg);
    let weight = pg.verts.len() - usize::from(pg.z.is_some());
    let mut best: Option<(usize, usize, usize, usize)> = None;
    for e in 0..m {
        if is_tree[e] || child_face[e] == usize::MAX {
            continue;
        }
        let (a, b) = pg.ends[e];
        let l = lift.lca(a, b);
        let clen = lift.depth[a] + lift.depth[b] - 2 * lift.depth[l] + 1;
        let fr = size[child_face[e]];
        let sr = darts[child_face[e]];
        // Euler on the inner disk: i = 1 + (S - k)/2 - F over its faces
        if 2 + sr < clen + 2 * fr {
            continue;
        }
        let inside = (2 + sr - clen - 2 * fr) / 2;
        let on_c = clen - usize::from(pg.z.is_some() && l == pg.z.unwrap());
        if inside + on_c > weight {
            continue;
        }
        let outside = weight - inside - on_c;
        let key = inside.max(outside);
        if best.map_or(true, |bst| key < bst.0) {
            best = Some((key, e, inside, outside));
        }
    }
    let (_, e, inside_w, outside_w) = best.ok_or(DecompositionError::TooSmall)?;
    let (a, b) = pg.ends[e];
    // exact inside marking
    let mut in_face = vec![false; nf];
    let mut stack = vec![child_face[e]];
    in_face[child_face[e]] = true;
    while let Some(f) = stack.pop() {
        for &(v, x) in &faces[f] {
            if is_tree[x] || x == e {
                continue;
            }
            let g = face_of[x][1 - side(x, v)];
            if !in_face[g] && dparent[g] == Some(x) {
                in_face[g] = true;
                stack.push(g);
            }
        }
    }
    let l = lift.lca(a, b);
    let mut on_cycle = vec![false; pg.verts.len()];
    for &s in &[a, b] {
        let mut x = s;
        on_cycle[x] = true;
        while x != l {
            x = pg.tparent[x].unwrap().0;
            on_cycle[x] = true;
        }
    }
    let mut mark = vec![false; pg.verts.len()];
    for f in 0..nf {
        if in_face[f] {
            for &(v, _) in &faces[f] {
                mark[v] = !on_cycle[v];
            }
        }
    }
    let inside: Vec<usize> = (0..pg.verts.len()).filter(|&v| mark[v]).collect();
    if inside.len() != inside_w || pg.z.map_or(false, |z| mark[z]) {
        return Err(DecompositionError::Invariant(format!(
            "inside count {} differs from face count estimate {}",
            inside.len(),
            inside_w
        )));
    }
    Ok(CycleChoice {
        a,
        b,
        closing_arc: pg.arc_of[e],
        inside,
        inside_weight: inside_w,
        outside_weight: outside_w,
    })
}

/// Greedy cover of a small vertex set by directed paths: start at the smallest
/// free vertex, extend backwards then forwards along the smallest arc id.
fn greedy_path_cover(g: &EmbeddedDigraph, set: &[usize]) -> Vec<Vec<usize>> {
    let mut free: BTreeSet<usize> = set.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(&s) = free.iter().next() {
        free.remove(&s);
        let mut path = std::collections::VecDeque::from(vec![s]);
        loop {
            let h = path[0];
            match g.in_arcs(h).iter().map(|&a| g.arc(a).0).find(|x| free.contains(x)) {
                Some(x) => {
                    free.remove(&x);
                    path.push_front(x);
                }
                None => break,
            }
        }
        loop {
            let t = path[path.len() - 1];
            match g.out_arcs(t).iter().map(|&a| g.arc(a).1).find(|x| free.contains(x)) {
                Some(x) => {
                    free.remove(&x);
                    path.push_back(x);
                }
                None => break,
            }
        }
        out.push(path.into_iter().collect());
    }
    out
}

struct Split {
    runs: Vec<Vec<usize>>,
    apices: Vec<usize>,
    children: Vec<Vec<usize>>,
    balance: f64,
}

fn split_piece(c: &LayeredComponent, interior: &[usize], in_z: &[bool]) -> Result<Split, DecompositionError> {
    let mut pg = PieceGraph::build(c, interior, in_z);
    let ch = choose_cycle(&mut pg)?;
    let up = |x: usize| pg.tparent[x].map(|p| p.0);
    let mut seq_a = Vec::new();
    let mut on_a = vec![false; pg.verts.len()];
    let mut x = Some(ch.a);
    while let Some(v) = x {
        if Some(v) == pg.z {
            break;
        }
        on_a[v] = true;
        seq_a.push(pg.verts[v]);
        x = up(v);
    }
    let mut seq_b = Vec::new();
    let mut x = Some(ch.b);
    while let Some(v) = x {
        if Some(v) == pg.z || on_a[v] {
            break;
        }
        seq_b.push(pg.verts[v]);
        x = up(v);
    }
    let mut apices = BTreeSet::new();
    for s in [&seq_a, &seq_b] {
        if let Some(&top) = s.last() {
            if let Some(p) = c.parent[top] {
                if in_z[p] {
                    apices.insert(p);
                }
            }
        }
    }
    if let Some(arc) = ch.closing_arc {
        let (x, y) = c.graph.arc(arc);
        for w in [x, y] {
            if in_z[w] {
                apices.insert(w);
            }
        }
    }
    let mut runs = c.runs_of(&seq_a);
    if !seq_b.is_empty() {
        runs.extend(c.runs_of(&seq_b));
    }
    let mut in_sep = vec![false; c.graph.vertex_count()];
    for &v in seq_a.iter().chain(&seq_b) {
        in_sep[v] = true;
    }
    let x1: Vec<usize> = ch.inside.iter().map(|&v| pg.verts[v]).collect();
    let mut in_x1 = vec![false; c.graph.vertex_count()];
    for &v in &x1 {
        in_x1[v] = true;
    }
    let x2: Vec<usize> = interior.iter().copied().filter(|&v| !in_sep[v] && !in_x1[v]).collect();
    if x1.len() != ch.inside_weight || x2.len() + seq_a.len() + seq_b.len() != ch.outside_weight + (interior.len() - ch.inside_weight - ch.outside_weight) {
        return Err(DecompositionError::Invariant("child sizes disagree with cycle weights".into()));
    }
    let balance = x1.len().max(x2.len()) as f64 / interior.len() as f64;
    let children = [x1, x2].into_iter().filter(|s| !s.is_empty()).map(|mut s| {
        s.sort_unstable();
        s
    });
    Ok(Split { runs, apices: apices.into_iter().collect(), children: children.collect(), balance })
}

pub fn build_decomposition_tree(c: &LayeredComponent) -> Result<DecompositionTree, DecompositionError> {
    let g = &c.graph;
    let n = g.vertex_count();
    let mut pieces: Vec<Piece> = Vec::new();
    let mut paths: Vec<SeparatorPath> = Vec::new();
    let mut sep_piece = vec![usize::MAX; n];
    let mut path_of = vec![(usize::MAX, 0); n];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((None::<usize>, 0usize, (0..n).collect::<Vec<_>>(), Vec::<usize>::new()));
    let mut in_z = vec![false; n];
    let mut in_int = vec![false; n];
    while let Some((parent_id, depth, interior, zl)) = queue.pop_front() {
        let id = pieces.len();
        for &v in &zl {
            in_z[v] = true;
        }
        for &v in &interior {
            in_int[v] = true;
        }
        let mut boundary = BTreeSet::new();
        for &v in &interior {
            for e in g.rotation(v) {
                let w = g.far_vertex(*e);
                if in_z[w] {
                    boundary.insert(w);
                }
            }
        }
        let atomic = interior.len() <= ATOMIC_SIZE;
        let split = if atomic {
            None
        } else {
            Some(split_piece(c, &interior, &in_z)?)
        };
        let (runs, apices, balance) = match &split {
            None => (greedy_path_cover(g, &interior), Vec::new(), 0.0),
            Some(s) => (s.runs.clone(), s.apices.clone(), s.balance),
        };
        let mut sep_ids = Vec::new();
        let mut separator = Vec::new();
        for (k, run) in runs.into_iter().enumerate() {
            let pid = paths.len();
            for (i, &v) in run.iter().enumerate() {
                if sep_piece[v] != usize::MAX || !in_int[v] {
                    return Err(DecompositionError::Invariant(format!("vertex {v} separated twice or outside piece {id}")));
                }
                sep_piece[v] = id;
                path_of[v] = (pid, i);
            }
            separator.extend(run.iter().copied());
            paths.push(SeparatorPath { path_id: pid, owner_piece_id: id, vertices: run, undirected_run_index: k });
            sep_ids.push(pid);
        }
        let mut child_ids = Vec::new();
        if let Some(s) = split {
            let mut zc = zl.clone();
            zc.extend(separator.iter().copied());
            for ch in s.children {
                child_ids.push(id + 1 + queue.len());
                queue.push_back((Some(id), depth + 1, ch, zc.clone()));
            }
        }
        for &v in &zl {
            in_z[v] = false;
        }
        for &v in &interior {
            in_int[v] = false;
        }
        separator.sort_unstable();
        pieces.push(Piece {
            piece_id: id,
            parent_id,
            depth,
            interior,
            boundary: boundary.into_iter().collect(),
            segments: Vec::new(),
            separator_path_ids: sep_ids,
            separator,
            apex_ids: apices,
            child_ids,
            is_atomic: atomic,
            balance,
        });
    }
    if let Some(v) = (0..n).find(|&v| sep_piece[v] == usize::MAX) {
        return Err(DecompositionError::Invariant(format!("vertex {v} is on no separator")));
    }
    for p in pieces.iter_mut() {
        let mut by_path: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &v in &p.boundary {
            by_path.entry(path_of[v].0).or_default().push(path_of[v].1);
        }
        for (pid, mut idx) in by_path {
            idx.sort_unstable();
            let mut lo = idx[0];
            for w in idx.windows(2) {
                if w[1] != w[0] + 1 {
                    p.segments.push(Segment { path_id: pid, lo, hi: w[0] });
                    lo = w[1];
                }
            }
            p.segments.push(Segment { path_id: pid, lo, hi: *idx.last().unwrap() });
        }
    }
    let mut chain = vec![Vec::new(); n];
    let mut closure = vec![Vec::new(); n];
    for v in 0..n {
        let mut x = Some(sep_piece[v]);
        while let Some(p) = x {
            chain[v].push(p);
            x = pieces[p].parent_id;
        }
        chain[v].reverse();
        closure[v] = chain[v].clone();
    }
    for p in &pieces {
        for &v in &p.boundary {
            closure[v].push(p.piece_id);
        }
    }
    for cl in closure.iter_mut() {
        cl.sort_unstable();
    }
    Ok(DecompositionTree { pieces, root_id: 0, paths, sep_piece, path_of, chain, closure })
}

impl DecompositionTree {
    pub fn piece(&self, id: usize) -> &Piece {
        &self.pieces[id]
    }

    pub fn depth(&self) -> usize {
        self.pieces.iter().map(|p| p.depth).max().unwrap_or(0)
    }

    pub fn in_interior(&self, piece_id: usize, v: usize) -> bool {
        self.chain[v].contains(&piece_id)
    }

    pub fn path(&self, path_id: usize) -> &SeparatorPath {
        &self.paths[path_id]
    }

    /// Paths of every weak ancestor of the piece, root first.
    pub fn ancestor_paths(&self, piece_id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut x = Some(piece_id);
        while let Some(p) = x {
            out.extend(self.pieces[p].separator_path_ids.iter().rev());
            x = self.pieces[p].parent_id;
        }
        out.reverse();
        out
    }

    /// Child of `piece_id` whose interior holds `v`, if any.
    pub fn child_containing(&self, piece_id: usize, v: usize) -> Option<usize> {
        let ch = &self.chain[v];
        let i = ch.iter().position(|&p| p == piece_id)?;
        ch.get(i + 1).copied()
    }
}

/// Whether every u-v path inside the piece must touch its separator or apices.
pub fn separates(dt: &DecompositionTree, piece_id: usize, u: usize, v: usize) -> Result<bool, DecompositionError> {
    let p = &dt.pieces[piece_id];
    for &x in &[u, v] {
        if !dt.in_interior(piece_id, x) && p.boundary.binary_search(&x).is_err() {
            return Err(DecompositionError::NotInPiece(x, piece_id));
        }
    }
    let hit = |x: usize| !dt.in_interior(piece_id, x) || dt.sep_piece[x] == piece_id || p.apex_ids.contains(&x);
    if hit(u) || hit(v) {
        return Ok(true);
    }
    Ok(dt.child_containing(piece_id, u) != dt.child_containing(piece_id, v))
}

/// Pieces holding `v` in their interior, root first.
pub fn ancestor_pieces(dt: &DecompositionTree, v: usize) -> Vec<usize> {
    dt.chain[v].clone()
}

/// Checks depth, balance, separator disjointness and apex counts.
pub fn validate_decomposition(dt: &DecompositionTree) -> Result<(), DecompositionError> {
    let n = dt.sep_piece.len();
    let bad = |s: String| Err(DecompositionError::Invariant(s));
    let limit = DEPTH_FACTOR * (n.max(2) as f64).log2();
    if dt.depth() as f64 > limit.max(1.0) {
        return bad(format!("depth {} above {limit:.1}", dt.depth()));
    }
    let mut owner = vec![usize::MAX; n];
    for p in &dt.pieces {
        if !p.is_atomic && p.balance > 0.75 {
            return bad(format!("piece {} balance {:.3}", p.piece_id, p.balance));
        }
        if p.apex_ids.len() > 2 {
            return bad(format!("piece {} has {} apices", p.piece_id, p.apex_ids.len()));
        }
        for &v in &p.separator {
            if owner[v] != usize::MAX {
                return bad(format!("vertex {v} on separators of {} and {}", owner[v], p.piece_id));
            }
            owner[v] = p.piece_id;
        }
        if let Some(q) = p.parent_id {
            let w = |id: usize| dt.pieces[id].interior.len() as f64;
            if w(p.piece_id) > 0.75 * w(q) {
                return bad(format!("piece {} too heavy for its parent", p.piece_id));
            }
        }
    }
    Ok(())
}

impl DecompositionTree {
    /// Same pieces with every separator path read backwards, for the reversed graph.
    pub fn reversed(&self) -> DecompositionTree {
        let mut dt = self.clone();
        for p in dt.paths.iter_mut() {
            p.vertices.reverse();
        }
        for v in 0..dt.path_of.len() {
            let (pid, i) = dt.path_of[v];
            if pid != usize::MAX {
                dt.path_of[v] = (pid, self.paths[pid].vertices.len() - 1 - i);
            }
        }
        for piece in dt.pieces.iter_mut() {
            for s in piece.segments.iter_mut() {
                let len = self.paths[s.path_id].vertices.len();
                *s = Segment { path_id: s.path_id, lo: len - 1 - s.hi, hi: len - 1 - s.lo };
            }
        }
        dt
    }

    /// Whether `a` is an ancestor of `b` or equal to it.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut x = Some(b);
        while let Some(p) = x {
            if p == a {
                return true;
            }
            if self.pieces[p].depth <= self.pieces[a].depth {
                return false;
            }
            x = self.pieces[p].parent_id;
        }
        false
    }
}
