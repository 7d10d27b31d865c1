//! Embedded directed planar multigraphs given by a rotation system.
//!
//! Vertices are `0..n`. Each arc has a tail-end and a head-end; the rotation
//! of a vertex lists its incident arc-ends in counter-clockwise order.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("unknown arc {0}")]
    UnknownArc(usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("cut arcs do not form vertex-disjoint simple paths: {0}")]
    BadCut(String),
}

/// One end of an arc, as it appears in a rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcEnd {
    pub arc: usize,
    pub head: bool,
}

impl ArcEnd {
    pub fn tail(arc: usize) -> Self {
        ArcEnd { arc, head: false }
    }
    pub fn head(arc: usize) -> Self {
        ArcEnd { arc, head: true }
    }
    pub fn twin(self) -> Self {
        ArcEnd { arc: self.arc, head: !self.head }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedDigraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    rotation: Vec<Vec<ArcEnd>>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub face_count: usize,
    pub ok: bool,
    pub violation: Option<String>,
}

impl EmbeddedDigraph {
    /// Builds a graph without checking the embedding; see [`validate_embedding`].
    pub fn new(n: usize, arcs: Vec<(usize, usize)>, rotation: Vec<Vec<ArcEnd>>) -> Result<Self, GraphError> {
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        for (i, &(a, b)) in arcs.iter().enumerate() {
            if a >= n {
                return Err(GraphError::UnknownVertex(a));
            }
            if b >= n {
                return Err(GraphError::UnknownVertex(b));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            out_arcs[a].push(i);
            in_arcs[b].push(i);
        }
        let mut rotation = rotation;
        rotation.resize(n, Vec::new());
        for rot in &rotation {
            for e in rot {
                if e.arc >= arcs.len() {
                    return Err(GraphError::UnknownArc(e.arc));
                }
            }
        }
        Ok(EmbeddedDigraph { n, arcs, rotation, out_arcs, in_arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }
    pub fn arc(&self, i: usize) -> (usize, usize) {
        self.arcs[i]
    }
    pub fn rotation(&self, v: usize) -> &[ArcEnd] {
        &self.rotation[v]
    }
    /// Outgoing arc ids of `v`, ascending.
    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }
    /// Incoming arc ids of `v`, ascending.
    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_arcs[v]
    }

    /// Vertex an arc-end is attached to.
    pub fn end_vertex(&self, e: ArcEnd) -> usize {
        let (a, b) = self.arcs[e.arc];
        if e.head {
            b
        } else {
            a
        }
    }

    /// Vertex at the far side of an arc-end.
    pub fn far_vertex(&self, e: ArcEnd) -> usize {
        self.end_vertex(e.twin())
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n
    }
}

/// Position of every arc-end inside its rotation; `None` if missing.
pub(crate) fn end_positions(g: &EmbeddedDigraph) -> Vec<[Option<usize>; 2]> {
    let mut pos = vec![[None, None]; g.arc_count()];
    for v in 0..g.vertex_count() {
        for (i, e) in g.rotation(v).iter().enumerate() {
            pos[e.arc][e.head as usize] = Some(i);
        }
    }
    pos
}

/// Counts faces of the rotation system. Assumes every arc-end is placed once.
pub fn count_faces(g: &EmbeddedDigraph) -> usize {
    face_walks(g).len()
}

/// Vertex sequence of every face walk.
pub fn face_walks(g: &EmbeddedDigraph) -> Vec<Vec<usize>> {
    let pos = end_positions(g);
    let m = g.arc_count();
    let mut seen = vec![false; 2 * m];
    let mut faces = Vec::new();
    for start in 0..2 * m {
        if seen[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            // dart d leaves end_vertex(e) along arc; step to the far vertex
            // and take the successor of the twin in that rotation.
            let e = ArcEnd { arc: d / 2, head: d % 2 == 1 };
            walk.push(g.end_vertex(e));
            let t = e.twin();
            let w = g.end_vertex(t);
            let rot = g.rotation(w);
            let p = pos[t.arc][t.head as usize].expect("placed arc-end");
            let nx = rot[(p + 1) % rot.len()];
            d = nx.arc * 2 + nx.head as usize;
        }
        faces.push(walk);
    }
    faces
}

pub fn validate_embedding(g: &EmbeddedDigraph) -> ValidationReport {
    let fail = |msg: String| ValidationReport { face_count: 0, ok: false, violation: Some(msg) };
    let n = g.vertex_count();
    let mut count = vec![[0usize; 2]; g.arc_count()];
    for v in 0..n {
        for e in g.rotation(v) {
            if g.end_vertex(*e) != v {
                return fail(format!("arc-end of arc {} listed at wrong vertex {}", e.arc, v));
            }
            count[e.arc][e.head as usize] += 1;
        }
    }
    for (i, c) in count.iter().enumerate() {
        if c[0] == 0 || c[1] == 0 {
            return fail(format!("dangling arc-end of arc {}", i));
        }
        if c[0] > 1 || c[1] > 1 {
            return fail(format!("duplicated arc-end of arc {}", i));
        }
    }
    if n > 0 && !is_weakly_connected(g) {
        return fail("underlying graph is disconnected".to_string());
    }
    if n == 0 {
        return ValidationReport { face_count: 0, ok: true, violation: None };
    }
    let f = if g.arc_count() == 0 { 1 } else { count_faces(g) };
    let euler = n as i64 - g.arc_count() as i64 + f as i64;
    if euler != 2 {
        return ValidationReport {
            face_count: f,
            ok: false,
            violation: Some(format!("Euler relation fails: V-E+F = {}", euler)),
        };
    }
    ValidationReport { face_count: f, ok: true, violation: None }
}

fn is_weakly_connected(g: &EmbeddedDigraph) -> bool {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut cnt = 1;
    while let Some(v) = stack.pop() {
        for &a in g.out_arcs(v).iter().chain(g.in_arcs(v)) {
            let (x, y) = g.arc(a);
            let w = if x == v { y } else { x };
            if !seen[w] {
                seen[w] = true;
                cnt += 1;
                stack.push(w);
            }
        }
    }
    cnt == n
}

/// Reverses every arc. Arc-end flags are swapped so that each rotation
/// still lists the same edges in the same order.
pub fn reverse_orientation(g: &EmbeddedDigraph) -> EmbeddedDigraph {
    let arcs = g.arcs().iter().map(|&(a, b)| (b, a)).collect();
    let rotation = (0..g.vertex_count())
        .map(|v| g.rotation(v).iter().map(|e| e.twin()).collect())
        .collect();
    EmbeddedDigraph::new(g.vertex_count(), arcs, rotation).expect("reversal of a valid graph")
}

/// Vertex-induced view of a graph. Arcs survive iff both ends are kept.
#[derive(Debug, Clone)]
pub struct SubgraphView<'a> {
    pub base: &'a EmbeddedDigraph,
    pub allowed: Vec<bool>,
}

impl<'a> SubgraphView<'a> {
    pub fn full(base: &'a EmbeddedDigraph) -> Self {
        SubgraphView { base, allowed: vec![true; base.vertex_count()] }
    }

    pub fn without(base: &'a EmbeddedDigraph, removed: &[usize]) -> Self {
        let mut v = Self::full(base);
        for &x in removed {
            v.allowed[x] = false;
        }
        v
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.allowed.len() && self.allowed[v]
    }

    pub fn arcs(&self) -> Vec<usize> {
        (0..self.base.arc_count())
            .filter(|&i| {
                let (a, b) = self.base.arc(i);
                self.allowed[a] && self.allowed[b]
            })
            .collect()
    }

    pub fn reach_set(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        if v >= self.allowed.len() {
            return Err(GraphError::UnknownVertex(v));
        }
        if !self.allowed[v] {
            return Ok(Vec::new());
        }
        let seen = reach_mask(self.base, &[v], &self.allowed, false);
        Ok((0..seen.len()).filter(|&i| seen[i]).collect())
    }
}

pub fn induced_subgraph<'a>(g: &'a EmbeddedDigraph, keep: &[usize]) -> Result<SubgraphView<'a>, GraphError> {
    let mut allowed = vec![false; g.vertex_count()];
    for &v in keep {
        if v >= g.vertex_count() {
            return Err(GraphError::UnknownVertex(v));
        }
        allowed[v] = true;
    }
    Ok(SubgraphView { base: g, allowed })
}

/// Vertices reachable from `v` in `g`, ascending.
pub fn reach_set(g: &EmbeddedDigraph, v: usize) -> Result<Vec<usize>, GraphError> {
    SubgraphView::full(g).reach_set(v)
}

/// Multi-source search restricted to `allowed`; `backward` follows arcs in reverse.
/// Sources outside `allowed` are ignored.
pub fn reach_mask(g: &EmbeddedDigraph, sources: &[usize], allowed: &[bool], backward: bool) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if allowed[s] && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let list = if backward { g.in_arcs(v) } else { g.out_arcs(v) };
        for &a in list {
            let (x, y) = g.arc(a);
            let w = if backward { x } else { y };
            if allowed[w] && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Result of cutting a graph open along paths.
#[derive(Debug, Clone)]
pub struct Incision {
    pub graph: EmbeddedDigraph,
    /// For every vertex of the new graph, the vertex of the input it came from.
    pub origin: Vec<usize>,
    /// For every arc of the new graph, the arc of the input it copies.
    pub arc_origin: Vec<usize>,
}

/// Cuts `g` open along `cut_arcs`. Every cut edge is doubled and every
/// interior vertex of a cut path is split in two, so each cut path becomes
/// a slit bounded by one new face.
pub fn incise_along(g: &EmbeddedDigraph, cut_arcs: &[usize]) -> Result<Incision, GraphError> {
    let n = g.vertex_count();
    let mut is_cut = vec![false; g.arc_count()];
    let mut deg: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &a in cut_arcs {
        if a >= g.arc_count() {
            return Err(GraphError::UnknownArc(a));
        }
        if is_cut[a] {
            continue;
        }
        is_cut[a] = true;
        let (x, y) = g.arc(a);
        deg[x].push(a);
        deg[y].push(a);
    }
    if deg.iter().any(|d| d.len() > 2) {
        return Err(GraphError::BadCut("vertex of degree > 2".into()));
    }
    // walk each path from its lower-id endpoint
    let mut used = vec![false; g.arc_count()];
    let mut paths: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for v in 0..n {
        if deg[v].len() != 1 || used[deg[v][0]] {
            continue;
        }
        let mut verts = vec![v];
        let mut edges = Vec::new();
        let mut cur = v;
        let mut e = deg[v][0];
        loop {
            used[e] = true;
            edges.push(e);
            let (x, y) = g.arc(e);
            cur = if x == cur { y } else { x };
            verts.push(cur);
            match deg[cur].iter().find(|&&a| !used[a]) {
                Some(&a) => e = a,
                None => break,
            }
        }
        paths.push((verts, edges));
    }
    if cut_arcs.iter().any(|&a| !used[a]) {
        return Err(GraphError::BadCut("cut contains a cycle".into()));
    }

    let mut arcs = g.arcs().to_vec();
    let mut arc_origin: Vec<usize> = (0..g.arc_count()).collect();
    let mut rotation: Vec<Vec<ArcEnd>> = (0..n).map(|v| g.rotation(v).to_vec()).collect();
    let mut origin: Vec<usize> = (0..n).collect();
    let pos = end_positions(g);
    for (verts, edges) in &paths {
        let k = edges.len();
        // duplicate arcs, same direction; tails/heads fixed below
        let dup: Vec<usize> = edges
            .iter()
            .map(|&e| {
                arcs.push(g.arc(e));
                arc_origin.push(e);
                arcs.len() - 1
            })
            .collect();
        let end_at = |e: usize, v: usize| -> ArcEnd {
            let (x, _) = g.arc(e);
            if x == v {
                ArcEnd::tail(e)
            } else {
                ArcEnd::head(e)
            }
        };
        // first endpoint: duplicate goes just before the original
        {
            let v = verts[0];
            let oe = end_at(edges[0], v);
            let p = pos[oe.arc][oe.head as usize].unwrap();
            let de = ArcEnd { arc: dup[0], head: oe.head };
            let mut r = g.rotation(v).to_vec();
            r.insert(p, de);
            rotation[v] = r;
        }
        // last endpoint: duplicate goes just after the original
        {
            let v = verts[k];
            let oe = end_at(edges[k - 1], v);
            let p = pos[oe.arc][oe.head as usize].unwrap();
            let de = ArcEnd { arc: dup[k - 1], head: oe.head };
            let mut r = g.rotation(v).to_vec();
            r.insert(p + 1, de);
            rotation[v] = r;
        }
        for i in 1..k {
            let v = verts[i];
            let rot = g.rotation(v);
            let len = rot.len();
            let out_e = end_at(edges[i], v);
            let in_e = end_at(edges[i - 1], v);
            let po = pos[out_e.arc][out_e.head as usize].unwrap();
            let pi = pos[in_e.arc][in_e.head as usize].unwrap();
            // left copy keeps [out .. in] counter-clockwise
            let mut left = Vec::new();
            let mut j = po;
            loop {
                left.push(rot[j]);
                if j == pi {
                    break;
                }
                j = (j + 1) % len;
            }
            // right copy takes [in .. out] with both path ends replaced by duplicates
            let mut right = Vec::new();
            let mut j = pi;
            loop {
                let e = rot[j];
                if j == pi {
                    right.push(ArcEnd { arc: dup[i - 1], head: e.head });
                } else if j == po {
                    right.push(ArcEnd { arc: dup[i], head: e.head });
                } else {
                    right.push(e);
                }
                if j == po {
                    break;
                }
                j = (j + 1) % len;
            }
            let nv = origin.len();
            origin.push(v);
            for e in &right {
                let (x, y) = &mut arcs[e.arc];
                if e.head {
                    *y = nv;
                } else {
                    *x = nv;
                }
            }
            rotation[v] = left;
            rotation.push(right);
        }
    }
    let graph = EmbeddedDigraph::new(origin.len(), arcs, rotation)?;
    Ok(Incision { graph, origin, arc_origin })
}

/// Simple directed path; `position` inverts `vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedPath {
    pub path_id: usize,
    pub vertices: Vec<usize>,
    pub position: std::collections::HashMap<usize, usize>,
}

impl DirectedPath {
    pub fn new(path_id: usize, vertices: Vec<usize>) -> Self {
        let position = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        DirectedPath { path_id, vertices, position }
    }
    pub fn len(&self) -> usize {
        self.vertices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.position.get(&v).copied()
    }
    /// Checks that consecutive vertices are joined by forward arcs.
    pub fn is_directed_in(&self, g: &EmbeddedDigraph) -> bool {
        self.vertices
            .windows(2)
            .all(|w| g.out_arcs(w[0]).iter().any(|&a| g.arc(a).1 == w[1]))
    }
}

/// Splits a walk into maximal same-direction runs. `forward[i]` tells whether
/// the edge between `seq[i]` and `seq[i+1]` points along the walk. Runs
/// partition the vertices; each run is returned in arc direction.
pub fn split_into_runs(seq: &[usize], forward: &[bool]) -> Vec<Vec<usize>> {
    let mut runs: Vec<Vec<usize>> = Vec::new();
    if seq.is_empty() {
        return runs;
    }
    let mut cur = vec![seq[0]];
    let mut dir: Option<bool> = None;
    for i in 0..forward.len() {
        match dir {
            None => {
                dir = Some(forward[i]);
                cur.push(seq[i + 1]);
            }
            Some(d) if d == forward[i] => cur.push(seq[i + 1]),
            Some(d) => {
                if !d {
                    cur.reverse();
                }
                runs.push(std::mem::take(&mut cur));
                cur.push(seq[i + 1]);
                dir = None;
            }
        }
    }
    if dir == Some(false) {
        cur.reverse();
    }
    runs.push(cur);
    runs
}

/// Cyclic order of the arc-ends joining the connected set `in_x` to the kept
/// set `in_c`, found by walking around a spanning tree of `in_x`.
pub fn contracted_rotation(g: &EmbeddedDigraph, in_x: &dyn Fn(usize) -> bool, in_c: &dyn Fn(usize) -> bool) -> Vec<ArcEnd> {
    let n = g.vertex_count();
    let start = (0..n).find(|&v| in_x(v)).expect("nonempty contracted set");
    let mut tree_arc = vec![false; g.arc_count()];
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for e in g.rotation(v) {
            let w = g.far_vertex(*e);
            if in_x(w) && !seen[w] {
                seen[w] = true;
                tree_arc[e.arc] = true;
                stack.push(w);
            }
        }
    }
    let pos = end_positions(g);
    let mut out = Vec::new();
    let rot0 = g.rotation(start);
    if rot0.is_empty() {
        return out;
    }
    let (mut v, mut p) = (start, 0usize);
    let total = 2 * g.arc_count() + 1;
    for _ in 0..total * 2 {
        let e = g.rotation(v)[p];
        let w = g.far_vertex(e);
        if tree_arc[e.arc] {
            let t = e.twin();
            let q = pos[t.arc][t.head as usize].unwrap();
            v = w;
            p = (q + 1) % g.rotation(v).len();
        } else {
            if !in_x(w) && in_c(w) {
                out.push(e);
            }
            p = (p + 1) % g.rotation(v).len();
        }
        if v == start && p == 0 {
            break;
        }
    }
    out
}

