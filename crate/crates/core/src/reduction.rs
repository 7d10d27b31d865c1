//! Layered components with a spanning tree whose paths are few directed runs.
//!
//! Layers: L0 is everything reachable from vertex 0. Odd layers take the
//! unlayered vertices that reach the layered part, even layers those reached
//! from it. Component i is G[L0..Li] with L0..L(i-2) contracted into one
//! artificial root, which ends up a pure sink (i even) or source (i odd).

use std::collections::HashMap;

use thiserror::Error;

use crate::planar_core::{contracted_rotation, reach_mask, split_into_runs, ArcEnd, DirectedPath, EmbeddedDigraph};

pub const PATH_BOUND: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("vertices {0} and {1} share no component")]
    DifferentComponents(usize, usize),
    #[error("tree path {0}-{1} splits into {2} directed runs")]
    PathBoundExceeded(usize, usize, usize),
}

#[derive(Debug, Clone)]
pub struct LayeredComponent {
    pub id: usize,
    pub graph: EmbeddedDigraph,
    /// Local vertex -> vertex of the input graph; `None` for the contracted root.
    pub global: Vec<Option<usize>>,
    pub local: HashMap<usize, usize>,
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub parent_arc: Vec<Option<usize>>,
    pub layer_of: Vec<usize>,
    pub path_bound: usize,
}

/// Per input vertex: (component id, local id), at most two entries.
#[derive(Debug, Clone, Default)]
pub struct ComponentMap {
    pub entries: Vec<Vec<(usize, usize)>>,
}

pub fn compute_layers(g: &EmbeddedDigraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut layer = vec![usize::MAX; n];
    if n == 0 {
        return layer;
    }
    let all = vec![true; n];
    let first = reach_mask(g, &[0], &all, false);
    let mut left = n;
    for v in 0..n {
        if first[v] {
            layer[v] = 0;
            left -= 1;
        }
    }
    let mut i = 0;
    while left > 0 {
        i += 1;
        let layered: Vec<usize> = (0..n).filter(|&v| layer[v] != usize::MAX).collect();
        let seen = reach_mask(g, &layered, &all, i % 2 == 1);
        for v in 0..n {
            if seen[v] && layer[v] == usize::MAX {
                layer[v] = i;
                left -= 1;
            }
        }
    }
    layer
}

pub fn build_layering(g: &EmbeddedDigraph) -> (Vec<LayeredComponent>, ComponentMap) {
    let n = g.vertex_count();
    let layer = compute_layers(g);
    let top = layer.iter().copied().max().unwrap_or(0);
    let mut comps = Vec::new();
    let mut map = ComponentMap { entries: vec![Vec::new(); n] };
    if n == 0 {
        return (comps, map);
    }
    let last = top.max(1);
    for i in 1..=last {
        let c = build_component(g, &layer, i, comps.len());
        for (lv, gv) in c.global.iter().enumerate() {
            if let Some(gv) = gv {
                map.entries[*gv].push((c.id, lv));
            }
        }
        comps.push(c);
    }
    (comps, map)
}

fn build_component(g: &EmbeddedDigraph, layer: &[usize], i: usize, id: usize) -> LayeredComponent {
    let n = g.vertex_count();
    let contract = i >= 2;
    let in_x = |v: usize| contract && layer[v] + 2 <= i;
    let in_c = |v: usize| layer[v] <= i;
    // local ids: root first when contracted, then real vertices ascending
    let mut global: Vec<Option<usize>> = Vec::new();
    let mut local = HashMap::new();
    if contract {
        global.push(None);
    }
    for v in 0..n {
        if in_c(v) && !in_x(v) {
            local.insert(v, global.len());
            global.push(Some(v));
        }
    }
    let lid = |v: usize| -> usize { if in_x(v) { 0 } else { local[&v] } };

    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut arc_map: HashMap<usize, usize> = HashMap::new();
    for a in 0..g.arc_count() {
        let (x, y) = g.arc(a);
        if !in_c(x) || !in_c(y) || (in_x(x) && in_x(y)) {
            continue;
        }
        arc_map.insert(a, arcs.len());
        arcs.push((lid(x), lid(y)));
    }
    let conv = |e: &ArcEnd| ArcEnd { arc: arc_map[&e.arc], head: e.head };
    let mut rotation: Vec<Vec<ArcEnd>> = vec![Vec::new(); global.len()];
    for v in 0..n {
        if in_c(v) && !in_x(v) {
            rotation[local[&v]] = g.rotation(v).iter().filter(|e| arc_map.contains_key(&e.arc)).map(conv).collect();
        }
    }
    if contract {
        rotation[0] = contracted_rotation(g, &in_x, &in_c).iter().map(conv).collect();
    }
    let graph = EmbeddedDigraph::new(global.len(), arcs, rotation).expect("component graph");
    let layer_of: Vec<usize> = global.iter().map(|v| v.map_or_else(|| i - 2, |v| layer[v])).collect();
    let root = if contract { 0 } else { local[&0] };
    let (parent, parent_arc) = layered_tree(&graph, root, &layer_of, i);
    LayeredComponent { id, graph, global, local, root, parent, parent_arc, layer_of, path_bound: PATH_BOUND }
}

/// In-tree of the odd layer towards the root and out-forest of the even
/// layer (mirrored for odd components). Searches expand arcs by ascending id.
fn layered_tree(g: &EmbeddedDigraph, root: usize, layer_of: &[usize], i: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut parent_arc = vec![None; n];
    let mut done = vec![false; n];
    done[root] = true;
    // first layer of the component (index i-1) hangs off the root, then layer i
    let phases: [(usize, bool); 2] = [(i - 1, (i - 1) % 2 == 1), (i, i % 2 == 1)];
    for (k, &(lay, backward)) in phases.iter().enumerate() {
        let mut queue: std::collections::VecDeque<usize> = (0..n).filter(|&v| done[v]).collect();
        if k == 0 && i == 1 {
            // G_1: L0 is an out-tree from vertex 0 itself
            queue = std::collections::VecDeque::from(vec![root]);
        }
        while let Some(v) = queue.pop_front() {
            let list = if backward { g.in_arcs(v) } else { g.out_arcs(v) };
            for &a in list {
                let (x, y) = g.arc(a);
                let w = if backward { x } else { y };
                if !done[w] && layer_of[w] == lay {
                    done[w] = true;
                    parent[w] = Some(v);
                    parent_arc[w] = Some(a);
                    queue.push_back(w);
                }
            }
        }
    }
    assert!(done.iter().all(|&d| d), "layered tree does not span the component");
    (parent, parent_arc)
}

impl LayeredComponent {
    pub fn depth_of(&self, mut v: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent[v] {
            v = p;
            d += 1;
        }
        d
    }

    /// Tree path from u to v as a vertex sequence (local ids).
    pub fn tree_path(&self, u: usize, v: usize) -> Vec<usize> {
        let mut a = vec![u];
        let mut x = u;
        while let Some(p) = self.parent[x] {
            a.push(p);
            x = p;
        }
        let mut b = vec![v];
        let mut y = v;
        while let Some(p) = self.parent[y] {
            b.push(p);
            y = p;
        }
        while a.len() >= 2 && b.len() >= 2 && a[a.len() - 2] == b[b.len() - 2] {
            a.pop();
            b.pop();
        }
        b.pop();
        b.reverse();
        a.extend(b);
        a
    }

    /// Whether the tree edge between parent-child pair (x,y) points from x to y.
    pub fn tree_edge_forward(&self, x: usize, y: usize) -> bool {
        if self.parent[y] == Some(x) {
            self.graph.arc(self.parent_arc[y].unwrap()).0 == x
        } else {
            self.graph.arc(self.parent_arc[x].unwrap()).0 == x
        }
    }

    pub fn runs_of(&self, seq: &[usize]) -> Vec<Vec<usize>> {
        let fw: Vec<bool> = seq.windows(2).map(|w| self.tree_edge_forward(w[0], w[1])).collect();
        split_into_runs(seq, &fw)
    }
}

/// Tree path between two local vertices split into directed runs.
pub fn tree_path_decomposition(c: &LayeredComponent, u: usize, v: usize) -> Result<Vec<DirectedPath>, ReductionError> {
    if u == v {
        return Ok(Vec::new());
    }
    let seq = c.tree_path(u, v);
    let runs = c.runs_of(&seq);
    if runs.len() > c.path_bound {
        return Err(ReductionError::PathBoundExceeded(u, v, runs.len()));
    }
    Ok(runs.into_iter().enumerate().map(|(i, r)| DirectedPath::new(i, r)).collect())
}

/// Same as [`tree_path_decomposition`] but addressed by input-graph ids.
pub fn tree_path_decomposition_global(
    comps: &[LayeredComponent],
    map: &ComponentMap,
    u: usize,
    v: usize,
) -> Result<Vec<DirectedPath>, ReductionError> {
    for &(cu, lu) in &map.entries[u] {
        if let Some(&(_, lv)) = map.entries[v].iter().find(|e| e.0 == cu) {
            return tree_path_decomposition(&comps[cu], lu, lv);
        }
    }
    Err(ReductionError::DifferentComponents(u, v))
}
