//! Answers "does s reach t in G - f" from the three vertex labels alone.

use thiserror::Error;

use crate::ft_labels::{Bundle, ComponentLabel, Interval, VAfter, VertexLabel};
use crate::nonfaulty_labels::nf_query;
use crate::secondary_path_labels::{sec_query_first, SecondaryError, SecondaryLabel, Target};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("label of vertex {0} lacks the {1} record it should hold")]
    MissingRecord(usize, &'static str),
    #[error(transparent)]
    Secondary(#[from] SecondaryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Fwd,
    Rev,
}

impl Side {
    fn flip(self) -> Side {
        match self {
            Side::Fwd => Side::Rev,
            Side::Rev => Side::Fwd,
        }
    }
}

fn bundle(c: &ComponentLabel, o: Side) -> &Bundle {
    match o {
        Side::Fwd => &c.fwd,
        Side::Rev => &c.rev,
    }
}

fn min_opt(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn le(a: Option<u32>, b: Option<u32>) -> bool {
    matches!((a, b), (Some(x), Some(y)) if x <= y)
}

/// Entry candidates from x's intervals on P: the earliest one before f
/// and the earliest one after f.
fn pick_entries(ivs: &[Interval], after: Option<&VAfter>, fk: u32) -> Vec<(u32, SecondaryLabel)> {
    let mut out = Vec::new();
    if let Some(iv) = ivs.first().filter(|iv| iv.lo < fk) {
        out.extend(iv.start_sec.clone().map(|s| (iv.lo, s)));
    }
    match after.and_then(|va| va.v.map(|v| (v, va))) {
        Some((v, va)) if ivs.iter().any(|iv| iv.lo <= v && v <= iv.hi) => out.extend(va.sec.clone().map(|s| (v, s))),
        _ => {
            if let Some(iv) = ivs.iter().find(|iv| iv.lo > fk) {
                out.extend(iv.start_sec.clone().map(|s| (iv.lo, s)));
            }
        }
    }
    out
}

/// Query context for one shared component.
struct Q<'l> {
    f: &'l ComponentLabel,
    /// Depth of the deepest piece common to all three chains.
    k: usize,
    touched: &'l mut usize,
}

pub fn ft_query(s: &VertexLabel, t: &VertexLabel, f: &VertexLabel) -> Result<bool, QueryError> {
    let mut touched = 0;
    ft_query_counted(s, t, f, &mut touched)
}

/// Like [`ft_query`], adding the number of label records read to `touched`.
pub fn ft_query_counted(s: &VertexLabel, t: &VertexLabel, f: &VertexLabel, touched: &mut usize) -> Result<bool, QueryError> {
    if s.vertex_id == f.vertex_id || t.vertex_id == f.vertex_id {
        return Ok(false);
    }
    if s.vertex_id == t.vertex_id {
        return Ok(true);
    }
    for ps in &s.parts {
        let Some(pt) = t.parts.iter().find(|p| p.component == ps.component) else { continue };
        *touched += 2;
        let hit = match f.parts.iter().find(|p| p.component == ps.component) {
            None => nf_query(&ps.fwd.nf, &pt.fwd.nf),
            Some(pf) => component_query(ps, pt, pf, touched)?,
        };
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Forward,
    Reverse,
}

/// Where a query lands inside one component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryContext {
    pub orientation: Orientation,
    /// Deepest piece whose interior holds s, t and f.
    pub hat_piece_id: usize,
    /// Child of the hat piece holding the target side, if any.
    pub target_child_id: Option<usize>,
    pub separator_path_ids: Vec<usize>,
    pub f_on_q: bool,
}

fn common_depth(a: &[usize], b: &[usize], c: &[usize]) -> usize {
    a.iter().zip(b).zip(c).take_while(|((x, y), z)| x == y && y == z).count()
}

/// Picks the hat piece and the orientation: reverse when t and f sit in the
/// same child, so that the target side never holds f.
pub fn resolve_context(s: &ComponentLabel, t: &ComponentLabel, f: &ComponentLabel) -> QueryContext {
    let k = common_depth(&s.chain, &t.chain, &f.chain);
    let hat = f.chain[k - 1];
    let ct = t.chain.get(k).copied();
    let reverse = ct.is_some() && ct == f.chain.get(k).copied();
    QueryContext {
        orientation: if reverse { Orientation::Reverse } else { Orientation::Forward },
        hat_piece_id: hat,
        target_child_id: if reverse { s.chain.get(k).copied() } else { ct },
        separator_path_ids: f.pieces[&hat].paths.iter().map(|e| e.0).collect(),
        f_on_q: f.chain.len() == k,
    }
}

fn component_query(s: &ComponentLabel, t: &ComponentLabel, f: &ComponentLabel, touched: &mut usize) -> Result<bool, QueryError> {
    let ctx = resolve_context(s, t, f);
    dispatch(&ctx, s, t, f, touched, ctx.f_on_q)
}

fn dispatch(ctx: &QueryContext, s: &ComponentLabel, t: &ComponentLabel, f: &ComponentLabel, touched: &mut usize, on_q: bool) -> Result<bool, QueryError> {
    let k = common_depth(&s.chain, &t.chain, &f.chain);
    let (x, y, o) = match ctx.orientation {
        Orientation::Reverse => (t, s, Side::Rev),
        Orientation::Forward => (s, t, Side::Fwd),
    };
    let mut q = Q { f, k, touched };
    if on_q {
        let (pid, fk) = q.own_pos(f, o)?;
        q.on_path(x, y, o, pid, fk)
    } else {
        q.off_path(x, y, o)
    }
}

/// Answer for a context whose fault lies off the hat separator.
pub fn query_f_outside_q(ctx: &QueryContext, s: &ComponentLabel, t: &ComponentLabel, f: &ComponentLabel) -> Result<bool, QueryError> {
    dispatch(ctx, s, t, f, &mut 0, false)
}

/// Answer for a context whose fault lies on a hat separator path.
pub fn query_f_on_q(ctx: &QueryContext, s: &ComponentLabel, t: &ComponentLabel, f: &ComponentLabel) -> Result<bool, QueryError> {
    dispatch(ctx, s, t, f, &mut 0, true)
}

/// First index on path `pid` that x reaches in G - f (in the reversed graph
/// with the path read backwards when `reverse`). The path must belong to a
/// piece holding both x and f in its interior and must avoid f.
pub fn corollary_first(x: &ComponentLabel, f: &ComponentLabel, pid: usize, reverse: bool) -> Result<Option<u32>, QueryError> {
    let mut touched = 0;
    let k = common_depth(&x.chain, &f.chain, &f.chain);
    let mut q = Q { f, k, touched: &mut touched };
    q.first(x, if reverse { Side::Rev } else { Side::Fwd }, pid)
}

impl<'l> Q<'l> {
    fn hat(&self) -> usize {
        self.f.chain[self.k - 1]
    }

    /// Paths of the common piece and its ancestors.
    fn hat_paths(&self) -> Vec<(usize, u32)> {
        self.f.chain[..self.k].iter().flat_map(|p| self.f.pieces[p].paths.iter().copied()).collect()
    }

    /// Path of the common piece holding v, with v's index on it.
    fn own_pos(&mut self, v: &ComponentLabel, o: Side) -> Result<(usize, usize), QueryError> {
        let hat = self.hat();
        let b = bundle(v, o);
        for &(pid, _) in &v.pieces[&hat].paths {
            *self.touched += 1;
            if let Some(i) = b.nf.entries.get(&pid).and_then(|e| e.own) {
                return Ok((pid, i as usize));
            }
        }
        Err(QueryError::MissingRecord(v.local, "own path index"))
    }

    fn same_child_sub(&mut self, x: &ComponentLabel, y: &ComponentLabel, o: Side) -> bool {
        let (Some(cx), Some(cy)) = (x.chain.get(self.k), y.chain.get(self.k)) else { return false };
        if cx != cy {
            return false;
        }
        *self.touched += 2;
        match (bundle(x, o).sub.get(cx), bundle(y, o).sub.get(cy)) {
            (Some(a), Some(b)) => nf_query(a, b),
            _ => false,
        }
    }

    fn off_path(&mut self, x: &ComponentLabel, y: &ComponentLabel, o: Side) -> Result<bool, QueryError> {
        if y.chain.len() == self.k {
            let (pid, iy) = self.own_pos(y, o)?;
            return Ok(le(self.first(x, o, pid)?, Some(iy as u32)));
        }
        if self.same_child_sub(x, y, o) {
            return Ok(true);
        }
        let h = y.chain[self.k];
        for (pid, _) in self.hat_paths() {
            *self.touched += 1;
            let Some(&l) = bundle(y, o).last_in.get(&(h, pid)) else { continue };
            if le(self.first(x, o, pid)?, Some(l)) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn on_path(&mut self, x: &ComponentLabel, y: &ComponentLabel, o: Side, p: usize, fk: usize) -> Result<bool, QueryError> {
        if self.same_child_sub(x, y, o) {
            return Ok(true);
        }
        let paths = self.hat_paths();
        for &(pid, len) in &paths {
            if pid == p {
                continue;
            }
            let a = self.first(x, o, pid)?;
            if a.is_none() {
                continue;
            }
            let b = self.first(y, o.flip(), pid)?;
            if le(a, b.map(|b| len - 1 - b)) {
                return Ok(true);
            }
        }
        let len = paths.iter().find(|e| e.0 == p).unwrap().1;
        let bx = self.candidates(x, o, p, fk)?;
        if bx.is_empty() {
            return Ok(false);
        }
        let by = self.candidates(y, o.flip(), p, len as usize - 1 - fk)?;
        let Some(fsec) = bundle(self.f, o).sec.as_ref() else {
            return Err(QueryError::MissingRecord(self.f.local, "secondary label"));
        };
        for (_, bsec) in &bx {
            for (b2, _) in &by {
                let target_idx = len - 1 - b2;
                let side = if (target_idx as usize) < fk { Target::BeforeF } else { Target::AfterF };
                *self.touched += 2;
                if le(sec_query_first(bsec, fsec, side)?, Some(target_idx)) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Path of `piece` holding v, with v's index on it.
    fn own_in(&mut self, v: &ComponentLabel, o: Side, piece: usize) -> Result<(usize, u32), QueryError> {
        let b = bundle(v, o);
        for &(pid, _) in &v.pieces[&piece].paths {
            *self.touched += 1;
            if let Some(i) = b.nf.entries.get(&pid).and_then(|e| e.own) {
                return Ok((pid, i));
            }
        }
        Err(QueryError::MissingRecord(v.local, "own path index"))
    }

    /// FIRST when Cl(x) lies inside Cl(f): walk x's own path first.
    fn first_along(&mut self, x: &ComponentLabel, o: Side, pid: usize) -> Result<Option<u32>, QueryError> {
        let (qx, kx) = self.own_in(x, o, *x.chain.last().unwrap())?;
        let bx = bundle(x, o);
        let bf = bundle(self.f, o);
        *self.touched += 2;
        let Some(al) = bx.along.get(&pid) else { return Ok(None) };
        if let Some(fk) = bf.nf.entries.get(&qx).and_then(|e| e.own) {
            if kx < fk && fk <= al.u {
                *self.touched += 1;
                let rec = bx.close.get(&self.f.local).and_then(|r| r.get(&pid));
                return rec.copied().ok_or(QueryError::MissingRecord(x.local, "close"));
            }
        }
        let yf = bf.nf.entries.get(&pid).ok_or(QueryError::MissingRecord(self.f.local, "path entry"))?.first;
        if al.first != yf || al.first.is_none() {
            return Ok(al.first);
        }
        *self.touched += 1;
        Ok(match bf.along_through.get(&(qx, pid)) {
            None => al.first,
            Some(th) if th.reach_end.is_some_and(|r| kx <= r) => al.first,
            Some(th) => min_opt(al.first_cut, th.first_u),
        })
    }

    /// First piece of Cl(x) outside Cl(f).
    fn frontier(&self, x: &ComponentLabel) -> Option<usize> {
        x.closure.iter().copied().find(|a| self.f.closure.binary_search(a).is_err())
    }

    fn owner_depth(&self, x: &ComponentLabel, pid: usize) -> Option<usize> {
        x.pieces.values().find(|i| i.paths.iter().any(|e| e.0 == pid)).map(|i| i.depth)
    }

    /// First index on path `pid` that x reaches in G - f.
    fn first(&mut self, x: &ComponentLabel, o: Side, pid: usize) -> Result<Option<u32>, QueryError> {
        let bx = bundle(x, o);
        let bf = bundle(self.f, o);
        let Some(a) = self.frontier(x) else {
            return self.first_along(x, o, pid);
        };
        *self.touched += 1;
        let yf = bf.nf.entries.get(&pid).ok_or(QueryError::MissingRecord(self.f.local, "path entry"))?.first;
        let mut best = None;
        for (&si, e) in bx.frontier.get(&a).into_iter().flatten() {
            *self.touched += 1;
            let (fg, fs) = e.first.get(&pid).copied().unwrap_or((None, None));
            let val = if fg != yf || fg.is_none() {
                fg
            } else {
                *self.touched += 1;
                match bf.through.get(&(a, si, pid)) {
                    None => fg,
                    Some(th) if th.reach_end.is_some_and(|r| e.p <= r) => fg,
                    Some(th) => min_opt(fs, th.first_u),
                }
            };
            best = min_opt(best, val);
        }
        Ok(best)
    }

    /// P-vertices, at most one on each side of f, through which x's routes
    /// onto P can be assumed to enter.
    fn candidates(&mut self, x: &ComponentLabel, o: Side, p: usize, fk: usize) -> Result<Vec<(u32, SecondaryLabel)>, QueryError> {
        let bx = bundle(x, o);
        if x.chain.len() == self.k {
            *self.touched += 1;
            return Ok(match bx.nf.entries.get(&p).and_then(|e| e.own) {
                Some(i) => vec![(i, bx.sec.clone().ok_or(QueryError::MissingRecord(x.local, "secondary label"))?)],
                None => Vec::new(),
            });
        }
        let bf = bundle(self.f, o);
        let Some(a) = self.frontier(x) else {
            *self.touched += 2;
            let (qx, _) = self.own_in(x, o, *x.chain.last().unwrap())?;
            let Some(ivs) = bx.along_funnels.get(&p) else { return Ok(Vec::new()) };
            return Ok(pick_entries(ivs, bf.along_vafter.get(&(qx, p)), fk as u32));
        };
        let hat_depth = self.k - 1;
        let fk = fk as u32;
        let mut out: Vec<(u32, SecondaryLabel)> = Vec::new();
        for (&si, e) in bx.frontier.get(&a).into_iter().flatten() {
            *self.touched += 1;
            if e.path_id == p {
                if let Some(sec) = &e.sec {
                    out.push((e.p, sec.clone()));
                }
                continue;
            }
            if self.owner_depth(x, e.path_id).map_or(true, |d| d <= hat_depth) {
                continue;
            }
            let Some(ivs) = e.funnels.get(&p) else { continue };
            *self.touched += 1;
            out.extend(pick_entries(ivs, bf.vafter.get(&(a, si, p)), fk));
        }
        Ok(out)
    }
}
