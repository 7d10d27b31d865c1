//! Text formats for graphs and labels, and the command-line surface.
//!
//! Graph file: `pfg 1`, `n <count>`, one `a <tail> <head>` line per arc, one
//! `r <vertex> <refs>` line per vertex with +i for arc i's tail-end and
//! -i-1 for its head-end. Label file: `pfl 1 <build-hash>` followed by one
//! indented block per vertex.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ft_labels::{Along, Bundle, ComponentLabel, Interval, LabelSet, PieceInfo, SegEntry, Through, VAfter, VertexLabel};
use crate::nonfaulty_labels::{NonFaultyLabel, PathEntry};
use crate::planar_core::{validate_embedding, ArcEnd, EmbeddedDigraph};
use crate::secondary_path_labels::{Crossing, CrossingRecords, Detour, DetourSystem, SecondaryLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unsupported {kind} version {version}")]
    Version { kind: &'static str, version: String },
    #[error("labels were built for graph {expected}, not {found}")]
    HashMismatch { expected: String, found: String },
    #[error("label file ends early at line {0}")]
    Truncated(usize),
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, col, msg: msg.into() }
}

pub fn serialize_graph(g: &EmbeddedDigraph) -> String {
    let mut s = String::new();
    writeln!(s, "pfg 1").unwrap();
    writeln!(s, "n {}", g.vertex_count()).unwrap();
    for &(t, h) in g.arcs() {
        writeln!(s, "a {t} {h}").unwrap();
    }
    for v in 0..g.vertex_count() {
        write!(s, "r {v}").unwrap();
        for e in g.rotation(v) {
            let code = if e.head { -(e.arc as i64) - 1 } else { e.arc as i64 };
            write!(s, " {}{code}", if e.head { "" } else { "+" }).unwrap();
        }
        s.push('\n');
    }
    s
}

/// Whitespace-separated tokens of one line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn num<T: std::str::FromStr>(line: usize, tok: (usize, &str)) -> Result<T, FormatError> {
    tok.1.parse().map_err(|_| perr(line, tok.0, format!("expected a number, found {:?}", tok.1)))
}

pub fn parse_graph_file(text: &str) -> Result<EmbeddedDigraph, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let (ln, head) = lines.next().ok_or_else(|| perr(1, 1, "empty graph file"))?;
    let tk = tokens(head);
    if tk.first().map(|t| t.1) != Some("pfg") || tk.len() != 2 {
        return Err(perr(ln, 1, "expected header \"pfg 1\""));
    }
    if tk[1].1 != "1" {
        return Err(FormatError::Version { kind: "graph", version: tk[1].1.to_string() });
    }
    let (ln, nline) = lines.next().ok_or_else(|| perr(ln + 1, 1, "missing vertex count line"))?;
    let tk = tokens(nline);
    if tk.len() != 2 || tk[0].1 != "n" {
        return Err(perr(ln, 1, "expected \"n <vertex_count>\""));
    }
    let n: usize = num(ln, tk[1])?;
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut rotation: Vec<Option<Vec<ArcEnd>>> = vec![None; n];
    let mut rot_lines = Vec::new();
    for (ln, l) in lines {
        let tk = tokens(l);
        match tk[0].1 {
            "a" => {
                if tk.len() != 3 {
                    return Err(perr(ln, 1, "expected \"a <tail> <head>\""));
                }
                if !rot_lines.is_empty() {
                    return Err(perr(ln, 1, "arc line after rotation lines"));
                }
                let (t, h): (usize, usize) = (num(ln, tk[1])?, num(ln, tk[2])?);
                for (tok, v) in [(tk[1], t), (tk[2], h)] {
                    if v >= n {
                        return Err(perr(ln, tok.0, format!("vertex {v} out of range (n = {n})")));
                    }
                }
                if t == h {
                    return Err(perr(ln, tk[2].0, "self-loop"));
                }
                arcs.push((t, h));
            }
            "r" => {
                if tk.len() < 2 {
                    return Err(perr(ln, 1, "expected \"r <vertex> <refs>\""));
                }
                let v: usize = num(ln, tk[1])?;
                if v >= n {
                    return Err(perr(ln, tk[1].0, format!("vertex {v} out of range (n = {n})")));
                }
                if rotation[v].is_some() {
                    return Err(perr(ln, tk[1].0, format!("second rotation for vertex {v}")));
                }
                let mut rot = Vec::new();
                for &tok in &tk[2..] {
                    let code: i64 = num(ln, tok)?;
                    let end = if code >= 0 { ArcEnd::tail(code as usize) } else { ArcEnd::head((-code - 1) as usize) };
                    if end.arc >= arcs.len() {
                        return Err(perr(ln, tok.0, format!("arc {} does not exist", end.arc)));
                    }
                    let (t, h) = arcs[end.arc];
                    if (if end.head { h } else { t }) != v {
                        return Err(perr(ln, tok.0, format!("arc {} has no end at vertex {v}", end.arc)));
                    }
                    rot.push(end);
                }
                rotation[v] = Some(rot);
                rot_lines.push(ln);
            }
            other => return Err(perr(ln, tk[0].0, format!("unknown line kind {other:?}"))),
        }
    }
    let last = text.lines().count().max(1);
    let mut seen = vec![0u8; arcs.len()];
    let rotation: Vec<Vec<ArcEnd>> = rotation.into_iter().map(|r| r.unwrap_or_default()).collect();
    for r in &rotation {
        for e in r {
            seen[e.arc] += 1;
        }
    }
    if let Some(a) = seen.iter().position(|&c| c != 2) {
        return Err(perr(last, 1, format!("arc {a} appears {} times in the rotations, expected 2", seen[a])));
    }
    let g = EmbeddedDigraph::new(n, arcs, rotation).map_err(|e| perr(last, 1, e.to_string()))?;
    let rep = validate_embedding(&g);
    if !rep.ok {
        return Err(perr(last, 1, format!("rotation system is not planar: {}", rep.violation.unwrap_or_default())));
    }
    Ok(g)
}

/// FNV-1a over the serialized graph, as 16 hex digits.
pub fn build_hash(g: &EmbeddedDigraph) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in serialize_graph(g).bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

fn o(x: Option<u32>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

struct W {
    s: String,
}

impl W {
    fn line(&mut self, depth: usize, key: &str, rest: &str) {
        for _ in 0..depth {
            self.s.push_str("  ");
        }
        self.s.push_str(key);
        if !rest.is_empty() {
            self.s.push(' ');
            self.s.push_str(rest);
        }
        self.s.push('\n');
    }

    fn sec(&mut self, depth: usize, l: &SecondaryLabel) {
        let mut r = format!("{} {}", l.path_id, l.own_idx);
        for (tag, sys) in [("A", &l.detour_a), ("B", &l.detour_b)] {
            write!(r, " {tag} {}", sys.chain.len()).unwrap();
            for (d, h) in &sys.chain {
                write!(r, " {} {} {} {}", d.u, d.v, o(h.map(|h| h.u)), o(h.map(|h| h.v))).unwrap();
            }
        }
        for (tag, list) in [("X", &l.crossings.bypasses), ("Y", &l.crossings.byways)] {
            write!(r, " {tag} {}", list.len()).unwrap();
            for c in list {
                write!(r, " {} {} {} {}", c.from, c.to, o(c.plus), o(c.minus)).unwrap();
            }
        }
        self.line(depth, "sec", &r);
    }

    fn nf(&mut self, depth: usize, key: &str, head: &str, l: &NonFaultyLabel) {
        self.line(depth, key, &format!("{head}{}", l.vertex_id));
        for (pid, e) in &l.entries {
            self.line(depth + 1, "e", &format!("{pid} {} {} {}", o(e.first), o(e.last), o(e.own)));
        }
    }

    fn intervals(&mut self, depth: usize, ivs: &[Interval]) {
        for iv in ivs {
            self.line(depth, "iv", &format!("{} {}", iv.lo, iv.hi));
            if let Some(s) = &iv.start_sec {
                self.sec(depth + 1, s);
            }
        }
    }

    fn bundle(&mut self, d: usize, b: &Bundle) {
        self.nf(d, "nf", "", &b.nf);
        for (h, l) in &b.sub {
            self.nf(d, "sub", &format!("{h} "), l);
        }
        for ((h, p), i) in &b.last_in {
            self.line(d, "last_in", &format!("{h} {p} {i}"));
        }
        for (a, m) in &b.frontier {
            for (si, e) in m {
                self.line(d, "entry", &format!("{a} {si} {} {}", e.path_id, e.p));
                for (p, (fg, fs)) in &e.first {
                    self.line(d + 1, "first", &format!("{p} {} {}", o(*fg), o(*fs)));
                }
                if let Some(s) = &e.sec {
                    self.sec(d + 1, s);
                }
                for (p, ivs) in &e.funnels {
                    self.line(d + 1, "funnel", &p.to_string());
                    self.intervals(d + 2, ivs);
                }
            }
        }
        for (f, m) in &b.close {
            self.line(d, "close", &f.to_string());
            for (p, v) in m {
                self.line(d + 1, "first", &format!("{p} {}", o(*v)));
            }
        }
        for ((a, si, p), t) in &b.through {
            self.line(d, "through", &format!("{a} {si} {p} {} {} {}", t.u, o(t.reach_end), o(t.first_u)));
        }
        for ((a, si, p), va) in &b.vafter {
            self.line(d, "vafter", &format!("{a} {si} {p} {}", o(va.v)));
            if let Some(s) = &va.sec {
                self.sec(d + 1, s);
            }
        }
        for (p, al) in &b.along {
            self.line(d, "along", &format!("{p} {} {} {}", o(al.first), o(al.first_cut), al.u));
        }
        for (p, ivs) in &b.along_funnels {
            self.line(d, "along_funnel", &p.to_string());
            self.intervals(d + 1, ivs);
        }
        for ((q, p), t) in &b.along_through {
            self.line(d, "along_through", &format!("{q} {p} {} {} {}", t.u, o(t.reach_end), o(t.first_u)));
        }
        for ((q, p), va) in &b.along_vafter {
            self.line(d, "along_vafter", &format!("{q} {p} {}", o(va.v)));
            if let Some(s) = &va.sec {
                self.sec(d + 1, s);
            }
        }
        if let Some(s) = &b.sec {
            self.sec(d, s);
        }
    }

    fn vertex(&mut self, l: &VertexLabel) {
        self.line(0, "vertex", &format!("{} {}", l.vertex_id, l.parts.len()));
        for p in &l.parts {
            self.line(1, "part", &format!("{} {}", p.component, p.local));
            self.line(2, "chain", &join(&p.chain));
            self.line(2, "closure", &join(&p.closure));
            for (id, info) in &p.pieces {
                let paths: Vec<String> = info.paths.iter().map(|(a, b)| format!("{a}:{b}")).collect();
                let parent = info.parent.map_or_else(|| "-".to_string(), |x| x.to_string());
                self.line(2, "piece", &format!("{id} {parent} {} {}", info.depth, paths.join(" ")).trim_end().to_string());
            }
            self.line(2, "fwd", "");
            self.bundle(3, &p.fwd);
            self.line(2, "rev", "");
            self.bundle(3, &p.rev);
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// One vertex block of the label file.
pub fn label_bytes(l: &VertexLabel) -> String {
    let mut w = W { s: String::new() };
    w.vertex(l);
    w.s
}

pub fn save_labels(labels: &LabelSet, hash: &str) -> String {
    let mut w = W { s: String::new() };
    w.line(0, "pfl", &format!("1 {hash}"));
    w.line(0, "n", &labels.vertex_count.to_string());
    for l in &labels.labels {
        w.vertex(l);
    }
    w.line(0, "end", &labels.vertex_count.to_string());
    w.s
}

struct Line<'t> {
    no: usize,
    depth: usize,
    key: &'t str,
    col: usize,
    toks: Vec<(usize, &'t str)>,
}

/// Cursor over the tokens after a line's key.
struct T<'a, 't> {
    line: &'a Line<'t>,
    i: usize,
}

impl<'a, 't> T<'a, 't> {
    fn tok(&mut self) -> Result<(usize, &'t str), FormatError> {
        let t = self.line.toks.get(self.i).copied().ok_or_else(|| perr(self.line.no, self.line.col, format!("{} line is missing a field", self.line.key)))?;
        self.i += 1;
        Ok(t)
    }

    fn n<X: std::str::FromStr>(&mut self) -> Result<X, FormatError> {
        let t = self.tok()?;
        num(self.line.no, t)
    }

    fn opt(&mut self) -> Result<Option<u32>, FormatError> {
        let t = self.tok()?;
        if t.1 == "-" {
            Ok(None)
        } else {
            num(self.line.no, t).map(Some)
        }
    }

    fn word(&mut self, w: &str) -> Result<(), FormatError> {
        let t = self.tok()?;
        if t.1 == w {
            Ok(())
        } else {
            Err(perr(self.line.no, t.0, format!("expected {w:?}, found {:?}", t.1)))
        }
    }

    fn done(&self) -> Result<(), FormatError> {
        match self.line.toks.get(self.i) {
            None => Ok(()),
            Some(t) => Err(perr(self.line.no, t.0, format!("unexpected field {:?}", t.1))),
        }
    }
}

struct R<'t> {
    lines: Vec<Line<'t>>,
    pos: usize,
    end_no: usize,
}

impl<'t> R<'t> {
    fn new(text: &'t str) -> Result<Self, FormatError> {
        let mut lines = Vec::new();
        for (i, l) in text.lines().enumerate() {
            if l.trim().is_empty() {
                continue;
            }
            let indent = l.len() - l.trim_start_matches(' ').len();
            if indent % 2 == 1 {
                return Err(perr(i + 1, 1, "odd indentation"));
            }
            let mut toks = tokens(l);
            let (col, key) = toks.remove(0);
            lines.push(Line { no: i + 1, depth: indent / 2, key, col, toks });
        }
        Ok(R { lines, pos: 0, end_no: text.lines().count() + 1 })
    }

    fn peek(&self, depth: usize, key: &str) -> bool {
        self.lines.get(self.pos).is_some_and(|l| l.depth == depth && l.key == key)
    }

    fn take(&mut self, depth: usize, key: &str) -> Result<T<'_, 't>, FormatError> {
        let Some(l) = self.lines.get(self.pos) else { return Err(FormatError::Truncated(self.end_no)) };
        if l.depth != depth || l.key != key {
            return Err(perr(l.no, l.col, format!("expected {key:?} at depth {depth}, found {:?} at depth {}", l.key, l.depth)));
        }
        self.pos += 1;
        Ok(T { line: &self.lines[self.pos - 1], i: 0 })
    }

    fn sec(&mut self, depth: usize) -> Result<SecondaryLabel, FormatError> {
        let mut t = self.take(depth, "sec")?;
        let path_id = t.n()?;
        let own_idx = t.n()?;
        let mut systems = Vec::new();
        for tag in ["A", "B"] {
            t.word(tag)?;
            let k: usize = t.n()?;
            let mut chain = Vec::with_capacity(k);
            for _ in 0..k {
                let d = Detour { u: t.n()?, v: t.n()? };
                let h = match (t.opt()?, t.opt()?) {
                    (Some(u), Some(v)) => Some(Detour { u, v }),
                    _ => None,
                };
                chain.push((d, h));
            }
            systems.push(DetourSystem { chain });
        }
        let mut lists = Vec::new();
        for tag in ["X", "Y"] {
            t.word(tag)?;
            let k: usize = t.n()?;
            let mut list = Vec::with_capacity(k);
            for _ in 0..k {
                list.push(Crossing { from: t.n()?, to: t.n()?, plus: t.opt()?, minus: t.opt()? });
            }
            lists.push(list);
        }
        t.done()?;
        let byways = lists.pop().unwrap();
        let bypasses = lists.pop().unwrap();
        let detour_b = systems.pop().unwrap();
        let detour_a = systems.pop().unwrap();
        Ok(SecondaryLabel { path_id, own_idx, detour_a, detour_b, crossings: CrossingRecords { bypasses, byways } })
    }

    fn opt_sec(&mut self, depth: usize) -> Result<Option<SecondaryLabel>, FormatError> {
        if self.peek(depth, "sec") {
            self.sec(depth).map(Some)
        } else {
            Ok(None)
        }
    }

    fn nf_entries(&mut self, depth: usize, vertex_id: usize) -> Result<NonFaultyLabel, FormatError> {
        let mut l = NonFaultyLabel { vertex_id, entries: Default::default() };
        while self.peek(depth, "e") {
            let mut t = self.take(depth, "e")?;
            let pid = t.n()?;
            let e = PathEntry { first: t.opt()?, last: t.opt()?, own: t.opt()? };
            t.done()?;
            l.entries.insert(pid, e);
        }
        Ok(l)
    }

    fn intervals(&mut self, depth: usize) -> Result<Vec<Interval>, FormatError> {
        let mut out = Vec::new();
        while self.peek(depth, "iv") {
            let mut t = self.take(depth, "iv")?;
            let (lo, hi) = (t.n()?, t.n()?);
            t.done()?;
            out.push(Interval { lo, hi, start_sec: self.opt_sec(depth + 1)? });
        }
        Ok(out)
    }

    fn through(t: &mut T) -> Result<Through, FormatError> {
        let rec = Through { u: t.n()?, reach_end: t.opt()?, first_u: t.opt()? };
        t.done()?;
        Ok(rec)
    }

    fn bundle(&mut self, d: usize) -> Result<Bundle, FormatError> {
        let mut b = Bundle::default();
        let mut t = self.take(d, "nf")?;
        let id = t.n()?;
        t.done()?;
        b.nf = self.nf_entries(d + 1, id)?;
        while self.peek(d, "sub") {
            let mut t = self.take(d, "sub")?;
            let (h, id) = (t.n()?, t.n()?);
            t.done()?;
            let l = self.nf_entries(d + 1, id)?;
            b.sub.insert(h, l);
        }
        while self.peek(d, "last_in") {
            let mut t = self.take(d, "last_in")?;
            let key = (t.n()?, t.n()?);
            let v = t.n()?;
            t.done()?;
            b.last_in.insert(key, v);
        }
        while self.peek(d, "entry") {
            let mut t = self.take(d, "entry")?;
            let (a, si): (usize, u32) = (t.n()?, t.n()?);
            let mut e = SegEntry { path_id: t.n()?, p: t.n()?, first: Default::default(), sec: None, funnels: Default::default() };
            t.done()?;
            while self.peek(d + 1, "first") {
                let mut t = self.take(d + 1, "first")?;
                let p = t.n()?;
                let v = (t.opt()?, t.opt()?);
                t.done()?;
                e.first.insert(p, v);
            }
            e.sec = self.opt_sec(d + 1)?;
            while self.peek(d + 1, "funnel") {
                let mut t = self.take(d + 1, "funnel")?;
                let p = t.n()?;
                t.done()?;
                e.funnels.insert(p, self.intervals(d + 2)?);
            }
            b.frontier.entry(a).or_default().insert(si, e);
        }
        while self.peek(d, "close") {
            let mut t = self.take(d, "close")?;
            let f = t.n()?;
            t.done()?;
            let mut m = std::collections::BTreeMap::new();
            while self.peek(d + 1, "first") {
                let mut t = self.take(d + 1, "first")?;
                let p = t.n()?;
                let v = t.opt()?;
                t.done()?;
                m.insert(p, v);
            }
            b.close.insert(f, m);
        }
        while self.peek(d, "through") {
            let mut t = self.take(d, "through")?;
            let key = (t.n()?, t.n()?, t.n()?);
            b.through.insert(key, Self::through(&mut t)?);
        }
        while self.peek(d, "vafter") {
            let mut t = self.take(d, "vafter")?;
            let key = (t.n()?, t.n()?, t.n()?);
            let v = t.opt()?;
            t.done()?;
            let sec = self.opt_sec(d + 1)?;
            b.vafter.insert(key, VAfter { v, sec });
        }
        while self.peek(d, "along") {
            let mut t = self.take(d, "along")?;
            let p = t.n()?;
            let al = Along { first: t.opt()?, first_cut: t.opt()?, u: t.n()? };
            t.done()?;
            b.along.insert(p, al);
        }
        while self.peek(d, "along_funnel") {
            let mut t = self.take(d, "along_funnel")?;
            let p = t.n()?;
            t.done()?;
            b.along_funnels.insert(p, self.intervals(d + 1)?);
        }
        while self.peek(d, "along_through") {
            let mut t = self.take(d, "along_through")?;
            let key = (t.n()?, t.n()?);
            b.along_through.insert(key, Self::through(&mut t)?);
        }
        while self.peek(d, "along_vafter") {
            let mut t = self.take(d, "along_vafter")?;
            let key = (t.n()?, t.n()?);
            let v = t.opt()?;
            t.done()?;
            let sec = self.opt_sec(d + 1)?;
            b.along_vafter.insert(key, VAfter { v, sec });
        }
        b.sec = self.opt_sec(d)?;
        Ok(b)
    }

    fn list(t: &mut T) -> Result<Vec<usize>, FormatError> {
        let mut v = Vec::new();
        while t.i < t.line.toks.len() {
            v.push(t.n()?);
        }
        Ok(v)
    }

    fn vertex(&mut self, expect: usize) -> Result<VertexLabel, FormatError> {
        let mut t = self.take(0, "vertex")?;
        let id: usize = t.n()?;
        let k: usize = t.n()?;
        t.done()?;
        if id != expect {
            let l = &self.lines[self.pos - 1];
            return Err(perr(l.no, l.col, format!("expected vertex {expect}, found {id}")));
        }
        let mut parts = Vec::with_capacity(k);
        for _ in 0..k {
            let mut t = self.take(1, "part")?;
            let (component, local) = (t.n()?, t.n()?);
            t.done()?;
            let chain = Self::list(&mut self.take(2, "chain")?)?;
            let closure = Self::list(&mut self.take(2, "closure")?)?;
            let mut pieces = std::collections::BTreeMap::new();
            while self.peek(2, "piece") {
                let mut t = self.take(2, "piece")?;
                let id: usize = t.n()?;
                let parent = t.opt()?.map(|x| x as usize);
                let depth = t.n()?;
                let mut paths = Vec::new();
                while t.i < t.line.toks.len() {
                    let tok = t.tok()?;
                    let (a, b) = tok.1.split_once(':').ok_or_else(|| perr(t.line.no, tok.0, "expected <path>:<length>"))?;
                    paths.push((num(t.line.no, (tok.0, a))?, num(t.line.no, (tok.0, b))?));
                }
                pieces.insert(id, PieceInfo { parent, depth, paths });
            }
            self.take(2, "fwd")?.done()?;
            let fwd = self.bundle(3)?;
            self.take(2, "rev")?.done()?;
            let rev = self.bundle(3)?;
            parts.push(ComponentLabel { component, local, chain, closure, pieces, fwd, rev });
        }
        Ok(VertexLabel { vertex_id: id, parts })
    }
}

/// Parses a label file; with `graph`, also checks the build hash against it.
pub fn load_labels(text: &str, graph: Option<&EmbeddedDigraph>) -> Result<(LabelSet, String), FormatError> {
    let mut r = R::new(text)?;
    let mut t = r.take(0, "pfl")?;
    let ver = t.tok()?;
    if ver.1 != "1" {
        return Err(FormatError::Version { kind: "label", version: ver.1.to_string() });
    }
    let hash = t.tok()?.1.to_string();
    t.done()?;
    if let Some(g) = graph {
        let want = build_hash(g);
        if want != hash {
            return Err(FormatError::HashMismatch { expected: hash, found: want });
        }
    }
    let mut t = r.take(0, "n")?;
    let n: usize = t.n()?;
    t.done()?;
    let mut labels = Vec::with_capacity(n);
    for v in 0..n {
        labels.push(r.vertex(v)?);
    }
    let mut t = r.take(0, "end")?;
    let m: usize = t.n()?;
    t.done()?;
    if m != n {
        let l = &r.lines[r.pos - 1];
        return Err(perr(l.no, l.col, format!("end marker says {m} vertices, header says {n}")));
    }
    if let Some(l) = r.lines.get(r.pos) {
        return Err(perr(l.no, l.col, "content after end marker"));
    }
    Ok((LabelSet { vertex_count: n, labels }, hash))
}

#[derive(Debug, clap::Parser)]
#[command(name = "ftlabels", about = "Fault-tolerant reachability labels for planar digraphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum FamilyArg {
    Grid,
    Tri,
}

#[derive(Debug, clap::Subcommand)]
enum Cmd {
    /// Write a seeded graph file.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        w: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Orient grid edges right and down instead of at random.
        #[arg(long)]
        layered: bool,
        #[arg(long)]
        out: String,
    },
    /// Build labels for a graph file.
    Build {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        out: String,
    },
    /// Answer one query from three labels.
    Query {
        #[arg(long)]
        labels: String,
        /// Graph file to check the label build hash against.
        #[arg(long)]
        graph: Option<String>,
        #[arg(short)]
        s: usize,
        #[arg(short)]
        t: usize,
        #[arg(short)]
        f: usize,
    },
    /// Compare label answers against brute-force search.
    Verify {
        #[arg(long)]
        graph: String,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Stats {
        #[arg(long)]
        labels: String,
    },
    Bench {
        #[arg(long)]
        labels: String,
        #[arg(long, default_value_t = 10_000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &str) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn write_file(path: &str, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{path}: {e}"))
}

fn graph_at(path: &str) -> Result<EmbeddedDigraph, String> {
    parse_graph_file(&read(path)?).map_err(|e| format!("{path}: {e}"))
}

fn labels_at(path: &str, graph: Option<&EmbeddedDigraph>) -> Result<LabelSet, String> {
    load_labels(&read(path)?, graph).map(|r| r.0).map_err(|e| format!("{path}: {e}"))
}

fn check_ids(n: usize, ids: &[usize]) -> Result<(), String> {
    match ids.iter().find(|&&v| v >= n) {
        Some(v) => Err(format!("vertex {v} out of range (n = {n})")),
        None => Ok(()),
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn std::io::Write) -> Result<i32, String> {
    use crate::generators::{gen_grid, gen_tri_disk, OrientationMode};
    use crate::verification::{bench, label_statistics, verify_labeling, Mode};
    let io = |e: std::io::Error| e.to_string();
    match cmd {
        Cmd::Gen { family, n, w, h, seed, layered, out: path } => {
            let g = match family {
                FamilyArg::Grid => {
                    let (w, h) = match (w, h, n) {
                        (Some(w), Some(h), _) => (w, h),
                        (_, _, Some(n)) => {
                            let w = ((n as f64).sqrt() as usize).max(1);
                            (w, (n / w).max(1))
                        }
                        _ => return Err("grid needs --n or both --w and --h".into()),
                    };
                    let mode = if layered { OrientationMode::Layered } else { OrientationMode::Random };
                    gen_grid(w, h, seed, mode)
                }
                FamilyArg::Tri => {
                    let n = n.ok_or("tri needs --n")?;
                    if n < 3 {
                        return Err("tri needs --n of at least 3".into());
                    }
                    gen_tri_disk(n, seed)
                }
            };
            write_file(&path, &serialize_graph(&g))?;
            writeln!(out, "wrote {path}: {} vertices, {} arcs", g.vertex_count(), g.arc_count()).map_err(io)?;
        }
        Cmd::Build { graph, out: path } => {
            let g = graph_at(&graph)?;
            let labels = crate::ft_labels::build_ft_labels(&g).map_err(|e| e.to_string())?;
            write_file(&path, &save_labels(&labels, &build_hash(&g)))?;
            writeln!(out, "wrote {path}: {} labels", labels.vertex_count).map_err(io)?;
        }
        Cmd::Query { labels, graph, s, t, f } => {
            let g = graph.as_deref().map(graph_at).transpose()?;
            let l = labels_at(&labels, g.as_ref())?;
            check_ids(l.vertex_count, &[s, t, f])?;
            let r = crate::query_engine::ft_query(&l.labels[s], &l.labels[t], &l.labels[f]).map_err(|e| e.to_string())?;
            writeln!(out, "{}", if r { "reachable" } else { "unreachable" }).map_err(io)?;
        }
        Cmd::Verify { graph, exhaustive, samples, seed } => {
            let g = graph_at(&graph)?;
            let labels = crate::ft_labels::build_ft_labels(&g).map_err(|e| e.to_string())?;
            let mode = match (exhaustive, samples) {
                (_, Some(count)) => Mode::Sampled { count, seed },
                _ => Mode::Exhaustive,
            };
            let rep = verify_labeling(&g, &labels, mode, &graph);
            for m in &rep.mismatches {
                let got = m.got.map_or("error".to_string(), |b| b.to_string());
                writeln!(out, "mismatch s={} t={} f={} expected={} got={got}", m.s, m.t, m.f, m.expected).map_err(io)?;
                writeln!(out, "  rerun: {}", m.rerun_line()).map_err(io)?;
            }
            writeln!(out, "triples {} mismatches {}", rep.triples_checked, rep.mismatches.len()).map_err(io)?;
            return Ok(if rep.passed() { 0 } else { 1 });
        }
        Cmd::Stats { labels } => {
            let r = label_statistics(&labels_at(&labels, None)?);
            writeln!(out, "n\tmax_records\tmean_records\tmax_bytes").map_err(io)?;
            writeln!(out, "{}\t{}\t{:.2}\t{}", r.n, r.max_records, r.mean_records, r.max_bytes).map_err(io)?;
        }
        Cmd::Bench { labels, queries, seed } => {
            let r = bench(&labels_at(&labels, None)?, queries, seed);
            writeln!(out, "queries {}", r.queries).map_err(io)?;
            writeln!(out, "reachable {}", r.reachable).map_err(io)?;
            writeln!(out, "mean_touched {:.2}", r.mean_touched).map_err(io)?;
            writeln!(out, "max_touched {}", r.max_touched).map_err(io)?;
            // wall-clock numbers go to stderr so stdout stays deterministic
            eprintln!("mean_query_time {:?}", r.mean_time());
        }
    }
    Ok(0)
}

/// Runs one CLI invocation; `args` includes the program name.
pub fn run_cli<I, A>(args: I, out: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}
