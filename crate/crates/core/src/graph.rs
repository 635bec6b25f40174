//! Directed citation graph in compressed adjacency form.
//!
//! An edge `u -> v` means "u cites v". Every node keeps two sorted neighbor
//! lists: its references (forward) and its citers (reverse). The two lists are
//! exact mirrors of each other. Algorithms that need the undirected view walk
//! both lists.
//!
//! Query-refinement diversifiers need to delete vertices or turn them into
//! sinks. Those mutations never touch a [`CitationGraph`]; they go through a
//! [`GraphView`] overlay that masks vertices and tracks the surviving degrees.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type NodeId = u32;

/// Read-only access to a (possibly masked) directed graph.
///
/// Degrees are the degrees of the current view, so they shrink when
/// neighbors are removed from an overlay.
pub trait Topology {
    fn node_count(&self) -> usize;

    fn out_degree(&self, u: NodeId) -> usize;

    fn in_degree(&self, u: NodeId) -> usize;

    /// Nodes cited by `u`, ascending.
    fn references(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_;

    /// Nodes citing `u`, ascending.
    fn citers(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_;

    fn is_present(&self, _u: NodeId) -> bool {
        true
    }

    /// A sink keeps its incoming edges but emits no random-walk transitions.
    fn is_sink(&self, _u: NodeId) -> bool {
        false
    }

    fn degree(&self, u: NodeId) -> usize {
        self.out_degree(u) + self.in_degree(u)
    }

    /// Neighbors in the undirected view: references first, then citers.
    /// A pair of mutual citations shows up twice.
    fn undirected_neighbors(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.references(u).chain(self.citers(u))
    }
}

/// Counts of input edges that were discarded while building a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub duplicates: usize,
    pub self_loops: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationGraph {
    fwd_offsets: Vec<usize>,
    fwd_targets: Vec<NodeId>,
    rev_offsets: Vec<usize>,
    rev_targets: Vec<NodeId>,
    years: Vec<Option<i32>>,
}

fn compress(n: usize, sorted: &[(NodeId, NodeId)]) -> (Vec<usize>, Vec<NodeId>) {
    let mut offsets = vec![0usize; n + 1];
    for &(u, _) in sorted {
        offsets[u as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let targets = sorted.iter().map(|&(_, v)| v).collect();
    (offsets, targets)
}

impl CitationGraph {
    /// Builds a graph on nodes `0..n`.
    ///
    /// Self-loops and repeated edges are dropped and counted. Every node must
    /// end up with at least one reference or citation.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<(Self, BuildStats)>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if n > NodeId::MAX as usize {
            return Err(Error::TooManyNodes(n));
        }
        let mut stats = BuildStats::default();
        let mut list = Vec::new();
        for (u, v) in edges {
            for id in [u, v] {
                if id as usize >= n {
                    return Err(Error::NodeOutOfRange { id: id.into(), n });
                }
            }
            if u == v {
                stats.self_loops += 1;
                continue;
            }
            list.push((u, v));
        }
        list.sort_unstable();
        let before = list.len();
        list.dedup();
        stats.duplicates = before - list.len();

        let (fwd_offsets, fwd_targets) = compress(n, &list);
        let mut reversed: Vec<(NodeId, NodeId)> = list.iter().map(|&(u, v)| (v, u)).collect();
        reversed.sort_unstable();
        let (rev_offsets, rev_targets) = compress(n, &reversed);

        let graph = CitationGraph { fwd_offsets, fwd_targets, rev_offsets, rev_targets, years: vec![None; n] };
        if let Some(v) = (0..n as NodeId).find(|&v| graph.degree(v) == 0) {
            return Err(Error::IsolatedNode(v));
        }
        Ok((graph, stats))
    }

    /// Parses a whitespace-separated `src dst` edge list. Blank lines and
    /// lines starting with `#` are skipped.
    ///
    /// Without `num_nodes` the node count is one past the largest ID seen.
    pub fn read_edge_list<R: BufRead>(reader: R, num_nodes: Option<usize>) -> Result<(Self, BuildStats)> {
        let mut edges = Vec::new();
        let mut max_id: Option<u64> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let Some([u, v]) = parse_pair(&line, idx + 1, "edge")? else {
                continue;
            };
            for id in [u, v] {
                if let Some(n) = num_nodes {
                    if id >= n as u64 {
                        return Err(Error::NodeOutOfRange { id, n });
                    }
                }
                if id > NodeId::MAX as u64 {
                    return Err(Error::TooManyNodes(id as usize));
                }
            }
            max_id = max_id.max(Some(u.max(v)));
            edges.push((u as NodeId, v as NodeId));
        }
        let n = num_nodes.unwrap_or_else(|| max_id.map_or(0, |m| m as usize + 1));
        Self::from_edges(n, edges)
    }

    /// Reads `id year` lines. Nodes not mentioned keep an unknown year.
    pub fn read_metadata<R: BufRead>(&mut self, reader: R) -> Result<()> {
        let n = self.node_count();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let Some([id, year]) = parse_fields::<2>(&line, idx + 1, "metadata")? else {
                continue;
            };
            let id: u64 =
                id.parse().map_err(|_| Error::Parse { line: idx + 1, message: format!("invalid node id {id:?}") })?;
            let year: i32 =
                year.parse().map_err(|_| Error::Parse { line: idx + 1, message: format!("invalid year {year:?}") })?;
            if id >= n as u64 {
                return Err(Error::NodeOutOfRange { id, n });
            }
            self.years[id as usize] = Some(year);
        }
        Ok(())
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        for u in 0..self.node_count() as NodeId {
            for &v in self.reference_slice(u) {
                writeln!(w, "{u} {v}")?;
            }
        }
        Ok(())
    }

    pub fn write_metadata<W: Write>(&self, mut w: W) -> Result<()> {
        for (id, year) in self.years.iter().enumerate() {
            if let Some(year) = year {
                writeln!(w, "{id} {year}")?;
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.fwd_offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.fwd_targets.len()
    }

    pub fn reference_slice(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.fwd_targets[self.fwd_offsets[u]..self.fwd_offsets[u + 1]]
    }

    pub fn citer_slice(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.rev_targets[self.rev_offsets[u]..self.rev_offsets[u + 1]]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.reference_slice(u).binary_search(&v).is_ok()
    }

    pub fn year(&self, u: NodeId) -> Option<i32> {
        self.years[u as usize]
    }

    pub fn years(&self) -> &[Option<i32>] {
        &self.years
    }

    pub fn set_year(&mut self, u: NodeId, year: Option<i32>) {
        self.years[u as usize] = year;
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count() as NodeId).flat_map(move |u| self.reference_slice(u).iter().map(move |&v| (u, v)))
    }

    /// The same graph with every edge flipped. Years are kept.
    pub fn reversed(&self) -> Self {
        CitationGraph {
            fwd_offsets: self.rev_offsets.clone(),
            fwd_targets: self.rev_targets.clone(),
            rev_offsets: self.fwd_offsets.clone(),
            rev_targets: self.fwd_targets.clone(),
            years: self.years.clone(),
        }
    }

    /// Checks that the citer lists mirror the reference lists in O(|E|).
    pub fn is_mirrored(&self) -> bool {
        let n = self.node_count();
        let mut cursor: Vec<usize> = self.rev_offsets[..n].to_vec();
        for u in 0..n as NodeId {
            for &v in self.reference_slice(u) {
                let c = &mut cursor[v as usize];
                if *c >= self.rev_offsets[v as usize + 1] || self.rev_targets[*c] != u {
                    return false;
                }
                *c += 1;
            }
        }
        (0..n).all(|v| cursor[v] == self.rev_offsets[v + 1])
    }

    pub fn view(&self) -> GraphView<'_> {
        GraphView::new(self)
    }
}

fn parse_fields<'a, const N: usize>(line: &'a str, line_no: usize, what: &str) -> Result<Option<[&'a str; N]>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let tokens: Vec<&str> = trimmed.split_whitespace().collect();
    let fields: [&str; N] = tokens.try_into().map_err(|tokens: Vec<&str>| Error::Parse {
        line: line_no,
        message: format!("expected {N} fields in {what} line, found {}", tokens.len()),
    })?;
    Ok(Some(fields))
}

fn parse_pair(line: &str, line_no: usize, what: &str) -> Result<Option<[u64; 2]>> {
    let Some(fields) = parse_fields::<2>(line, line_no, what)? else {
        return Ok(None);
    };
    let mut out = [0u64; 2];
    for (slot, tok) in out.iter_mut().zip(fields) {
        *slot = tok.parse().map_err(|_| Error::Parse { line: line_no, message: format!("invalid node id {tok:?}") })?;
    }
    Ok(Some(out))
}

impl Topology for CitationGraph {
    fn node_count(&self) -> usize {
        CitationGraph::node_count(self)
    }

    fn out_degree(&self, u: NodeId) -> usize {
        let u = u as usize;
        self.fwd_offsets[u + 1] - self.fwd_offsets[u]
    }

    fn in_degree(&self, u: NodeId) -> usize {
        let u = u as usize;
        self.rev_offsets[u + 1] - self.rev_offsets[u]
    }

    fn references(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.reference_slice(u).iter().copied()
    }

    fn citers(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.citer_slice(u).iter().copied()
    }
}

/// Overlay over a [`CitationGraph`] with deleted vertices and sink vertices.
///
/// Cloning a view copies the masks (O(n)); the base graph is shared.
#[derive(Debug, Clone)]
pub struct GraphView<'g> {
    base: &'g CitationGraph,
    removed: Vec<bool>,
    sink: Vec<bool>,
    out_deg: Vec<u32>,
    in_deg: Vec<u32>,
    edges: usize,
    present: usize,
}

impl<'g> GraphView<'g> {
    pub fn new(base: &'g CitationGraph) -> Self {
        let n = base.node_count();
        GraphView {
            base,
            removed: vec![false; n],
            sink: vec![false; n],
            out_deg: (0..n as NodeId).map(|u| base.out_degree(u) as u32).collect(),
            in_deg: (0..n as NodeId).map(|u| base.in_degree(u) as u32).collect(),
            edges: base.edge_count(),
            present: n,
        }
    }

    pub fn base(&self) -> &'g CitationGraph {
        self.base
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn present_count(&self) -> usize {
        self.present
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if v as usize >= self.removed.len() {
            return Err(Error::NodeOutOfRange { id: v.into(), n: self.removed.len() });
        }
        Ok(())
    }

    /// Deletes `v` together with every edge touching it.
    ///
    /// Returns `Ok(false)` (and changes nothing) when `v` is already gone.
    pub fn remove_vertex(&mut self, v: NodeId) -> Result<bool> {
        self.check(v)?;
        if self.removed[v as usize] {
            log::warn!("vertex {v} is already removed");
            return Ok(false);
        }
        for w in self.base.reference_slice(v) {
            if !self.removed[*w as usize] {
                self.in_deg[*w as usize] -= 1;
            }
        }
        for u in self.base.citer_slice(v) {
            if !self.removed[*u as usize] {
                self.out_deg[*u as usize] -= 1;
            }
        }
        let vi = v as usize;
        self.edges -= (self.out_deg[vi] + self.in_deg[vi]) as usize;
        self.out_deg[vi] = 0;
        self.in_deg[vi] = 0;
        self.removed[vi] = true;
        self.present -= 1;
        Ok(true)
    }

    /// Suppresses every outgoing transition of `v`. Idempotent; returns
    /// `Ok(false)` if `v` was already a sink.
    pub fn make_sink(&mut self, v: NodeId) -> Result<bool> {
        self.check(v)?;
        let was = std::mem::replace(&mut self.sink[v as usize], true);
        Ok(!was)
    }

    /// Copy of this view with `v` removed.
    pub fn without_vertex(&self, v: NodeId) -> Result<Self> {
        let mut next = self.clone();
        next.remove_vertex(v)?;
        Ok(next)
    }

    /// Copy of this view with `v` turned into a sink.
    pub fn with_sink(&self, v: NodeId) -> Result<Self> {
        let mut next = self.clone();
        next.make_sink(v)?;
        Ok(next)
    }
}

impl Topology for GraphView<'_> {
    fn node_count(&self) -> usize {
        self.removed.len()
    }

    fn out_degree(&self, u: NodeId) -> usize {
        self.out_deg[u as usize] as usize
    }

    fn in_degree(&self, u: NodeId) -> usize {
        self.in_deg[u as usize] as usize
    }

    fn references(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let gone = self.removed[u as usize];
        self.base.reference_slice(u).iter().copied().filter(move |&v| !gone && !self.removed[v as usize])
    }

    fn citers(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let gone = self.removed[u as usize];
        self.base.citer_slice(u).iter().copied().filter(move |&v| !gone && !self.removed[v as usize])
    }

    fn is_present(&self, u: NodeId) -> bool {
        !self.removed[u as usize]
    }

    fn is_sink(&self, u: NodeId) -> bool {
        self.sink[u as usize]
    }
}

/// Undirected hop counts from one source. Unreachable nodes hold `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceField {
    pub source: NodeId,
    pub dist: Vec<u32>,
}

impl DistanceField {
    pub fn unreachable(&self) -> u32 {
        self.dist.len() as u32
    }

    pub fn get(&self, v: NodeId) -> u32 {
        self.dist[v as usize]
    }

    pub fn is_reachable(&self, v: NodeId) -> bool {
        self.get(v) != self.unreachable()
    }
}

/// Breadth-first search over the undirected view.
pub fn bfs_undirected<T: Topology>(g: &T, source: NodeId) -> Result<DistanceField> {
    let dist = multi_source_distances(g, std::slice::from_ref(&source))?;
    Ok(DistanceField { source, dist })
}

/// Distance from each node to the nearest member of `sources`, with `n` for
/// unreachable nodes.
pub fn multi_source_distances<T: Topology>(g: &T, sources: &[NodeId]) -> Result<Vec<u32>> {
    let n = g.node_count();
    let sentinel = n as u32;
    let mut dist = vec![sentinel; n];
    let mut queue = VecDeque::new();
    for &s in sources {
        if s as usize >= n {
            return Err(Error::NodeOutOfRange { id: s.into(), n });
        }
        if dist[s as usize] != 0 {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let next = dist[u as usize] + 1;
        for v in g.undirected_neighbors(u) {
            if dist[v as usize] == sentinel {
                dist[v as usize] = next;
                queue.push_back(v);
            }
        }
    }
    Ok(dist)
}

/// Reusable scratch for depth-limited undirected BFS. Each call only pays for
/// the nodes it visits.
#[derive(Debug, Clone)]
pub struct BoundedBfs {
    depth: Vec<u32>,
    touched: Vec<NodeId>,
    queue: VecDeque<NodeId>,
}

impl BoundedBfs {
    pub fn new(n: usize) -> Self {
        BoundedBfs { depth: vec![u32::MAX; n], touched: Vec::new(), queue: VecDeque::new() }
    }

    /// Calls `visit(v, hops)` for every node within `max_depth` hops of any
    /// source, sources included at hop 0. Each node is visited once.
    pub fn run<T, F>(&mut self, g: &T, sources: &[NodeId], max_depth: u32, mut visit: F)
    where
        T: Topology,
        F: FnMut(NodeId, u32),
    {
        for &v in &self.touched {
            self.depth[v as usize] = u32::MAX;
        }
        self.touched.clear();
        self.queue.clear();
        for &s in sources {
            if self.depth[s as usize] == u32::MAX {
                self.depth[s as usize] = 0;
                self.touched.push(s);
                self.queue.push_back(s);
                visit(s, 0);
            }
        }
        while let Some(u) = self.queue.pop_front() {
            let du = self.depth[u as usize];
            if du >= max_depth {
                continue;
            }
            for v in g.undirected_neighbors(u) {
                if self.depth[v as usize] == u32::MAX {
                    self.depth[v as usize] = du + 1;
                    self.touched.push(v);
                    self.queue.push_back(v);
                    visit(v, du + 1);
                }
            }
        }
    }
}

/// `S` plus every node within `ell` undirected hops of some member of `S`.
/// Returned ascending.
pub fn expansion_set<T: Topology>(g: &T, set: &[NodeId], ell: u32) -> Result<Vec<NodeId>> {
    let n = g.node_count();
    if let Some(&bad) = set.iter().find(|&&v| v as usize >= n) {
        return Err(Error::NodeOutOfRange { id: bad.into(), n });
    }
    if ell == 0 {
        return Err(Error::param("expansion depth must be at least 1"));
    }
    let mut out = Vec::new();
    BoundedBfs::new(n).run(g, set, ell, |v, _| out.push(v));
    out.sort_unstable();
    Ok(out)
}
