//! Vertex connectivity: blocks and cut vertices, Menger counts via
//! unit-capacity flow, 2-separators, cleaving, the augmented graph and the
//! 3-block of a vertex pair.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{components_avoiding, edge, induced, Edge, Graph, Projection, VertexSet};

const UNSET: usize = usize::MAX;

/// Adjacency access shared by [`Graph`] and the mutable working graphs used
/// while cleaving.
pub(crate) trait Adjacency {
    fn order(&self) -> usize;
    fn nbrs(&self, v: usize) -> &[usize];
}

impl Adjacency for Graph {
    fn order(&self) -> usize {
        self.n()
    }
    fn nbrs(&self, v: usize) -> &[usize] {
        self.neighbors(v)
    }
}

impl Adjacency for Vec<Vec<usize>> {
    fn order(&self) -> usize {
        self.len()
    }
    fn nbrs(&self, v: usize) -> &[usize] {
        &self[v]
    }
}

/// Blocks (maximal 2-connected pieces, bridges and isolated vertices) of the
/// subgraph induced by the active vertices.
#[derive(Debug, Clone, Default)]
pub(crate) struct Blocks {
    pub blocks: Vec<Vec<usize>>,
    pub is_cut: Vec<bool>,
}

impl Blocks {
    pub fn cut_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.is_cut
            .iter()
            .enumerate()
            .filter_map(|(v, &c)| c.then_some(v))
    }

    pub fn has_cut_vertex(&self) -> bool {
        self.is_cut.iter().any(|&c| c)
    }
}

struct Frame {
    v: usize,
    parent: usize,
    next: usize,
}

/// Iterative Hopcroft-Tarjan block decomposition restricted to `active`.
pub(crate) fn blocks_of<A: Adjacency>(adj: &A, active: &[bool]) -> Blocks {
    let n = adj.order();
    let mut disc = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut blocks = Vec::new();
    let mut frames: Vec<Frame> = Vec::new();
    let mut vstack = Vec::new();
    let mut clock = 0;

    for root in 0..n {
        if !active[root] || disc[root] != UNSET {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        if !adj.nbrs(root).iter().any(|&w| active[w]) {
            blocks.push(vec![root]);
            continue;
        }
        let mut root_children = 0;
        vstack.push(root);
        frames.push(Frame {
            v: root,
            parent: UNSET,
            next: 0,
        });
        while let Some(top) = frames.last_mut() {
            let v = top.v;
            let nb = adj.nbrs(v);
            if top.next < nb.len() {
                let w = nb[top.next];
                top.next += 1;
                if !active[w] {
                    continue;
                }
                if disc[w] == UNSET {
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    vstack.push(w);
                    frames.push(Frame {
                        v: w,
                        parent: v,
                        next: 0,
                    });
                } else if w != top.parent {
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            let done = frames.pop().unwrap();
            let Some(parent) = frames.last() else { break };
            let p = parent.v;
            low[p] = low[p].min(low[done.v]);
            if low[done.v] >= disc[p] {
                let mut block = Vec::new();
                loop {
                    let x = vstack.pop().unwrap();
                    block.push(x);
                    if x == done.v {
                        break;
                    }
                }
                block.push(p);
                block.sort_unstable();
                blocks.push(block);
                if p == root {
                    root_children += 1;
                } else {
                    is_cut[p] = true;
                }
            }
        }
        vstack.clear();
        if root_children >= 2 {
            is_cut[root] = true;
        }
    }
    Blocks { blocks, is_cut }
}

/// Reusable buffers for repeated cut-vertex probes on subgraphs of one
/// graph. Cheaper than [`blocks_of`] when only the answer is needed.
pub(crate) struct CutProbe {
    disc: Vec<usize>,
    low: Vec<usize>,
    is_cut: Vec<bool>,
    frames: Vec<Frame>,
}

impl CutProbe {
    pub fn new(n: usize) -> Self {
        CutProbe {
            disc: vec![UNSET; n],
            low: vec![0; n],
            is_cut: vec![false; n],
            frames: Vec::new(),
        }
    }

    /// Smallest cut vertex of the subgraph induced by the active vertices.
    pub fn first_cut<A: Adjacency>(&mut self, adj: &A, active: &[bool]) -> Option<usize> {
        let n = adj.order();
        self.disc.fill(UNSET);
        self.is_cut.fill(false);
        let (disc, low, frames) = (&mut self.disc, &mut self.low, &mut self.frames);
        let mut clock = 0;
        for root in 0..n {
            if !active[root] || disc[root] != UNSET {
                continue;
            }
            disc[root] = clock;
            low[root] = clock;
            clock += 1;
            let mut root_children = 0;
            frames.push(Frame {
                v: root,
                parent: UNSET,
                next: 0,
            });
            while let Some(top) = frames.last_mut() {
                let v = top.v;
                let nb = adj.nbrs(v);
                if top.next < nb.len() {
                    let w = nb[top.next];
                    top.next += 1;
                    if !active[w] {
                        continue;
                    }
                    if disc[w] == UNSET {
                        disc[w] = clock;
                        low[w] = clock;
                        clock += 1;
                        frames.push(Frame {
                            v: w,
                            parent: v,
                            next: 0,
                        });
                    } else if w != top.parent {
                        low[v] = low[v].min(disc[w]);
                    }
                    continue;
                }
                let done = frames.pop().unwrap();
                let Some(parent) = frames.last() else { break };
                let p = parent.v;
                low[p] = low[p].min(low[done.v]);
                if low[done.v] >= disc[p] {
                    if p == root {
                        root_children += 1;
                    } else {
                        self.is_cut[p] = true;
                    }
                }
            }
            if root_children >= 2 {
                self.is_cut[root] = true;
            }
        }
        self.is_cut.iter().position(|&c| c)
    }
}

/// Marks every vertex of a 2-connected graph that lies in a 2-separator.
///
/// Works on a DFS tree with vertices renamed to preorder positions, so the
/// subtree of `v` is the range `v..v + size[v]`. Both members of a
/// separating pair `{a, b}` are related in the tree; let `a` be the ancestor.
/// The pair separates exactly when
/// - some child subtree of `b` has back edges only to `a` and `b`, or
/// - `a` is neither the root nor the parent of `b`, no back edge leaves
///   `M = subtree(c) - subtree(b)` (with `c` the child of `a` above `b`) for a
///   vertex above `a`, and no child subtree of `b` has back edges both above
///   `a` and strictly between `a` and `b`.
fn separator_vertices(g: &Graph) -> Vec<bool> {
    let n = g.n();
    let mut out = vec![false; n];
    if n < 4 {
        return out;
    }

    // Iterative DFS from vertex 0.
    let mut pre = vec![UNSET; n];
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![UNSET; n];
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    pre[0] = 0;
    order.push(0);
    while let Some(top) = stack.last_mut() {
        let (x, i) = *top;
        match g.neighbors(x).get(i) {
            Some(&y) => {
                top.1 += 1;
                if pre[y] == UNSET {
                    pre[y] = order.len();
                    parent[order.len()] = pre[x];
                    order.push(y);
                    stack.push((y, 0));
                }
            }
            None => {
                stack.pop();
            }
        }
    }
    debug_assert_eq!(order.len(), n, "the graph must be connected");

    let mut size = vec![1; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in (1..n).rev() {
        size[parent[v]] += size[v];
    }
    for v in 1..n {
        children[parent[v]].push(v);
    }

    // Back edges as (descendant, ancestor) in preorder ids, the lowest back
    // edge target of each vertex, and the two lowest distinct targets below
    // each subtree root.
    let mut fronds = Vec::new();
    let mut own_low = vec![n; n];
    let (mut low1, mut low2) = (vec![n; n], vec![n; n]);
    for v in 0..n {
        for &w in g.neighbors(order[v]) {
            let w = pre[w];
            if w < v && w != parent[v] {
                fronds.push((v, w));
                own_low[v] = own_low[v].min(w);
                push_low(&mut low1[v], &mut low2[v], w);
            }
        }
    }
    for v in (1..n).rev() {
        let p = parent[v];
        for t in [low1[v], low2[v]] {
            if t < p {
                push_low(&mut low1[p], &mut low2[p], t);
            }
        }
    }

    // high[d]: highest back edge target from subtree(d) strictly above the
    // parent of d. Offline: raise the threshold and insert fronds in order.
    let mut high = vec![UNSET; n];
    let mut queries: Vec<usize> = (1..n).collect();
    queries.sort_unstable_by_key(|&d| parent[d]);
    fronds.sort_unstable_by_key(|&(_, w)| w);
    let mut tree = MaxTree::new(n);
    let mut next = 0;
    for d in queries {
        while next < fronds.len() && fronds[next].1 < parent[d] {
            tree.raise(fronds[next].0, fronds[next].1);
            next += 1;
        }
        high[d] = tree.max(d, d + size[d]);
    }

    let rmq = MinTable::new(&own_low);
    let mut mark = |a: usize, b: usize| {
        out[order[a]] = true;
        out[order[b]] = true;
    };

    for d in 1..n {
        let b = parent[d];
        let a = low1[d];
        if a < b && (low2[d] == n || low2[d] == b) && n > size[d] + 2 {
            mark(a, b);
        }
    }

    for b in 1..n {
        let mut c = parent[b];
        while c != 0 {
            let a = parent[c];
            if a == 0 {
                break;
            }
            let m_low = rmq.min(c, b).min(rmq.min(b + size[b], c + size[c]));
            if m_low < a {
                // Every ancestor strictly between m_low and a sees the same
                // back edge leave M; the next candidate is m_low itself.
                if m_low == 0 {
                    break;
                }
                let kids = &children[m_low];
                c = kids[kids.partition_point(|&k| k <= b) - 1];
                continue;
            }
            let straddles = children[b]
                .iter()
                .any(|&d| low1[d] < a && high[d] != UNSET && high[d] > a);
            if !straddles {
                mark(a, b);
            }
            c = a;
        }
    }
    out
}

/// Inserts `t` into the two smallest distinct values `(l1, l2)`.
fn push_low(l1: &mut usize, l2: &mut usize, t: usize) {
    if t < *l1 {
        *l2 = *l1;
        *l1 = t;
    } else if t > *l1 && t < *l2 {
        *l2 = t;
    }
}

/// Sparse table for range minima.
struct MinTable {
    levels: Vec<Vec<usize>>,
}

impl MinTable {
    fn new(values: &[usize]) -> Self {
        let mut levels = vec![values.to_vec()];
        let mut span = 1;
        while 2 * span <= values.len() {
            let prev = levels.last().unwrap();
            let next = (0..=values.len() - 2 * span)
                .map(|i| prev[i].min(prev[i + span]))
                .collect();
            levels.push(next);
            span *= 2;
        }
        MinTable { levels }
    }

    /// Minimum over `lo..hi`, or `usize::MAX` for an empty range.
    fn min(&self, lo: usize, hi: usize) -> usize {
        if lo >= hi {
            return usize::MAX;
        }
        let k = (usize::BITS - 1 - (hi - lo).leading_zeros()) as usize;
        self.levels[k][lo].min(self.levels[k][hi - (1 << k)])
    }
}

/// Segment tree over positions holding the largest value raised so far.
struct MaxTree {
    n: usize,
    t: Vec<usize>,
}

impl MaxTree {
    fn new(n: usize) -> Self {
        MaxTree {
            n,
            t: vec![UNSET; 2 * n],
        }
    }

    fn raise(&mut self, pos: usize, value: usize) {
        let mut i = pos + self.n;
        while i >= 1 {
            let cur = self.t[i];
            if cur == UNSET || cur < value {
                self.t[i] = value;
            }
            i /= 2;
        }
    }

    /// Largest value over `lo..hi`, or `UNSET` if nothing was raised there.
    fn max(&self, lo: usize, hi: usize) -> usize {
        let (mut l, mut r) = (lo + self.n, hi + self.n);
        let mut best = UNSET;
        let mut take = |v: usize| {
            if v != UNSET && (best == UNSET || v > best) {
                best = v;
            }
        };
        while l < r {
            if l & 1 == 1 {
                take(self.t[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                take(self.t[r]);
            }
            l /= 2;
            r /= 2;
        }
        best
    }
}

/// Vertex sets of the blocks of `g`. Isolated vertices form singleton blocks.
pub fn biconnected_components(g: &Graph) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = blocks_of(g, &vec![true; g.n()])
        .blocks
        .into_iter()
        .map(VertexSet::from_sorted_unchecked)
        .collect();
    out.sort();
    out
}

pub fn articulation_points(g: &Graph) -> Vec<usize> {
    blocks_of(g, &vec![true; g.n()]).cut_vertices().collect()
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() > 0 && components_avoiding(g, &vec![false; g.n()]).len() == 1
}

/// Unit vertex-capacity flow network between two non-adjacent vertices.
/// Node `2x` is the entry of `x`, node `2x + 1` its exit.
struct VertexFlow {
    head: Vec<usize>,
    cap: Vec<u8>,
    out: Vec<Vec<usize>>,
    source: usize,
    sink: usize,
}

impl VertexFlow {
    fn new(g: &Graph, s: usize, t: usize) -> Self {
        let nodes = 2 * g.n();
        let mut net = VertexFlow {
            head: Vec::with_capacity(2 * (g.n() + 2 * g.m())),
            cap: Vec::with_capacity(2 * (g.n() + 2 * g.m())),
            out: vec![Vec::new(); nodes],
            source: 2 * s + 1,
            sink: 2 * t,
        };
        for x in 0..g.n() {
            if x != s && x != t {
                net.arc(2 * x, 2 * x + 1, 1);
            }
        }
        // Edge arcs never saturate, so every minimum cut consists of vertex
        // arcs.
        for &(x, y) in g.edges() {
            net.arc(2 * x + 1, 2 * y, 2);
            net.arc(2 * y + 1, 2 * x, 2);
        }
        net
    }

    fn arc(&mut self, from: usize, to: usize, cap: u8) {
        self.out[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.out[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    /// Augments along one shortest path; returns false when none exists.
    fn augment(&mut self, pred: &mut [usize], seen: &mut [bool]) -> bool {
        seen.fill(false);
        let mut queue = VecDeque::from([self.source]);
        seen[self.source] = true;
        while let Some(x) = queue.pop_front() {
            for &a in &self.out[x] {
                let y = self.head[a];
                if self.cap[a] > 0 && !seen[y] {
                    seen[y] = true;
                    pred[y] = a;
                    if y == self.sink {
                        let mut z = y;
                        while z != self.source {
                            let a = pred[z];
                            self.cap[a] -= 1;
                            self.cap[a ^ 1] += 1;
                            z = self.head[a ^ 1];
                        }
                        return true;
                    }
                    queue.push_back(y);
                }
            }
        }
        false
    }
}

/// Result of a Menger computation between two non-adjacent vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairConnectivity {
    /// Number of internally disjoint paths found (at most the cap).
    pub paths: usize,
    /// A minimum separating vertex set, present when the count is below the
    /// cap.
    pub cut: Option<VertexSet>,
}

fn check_pair(g: &Graph, u: usize, v: usize) -> Result<()> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::SameVertex(u));
    }
    Ok(())
}

/// Counts internally disjoint `u`-`v` paths, stopping early once `cap` are
/// found. Below the cap, a minimum separating set is returned too.
pub fn pair_connectivity(g: &Graph, u: usize, v: usize, cap: usize) -> Result<PairConnectivity> {
    check_pair(g, u, v)?;
    if g.has_edge(u, v) {
        return Err(Error::AdjacentPair(u, v));
    }
    let mut net = VertexFlow::new(g, u, v);
    let nodes = 2 * g.n();
    let mut pred = vec![0; nodes];
    let mut seen = vec![false; nodes];
    let mut paths = 0;
    while paths < cap {
        if !net.augment(&mut pred, &mut seen) {
            // `seen` now holds the residual reach of the source.
            let cut = (0..g.n())
                .filter(|&x| seen[2 * x] && !seen[2 * x + 1] && x != u && x != v)
                .collect();
            return Ok(PairConnectivity {
                paths,
                cut: Some(cut),
            });
        }
        paths += 1;
    }
    Ok(PairConnectivity { paths, cut: None })
}

/// `kappa_G(u, v)` for a non-adjacent pair: the maximum number of internally
/// disjoint `u`-`v` paths.
pub fn kappa_pair(g: &Graph, u: usize, v: usize) -> Result<usize> {
    Ok(pair_connectivity(g, u, v, usize::MAX)?.paths)
}

/// Whether `g` is `k`-connected: more than `k` vertices and no separating
/// set of fewer than `k` vertices.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    if g.n() <= k {
        return false;
    }
    match k {
        0 => true,
        1 => is_connected(g),
        2 => is_connected(g) && !blocks_of(g, &vec![true; g.n()]).has_cut_vertex(),
        3 => small_separator(g).is_none(),
        _ => (0..g.n()).all(|x| {
            (x + 1..g.n()).all(|y| {
                g.has_edge(x, y)
                    || pair_connectivity(g, x, y, k)
                        .map(|c| c.paths >= k)
                        .unwrap_or(false)
            })
        }),
    }
}

/// A vertex set of size at most 2 whose removal disconnects `g` (the empty
/// set when `g` is already disconnected), or `None` when there is none.
///
/// The pair reported has the smallest first member, then the smallest second.
pub fn small_separator(g: &Graph) -> Option<VertexSet> {
    let n = g.n();
    if n == 0 {
        return None;
    }
    if !is_connected(g) {
        return Some(VertexSet::default());
    }
    let mut active = vec![true; n];
    let whole = blocks_of(g, &active);
    if let Some(c) = whole.cut_vertices().next() {
        return Some(VertexSet::new([c]));
    }
    let a = separator_vertices(g).iter().position(|&s| s)?;
    active[a] = false;
    let c = CutProbe::new(n)
        .first_cut(g, &active)
        .expect("a marked vertex lies in a 2-separator");
    Some(VertexSet::new([a, c]))
}

/// An unordered vertex pair whose removal disconnects a 2-connected graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SeparatorPair {
    pub a: usize,
    pub b: usize,
}

impl SeparatorPair {
    pub fn new(a: usize, b: usize) -> Self {
        let (a, b) = edge(a, b);
        SeparatorPair { a, b }
    }

    pub fn as_edge(self) -> Edge {
        (self.a, self.b)
    }
}

fn require_two_connected(g: &Graph) -> Result<()> {
    if is_k_connected(g, 2) {
        Ok(())
    } else {
        Err(Error::NotTwoConnected)
    }
}

/// All 2-separators of a 2-connected graph, in lexicographic order.
pub fn two_separators(g: &Graph) -> Result<Vec<SeparatorPair>> {
    require_two_connected(g)?;
    let mut found = BTreeSet::new();
    let mut active = vec![true; g.n()];
    for a in 0..g.n() {
        active[a] = false;
        for b in blocks_of(g, &active).cut_vertices() {
            found.insert(SeparatorPair::new(a, b));
        }
        active[a] = true;
    }
    Ok(found.into_iter().collect())
}

/// The augmented graph: `g` plus the edge `ab` for every 2-separator `(a, b)`.
pub fn augmented_graph(g: &Graph) -> Result<Graph> {
    let seps = two_separators(g)?;
    Ok(g.with_edges(seps.into_iter().map(SeparatorPair::as_edge)))
}

/// Cleaves `g` along `s` toward the component `c` of `g - {a, b}`:
/// returns `g[c + {a, b}] + ab`.
pub fn cleave(g: &Graph, s: SeparatorPair, c: &VertexSet) -> Result<Projection> {
    c.check_for(g)?;
    g.check_vertex(s.a)?;
    g.check_vertex(s.b)?;
    let mut removed = vec![false; g.n()];
    removed[s.a] = true;
    removed[s.b] = true;
    if !components_avoiding(g, &removed).contains(c) {
        return Err(Error::NotAComponent(s.a, s.b));
    }
    let keep: VertexSet = c.iter().chain([s.a, s.b]).collect();
    let mut p = induced(g, &keep)?;
    let (a, b) = (p.image(s.a).unwrap(), p.image(s.b).unwrap());
    p.graph = p.graph.with_edges([(a, b)]);
    Ok(p)
}

/// The 3-block of a vertex pair, with the map back to the parent graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeBlock {
    pub block: Graph,
    /// Parent id of each block vertex (increasing).
    pub to_parent: Vec<usize>,
    /// Virtual edges of the block, in parent ids; none of them is an edge of
    /// the parent graph.
    pub added_edges: Vec<Edge>,
}

impl ThreeBlock {
    pub fn image(&self, parent: usize) -> Option<usize> {
        self.to_parent.binary_search(&parent).ok()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::from_sorted_unchecked(self.to_parent.clone())
    }

    pub fn lift(&self, set: &VertexSet) -> VertexSet {
        set.iter().map(|v| self.to_parent[v]).collect()
    }

    pub fn lift_edge(&self, (x, y): Edge) -> Edge {
        edge(self.to_parent[x], self.to_parent[y])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThreeBlockOutcome {
    /// `(u, v)` is itself a 2-separator of the graph.
    SeparatingPair,
    Block(ThreeBlock),
}

/// Whether removing `u` and `v` disconnects `g`.
pub fn is_separating_pair(g: &Graph, u: usize, v: usize) -> bool {
    let mut removed = vec![false; g.n()];
    removed[u] = true;
    removed[v] = true;
    components_avoiding(g, &removed).len() > 1
}

/// The 3-block of the non-adjacent pair `{u, v}` in a 2-connected graph with
/// `kappa(u, v) >= 3`, or the report that `(u, v)` is a 2-separator.
///
/// The block is obtained by cleaving. For each vertex `a` of the current
/// graph `H`, every 2-separator `(a, b)` is a cut vertex `b` of `H - a`, and
/// cleaving along all of them toward `u, v` keeps exactly `a` plus the block
/// of `H - a` containing the remaining targets, with `ab` added for each cut
/// vertex `b` of that block. Once `a` is processed, `H - a` is 2-connected
/// and cleaving keeps it so, so `a` lies in no later 2-separator and a
/// single sweep suffices.
pub fn three_block(g: &Graph, u: usize, v: usize) -> Result<ThreeBlockOutcome> {
    check_pair(g, u, v)?;
    if g.has_edge(u, v) {
        return Err(Error::AdjacentPair(u, v));
    }
    require_two_connected(g)?;
    if pair_connectivity(g, u, v, 3)?.paths < 3 {
        return Err(Error::LowConnectivity(u, v));
    }
    if is_separating_pair(g, u, v) {
        return Ok(ThreeBlockOutcome::SeparatingPair);
    }

    let n = g.n();
    let mut adj: Vec<Vec<usize>> = (0..n).map(|x| g.neighbors(x).to_vec()).collect();
    let mut alive = vec![true; n];
    let mut in_block = vec![false; n];
    let mut probe = CutProbe::new(n);
    // Cleaving never puts a vertex into a new 2-separator, so vertices
    // outside every 2-separator of `g` can be skipped for good.
    let candidate = separator_vertices(g);
    for a in 0..n {
        if !alive[a] {
            continue;
        }
        alive[a] = false;
        if !candidate[a] || probe.first_cut(&adj, &alive).is_none() {
            alive[a] = true;
            continue;
        }
        let blocks = blocks_of(&adj, &alive);
        alive[a] = true;
        let targets: Vec<usize> = [u, v].into_iter().filter(|&t| t != a).collect();
        let keep = blocks
            .blocks
            .iter()
            .find(|b| targets.iter().all(|t| b.binary_search(t).is_ok()))
            .ok_or(Error::LowConnectivity(u, v))?;
        for &x in keep {
            in_block[x] = true;
        }
        in_block[a] = true;
        for &b in keep {
            if blocks.is_cut[b] && !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for x in 0..n {
            if alive[x] && !in_block[x] {
                alive[x] = false;
                adj[x].clear();
            }
        }
        for x in 0..n {
            if alive[x] {
                adj[x].retain(|&y| alive[y]);
            }
            in_block[x] = false;
        }
    }

    let to_parent: Vec<usize> = (0..n).filter(|&x| alive[x]).collect();
    let mut image = vec![UNSET; n];
    for (i, &x) in to_parent.iter().enumerate() {
        image[x] = i;
    }
    let mut edges = Vec::new();
    let mut added_edges = Vec::new();
    for &x in &to_parent {
        for &y in &adj[x] {
            if x < y {
                edges.push((image[x], image[y]));
                if !g.has_edge(x, y) {
                    added_edges.push((x, y));
                }
            }
        }
    }
    added_edges.sort_unstable();
    let block = Graph::new(to_parent.len(), edges).expect("cleaving keeps the graph simple");
    Ok(ThreeBlockOutcome::Block(ThreeBlock {
        block,
        to_parent,
        added_edges,
    }))
}
