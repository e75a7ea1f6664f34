//! The two-dimensional generic rigidity matroid, computed with the
//! (2,3)-pebble game.
//!
//! Every vertex carries two pebbles. An edge is accepted (independent) when
//! four pebbles can be gathered on its endpoints; it is then oriented away
//! from one endpoint, consuming a pebble. A rejected edge `uv` certifies a
//! tight set: the vertices reachable from `{u, v}` in the orientation span
//! exactly `2|R| - 3` accepted edges, and that set is the vertex set of the
//! fundamental circuit of `uv`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph, VertexSet};

/// Outcome of offering an edge to the pebble game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Independent,
    /// The edge is dependent; `span` is the vertex set of its fundamental
    /// circuit (sorted).
    Dependent {
        span: Vec<usize>,
    },
}

/// Mutable (2,3)-pebble game state.
///
/// Invariant: for every vertex, free pebbles plus out-degree equals 2, and
/// the accepted edges are independent in the rigidity matroid.
#[derive(Clone, Debug)]
pub struct PebbleGame {
    pebbles: Vec<u8>,
    /// Out-neighbors with the id of the accepted edge.
    out: Vec<Vec<(usize, usize)>>,
    accepted: usize,
    mark: Vec<u32>,
    epoch: u32,
    pred: Vec<(usize, usize)>,
    stack: Vec<usize>,
}

impl PebbleGame {
    pub fn new(n: usize) -> Self {
        PebbleGame {
            pebbles: vec![2; n],
            out: vec![Vec::new(); n],
            accepted: 0,
            mark: vec![0; n],
            epoch: 0,
            pred: vec![(0, 0); n],
            stack: Vec::new(),
        }
    }

    /// Runs the game over all edges of `g` in canonical order. Edge ids are
    /// indices into `g.edges()`.
    pub fn run(g: &Graph) -> Self {
        Self::run_with(g, |_, _, _| {})
    }

    /// Like [`run`](Self::run), calling `on_dependent(game, id, span)` for
    /// every rejected edge.
    pub fn run_with<F>(g: &Graph, mut on_dependent: F) -> Self
    where
        F: FnMut(&mut Self, usize, &[usize]),
    {
        let mut game = PebbleGame::new(g.n());
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            if let Insertion::Dependent { span } = game.insert(u, v, id) {
                on_dependent(&mut game, id, &span);
            }
        }
        game
    }

    pub fn rank(&self) -> usize {
        self.accepted
    }

    pub fn n(&self) -> usize {
        self.pebbles.len()
    }

    /// Offers edge `uv` with identifier `id`.
    pub fn insert(&mut self, u: usize, v: usize, id: usize) -> Insertion {
        match self.span(u, v) {
            None => {
                // Four pebbles sit on u and v: spend one of u's.
                self.pebbles[u] -= 1;
                self.out[u].push((v, id));
                self.accepted += 1;
                Insertion::Independent
            }
            Some(span) => Insertion::Dependent { span },
        }
    }

    /// Gathers pebbles on `u` and `v` without inserting anything. Returns
    /// `None` when four pebbles can be gathered (the pair is independent of
    /// the accepted edges), otherwise the vertex set of the minimal tight
    /// set containing both, which spans the fundamental circuit of `uv`.
    pub fn span(&mut self, u: usize, v: usize) -> Option<Vec<usize>> {
        debug_assert_ne!(u, v);
        loop {
            if self.pebbles[u] + self.pebbles[v] >= 4 {
                return None;
            }
            if self.pebbles[u] < 2 && self.fetch_pebble(u, v) {
                continue;
            }
            if self.pebbles[v] < 2 && self.fetch_pebble(v, u) {
                continue;
            }
            return Some(self.reach(&[u, v]));
        }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.fill(0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Searches the orientation from `root` (never entering `blocked`) for a
    /// free pebble and moves it to `root` by reversing the path.
    fn fetch_pebble(&mut self, root: usize, blocked: usize) -> bool {
        let epoch = self.next_epoch();
        self.mark[root] = epoch;
        self.mark[blocked] = epoch;
        self.stack.clear();
        self.stack.push(root);
        let mut found = None;
        'search: while let Some(x) = self.stack.pop() {
            for &(y, id) in &self.out[x] {
                if self.mark[y] == epoch {
                    continue;
                }
                self.mark[y] = epoch;
                self.pred[y] = (x, id);
                if self.pebbles[y] > 0 {
                    found = Some(y);
                    break 'search;
                }
                self.stack.push(y);
            }
        }
        let Some(target) = found else { return false };
        self.pebbles[target] -= 1;
        let mut y = target;
        while y != root {
            let (x, id) = self.pred[y];
            let pos = self.out[x]
                .iter()
                .position(|&(z, e)| z == y && e == id)
                .expect("path edge is oriented forward");
            self.out[x].swap_remove(pos);
            self.out[y].push((x, id));
            y = x;
        }
        self.pebbles[root] += 1;
        true
    }

    /// Vertices reachable from `roots` along oriented edges, sorted.
    fn reach(&mut self, roots: &[usize]) -> Vec<usize> {
        let epoch = self.next_epoch();
        self.stack.clear();
        for &r in roots {
            if self.mark[r] != epoch {
                self.mark[r] = epoch;
                self.stack.push(r);
            }
        }
        let mut seen = Vec::new();
        while let Some(x) = self.stack.pop() {
            seen.push(x);
            for &(y, _) in &self.out[x] {
                if self.mark[y] != epoch {
                    self.mark[y] = epoch;
                    self.stack.push(y);
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    /// Ids of accepted edges with both endpoints in `span` (sorted).
    pub fn accepted_within(&mut self, span: &[usize]) -> Vec<usize> {
        let epoch = self.next_epoch();
        for &x in span {
            self.mark[x] = epoch;
        }
        let mut ids: Vec<usize> = span
            .iter()
            .flat_map(|&x| self.out[x].iter())
            .filter(|&&(y, _)| self.mark[y] == epoch)
            .map(|&(_, id)| id)
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Ids of all accepted edges (sorted).
    pub fn accepted_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.out.iter().flatten().map(|&(_, id)| id).collect();
        ids.sort_unstable();
        ids
    }

    /// Checks the pebble invariant; used by tests.
    pub fn check_invariant(&self) -> bool {
        self.pebbles
            .iter()
            .zip(&self.out)
            .all(|(&p, o)| p as usize + o.len() == 2)
    }

    /// With two pebbles held on `a` and one on `b`, checks whether a free
    /// pebble is reachable from `w`. If not, `w` is rigidly attached to `ab`
    /// and the whole failed search region is appended to `attached`.
    fn probe_attached(&mut self, w: usize, a: usize, b: usize, attached: &mut Vec<usize>) -> bool {
        if self.pebbles[w] > 0 {
            return false;
        }
        let epoch = self.next_epoch();
        self.mark[a] = epoch;
        self.mark[b] = epoch;
        self.mark[w] = epoch;
        self.stack.clear();
        self.stack.push(w);
        let mut region = vec![w];
        while let Some(x) = self.stack.pop() {
            for &(y, _) in &self.out[x] {
                if self.mark[y] == epoch {
                    continue;
                }
                if self.pebbles[y] > 0 {
                    return false;
                }
                self.mark[y] = epoch;
                region.push(y);
                self.stack.push(y);
            }
        }
        attached.extend(region);
        true
    }
}

/// A circuit of the rigidity matroid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Circuit {
    pub vertices: VertexSet,
    /// All edges of the circuit, in canonical order.
    pub edges: Vec<Edge>,
}

impl Circuit {
    /// The circuit without the given edge, e.g. `B0` for `B0 + uv`.
    pub fn without(&self, e: Edge) -> Vec<Edge> {
        let e = edge(e.0, e.1);
        self.edges.iter().copied().filter(|&f| f != e).collect()
    }
}

/// Rank, bridges and connected components of the rigidity matroid of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatroidSummary {
    pub rank: usize,
    pub bridges: Vec<Edge>,
    /// Partition of the edge set; each class sorted, classes ordered by
    /// their first edge.
    pub components: Vec<Vec<Edge>>,
}

/// `r_2(G)`.
pub fn rank2(g: &Graph) -> usize {
    PebbleGame::run(g).rank()
}

/// Generic rigidity in the plane.
pub fn is_rigid2(g: &Graph) -> bool {
    if g.n() <= 2 {
        g.is_complete()
    } else {
        rank2(g) == 2 * g.n() - 3
    }
}

fn check_nonadjacent_pair(g: &Graph, u: usize, v: usize) -> Result<()> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::SameVertex(u));
    }
    if g.has_edge(u, v) {
        return Err(Error::AdjacentPair(u, v));
    }
    Ok(())
}

/// Whether `r_2(G + uv) = r_2(G)` for a non-adjacent pair.
pub fn is_linked2(g: &Graph, u: usize, v: usize) -> Result<bool> {
    check_nonadjacent_pair(g, u, v)?;
    Ok(PebbleGame::run(g).span(u, v).is_some())
}

/// The fundamental circuit of `uv` in `G + uv` with respect to the canonical
/// basis, for a linked non-adjacent pair.
pub fn fundamental_circuit(g: &Graph, u: usize, v: usize) -> Result<Circuit> {
    check_nonadjacent_pair(g, u, v)?;
    let mut game = PebbleGame::run(g);
    circuit_from_game(g, &mut game, u, v).ok_or(Error::NotLinked(u, v))
}

pub(crate) fn circuit_from_game(
    g: &Graph,
    game: &mut PebbleGame,
    u: usize,
    v: usize,
) -> Option<Circuit> {
    let span = game.span(u, v)?;
    let mut edges: Vec<Edge> = game
        .accepted_within(&span)
        .into_iter()
        .map(|id| g.edges()[id])
        .collect();
    edges.push(edge(u, v));
    edges.sort_unstable();
    Some(Circuit {
        vertices: VertexSet::from_sorted_unchecked(span),
        edges,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

/// Rank, bridges and components in one pass: each rejected edge is merged
/// with the accepted edges of its fundamental circuit.
pub fn matroid_summary(g: &Graph) -> MatroidSummary {
    let mut uf = UnionFind::new(g.m());
    let mut in_circuit = vec![false; g.m()];
    let game = PebbleGame::run_with(g, |game, id, span| {
        in_circuit[id] = true;
        for f in game.accepted_within(span) {
            in_circuit[f] = true;
            uf.union(id, f);
        }
    });
    let bridges = g
        .edges()
        .iter()
        .zip(&in_circuit)
        .filter_map(|(&e, &c)| (!c).then_some(e))
        .collect();
    let mut classes: std::collections::BTreeMap<usize, Vec<Edge>> = Default::default();
    for (id, &e) in g.edges().iter().enumerate() {
        classes.entry(uf.find(id)).or_default().push(e);
    }
    MatroidSummary {
        rank: game.rank(),
        bridges,
        components: classes.into_values().collect(),
    }
}

/// Edges lying in no circuit.
pub fn r2_bridges(g: &Graph) -> Vec<Edge> {
    matroid_summary(g).bridges
}

/// Partition of the edges into connected components of the matroid.
pub fn r2_components(g: &Graph) -> Vec<Vec<Edge>> {
    matroid_summary(g).components
}

/// Rigid, and still rigid after deleting any single edge. Needs at least
/// three edges.
pub fn is_redundantly_rigid2(g: &Graph) -> Result<bool> {
    if g.m() < 3 {
        return Err(Error::TooFewEdges(g.m()));
    }
    let summary = matroid_summary(g);
    Ok(is_rigid_with_rank(g, summary.rank) && summary.bridges.is_empty())
}

pub(crate) fn is_rigid_with_rank(g: &Graph, rank: usize) -> bool {
    if g.n() <= 2 {
        g.is_complete()
    } else {
        rank == 2 * g.n() - 3
    }
}

/// Vertex sets of the maximal rigid subgraphs. Every edge lies in exactly
/// one of them; two of them share at most one vertex. The graph must have
/// no isolated vertex.
pub fn maximal_rigid_subgraphs(g: &Graph) -> Result<Vec<VertexSet>> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    let mut game = PebbleGame::run(g);
    let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    let mut found: Vec<VertexSet> = Vec::new();
    for &(a, b) in g.edges() {
        if member_of[a].iter().any(|c| member_of[b].contains(c)) {
            continue;
        }
        // Pin two pebbles on a and one on b; always possible for an edge.
        // Gathering on a must not block b, or the pebbles behind b are lost.
        while game.pebbles[a] < 2 {
            assert!(
                game.fetch_pebble(a, a),
                "a vertex can always hold two pebbles"
            );
        }
        while game.pebbles[b] < 1 {
            assert!(
                game.fetch_pebble(b, a),
                "an edge can always hold three pebbles"
            );
        }
        let mut attached = vec![a, b];
        let mut decided = vec![false; g.n()];
        decided[a] = true;
        decided[b] = true;
        for w in 0..g.n() {
            if decided[w] {
                continue;
            }
            let start = attached.len();
            if game.probe_attached(w, a, b, &mut attached) {
                for &x in &attached[start..] {
                    decided[x] = true;
                }
            }
            decided[w] = true;
        }
        let set = VertexSet::new(attached);
        let idx = found.len();
        for x in set.iter() {
            member_of[x].push(idx);
        }
        found.push(set);
    }
    found.sort();
    Ok(found)
}
