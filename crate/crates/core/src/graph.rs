//! Simple undirected graphs with dense vertex ids, plus the structural
//! constructions used by the decision procedures: contraction, clique sums,
//! `Clique(G, X)` and `Con(G, X)`.
//!
//! Every constructive operation returns a new simple graph. Loops and
//! parallel copies created along the way are dropped, so multigraph states
//! never escape this module.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// An undirected edge, always stored as `(min, max)`.
pub type Edge = (usize, usize);

/// Normalizes an unordered pair into canonical `(min, max)` order.
#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple undirected graph on the vertex ids `0..n`.
///
/// Edges are kept in canonical (lexicographic) order and every adjacency list
/// is sorted. Optional external labels live in a side map.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    labels: BTreeMap<usize, String>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and bad ids.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            list.push(edge(u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_edges(n, list))
    }

    /// Builds the simple graph underlying a multigraph edge list: loops are
    /// dropped and parallel copies merged. Ids must be `< n`.
    pub(crate) fn simplified<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list: Vec<Edge> = edges
            .into_iter()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| edge(u, v))
            .collect();
        list.sort_unstable();
        list.dedup();
        Self::from_sorted_edges(n, list)
    }

    fn from_sorted_edges(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            n,
            edges,
            adj,
            labels: BTreeMap::new(),
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_edges(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_sorted_edges(n, edges)
    }

    pub fn path(n: usize) -> Self {
        Self::simplified(n, (1..n).map(|v| (v - 1, v)))
    }

    /// Cycle `0-1-...-(n-1)-0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::simplified(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// Wheel with hub `0` and rim `1..=rim` forming a cycle.
    pub fn wheel(rim: usize) -> Self {
        assert!(rim >= 3, "a wheel needs a rim of at least 3 vertices");
        let spokes = (1..=rim).map(|v| (0, v));
        let rim_edges = (0..rim).map(|i| (1 + i, 1 + (i + 1) % rim));
        Self::simplified(rim + 1, spokes.chain(rim_edges))
    }

    /// Complete bipartite graph with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Self::simplified(a + b, edges)
    }

    /// Attaches external labels. Every key must be a valid vertex id.
    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Result<Self> {
        for &v in labels.keys() {
            check_vertex(v, self.n)?;
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order.
    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    /// Resolves a vertex given either as a label or as a decimal id.
    /// Labels take precedence over ids.
    pub fn resolve_vertex(&self, token: &str) -> Result<usize> {
        if let Some((&v, _)) = self.labels.iter().find(|(_, l)| l.as_str() == token) {
            return Ok(v);
        }
        match token.parse::<usize>() {
            Ok(v) if v < self.n => Ok(v),
            _ => Err(Error::UnknownVertex(token.to_string())),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        check_vertex(v, self.n)
    }

    /// Returns `G + F` (edges already present are ignored).
    pub fn with_edges<I>(&self, extra: I) -> Graph
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::simplified(self.n, self.edges.iter().copied().chain(extra));
        g.labels = self.labels.clone();
        g
    }

    /// Returns `G - e`.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(Error::NotAnEdge(u, v));
        }
        let e = edge(u, v);
        let mut g = Self::from_sorted_edges(
            self.n,
            self.edges.iter().copied().filter(|&f| f != e).collect(),
        );
        g.labels = self.labels.clone();
        Ok(g)
    }

    /// Returns `G - v` with ids re-densified.
    pub fn without_vertex(&self, v: usize) -> Result<Projection> {
        check_vertex(v, self.n)?;
        let keep = VertexSet::from_sorted_unchecked((0..self.n).filter(|&x| x != v).collect());
        induced(self, &keep)
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut g = Self::simplified(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])));
        g.labels = self
            .labels
            .iter()
            .map(|(&v, l)| (perm[v], l.clone()))
            .collect();
        g
    }

    /// Checks the structural invariants: simple, symmetric, sorted, dense ids.
    pub fn validate(&self) -> Result<()> {
        if self.adj.len() != self.n {
            return Err(Error::InvalidVertex {
                vertex: self.adj.len(),
                n: self.n,
            });
        }
        for w in self.edges.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::DuplicateEdge(w[1].0, w[1].1));
            }
        }
        let mut degree_sum = 0;
        for (v, list) in self.adj.iter().enumerate() {
            degree_sum += list.len();
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::DuplicateEdge(v, w[1]));
                }
            }
            for &x in list {
                check_vertex(x, self.n)?;
                if x == v {
                    return Err(Error::SelfLoop(v));
                }
                if self.edges.binary_search(&edge(v, x)).is_err() {
                    return Err(Error::NotAnEdge(v, x));
                }
            }
        }
        for &(u, v) in &self.edges {
            if u >= v {
                return Err(Error::SelfLoop(u));
            }
            check_vertex(v, self.n)?;
        }
        if degree_sum != 2 * self.m() {
            return Err(Error::NotAnEdge(0, 0));
        }
        for &v in self.labels.keys() {
            check_vertex(v, self.n)?;
        }
        Ok(())
    }
}

#[inline]
fn check_vertex(v: usize, n: usize) -> Result<()> {
    if v < n {
        Ok(())
    } else {
        Err(Error::InvalidVertex { vertex: v, n })
    }
}

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet(members)
    }

    /// All vertices of `g`.
    pub fn all(g: &Graph) -> Self {
        VertexSet((0..g.n()).collect())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Checks that every member is a vertex of `g`.
    pub fn check_for(&self, g: &Graph) -> Result<()> {
        self.0.iter().try_for_each(|&v| g.check_vertex(v))
    }

    pub(crate) fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.0 {
            mask[v] = true;
        }
        mask
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A graph derived from a parent graph together with the vertex maps between
/// the two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub graph: Graph,
    /// Parent id of each vertex of `graph`. For a merged vertex this is its
    /// representative (the smallest merged id).
    pub to_parent: Vec<usize>,
    /// Image of each parent vertex in `graph`, if it survives.
    pub from_parent: Vec<Option<usize>>,
}

impl Projection {
    /// Image of a parent vertex, if it survives.
    pub fn image(&self, parent: usize) -> Option<usize> {
        self.from_parent.get(parent).copied().flatten()
    }

    /// Maps a vertex set of the derived graph back to parent ids.
    pub fn lift(&self, set: &VertexSet) -> VertexSet {
        set.iter().map(|v| self.to_parent[v]).collect()
    }

    /// Maps an edge of the derived graph back to parent ids.
    pub fn lift_edge(&self, (u, v): Edge) -> Edge {
        edge(self.to_parent[u], self.to_parent[v])
    }
}

/// Builds the quotient of `g` in which every vertex `v` is identified with
/// `rep[v]`, and vertices with `keep[v] == false` are dropped (together with
/// their edges). Representatives must satisfy `rep[rep[v]] == rep[v]`.
fn quotient(g: &Graph, rep: &[usize], keep: &[bool]) -> Projection {
    let n = g.n();
    let mut from_parent = vec![None; n];
    let mut to_parent = Vec::new();
    for v in 0..n {
        if keep[v] && rep[v] == v {
            from_parent[v] = Some(to_parent.len());
            to_parent.push(v);
        }
    }
    for v in 0..n {
        if keep[v] && rep[v] != v {
            from_parent[v] = from_parent[rep[v]];
        }
    }
    let edges = g.edges().iter().filter_map(|&(u, v)| {
        if keep[u] && keep[v] {
            Some((from_parent[u]?, from_parent[v]?))
        } else {
            None
        }
    });
    let mut graph = Graph::simplified(to_parent.len(), edges);
    graph.labels = to_parent
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| g.label(p).map(|l| (i, l.to_string())))
        .collect();
    Projection {
        graph,
        to_parent,
        from_parent,
    }
}

/// `G / S`: identifies the vertices of `S` into the smallest of them, then
/// re-densifies ids.
pub fn contract_set(g: &Graph, s: &VertexSet) -> Result<Projection> {
    s.check_for(g)?;
    let Some(&root) = s.as_slice().first() else {
        return Err(Error::EmptyVertexSet);
    };
    let mut rep: Vec<usize> = (0..g.n()).collect();
    for v in s.iter() {
        rep[v] = root;
    }
    Ok(quotient(g, &rep, &vec![true; g.n()]))
}

/// `G / e` for an edge `e = xy`.
pub fn contract_edge(g: &Graph, (x, y): Edge) -> Result<Projection> {
    if !g.has_edge(x, y) {
        return Err(Error::NotAnEdge(x, y));
    }
    contract_set(g, &VertexSet::new([x, y]))
}

/// The induced subgraph `G[X]`, with ids re-densified in increasing order.
pub fn induced(g: &Graph, x: &VertexSet) -> Result<Projection> {
    x.check_for(g)?;
    let rep: Vec<usize> = (0..g.n()).collect();
    Ok(quotient(g, &rep, &x.mask(g.n())))
}

/// Connected components, each sorted, listed by smallest member.
pub fn components(g: &Graph) -> Vec<VertexSet> {
    components_avoiding(g, &vec![false; g.n()])
}

/// Connected components of `G - removed`.
pub(crate) fn components_avoiding(g: &Graph, removed: &[bool]) -> Vec<VertexSet> {
    let n = g.n();
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut comp = Vec::new();
        while let Some(x) = stack.pop() {
            comp.push(x);
            for &y in g.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.push(VertexSet::new(comp));
    }
    out
}

/// `N_G(S)`: vertices outside `S` adjacent to some member of `S`.
pub fn neighbors_of_set(g: &Graph, s: &VertexSet) -> Result<VertexSet> {
    s.check_for(g)?;
    let inside = s.mask(g.n());
    Ok(s.iter()
        .flat_map(|v| g.neighbors(v).iter().copied())
        .filter(|&w| !inside[w])
        .collect())
}

/// Components of `G - X`, each with its neighborhood in `X`.
fn outside_components(g: &Graph, x: &VertexSet) -> Vec<(VertexSet, VertexSet)> {
    components_avoiding(g, &x.mask(g.n()))
        .into_iter()
        .map(|c| {
            let nb = neighbors_of_set(g, &c).expect("component ids are valid");
            (c, nb)
        })
        .collect()
}

/// `Clique(G, X)`: deletes every component of `G - X` and turns the
/// neighborhood of each deleted component into a clique.
pub fn clique_graph(g: &Graph, x: &VertexSet) -> Result<Projection> {
    if x.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let base = induced(g, x)?;
    let mut extra = Vec::new();
    for (_, nb) in outside_components(g, x) {
        let ids: Vec<usize> = nb.iter().map(|p| base.from_parent[p].unwrap()).collect();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                extra.push((a, b));
            }
        }
    }
    let graph = base.graph.with_edges(extra);
    Ok(Projection { graph, ..base })
}

/// A sparser graph with the same global rigidity as `Clique(G, X)` and the
/// same vertex ids: each neighborhood of four or more vertices gets a wheel
/// instead of a clique. A wheel is globally rigid, so completing it back to
/// a clique cannot change whether the whole graph is globally rigid.
pub fn clique_stand_in(g: &Graph, x: &VertexSet) -> Result<Projection> {
    if x.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let base = induced(g, x)?;
    let mut extra = Vec::new();
    for (_, nb) in outside_components(g, x) {
        let ids: Vec<usize> = nb.iter().map(|p| base.from_parent[p].unwrap()).collect();
        if ids.len() < 4 {
            for (i, &a) in ids.iter().enumerate() {
                for &b in &ids[i + 1..] {
                    extra.push((a, b));
                }
            }
            continue;
        }
        let (hub, rim) = (ids[0], &ids[1..]);
        for (i, &a) in rim.iter().enumerate() {
            extra.push((hub, a));
            extra.push((a, rim[(i + 1) % rim.len()]));
        }
    }
    let graph = base.graph.with_edges(extra);
    Ok(Projection { graph, ..base })
}

/// `Con(G, X)`: contracts every component of `G - X` into a single vertex
/// (represented by its smallest member).
pub fn con_graph(g: &Graph, x: &VertexSet) -> Result<Projection> {
    x.check_for(g)?;
    if x.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let mut rep: Vec<usize> = (0..g.n()).collect();
    for c in components_avoiding(g, &x.mask(g.n())) {
        let root = c.as_slice()[0];
        for v in c.iter() {
            rep[v] = root;
        }
    }
    Ok(quotient(g, &rep, &vec![true; g.n()]))
}

/// Clique sum of `g1` and `g2`: for every `(a, b)` in `identification`,
/// vertex `b` of `g2` is identified with vertex `a` of `g1`. The identified
/// vertices must span cliques in both graphs.
///
/// Vertices of `g1` keep their ids; the remaining vertices of `g2` follow in
/// increasing order.
pub fn clique_sum(g1: &Graph, g2: &Graph, identification: &[(usize, usize)]) -> Result<Graph> {
    if identification.is_empty() {
        return Err(Error::InvalidIdentification(
            "at least one vertex must be identified".into(),
        ));
    }
    let left = VertexSet::new(identification.iter().map(|&(a, _)| a));
    let right = VertexSet::new(identification.iter().map(|&(_, b)| b));
    if left.len() != identification.len() || right.len() != identification.len() {
        return Err(Error::InvalidIdentification(
            "mapping is not a bijection".into(),
        ));
    }
    left.check_for(g1)?;
    right.check_for(g2)?;
    for (side, g, set) in [("first", g1, &left), ("second", g2, &right)] {
        let s = set.as_slice();
        for (i, &a) in s.iter().enumerate() {
            if s[i + 1..].iter().any(|&b| !g.has_edge(a, b)) {
                return Err(Error::InvalidIdentification(format!(
                    "identified vertices do not form a clique in the {side} graph"
                )));
            }
        }
    }
    let mut map = vec![usize::MAX; g2.n()];
    for &(a, b) in identification {
        map[b] = a;
    }
    let mut next = g1.n();
    for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let edges = g1
        .edges()
        .iter()
        .copied()
        .chain(g2.edges().iter().map(|&(u, v)| (map[u], map[v])));
    let mut g = Graph::simplified(next, edges);
    g.labels = g1.labels.clone();
    Ok(g)
}
