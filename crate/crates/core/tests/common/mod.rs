//! Independent reference implementations used by the integration tests.
//! Nothing here calls the pebble game, the flow code or the cleaving code
//! of the library, so agreement is meaningful.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidlink_core::oracle::generic_rank;
use rigidlink_core::{edge, Edge, Graph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn all_pairs(n: usize) -> Vec<Edge> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

/// Every labelled graph on `n` vertices, as the subsets of the pair list.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = all_pairs(n);
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        Graph::new(n, edges).unwrap()
    })
}

/// All connected labelled graphs on 1..=max_n vertices.
pub fn connected_corpus(max_n: usize) -> Vec<Graph> {
    (1..=max_n)
        .flat_map(all_graphs)
        .filter(|g| connected_without(g, &[]))
        .collect()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<Edge> = all_pairs(n)
        .into_iter()
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::new(n, edges).unwrap()
}

/// Seeded random graphs with 1..=max_n vertices and random densities.
pub fn random_corpus(seed: u64, count: usize, max_n: usize) -> Vec<Graph> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(1..=max_n);
            let p = r.gen_range(0.15..0.95);
            random_graph(&mut r, n, p)
        })
        .collect()
}

/// Whether `g` minus `removed` is connected (and non-empty).
pub fn connected_without(g: &Graph, removed: &[usize]) -> bool {
    let n = g.n();
    let mut gone = vec![false; n];
    for &x in removed {
        gone[x] = true;
    }
    let Some(start) = (0..n).find(|&x| !gone[x]) else {
        return false;
    };
    let mut seen = gone.clone();
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n - removed.len()
}

/// Whether `u` and `v` lie in one component of `g - removed`.
pub fn joined_without(g: &Graph, removed: &[usize], u: usize, v: usize) -> bool {
    let mut seen = vec![false; g.n()];
    for &x in removed {
        seen[x] = true;
    }
    seen[u] = true;
    let mut stack = vec![u];
    while let Some(x) = stack.pop() {
        if x == v {
            return true;
        }
        for &y in g.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    false
}

/// All subsets of `0..n` of size at most `k`.
pub fn small_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&x: &usize| x + 1);
            for x in start..n {
                let mut t: Vec<usize> = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// k-connectivity by trying every vertex set of size below k.
pub fn brute_k_connected(g: &Graph, k: usize) -> bool {
    g.n() > k
        && small_subsets(g.n(), k - 1)
            .iter()
            .all(|s| connected_without(g, s))
}

/// Whether some set of at most two vertices other than `u`, `v` separates
/// them.
pub fn brute_kappa_below_three(g: &Graph, u: usize, v: usize) -> bool {
    small_subsets(g.n(), 2)
        .iter()
        .filter(|s| !s.contains(&u) && !s.contains(&v))
        .any(|s| !joined_without(g, s, u, v))
}

/// Smallest number of vertices separating a non-adjacent pair.
pub fn brute_kappa(g: &Graph, u: usize, v: usize) -> usize {
    (0..=g.n())
        .find(|&k| {
            small_subsets(g.n(), k)
                .iter()
                .filter(|s| s.len() == k && !s.contains(&u) && !s.contains(&v))
                .any(|s| !joined_without(g, s, u, v))
        })
        .unwrap()
}

pub const ORACLE_SEED: u64 = 0xC0FFEE;

pub fn oracle_rank(g: &Graph) -> usize {
    generic_rank(g, 2, ORACLE_SEED).unwrap().rank
}

fn rigid_by_rank(g: &Graph, rank: usize) -> bool {
    if g.n() <= 2 {
        g.is_complete()
    } else {
        rank == 2 * g.n() - 3
    }
}

pub fn oracle_rigid(g: &Graph) -> bool {
    rigid_by_rank(g, oracle_rank(g))
}

/// Rigid after deleting any single edge, by numeric rank.
pub fn oracle_redundantly_rigid(g: &Graph) -> bool {
    oracle_rigid(g)
        && g.edges()
            .iter()
            .all(|&(a, b)| oracle_rigid(&g.without_edge(a, b).unwrap()))
}

/// Global rigidity from brute-force 3-connectivity and numeric redundant
/// rigidity.
pub fn oracle_globally_rigid(g: &Graph) -> bool {
    if g.n() <= 3 {
        g.is_complete()
    } else {
        brute_k_connected(g, 3) && oracle_redundantly_rigid(g)
    }
}

/// Whether `edges` on exactly the vertices they touch form a circuit of the
/// planar rigidity matroid: `2k - 2` edges and at most `2|X| - 3` edges on
/// every proper vertex subset `X` with at least two vertices.
pub fn is_laman_circuit(edges: &[Edge]) -> bool {
    let mut verts: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    let k = verts.len();
    if edges.len() != 2 * k - 2 {
        return false;
    }
    let index = |x: usize| verts.binary_search(&x).unwrap();
    let masks: Vec<u32> = edges
        .iter()
        .map(|&(a, b)| 1 << index(a) | 1 << index(b))
        .collect();
    let full = (1u32 << k) - 1;
    (1..full).all(|x: u32| {
        let size = x.count_ones() as usize;
        size < 2 || masks.iter().filter(|&&m| m & x == m).count() <= 2 * size - 3
    })
}

/// Vertex sets of all circuits of `G + uv` that contain `uv`. For every
/// vertex subset, searches edge subsets containing `uv` while keeping every
/// proper subset `X` at most `2|X| - 3` edges, and accepts when `2k - 2`
/// edges are reached.
pub fn circuit_vertex_sets_through(g: &Graph, u: usize, v: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let others: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
    let mut found = Vec::new();
    for mask in 0u32..(1 << others.len()) {
        let mut verts = vec![u, v];
        verts.extend(
            others
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x),
        );
        verts.sort_unstable();
        let k = verts.len();
        if k < 4 {
            continue;
        }
        let index = |x: usize| verts.binary_search(&x).unwrap();
        let pool: Vec<u32> = g
            .edges()
            .iter()
            .filter(|&&(a, b)| verts.contains(&a) && verts.contains(&b))
            .map(|&(a, b)| 1 << index(a) | 1 << index(b))
            .collect();
        if pool.len() < 2 * k - 3 {
            continue;
        }
        let mut search = CircuitSearch {
            k,
            counts: vec![0; 1 << k],
            pool: &pool,
        };
        let uv = 1 << index(u) | 1 << index(v);
        if search.add(uv) && search.extend(0, 2 * k - 3) {
            found.push(verts);
        }
    }
    found
}

struct CircuitSearch<'a> {
    k: usize,
    counts: Vec<usize>,
    pool: &'a [u32],
}

impl CircuitSearch<'_> {
    /// Adds an edge to every superset count; undoes it and returns false if
    /// some proper subset becomes overfull.
    fn add(&mut self, e: u32) -> bool {
        let full = (1u32 << self.k) - 1;
        let ok = self.update(e, 1, |x, c| {
            x == full || c <= 2 * x.count_ones() as usize - 3
        });
        if !ok {
            self.update(e, -1, |_, _| true);
        }
        ok
    }

    fn update(&mut self, e: u32, delta: isize, check: impl Fn(u32, usize) -> bool) -> bool {
        let full = (1u32 << self.k) - 1;
        let rest = full & !e;
        let mut s = rest;
        let mut ok = true;
        loop {
            let x = e | s;
            let c = &mut self.counts[x as usize];
            *c = c.wrapping_add_signed(delta);
            ok &= check(x, *c);
            if s == 0 {
                break;
            }
            s = (s - 1) & rest;
        }
        ok
    }

    fn extend(&mut self, from: usize, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        for i in from..self.pool.len() {
            if self.pool.len() - i < need {
                return false;
            }
            if self.add(self.pool[i]) {
                let done = self.extend(i + 1, need - 1);
                self.update(self.pool[i], -1, |_, _| true);
                if done {
                    return true;
                }
            }
        }
        false
    }
}

/// Random 3-connected graph on `n` vertices with roughly `m` edges.
pub fn random_three_connected(rng: &mut impl Rng, n: usize, m: usize) -> Graph {
    loop {
        let mut pairs = all_pairs(n);
        pairs.shuffle(rng);
        pairs.truncate(m);
        let g = Graph::new(n, pairs).unwrap();
        if brute_k_connected(&g, 3) {
            return g;
        }
    }
}

/// Random rigid graph built by Henneberg moves (vertex additions and edge
/// splits) from a triangle, plus `extra` random edges.
pub fn random_rigid(rng: &mut impl Rng, n: usize, extra: usize) -> Graph {
    let mut edges: Vec<Edge> = vec![(0, 1), (0, 2), (1, 2)];
    for z in 3..n {
        if rng.gen_bool(0.5) && z >= 4 {
            // Edge split: remove xy, join z to x, y and a third vertex.
            let i = rng.gen_range(0..edges.len());
            let (x, y) = edges.swap_remove(i);
            let w = loop {
                let w = rng.gen_range(0..z);
                if w != x && w != y {
                    break w;
                }
            };
            edges.extend([(x, z), (y, z), (w, z)]);
        } else {
            let x = rng.gen_range(0..z);
            let y = loop {
                let y = rng.gen_range(0..z);
                if y != x {
                    break y;
                }
            };
            edges.extend([(x, z), (y, z)]);
        }
    }
    let mut g = Graph::new(n, edges.iter().map(|&(a, b)| edge(a, b))).unwrap();
    let mut missing: Vec<Edge> = all_pairs(n)
        .into_iter()
        .filter(|&(a, b)| !g.has_edge(a, b))
        .collect();
    missing.shuffle(rng);
    missing.truncate(extra);
    g = g.with_edges(missing);
    g
}

/// A graph with ids shuffled.
pub fn shuffled(rng: &mut impl Rng, g: &Graph) -> (Graph, Vec<usize>) {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(rng);
    (g.permuted(&perm), perm)
}

/// Induced subgraph on `keep` (sorted), with the kept ids.
fn induced_sub(g: &Graph, keep: &[usize], extra: &[Edge]) -> (Graph, Vec<usize>) {
    let index = |x: usize| keep.binary_search(&x).ok();
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .chain(extra)
        .filter_map(|&(a, b)| Some(edge(index(a)?, index(b)?)))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    (Graph::new(keep.len(), edges).unwrap(), keep.to_vec())
}

/// Reference 3-block of a pair by the simple cleaving rule: repeatedly pick
/// the lexicographically smallest 2-separator other than `{u, v}` with
/// `{u, v}` minus the separator inside one component of the rest, and keep
/// that component plus the separator and the virtual edge. Returns the
/// original ids of the surviving vertices and the edges (original ids).
pub fn naive_three_block(g: &Graph, u: usize, v: usize) -> (Vec<usize>, Vec<Edge>) {
    let mut cur = g.clone();
    let mut ids: Vec<usize> = (0..g.n()).collect();
    loop {
        let n = cur.n();
        let pos = |x: usize, ids: &[usize]| ids.iter().position(|&y| y == x).unwrap();
        let (cu, cv) = (pos(u, &ids), pos(v, &ids));
        let mut step = None;
        'outer: for a in 0..n {
            for b in a + 1..n {
                if (a, b) == edge(cu, cv) || n < 4 || connected_without(&cur, &[a, b]) {
                    continue;
                }
                let targets: Vec<usize> =
                    [cu, cv].into_iter().filter(|&t| t != a && t != b).collect();
                // Component of cur - {a, b} containing the targets.
                let comp = component_of(&cur, &[a, b], targets[0]);
                if targets.iter().all(|t| comp.contains(t)) {
                    step = Some((a, b, comp));
                    break 'outer;
                }
            }
        }
        let Some((a, b, comp)) = step else { break };
        let mut keep = comp;
        keep.extend([a, b]);
        keep.sort_unstable();
        let (next, kept) = induced_sub(&cur, &keep, &[(a, b)]);
        ids = kept.iter().map(|&x| ids[x]).collect();
        cur = next;
    }
    let edges = lift(&cur, &ids);
    (ids, edges)
}

fn lift(g: &Graph, ids: &[usize]) -> Vec<Edge> {
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|&(a, b)| edge(ids[a], ids[b]))
        .collect();
    edges.sort_unstable();
    edges
}

fn component_of(g: &Graph, removed: &[usize], start: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    for &x in removed {
        seen[x] = true;
    }
    seen[start] = true;
    let mut stack = vec![start];
    let mut out = vec![];
    while let Some(x) = stack.pop() {
        out.push(x);
        for &y in g.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// The augmented graph by brute force: `G` plus `ab` for every pair whose
/// removal disconnects `G`.
pub fn brute_augmented(g: &Graph) -> Graph {
    let extra: Vec<Edge> = all_pairs(g.n())
        .into_iter()
        .filter(|&(a, b)| !g.has_edge(a, b) && g.n() > 3 && !connected_without(g, &[a, b]))
        .collect();
    g.with_edges(extra)
}

/// Maximal vertex sets `X` containing `u` and `v` with `H[X]` 3-connected.
pub fn maximal_three_connected_containing(h: &Graph, u: usize, v: usize) -> Vec<Vec<usize>> {
    let n = h.n();
    let others: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
    let mut good: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..(1 << others.len()) {
        let mut x = vec![u, v];
        x.extend(
            others
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &y)| y),
        );
        x.sort_unstable();
        if x.len() < 4 {
            continue;
        }
        let (sub, _) = induced_sub(h, &x, &[]);
        if brute_k_connected(&sub, 3) {
            good.push(x);
        }
    }
    let maximal: Vec<Vec<usize>> = good
        .iter()
        .filter(|x| {
            !good
                .iter()
                .any(|y| y.len() > x.len() && x.iter().all(|a| y.contains(a)))
        })
        .cloned()
        .collect();
    maximal
}

/// Edges of `h` induced by `x` (sorted, ids of `h`).
pub fn induced_edges(h: &Graph, x: &[usize]) -> Vec<Edge> {
    h.edges()
        .iter()
        .copied()
        .filter(|&(a, b)| x.contains(&a) && x.contains(&b))
        .collect()
}
