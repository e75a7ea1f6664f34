//! Global rigidity in the plane and the classification of vertex pairs as
//! weakly globally linked or globally loose.
//!
//! A non-adjacent pair `{u, v}` is decided by a short pipeline:
//!
//! 1. restrict to the block (maximal 2-connected subgraph) containing both
//!    vertices; fewer than three internally disjoint paths means the pair is
//!    globally loose;
//! 2. a pair that is not linked in the rigidity matroid is globally loose;
//! 3. a linked pair that separates its block is weakly globally linked;
//! 4. otherwise take the 3-block `B` of the pair and the vertex set `V0` of
//!    a circuit of `B + uv` through `uv`: the pair is weakly globally linked
//!    iff `Clique(B, V0)` is globally rigid.

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::connectivity::{
    self, is_k_connected, is_separating_pair, pair_connectivity, small_separator, three_block,
    ThreeBlockOutcome,
};
use crate::error::{Error, Result};
use crate::graph::{
    clique_graph, clique_stand_in, edge, induced, Edge, Graph, Projection, VertexSet,
};
use crate::sparsity::{self, circuit_from_game, is_rigid2, matroid_summary, PebbleGame};

/// Why a graph fails to be globally rigid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum RigidityFailure {
    /// Removing `cut` (at most two vertices) disconnects the graph.
    NotThreeConnected {
        cut: VertexSet,
    },
    NotRigid,
    /// `bridge` lies in no circuit, so deleting it destroys rigidity.
    NotRedundantlyRigid {
        bridge: Edge,
    },
    /// At most three vertices and not complete.
    TooSmallNotComplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalRigidityVerdict {
    pub globally_rigid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_witness: Option<RigidityFailure>,
}

impl GlobalRigidityVerdict {
    fn rigid() -> Self {
        GlobalRigidityVerdict {
            globally_rigid: true,
            failure_witness: None,
        }
    }

    fn fails(why: RigidityFailure) -> Self {
        GlobalRigidityVerdict {
            globally_rigid: false,
            failure_witness: Some(why),
        }
    }

    /// Rewrites vertex ids in the witness.
    fn mapped(self, f: impl Fn(usize) -> usize) -> Self {
        let failure_witness = self.failure_witness.map(|w| match w {
            RigidityFailure::NotThreeConnected { cut } => RigidityFailure::NotThreeConnected {
                cut: cut.iter().map(&f).collect(),
            },
            RigidityFailure::NotRedundantlyRigid { bridge } => {
                RigidityFailure::NotRedundantlyRigid {
                    bridge: edge(f(bridge.0), f(bridge.1)),
                }
            }
            other => other,
        });
        GlobalRigidityVerdict {
            failure_witness,
            ..self
        }
    }
}

/// Global rigidity in the plane: complete graphs on at most three vertices,
/// and otherwise exactly the 3-connected redundantly rigid graphs.
pub fn is_globally_rigid2(g: &Graph) -> GlobalRigidityVerdict {
    if g.n() <= 3 {
        return if g.is_complete() {
            GlobalRigidityVerdict::rigid()
        } else {
            GlobalRigidityVerdict::fails(RigidityFailure::TooSmallNotComplete)
        };
    }
    if let Some(cut) = small_separator(g) {
        return GlobalRigidityVerdict::fails(RigidityFailure::NotThreeConnected { cut });
    }
    let summary = matroid_summary(g);
    if !sparsity::is_rigid_with_rank(g, summary.rank) {
        return GlobalRigidityVerdict::fails(RigidityFailure::NotRigid);
    }
    match summary.bridges.first() {
        Some(&bridge) => {
            GlobalRigidityVerdict::fails(RigidityFailure::NotRedundantlyRigid { bridge })
        }
        None => GlobalRigidityVerdict::rigid(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Adjacent,
    GloballyLoose,
    WeaklyGloballyLinked,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Reason {
    AdjacentEdge,
    NotLinked,
    KappaAtMostTwo,
    SeparatingPair,
    CliqueOfThreeBlockGloballyRigid,
    CliqueOfThreeBlockNotGloballyRigid,
}

/// Evidence attached to a pair verdict. All vertex ids refer to the input
/// graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    /// Fewer than three internally disjoint paths; `separator` is a minimum
    /// vertex set separating the pair (empty when they are disconnected).
    LowConnectivity {
        paths: usize,
        separator: VertexSet,
    },
    /// The pair is linked inside `block` (the 2-connected block containing
    /// it), and removing the pair splits that block into `components`.
    SeparatingPair {
        block: VertexSet,
        components: usize,
    },
    ThreeBlock(Box<ThreeBlockCertificate>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreeBlockCertificate {
    pub block_vertices: VertexSet,
    pub block_edges: Vec<Edge>,
    /// Edges of the 3-block that are not edges of the input graph.
    pub virtual_edges: Vec<Edge>,
    /// `V0`: vertex set of the circuit `B0 + uv`.
    pub circuit_vertices: VertexSet,
    /// Edges of `B0` (the circuit without `uv`).
    pub circuit_edges: Vec<Edge>,
    /// Edges of `Clique(B, V0)`, whose vertex set is `circuit_vertices`.
    pub clique_edges: Vec<Edge>,
    pub clique_verdict: GlobalRigidityVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairClassification {
    pub u: usize,
    pub v: usize,
    pub verdict: Verdict,
    pub reason: Reason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl PairClassification {
    pub fn is_weakly_globally_linked(&self) -> bool {
        self.verdict == Verdict::WeaklyGloballyLinked
    }

    fn new(
        u: usize,
        v: usize,
        verdict: Verdict,
        reason: Reason,
        cert: Option<Certificate>,
    ) -> Self {
        PairClassification {
            u,
            v,
            verdict,
            reason,
            certificate: cert,
        }
    }

    pub fn without_certificate(mut self) -> Self {
        self.certificate = None;
        self
    }
}

/// Per-block data shared by all pair queries in that block.
struct BlockData {
    proj: Projection,
    game: PebbleGame,
}

/// Classifies vertex pairs of one graph, caching the block decomposition and
/// one pebble game per block across queries. Safe to share between threads.
pub struct PairClassifier<'g> {
    g: &'g Graph,
    blocks: Vec<VertexSet>,
    vertex_blocks: Vec<Vec<usize>>,
    cache: Vec<OnceLock<BlockData>>,
}

impl<'g> PairClassifier<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let blocks = connectivity::biconnected_components(g);
        let mut vertex_blocks = vec![Vec::new(); g.n()];
        for (i, b) in blocks.iter().enumerate() {
            for x in b.iter() {
                vertex_blocks[x].push(i);
            }
        }
        let cache = (0..blocks.len()).map(|_| OnceLock::new()).collect();
        PairClassifier {
            g,
            blocks,
            vertex_blocks,
            cache,
        }
    }

    fn block_data(&self, i: usize) -> &BlockData {
        self.cache[i].get_or_init(|| {
            let proj = induced(self.g, &self.blocks[i]).expect("block ids are valid");
            let game = PebbleGame::run(&proj.graph);
            BlockData { proj, game }
        })
    }

    pub fn classify(&self, u: usize, v: usize) -> Result<PairClassification> {
        let g = self.g;
        g.check_vertex(u)?;
        g.check_vertex(v)?;
        if u == v {
            return Err(Error::SameVertex(u));
        }
        if g.has_edge(u, v) {
            return Ok(PairClassification::new(
                u,
                v,
                Verdict::Adjacent,
                Reason::AdjacentEdge,
                None,
            ));
        }
        let loose_low = |paths: usize, separator: VertexSet| {
            PairClassification::new(
                u,
                v,
                Verdict::GloballyLoose,
                Reason::KappaAtMostTwo,
                Some(Certificate::LowConnectivity { paths, separator }),
            )
        };

        let common = self.vertex_blocks[u]
            .iter()
            .find(|b| self.vertex_blocks[v].contains(b))
            .copied();
        let Some(bi) = common else {
            // A cut vertex (or nothing at all) separates u from v.
            let pc = pair_connectivity(g, u, v, 3)?;
            return Ok(loose_low(pc.paths, pc.cut.unwrap_or_default()));
        };

        let data = self.block_data(bi);
        let h = &data.proj.graph;
        let (hu, hv) = (data.proj.image(u).unwrap(), data.proj.image(v).unwrap());
        let pc = pair_connectivity(h, hu, hv, 3)?;
        if pc.paths <= 2 {
            let sep = data.proj.lift(&pc.cut.unwrap_or_default());
            return Ok(loose_low(pc.paths, sep));
        }

        if data.game.clone().span(hu, hv).is_none() {
            return Ok(PairClassification::new(
                u,
                v,
                Verdict::GloballyLoose,
                Reason::NotLinked,
                None,
            ));
        }

        if is_separating_pair(h, hu, hv) {
            let mut removed = vec![false; h.n()];
            removed[hu] = true;
            removed[hv] = true;
            let components = crate::graph::components_avoiding(h, &removed).len();
            return Ok(PairClassification::new(
                u,
                v,
                Verdict::WeaklyGloballyLinked,
                Reason::SeparatingPair,
                Some(Certificate::SeparatingPair {
                    block: self.blocks[bi].clone(),
                    components,
                }),
            ));
        }

        let ThreeBlockOutcome::Block(tb) = three_block(h, hu, hv)? else {
            unreachable!("separating pairs are handled above");
        };
        let b = &tb.block;
        let (bu, bv) = (tb.image(hu).unwrap(), tb.image(hv).unwrap());
        let mut game = PebbleGame::run(b);
        let circuit = circuit_from_game(b, &mut game, bu, bv)
            .expect("a linked pair stays linked in its 3-block");
        // The stand-in decides the common globally rigid case cheaply; a
        // failure is recomputed on the full graph so the witness refers to it.
        let mut verdict = is_globally_rigid2(&clique_stand_in(b, &circuit.vertices)?.graph);
        let clique = clique_graph(b, &circuit.vertices)?;
        if !verdict.globally_rigid {
            verdict = is_globally_rigid2(&clique.graph);
        }

        // Block-local ids -> 3-block ids -> input ids.
        let to_g = |x: usize| data.proj.to_parent[x];
        let b_to_g = |x: usize| to_g(tb.to_parent[x]);
        let lift_edges = |edges: &[Edge], f: &dyn Fn(usize) -> usize| -> Vec<Edge> {
            let mut out: Vec<Edge> = edges.iter().map(|&(x, y)| edge(f(x), f(y))).collect();
            out.sort_unstable();
            out
        };
        let c_to_g = |x: usize| b_to_g(clique.to_parent[x]);
        let cert = ThreeBlockCertificate {
            block_vertices: tb.to_parent.iter().map(|&x| to_g(x)).collect(),
            block_edges: lift_edges(b.edges(), &b_to_g),
            virtual_edges: lift_edges(&tb.added_edges, &to_g),
            circuit_vertices: circuit.vertices.iter().map(b_to_g).collect(),
            circuit_edges: lift_edges(&circuit.without((bu, bv)), &b_to_g),
            clique_edges: lift_edges(clique.graph.edges(), &c_to_g),
            clique_verdict: verdict.clone().mapped(c_to_g),
        };
        let (verdict, reason) = if verdict.globally_rigid {
            (
                Verdict::WeaklyGloballyLinked,
                Reason::CliqueOfThreeBlockGloballyRigid,
            )
        } else {
            (
                Verdict::GloballyLoose,
                Reason::CliqueOfThreeBlockNotGloballyRigid,
            )
        };
        Ok(PairClassification::new(
            u,
            v,
            verdict,
            reason,
            Some(Certificate::ThreeBlock(Box::new(cert))),
        ))
    }

    /// Classifies every non-adjacent pair, in lexicographic order. `threads`
    /// selects the worker count (`None` uses the global pool).
    pub fn classify_all(&self, threads: Option<usize>) -> Result<Vec<PairClassification>> {
        let n = self.g.n();
        let pairs: Vec<Edge> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.g.has_edge(u, v))
            .collect();
        let run = || -> Result<Vec<PairClassification>> {
            pairs
                .par_iter()
                .map(|&(u, v)| self.classify(u, v))
                .collect()
        };
        match threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::LimitExceeded(e.to_string()))?
                .install(run),
            None => run(),
        }
    }
}

/// Classifies one vertex pair of `g`.
pub fn classify_pair(g: &Graph, u: usize, v: usize) -> Result<PairClassification> {
    PairClassifier::new(g).classify(u, v)
}

/// `J_2(G)`: the non-adjacent weakly globally linked pairs, sorted.
pub fn weakly_linked_pairs(g: &Graph) -> Vec<Edge> {
    PairClassifier::new(g)
        .classify_all(None)
        .expect("all pairs of a graph are valid queries")
        .into_iter()
        .filter(PairClassification::is_weakly_globally_linked)
        .map(|c| (c.u, c.v))
        .collect()
}

/// Checks the sufficient condition for weak global linkedness in a
/// 3-connected graph: `X` contains `u, v`, `G[X]` is rigid, and
/// `Clique(G, X)` is globally rigid. A `false` result says nothing.
pub fn sufficient_condition_wgl(g: &Graph, u: usize, v: usize, x: &VertexSet) -> Result<bool> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    x.check_for(g)?;
    if u == v {
        return Err(Error::SameVertex(u));
    }
    if !is_k_connected(g, 3) {
        return Err(Error::NotThreeConnected);
    }
    if !x.contains(u) || !x.contains(v) || !is_rigid2(&induced(g, x)?.graph) {
        return Err(Error::NotPairRigid(u, v));
    }
    Ok(is_globally_rigid2(&clique_graph(g, x)?.graph).globally_rigid)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AuditCheck {
    /// `|E(U)| <= 3|U| - 6`.
    SubsetBound,
    /// A maximal rigid subgraph `G_i` of `G[U]` exceeds `f(|V_i|)`.
    RigidPieceBound,
    /// `sum (2|V_i| - 3) = r_2(G[U])` over the maximal rigid subgraphs.
    SumFormula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditViolation {
    pub check: AuditCheck,
    pub vertices: VertexSet,
    pub observed: usize,
    pub expected: usize,
}

/// Result of auditing a graph for minimal global rigidity and the edge
/// bounds that minimally globally rigid graphs satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MgrAudit {
    pub globally_rigid: bool,
    /// `false` when the input is not globally rigid; the remaining fields
    /// are then empty.
    pub applicable: bool,
    pub minimally_globally_rigid: bool,
    /// Edges whose deletion keeps the graph globally rigid.
    pub redundant_edges: Vec<Edge>,
    pub edge_count: usize,
    pub edge_bound: Option<usize>,
    /// Whether every vertex subset of size at least 3 was inspected.
    pub exhaustive: bool,
    pub subsets_checked: usize,
    pub sum_formula_checks: usize,
    pub violations: Vec<AuditViolation>,
}

/// Subsets are enumerated exhaustively up to this many vertices.
pub const AUDIT_EXHAUSTIVE_LIMIT: usize = 12;
const AUDIT_SAMPLES: usize = 512;

pub fn audit_minimally_globally_rigid(g: &Graph) -> MgrAudit {
    audit_minimally_globally_rigid_seeded(g, 0x5EED_A0D1)
}

/// Audit with an explicit seed for the subset sampler used on graphs above
/// [`AUDIT_EXHAUSTIVE_LIMIT`] vertices.
pub fn audit_minimally_globally_rigid_seeded(g: &Graph, seed: u64) -> MgrAudit {
    let globally_rigid = is_globally_rigid2(g).globally_rigid;
    let mut audit = MgrAudit {
        globally_rigid,
        applicable: false,
        minimally_globally_rigid: false,
        redundant_edges: Vec::new(),
        edge_count: g.m(),
        edge_bound: None,
        exhaustive: false,
        subsets_checked: 0,
        sum_formula_checks: 0,
        violations: Vec::new(),
    };
    if !globally_rigid {
        return audit;
    }
    audit.redundant_edges = g
        .edges()
        .iter()
        .copied()
        .filter(|&(x, y)| is_globally_rigid2(&g.without_edge(x, y).unwrap()).globally_rigid)
        .collect();
    audit.minimally_globally_rigid = audit.redundant_edges.is_empty();
    if !audit.minimally_globally_rigid {
        return audit;
    }
    audit.applicable = true;
    let n = g.n();
    if n >= 3 {
        audit.edge_bound = Some(3 * n - 6);
    }

    let mut subsets: Vec<VertexSet> = Vec::new();
    if n <= AUDIT_EXHAUSTIVE_LIMIT {
        audit.exhaustive = true;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() >= 3 {
                subsets.push((0..n).filter(|&i| mask & (1 << i) != 0).collect());
            }
        }
    } else {
        subsets.push(VertexSet::all(g));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..AUDIT_SAMPLES {
            order.shuffle(&mut rng);
            let size = 3 + (rand::Rng::gen_range(&mut rng, 0..n - 2));
            subsets.push(order[..size].iter().copied().collect());
        }
    }
    for u in &subsets {
        audit_subset(g, u, &mut audit);
    }
    audit
}

fn audit_subset(g: &Graph, u: &VertexSet, audit: &mut MgrAudit) {
    audit.subsets_checked += 1;
    let sub = induced(g, u).expect("subset ids are valid").graph;
    if sub.m() > 3 * u.len() - 6 {
        audit.violations.push(AuditViolation {
            check: AuditCheck::SubsetBound,
            vertices: u.clone(),
            observed: sub.m(),
            expected: 3 * u.len() - 6,
        });
    }
    // Drop isolated vertices before decomposing into maximal rigid pieces.
    let support: VertexSet = (0..sub.n()).filter(|&x| sub.degree(x) > 0).collect();
    if support.is_empty() {
        return;
    }
    let core = induced(&sub, &support).unwrap().graph;
    let pieces = sparsity::maximal_rigid_subgraphs(&core).expect("no isolated vertices");
    let lift = |set: &VertexSet| -> VertexSet {
        set.iter()
            .map(|x| u.as_slice()[support.as_slice()[x]])
            .collect()
    };
    let total: usize = pieces.iter().map(|p| 2 * p.len() - 3).sum();
    let rank = sparsity::rank2(&core);
    audit.sum_formula_checks += 1;
    if total != rank {
        audit.violations.push(AuditViolation {
            check: AuditCheck::SumFormula,
            vertices: u.clone(),
            observed: total,
            expected: rank,
        });
    }
    for piece in &pieces {
        let m = induced(&core, piece).unwrap().graph.m();
        let bound = if piece.len() >= 3 {
            3 * piece.len() - 6
        } else {
            1
        };
        if m > bound {
            audit.violations.push(AuditViolation {
                check: AuditCheck::RigidPieceBound,
                vertices: lift(piece),
                observed: m,
                expected: bound,
            });
        }
    }
}
