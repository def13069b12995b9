//! Gadgets, face surgery and the extremal builder.
//!
//! Every graph produced here labels the dominating pair `0, 1` and lays the
//! spanning path out as `2, 3, …, n−1`, so the witness is implicit in the
//! labeling.

use serde::Serialize;

use crate::embedding::{planar_book_scheme, splice_into_face, trace_faces, EmbeddingScheme};
use crate::error::{Error, Result};
use crate::graph::{self, graph6, Graph, SpanningPathWitness};

/// Which planar gadget to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    H,
    HPrime,
}

const H_EDGES: [(usize, usize); 15] = [
    (1, 2), (2, 3), (1, 3), (4, 5), (4, 6), (5, 6), (1, 4), (2, 5),
    (1, 5), (1, 7), (2, 7), (3, 7), (4, 7), (5, 7), (6, 7),
];

const H_PRIME_EDGES: [(usize, usize); 12] = [
    (1, 2), (2, 3), (1, 3), (4, 5), (4, 6), (5, 6),
    (3, 5), (3, 6), (1, 6), (3, 4), (2, 6), (2, 4),
];

/// The gadget with `v_k` stored as vertex `k − 1`.
pub fn gadget(kind: GadgetKind) -> Graph {
    let (n, edges): (usize, &[(usize, usize)]) = match kind {
        GadgetKind::H => (7, &H_EDGES),
        GadgetKind::HPrime => (6, &H_PRIME_EDGES),
    };
    Graph::from_edges(n, edges.iter().map(|&(a, b)| (a - 1, b - 1))).expect("gadget edges are valid")
}

/// One surgery step as recorded in a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurgeryStep {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub i: usize,
    /// Ids given to v_{i3}, v_{i4}, v_{i6}, v_{i7}.
    pub new_vertices: [usize; 4],
}

/// Replaces the triangle `xyz` by the overlay of both gadgets with
/// `x = v1`, `y = v2`, `z = v5`.
///
/// The four new vertices are appended in the order v4, v7, v3, v6, which is
/// the order of the new path `z v4 v7 v3 v6`.
pub fn surgery(g: &Graph, x: usize, y: usize, z: usize, i: usize) -> Result<(Graph, SurgeryStep)> {
    let n = g.order();
    for v in [x, y, z] {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if x == y || y == z || x == z {
        return Err(Error::DistinctVertices(if x == y || x == z { x } else { y }));
    }
    if !(g.has_edge(x, y) && g.has_edge(y, z) && g.has_edge(x, z)) {
        return Err(Error::Contract(format!("{x} {y} {z} is not a triangle")));
    }
    // gadget index -> vertex id; index k stands for v_{k+1}
    let (v4, v7, v3, v6) = (n, n + 1, n + 2, n + 3);
    let ids = [x, y, v3, v4, z, v6, v7];
    let shared = |a: usize, b: usize| [a, b].iter().all(|k| [0, 1, 4].contains(k));
    let overlay = H_EDGES.iter().chain(H_PRIME_EDGES.iter()).map(|&(a, b)| (a - 1, b - 1));
    let mut new_edges: Vec<(usize, usize)> = Vec::with_capacity(18);
    for (a, b) in overlay {
        if shared(a, b) {
            continue;
        }
        let e = (ids[a].min(ids[b]), ids[a].max(ids[b]));
        if !new_edges.contains(&e) {
            new_edges.push(e);
        }
    }
    debug_assert_eq!(new_edges.len(), 18);
    let edges: Vec<(u32, u32)> = g
        .edges()
        .chain(new_edges)
        .map(|(a, b)| (a as u32, b as u32))
        .collect();
    let out = graph::sparse_from_pairs(n + 4, edges)?;
    let step = SurgeryStep {
        x,
        y,
        z,
        i,
        new_vertices: [v3, v4, v6, v7],
    };
    Ok((out, step))
}

/// Extremal graph together with the data certifying its structure.
#[derive(Clone, Debug)]
pub struct ConstructionTrace {
    pub graph: Graph,
    pub gamma: usize,
    pub dominating_pair: (usize, usize),
    pub path_witness: SpanningPathWitness,
    /// The 3γ edges outside the spanning K₂ ∇ P_{n−2}.
    pub added_edges: Vec<(usize, usize)>,
    pub surgery_log: Vec<SurgeryStep>,
}

/// Largest order for which a trace is serialized with its graph6 payload.
pub const JSON_MAX_ORDER: usize = 100_000;

#[derive(Serialize)]
struct TraceJson<'a> {
    schema_version: u32,
    n: usize,
    gamma: usize,
    edges: usize,
    graph6: String,
    dominating_pair: [usize; 2],
    path_order: &'a [usize],
    added_edges: Vec<[usize; 2]>,
    surgery_log: &'a [SurgeryStep],
}

impl ConstructionTrace {
    pub fn to_json(&self) -> Result<String> {
        let n = self.graph.order();
        if n > JSON_MAX_ORDER {
            return Err(Error::ScaleRefusal(format!(
                "graph6 export of order {n} exceeds {JSON_MAX_ORDER}"
            )));
        }
        let t = TraceJson {
            schema_version: 1,
            n,
            gamma: self.gamma,
            edges: self.graph.size(),
            graph6: graph6::encode(&self.graph),
            dominating_pair: [self.dominating_pair.0, self.dominating_pair.1],
            path_order: &self.path_witness.path_order,
            added_edges: self.added_edges.iter().map(|&(u, v)| [u, v]).collect(),
            surgery_log: &self.surgery_log,
        };
        Ok(serde_json::to_string_pretty(&t)?)
    }

    /// Re-checks the edge count, the witness and the added-edge list.
    pub fn verify(&self) -> Result<()> {
        let n = self.graph.order();
        let want = 3 * (n - 2 + self.gamma);
        if self.graph.size() != want {
            return Err(Error::Witness(format!("{} edges, expected {want}", self.graph.size())));
        }
        self.path_witness.verify(&self.graph)?;
        let mut extra = self.path_witness.extra_edges(&self.graph);
        let mut listed = self.added_edges.clone();
        extra.sort_unstable();
        listed.sort_unstable();
        if extra != listed || listed.len() != 3 * self.gamma {
            return Err(Error::Witness("added edges do not match the witness".into()));
        }
        Ok(())
    }
}

/// Largest order [`construct_ex`] builds.
pub const EX_MAX_ORDER: usize = 50_000_000;

/// A graph in EX(n, γ) for `n ≥ 2γ + 4`.
///
/// Even γ starts from K₂ ∇ P_t with `t = n − 2γ − 2`; odd γ starts from K₆
/// with K₂ ∇ P_t, `t = n − 2γ − 3`, placed in the face v1 v2 v3. The first
/// surgery cuts the face (w1, w2, w3) at the end of the base path and each
/// later one cuts (v1, v2, v_{i6}) of the previous gadget.
pub fn construct_ex(n: usize, gamma: usize) -> Result<ConstructionTrace> {
    if n < 2 * gamma + 4 {
        return Err(Error::Order(format!(
            "need n >= 2*gamma + 4 = {}, got {n}",
            2 * gamma + 4
        )));
    }
    if n > EX_MAX_ORDER {
        return Err(Error::ScaleRefusal(format!("order {n} exceeds {EX_MAX_ORDER}")));
    }
    let surgeries = gamma / 2;
    let base_n = n - 4 * surgeries;
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(3 * base_n);
    edges.push((0, 1));
    for v in 2..base_n as u32 {
        edges.push((0, v));
        edges.push((1, v));
        if v > 2 {
            edges.push((v - 1, v));
        }
    }
    if gamma % 2 == 1 {
        // path starts v6 v5 v4 v3 at 2, 3, 4, 5
        edges.extend([(2, 4), (2, 5), (3, 5)]);
    }
    let mut g = graph::sparse_from_pairs(base_n, edges)?;
    let mut log = Vec::with_capacity(surgeries);
    let mut z = base_n - 1;
    for i in 1..=surgeries {
        let (next, step) = surgery(&g, 0, 1, z, i)?;
        z = step.new_vertices[2];
        g = next;
        log.push(step);
    }
    let witness = SpanningPathWitness {
        dominating_pair: (0, 1),
        path_order: (2..n).collect(),
    };
    let added = witness.extra_edges(&g);
    Ok(ConstructionTrace {
        graph: g,
        gamma,
        dominating_pair: (0, 1),
        path_witness: witness,
        added_edges: added,
        surgery_log: log,
    })
}

/// The inner graph H of a construction: G minus its dominating pair, with
/// path vertex `k` relabeled `k − 2`.
pub fn inner_graph(trace: &ConstructionTrace) -> Result<Graph> {
    let n = trace.graph.order();
    let edges: Vec<(u32, u32)> = (0..n - 3)
        .map(|p| (p as u32, p as u32 + 1))
        .chain(trace.added_edges.iter().map(|&(u, v)| (u as u32 - 2, v as u32 - 2)))
        .collect();
    graph::sparse_from_pairs(n - 2, edges)
}

/// Largest order [`build_extremal_candidates`] accepts.
pub const CANDIDATE_MAX_ORDER: usize = 200;

/// K₂ ∇ K_{γ+3}^{n−2} for γ ∈ {1, 2} together with an embedding of Euler
/// genus γ.
///
/// Starts from the K₆ projective or K₇ torus certificate, takes the two faces
/// on the edge `01` and glues a plane K₂ ∇ P into each. Labels match
/// `join(K₂, kr_pendant(γ+3, n−2))`.
pub fn build_extremal_candidates(n: usize, gamma: usize) -> Result<(Graph, EmbeddingScheme)> {
    let host = match gamma {
        1 => EmbeddingScheme::k6_projective(),
        2 => EmbeddingScheme::k7_torus(),
        _ => return Err(Error::Domain(format!("gamma must be 1 or 2, got {gamma}"))),
    };
    let r = gamma + 3;
    if n < r + 2 {
        return Err(Error::Order(format!("n must be at least {}, got {n}", r + 2)));
    }
    if n > CANDIDATE_MAX_ORDER {
        return Err(Error::ScaleRefusal(format!(
            "candidate schemes are built up to n = {CANDIDATE_MAX_ORDER}, got {n}"
        )));
    }
    let k = n - r - 2;
    let (a, b) = (k / 2, k - k / 2);
    let thirds: Vec<usize> = trace_faces(&host)?
        .faces
        .iter()
        .filter(|f| f.len() == 3 && f.contains(&0) && f.contains(&1))
        .map(|f| f.iter().copied().find(|&v| v > 1).unwrap())
        .collect();
    let [va, vb] = thirds[..] else {
        return Err(Error::FaceShape("edge 01 does not lie on two 3-faces".into()));
    };
    let host_order = host.order();
    let mut scheme = host;
    for (v, len) in [(va, a), (vb, b)] {
        if len > 0 {
            let inner = planar_book_scheme(len + 3)?;
            scheme = splice_into_face(&scheme, [0, 1, v], &inner, [0, 1, 2])?;
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm[va] = 2;
    perm[vb] = 3;
    let rest = (2..host_order).filter(|&v| v != va && v != vb);
    for (slot, v) in (4..).zip(rest) {
        perm[v] = slot;
    }
    let scheme = scheme.relabel(&perm)?;
    let genus = trace_faces(&scheme)?.genus;
    if genus != gamma {
        return Err(Error::SpliceIntegrity {
            before: gamma,
            after: genus,
        });
    }
    Ok((scheme.graph().clone(), scheme))
}
