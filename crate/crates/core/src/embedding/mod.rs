//! Signed rotation systems for embedded graphs.
//!
//! A scheme lists, for every vertex, its neighbors in cyclic order together
//! with a sign per edge; `-1` marks an edge whose two ends use opposite local
//! orientations. Faces come from the usual next-edge walk.

mod genus;
mod splice;
mod triangulation;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use genus::{genus_lower_bound, min_euler_genus, GenusLimits, GenusResult};
pub use splice::{planar_book_scheme, splice_into_face};
pub use triangulation::{verify_triangulation_facecounts, PrivateFaces, TriangulationReport};

const K7_TORUS: &str = include_str!("../../data/k7-torus.json");
const K6_PROJECTIVE: &str = include_str!("../../data/k6-projective.json");

/// A rotation system with edge signs on a simple connected graph.
///
/// Edge ends are named by the neighbor they point at, which is unambiguous
/// for simple graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingScheme {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
    signature: BTreeMap<(usize, usize), i8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceTrace {
    /// Boundary walks as vertex sequences; the walk closes back to its start.
    pub faces: Vec<Vec<usize>>,
    pub f: usize,
    /// Euler genus `2 − n + e − f`.
    pub genus: usize,
    pub orientable: bool,
}

#[derive(Serialize, Deserialize)]
struct SchemeJson {
    n: usize,
    rotation: Vec<Vec<usize>>,
    #[serde(default)]
    signature: BTreeMap<String, i8>,
}

impl EmbeddingScheme {
    /// Validates and builds a scheme. Edges missing from `signature` get `+1`.
    pub fn new(
        graph: Graph,
        rotation: Vec<Vec<usize>>,
        signature: BTreeMap<(usize, usize), i8>,
    ) -> Result<Self> {
        let n = graph.order();
        if rotation.len() != n {
            return Err(Error::InvalidScheme {
                vertex: rotation.len().min(n),
                message: format!("{} rotations for {n} vertices", rotation.len()),
            });
        }
        for (v, rot) in rotation.iter().enumerate() {
            let mut seen: Vec<usize> = rot.clone();
            seen.sort_unstable();
            let mut expected: Vec<usize> = graph.neighbors(v).collect();
            expected.sort_unstable();
            if seen != expected {
                return Err(Error::InvalidScheme {
                    vertex: v,
                    message: format!("rotation {rot:?} is not an ordering of the neighbors {expected:?}"),
                });
            }
        }
        let mut sig = BTreeMap::new();
        for (&(a, b), &s) in &signature {
            let key = (a.min(b), a.max(b));
            if !graph.has_edge(a, b) {
                return Err(Error::InvalidScheme {
                    vertex: key.0,
                    message: format!("signature names the non-edge {}-{}", key.0, key.1),
                });
            }
            if s != 1 && s != -1 {
                return Err(Error::InvalidScheme {
                    vertex: key.0,
                    message: format!("sign {s} on edge {}-{} is not +1 or -1", key.0, key.1),
                });
            }
            sig.insert(key, s);
        }
        for e in graph.edges() {
            sig.entry(e).or_insert(1);
        }
        if !graph.is_connected() {
            return Err(Error::Cellularity(
                "a cellular embedding needs a connected graph".into(),
            ));
        }
        Ok(EmbeddingScheme {
            graph,
            rotation,
            signature: sig,
        })
    }

    /// All signs `+1`.
    pub fn orientable(graph: Graph, rotation: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(graph, rotation, BTreeMap::new())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    /// Sign of edge `uv`, or `None` for a non-edge.
    pub fn sign(&self, u: usize, v: usize) -> Option<i8> {
        self.signature.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn signature(&self) -> &BTreeMap<(usize, usize), i8> {
        &self.signature
    }

    /// Local switch at `v`: reverse its rotation and flip every incident sign.
    pub fn switch_at(&self, v: usize) -> Result<EmbeddingScheme> {
        let n = self.order();
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        let mut out = self.clone();
        out.rotation[v].reverse();
        for u in self.graph.neighbors(v) {
            let key = (u.min(v), u.max(v));
            *out.signature.get_mut(&key).expect("edge has a sign") *= -1;
        }
        Ok(out)
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<EmbeddingScheme> {
        let graph = self.graph.relabel(perm)?;
        let mut rotation = vec![Vec::new(); self.order()];
        for (v, rot) in self.rotation.iter().enumerate() {
            rotation[perm[v]] = rot.iter().map(|&u| perm[u]).collect();
        }
        let signature = self
            .signature
            .iter()
            .map(|(&(a, b), &s)| ((perm[a].min(perm[b]), perm[a].max(perm[b])), s))
            .collect();
        EmbeddingScheme::new(graph, rotation, signature)
    }

    /// `{"n":…, "rotation":[[…],…], "signature":{"u-v":±1,…}}`.
    pub fn to_json(&self) -> String {
        let json = SchemeJson {
            n: self.order(),
            rotation: self.rotation.clone(),
            signature: self
                .signature
                .iter()
                .map(|(&(a, b), &s)| (format!("{a}-{b}"), s))
                .collect(),
        };
        serde_json::to_string(&json).expect("scheme serializes")
    }

    /// Parses the JSON form; the graph is read off the rotations, which must
    /// be symmetric.
    pub fn from_json(text: &str) -> Result<EmbeddingScheme> {
        let json: SchemeJson = serde_json::from_str(text)?;
        let n = json.n;
        if json.rotation.len() != n {
            return Err(Error::Json(format!(
                "rotation has {} entries for n = {n}",
                json.rotation.len()
            )));
        }
        let mut edges = Vec::new();
        for (v, rot) in json.rotation.iter().enumerate() {
            for &u in rot {
                if u >= n {
                    return Err(Error::VertexOutOfRange { vertex: u, n });
                }
                if !json.rotation[u].contains(&v) {
                    return Err(Error::InvalidScheme {
                        vertex: v,
                        message: format!("{u} is in the rotation of {v} but not the reverse"),
                    });
                }
                edges.push((v, u));
            }
        }
        let graph = Graph::from_edges(n, edges)?;
        let mut signature = BTreeMap::new();
        for (key, s) in json.signature {
            let parsed = key
                .split_once('-')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
            let Some((a, b)) = parsed else {
                return Err(Error::Json(format!("bad signature key {key:?}")));
            };
            signature.insert((a, b), s);
        }
        EmbeddingScheme::new(graph, json.rotation, signature)
    }

    /// K₇ on the torus, read off a drawing on the square with opposite sides
    /// identified. Vertex `i` is `v_{i+1}`.
    pub fn k7_torus() -> EmbeddingScheme {
        Self::from_json(K7_TORUS).expect("bundled certificate parses")
    }

    /// K₆ on the projective plane, read off a drawing on the disc with
    /// antipodal boundary points identified. Vertex `i` is `v_{i+1}`.
    pub fn k6_projective() -> EmbeddingScheme {
        Self::from_json(K6_PROJECTIVE).expect("bundled certificate parses")
    }

    pub(crate) fn darts(&self) -> Darts {
        let signs: Vec<Vec<i8>> = self
            .rotation
            .iter()
            .enumerate()
            .map(|(v, rot)| rot.iter().map(|&u| self.sign(v, u).unwrap()).collect())
            .collect();
        Darts::new(&self.rotation, &signs)
    }
}

/// Flat dart arrays: dart `offset[v] + i` leaves `v` toward `rotation[v][i]`.
pub(crate) struct Darts {
    pub offset: Vec<usize>,
    pub head: Vec<u32>,
    pub twin: Vec<u32>,
    pub sign: Vec<i8>,
}

impl Darts {
    pub fn new(rotation: &[Vec<usize>], signs: &[Vec<i8>]) -> Darts {
        let n = rotation.len();
        let mut offset = Vec::with_capacity(n + 1);
        offset.push(0);
        for rot in rotation {
            offset.push(offset.last().unwrap() + rot.len());
        }
        let total = offset[n];
        let mut head = vec![0u32; total];
        let mut sign = vec![1i8; total];
        let mut index = std::collections::HashMap::with_capacity(total);
        for v in 0..n {
            for (i, &u) in rotation[v].iter().enumerate() {
                head[offset[v] + i] = u as u32;
                sign[offset[v] + i] = signs[v][i];
                index.insert((v, u), offset[v] + i);
            }
        }
        let mut twin = vec![0u32; total];
        for v in 0..n {
            for (i, &u) in rotation[v].iter().enumerate() {
                twin[offset[v] + i] = index[&(u, v)] as u32;
            }
        }
        Darts {
            offset,
            head,
            twin,
            sign,
        }
    }

    /// Vertex a dart leaves from.
    fn tail(&self, d: usize) -> usize {
        self.head[self.twin[d] as usize] as usize
    }

    /// Rotation neighbor of dart `d` at its tail, in direction `s`.
    fn turn(&self, d: usize, s: i8) -> usize {
        let v = self.tail(d);
        let (lo, hi) = (self.offset[v], self.offset[v + 1]);
        if s > 0 {
            if d + 1 == hi {
                lo
            } else {
                d + 1
            }
        } else if d == lo {
            hi - 1
        } else {
            d - 1
        }
    }

    /// Face walks as sequences of `(dart, local orientation)`.
    pub fn faces(&self) -> Vec<Vec<(usize, i8)>> {
        let total = self.head.len();
        // used[2d] for orientation +1, used[2d+1] for -1
        let mut used = vec![false; 2 * total];
        let slot = |d: usize, s: i8| 2 * d + usize::from(s < 0);
        let mut faces = Vec::new();
        for start in 0..total {
            for s0 in [1i8, -1] {
                if used[slot(start, s0)] {
                    continue;
                }
                let mut walk = Vec::new();
                let (mut d, mut s) = (start, s0);
                loop {
                    walk.push((d, s));
                    let t = self.twin[d] as usize;
                    let s2 = s * self.sign[d];
                    used[slot(d, s)] = true;
                    used[slot(t, -s2)] = true;
                    d = self.turn(t, s2);
                    s = s2;
                    if (d, s) == (start, s0) {
                        break;
                    }
                }
                faces.push(walk);
            }
        }
        faces
    }
}

/// Traces the faces of `s` and reads off Euler genus and orientability.
pub fn trace_faces(s: &EmbeddingScheme) -> Result<FaceTrace> {
    let g = s.graph();
    if !g.is_connected() {
        return Err(Error::Cellularity(
            "a cellular embedding needs a connected graph".into(),
        ));
    }
    let (n, e) = (g.order(), g.size());
    let darts = s.darts();
    let mut faces: Vec<Vec<usize>> = darts
        .faces()
        .into_iter()
        .map(|walk| walk.into_iter().map(|(d, _)| darts.tail(d)).collect())
        .collect();
    if e == 0 {
        // the lone vertex sits in a single disc face
        faces.push(vec![0]);
    }
    let f = faces.len();
    let genus = (2 + e)
        .checked_sub(n + f)
        .expect("Euler characteristic never exceeds 2");
    Ok(FaceTrace {
        faces,
        f,
        genus,
        orientable: is_orientable(s),
    })
}

/// Propagates local orientations along a spanning tree; the scheme is
/// orientable iff every edge then agrees.
fn is_orientable(s: &EmbeddingScheme) -> bool {
    let g = s.graph();
    let n = g.order();
    let mut flip = vec![0i8; n];
    for root in 0..n {
        if flip[root] != 0 {
            continue;
        }
        flip[root] = 1;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for u in g.neighbors(v) {
                if flip[u] == 0 {
                    flip[u] = flip[v] * s.sign(v, u).unwrap();
                    stack.push(u);
                }
            }
        }
    }
    s.signature()
        .iter()
        .all(|(&(a, b), &sg)| sg * flip[a] * flip[b] == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    fn triangle() -> EmbeddingScheme {
        let g = graph::cycle(3).unwrap();
        EmbeddingScheme::orientable(g, vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn triangle_is_planar() {
        let t = trace_faces(&triangle()).unwrap();
        assert_eq!((t.f, t.genus, t.orientable), (2, 0, true));
    }

    #[test]
    fn certificates() {
        let k7 = trace_faces(&EmbeddingScheme::k7_torus()).unwrap();
        assert_eq!((k7.f, k7.genus, k7.orientable), (14, 2, true));
        let k6 = trace_faces(&EmbeddingScheme::k6_projective()).unwrap();
        assert_eq!((k6.f, k6.genus, k6.orientable), (10, 1, false));
        assert_eq!(*EmbeddingScheme::k7_torus().graph(), graph::complete(7));
        assert_eq!(*EmbeddingScheme::k6_projective().graph(), graph::complete(6));
    }

    #[test]
    fn face_lengths_sum_to_twice_edges() {
        for s in [EmbeddingScheme::k7_torus(), EmbeddingScheme::k6_projective()] {
            let t = trace_faces(&s).unwrap();
            let total: usize = t.faces.iter().map(Vec::len).sum();
            assert_eq!(total, 2 * s.graph().size());
        }
    }

    #[test]
    fn switching_keeps_faces() {
        let s = EmbeddingScheme::k6_projective();
        let base = trace_faces(&s).unwrap();
        for v in 0..6 {
            let t = trace_faces(&s.switch_at(v).unwrap()).unwrap();
            assert_eq!((t.f, t.genus, t.orientable), (base.f, base.genus, base.orientable));
        }
    }

    #[test]
    fn json_round_trip() {
        let s = EmbeddingScheme::k6_projective();
        assert_eq!(EmbeddingScheme::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn rejects_bad_schemes() {
        let g = graph::cycle(3).unwrap();
        let err = EmbeddingScheme::orientable(g.clone(), vec![vec![1], vec![2, 0], vec![0, 1]]);
        assert!(matches!(err, Err(Error::InvalidScheme { vertex: 0, .. })));
        let mut sig = BTreeMap::new();
        sig.insert((0, 1), 2);
        let err = EmbeddingScheme::new(g, vec![vec![1, 2], vec![2, 0], vec![0, 1]], sig);
        assert!(matches!(err, Err(Error::InvalidScheme { .. })));
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let err = EmbeddingScheme::orientable(two, vec![vec![1], vec![0], vec![3], vec![2]]);
        assert!(matches!(err, Err(Error::Cellularity(_))));
    }

    #[test]
    fn single_vertex_and_tree() {
        let s = EmbeddingScheme::orientable(Graph::empty(1), vec![vec![]]).unwrap();
        assert_eq!(trace_faces(&s).unwrap().genus, 0);
        let p = graph::path(4).unwrap();
        let s = EmbeddingScheme::orientable(p, vec![vec![1], vec![0, 2], vec![1, 3], vec![2]]).unwrap();
        let t = trace_faces(&s).unwrap();
        assert_eq!((t.f, t.genus), (1, 0));
    }
}
