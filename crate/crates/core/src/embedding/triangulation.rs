//! Face counts of triangulations with a dominating pair.

use super::{trace_faces, EmbeddingScheme};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivateFaces {
    pub vertex: usize,
    /// Faces at `vertex` avoiding both dominating vertices.
    pub count: usize,
    /// `d_{H*}(vertex) − 2` for inner vertices of the path, else `None`.
    pub expected: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangulationReport {
    pub genus: usize,
    /// Faces containing neither dominating vertex.
    pub avoiding: usize,
    pub expected_avoiding: usize,
    /// The path `u_1 … u_{n−2}` read off the rotation at the first
    /// dominating vertex.
    pub path: Vec<usize>,
    pub private: Vec<PrivateFaces>,
    /// Vertices whose incident faces do not close up into one wheel.
    pub broken_wheels: Vec<usize>,
}

impl TriangulationReport {
    pub fn all_hold(&self) -> bool {
        self.avoiding == self.expected_avoiding
            && self.broken_wheels.is_empty()
            && self.private.iter().all(|p| p.expected.is_none_or(|e| e == p.count))
    }
}

/// Checks the face counts of a triangulation in which `a` and `b` are
/// adjacent to every other vertex.
pub fn verify_triangulation_facecounts(s: &EmbeddingScheme, a: usize, b: usize) -> Result<TriangulationReport> {
    let g = s.graph();
    let n = g.order();
    for x in [a, b] {
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
        if g.degree(x) + 1 != n {
            return Err(Error::Contract(format!("vertex {x} is not dominating")));
        }
    }
    if a == b {
        return Err(Error::DistinctVertices(a));
    }
    let trace = trace_faces(s)?;
    if let Some(bad) = trace.faces.iter().find(|f| f.len() != 3) {
        return Err(Error::FaceShape(format!("face {bad:?} is not a triangle")));
    }

    let avoiding_faces: Vec<&Vec<usize>> = trace
        .faces
        .iter()
        .filter(|f| !f.contains(&a) && !f.contains(&b))
        .collect();

    // rotation at a, started just after b
    let rot = s.rotation(a);
    let at = rot.iter().position(|&u| u == b).unwrap();
    let path: Vec<usize> = (1..rot.len()).map(|j| rot[(at + j) % rot.len()]).collect();
    let mut private = Vec::with_capacity(path.len());
    for (i, &u) in path.iter().enumerate() {
        let count = avoiding_faces.iter().filter(|f| f.contains(&u)).count();
        let inner = i > 0 && i + 1 < path.len();
        // degree in H* = G − {a, b}
        let expected = inner.then(|| g.degree(u).saturating_sub(4));
        private.push(PrivateFaces {
            vertex: u,
            count,
            expected,
        });
    }

    let broken_wheels = (0..n).filter(|&v| !is_wheel(&trace.faces, v, g.degree(v))).collect();

    Ok(TriangulationReport {
        genus: trace.genus,
        avoiding: avoiding_faces.len(),
        expected_avoiding: 2 * trace.genus,
        path,
        private,
        broken_wheels,
    })
}

/// The faces at `v` must number `d(v)` and their far edges must form one
/// cycle through all neighbors.
fn is_wheel(faces: &[Vec<usize>], v: usize, degree: usize) -> bool {
    let mut link: Vec<(usize, usize)> = Vec::new();
    for f in faces {
        for k in 0..3 {
            if f[k] == v {
                let (x, y) = (f[(k + 1) % 3], f[(k + 2) % 3]);
                if x == v || y == v {
                    return false;
                }
                link.push((x.min(y), x.max(y)));
            }
        }
    }
    if link.len() != degree || degree < 3 {
        return false;
    }
    let mut sorted = link.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != degree {
        return false;
    }
    // walk the link cycle
    let mut adj: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for &(x, y) in &link {
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    if adj.len() != degree || adj.values().any(|n| n.len() != 2) {
        return false;
    }
    let start = link[0].0;
    let (mut prev, mut cur, mut steps) = (start, adj[&start][0], 1);
    while cur != start {
        let nx = &adj[&cur];
        let next = if nx[0] == prev { nx[1] } else { nx[0] };
        prev = cur;
        cur = next;
        steps += 1;
    }
    steps == degree
}
