//! Gluing a plane graph into a triangular face.

use std::collections::BTreeMap;

use super::{trace_faces, EmbeddingScheme};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};

/// Plane scheme for K₂ ∇ P_{n−2} on the labels of [`graph::book_path`].
///
/// The path runs left to right with `0` above and `1` below; the edge `01`
/// goes around the right end. Both `(0, 1, 2)` and `(0, 1, n−1)` bound
/// faces.
pub fn planar_book_scheme(n: usize) -> Result<EmbeddingScheme> {
    let g = graph::book_path(n)?;
    let mut rotation = vec![Vec::new(); n];
    rotation[0] = (2..n).chain([1]).collect();
    rotation[1] = [0].into_iter().chain((2..n).rev()).collect();
    for v in 2..n {
        let r = &mut rotation[v];
        if v + 1 < n {
            r.push(v + 1);
        }
        r.push(0);
        if v > 2 {
            r.push(v - 1);
        }
        r.push(1);
    }
    EmbeddingScheme::orientable(g, rotation)
}

/// Embeds `inner` into the triangular face `face` of `host`, identifying
/// `outer[k]` with `face[k]`.
///
/// Host vertices keep their labels; the remaining inner vertices follow in
/// increasing inner label. The host may come back switched at some face
/// corners, which is the same embedding.
pub fn splice_into_face(
    host: &EmbeddingScheme,
    face: [usize; 3],
    inner: &EmbeddingScheme,
    outer: [usize; 3],
) -> Result<EmbeddingScheme> {
    let before = trace_faces(host)?;
    let inner_trace = trace_faces(inner)?;
    if inner_trace.genus != 0 {
        return Err(Error::FaceShape(format!(
            "inner scheme has Euler genus {}, expected a plane scheme",
            inner_trace.genus
        )));
    }

    // host: switch so the face is traced x→y→z with all orientations +1
    let (host, order) = oriented_triangle(host, face)
        .ok_or_else(|| Error::FaceShape(format!("{face:?} does not bound a 3-face of the host")))?;
    // inner: make all signs +1, then mirror so the outer face runs the other way
    let inner = make_orientable(inner);
    let (switched, mut inner_order) = oriented_triangle(&inner, outer).ok_or_else(|| {
        Error::FaceShape(format!("{outer:?} does not bound a 3-face of the inner scheme"))
    })?;
    // a walk found with orientation −1 runs against the rotations
    if switched != inner {
        inner_order.reverse();
    }
    let pos = |v: usize| outer.iter().position(|&o| o == v).unwrap();
    // inner_order lists outer vertices in trace order; compare with the host trace
    let same_way = (0..3).any(|k| {
        (0..3).all(|j| pos(inner_order[(k + j) % 3]) == face.iter().position(|&x| x == order[j]).unwrap())
    });
    let mut inner_rot: Vec<Vec<usize>> = inner.rotations().to_vec();
    if same_way {
        inner_rot.iter_mut().for_each(|r| r.reverse());
    }

    let nh = host.order();
    let ni = inner.order();
    let mut map = vec![usize::MAX; ni];
    for k in 0..3 {
        map[outer[k]] = face[k];
    }
    let mut next = nh;
    for m in map.iter_mut().filter(|m| **m == usize::MAX) {
        *m = next;
        next += 1;
    }
    let total = next;

    let mut rotation: Vec<Vec<usize>> = host.rotations().to_vec();
    rotation.resize(total, Vec::new());
    for c in 0..3 {
        // host corner at order[c]: previous order[c-1], next order[c+1]
        let x = order[c];
        let p = order[(c + 2) % 3];
        let q = order[(c + 1) % 3];
        let xi = outer[face.iter().position(|&f| f == x).unwrap()];
        let pi = outer[face.iter().position(|&f| f == p).unwrap()];
        let qi = outer[face.iter().position(|&f| f == q).unwrap()];
        let r = &inner_rot[xi];
        let start = r.iter().position(|&u| u == pi).unwrap();
        let seq: Vec<usize> = (1..r.len()).map(|j| r[(start + j) % r.len()]).collect();
        if seq.last() != Some(&qi) {
            return Err(Error::FaceShape("outer triangle is not a face corner".into()));
        }
        let insert: Vec<usize> = seq[..seq.len() - 1].iter().map(|&u| map[u]).collect();
        let hr = &mut rotation[x];
        let at = hr.iter().position(|&u| u == p).unwrap() + 1;
        hr.splice(at..at, insert);
    }
    for v in 0..ni {
        if outer.contains(&v) {
            continue;
        }
        rotation[map[v]] = inner_rot[v].iter().map(|&u| map[u]).collect();
    }

    let mut edges: Vec<(usize, usize)> = host.graph().edges().collect();
    edges.extend(
        inner
            .graph()
            .edges()
            .filter(|&(a, b)| !(outer.contains(&a) && outer.contains(&b)))
            .map(|(a, b)| (map[a], map[b])),
    );
    let graph = Graph::from_edges(total, edges)?;
    let signature: BTreeMap<(usize, usize), i8> = host.signature().clone();
    let merged = EmbeddingScheme::new(graph, rotation, signature)?;

    let after = trace_faces(&merged)?;
    if after.genus != before.genus {
        return Err(Error::SpliceIntegrity {
            before: before.genus,
            after: after.genus,
        });
    }
    Ok(merged)
}

/// Finds the 3-face on `tri` and switches the scheme so the face is traced
/// with orientation +1 everywhere; returns the vertices in trace order.
fn oriented_triangle(s: &EmbeddingScheme, tri: [usize; 3]) -> Option<(EmbeddingScheme, [usize; 3])> {
    let mut want = tri;
    want.sort_unstable();
    if want[0] == want[1] || want[1] == want[2] {
        return None;
    }
    let darts = s.darts();
    for walk in darts.faces() {
        if walk.len() != 3 {
            continue;
        }
        let mut vs: Vec<usize> = walk.iter().map(|&(d, _)| darts.tail(d)).collect();
        let order = [vs[0], vs[1], vs[2]];
        vs.sort_unstable();
        if vs != want {
            continue;
        }
        let mut out = s.clone();
        for &(d, o) in &walk {
            if o < 0 {
                out = out.switch_at(darts.tail(d)).ok()?;
            }
        }
        return Some((out, order));
    }
    None
}

/// Switches along a spanning tree so every sign is +1; only valid for an
/// orientable scheme.
fn make_orientable(s: &EmbeddingScheme) -> EmbeddingScheme {
    let g = s.graph();
    let mut flip = vec![0i8; g.order()];
    let mut out = s.clone();
    if g.order() == 0 {
        return out;
    }
    flip[0] = 1;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for u in g.neighbors(v) {
            if flip[u] == 0 {
                flip[u] = flip[v] * s.sign(v, u).unwrap();
                stack.push(u);
            }
        }
    }
    for (v, &f) in flip.iter().enumerate() {
        if f < 0 {
            out = out.switch_at(v).expect("vertex in range");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::trace_faces;

    fn tetrahedron() -> EmbeddingScheme {
        let g = graph::complete(4);
        // 3 in the middle of triangle 0,1,2
        EmbeddingScheme::orientable(
            g,
            vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn book_schemes_are_planar() {
        for n in 3..12 {
            let s = planar_book_scheme(n).unwrap();
            let t = trace_faces(&s).unwrap();
            assert_eq!(t.genus, 0, "n = {n}");
            assert!(t.faces.iter().all(|f| f.len() == 3));
        }
    }

    #[test]
    fn triangle_into_tetrahedron() {
        let host = tetrahedron();
        assert_eq!(trace_faces(&host).unwrap().genus, 0);
        let tri = EmbeddingScheme::orientable(
            graph::cycle(3).unwrap(),
            vec![vec![1, 2], vec![2, 0], vec![0, 1]],
        )
        .unwrap();
        let out = splice_into_face(&host, [0, 1, 3], &tri, [0, 1, 2]).unwrap();
        assert_eq!(out.graph().size(), 6);
        assert_eq!(trace_faces(&out).unwrap().genus, 0);
    }

    #[test]
    fn counts_after_splice() {
        let host = EmbeddingScheme::k6_projective();
        let t = trace_faces(&host).unwrap();
        let face = t.faces.iter().find(|f| f.len() == 3).unwrap();
        let inner = planar_book_scheme(8).unwrap();
        let out = splice_into_face(&host, [face[0], face[1], face[2]], &inner, [0, 1, 2]).unwrap();
        assert_eq!(out.order(), 6 + 8 - 3);
        assert_eq!(out.graph().size(), 15 + inner.graph().size() - 3);
        let after = trace_faces(&out).unwrap();
        assert_eq!((after.genus, after.orientable), (1, false));
        assert_eq!(after.f, 10 + trace_faces(&inner).unwrap().f - 2);
    }

    #[test]
    fn rejects_non_faces() {
        let host = tetrahedron();
        let inner = planar_book_scheme(5).unwrap();
        assert!(splice_into_face(&host, [0, 1, 2], &inner, [0, 1, 2]).is_ok());
        let book = planar_book_scheme(6).unwrap();
        let err = splice_into_face(&book, [0, 2, 4], &inner, [0, 1, 2]);
        assert!(matches!(err, Err(Error::FaceShape(_))));
    }
}
