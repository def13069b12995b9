//! Named graph families.
//!
//! Labeling conventions: cliques and dominating vertices come first, path
//! vertices follow in path order. Constructions that carry a spanning path
//! return it alongside the graph.

use super::Graph;
use crate::error::{Error, Result};

/// Path P_n on `0..n` with edges `{i, i+1}`.
pub fn path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyOrder);
    }
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

/// Cycle C_n, `n >= 3`.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Order(format!("a cycle needs at least 3 vertices, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::from_edges(n, edges).expect("clique edges are valid")
}

/// K_{a,b} with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    complete_multipartite(&[a, b])
}

/// Complete multipartite graph with consecutive parts of the given sizes.
pub fn complete_multipartite(parts: &[usize]) -> Graph {
    let n: usize = parts.iter().sum();
    let mut part = Vec::with_capacity(n);
    for (i, &p) in parts.iter().enumerate() {
        part.extend(std::iter::repeat_n(i, p));
    }
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    let edges: Vec<_> = edges.filter(|&(u, v)| part[u] != part[v]).collect();
    Graph::from_edges(n, edges).expect("multipartite edges are valid")
}

/// Star K_{1,k} centered at 0.
pub fn star(k: usize) -> Graph {
    Graph::from_edges(k + 1, (1..=k).map(|i| (0, i))).expect("star edges are valid")
}

/// Disjoint union; vertices of `h` are shifted by `g.order()`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let s = g.order();
    let edges = g.edges().chain(h.edges().map(|(u, v)| (u + s, v + s)));
    Graph::from_edges(s + h.order(), edges).expect("union edges are valid")
}

/// Join G ∇ H: the disjoint union plus every edge between the two sides.
pub fn join(g: &Graph, h: &Graph) -> Graph {
    let (a, b) = (g.order(), h.order());
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(g.size() + h.size() + a * b);
    edges.extend(g.edges().map(|(u, v)| (u as u32, v as u32)));
    edges.extend(h.edges().map(|(u, v)| ((u + a) as u32, (v + a) as u32)));
    for u in 0..a {
        edges.extend((0..b).map(|v| (u as u32, (v + a) as u32)));
    }
    super::sparse_from_pairs(a + b, edges).expect("join edges are valid")
}

/// K₂ ∇ P_{n−2}: dominating pair `0, 1`, path `2, 3, …, n−1`.
pub fn book_path(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Order(format!("K2 join P_(n-2) needs n >= 3, got {n}")));
    }
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(3 * n);
    edges.push((0, 1));
    for v in 2..n as u32 {
        edges.push((0, v));
        edges.push((1, v));
        if v > 2 {
            edges.push((v - 1, v));
        }
    }
    super::sparse_from_pairs(n, edges)
}

/// K_r with pendant paths of lengths ⌊(n−r)/2⌋ at vertex 0 and ⌈(n−r)/2⌉
/// at vertex 1.
///
/// The clique is `0..r`; the short path occupies `r..r+a` with `r` adjacent
/// to 0, and the long path follows. The returned order runs along the whole
/// graph: short path reversed, 0, the clique interior `2..r`, 1, long path.
pub fn kr_pendant(r: usize, n: usize) -> Result<(Graph, Vec<usize>)> {
    if r < 3 {
        return Err(Error::Order(format!("clique order must be at least 3, got {r}")));
    }
    if n < r {
        return Err(Error::Order(format!("order {n} is smaller than the clique order {r}")));
    }
    let k = n - r;
    let (a, b) = (k / 2, k - k / 2);
    let g = attach_paths(&complete(r), 0, 1, a, b)?;
    let mut order: Vec<usize> = (r..r + a).rev().collect();
    order.push(0);
    order.extend(2..r);
    order.push(1);
    order.extend(r + a..n);
    Ok((g, order))
}

/// H₀(a, b): pendant paths of lengths `a` at `u` and `b` at `v`.
///
/// New vertices are appended: `|H₀|..|H₀|+a` for the path at `u`, in
/// order of distance from `u`, then the path at `v`.
pub fn attach_paths(h0: &Graph, u: usize, v: usize, a: usize, b: usize) -> Result<Graph> {
    let n0 = h0.order();
    for x in [u, v] {
        if x >= n0 {
            return Err(Error::VertexOutOfRange { vertex: x, n: n0 });
        }
    }
    if u == v {
        return Err(Error::DistinctVertices(u));
    }
    let mut edges: Vec<(usize, usize)> = h0.edges().collect();
    let mut prev = u;
    for i in 0..a {
        edges.push((prev, n0 + i));
        prev = n0 + i;
    }
    prev = v;
    for i in 0..b {
        edges.push((prev, n0 + a + i));
        prev = n0 + a + i;
    }
    Graph::from_edges(n0 + a + b, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_degrees(g: &Graph) -> Vec<usize> {
        g.degree_sequence().as_slice().to_vec()
    }

    #[test]
    fn path_basics() {
        assert_eq!(path(0), Err(Error::EmptyOrder));
        let p1 = path(1).unwrap();
        assert_eq!((p1.order(), p1.size()), (1, 0));
        let p4 = path(4).unwrap();
        assert_eq!(p4.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(sorted_degrees(&path(5).unwrap()), vec![2, 2, 2, 1, 1]);
    }

    #[test]
    fn join_small() {
        let k1 = Graph::empty(1);
        assert_eq!(join(&k1, &k1), complete(2));
        let j = join(&Graph::empty(2), &Graph::empty(3));
        assert_eq!(j, complete_bipartite(2, 3));
    }

    #[test]
    fn join_counts_edges() {
        let g = join(&complete(2), &path(8).unwrap());
        assert_eq!(g.size(), 3 * 10 - 6);
        assert_eq!(g, book_path(10).unwrap());
        let a = cycle(5).unwrap();
        let b = star(3);
        assert_eq!(join(&a, &b).size(), a.size() + b.size() + 5 * 4);
    }

    #[test]
    fn kr_pendant_degrees() {
        let (g, order) = kr_pendant(4, 6).unwrap();
        assert_eq!(sorted_degrees(&g), vec![4, 4, 3, 3, 1, 1]);
        assert_eq!(order, vec![4, 0, 2, 3, 1, 5]);
        for n in [9, 11, 20] {
            let (g4, _) = kr_pendant(4, n - 2).unwrap();
            let mut want = vec![4, 4, 3, 3];
            want.extend(std::iter::repeat_n(2, n - 2 - 6));
            want.extend([1, 1]);
            assert_eq!(sorted_degrees(&g4), want);
            let (g5, _) = kr_pendant(5, n - 2).unwrap();
            let mut want = vec![5, 5, 4, 4, 4];
            want.extend(std::iter::repeat_n(2, n - 2 - 7));
            want.extend([1, 1]);
            assert_eq!(sorted_degrees(&g5), want);
        }
        assert!(kr_pendant(5, 4).is_err());
    }

    #[test]
    fn kr_pendant_order_is_spanning_path() {
        for (r, n) in [(3, 3), (4, 9), (5, 12), (6, 6)] {
            let (g, order) = kr_pendant(r, n).unwrap();
            assert_eq!(g.size(), r * (r - 1) / 2 + n - r);
            let mut seen = order.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..n).collect::<Vec<_>>());
            for w in order.windows(2) {
                assert!(g.has_edge(w[0], w[1]));
            }
        }
    }

    #[test]
    fn attach_paths_cases() {
        let k3 = complete(3);
        assert_eq!(attach_paths(&k3, 0, 1, 0, 0).unwrap(), k3);
        assert_eq!(attach_paths(&k3, 1, 1, 2, 2), Err(Error::DistinctVertices(1)));
        let g = attach_paths(&complete(4), 0, 1, 3, 4).unwrap();
        assert_eq!(g.size(), 6 + 7);
        for k in 0..6 {
            let a = attach_paths(&complete(4), 0, 1, k / 2, k - k / 2).unwrap();
            assert_eq!(a, kr_pendant(4, 4 + k).unwrap().0);
        }
    }
}
