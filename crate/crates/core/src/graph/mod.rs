//! Simple undirected graphs with two storage backends.
//!
//! Graphs on at most 64 vertices are stored as one adjacency bitset per
//! vertex; larger graphs use compressed sparse rows with sorted neighbor
//! lists. Both backends are immutable once built and answer every query
//! identically for the same edge set.

mod degree;
mod families;
pub mod graph6;
mod witness;

pub use degree::DegreeSequence;
pub use families::*;
pub use witness::SpanningPathWitness;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order handled by the bitset backend.
pub const DENSE_MAX: usize = 64;

/// Storage backend of a [`Graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Dense,
    Sparse,
}

/// Backend selection for graph construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BackendChoice {
    /// Bitsets for `n <= 64`, sparse rows otherwise.
    #[default]
    Auto,
    Dense,
    Sparse,
}

#[derive(Clone, Debug)]
enum Storage {
    Dense(Vec<u64>),
    Sparse { offsets: Vec<usize>, targets: Vec<u32> },
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    m: usize,
    storage: Storage,
}

/// Borrowed compressed-sparse-row view used by the numeric code.
#[derive(Clone, Copy, Debug)]
pub struct CsrView<'a> {
    pub offsets: &'a [usize],
    pub targets: &'a [u32],
}

impl<'a> CsrView<'a> {
    #[inline]
    pub fn row(&self, v: usize) -> &'a [u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn order(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// Owned sparse rows, produced when a dense graph is handed to numeric code.
#[derive(Clone, Debug)]
pub struct Csr {
    pub offsets: Vec<usize>,
    pub targets: Vec<u32>,
}

impl Csr {
    pub fn view(&self) -> CsrView<'_> {
        CsrView {
            offsets: &self.offsets,
            targets: &self.targets,
        }
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Graph {
        Self::empty_with(n, BackendChoice::Auto)
    }

    fn empty_with(n: usize, choice: BackendChoice) -> Graph {
        let storage = if use_dense(n, choice) {
            Storage::Dense(vec![0; n])
        } else {
            Storage::Sparse {
                offsets: vec![0; n + 1],
                targets: Vec::new(),
            }
        };
        Graph { n, m: 0, storage }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse into one;
    /// loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges_with(n, edges, BackendChoice::Auto)
    }

    pub fn from_edges_with<I>(n: usize, edges: I, choice: BackendChoice) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if choice == BackendChoice::Dense && n > DENSE_MAX {
            return Err(Error::Order(format!(
                "dense backend supports at most {DENSE_MAX} vertices, got {n}"
            )));
        }
        if use_dense(n, choice) {
            let mut rows = vec![0u64; n];
            for (u, v) in edges {
                check_edge(n, u, v)?;
                rows[u] |= 1 << v;
                rows[v] |= 1 << u;
            }
            let m = rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2;
            Ok(Graph {
                n,
                m,
                storage: Storage::Dense(rows),
            })
        } else {
            let mut list: Vec<(u32, u32)> = Vec::new();
            for (u, v) in edges {
                check_edge(n, u, v)?;
                list.push((u as u32, v as u32));
            }
            Ok(Self::sparse_from_pairs(n, list))
        }
    }

    /// Sparse construction from an unvalidated pair list. Pairs must be in
    /// range and loop-free; duplicates are removed.
    fn sparse_from_pairs(n: usize, list: Vec<(u32, u32)>) -> Graph {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &list {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n]];
        for (u, v) in list {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        drop(fill);
        let mut has_dup = false;
        for v in 0..n {
            let row = &mut targets[offsets[v]..offsets[v + 1]];
            row.sort_unstable();
            has_dup |= row.windows(2).any(|w| w[0] == w[1]);
        }
        if has_dup {
            let mut new_offsets = vec![0usize; n + 1];
            let mut write = 0usize;
            for v in 0..n {
                let (start, end) = (offsets[v], offsets[v + 1]);
                let mut last = u32::MAX;
                for i in start..end {
                    let t = targets[i];
                    if t != last {
                        targets[write] = t;
                        write += 1;
                        last = t;
                    }
                }
                new_offsets[v + 1] = write;
            }
            targets.truncate(write);
            targets.shrink_to_fit();
            offsets = new_offsets;
        }
        let m = targets.len() / 2;
        Graph {
            n,
            m,
            storage: Storage::Sparse { offsets, targets },
        }
    }

    /// Same edge set, stored in the requested backend.
    pub fn with_backend(&self, choice: BackendChoice) -> Result<Graph> {
        Self::from_edges_with(self.n, self.edges(), choice)
    }

    pub fn backend(&self) -> Backend {
        match self.storage {
            Storage::Dense(_) => Backend::Dense,
            Storage::Sparse { .. } => Backend::Sparse,
        }
    }

    /// Number of vertices.
    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges, e(G).
    #[inline]
    pub fn size(&self) -> usize {
        self.m
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || u == v {
            return false;
        }
        match &self.storage {
            Storage::Dense(rows) => rows[u] >> v & 1 == 1,
            Storage::Sparse { offsets, targets } => targets[offsets[u]..offsets[u + 1]]
                .binary_search(&(v as u32))
                .is_ok(),
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        match &self.storage {
            Storage::Dense(rows) => rows[v].count_ones() as usize,
            Storage::Sparse { offsets, .. } => offsets[v + 1] - offsets[v],
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> Neighbors<'_> {
        match &self.storage {
            Storage::Dense(rows) => Neighbors::Bits(rows[v]),
            Storage::Sparse { offsets, targets } => {
                Neighbors::Slice(targets[offsets[v]..offsets[v + 1]].iter())
            }
        }
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence::from_degrees(self.degrees())
    }

    /// Adjacency bitsets, available for graphs on at most 64 vertices.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.n > DENSE_MAX {
            return None;
        }
        match &self.storage {
            Storage::Dense(rows) => Some(rows.clone()),
            Storage::Sparse { .. } => {
                let mut rows = vec![0u64; self.n];
                for (u, v) in self.edges() {
                    rows[u] |= 1 << v;
                    rows[v] |= 1 << u;
                }
                Some(rows)
            }
        }
    }

    /// Sparse-row view of the adjacency structure; borrowed when the graph
    /// already uses the sparse backend.
    pub fn csr(&self) -> std::borrow::Cow<'_, Csr> {
        use std::borrow::Cow;
        match &self.storage {
            Storage::Sparse { offsets, targets } => Cow::Owned(Csr {
                offsets: offsets.clone(),
                targets: targets.clone(),
            }),
            Storage::Dense(_) => Cow::Owned(self.build_csr()),
        }
    }

    /// Runs `f` on a sparse-row view without copying sparse storage.
    pub fn with_csr<R>(&self, f: impl FnOnce(CsrView<'_>) -> R) -> R {
        match &self.storage {
            Storage::Sparse { offsets, targets } => f(CsrView { offsets, targets }),
            Storage::Dense(_) => {
                let csr = self.build_csr();
                f(csr.view())
            }
        }
    }

    fn build_csr(&self) -> Csr {
        let mut offsets = Vec::with_capacity(self.n + 1);
        let mut targets = Vec::with_capacity(2 * self.m);
        offsets.push(0);
        for v in 0..self.n {
            targets.extend(self.neighbors(v).map(|u| u as u32));
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Subgraph induced by `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            if index[v] != usize::MAX {
                return Err(Error::DistinctVertices(v));
            }
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for u in self.neighbors(v) {
                let j = index[u];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(vertices.len(), edges)
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Domain("permutation length differs from order".into()));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Domain("not a permutation".into()));
            }
        }
        Graph::from_edges_with(
            self.n,
            self.edges().map(|(u, v)| (perm[u], perm[v])),
            self.choice(),
        )
    }

    fn choice(&self) -> BackendChoice {
        if self.n <= DENSE_MAX {
            BackendChoice::Auto
        } else {
            BackendChoice::Sparse
        }
    }

    /// New graph with `add` inserted and `remove` deleted.
    pub fn edit(&self, add: &[(usize, usize)], remove: &[(usize, usize)]) -> Result<Graph> {
        for &(u, v) in remove {
            if !self.has_edge(u, v) {
                return Err(Error::Contract(format!("edge {u}-{v} is not present")));
            }
        }
        let key = |u: usize, v: usize| (u.min(v), u.max(v));
        let removed: std::collections::HashSet<(usize, usize)> =
            remove.iter().map(|&(u, v)| key(u, v)).collect();
        let kept = self.edges().filter(|e| !removed.contains(e));
        Graph::from_edges(self.n, kept.chain(add.iter().copied()))
    }

    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(self.n, edges).expect("complement edges are valid")
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            parent[s] = usize::MAX;
            queue.clear();
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        parent[u] = v;
                        queue.push_back(u);
                    } else if parent[v] != u {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if color[u] == u8::MAX {
                        color[u] = 1 - color[v];
                        stack.push(u);
                    } else if color[u] == color[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Adjacency-list JSON `{"n":…, "edges":[[u,v],…]}` with edges sorted.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let parsed: GraphJson = serde_json::from_str(text)?;
        parsed.try_into()
    }
}

fn use_dense(n: usize, choice: BackendChoice) -> bool {
    match choice {
        BackendChoice::Auto => n <= DENSE_MAX,
        BackendChoice::Dense => true,
        BackendChoice::Sparse => false,
    }
}

fn check_edge(n: usize, u: usize, v: usize) -> Result<()> {
    if u >= n {
        return Err(Error::VertexOutOfRange { vertex: u, n });
    }
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if u == v {
        return Err(Error::Loop(u));
    }
    Ok(())
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.edges().eq(other.edges())
    }
}

impl Eq for Graph {}

/// Iterator over the neighbors of one vertex.
pub enum Neighbors<'a> {
    Bits(u64),
    Slice(std::slice::Iter<'a, u32>),
}

impl Iterator for Neighbors<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        match self {
            Neighbors::Bits(bits) => {
                if *bits == 0 {
                    None
                } else {
                    let v = bits.trailing_zeros() as usize;
                    *bits &= *bits - 1;
                    Some(v)
                }
            }
            Neighbors::Slice(it) => it.next().map(|&v| v as usize),
        }
    }
}

/// Serialized adjacency-list form.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.order(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(value: GraphJson) -> Result<Graph> {
        Graph::from_edges(value.n, value.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

/// Builds a sparse graph directly from `u32` pairs, skipping per-edge
/// validation beyond a range check. Used by the large constructions.
pub(crate) fn sparse_from_pairs(n: usize, list: Vec<(u32, u32)>) -> Result<Graph> {
    for &(u, v) in &list {
        check_edge(n, u as usize, v as usize)?;
    }
    if n <= DENSE_MAX {
        return Graph::from_edges(n, list.into_iter().map(|(u, v)| (u as usize, v as usize)));
    }
    Ok(Graph::sparse_from_pairs(n, list))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_loops_and_range() {
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(Error::Loop(1)));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn duplicates_collapse() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.size(), 1);
        let s = Graph::from_edges_with(3, [(0, 1), (1, 0), (1, 2)], BackendChoice::Sparse).unwrap();
        assert_eq!(s.size(), 2);
        assert_eq!(s.neighbors(1).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn auto_backend_switches_at_64() {
        assert_eq!(Graph::empty(64).backend(), Backend::Dense);
        assert_eq!(Graph::empty(65).backend(), Backend::Sparse);
        assert!(Graph::from_edges_with(65, [], BackendChoice::Dense).is_err());
    }

    #[test]
    fn json_export_sorted() {
        let g = Graph::from_edges(4, [(2, 3), (1, 0), (0, 2)]).unwrap();
        assert_eq!(g.to_json(), r#"{"n":4,"edges":[[0,1],[0,2],[2,3]]}"#);
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn girth_and_bipartite() {
        assert_eq!(cycle(7).unwrap().girth(), Some(7));
        assert_eq!(path(5).unwrap().girth(), None);
        assert_eq!(complete(4).girth(), Some(3));
        assert!(complete_bipartite(3, 3).is_bipartite());
        assert!(!complete(3).is_bipartite());
    }

    fn arb_edges(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (1..=max_n).prop_flat_map(|n| {
            let pairs = proptest::collection::vec((0..n, 0..n), 0..3 * n);
            (Just(n), pairs)
        })
    }

    proptest! {
        #[test]
        fn backends_agree((n, raw) in arb_edges(64)) {
            let edges: Vec<_> = raw.into_iter().filter(|(u, v)| u != v).collect();
            let d = Graph::from_edges_with(n, edges.clone(), BackendChoice::Dense).unwrap();
            let s = Graph::from_edges_with(n, edges, BackendChoice::Sparse).unwrap();
            prop_assert_eq!(d.size(), s.size());
            prop_assert_eq!(&d, &s);
            for u in 0..n {
                prop_assert_eq!(d.degree(u), s.degree(u));
                prop_assert_eq!(d.neighbors(u).collect::<Vec<_>>(), s.neighbors(u).collect::<Vec<_>>());
                for v in 0..n {
                    prop_assert_eq!(d.has_edge(u, v), s.has_edge(u, v));
                }
            }
        }

        #[test]
        fn degrees_match_edge_count((n, raw) in arb_edges(40)) {
            let edges: Vec<_> = raw.into_iter().filter(|(u, v)| u != v).collect();
            let g = Graph::from_edges(n, edges).unwrap();
            prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.size());
            for v in 0..n {
                prop_assert_eq!(g.degree(v), g.edges().filter(|&(a, b)| a == v || b == v).count());
            }
        }
    }
}
