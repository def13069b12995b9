//! Canonical labeling by individualization and refinement.

use crate::error::{Error, Result};
use crate::graph::{graph6, Graph, DENSE_MAX};

/// Canonical relabeling of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// `labeling[v]` is the canonical position of vertex `v`.
    pub labeling: Vec<usize>,
    /// Adjacency rows of the relabeled graph.
    pub rows: Vec<u64>,
}

impl CanonicalForm {
    pub fn graph(&self) -> Graph {
        let n = self.rows.len();
        let edges = (0..n).flat_map(|u| {
            let r = self.rows[u];
            (u + 1..n).filter(move |&v| r >> v & 1 == 1).map(move |v| (u, v))
        });
        Graph::from_edges(n, edges).expect("canonical rows form a simple graph")
    }

    pub fn graph6(&self) -> String {
        graph6::encode(&self.graph())
    }
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    let rows = g
        .adjacency_masks()
        .ok_or_else(|| Error::ScaleRefusal(format!("canonical form needs n <= {DENSE_MAX}, got {}", g.order())))?;
    Ok(canonical_rows(&rows))
}

/// graph6 string of the canonical form.
pub fn canonical_graph6(g: &Graph) -> Result<String> {
    Ok(canonical_form(g)?.graph6())
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    if g.order() != h.order() || g.size() != h.size() {
        return Ok(false);
    }
    let (mut dg, mut dh) = (g.degrees(), h.degrees());
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return Ok(false);
    }
    Ok(canonical_form(g)?.rows == canonical_form(h)?.rows)
}

/// Canonical form of a graph given by adjacency bitsets (`n <= 64`).
pub(crate) fn canonical_rows(adj: &[u64]) -> CanonicalForm {
    let n = adj.len();
    if n == 0 {
        return CanonicalForm {
            labeling: Vec::new(),
            rows: Vec::new(),
        };
    }
    let mut search = Search {
        adj,
        n,
        best: None,
        first: None,
        autos: Vec::new(),
    };
    let mut root = vec![(0..n).collect::<Vec<_>>()];
    refine(adj, &mut root);
    search.descend(&root, &mut Vec::new());
    let (rows, labeling) = search.best.unwrap();
    CanonicalForm { labeling, rows }
}

type Partition = Vec<Vec<usize>>;

/// Splits cells by neighbor counts into each splitter until the partition
/// is equitable. Cells are split in increasing count order, in place.
fn refine(adj: &[u64], cells: &mut Partition) {
    let mut changed = true;
    while changed {
        changed = false;
        let mut s = 0;
        while s < cells.len() {
            let mut mask = 0u64;
            for &v in &cells[s] {
                mask |= 1 << v;
            }
            let mut out: Partition = Vec::with_capacity(cells.len() + 1);
            let mut split_any = false;
            for cell in cells.iter() {
                if cell.len() == 1 {
                    out.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(u32, usize)> = cell.iter().map(|&v| ((adj[v] & mask).count_ones(), v)).collect();
                keyed.sort_by_key(|&(k, _)| k);
                if keyed[0].0 == keyed[keyed.len() - 1].0 {
                    out.push(cell.clone());
                    continue;
                }
                split_any = true;
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        let mut part: Vec<usize> = keyed[start..i].iter().map(|&(_, v)| v).collect();
                        part.sort_unstable();
                        out.push(part);
                        start = i;
                    }
                }
            }
            if split_any {
                *cells = out;
                changed = true;
            }
            s += 1;
        }
    }
}

struct Search<'a> {
    adj: &'a [u64],
    n: usize,
    best: Option<(Vec<u64>, Vec<usize>)>,
    first: Option<(Vec<u64>, Vec<usize>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

const MAX_AUTOS: usize = 128;

impl Search<'_> {
    fn certificate(&self, cells: &Partition) -> (Vec<u64>, Vec<usize>) {
        let mut pos = vec![0usize; self.n];
        for (i, c) in cells.iter().enumerate() {
            pos[c[0]] = i;
        }
        let mut rows = vec![0u64; self.n];
        for v in 0..self.n {
            let mut r = self.adj[v];
            let mut out = 0u64;
            while r != 0 {
                let u = r.trailing_zeros() as usize;
                r &= r - 1;
                out |= 1 << pos[u];
            }
            rows[pos[v]] = out;
        }
        (rows, pos)
    }

    /// Returns `Some(depth)` to unwind to `depth` after an automorphism
    /// maps the current subtree onto the first one.
    fn descend(&mut self, cells: &Partition, prefix: &mut Vec<usize>) -> Option<usize> {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            return self.leaf(cells, prefix);
        };
        let candidates = cells[target].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &candidates {
            if !explored.is_empty() && self.same_orbit(prefix, v, &explored) {
                continue;
            }
            explored.push(v);
            let mut child = cells.clone();
            let rest: Vec<usize> = child[target].iter().copied().filter(|&u| u != v).collect();
            child[target] = vec![v];
            child.insert(target + 1, rest);
            refine(self.adj, &mut child);
            prefix.push(v);
            let jump = self.descend(&child, prefix);
            prefix.pop();
            if let Some(d) = jump {
                if d < prefix.len() {
                    return Some(d);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &Partition, prefix: &[usize]) -> Option<usize> {
        let (rows, pos) = self.certificate(cells);
        let Some((first_rows, first_pos, first_prefix)) = self.first.clone() else {
            self.first = Some((rows.clone(), pos.clone(), prefix.to_vec()));
            self.best = Some((rows, pos));
            return None;
        };
        let mut jump = None;
        if rows == first_rows {
            let sigma = self.map_between(&first_pos, &pos);
            // the subtree where this path leaves the first one is an image
            // of the first subtree when sigma carries one prefix onto the other
            let d = prefix.iter().zip(&first_prefix).take_while(|(a, b)| a == b).count();
            if d < prefix.len() && d < first_prefix.len() && (0..=d).all(|k| sigma[first_prefix[k]] == prefix[k]) {
                jump = Some(d);
            }
            self.store(sigma);
        } else {
            let (best_rows, best_pos) = self.best.clone().unwrap();
            if rows > best_rows {
                self.best = Some((rows, pos));
            } else if rows == best_rows {
                let sigma = self.map_between(&best_pos, &pos);
                self.store(sigma);
            }
        }
        jump
    }

    /// Vertex map sending the leaf `from` onto the leaf `to`.
    fn map_between(&self, from: &[usize], to: &[usize]) -> Vec<usize> {
        let mut inv = vec![0usize; self.n];
        for (v, &p) in to.iter().enumerate() {
            inv[p] = v;
        }
        from.iter().map(|&p| inv[p]).collect()
    }

    fn store(&mut self, sigma: Vec<usize>) {
        if self.autos.len() < MAX_AUTOS {
            self.autos.push(sigma);
        }
    }

    /// True when some stored automorphism fixing `prefix` pointwise moves
    /// `v` into the orbit of an explored sibling.
    fn same_orbit(&self, prefix: &[usize], v: usize, explored: &[usize]) -> bool {
        let gens: Vec<&Vec<usize>> = self
            .autos
            .iter()
            .filter(|s| prefix.iter().all(|&p| s[p] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for s in gens {
            for x in 0..self.n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, s[x]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&w| find(&mut parent, w) == rv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn shuffled(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
        let mut perm: Vec<usize> = (0..g.order()).collect();
        perm.shuffle(rng);
        g.relabel(&perm).unwrap()
    }

    #[test]
    fn invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..12);
            let p = rng.gen_range(0.1..0.9);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(p))
                .collect();
            let g = Graph::from_edges(n, edges).unwrap();
            let h = shuffled(&g, &mut rng);
            assert_eq!(canonical_form(&g).unwrap().rows, canonical_form(&h).unwrap().rows);
            assert!(are_isomorphic(&g, &h).unwrap());
        }
    }

    #[test]
    fn labeling_maps_onto_canonical_graph() {
        let g = graph::book_path(9).unwrap();
        let c = canonical_form(&g).unwrap();
        let relabeled = g.relabel(&c.labeling).unwrap();
        assert_eq!(relabeled.adjacency_masks().unwrap(), c.rows);
    }

    #[test]
    fn symmetric_graphs_finish() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for g in [
            graph::complete(30),
            Graph::empty(40),
            graph::complete_bipartite(12, 12),
            graph::cycle(30).unwrap(),
        ] {
            let h = shuffled(&g, &mut rng);
            assert!(are_isomorphic(&g, &h).unwrap());
        }
    }

    #[test]
    fn separates_non_isomorphic() {
        // same degree sequence: C6 against two triangles
        let c6 = graph::cycle(6).unwrap();
        let tt = graph::disjoint_union(&graph::complete(3), &graph::complete(3));
        assert!(!are_isomorphic(&c6, &tt).unwrap());
        // 3-regular on 8 vertices: cube against the Wagner graph
        let cube = Graph::from_edges(8, (0..8).flat_map(|v| [0, 1, 2].map(|b| (v, v ^ (1 << b)))).filter(|&(a, b)| a < b)).unwrap();
        let wagner = Graph::from_edges(8, (0..8).flat_map(|v| [(v, (v + 1) % 8), (v, (v + 4) % 8)]).filter(|&(a, b)| a < b)).unwrap();
        assert!(!are_isomorphic(&cube, &wagner).unwrap());
    }
}
