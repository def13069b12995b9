//! Exhaustive spectral extremal search over planar graphs of small order.

use std::collections::BTreeMap;

use super::canon::canonical_rows;
use super::planar::is_planar;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::spectral_radius;

/// Largest order accepted by [`spex_bruteforce`].
pub const SPEX_MAX_ORDER: usize = 7;

#[derive(Clone, Debug)]
pub struct RankedGraph {
    /// Canonical representative.
    pub graph: Graph,
    pub rho: f64,
}

/// Every planar graph on `n` vertices up to isomorphism, ranked by
/// spectral radius (largest first, ties by canonical form).
///
/// Planar graphs are closed under vertex deletion, so each one arises from
/// a planar graph on `n − 1` vertices by adding a vertex with some
/// neighborhood. The search extends canonical representatives level by
/// level and keeps the planar results.
pub fn spex_bruteforce(n: usize) -> Result<Vec<RankedGraph>> {
    if n > SPEX_MAX_ORDER {
        return Err(Error::ScaleRefusal(format!(
            "planar brute force supports n <= {SPEX_MAX_ORDER}, got {n}"
        )));
    }
    if n == 0 {
        return Err(Error::EmptyOrder);
    }
    let mut level: Vec<Vec<u64>> = vec![vec![0]];
    for k in 1..n {
        let mut next: BTreeMap<Vec<u64>, ()> = BTreeMap::new();
        for rows in &level {
            for nb in 0u64..1 << k {
                let mut ext = rows.clone();
                for (v, r) in ext.iter_mut().enumerate() {
                    if nb >> v & 1 == 1 {
                        *r |= 1 << k;
                    }
                }
                ext.push(nb);
                let key = canonical_rows(&ext).rows;
                if next.contains_key(&key) {
                    continue;
                }
                if is_planar(&rows_to_graph(&key)) {
                    next.insert(key, ());
                }
            }
        }
        level = next.into_keys().collect();
    }
    let mut out = Vec::with_capacity(level.len());
    for rows in level {
        let graph = rows_to_graph(&rows);
        let rho = spectral_radius(&graph, 1e-12)?.rho;
        out.push((rows, RankedGraph { graph, rho }));
    }
    out.sort_by(|a, b| b.1.rho.total_cmp(&a.1.rho).then_with(|| b.0.cmp(&a.0)));
    Ok(out.into_iter().map(|(_, r)| r).collect())
}

fn rows_to_graph(rows: &[u64]) -> Graph {
    let n = rows.len();
    let edges = (0..n).flat_map(|u| (u + 1..n).filter(move |&v| rows[u] >> v & 1 == 1).map(move |v| (u, v)));
    Graph::from_edges(n, edges).expect("rows describe a simple graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::are_isomorphic;
    use crate::graph;

    #[test]
    fn n4_is_k4() {
        let r = spex_bruteforce(4).unwrap();
        assert_eq!(r.len(), 11);
        assert!(are_isomorphic(&r[0].graph, &graph::complete(4)).unwrap());
        assert!((r[0].rho - 3.0).abs() < 1e-12);
    }

    #[test]
    fn known_counts() {
        // planar graphs on 1..=5 vertices; every graph on 5 vertices but K5
        let counts: Vec<usize> = (1..=5).map(|n| spex_bruteforce(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 33]);
    }

    #[test]
    fn refuses_large_orders() {
        assert!(matches!(spex_bruteforce(8), Err(Error::ScaleRefusal(_))));
    }
}
