//! Helpers shared by the integration tests.
#![allow(dead_code)]

pub mod w3_oracle;

use rand::Rng;
use surfex::graph::{self, Graph};

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Path `0 … m−1` plus `k` random chords, keeping every degree at most
/// `max_deg`.
pub fn path_with_chords(rng: &mut impl Rng, m: usize, k: usize, max_deg: usize) -> Graph {
    loop {
        let mut deg: Vec<usize> = (0..m).map(|v| if v == 0 || v + 1 == m { 1 } else { 2 }).collect();
        let mut chords: Vec<(usize, usize)> = Vec::new();
        let mut tries = 0;
        while chords.len() < k && tries < 1000 {
            tries += 1;
            let a = rng.gen_range(0..m);
            let b = rng.gen_range(0..m);
            let (a, b) = (a.min(b), a.max(b));
            if b < a + 2 || chords.contains(&(a, b)) || deg[a] >= max_deg || deg[b] >= max_deg {
                continue;
            }
            deg[a] += 1;
            deg[b] += 1;
            chords.push((a, b));
        }
        if chords.len() == k {
            return graph::path(m).unwrap().edit(&chords, &[]).unwrap();
        }
    }
}

/// Largest adjacency eigenvalue by dense symmetric eigendecomposition.
pub fn dense_rho(g: &Graph) -> f64 {
    dense_eigen(g).0
}

/// Largest eigenvalue and its eigenvector scaled to max entry 1.
pub fn dense_eigen(g: &Graph) -> (f64, Vec<f64>) {
    let n = g.order();
    let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    let eig = a.symmetric_eigen();
    let i = eig.eigenvalues.imax();
    let col = eig.eigenvectors.column(i);
    let sign = if col.sum() < 0.0 { -1.0 } else { 1.0 };
    let max = col.iter().map(|x| x * sign).fold(f64::MIN, f64::max);
    (eig.eigenvalues[i], col.iter().map(|x| x * sign / max).collect())
}

/// Number of ℓ-walks, by listing them one by one.
pub fn brute_walks(g: &Graph, l: usize) -> u64 {
    fn go(g: &Graph, v: usize, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        g.neighbors(v).map(|u| go(g, u, left - 1)).sum()
    }
    (0..g.order()).map(|v| go(g, v, l)).sum()
}

pub fn k2_join(h: &Graph) -> Graph {
    graph::join(&graph::complete(2), h)
}
