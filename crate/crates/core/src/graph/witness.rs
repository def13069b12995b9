use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Certificate that a graph contains K₂ ∇ P_{n−2} as a spanning subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningPathWitness {
    pub dominating_pair: (usize, usize),
    pub path_order: Vec<usize>,
}

impl SpanningPathWitness {
    /// Checks that `dominating_pair` dominates `g` and that `path_order`
    /// is a Hamiltonian path of the remaining vertices.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let n = g.order();
        let (a, b) = self.dominating_pair;
        if a >= n || b >= n {
            return Err(Error::Witness("dominating vertex out of range".into()));
        }
        if a == b {
            return Err(Error::Witness("dominating vertices coincide".into()));
        }
        if self.path_order.len() + 2 != n {
            return Err(Error::Witness(format!(
                "path has {} vertices, expected {}",
                self.path_order.len(),
                n - 2
            )));
        }
        let mut seen = vec![false; n];
        seen[a] = true;
        seen[b] = true;
        for &v in &self.path_order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Witness(format!("vertex {v} repeated or out of range")));
            }
        }
        if g.degree(a) != n - 1 || g.degree(b) != n - 1 {
            return Err(Error::Witness("pair does not dominate".into()));
        }
        for w in self.path_order.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::Witness(format!("path edge {}-{} missing", w[0], w[1])));
            }
        }
        Ok(())
    }

    /// Edges of `g` outside the certified K₂ ∇ P_{n−2}.
    pub fn extra_edges(&self, g: &Graph) -> Vec<(usize, usize)> {
        let n = g.order();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in self.path_order.iter().enumerate() {
            pos[v] = i;
        }
        let (a, b) = self.dominating_pair;
        g.edges()
            .filter(|&(u, v)| {
                if u == a || u == b || v == a || v == b {
                    return false;
                }
                pos[u].abs_diff(pos[v]) != 1
            })
            .collect()
    }
}
