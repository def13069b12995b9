use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Degree multiset, stored in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    /// Sorts the given degrees. Odd sums are rejected.
    pub fn new(mut degrees: Vec<usize>) -> Result<Self> {
        if degrees.iter().sum::<usize>() % 2 == 1 {
            return Err(Error::NotGraphical("degree sum is odd".into()));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(DegreeSequence(degrees))
    }

    pub(crate) fn from_degrees(degrees: Vec<usize>) -> Self {
        Self::new(degrees).expect("a graph has an even degree sum")
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.0.iter().sum::<usize>() / 2
    }

    /// Erdős–Gallai test.
    pub fn is_graphical(&self) -> bool {
        let d = &self.0;
        let n = d.len();
        if d.first().is_some_and(|&x| x >= n) {
            return false;
        }
        let mut prefix = 0usize;
        for k in 1..=n {
            prefix += d[k - 1];
            let tail: usize = d[k..].iter().map(|&x| x.min(k)).sum();
            if prefix > k * (k - 1) + tail {
                return false;
            }
        }
        true
    }

    /// A realization by Havel–Hakimi. Vertex `i` receives the `i`-th degree.
    pub fn realize(&self) -> Result<Graph> {
        let n = self.0.len();
        let mut residual: Vec<(usize, usize)> = self.0.iter().copied().zip(0..n).collect();
        let mut edges = Vec::with_capacity(self.edge_count());
        loop {
            residual.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let (d, v) = residual[0];
            if d == 0 {
                break;
            }
            if d >= residual.len() {
                return Err(Error::NotGraphical(format!("{:?}", self.0)));
            }
            residual[0].0 = 0;
            for item in residual.iter_mut().skip(1).take(d) {
                if item.0 == 0 {
                    return Err(Error::NotGraphical(format!("{:?}", self.0)));
                }
                item.0 -= 1;
                edges.push((v, item.1));
            }
        }
        Graph::from_edges(n, edges)
    }
}
