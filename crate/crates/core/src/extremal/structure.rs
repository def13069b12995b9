//! Forks, contractible 2-vertices and the path-surgery moves on inner
//! graphs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, Graph, SpanningPathWitness};
use crate::spectral::spectral_radius;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// Degrees of the first and last path vertices.
    pub endpoint_degrees: (usize, usize),
    pub contractible_2vertices: Vec<usize>,
    pub separate_forks: Vec<usize>,
    pub fork_count: usize,
}

/// Reads the fork structure of `h` along the spanning path `path`.
///
/// A fork has degree at least 3. A vertex is internal when forks occur on
/// both sides of it along the path; an internal 2-vertex is contractible
/// when its path neighbors are not adjacent. A fork is separate when
/// neither path neighbor is a fork.
pub fn structure_report(h: &Graph, path: &[usize]) -> Result<StructureReport> {
    check_spanning_path(h, path)?;
    let n = path.len();
    let deg: Vec<usize> = path.iter().map(|&v| h.degree(v)).collect();
    let fork: Vec<bool> = deg.iter().map(|&d| d >= 3).collect();
    let first_fork = fork.iter().position(|&f| f);
    let last_fork = fork.iter().rposition(|&f| f);
    let mut contractible = Vec::new();
    if let (Some(lo), Some(hi)) = (first_fork, last_fork) {
        for k in lo + 1..hi {
            if deg[k] == 2 && !h.has_edge(path[k - 1], path[k + 1]) {
                contractible.push(path[k]);
            }
        }
    }
    let separate = (0..n)
        .filter(|&k| fork[k] && !(k > 0 && fork[k - 1]) && !(k + 1 < n && fork[k + 1]))
        .map(|k| path[k])
        .collect();
    Ok(StructureReport {
        endpoint_degrees: (deg[0], deg[n - 1]),
        contractible_2vertices: contractible,
        separate_forks: separate,
        fork_count: fork.iter().filter(|&&f| f).count(),
    })
}

fn check_spanning_path(h: &Graph, path: &[usize]) -> Result<()> {
    let n = h.order();
    if path.len() != n || n == 0 {
        return Err(Error::Witness(format!("path has {} vertices, graph has {n}", path.len())));
    }
    let mut seen = vec![false; n];
    for &v in path {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::Witness(format!("vertex {v} repeated or out of range")));
        }
    }
    if let Some(w) = path.windows(2).find(|w| !h.has_edge(w[0], w[1])) {
        return Err(Error::Witness(format!("path edge {}-{} missing", w[0], w[1])));
    }
    Ok(())
}

/// Result of [`contract_switch`].
#[derive(Clone, Debug)]
pub struct SwitchOutcome {
    pub graph: Graph,
    /// Path `u_1 … u_i u_j … u_{n−2} u_{i+1} … u_{j−1}`.
    pub witness: SpanningPathWitness,
    /// Predicted change of `w²` of the inner graph.
    pub w2_delta: i64,
    /// Predicted change of `w³`, available when `d(u_{n−2}) = 1`.
    pub w3_delta: Option<i64>,
}

/// Moves the run of 2-vertices `u_{i+1} … u_{j−1}` to the end of the path:
/// removes `u_i u_{i+1}` and `u_{j−1} u_j`, adds `u_i u_j` and
/// `u_{i+1} u_{n−2}`. Indices are 1-based positions on the path.
pub fn contract_switch(g: &Graph, witness: &SpanningPathWitness, i: usize, j: usize) -> Result<SwitchOutcome> {
    witness.verify(g)?;
    let p = &witness.path_order;
    let m = p.len(); // n − 2
    if i < 2 || j + 1 > m || j < i + 3 {
        return Err(Error::Switch(format!(
            "need 2 <= i, j <= n-3 and j - i >= 3 (got i = {i}, j = {j}, n - 2 = {m})"
        )));
    }
    let u = |k: usize| p[k - 1];
    let (a, b) = witness.dominating_pair;
    let inner_deg = |v: usize| g.degree(v) - usize::from(g.has_edge(v, a)) - usize::from(g.has_edge(v, b));
    if let Some(k) = (i + 1..j).find(|&k| inner_deg(u(k)) != 2) {
        return Err(Error::Switch(format!("u_{k} is not a 2-vertex of the inner graph")));
    }
    if g.has_edge(u(i), u(j)) {
        return Err(Error::Switch(format!("u_{i} u_{j} is already an edge")));
    }
    let (dn, dj1) = (inner_deg(u(m)) as i64, inner_deg(u(j - 1)) as i64);
    let w2_delta = 2 * dn - 2 * dj1 + 2;
    let w3_delta = (dn == 1).then(|| {
        let (di, dj, dn3) = (inner_deg(u(i)) as i64, inner_deg(u(j)) as i64, inner_deg(u(m - 1)) as i64);
        2 * (di - 2) * (dj - 2) + 2 * (dn3 - 2)
    });
    let out = g.edit(&[(u(i), u(j)), (u(i + 1), u(m))], &[(u(i), u(i + 1)), (u(j - 1), u(j))])?;
    let mut order: Vec<usize> = p[..i].to_vec();
    order.extend_from_slice(&p[j - 1..]);
    order.extend_from_slice(&p[i..j - 1]);
    let witness = SpanningPathWitness {
        dominating_pair: witness.dominating_pair,
        path_order: order,
    };
    witness.verify(&out)?;
    Ok(SwitchOutcome {
        graph: out,
        witness,
        w2_delta,
        w3_delta,
    })
}

/// Spectral radii before and after moving one vertex between the pendant
/// paths.
#[derive(Clone, Debug, Serialize)]
pub struct RebalanceOutcome {
    /// ρ(K₂ ∇ H₀(a, b)).
    pub rho_before: f64,
    /// ρ(K₂ ∇ H₀(a − 1, b + 1)).
    pub rho_after: f64,
    pub gap: f64,
    pub increased: bool,
}

/// Largest `H₀` accepted by [`rebalance_check`] (spanning path search).
pub const REBALANCE_MAX_CORE: usize = 20;

/// Compares K₂ ∇ H₀(a, b) against K₂ ∇ H₀(a − 1, b + 1), where pendant
/// paths of lengths `a` and `b` hang at `u` and `v`.
pub fn rebalance_check(h0: &Graph, u: usize, v: usize, a: usize, b: usize) -> Result<RebalanceOutcome> {
    if a < b + 2 {
        return Err(Error::Contract(format!("need a >= b + 2, got a = {a}, b = {b}")));
    }
    if u == v {
        return Err(Error::DistinctVertices(u));
    }
    let n0 = h0.order();
    if let Some(&x) = [u, v].iter().find(|&&x| x >= n0) {
        return Err(Error::VertexOutOfRange { vertex: x, n: n0 });
    }
    if n0 > REBALANCE_MAX_CORE {
        return Err(Error::ScaleRefusal(format!(
            "spanning path search supports |H0| <= {REBALANCE_MAX_CORE}, got {n0}"
        )));
    }
    if h0.min_degree() < 2 {
        return Err(Error::Contract(format!("minimum degree of H0 is {}, need 2", h0.min_degree())));
    }
    let end = (b > 0).then_some(v);
    if !hamiltonian_path(h0, u, end) {
        return Err(Error::Contract("H0(a, b) has no spanning path".into()));
    }
    let k2 = graph::complete(2);
    let before = graph::join(&k2, &graph::attach_paths(h0, u, v, a, b)?);
    let after = graph::join(&k2, &graph::attach_paths(h0, u, v, a - 1, b + 1)?);
    let rho_before = spectral_radius(&before, 1e-13)?.rho;
    let rho_after = spectral_radius(&after, 1e-13)?.rho;
    Ok(RebalanceOutcome {
        rho_before,
        rho_after,
        gap: rho_after - rho_before,
        increased: rho_after > rho_before,
    })
}

/// Hamiltonian path of `g` from `start`, ending at `end` when given.
fn hamiltonian_path(g: &Graph, start: usize, end: Option<usize>) -> bool {
    let n = g.order();
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u)).collect();
    let full = (1u32 << n) - 1;
    // reach[mask] = set of last vertices of paths from start covering mask
    let mut reach = vec![0u32; 1 << n];
    reach[1 << start] = 1 << start;
    for mask in 0..=full {
        let r = reach[mask as usize];
        if r == 0 {
            continue;
        }
        let mut last = r;
        while last != 0 {
            let x = last.trailing_zeros() as usize;
            last &= last - 1;
            let mut next = adj[x] & !mask;
            while next != 0 {
                let y = next.trailing_zeros() as usize;
                next &= next - 1;
                reach[(mask | 1 << y) as usize] |= 1 << y;
            }
        }
    }
    match end {
        Some(e) => reach[full as usize] >> e & 1 == 1,
        None => reach[full as usize] != 0,
    }
}
