//! Largest 3-walk count over the realizations of a degree sequence.
//!
//! With the degrees fixed, `w^(3) = 2 Σ_{uv∈E} d(u) d(v)` only moves under
//! double-edge swaps, so the search is a hill climb over swaps restarted from
//! randomized realizations. Tiny sequences are also searched exhaustively.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, Graph};

#[derive(Clone, Debug)]
pub struct W3Budget {
    pub restarts: usize,
    pub seed: u64,
    /// Restarts are not started after this much time has passed.
    pub time_limit: Duration,
    /// Node limit for the exhaustive search.
    pub exhaustive_nodes: u64,
    /// Only search connected realizations.
    pub connected: bool,
}

impl Default for W3Budget {
    fn default() -> Self {
        W3Budget {
            restarts: 200,
            seed: 0,
            time_limit: Duration::from_secs(60),
            exhaustive_nodes: 50_000_000,
            connected: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct W3Result {
    /// Best `w^(3)` found; a lower bound for the maximum, and the maximum
    /// itself when `exhaustive` is set.
    pub w3: u64,
    pub witness: Graph,
    pub restarts_run: usize,
    pub exhaustive: bool,
}

pub fn w3_of(g: &Graph) -> u64 {
    g.edges()
        .map(|(u, v)| 2 * (g.degree(u) * g.degree(v)) as u64)
        .sum()
}

#[derive(Clone)]
struct Realization {
    n: usize,
    deg: Vec<u64>,
    adj: Vec<bool>,
    edges: Vec<(usize, usize)>,
    connected: bool,
}

impl Realization {
    fn new(g: &Graph, connected: bool) -> Self {
        let n = g.order();
        let mut adj = vec![false; n * n];
        let edges: Vec<_> = g.edges().collect();
        for &(u, v) in &edges {
            adj[u * n + v] = true;
            adj[v * n + u] = true;
        }
        Realization {
            n,
            deg: g.degrees().into_iter().map(|d| d as u64).collect(),
            adj,
            edges,
            connected,
        }
    }

    fn components(&self) -> Vec<usize> {
        let n = self.n;
        let mut comp = vec![usize::MAX; n];
        let mut c = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = c;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for w in 0..n {
                    if self.has(v, w) && comp[w] == usize::MAX {
                        comp[w] = c;
                        stack.push(w);
                    }
                }
            }
            c += 1;
        }
        comp
    }

    fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Applies the swap if it keeps the realization admissible.
    fn try_apply(&mut self, i: usize, j: usize, flip: bool) -> bool {
        let old = (self.edges[i], self.edges[j]);
        self.apply(i, j, flip);
        if !self.connected || self.is_connected() {
            return true;
        }
        // undo: the swap is its own inverse on the rewritten pair
        let (ab, cd) = old;
        let (x, y) = (self.edges[i], self.edges[j]);
        self.set(x.0, x.1, false);
        self.set(y.0, y.1, false);
        self.set(ab.0, ab.1, true);
        self.set(cd.0, cd.1, true);
        self.edges[i] = ab;
        self.edges[j] = cd;
        false
    }

    /// Merges components by swapping a non-bridge edge of one component
    /// with an edge of another. Fails only when no connected realization
    /// exists.
    fn connect(&mut self) -> bool {
        loop {
            let comp = self.components();
            if comp.iter().all(|&c| c == 0) {
                return true;
            }
            let m = self.edges.len();
            let mut merged = false;
            'search: for i in 0..m {
                let (a, b) = self.edges[i];
                // a–b is not a bridge when b stays reachable without it
                self.set(a, b, false);
                let bridge = !self.reaches(a, b);
                self.set(a, b, true);
                if bridge {
                    continue;
                }
                for j in 0..m {
                    let (c, _) = self.edges[j];
                    if comp[c] != comp[a] {
                        self.apply(i, j, false);
                        merged = true;
                        break 'search;
                    }
                }
            }
            if !merged {
                return false;
            }
        }
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.n];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            for w in 0..self.n {
                if self.has(v, w) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        self.adj[u * self.n + v] = on;
        self.adj[v * self.n + u] = on;
    }

    /// Replaces edges `i = ab` and `j = cd` by `ac, bd` (`flip = false`) or
    /// `ad, bc` (`flip = true`) if the result stays simple; returns the
    /// change of `Σ d(u)d(v)`.
    fn swap_gain(&self, i: usize, j: usize, flip: bool) -> Option<i64> {
        let (a, b) = self.edges[i];
        let (mut c, mut d) = self.edges[j];
        if flip {
            std::mem::swap(&mut c, &mut d);
        }
        if a == c || a == d || b == c || b == d || self.has(a, c) || self.has(b, d) {
            return None;
        }
        let g = |x: usize, y: usize| (self.deg[x] * self.deg[y]) as i64;
        Some(g(a, c) + g(b, d) - g(a, b) - g(c, d))
    }

    fn apply(&mut self, i: usize, j: usize, flip: bool) {
        let (a, b) = self.edges[i];
        let (mut c, mut d) = self.edges[j];
        if flip {
            std::mem::swap(&mut c, &mut d);
        }
        self.set(a, b, false);
        self.set(c, d, false);
        self.set(a, c, true);
        self.set(b, d, true);
        self.edges[i] = (a.min(c), a.max(c));
        self.edges[j] = (b.min(d), b.max(d));
    }

    fn shuffle(&mut self, rng: &mut ChaCha8Rng, swaps: usize) {
        let m = self.edges.len();
        if m < 2 {
            return;
        }
        for _ in 0..swaps {
            let i = rng.gen_range(0..m);
            let j = rng.gen_range(0..m);
            let flip = rng.gen_bool(0.5);
            if i != j && self.swap_gain(i, j, flip).is_some() {
                self.try_apply(i, j, flip);
            }
        }
    }

    /// Best-improvement hill climb over admissible swaps.
    fn climb(&mut self) {
        let m = self.edges.len();
        loop {
            let mut moves = Vec::new();
            for i in 0..m {
                for j in i + 1..m {
                    for flip in [false, true] {
                        if let Some(gain) = self.swap_gain(i, j, flip) {
                            if gain > 0 {
                                moves.push((gain, i, j, flip));
                            }
                        }
                    }
                }
            }
            moves.sort_by(|a, b| b.0.cmp(&a.0));
            if !moves.into_iter().any(|(_, i, j, flip)| self.try_apply(i, j, flip)) {
                return;
            }
        }
    }

    fn value(&self) -> u64 {
        self.edges.iter().map(|&(u, v)| 2 * self.deg[u] * self.deg[v]).sum()
    }

    fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

/// Largest `w^(3)` found over realizations of `pi`.
pub fn max_w3_degseq(pi: &DegreeSequence, budget: &W3Budget) -> Result<W3Result> {
    if !pi.is_graphical() {
        return Err(Error::NotGraphical(format!("{:?}", pi.as_slice())));
    }
    let start = pi.realize()?;
    let n = start.order();
    let special = pi.as_slice().iter().filter(|&&d| d != 2).count();
    if special <= 8 && n <= 14 {
        if let Some((w3, witness)) = exhaustive(pi, budget.exhaustive_nodes, budget.connected) {
            return Ok(W3Result {
                w3,
                witness,
                restarts_run: 0,
                exhaustive: true,
            });
        }
    }
    let began = Instant::now();
    let mut base = Realization::new(&start, budget.connected);
    if budget.connected && !base.connect() {
        return Err(Error::NotGraphical(format!(
            "{:?} has no connected realization",
            pi.as_slice()
        )));
    }
    let runs: Vec<Option<(u64, Vec<(usize, usize)>)>> = (0..budget.restarts.max(1))
        .into_par_iter()
        .map(|k| {
            if k > 0 && began.elapsed() > budget.time_limit {
                return None;
            }
            let mut r = base.clone();
            if k > 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(k as u64));
                r.edges.shuffle(&mut rng);
                r.shuffle(&mut rng, 10 * r.edges.len() + 10);
            }
            r.climb();
            Some((r.value(), r.sorted_edges()))
        })
        .collect();
    let restarts_run = runs.iter().flatten().count();
    let (w3, edges) = runs
        .into_iter()
        .flatten()
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
        .expect("the first restart always runs");
    let witness = Graph::from_edges(n, edges)?;
    Ok(W3Result {
        w3,
        witness,
        restarts_run,
        exhaustive: false,
    })
}

/// Branch and bound over realizations. Vertex `i` picks its remaining
/// neighbors among later vertices; the bound charges every open stub at `u`
/// with `d(u)²`, which dominates `2 d(u) d(v)` summed over both ends.
fn exhaustive(pi: &DegreeSequence, node_limit: u64, connected: bool) -> Option<(u64, Graph)> {
    let deg: Vec<usize> = pi.as_slice().to_vec();
    let n = deg.len();
    struct State<'a> {
        deg: &'a [usize],
        res: Vec<usize>,
        edges: Vec<(usize, usize)>,
        best: Option<(u64, Vec<(usize, usize)>)>,
        nodes: u64,
        limit: u64,
        connected: bool,
    }
    fn open_bound(s: &State<'_>) -> u64 {
        s.res.iter().zip(s.deg).map(|(&r, &d)| (r * d * d) as u64).sum()
    }
    fn rec(s: &mut State<'_>, v: usize, value: u64) -> bool {
        s.nodes += 1;
        if s.nodes > s.limit {
            return false;
        }
        let n = s.deg.len();
        let mut v = v;
        while v < n && s.res[v] == 0 {
            v += 1;
        }
        if v == n {
            let admissible = !s.connected
                || Graph::from_edges(n, s.edges.iter().copied()).is_ok_and(|g| g.is_connected());
            if admissible && s.best.as_ref().is_none_or(|b| value > b.0) {
                s.best = Some((value, s.edges.clone()));
            }
            return true;
        }
        if let Some(b) = &s.best {
            if value + open_bound(s) <= b.0 {
                return true;
            }
        }
        // connect one stub of v to a later vertex w; keep w increasing per v
        let lo = s.edges.last().filter(|e| e.0 == v).map_or(v + 1, |e| e.1 + 1);
        for w in lo..n {
            if s.res[w] == 0 {
                continue;
            }
            s.res[v] -= 1;
            s.res[w] -= 1;
            s.edges.push((v, w));
            let ok = rec(s, v, value + 2 * (s.deg[v] * s.deg[w]) as u64);
            s.edges.pop();
            s.res[v] += 1;
            s.res[w] += 1;
            if !ok {
                return false;
            }
        }
        true
    }
    let mut s = State {
        deg: &deg,
        res: deg.clone(),
        edges: Vec::new(),
        best: None,
        nodes: 0,
        limit: node_limit,
        connected,
    };
    if !rec(&mut s, 0, 0) {
        return None;
    }
    let (w3, edges) = s.best?;
    Some((w3, Graph::from_edges(n, edges).ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::kr_pendant;
    use crate::walks::check_w2_w3;

    fn seq(head: &[usize], twos: usize) -> DegreeSequence {
        let mut v = head.to_vec();
        v.extend(std::iter::repeat_n(2, twos));
        v.extend([1, 1]);
        DegreeSequence::new(v).unwrap()
    }

    #[test]
    fn rejects_non_graphical() {
        let pi = DegreeSequence::new(vec![3, 3, 1, 1]).unwrap();
        assert!(matches!(max_w3_degseq(&pi, &W3Budget::default()), Err(Error::NotGraphical(_))));
    }

    #[test]
    fn exhaustive_small_case() {
        let pi = seq(&[4, 4, 3, 3], 4);
        let r = max_w3_degseq(&pi, &W3Budget::default()).unwrap();
        assert!(r.exhaustive);
        assert_eq!(r.witness.degree_sequence(), pi);
        assert_eq!(w3_of(&r.witness), r.w3);
        // K4 with pendant paths reaches the same value
        let (k, _) = kr_pendant(4, 10).unwrap();
        assert_eq!(w3_of(&k), r.w3);
        assert!(r.witness.is_connected());
        // a triangle of 2-vertices split off as its own component does better
        let loose = W3Budget { connected: false, ..Default::default() };
        let r = max_w3_degseq(&pi, &loose).unwrap();
        assert_eq!(r.w3, 204);
        assert!(!r.witness.is_connected());
    }

    #[test]
    fn local_search_agrees_with_exhaustive() {
        for head in [&[4, 4, 3, 3][..], &[5, 5, 4, 4, 4], &[6, 4, 4, 4, 3, 3]] {
            let twos = 12 - head.len() - 2;
            let pi = seq(head, twos);
            let exact = max_w3_degseq(&pi, &W3Budget::default()).unwrap();
            assert!(exact.exhaustive);
            let budget = W3Budget { exhaustive_nodes: 0, restarts: 60, ..Default::default() };
            let local = max_w3_degseq(&pi, &budget).unwrap();
            assert!(!local.exhaustive);
            assert_eq!(local.w3, exact.w3, "{head:?}");
            assert!(check_w2_w3(&local.witness));
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let pi = seq(&[5, 5, 5, 3, 3, 3], 10);
        let budget = W3Budget { restarts: 30, seed: 9, ..Default::default() };
        let a = max_w3_degseq(&pi, &budget).unwrap();
        let b = max_w3_degseq(&pi, &budget).unwrap();
        assert_eq!(a.w3, b.w3);
        assert_eq!(a.witness, b.witness);
    }
}
