//! Minimum Euler genus by enumerating rotation systems.
//!
//! Rotations fix the smallest neighbor first, so each vertex contributes
//! `(d−1)!` choices. Signatures are +1 on a BFS spanning tree; only co-tree
//! signs vary. Orientable schemes (all co-tree signs +1) come first.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{trace_faces, EmbeddingScheme};
use crate::error::{Error, Result};
use crate::graph::Graph;

const CHUNK: u64 = 1 << 14;

#[derive(Clone, Debug)]
pub struct GenusLimits {
    /// Largest scheme count searched exhaustively.
    pub max_schemes: u64,
    /// Annealing restarts used above the cap.
    pub restarts: usize,
    /// Moves per annealing restart.
    pub steps: usize,
    pub seed: u64,
}

impl Default for GenusLimits {
    fn default() -> Self {
        GenusLimits {
            max_schemes: 1_000_000_000,
            restarts: 32,
            steps: 20_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenusResult {
    pub genus: usize,
    pub scheme: EmbeddingScheme,
    /// True when the value is proven minimal: the whole space was searched
    /// or the lower bound was met. False for an annealing result.
    pub exact: bool,
    /// Schemes evaluated.
    pub examined: u64,
    pub lower_bound: usize,
}

/// Euler-characteristic lower bound from `e ≤ g/(g−2)·(n−2+γ)`, with `g` the
/// girth. Forests get 0.
pub fn genus_lower_bound(g: &Graph) -> usize {
    let Some(girth) = g.girth() else { return 0 };
    let (n, e) = (g.order() as i64, g.size() as i64);
    let gi = girth as i64;
    let num = e * (gi - 2) - gi * (n - 2);
    if num <= 0 {
        0
    } else {
        ((num + gi - 1) / gi) as usize
    }
}

/// Fixed dart layout: dart `off[v] + k` points at the `k`-th smallest
/// neighbor of `v`.
struct Layout {
    n: usize,
    off: Vec<usize>,
    twin: Vec<usize>,
    nbrs: Vec<Vec<usize>>,
    /// Darts of co-tree edges, one per edge (lower endpoint side).
    cotree: Vec<(usize, usize)>,
    /// `(d−1)!` per vertex.
    radix: Vec<u64>,
}

impl Layout {
    fn new(g: &Graph) -> Layout {
        let n = g.order();
        let nbrs: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                let mut x: Vec<usize> = g.neighbors(v).collect();
                x.sort_unstable();
                x
            })
            .collect();
        let mut off = vec![0usize; n + 1];
        for v in 0..n {
            off[v + 1] = off[v] + nbrs[v].len();
        }
        let mut twin = vec![0usize; off[n]];
        for v in 0..n {
            for (k, &u) in nbrs[v].iter().enumerate() {
                let j = nbrs[u].binary_search(&v).unwrap();
                twin[off[v] + k] = off[u] + j;
            }
        }
        let mut seen = vec![false; n];
        let mut tree = std::collections::HashSet::new();
        if n > 0 {
            seen[0] = true;
            let mut queue = std::collections::VecDeque::from([0]);
            while let Some(v) = queue.pop_front() {
                for &u in &nbrs[v] {
                    if !seen[u] {
                        seen[u] = true;
                        tree.insert((v.min(u), v.max(u)));
                        queue.push_back(u);
                    }
                }
            }
        }
        let cotree = g
            .edges()
            .filter(|e| !tree.contains(e))
            .map(|(a, b)| {
                let k = nbrs[a].binary_search(&b).unwrap();
                (off[a] + k, twin[off[a] + k])
            })
            .collect();
        let radix = nbrs
            .iter()
            .map(|x| (1..x.len().max(1) as u64).product::<u64>())
            .collect();
        Layout {
            n,
            off,
            twin,
            nbrs,
            cotree,
            radix,
        }
    }

    fn rotation_count(&self) -> Option<u64> {
        self.radix.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r))
    }

    /// Writes the rotation for index `idx` as dart successor/predecessor maps.
    fn decode(&self, mut idx: u64, perm: &mut Vec<usize>, next: &mut [usize], prev: &mut [usize]) {
        for v in 0..self.n {
            let d = self.nbrs[v].len();
            if d == 0 {
                continue;
            }
            let digit = idx % self.radix[v];
            idx /= self.radix[v];
            nth_rotation(d, digit, perm);
            for i in 0..d {
                let a = self.off[v] + perm[i];
                let b = self.off[v] + perm[(i + 1) % d];
                next[a] = b;
                prev[b] = a;
            }
        }
    }

    fn set_signs(&self, mask: u64, sign: &mut [i8]) {
        sign.iter_mut().for_each(|s| *s = 1);
        for (k, &(a, b)) in self.cotree.iter().enumerate() {
            if mask >> k & 1 == 1 {
                sign[a] = -1;
                sign[b] = -1;
            }
        }
    }

    fn faces(&self, next: &[usize], prev: &[usize], sign: &[i8], used: &mut [bool]) -> usize {
        used.iter_mut().for_each(|u| *u = false);
        let total = self.twin.len();
        let slot = |d: usize, s: i8| 2 * d + usize::from(s < 0);
        let mut f = 0;
        for start in 0..total {
            for s0 in [1i8, -1] {
                if used[slot(start, s0)] {
                    continue;
                }
                f += 1;
                let (mut d, mut s) = (start, s0);
                loop {
                    let t = self.twin[d];
                    let s2 = s * sign[d];
                    used[slot(d, s)] = true;
                    used[slot(t, -s2)] = true;
                    d = if s2 > 0 { next[t] } else { prev[t] };
                    s = s2;
                    if d == start && s == s0 {
                        break;
                    }
                }
            }
        }
        f
    }

    fn scheme(&self, g: &Graph, next: &[usize], sign: &[i8]) -> Result<EmbeddingScheme> {
        let mut rotation = vec![Vec::new(); self.n];
        for v in 0..self.n {
            let d = self.nbrs[v].len();
            if d == 0 {
                continue;
            }
            let mut dart = self.off[v];
            for _ in 0..d {
                rotation[v].push(self.nbrs[v][dart - self.off[v]]);
                dart = next[dart];
            }
        }
        let mut signature = BTreeMap::new();
        for v in 0..self.n {
            for (k, &u) in self.nbrs[v].iter().enumerate() {
                if v < u {
                    signature.insert((v, u), sign[self.off[v] + k]);
                }
            }
        }
        EmbeddingScheme::new(g.clone(), rotation, signature)
    }

    fn genus(&self, e: usize, f: usize) -> usize {
        2 + e - self.n - f
    }
}

/// Rotation `digit` of `0..d` with `0` fixed in front; the rest follow the
/// Lehmer code of `digit`.
fn nth_rotation(d: usize, mut digit: u64, perm: &mut Vec<usize>) {
    perm.clear();
    perm.push(0);
    let mut pool: Vec<usize> = (1..d).collect();
    let mut fact: u64 = (1..pool.len().max(1) as u64).product();
    while !pool.is_empty() {
        let k = (digit / fact) as usize;
        digit %= fact;
        perm.push(pool.remove(k));
        if !pool.is_empty() {
            fact /= pool.len() as u64;
        }
    }
}

/// Smallest Euler genus over all schemes of `g`, or over orientable ones.
///
/// Exhaustive up to `limits.max_schemes`; above that a seeded annealing
/// search runs and the result carries `exact = false` unless it meets the
/// lower bound.
pub fn min_euler_genus(g: &Graph, orientable_only: bool, limits: &GenusLimits) -> Result<GenusResult> {
    if g.order() == 0 {
        return Err(Error::EmptyOrder);
    }
    if !g.is_connected() {
        return Err(Error::Cellularity(
            "genus is defined here for connected graphs only".into(),
        ));
    }
    if g.size() == 0 {
        let scheme = EmbeddingScheme::orientable(g.clone(), vec![Vec::new()])?;
        return Ok(GenusResult {
            genus: 0,
            scheme,
            exact: true,
            examined: 1,
            lower_bound: 0,
        });
    }
    let layout = Layout::new(g);
    let mut lower = genus_lower_bound(g);
    if orientable_only && lower % 2 == 1 {
        lower += 1;
    }
    let sig_bits = if orientable_only { 0 } else { layout.cotree.len() };
    let rotations = layout.rotation_count();
    let total = rotations.and_then(|r| {
        if sig_bits >= 64 {
            None
        } else {
            r.checked_mul(1u64 << sig_bits)
        }
    });
    match (rotations, total) {
        (Some(r), Some(t)) if t <= limits.max_schemes => exhaustive(g, &layout, r, t, lower),
        _ => anneal(g, &layout, orientable_only, limits, lower),
    }
}

fn exhaustive(g: &Graph, layout: &Layout, rotations: u64, total: u64, lower: usize) -> Result<GenusResult> {
    let e = g.size();
    let darts = layout.twin.len();
    let chunks = total.div_ceil(CHUNK);
    let mut best: Option<(usize, u64)> = None;
    let mut examined = 0u64;
    // batches of chunks in order, so the first optimum by index wins
    let batch = rayon::current_num_threads().max(1) as u64 * 4;
    let mut c0 = 0;
    while c0 < chunks {
        let c1 = (c0 + batch).min(chunks);
        let found = (c0..c1)
            .into_par_iter()
            .map_init(
                || (Vec::new(), vec![0usize; darts], vec![0usize; darts], vec![1i8; darts], vec![false; 2 * darts]),
                |(perm, next, prev, sign, used), c| {
                    let mut local: Option<(usize, u64)> = None;
                    let hi = ((c + 1) * CHUNK).min(total);
                    for idx in c * CHUNK..hi {
                        layout.decode(idx % rotations, perm, next, prev);
                        layout.set_signs(idx / rotations, sign);
                        let genus = layout.genus(e, layout.faces(next, prev, sign, used));
                        if local.is_none_or(|(b, _)| genus < b) {
                            local = Some((genus, idx));
                            if genus <= lower {
                                break;
                            }
                        }
                    }
                    local
                },
            )
            .flatten()
            .min();
        examined += (c1 * CHUNK).min(total) - c0 * CHUNK;
        if let Some(f) = found {
            if best.is_none_or(|b| f < b) {
                best = Some(f);
            }
        }
        if best.is_some_and(|(genus, _)| genus <= lower) {
            break;
        }
        c0 = c1;
    }
    let (genus, idx) = best.expect("at least one scheme exists");
    let mut perm = Vec::new();
    let (mut next, mut prev, mut sign) = (vec![0; darts], vec![0; darts], vec![1i8; darts]);
    layout.decode(idx % rotations, &mut perm, &mut next, &mut prev);
    layout.set_signs(idx / rotations, &mut sign);
    let scheme = layout.scheme(g, &next, &sign)?;
    let check = trace_faces(&scheme)?;
    if check.genus != genus {
        return Err(Error::Contract(format!(
            "certificate traces to genus {} instead of {genus}",
            check.genus
        )));
    }
    Ok(GenusResult {
        genus,
        scheme,
        exact: true,
        examined,
        lower_bound: lower,
    })
}

#[derive(Clone, Copy)]
enum Move {
    Swap(usize, usize, usize),
    Flip(usize, usize),
}

impl Move {
    fn apply(self, rot: &mut [Vec<usize>], sign: &mut [i8]) {
        match self {
            Move::Swap(v, i, j) => rot[v].swap(i, j),
            Move::Flip(a, b) => {
                sign[a] = -sign[a];
                sign[b] = -sign[b];
            }
        }
    }
}

fn anneal(
    g: &Graph,
    layout: &Layout,
    orientable_only: bool,
    limits: &GenusLimits,
    lower: usize,
) -> Result<GenusResult> {
    let e = g.size();
    let darts = layout.twin.len();
    let movable: Vec<usize> = (0..layout.n).filter(|&v| layout.nbrs[v].len() >= 3).collect();
    let runs: Vec<(usize, usize, Vec<usize>, Vec<i8>)> = (0..limits.restarts.max(1))
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(limits.seed.wrapping_add(k as u64));
            let mut rot: Vec<Vec<usize>> = layout
                .nbrs
                .iter()
                .map(|x| {
                    let mut p: Vec<usize> = (0..x.len()).collect();
                    if p.len() > 2 {
                        for i in (2..p.len()).rev() {
                            let j = rng.gen_range(1..=i);
                            p.swap(i, j);
                        }
                    }
                    p
                })
                .collect();
            let mut sign = vec![1i8; darts];
            if !orientable_only {
                for &(a, b) in &layout.cotree {
                    if rng.gen_bool(0.5) {
                        sign[a] = -1;
                        sign[b] = -1;
                    }
                }
            }
            let (mut next, mut prev) = (vec![0; darts], vec![0; darts]);
            let mut used = vec![false; 2 * darts];
            let apply = |rot: &[Vec<usize>], next: &mut [usize], prev: &mut [usize], v: usize| {
                let d = rot[v].len();
                for i in 0..d {
                    let a = layout.off[v] + rot[v][i];
                    let b = layout.off[v] + rot[v][(i + 1) % d];
                    next[a] = b;
                    prev[b] = a;
                }
            };
            for v in 0..layout.n {
                apply(&rot, &mut next, &mut prev, v);
            }
            let mut cur = layout.faces(&next, &prev, &sign, &mut used);
            let mut best = (cur, next.clone(), sign.clone());
            let flips = if orientable_only { 0 } else { layout.cotree.len() };
            for step in 0..limits.steps {
                if layout.genus(e, best.0) <= lower || (movable.is_empty() && flips == 0) {
                    break;
                }
                let temp = 2.0 * (1.0 - step as f64 / limits.steps as f64) + 0.05;
                let pick = rng.gen_range(0..movable.len() + flips);
                let mv = if pick < movable.len() {
                    let v = movable[pick];
                    let d = rot[v].len();
                    let i = rng.gen_range(1..d);
                    let mut j = rng.gen_range(1..d - 1);
                    if j >= i {
                        j += 1;
                    }
                    Move::Swap(v, i, j)
                } else {
                    let (a, b) = layout.cotree[pick - movable.len()];
                    Move::Flip(a, b)
                };
                mv.apply(&mut rot, &mut sign);
                if let Move::Swap(v, ..) = mv {
                    apply(&rot, &mut next, &mut prev, v);
                }
                let f = layout.faces(&next, &prev, &sign, &mut used);
                let accept = f >= cur || rng.gen_bool(((f as f64 - cur as f64) / temp).exp());
                if accept {
                    cur = f;
                    if f > best.0 {
                        best = (f, next.clone(), sign.clone());
                    }
                } else {
                    // every move is its own inverse
                    mv.apply(&mut rot, &mut sign);
                    if let Move::Swap(v, ..) = mv {
                        apply(&rot, &mut next, &mut prev, v);
                    }
                }
            }
            let (f, next, sign) = best;
            (layout.genus(e, f), k, next, sign)
        })
        .collect();
    let (genus, _, next, sign) = runs
        .into_iter()
        .min_by_key(|r| (r.0, r.1))
        .expect("at least one restart");
    let scheme = layout.scheme(g, &next, &sign)?;
    let check = trace_faces(&scheme)?;
    if check.genus != genus {
        return Err(Error::Contract(format!(
            "certificate traces to genus {} instead of {genus}",
            check.genus
        )));
    }
    Ok(GenusResult {
        genus,
        scheme,
        exact: genus <= lower,
        examined: (limits.restarts.max(1) * limits.steps) as u64,
        lower_bound: lower,
    })
}
