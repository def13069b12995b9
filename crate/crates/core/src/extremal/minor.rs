//! Exact minor containment for small graphs.
//!
//! The search strips dominating vertices of the host (a dominating vertex
//! may always be taken as a whole branch set), applies reductions that are
//! safe for the target's minimum degree, then answers stars and `K_{2,s}`
//! directly and everything else by a memoized contraction search.

use std::collections::HashSet;

use super::canon::canonical_rows;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest target order accepted by [`has_minor`].
pub const MINOR_MAX_TARGET: usize = 10;
/// Largest host order accepted by [`has_minor`].
pub const MINOR_MAX_HOST: usize = 30;
/// Search nodes before the test refuses.
pub const MINOR_NODE_BUDGET: usize = 20_000_000;

/// True when `h` is a minor of `g`.
pub fn has_minor(g: &Graph, h: &Graph) -> Result<bool> {
    check_envelope(g, h)?;
    let mut ctx = Ctx::default();
    contains(Sg::from_graph(g), &Target::new(h.adjacency_masks().unwrap()), &mut ctx)
}

/// The contraction search alone, without shortcuts or reductions.
pub fn has_minor_plain(g: &Graph, h: &Graph) -> Result<bool> {
    check_envelope(g, h)?;
    let mut ctx = Ctx {
        plain: true,
        ..Ctx::default()
    };
    let t = Target::new(h.adjacency_masks().unwrap());
    generic(Sg::from_graph(g), &t, &mut ctx)
}

/// True when some connected vertex set of `g` has at least `k` neighbors
/// outside it, which is the same as `K_{1,k}` being a minor of `g`.
pub fn has_star_minor(g: &Graph, k: usize) -> Result<bool> {
    if g.order() > MINOR_MAX_HOST {
        return Err(refusal(g, None));
    }
    let mut ctx = Ctx::default();
    star(Sg::from_graph(g), k, &mut ctx)
}

fn check_envelope(g: &Graph, h: &Graph) -> Result<()> {
    if g.order() > MINOR_MAX_HOST || h.order() > MINOR_MAX_TARGET {
        return Err(refusal(g, Some(h)));
    }
    Ok(())
}

fn refusal(g: &Graph, h: Option<&Graph>) -> Error {
    Error::ScaleRefusal(format!(
        "minor test supports hosts up to {MINOR_MAX_HOST} and targets up to {MINOR_MAX_TARGET} vertices (got {} and {})",
        g.order(),
        h.map_or(0, |h| h.order())
    ))
}

#[derive(Default)]
struct Ctx {
    nodes: usize,
    memo: HashSet<(Vec<u64>, Vec<u64>)>,
    plain: bool,
}

impl Ctx {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > MINOR_NODE_BUDGET {
            return Err(Error::ScaleRefusal(format!(
                "minor search exceeded {MINOR_NODE_BUDGET} nodes"
            )));
        }
        Ok(())
    }
}

/// Small simple graph on bitsets.
#[derive(Clone, Debug)]
struct Sg {
    adj: Vec<u64>,
}

impl Sg {
    fn from_graph(g: &Graph) -> Sg {
        Sg {
            adj: g.adjacency_masks().expect("host fits in bitsets"),
        }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    fn e(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    fn deg(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    fn all(&self) -> u64 {
        if self.n() == 64 {
            u64::MAX
        } else {
            (1u64 << self.n()) - 1
        }
    }

    /// Keeps the vertices in `keep`, relabeled in increasing order.
    fn induced(&self, keep: u64) -> Sg {
        let verts: Vec<usize> = bits(keep).collect();
        let mut pos = [usize::MAX; 64];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let adj = verts
            .iter()
            .map(|&v| bits(self.adj[v] & keep).fold(0u64, |r, u| r | 1 << pos[u]))
            .collect();
        Sg { adj }
    }

    fn remove(&self, v: usize) -> Sg {
        self.induced(self.all() & !(1 << v))
    }

    /// Merges `v` into `u` (which must be adjacent or not, either way).
    fn contract(&self, u: usize, v: usize) -> Sg {
        let mut adj = self.adj.clone();
        let nv = adj[v] & !(1 << u);
        adj[u] = (adj[u] | nv) & !(1 << v) & !(1 << u);
        for w in bits(nv) {
            adj[w] |= 1 << u;
        }
        Sg { adj }.remove(v)
    }

    fn components(&self) -> Vec<u64> {
        let mut left = self.all();
        let mut out = Vec::new();
        while left != 0 {
            let s = left.trailing_zeros() as usize;
            let mut comp = 1u64 << s;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0u64;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                frontier = next & !comp;
                comp |= next;
            }
            left &= !comp;
            out.push(comp);
        }
        out
    }

    fn key(&self) -> Vec<u64> {
        canonical_rows(&self.adj).rows
    }
}

fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            None
        } else {
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(b)
        }
    })
}

struct Target {
    adj: Vec<u64>,
    n: usize,
    e: usize,
    min_deg: usize,
    connected: bool,
    /// Two vertices of degree ≤ 2 are adjacent.
    adjacent_low: bool,
    star: Option<usize>,
    k2s: Option<usize>,
    key: Vec<u64>,
}

impl Target {
    fn new(adj: Vec<u64>) -> Target {
        let g = Sg { adj };
        let n = g.n();
        let degs: Vec<usize> = (0..n).map(|v| g.deg(v)).collect();
        let min_deg = degs.iter().copied().min().unwrap_or(0);
        let e = g.e();
        let connected = g.components().len() <= 1;
        let adjacent_low = (0..n).any(|v| degs[v] <= 2 && bits(g.adj[v]).any(|u| degs[u] <= 2));
        let star = (n >= 2 && e == n - 1 && degs.iter().filter(|&&d| d == n - 1).count() >= 1)
            .then_some(n - 1);
        let k2s = (n >= 5 && e == 2 * (n - 2) && {
            let big: Vec<usize> = (0..n).filter(|&v| degs[v] == n - 2).collect();
            big.len() == 2
                && g.adj[big[0]] >> big[1] & 1 == 0
                && (0..n)
                    .filter(|v| !big.contains(v))
                    .all(|v| g.adj[v] == (1 << big[0]) | (1 << big[1]))
        })
        .then_some(n - 2);
        let key = g.key();
        Target {
            adj: g.adj,
            n,
            e,
            min_deg,
            connected,
            adjacent_low,
            star,
            k2s,
            key,
        }
    }
}

fn contains(g: Sg, h: &Target, ctx: &mut Ctx) -> Result<bool> {
    ctx.tick()?;
    if h.n == 0 {
        return Ok(true);
    }
    if g.n() < h.n || g.e() < h.e {
        return Ok(false);
    }
    if let Some(t) = h.star {
        return star(g, t, ctx);
    }
    let g = reduce(g, h);
    if g.n() < h.n || g.e() < h.e {
        return Ok(false);
    }
    if g.e() * 2 == g.n() * (g.n() - 1) {
        return Ok(h.n <= g.n());
    }
    if h.connected {
        let comps = g.components();
        if comps.len() > 1 {
            for c in comps {
                if contains(g.induced(c), h, ctx)? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
    }
    let n = g.n();
    if let Some(u) = (0..n).find(|&v| g.deg(v) + 1 == n) {
        // u forms a branch set on its own, for some target vertex
        let rest = g.remove(u);
        let mut tried = HashSet::new();
        for x in 0..h.n {
            let sub = Sg { adj: h.adj.clone() }.remove(x);
            if !tried.insert(sub.key()) {
                continue;
            }
            if contains(rest.clone(), &Target::new(sub.adj), ctx)? {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    if let Some(s) = h.k2s {
        return k2s(&g, s, ctx);
    }
    generic(g, h, ctx)
}

/// Reductions that keep the answer unchanged for targets like `h`.
fn reduce(mut g: Sg, h: &Target) -> Sg {
    if h.min_deg >= 3 {
        // no branch set can be a lone vertex of degree at most 2
        loop {
            if let Some(v) = (0..g.n()).find(|&v| g.deg(v) <= 1) {
                g = g.remove(v);
            } else if let Some(v) = (0..g.n()).find(|&v| g.deg(v) == 2) {
                let u = g.adj[v].trailing_zeros() as usize;
                g = g.contract(u, v);
            } else {
                return g;
            }
        }
    }
    if h.min_deg >= 2 {
        loop {
            if let Some(v) = (0..g.n()).find(|&v| g.deg(v) <= 1) {
                g = g.remove(v);
                continue;
            }
            if !h.adjacent_low {
                // a chain of 2-vertices can host at most one branch set
                if let Some((v, w)) = chain_pair(&g) {
                    g = g.contract(v, w);
                    continue;
                }
            }
            return g;
        }
    }
    if h.min_deg >= 1 {
        if let Some(v) = (0..g.n()).find(|&v| g.deg(v) == 0) {
            return reduce(g.remove(v), h);
        }
    }
    g
}

/// Two adjacent vertices of degree 2.
fn chain_pair(g: &Sg) -> Option<(usize, usize)> {
    (0..g.n()).filter(|&v| g.deg(v) == 2).find_map(|v| {
        bits(g.adj[v]).find(|&w| g.deg(w) == 2).map(|w| (v, w))
    })
}

/// Star minors: a connected set with `t` outside neighbors.
fn star(mut g: Sg, t: usize, ctx: &mut Ctx) -> Result<bool> {
    if t == 0 {
        return Ok(g.n() >= 1);
    }
    if (0..g.n()).any(|v| g.deg(v) >= t) {
        return Ok(true);
    }
    if t >= 3 {
        // pendant paths give one outside neighbor and chains at most two
        loop {
            if let Some(v) = (0..g.n()).find(|&v| g.deg(v) == 0) {
                g = g.remove(v);
            } else if let Some(v) = (0..g.n()).find(|&v| {
                g.deg(v) == 1 && g.deg(g.adj[v].trailing_zeros() as usize) == 2
            }) {
                g = g.remove(v);
            } else if let Some((v, w)) = long_chain(&g) {
                g = g.contract(v, w);
            } else {
                break;
            }
        }
    }
    let n = g.n();
    let mut found = false;
    for v in 0..n {
        let low = (1u64 << v) - 1;
        let ext = g.adj[v] & !low;
        connected_sets(&g, 1 << v, ext, low | 1 << v, &mut |s| {
            let out = bits(*s).fold(0u64, |m, x| m | g.adj[x]);
            (out & !*s).count_ones() as usize >= t
        }, ctx, &mut found)?;
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Three consecutive 2-vertices: the middle one and a neighbor.
fn long_chain(g: &Sg) -> Option<(usize, usize)> {
    (0..g.n())
        .filter(|&v| g.deg(v) == 2)
        .find(|&v| bits(g.adj[v]).all(|u| g.deg(u) == 2))
        .map(|v| (g.adj[v].trailing_zeros() as usize, v))
}

/// Visits every connected set that contains `s`, grows only through `ext`
/// and avoids `banned`. Stops once `visit` returns true.
fn connected_sets(
    g: &Sg,
    s: u64,
    ext: u64,
    banned: u64,
    visit: &mut dyn FnMut(&u64) -> bool,
    ctx: &mut Ctx,
    found: &mut bool,
) -> Result<()> {
    ctx.tick()?;
    if visit(&s) {
        *found = true;
        return Ok(());
    }
    let mut ext = ext;
    let mut banned = banned;
    while ext != 0 {
        let w = ext.trailing_zeros() as usize;
        ext &= ext - 1;
        banned |= 1 << w;
        let grown = s | 1 << w;
        let new_ext = (ext | g.adj[w]) & !banned & !grown;
        connected_sets(g, grown, new_ext, banned, visit, ctx, found)?;
        if *found {
            return Ok(());
        }
    }
    Ok(())
}

/// `K_{2,s}` with `s ≥ 3` on a reduced graph: both branch sets of degree
/// `s` hold a vertex of degree at least 3 and every 2-vertex joining two
/// of their vertices. The remaining branch sets are disjoint paths between
/// their neighborhoods, counted by a flow.
fn k2s(g: &Sg, s: usize, ctx: &mut Ctx) -> Result<bool> {
    let n = g.n();
    let branch: Vec<usize> = (0..n).filter(|&v| g.deg(v) >= 3).collect();
    if branch.len() < 2 {
        return Ok(false);
    }
    let bmask = branch.iter().fold(0u64, |m, &v| m | 1 << v);
    let two = g.all() & !bmask;
    // branch vertices joined directly or through a 2-vertex
    let mut link = vec![0u64; n];
    for &v in &branch {
        let mut l = g.adj[v] & bmask;
        for w in bits(g.adj[v] & two) {
            l |= g.adj[w] & bmask;
        }
        link[v] = l & !(1 << v);
    }
    let closure = |x: u64| -> u64 {
        let mut full = x;
        for w in bits(two) {
            if g.adj[w] & !x == 0 {
                full |= 1 << w;
            }
        }
        full
    };
    let nbr = |x: u64| bits(x).fold(0u64, |m, v| m | g.adj[v]) & !x;

    let mut firsts: Vec<u64> = Vec::new();
    for &v in &branch {
        let low = (1u64 << v) - 1;
        let mut found = false;
        connected_sets(
            &Sg { adj: link.clone() },
            1 << v,
            link[v] & !low,
            low | 1 << v | !bmask,
            &mut |x| {
                let full = closure(*x);
                if nbr(full).count_ones() as usize >= s {
                    firsts.push(*x);
                }
                false
            },
            ctx,
            &mut found,
        )?;
    }
    for &x1 in &firsts {
        let a1 = closure(x1);
        let n1 = nbr(a1);
        let min1 = x1.trailing_zeros() as usize;
        for &x2 in &firsts {
            ctx.tick()?;
            if x2 & x1 != 0 || (x2.trailing_zeros() as usize) < min1 {
                continue;
            }
            let a2 = closure(x2);
            if a2 & a1 != 0 {
                continue;
            }
            let rest = g.all() & !a1 & !a2;
            let src = n1 & rest;
            let dst = nbr(a2) & rest;
            if (src.count_ones() as usize) < s || (dst.count_ones() as usize) < s {
                continue;
            }
            // x2 must stay connected once a1 is taken out; it is, since
            // closure(x2) only uses vertices outside a1
            if disjoint_paths(g, rest, src, dst, s) >= s {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Vertex-disjoint paths inside `rest` from `src` to `dst`, up to `cap`.
/// A vertex in both end sets is a path on its own.
fn disjoint_paths(g: &Sg, rest: u64, src: u64, dst: u64, cap: usize) -> usize {
    // nodes: 2v in, 2v+1 out, then source and sink
    let n = g.n();
    let (source, sink) = (2 * n, 2 * n + 1);
    let m = 2 * n + 2;
    let mut c = vec![vec![0u8; m]; m];
    for v in bits(rest) {
        c[2 * v][2 * v + 1] = 1;
        for u in bits(g.adj[v] & rest) {
            c[2 * v + 1][2 * u] = 1;
        }
    }
    for v in bits(src) {
        c[source][2 * v] = 1;
    }
    for v in bits(dst) {
        c[2 * v + 1][sink] = 1;
    }
    let mut flow = 0;
    while flow < cap {
        let mut prev = vec![usize::MAX; m];
        prev[source] = source;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for y in 0..m {
                if c[x][y] > 0 && prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[sink] == usize::MAX {
            break;
        }
        let mut y = sink;
        while y != source {
            let x = prev[y];
            c[x][y] -= 1;
            c[y][x] += 1;
            y = x;
        }
        flow += 1;
    }
    flow
}

/// Contraction search: `h` is a minor of `g` iff it is a subgraph of some
/// contraction of `g`.
fn generic(g: Sg, h: &Target, ctx: &mut Ctx) -> Result<bool> {
    ctx.tick()?;
    if g.n() < h.n || g.e() < h.e {
        return Ok(false);
    }
    if is_subgraph(&h.adj, &g.adj) {
        return Ok(true);
    }
    if g.n() == h.n {
        return Ok(false);
    }
    let key = (g.key(), h.key.clone());
    if ctx.memo.contains(&key) {
        return Ok(false);
    }
    let mut children = HashSet::new();
    for u in 0..g.n() {
        for v in bits(g.adj[u]).filter(|&v| v > u) {
            let mut c = g.contract(u, v);
            if !ctx.plain {
                c = reduce(c, h);
            }
            if !children.insert(c.key()) {
                continue;
            }
            if generic(c, h, ctx)? {
                return Ok(true);
            }
        }
    }
    ctx.memo.insert(key);
    Ok(false)
}

/// Subgraph (not necessarily induced) embedding of `h` into `g`.
pub(crate) fn is_subgraph(h: &[u64], g: &[u64]) -> bool {
    let nh = h.len();
    let ng = g.len();
    if nh > ng {
        return false;
    }
    let hdeg: Vec<u32> = h.iter().map(|r| r.count_ones()).collect();
    let gdeg: Vec<u32> = g.iter().map(|r| r.count_ones()).collect();
    // order: each vertex after the first of its component has an earlier neighbor
    let mut order = Vec::with_capacity(nh);
    let mut placed = 0u64;
    while order.len() < nh {
        let next = (0..nh)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| ((h[v] & placed).count_ones(), hdeg[v]))
            .unwrap();
        order.push(next);
        placed |= 1 << next;
    }
    let mut map = vec![usize::MAX; nh];
    fn go(
        k: usize,
        order: &[usize],
        h: &[u64],
        g: &[u64],
        hdeg: &[u32],
        gdeg: &[u32],
        map: &mut [usize],
        used: u64,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        let all = if g.len() == 64 { u64::MAX } else { (1u64 << g.len()) - 1 };
        let mut cand = all & !used;
        for y in bits(h[x]) {
            if map[y] != usize::MAX {
                cand &= g[map[y]];
            }
        }
        for c in bits(cand) {
            if gdeg[c] < hdeg[x] {
                continue;
            }
            map[x] = c;
            if go(k + 1, order, h, g, hdeg, gdeg, map, used | 1 << c) {
                return true;
            }
            map[x] = usize::MAX;
        }
        false
    }
    go(0, &order, h, g, &hdeg, &gdeg, &mut map, 0)
}
