//! Planarity by face-by-face path embedding (Demoucron, Malgrange and
//! Pertuiset), run on each biconnected block.

use crate::graph::Graph;

/// Exact planarity test.
pub fn is_planar(g: &Graph) -> bool {
    let n = g.order();
    if n <= 4 {
        return true;
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    blocks(&adj).into_iter().all(|edges| block_is_planar(n, &edges))
}

/// Edge sets of the biconnected blocks with at least three vertices.
fn blocks(adj: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // iterative DFS: (vertex, parent, next neighbor index)
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&mut (v, parent, ref mut i)) = frames.last_mut() {
            if *i < adj[v].len() {
                let u = adj[v][*i];
                *i += 1;
                if disc[u] == usize::MAX {
                    stack.push((v, u));
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    frames.push((u, v, 0));
                } else if u != parent && disc[u] < disc[v] {
                    stack.push((v, u));
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = stack.pop() {
                            block.push(e);
                            if e == (p, v) {
                                break;
                            }
                        }
                        if block.len() >= 3 {
                            out.push(block);
                        }
                    }
                }
            }
        }
    }
    out
}

fn block_is_planar(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut verts: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    let nv = verts.len();
    if edges.len() > 3 * nv - 6 {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut on = vec![false; n];
    let mut embedded_edge = std::collections::HashSet::new();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));

    // start from any cycle
    let cycle = find_cycle(&adj, verts[0]);
    for w in 0..cycle.len() {
        let (a, b) = (cycle[w], cycle[(w + 1) % cycle.len()]);
        embedded_edge.insert(key(a, b));
        on[a] = true;
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    let mut remaining = edges.len() - cycle.len();

    while remaining > 0 {
        let frags = fragments(&adj, &on, &embedded_edge);
        let mut choice: Option<(usize, usize)> = None;
        for (k, f) in frags.iter().enumerate() {
            let ok: Vec<usize> = (0..faces.len())
                .filter(|&fi| f.contacts.iter().all(|c| faces[fi].contains(c)))
                .collect();
            match ok.len() {
                0 => return false,
                1 => {
                    choice = Some((k, ok[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((k, ok[0]));
                    }
                }
            }
        }
        let (k, fi) = choice.expect("an unembedded edge leaves a fragment");
        let path = frags[k].path(&adj, &on);
        for w in path.windows(2) {
            embedded_edge.insert(key(w[0], w[1]));
        }
        remaining -= path.len() - 1;
        for &v in &path {
            on[v] = true;
        }
        let face = faces.swap_remove(fi);
        let (x, y) = (path[0], path[path.len() - 1]);
        let ix = face.iter().position(|&v| v == x).unwrap();
        let iy = face.iter().position(|&v| v == y).unwrap();
        let len = face.len();
        let inner = &path[1..path.len() - 1];
        // x … y along the face, then back to x through the path
        let mut f1: Vec<usize> = Vec::new();
        let mut i = ix;
        loop {
            f1.push(face[i]);
            if i == iy {
                break;
            }
            i = (i + 1) % len;
        }
        f1.extend(inner.iter().rev());
        let mut f2: Vec<usize> = Vec::new();
        let mut i = iy;
        loop {
            f2.push(face[i]);
            if i == ix {
                break;
            }
            i = (i + 1) % len;
        }
        f2.extend(inner.iter());
        faces.push(f1);
        faces.push(f2);
    }
    true
}

/// A cycle through the edge `start`–(first neighbor), from a shortest path
/// avoiding that edge.
fn find_cycle(adj: &[Vec<usize>], start: usize) -> Vec<usize> {
    let n = adj.len();
    let target = adj[start][0];
    let mut prev = vec![usize::MAX; n];
    prev[start] = start;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if v == start && u == target {
                continue;
            }
            if prev[u] == usize::MAX {
                prev[u] = v;
                if u == target {
                    let mut cyc = vec![u];
                    let mut w = u;
                    while w != start {
                        w = prev[w];
                        cyc.push(w);
                    }
                    return cyc;
                }
                queue.push_back(u);
            }
        }
    }
    unreachable!("every edge of a block lies on a cycle")
}

struct Fragment {
    contacts: Vec<usize>,
    /// Unembedded vertices; empty for a single chord.
    body: Vec<usize>,
}

fn fragments(
    adj: &[Vec<usize>],
    on: &[bool],
    embedded: &std::collections::HashSet<(usize, usize)>,
) -> Vec<Fragment> {
    let n = adj.len();
    let mut out = Vec::new();
    for v in 0..n {
        if !on[v] {
            continue;
        }
        for &u in &adj[v] {
            if on[u] && v < u && !embedded.contains(&(v, u)) {
                out.push(Fragment {
                    contacts: vec![v, u],
                    body: Vec::new(),
                });
            }
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if on[s] || seen[s] || adj[s].is_empty() {
            continue;
        }
        let mut body = vec![s];
        let mut contacts = Vec::new();
        seen[s] = true;
        let mut i = 0;
        while i < body.len() {
            let v = body[i];
            i += 1;
            for &u in &adj[v] {
                if on[u] {
                    contacts.push(u);
                } else if !seen[u] {
                    seen[u] = true;
                    body.push(u);
                }
            }
        }
        contacts.sort_unstable();
        contacts.dedup();
        out.push(Fragment { contacts, body });
    }
    out
}

impl Fragment {
    /// A path through the fragment between two distinct contacts.
    fn path(&self, adj: &[Vec<usize>], on: &[bool]) -> Vec<usize> {
        if self.body.is_empty() {
            return self.contacts.clone();
        }
        let start = self.contacts[0];
        let n = adj.len();
        let mut prev = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for &u in &adj[start] {
            if !on[u] && self.body.contains(&u) && prev[u] == usize::MAX {
                prev[u] = start;
                queue.push_back(u);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if on[u] {
                    if u != start {
                        let mut path = vec![u, v];
                        let mut w = v;
                        while prev[w] != start {
                            w = prev[w];
                            path.push(w);
                        }
                        path.push(start);
                        path.reverse();
                        return path;
                    }
                } else if prev[u] == usize::MAX {
                    prev[u] = v;
                    queue.push_back(u);
                }
            }
        }
        unreachable!("fragments of a block touch at least two contacts")
    }
}
