//! Exact maximum of w³ over connected realizations of a degree sequence
//! whose entries other than 2 are few.
//!
//! A connected realization is determined, up to the placement of its
//! 2-vertices, by a multigraph on the vertices of degree ≠ 2 in which every
//! edge may be subdivided. Loops need at least two subdivision vertices and
//! all but one copy of a parallel edge need at least one. The contribution
//! of a chain with k ≥ 1 inner vertices between u and v is
//! 2d(u) + 2d(v) + 4(k − 1), so once the set of subdivided edges is fixed
//! every spare 2-vertex is worth 4 wherever it goes.

pub fn max_connected_w3(forks: &[usize], twos: usize) -> Option<u64> {
    max_w3_skeleton(forks, twos, true)
}

/// Same search without the connectivity requirement on the skeleton; 2-vertices
/// still sit on skeleton edges, so no component consists of 2-vertices only.
pub fn max_w3_skeleton(forks: &[usize], twos: usize, connected: bool) -> Option<u64> {
    let k = forks.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let mut m = vec![0usize; pairs.len()];
    let mut rem = forks.to_vec();
    let mut best: Option<u64> = None;
    enumerate(forks, twos, connected, &pairs, 0, &mut m, &mut rem, &mut best);
    best
}

fn enumerate(
    deg: &[usize],
    twos: usize,
    connected: bool,
    pairs: &[(usize, usize)],
    idx: usize,
    m: &mut Vec<usize>,
    rem: &mut Vec<usize>,
    best: &mut Option<u64>,
) {
    if idx == pairs.len() {
        if rem.iter().all(|&r| r == 0) {
            if let Some(v) = evaluate(deg, twos, connected, pairs, m) {
                if best.is_none_or(|b| v > b) {
                    *best = Some(v);
                }
            }
        }
        return;
    }
    let (i, j) = pairs[idx];
    let max = if i == j { rem[i] / 2 } else { rem[i].min(rem[j]) };
    for c in 0..=max {
        if i == j {
            rem[i] -= 2 * c;
        } else {
            rem[i] -= c;
            rem[j] -= c;
        }
        m[idx] = c;
        let closes_row = idx + 1 == pairs.len() || pairs[idx + 1].0 != i;
        if !closes_row || rem[i] == 0 {
            enumerate(deg, twos, connected, pairs, idx + 1, m, rem, best);
        }
        if i == j {
            rem[i] += 2 * c;
        } else {
            rem[i] += c;
            rem[j] += c;
        }
    }
    m[idx] = 0;
}

fn evaluate(deg: &[usize], twos: usize, connected: bool, pairs: &[(usize, usize)], m: &[usize]) -> Option<u64> {
    let k = deg.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        if m[idx] > 0 {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    if connected && (0..k).any(|x| find(&mut parent, x) != root) {
        return None;
    }
    let d = |x: usize| deg[x] as i64;
    let mut need = 0usize;
    let mut chains = 0usize;
    let mut value: i64 = 0;
    let mut optional: Vec<i64> = Vec::new();
    let mut base_optional: i64 = 0;
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        let c = m[idx];
        if c == 0 {
            continue;
        }
        let chain = 2 * d(i) + 2 * d(j) - 4;
        if i == j {
            need += 2 * c;
            chains += c;
            value += c as i64 * chain;
        } else {
            need += c - 1;
            chains += c - 1;
            value += (c as i64 - 1) * chain;
            base_optional += d(i) * d(j);
            optional.push(chain - d(i) * d(j));
        }
    }
    if need > twos {
        return None;
    }
    optional.sort_unstable_by(|a, b| b.cmp(a));
    let mut spare = twos - need;
    value += base_optional;
    for (taken, &gain) in optional.iter().enumerate() {
        let forced = chains == 0 && twos > 0 && taken == 0;
        if spare == 0 || (gain <= 0 && !forced) {
            break;
        }
        value += gain;
        spare -= 1;
        chains += 1;
    }
    if twos > 0 && chains == 0 {
        return None;
    }
    Some(2 * (value + 4 * twos as i64) as u64)
}
