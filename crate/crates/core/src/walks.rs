//! Walk counts and the walk-series characteristic equation of joins.
//!
//! An ℓ-walk is a sequence of ℓ edges with shared endpoints, so
//! `w^(ℓ)(H) = 1ᵀ A^ℓ 1` and `w^(1)(H) = 2 e(H)`.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::{self, Neumaier};
use crate::spectral::matvec;

/// Representation used for a [`WalkProfile`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WalkMode {
    Exact,
    /// Stores `w^(ℓ) / s^ℓ` for the given scale `s > 0`.
    Scaled(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum WalkCounts {
    Exact(Vec<BigUint>),
    Scaled { scale: f64, counts: Vec<f64> },
}

/// `w^(1), …, w^(L)` of one graph. Index 0 holds `w^(1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkProfile {
    pub counts: WalkCounts,
}

impl WalkProfile {
    pub fn len(&self) -> usize {
        match &self.counts {
            WalkCounts::Exact(c) => c.len(),
            WalkCounts::Scaled { counts, .. } => counts.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Exact `w^(ℓ)`, `ℓ ≥ 1`.
    pub fn exact(&self, l: usize) -> Option<&BigUint> {
        match &self.counts {
            WalkCounts::Exact(c) => c.get(l.checked_sub(1)?),
            WalkCounts::Scaled { .. } => None,
        }
    }

    /// `w^(ℓ)` as a float (unscaled).
    pub fn approx(&self, l: usize) -> Option<f64> {
        let i = l.checked_sub(1)?;
        match &self.counts {
            WalkCounts::Exact(c) => c.get(i).map(big_to_f64),
            WalkCounts::Scaled { scale, counts } => counts.get(i).map(|&c| c * scale.powi(l as i32)),
        }
    }

    /// JSON array of decimal strings (exact) or numbers with the scale.
    pub fn to_json(&self) -> serde_json::Value {
        match &self.counts {
            WalkCounts::Exact(c) => serde_json::json!({
                "mode": "exact",
                "counts": c.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            }),
            WalkCounts::Scaled { scale, counts } => serde_json::json!({
                "mode": "scaled",
                "scale": scale,
                "counts": counts,
            }),
        }
    }
}

fn big_to_f64(x: &BigUint) -> f64 {
    x.to_string().parse().unwrap_or(f64::INFINITY)
}

/// Walk counts up to length `l_max`.
pub fn walk_counts(h: &Graph, l_max: usize, mode: WalkMode) -> Result<WalkProfile> {
    if l_max == 0 {
        return Err(Error::Domain("walk length must be at least 1".into()));
    }
    let counts = match mode {
        WalkMode::Exact => WalkCounts::Exact(exact_counts(h, l_max)),
        WalkMode::Scaled(s) => {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Domain(format!("scale must be positive, got {s}")));
            }
            let mut series = WalkSeries::new(h, s);
            series.extend_to(l_max);
            WalkCounts::Scaled {
                scale: s,
                counts: series.counts,
            }
        }
    };
    Ok(WalkProfile { counts })
}

fn exact_counts(h: &Graph, l_max: usize) -> Vec<BigUint> {
    let n = h.order();
    // u64 until a step could overflow, then arbitrary precision
    let mut small: Vec<u64> = vec![1; n];
    let mut out = Vec::with_capacity(l_max);
    let delta = h.max_degree() as u64;
    let mut bound: u64 = 1;
    let mut l = 0;
    while l < l_max {
        match bound.checked_mul(delta.max(1)).and_then(|b| b.checked_mul(n as u64).map(|_| b)) {
            Some(b) => {
                bound = b;
                small = (0..n).map(|u| h.neighbors(u).map(|v| small[v]).sum()).collect();
                out.push(BigUint::from(small.iter().sum::<u64>()));
                l += 1;
            }
            None => break,
        }
    }
    if l < l_max {
        let mut big: Vec<BigUint> = small.into_iter().map(BigUint::from).collect();
        while l < l_max {
            big = (0..n)
                .map(|u| h.neighbors(u).fold(BigUint::zero(), |acc, v| acc + &big[v]))
                .collect();
            out.push(big.iter().sum());
            l += 1;
        }
    }
    out
}

/// Scaled walk counts that can be extended on demand.
pub struct WalkSeries<'a> {
    graph: &'a Graph,
    scale: f64,
    vector: Vec<f64>,
    /// `w^(ℓ) / s^ℓ` for `ℓ = 1..=counts.len()`.
    pub counts: Vec<f64>,
    pub max_degree: usize,
}

impl<'a> WalkSeries<'a> {
    pub fn new(graph: &'a Graph, scale: f64) -> Self {
        WalkSeries {
            graph,
            scale,
            vector: vec![1.0; graph.order()],
            counts: Vec::new(),
            max_degree: graph.max_degree(),
        }
    }

    pub fn extend_to(&mut self, l: usize) {
        if self.counts.len() >= l || self.graph.size() == 0 {
            self.counts.resize(l.max(self.counts.len()), 0.0);
            return;
        }
        let mut next = vec![0.0; self.vector.len()];
        self.graph.with_csr(|a| {
            while self.counts.len() < l {
                matvec(a, &self.vector, &mut next);
                let inv = 1.0 / self.scale;
                next.iter_mut().for_each(|v| *v *= inv);
                std::mem::swap(&mut self.vector, &mut next);
                self.counts.push(numeric::sum(&self.vector));
            }
        });
    }

    /// `Σ_{ℓ≥1} w^(ℓ)/ρ^(ℓ+1)` and a bound on the neglected tail, extending
    /// the series until the tail is below `rel` times the partial sum.
    pub fn generating_value(&mut self, rho: f64, rel: f64, max_len: usize) -> Result<(f64, f64)> {
        if self.graph.size() == 0 {
            return Ok((0.0, 0.0));
        }
        let delta = self.max_degree as f64;
        if delta >= rho {
            return Err(Error::DivergentSeries {
                max_degree: self.max_degree,
                rho,
            });
        }
        let q = self.scale / rho;
        let mut acc = Neumaier::default();
        let mut power = 1.0;
        let mut l = 0;
        loop {
            if l == self.counts.len() {
                self.extend_to((2 * l).clamp(8, max_len.max(1)));
            }
            power *= q;
            let term = self.counts[l] * power / rho;
            acc.add(term);
            l += 1;
            // tail beyond ℓ = l: w^(l) Δ / (ρ^(l+2) (1 − Δ/ρ))
            let tail = term * delta / (rho * (1.0 - delta / rho));
            if tail <= rel * acc.value() || l >= max_len {
                return Ok((acc.value(), tail));
            }
        }
    }
}

/// `w^(2)` and `w^(3)` both equal their degree closed forms.
pub fn check_w2_w3(h: &Graph) -> bool {
    let p = walk_counts(h, 3, WalkMode::Exact).expect("length 3 is valid");
    let d = h.degrees();
    let w2: u128 = d.iter().map(|&x| (x * x) as u128).sum();
    let w3: u128 = h.edges().map(|(u, v)| 2 * (d[u] * d[v]) as u128).sum();
    p.exact(2) == Some(&BigUint::from(w2)) && p.exact(3) == Some(&BigUint::from(w3))
}

/// Outcome of comparing two walk profiles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WalkComparison {
    /// Profiles agree through `Lmax`. `conclusive` is set when `Lmax ≥ 2n − 1`,
    /// in which case the profiles agree at every length.
    Equal { conclusive: bool },
    /// First index where the counts differ; `sign` is +1 when the first graph
    /// has more walks.
    FirstDiffers { k: usize, sign: i8 },
}

/// First length `k ≤ l_max` at which the walk counts differ.
///
/// Both sequences `1ᵀA^ℓ1` satisfy the characteristic recurrence of their
/// adjacency matrix, so their difference satisfies one of order at most
/// `2n`; agreement for `ℓ = 0..2n−1` forces agreement everywhere.
pub fn walk_compare(h1: &Graph, h2: &Graph, l_max: usize) -> Result<WalkComparison> {
    if h1.order() != h2.order() {
        return Err(Error::Domain(format!(
            "orders differ: {} and {}",
            h1.order(),
            h2.order()
        )));
    }
    if l_max == 0 {
        return Ok(WalkComparison::Equal { conclusive: h1.order() == 0 });
    }
    let a = exact_counts(h1, l_max);
    let b = exact_counts(h2, l_max);
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        if x != y {
            let sign = if x > y { 1 } else { -1 };
            return Ok(WalkComparison::FirstDiffers { k: i + 1, sign });
        }
    }
    Ok(WalkComparison::Equal {
        conclusive: l_max + 1 >= 2 * h1.order(),
    })
}

/// One class of a join: `size` vertices carrying the edges of `graph`.
#[derive(Clone, Copy, Debug)]
pub struct JoinPart<'a> {
    pub size: usize,
    pub graph: Option<&'a Graph>,
}

impl<'a> JoinPart<'a> {
    pub fn independent(size: usize) -> Self {
        JoinPart { size, graph: None }
    }

    pub fn with_graph(size: usize, graph: &'a Graph) -> Self {
        JoinPart {
            size,
            graph: Some(graph),
        }
    }
}

/// Value of `Σ_i 1/(1 + n_i/ρ + S_i(ρ)) − (r − 1)` with an error bound.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZhangValue {
    pub value: f64,
    pub error_bound: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZhangSolution {
    pub rho: f64,
    pub bracket: (f64, f64),
    pub bisection_steps: usize,
    /// Bound on the equation residual from series truncation and rounding.
    pub equation_error: f64,
}

/// Evaluator for the characteristic equation of a join.
pub struct ZhangEquation<'a> {
    sizes: Vec<usize>,
    series: Vec<Option<WalkSeries<'a>>>,
    max_len: usize,
}

const SERIES_REL: f64 = 1e-18;

impl<'a> ZhangEquation<'a> {
    pub fn new(parts: &[JoinPart<'a>]) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::Domain("a join needs at least two parts".into()));
        }
        let mut series = Vec::with_capacity(parts.len());
        for p in parts {
            if p.size == 0 {
                return Err(Error::Domain("every part needs at least one vertex".into()));
            }
            match p.graph {
                Some(g) if g.order() > p.size => {
                    return Err(Error::Domain(format!(
                        "part graph has {} vertices but the class has {}",
                        g.order(),
                        p.size
                    )))
                }
                Some(g) if g.size() > 0 => {
                    let s = g.max_degree().max(1) as f64;
                    series.push(Some(WalkSeries::new(g, s)));
                }
                _ => series.push(None),
            }
        }
        Ok(ZhangEquation {
            sizes: parts.iter().map(|p| p.size).collect(),
            series,
            max_len: 1 << 20,
        })
    }

    /// Largest maximum degree over the parts.
    pub fn max_degree(&self) -> usize {
        self.series
            .iter()
            .flatten()
            .map(|s| s.max_degree)
            .max()
            .unwrap_or(0)
    }

    /// The equation's left side minus `r − 1`; increasing in `ρ`.
    ///
    /// Written as `t_k − Σ_{i≠k} a_i/(1+a_i)` with `k` the class of largest
    /// `a_i`, which avoids cancelling terms of size one.
    pub fn evaluate(&mut self, rho: f64) -> Result<ZhangValue> {
        if !(rho > 0.0) {
            return Err(Error::Domain(format!("rho must be positive, got {rho}")));
        }
        let r = self.sizes.len();
        let mut a = Vec::with_capacity(r);
        let mut tails = Vec::with_capacity(r);
        for i in 0..r {
            let (s, tail) = match self.series[i].as_mut() {
                Some(series) => series.generating_value(rho, SERIES_REL, self.max_len)?,
                None => (0.0, 0.0),
            };
            a.push(self.sizes[i] as f64 / rho + s);
            tails.push(tail);
        }
        let k = (0..r)
            .max_by(|&x, &y| a[x].total_cmp(&a[y]))
            .expect("at least two parts");
        let mut acc = Neumaier::default();
        acc.add(1.0 / (1.0 + a[k]));
        let mut magnitude = 1.0 / (1.0 + a[k]);
        let mut error = 0.0;
        for i in 0..r {
            let t = 1.0 / (1.0 + a[i]);
            error += tails[i] * t * t;
            if i != k {
                let c = a[i] / (1.0 + a[i]);
                acc.add(-c);
                magnitude += c;
            }
        }
        error += 8.0 * f64::EPSILON * magnitude;
        Ok(ZhangValue {
            value: acc.value(),
            error_bound: error,
        })
    }
}

/// Root of the characteristic equation of a join by bisection.
///
/// The bracket starts at `max Δ(H_i) + 1` (or `1/2` when no class carries
/// edges) and ends at the total order.
pub fn zhang_rho(parts: &[JoinPart<'_>], tol: f64) -> Result<ZhangSolution> {
    let eq = ZhangEquation::new(parts)?;
    let delta = eq.max_degree();
    let any_edges = parts.iter().any(|p| p.graph.is_some_and(|g| g.size() > 0));
    let lo = if any_edges { delta as f64 + 1.0 } else { 0.5 };
    let hi: f64 = parts.iter().map(|p| p.size as f64).sum();
    solve_bracket(eq, lo, hi, tol)
}

/// Bisection on a caller-supplied bracket.
pub fn zhang_rho_in(parts: &[JoinPart<'_>], lo: f64, hi: f64, tol: f64) -> Result<ZhangSolution> {
    let eq = ZhangEquation::new(parts)?;
    let delta = eq.max_degree();
    if delta > 0 && lo <= delta as f64 {
        return Err(Error::DivergentSeries {
            max_degree: delta,
            rho: lo,
        });
    }
    solve_bracket(eq, lo, hi, tol)
}

fn solve_bracket(mut eq: ZhangEquation<'_>, lo: f64, hi: f64, tol: f64) -> Result<ZhangSolution> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if !(lo < hi) {
        return Err(Error::Bracket(format!("empty bracket [{lo}, {hi}]")));
    }
    let f_lo = eq.evaluate(lo)?;
    if f_lo.value > 0.0 {
        return Err(Error::Bracket(format!(
            "the root lies below the low end {lo} required for series convergence"
        )));
    }
    let f_hi = eq.evaluate(hi)?;
    if f_hi.value < 0.0 {
        return Err(Error::Bracket(format!("the root lies above {hi}")));
    }
    let (mut a, mut b) = (lo, hi);
    let mut steps = 0;
    let mut err = f_lo.error_bound.max(f_hi.error_bound);
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let v = eq.evaluate(m)?;
        err = err.max(v.error_bound);
        steps += 1;
        if v.value < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(ZhangSolution {
        rho: 0.5 * (a + b),
        bracket: (lo, hi),
        bisection_steps: steps,
        equation_error: err,
    })
}
