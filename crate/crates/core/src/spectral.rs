//! Spectral radius, Perron vector, closed forms and bound envelopes.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Csr, CsrView, Graph};
use crate::numeric::{self, Neumaier};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_MATVECS: usize = 1_000_000;

/// Largest adjacency eigenvalue with its Perron vector.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralResult {
    pub rho: f64,
    /// Non-negative, largest entry exactly 1.
    pub perron: Vec<f64>,
    /// `‖A x − rho x‖∞` for the returned vector.
    pub residual: f64,
    /// Matrix-vector products performed.
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_matvecs: usize,
    /// Krylov steps per restart.
    pub krylov_dim: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DEFAULT_TOL,
            max_matvecs: MAX_MATVECS,
            krylov_dim: 48,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolverOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Spectral radius to relative residual `tol`.
pub fn spectral_radius(g: &Graph, tol: f64) -> Result<SpectralResult> {
    spectral_radius_with(g, &SolverOptions::with_tol(tol))
}

/// Restarted Lanczos from the all-ones vector.
///
/// Each restart runs `krylov_dim` steps without reorthogonalization, keeping
/// only three vectors; the Ritz vector is rebuilt by replaying the
/// recurrence. Three restarts without progress halve the number of steps.
/// The result is accepted once `‖A x − θ x‖∞ ≤ tol·max(1, θ)`
/// for `x` scaled to unit maximum. Components are solved separately.
pub fn spectral_radius_with(g: &Graph, opts: &SolverOptions) -> Result<SpectralResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let n = g.order();
    if n == 0 {
        return Err(Error::EmptyOrder);
    }
    if g.size() == 0 {
        let mut perron = vec![0.0; n];
        perron[0] = 1.0;
        return Ok(SpectralResult {
            rho: 0.0,
            perron,
            residual: 0.0,
            iterations: 0,
        });
    }
    let comps = g.components();
    if comps.len() == 1 {
        return g.with_csr(|a| lanczos(a, opts));
    }
    let mut best: Option<(SpectralResult, &Vec<usize>)> = None;
    let mut spent = 0;
    for comp in comps.iter().filter(|c| c.len() > 1) {
        let sub = component_csr(g, comp);
        let mut o = *opts;
        o.max_matvecs = opts.max_matvecs.saturating_sub(spent);
        let r = lanczos(sub.view(), &o)?;
        spent += r.iterations;
        if best.as_ref().is_none_or(|(b, _)| r.rho > b.rho) {
            best = Some((r, comp));
        }
    }
    let (r, comp) = best.expect("graph has an edge");
    let mut perron = vec![0.0; n];
    for (i, &v) in comp.iter().enumerate() {
        perron[v] = r.perron[i];
    }
    Ok(SpectralResult {
        perron,
        iterations: spent,
        ..r
    })
}

fn component_csr(g: &Graph, comp: &[usize]) -> Csr {
    let mut index = vec![u32::MAX; g.order()];
    for (i, &v) in comp.iter().enumerate() {
        index[v] = i as u32;
    }
    let mut offsets = Vec::with_capacity(comp.len() + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for &v in comp {
        targets.extend(g.neighbors(v).map(|u| index[u]));
        offsets.push(targets.len());
    }
    Csr { offsets, targets }
}

/// `y = A x` with compensated row sums.
pub fn matvec(a: CsrView<'_>, x: &[f64], y: &mut [f64]) {
    let row = |v: usize| {
        let mut acc = Neumaier::default();
        for &u in a.row(v) {
            acc.add(x[u as usize]);
        }
        acc.value()
    };
    if y.len() >= 1 << 16 {
        y.par_chunks_mut(numeric::CHUNK)
            .enumerate()
            .for_each(|(c, out)| {
                let base = c * numeric::CHUNK;
                for (i, o) in out.iter_mut().enumerate() {
                    *o = row(base + i);
                }
            });
    } else {
        for (v, o) in y.iter_mut().enumerate() {
            *o = row(v);
        }
    }
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_iter_mut().zip(x.par_iter()).for_each(|(b, &a)| *b += alpha * a);
}

fn scale(alpha: f64, x: &mut [f64]) {
    x.par_iter_mut().for_each(|v| *v *= alpha);
}

struct Sweep {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

/// One Lanczos run from unit vector `q0`. With `coeffs = Some(s)` the Ritz
/// combination `Σ s_j q_j` is accumulated into `out`.
fn lanczos_sweep(
    a: CsrView<'_>,
    q0: &[f64],
    steps: usize,
    replay: Option<(&[f64], &mut [f64])>,
    matvecs: &mut usize,
) -> Sweep {
    let n = q0.len();
    let mut q_prev = vec![0.0; n];
    let mut q = q0.to_vec();
    let mut w = vec![0.0; n];
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let (coeffs, out) = match replay {
        Some((c, o)) => (Some(c), Some(o)),
        None => (None, None),
    };
    let mut out = out;
    let mut anorm = 0.0f64;
    for j in 0..steps {
        if let (Some(c), Some(o)) = (coeffs, out.as_deref_mut()) {
            axpy(c[j], &q, o);
            if j + 1 == c.len() {
                break;
            }
        }
        matvec(a, &q, &mut w);
        *matvecs += 1;
        let al = numeric::dot(&q, &w);
        axpy(-al, &q, &mut w);
        if let Some(&b) = beta.last() {
            axpy(-b, &q_prev, &mut w);
        }
        alpha.push(al);
        let b = numeric::norm2(&w);
        anorm = anorm.max(al.abs() + b);
        if j + 1 == steps || b <= 8.0 * f64::EPSILON * anorm.max(1.0) {
            break;
        }
        beta.push(b);
        scale(1.0 / b, &mut w);
        std::mem::swap(&mut q_prev, &mut q);
        std::mem::swap(&mut q, &mut w);
    }
    Sweep { alpha, beta }
}

fn largest_ritz(sweep: &Sweep) -> (f64, Vec<f64>) {
    let m = sweep.alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = sweep.alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = sweep.beta[i];
            t[(i + 1, i)] = sweep.beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let k = eig.eigenvalues.imax();
    let s = eig.eigenvectors.column(k).iter().copied().collect();
    (eig.eigenvalues[k], s)
}

fn lanczos(a: CsrView<'_>, opts: &SolverOptions) -> Result<SpectralResult> {
    let n = a.order();
    let mut steps = opts.krylov_dim.clamp(2, n.max(2));
    let mut stale = 0;
    let mut q0 = vec![1.0 / (n as f64).sqrt(); n];
    let mut matvecs = 0usize;
    let mut best: Option<(f64, f64)> = None;
    let mut ax = vec![0.0; n];
    loop {
        let sweep = lanczos_sweep(a, &q0, steps, None, &mut matvecs);
        let (_, s) = largest_ritz(&sweep);
        let mut x = vec![0.0; n];
        lanczos_sweep(a, &q0, steps, Some((&s, &mut x)), &mut matvecs);
        if numeric::sum(&x) < 0.0 {
            scale(-1.0, &mut x);
        }
        let top = x.iter().fold(0.0f64, |m, &v| m.max(v));
        scale(1.0 / top, &mut x);
        matvec(a, &x, &mut ax);
        matvecs += 1;
        let rho = numeric::dot(&x, &ax) / numeric::dot(&x, &x);
        let residual = ax
            .par_iter()
            .zip(x.par_iter())
            .map(|(&y, &v)| (y - rho * v).abs())
            .reduce(|| 0.0, f64::max);
        if best.is_none_or(|(_, r)| residual < r) {
            best = Some((rho, residual));
            stale = 0;
        } else {
            stale += 1;
        }
        if residual <= opts.tol * rho.max(1.0) {
            for v in x.iter_mut() {
                if *v < 0.0 && *v > -opts.tol {
                    *v = 0.0;
                }
            }
            return Ok(SpectralResult {
                rho,
                perron: x,
                residual,
                iterations: matvecs,
            });
        }
        // long runs amplify rounding near convergence; shorten them when stuck
        if stale >= 3 {
            stale = 0;
            if steps == 2 {
                let (best, residual) = best.expect("at least one restart");
                return Err(Error::NonConvergence {
                    best,
                    residual,
                    iterations: matvecs,
                });
            }
            steps = (steps / 2).max(2);
        }
        if matvecs + 2 * steps + 1 > opts.max_matvecs {
            let (best, residual) = best.expect("at least one restart");
            return Err(Error::NonConvergence {
                best,
                residual,
                iterations: matvecs,
            });
        }
        let norm = numeric::norm2(&x);
        q0 = x;
        scale(1.0 / norm, &mut q0);
    }
}

/// ρ(K₂ ∇ (n−2)K₁) = (1 + √(8n − 15)) / 2.
pub fn rho_complete_split(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("need n >= 3, got {n}")));
    }
    Ok((1.0 + (8.0 * n as f64 - 15.0).sqrt()) / 2.0)
}

/// ρ₀ = 3/2 + √(2n − 15/4), the spectral radius of K₂ ∇ C_{n−2}.
pub fn rho0(n: usize) -> Result<f64> {
    if n < 5 {
        return Err(Error::Domain(format!("need n >= 5, got {n}")));
    }
    Ok(1.5 + (2.0 * n as f64 - 3.75).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundEnvelope {
    pub rho0: f64,
    /// ρ₀ + (3γ − 1)/n
    pub lower: f64,
    /// ρ₀ + (3γ − 0.95)/n
    pub upper: f64,
    /// 2 + √(2n + 8γ − 6)
    pub ellingham_zha: f64,
    /// Order from which the two-sided bound is proved: 50(300 + 180γ + 24γ²)².
    pub n_threshold: u128,
}

pub fn bounds(n: usize, gamma: usize) -> Result<BoundEnvelope> {
    let r0 = rho0(n)?;
    let nf = n as f64;
    let g = gamma as f64;
    let a = 300 + 180 * gamma as u128 + 24 * (gamma as u128).pow(2);
    Ok(BoundEnvelope {
        rho0: r0,
        lower: r0 + (3.0 * g - 1.0) / nf,
        upper: r0 + (3.0 * g - 0.95) / nf,
        ellingham_zha: 2.0 + (2.0 * nf + 8.0 * g - 6.0).sqrt(),
        n_threshold: 50 * a * a,
    })
}

/// First-order change of the Rayleigh quotient `xᵀAx / xᵀx` when the edges
/// in `add` are inserted and those in `del` removed.
pub fn rayleigh_delta(
    g: &Graph,
    x: &[f64],
    add: &[(usize, usize)],
    del: &[(usize, usize)],
) -> Result<f64> {
    let n = g.order();
    if x.len() != n {
        return Err(Error::Contract(format!("vector has length {}, graph has order {n}", x.len())));
    }
    if x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Contract("vector must be positive".into()));
    }
    let check = |u: usize, v: usize| -> Result<()> {
        for w in [u, v] {
            if w >= n {
                return Err(Error::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        Ok(())
    };
    let mut acc = Neumaier::default();
    for &(u, v) in add {
        check(u, v)?;
        if g.has_edge(u, v) {
            return Err(Error::Contract(format!("added edge {u}-{v} already present")));
        }
        acc.add_product(x[u], x[v]);
    }
    for &(u, v) in del {
        check(u, v)?;
        if !g.has_edge(u, v) {
            return Err(Error::Contract(format!("deleted edge {u}-{v} not present")));
        }
        acc.add_product(-x[u], x[v]);
    }
    Ok(2.0 * acc.value() / numeric::dot(x, x))
}
