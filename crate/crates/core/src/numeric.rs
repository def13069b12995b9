//! Compensated floating-point summation.
//!
//! Reductions over long vectors are split into fixed-size chunks so results
//! do not depend on the number of worker threads.

use rayon::prelude::*;

/// Chunk length for deterministic parallel reductions.
pub const CHUNK: usize = 1 << 14;

/// Neumaier's improved Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Adds `a * b` including the rounding error of the product.
    #[inline]
    pub fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        let e = a.mul_add(b, -p);
        self.add(p);
        self.comp += e;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn reduce(parts: impl Iterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::default();
    parts.for_each(|p| acc.add(p));
    acc.value()
}

pub fn sum(x: &[f64]) -> f64 {
    let parts: Vec<f64> = x
        .par_chunks(CHUNK)
        .map(|c| {
            let mut acc = Neumaier::default();
            c.iter().for_each(|&v| acc.add(v));
            acc.value()
        })
        .collect();
    reduce(parts.into_iter())
}

/// Dot product with error-free product transformation.
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let parts: Vec<f64> = x
        .par_chunks(CHUNK)
        .zip(y.par_chunks(CHUNK))
        .map(|(a, b)| {
            let mut acc = Neumaier::default();
            for (&p, &q) in a.iter().zip(b) {
                acc.add_product(p, q);
            }
            acc.value()
        })
        .collect();
    reduce(parts.into_iter())
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// `x` rounded to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}
