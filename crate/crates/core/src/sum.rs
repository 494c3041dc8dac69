//! Compensated accumulation and the fixed-partition parallel reduction used
//! by every zero sum.
//!
//! Results never depend on the number of worker threads: terms are grouped
//! into blocks of [`BLOCK`] consecutive indices, each block is accumulated
//! sequentially, and the block partials are combined by a pairwise tree whose
//! shape depends only on the number of blocks.

use num_complex::Complex64;
use rayon::prelude::*;

/// Number of consecutive indices accumulated sequentially per block.
pub const BLOCK: usize = 64;

/// Neumaier (improved Kahan-Babuska) accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

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

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Complex counterpart of [`Neumaier`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexNeumaier {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexNeumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Sum of `term(i)` for `i` in `0..n`, bit-identical for any thread count.
pub fn block_sum<F>(n: usize, term: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let blocks: Vec<usize> = (0..n.div_ceil(BLOCK)).collect();
    let partials: Vec<Complex64> = blocks
        .par_iter()
        .map(|&b| {
            let mut acc = ComplexNeumaier::new();
            for i in b * BLOCK..((b + 1) * BLOCK).min(n) {
                acc.add(term(i));
            }
            acc.value()
        })
        .collect();
    pairwise(&partials)
}

/// Like [`block_sum`] but each index may contribute a tuple of accumulators,
/// e.g. a value and a count of included terms.
pub fn block_fold<T, F, G>(n: usize, init: T, term: F, merge: G) -> T
where
    T: Clone + Send + Sync,
    F: Fn(&mut T, usize) + Sync,
    G: Fn(&T, &T) -> T + Sync,
{
    let blocks: Vec<usize> = (0..n.div_ceil(BLOCK)).collect();
    let partials: Vec<T> = blocks
        .par_iter()
        .map(|&b| {
            let mut acc = init.clone();
            for i in b * BLOCK..((b + 1) * BLOCK).min(n) {
                term(&mut acc, i);
            }
            acc
        })
        .collect();
    pairwise_by(&partials, &init, &merge)
}

fn pairwise(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        n => pairwise(&xs[..n / 2]) + pairwise(&xs[n / 2..]),
    }
}

fn pairwise_by<T: Clone, G: Fn(&T, &T) -> T>(xs: &[T], init: &T, merge: &G) -> T {
    match xs.len() {
        0 => init.clone(),
        1 => xs[0].clone(),
        n => merge(&pairwise_by(&xs[..n / 2], init, merge), &pairwise_by(&xs[n / 2..], init, merge)),
    }
}

/// Runs `f` on a dedicated pool with `workers` threads (0 = rayon default).
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
