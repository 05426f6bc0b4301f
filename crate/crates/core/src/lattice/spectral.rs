//! Fourier-space application of site-independent shift operators.
//!
//! Mode `n` is the lattice plane wave `e^{i k_n p}` with `k_n = 2πn/N`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Clone)]
pub struct FftPair {
    pub forward: Arc<dyn Fft<f64>>,
    pub inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FftPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FftPair({})", self.forward.len())
    }
}

type PlanCache = Mutex<(FftPlanner<f64>, HashMap<usize, FftPair>)>;

/// Plans are shared process-wide; planning the same size twice returns the cached pair.
pub fn plans(n: usize) -> FftPair {
    static CACHE: OnceLock<PlanCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    let (planner, map) = &mut *guard;
    map.entry(n)
        .or_insert_with(|| FftPair { forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) })
        .clone()
}

/// Eigenvalues `exp(2i b sin k_n)` of `exp(L̄)` for a uniform coupling `b`.
/// For a stencil with constant coefficient `a`, `b = a/2` and the multiplier is `exp(i a sin k)`.
pub fn skew_multipliers(coupling: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|m| {
            let k = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
            Complex64::from_polar(1.0, 2.0 * coupling * k.sin())
        })
        .collect()
}

/// Multiplies each Fourier mode of `data` by `mult` in place.
pub fn apply_multipliers(data: &mut [Complex64], mult: &[Complex64], fft: &FftPair) {
    let n = data.len();
    fft.forward.process(data);
    let scale = 1.0 / n as f64;
    for (x, m) in data.iter_mut().zip(mult) {
        *x *= m * scale;
    }
    fft.inverse.process(data);
}

/// Dense circulant matrix `F⁻¹ diag(mult) F`.
pub fn circulant(mult: &[Complex64]) -> DMatrix<Complex64> {
    let n = mult.len();
    let column = first_column(mult);
    DMatrix::from_fn(n, n, |r, c| column[(r + n - c) % n])
}

/// First column of the circulant with eigenvalues `mult`.
pub fn first_column(mult: &[Complex64]) -> Vec<Complex64> {
    let n = mult.len();
    let mut col = mult.to_vec();
    plans(n).inverse.process(&mut col);
    col.iter_mut().for_each(|x| *x /= n as f64);
    col
}
