//! Fourier-space evolution for the uniform-field metric `g01 = −2 g x0`.
//!
//! The metric does not depend on `x1`, so every lattice plane wave evolves
//! independently. Each step multiplies mode `k` of `Φ⁻` by `exp(i e^θ sin k)`
//! and of `Φ⁺` by `exp(−i e^{−θ} sin k)`, then applies the coin with angle
//! `ε m cosh θ`, where `sinh θ = 2 g x0`. Transforms are a plain O(N²) DFT.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::lattice::CoinVariant;
use crate::walk::{AmplitudeFrame, AmplitudeTrace, StepTime, WalkState};

#[derive(Debug, Clone, PartialEq)]
pub struct FourierState {
    pub j: u64,
    pub eps: f64,
    /// `Φ̂(k_n) = N^{−1/2} Σ_p Φ_p e^{−i k_n p}`.
    pub hat_minus: Vec<Complex64>,
    pub hat_plus: Vec<Complex64>,
}

/// `e^{−2πi m/N}` for `m = 0..N`.
fn twiddles(n: usize) -> Vec<Complex64> {
    (0..n).map(|m| Complex64::from_polar(1.0, -2.0 * PI * m as f64 / n as f64)).collect()
}

fn dft(f: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = f.len();
    let tw = twiddles(n);
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|a| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, x) in f.iter().enumerate() {
                let w = tw[(a * b) % n];
                acc += x * if inverse { w.conj() } else { w };
            }
            acc * scale
        })
        .collect()
}

impl FourierState {
    pub fn from_state(state: &WalkState) -> Self {
        FourierState {
            j: state.j,
            eps: state.lattice.eps,
            hat_minus: dft(&state.phi_minus, false),
            hat_plus: dft(&state.phi_plus, false),
        }
    }

    /// Site amplitudes `(Φ⁻, Φ⁺)`.
    pub fn to_sites(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        (dft(&self.hat_minus, true), dft(&self.hat_plus, true))
    }

    pub fn norm(&self) -> f64 {
        self.hat_minus.iter().chain(&self.hat_plus).map(|z| z.norm_sqr()).sum()
    }
}

fn coin_entries(theta: f64, variant: CoinVariant) -> [[Complex64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    match variant {
        CoinVariant::Reflection => [[re(c), im(-s)], [im(s), re(-c)]],
        CoinVariant::DeterminantOne => [[re(c), im(-s)], [im(-s), re(c)]],
    }
}

/// One step of the uniform-field walk in Fourier space.
pub fn gem_fourier_step(state: &mut FourierState, g: f64, mass: f64, coin: CoinVariant, step_time: StepTime) {
    let n = state.hat_minus.len();
    let x0 = step_time.x0(state.j, state.eps);
    let theta = (2.0 * g * x0).asinh();
    let (fwd, bwd) = (theta.exp(), (-theta).exp());
    let c = coin_entries(state.eps * mass * theta.cosh(), coin);
    for i in 0..n {
        let sk = (2.0 * PI * i as f64 / n as f64).sin();
        let m = state.hat_minus[i] * Complex64::from_polar(1.0, fwd * sk);
        let p = state.hat_plus[i] * Complex64::from_polar(1.0, -bwd * sk);
        state.hat_minus[i] = c[0][0] * m + c[0][1] * p;
        state.hat_plus[i] = c[1][0] * m + c[1][1] * p;
    }
    state.j += 1;
}

/// Evolves `initial` for `n_steps`, keeping site amplitudes every `cadence`
/// steps starting with the initial state.
pub fn fourier_trajectory(
    initial: &WalkState,
    g: f64,
    mass: f64,
    coin: CoinVariant,
    step_time: StepTime,
    n_steps: u64,
    cadence: u64,
) -> AmplitudeTrace {
    let cadence = cadence.max(1);
    let mut state = FourierState::from_state(initial);
    let mut frames = Vec::new();
    for i in 0..=n_steps {
        if i > 0 {
            gem_fourier_step(&mut state, g, mass, coin, step_time);
        }
        if i % cadence == 0 {
            let (minus, plus) = state.to_sites();
            frames.push(AmplitudeFrame { j: state.j, minus, plus });
        }
    }
    AmplitudeTrace { n_sites: initial.lattice.n_sites, eps: initial.lattice.eps, frames }
}
