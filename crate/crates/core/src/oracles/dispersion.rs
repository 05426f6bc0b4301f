//! One-step quasi-energies of the walk on the flat metric.
//!
//! On a plane wave `e^{ikp}` the massless shifts act as `diag(e^{i sin k}, e^{−i sin k})`
//! and the coin mixes the two components. The eigenvalues of that 2×2 symbol
//! give the lattice dispersion relation.

use num_complex::Complex64;

use crate::error::Result;
use crate::lattice::CoinVariant;
use crate::walk::{WalkState, Walker};

/// Eigenphases of the one-step symbol at lattice wavenumber `k` with coin angle `θ = ε m`.
///
/// The determinant-one coin gives `±ω` with `cos ω = cos θ cos(sin k)`. The
/// literal coin has determinant −1, so its eigenphases differ by `π` at `k = 0`.
pub fn dispersion_omega(k: f64, theta_m: f64, variant: CoinVariant) -> [f64; 2] {
    let (s, c) = (k.sin().sin(), k.sin().cos());
    let ct = theta_m.cos();
    match variant {
        CoinVariant::DeterminantOne => {
            let w = (ct * c).clamp(-1.0, 1.0).acos();
            [w, -w]
        }
        CoinVariant::Reflection => {
            let half_trace = Complex64::new(0.0, ct * s);
            let root = Complex64::new((1.0 - ct * ct * s * s).max(0.0).sqrt(), 0.0);
            [(half_trace + root).arg(), (half_trace - root).arg()]
        }
    }
}

/// `√(κ² + m²)`.
pub fn continuum_omega(kappa: f64, mass: f64) -> f64 {
    kappa.hypot(mass)
}

/// The 2×2 matrix the walker applies to mode `n`, measured by stepping
/// a plane wave in each component and projecting back onto that mode.
pub fn measure_symbol(walker: &mut Walker, n: usize) -> Result<[[Complex64; 2]; 2]> {
    let l = walker.lattice;
    let k = l.wavenumber(n);
    let wave: Vec<Complex64> = (0..l.n_sites).map(|p| Complex64::from_polar(1.0, k * p as f64)).collect();
    let zero = vec![Complex64::new(0.0, 0.0); l.n_sites];
    let project = |f: &[Complex64]| -> Complex64 {
        f.iter().zip(&wave).map(|(a, w)| a * w.conj()).sum::<Complex64>() / l.n_sites as f64
    };
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    let inputs = [(wave.clone(), zero.clone()), (zero, wave.clone())];
    for (col, (m, p)) in inputs.into_iter().enumerate() {
        let mut s = WalkState::from_components(l, m, p)?;
        walker.step(&mut s)?;
        out[0][col] = project(&s.phi_minus);
        out[1][col] = project(&s.phi_plus);
    }
    Ok(out)
}

/// Phases of the two eigenvalues of a 2×2 matrix.
pub fn measure_eigenphases(symbol: &[[Complex64; 2]; 2]) -> [f64; 2] {
    let tr = symbol[0][0] + symbol[1][1];
    let det = symbol[0][0] * symbol[1][1] - symbol[0][1] * symbol[1][0];
    let disc = (tr * tr / 4.0 - det).sqrt();
    [(tr / 2.0 + disc).arg(), (tr / 2.0 - disc).arg()]
}

/// Half the eigenphase gap on the unit circle; `ω` for the determinant-one coin.
pub fn measured_omega(symbol: &[[Complex64; 2]; 2]) -> f64 {
    let [a, b] = measure_eigenphases(symbol);
    let gap = Complex64::from_polar(1.0, a - b).arg().abs();
    gap / 2.0
}
