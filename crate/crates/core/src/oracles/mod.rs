//! Reference computations kept independent of the walk's own operator
//! construction: they work from closed forms and a plain DFT.

pub mod characteristic;
pub mod dispersion;
pub mod fourier;

pub use characteristic::{branch_velocity, characteristic_position, gem_rapidity, write_oracle_csv, Branch, CharacteristicCurve};
pub use dispersion::{continuum_omega, dispersion_omega, measure_eigenphases, measure_symbol, measured_omega};
pub use fourier::{fourier_trajectory, gem_fourier_step, FourierState};

use crate::error::{Error, Result};
use crate::walk::AmplitudeTrace;

/// `max_{j,p} |Φ^A − Φ^B|` over both components of two traces taken at the same steps.
pub fn lattice_vs_fourier(a: &AmplitudeTrace, b: &AmplitudeTrace) -> Result<f64> {
    if a.n_sites != b.n_sites || a.eps != b.eps {
        return Err(Error::ConfigMismatch(format!(
            "lattices differ: ({}, {}) vs ({}, {})",
            a.n_sites, a.eps, b.n_sites, b.eps
        )));
    }
    if a.frames.len() != b.frames.len() {
        return Err(Error::ConfigMismatch(format!("{} frames vs {}", a.frames.len(), b.frames.len())));
    }
    let mut worst: f64 = 0.0;
    for (fa, fb) in a.frames.iter().zip(&b.frames) {
        if fa.j != fb.j {
            return Err(Error::ConfigMismatch(format!("frame at step {} paired with step {}", fa.j, fb.j)));
        }
        for (x, y) in fa.minus.iter().zip(&fb.minus).chain(fa.plus.iter().zip(&fb.plus)) {
            worst = worst.max((x - y).norm());
        }
    }
    Ok(worst)
}
