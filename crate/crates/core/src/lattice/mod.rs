//! Discrete shift operators on a periodic lattice and the site-local mass coin.
//!
//! A site index `p` corresponds to `x1 = p ε` and a step index `j` to
//! `x0 = j ε`. Indices wrap modulo the number of sites.

pub mod coin;
pub mod spectral;
pub mod stencil;
pub mod unitary;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use coin::{coin_matrix, CoinMatrix, CoinVariant};
pub use stencil::{affine_defect, affine_is_unitary, antisymmetric_part, antisymmetrize, assemble_stencil, Direction, SkewOperator, StencilOperator};
pub use unitary::{unitarize, Flavor, OperatorPath, ShiftUnitary, StepUnitary, Strategy, UnitarizeOptions};

/// Tolerance used to decide whether `1 + L_D` is admissible as a step operator.
pub const AFFINE_TOL: f64 = 1e-12;

/// Sites above which dense operators are refused unless the cap is raised.
pub const DEFAULT_DENSE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub n_sites: usize,
    /// Shared time step and lattice spacing.
    pub eps: f64,
}

impl LatticeSpec {
    pub fn new(n_sites: usize, eps: f64) -> Result<Self> {
        if n_sites < 4 {
            return Err(Error::Lattice(format!("nSites = {n_sites}, need at least 4")));
        }
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::Lattice(format!("eps = {eps} must be finite and positive")));
        }
        Ok(LatticeSpec { n_sites, eps })
    }

    pub fn x1(&self, p: usize) -> f64 {
        p as f64 * self.eps
    }

    pub fn x0(&self, j: u64) -> f64 {
        j as f64 * self.eps
    }

    /// Lattice wavenumber `k_n = 2πn/N`.
    pub fn wavenumber(&self, n: usize) -> f64 {
        2.0 * std::f64::consts::PI * n as f64 / self.n_sites as f64
    }
}

/// Induced ∞-norm (largest absolute row sum) of `U†U − I`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let g = u.adjoint() * u;
    let n = g.nrows();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let d = if r == c { g[(r, c)] - 1.0 } else { g[(r, c)] };
                    d.norm()
                })
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}
