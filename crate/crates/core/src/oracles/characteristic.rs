//! Null characteristics of `ds² = dx0² − 4 g x0 dx0 dx1 − dx1²`.
//!
//! The light-cone velocities solve `v² + 4 g x0 v − 1 = 0`. With
//! `sinh θ = 2 g x0` the roots are `e^{−θ}` (plus branch) and `−e^{θ}`
//! (minus branch); the positions below integrate them from `x0 = 0`.

use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Advected by `Φ⁺`, velocity `λ + c = e^{−θ}`.
    Plus,
    /// Advected by `Φ⁻`, velocity `λ − c = −e^{θ}`.
    Minus,
}

/// Rapidity `θ` with `sinh θ = 2 g x0`.
pub fn gem_rapidity(g: f64, x0: f64) -> f64 {
    (2.0 * g * x0).asinh()
}

pub fn branch_velocity(branch: Branch, g: f64, x0: f64) -> f64 {
    let theta = gem_rapidity(g, x0);
    match branch {
        Branch::Plus => (-theta).exp(),
        Branch::Minus => -theta.exp(),
    }
}

/// Position on the characteristic through `(0, x1_0)` at time `x0`.
pub fn characteristic_position(branch: Branch, g: f64, x0: f64, x1_0: f64) -> f64 {
    if g == 0.0 {
        return match branch {
            Branch::Plus => x1_0 + x0,
            Branch::Minus => x1_0 - x0,
        };
    }
    let theta = gem_rapidity(g, x0);
    // Both bracket terms share the sign of θ, so the small-g limit loses no digits.
    match branch {
        Branch::Plus => x1_0 + (theta - 0.5 * (-2.0 * theta).exp_m1()) / (4.0 * g),
        Branch::Minus => x1_0 - (theta + 0.5 * (2.0 * theta).exp_m1()) / (4.0 * g),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicCurve {
    pub branch: Branch,
    pub g: f64,
    pub x1_0: f64,
}

impl CharacteristicCurve {
    pub fn position(&self, x0: f64) -> f64 {
        characteristic_position(self.branch, self.g, x0, self.x1_0)
    }

    pub fn velocity(&self, x0: f64) -> f64 {
        branch_velocity(self.branch, self.g, x0)
    }
}

/// Writes `x0,x1Plus,x1Minus` rows for the given times.
pub fn write_oracle_csv<W: Write>(
    mut w: W,
    plus: &CharacteristicCurve,
    minus: &CharacteristicCurve,
    times: impl IntoIterator<Item = f64>,
) -> io::Result<()> {
    writeln!(w, "# gqw-oracle v1 g={}", plus.g)?;
    writeln!(w, "x0,x1Plus,x1Minus")?;
    for t in times {
        writeln!(w, "{},{},{}", t, plus.position(t), minus.position(t))?;
    }
    Ok(())
}
