//! Generalized discrete-time quantum walks that simulate massless and massive
//! Dirac fermions in arbitrary (1+1)-dimensional space-times and coordinates.
//!
//! The crate is split along the pipeline a simulation follows:
//!
//! * [`geometry`] evaluates a metric and derives the zweibein, volume factor,
//!   characteristic velocities and effective mass at a point.
//! * [`lattice`] turns per-site advection coefficients into upwind stencils,
//!   antisymmetrizes them and produces exactly unitary shift operators, either
//!   as Fourier multipliers or as dense matrices, together with the mass coin.
//! * [`walk`] holds the two-component state and advances it step by step.
//! * [`oracles`] contains independent reference computations: a Fourier-space
//!   evolution for the gravitoelectromagnetic metric, closed-form null
//!   characteristics and the flat dispersion relation.
//! * [`output`] writes run records as CSV, plain-text density matrices and
//!   PGM heatmaps.

pub mod error;
pub mod geometry;
pub mod lattice;
pub mod oracles;
pub mod output;
pub mod par;
pub mod walk;

pub use error::{Error, Result};
pub use num_complex::Complex64;
