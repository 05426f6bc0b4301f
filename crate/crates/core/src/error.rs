use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The metric is not Lorentzian with x⁰ time-like and x¹ space-like at this point.
    #[error("metric signature violated at (x0={x0}, x1={x1}): {detail}")]
    Signature { x0: f64, x1: f64, detail: String },

    #[error("advection coefficients change sign between sites {first} and {second}")]
    MixedSign { first: usize, second: usize },

    #[error("affine step 1+L is not unitary (defect {defect:e})")]
    NotAffine { defect: f64 },

    #[error("dense operator requested for {n} sites, cap is {cap}")]
    Size { n: usize, cap: usize },

    #[error("wave packet too wide: 3σ = {three_sigma} must be below nSites/2 = {half}")]
    PacketTooWide { three_sigma: f64, half: f64 },

    #[error("invalid packet: {0}")]
    InvalidPacket(String),

    #[error("component has vanishing norm ({norm:e}); centroid undefined")]
    EmptyComponent { norm: f64 },

    #[error("records are not comparable: {0}")]
    ConfigMismatch(String),

    #[error("gauge function is not harmonic: □F = {residual:e} at (t={t}, x={x})")]
    GaugeCondition { residual: f64, t: f64, x: f64 },

    #[error("expression error at column {column}: {message}")]
    Expression { column: usize, message: String },

    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
}
