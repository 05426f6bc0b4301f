//! Weak-field (gravitoelectromagnetic) potentials reduced to one spatial
//! dimension, and their gauge freedom.
//!
//! The line element is `ds² = (1 − 2V) dx0² + 4 A dx0 dx1 − (1 + 2V) dx1²`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{MetricComponents, MetricField};

pub type ScalarField = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Scalar potential `V(x0, x1)` and the `x1` component of the vector potential `A(x0, x1)`.
#[derive(Clone)]
pub struct GemPotentials {
    pub v: ScalarField,
    pub a: ScalarField,
}

impl GemPotentials {
    pub fn new<V, A>(v: V, a: A) -> Self
    where
        V: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        A: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        GemPotentials { v: Arc::new(v), a: Arc::new(a) }
    }

    /// Uniform field of strength `g` along `x1`, gauge `V = −g x1`, `A = 0`.
    pub fn uniform_scalar_gauge(g: f64) -> Self {
        GemPotentials::new(move |_, x1| -g * x1, |_, _| 0.0)
    }

    /// Uniform field of strength `g` along `x1`, gauge `V = 0`, `A = −g x0`.
    pub fn uniform_vector_gauge(g: f64) -> Self {
        GemPotentials::new(|_, _| 0.0, move |x0, _| -g * x0)
    }

    pub fn components(&self, x0: f64, x1: f64) -> MetricComponents {
        let v = (self.v)(x0, x1);
        let a = (self.a)(x0, x1);
        MetricComponents { g00: 1.0 - 2.0 * v, g01: 2.0 * a, g11: -(1.0 + 2.0 * v) }
    }

    /// The metric these potentials induce. Coordinate dependence is unknown,
    /// so both flags are set.
    pub fn metric(&self) -> MetricField {
        let pot = self.clone();
        MetricField::from_fn(move |x0, x1| pot.components(x0, x1), true, true)
    }
}

/// A gauge function `F(t, x)` together with its first derivatives.
pub trait GaugeFunction: Send + Sync {
    fn value(&self, t: f64, x: f64) -> f64;
    fn dt(&self, t: f64, x: f64) -> f64;
    fn dx(&self, t: f64, x: f64) -> f64;
}

/// `F = k · t · x`, harmonic for every `k`.
#[derive(Debug, Clone, Copy)]
pub struct Bilinear(pub f64);

impl GaugeFunction for Bilinear {
    fn value(&self, t: f64, x: f64) -> f64 {
        self.0 * t * x
    }
    fn dt(&self, _t: f64, x: f64) -> f64 {
        self.0 * x
    }
    fn dx(&self, t: f64, _x: f64) -> f64 {
        self.0 * t
    }
}

/// Gauge function assembled from three closures.
pub struct FnGauge<F, Ft, Fx> {
    pub value: F,
    pub dt: Ft,
    pub dx: Fx,
}

impl<F, Ft, Fx> GaugeFunction for FnGauge<F, Ft, Fx>
where
    F: Fn(f64, f64) -> f64 + Send + Sync,
    Ft: Fn(f64, f64) -> f64 + Send + Sync,
    Fx: Fn(f64, f64) -> f64 + Send + Sync,
{
    fn value(&self, t: f64, x: f64) -> f64 {
        (self.value)(t, x)
    }
    fn dt(&self, t: f64, x: f64) -> f64 {
        (self.dt)(t, x)
    }
    fn dx(&self, t: f64, x: f64) -> f64 {
        (self.dx)(t, x)
    }
}

/// Maximum accepted |□F| at a sample point.
pub const HARMONIC_TOL: f64 = 1e-6;

/// Central-difference estimate of `∂²F/∂t² − ∂²F/∂x²`.
pub fn dalembertian<G: GaugeFunction + ?Sized>(f: &G, t: f64, x: f64) -> f64 {
    let h = 1e-3 * (1.0 + t.abs().max(x.abs()));
    let c = f.value(t, x);
    let ftt = (f.value(t + h, x) - 2.0 * c + f.value(t - h, x)) / (h * h);
    let fxx = (f.value(t, x + h) - 2.0 * c + f.value(t, x - h)) / (h * h);
    ftt - fxx
}

/// Applies `V → V − ∂F/∂t`, `A → A + ∂F/∂x` after checking `□F = 0` at `samples`.
pub fn gem_gauge_transform<G>(pot: &GemPotentials, f: Arc<G>, samples: &[(f64, f64)]) -> Result<GemPotentials>
where
    G: GaugeFunction + 'static,
{
    for &(t, x) in samples {
        let residual = dalembertian(f.as_ref(), t, x);
        if residual.is_nan() || residual.abs() > HARMONIC_TOL {
            return Err(Error::GaugeCondition { residual, t, x });
        }
    }
    let (v, a) = (pot.v.clone(), pot.a.clone());
    let (fv, fa) = (f.clone(), f);
    Ok(GemPotentials {
        v: Arc::new(move |t, x| v(t, x) - fv.dt(t, x)),
        a: Arc::new(move |t, x| a(t, x) + fa.dx(t, x)),
    })
}
