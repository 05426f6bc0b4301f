//! Metric fields and the point-wise geometric data a walk step needs.
//!
//! All quantities use units with c = 1. Coordinates are `(x0, x1)`, with `x0`
//! required to be time-like and `x1` space-like wherever a frame is built.

pub mod expr;
pub mod gem;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
pub use expr::Expr;

/// Covariant components `g_{μν}` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricComponents {
    pub g00: f64,
    pub g01: f64,
    pub g11: f64,
}

impl MetricComponents {
    pub const MINKOWSKI: MetricComponents = MetricComponents { g00: 1.0, g01: 0.0, g11: -1.0 };

    pub fn det(&self) -> f64 {
        self.g00 * self.g11 - self.g01 * self.g01
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Flat,
    Gem,
    Custom,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Flat => "flat",
            MetricKind::Gem => "gem",
            MetricKind::Custom => "custom",
        })
    }
}

type MetricFn = dyn Fn(f64, f64) -> MetricComponents + Send + Sync;

/// An evaluable metric `(x0, x1) -> (g00, g01, g11)`.
#[derive(Clone)]
pub enum MetricField {
    /// Minkowski metric in orthonormal coordinates.
    Flat,
    /// Constant gravitoelectromagnetic field of strength `g` in the gauge
    /// `V = 0`, `A = -g x0`: `ds² = dx0² - 4 g x0 dx0 dx1 - dx1²`.
    Gem { g: f64 },
    /// Three coefficient expressions over `x0`, `x1`.
    Expr { g00: Expr, g01: Expr, g11: Expr },
    /// Programmatic metric, with explicit coordinate dependence flags.
    Function {
        eval: Arc<MetricFn>,
        uses_x0: bool,
        uses_x1: bool,
    },
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricField::Flat => f.write_str("Flat"),
            MetricField::Gem { g } => f.debug_struct("Gem").field("g", g).finish(),
            MetricField::Expr { g00, g01, g11 } => f
                .debug_struct("Expr")
                .field("g00", g00)
                .field("g01", g01)
                .field("g11", g11)
                .finish(),
            MetricField::Function { uses_x0, uses_x1, .. } => f
                .debug_struct("Function")
                .field("uses_x0", uses_x0)
                .field("uses_x1", uses_x1)
                .finish_non_exhaustive(),
        }
    }
}

impl MetricField {
    pub fn gem(g: f64) -> Self {
        MetricField::Gem { g }
    }

    pub fn from_expressions(g00: &str, g01: &str, g11: &str) -> Result<Self> {
        Ok(MetricField::Expr {
            g00: Expr::parse(g00)?,
            g01: Expr::parse(g01)?,
            g11: Expr::parse(g11)?,
        })
    }

    pub fn constant(g00: f64, g01: f64, g11: f64) -> Self {
        let m = MetricComponents { g00, g01, g11 };
        MetricField::Function { eval: Arc::new(move |_, _| m), uses_x0: false, uses_x1: false }
    }

    pub fn from_fn<F>(f: F, uses_x0: bool, uses_x1: bool) -> Self
    where
        F: Fn(f64, f64) -> MetricComponents + Send + Sync + 'static,
    {
        MetricField::Function { eval: Arc::new(f), uses_x0, uses_x1 }
    }

    pub fn kind(&self) -> MetricKind {
        match self {
            MetricField::Flat => MetricKind::Flat,
            MetricField::Gem { .. } => MetricKind::Gem,
            MetricField::Expr { .. } | MetricField::Function { .. } => MetricKind::Custom,
        }
    }

    pub fn eval(&self, x0: f64, x1: f64) -> MetricComponents {
        match self {
            MetricField::Flat => MetricComponents::MINKOWSKI,
            MetricField::Gem { g } => MetricComponents { g00: 1.0, g01: -2.0 * g * x0, g11: -1.0 },
            MetricField::Expr { g00, g01, g11 } => MetricComponents {
                g00: g00.eval(x0, x1),
                g01: g01.eval(x0, x1),
                g11: g11.eval(x0, x1),
            },
            MetricField::Function { eval, .. } => eval(x0, x1),
        }
    }

    /// Whether any component can change with `x0`.
    pub fn depends_on_time(&self) -> bool {
        match self {
            MetricField::Flat => false,
            MetricField::Gem { g } => *g != 0.0,
            MetricField::Expr { g00, g01, g11 } => g00.uses_x0() || g01.uses_x0() || g11.uses_x0(),
            MetricField::Function { uses_x0, .. } => *uses_x0,
        }
    }

    /// Whether any component can change with `x1`.
    pub fn depends_on_space(&self) -> bool {
        match self {
            MetricField::Flat | MetricField::Gem { .. } => false,
            MetricField::Expr { g00, g01, g11 } => g00.uses_x1() || g01.uses_x1() || g11.uses_x1(),
            MetricField::Function { uses_x1, .. } => *uses_x1,
        }
    }
}

/// Geometric data at one point, with the zweibein fixed in the boost gauge
/// `σ⁰ = δ⁰ = √g⁰⁰`.
///
/// `σ^μ = e^μ₀ + e^μ₁` and `δ^μ = e^μ₀ − e^μ₁`. The component `Φ⁻` is advected
/// with velocity `v_minus = λ − c` and `Φ⁺` with `v_plus = λ + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryFrame {
    /// Contravariant `g⁰⁰`.
    pub inv_g00: f64,
    /// Contravariant `g⁰¹`.
    pub inv_g01: f64,
    /// Contravariant `g¹¹`.
    pub inv_g11: f64,
    /// Volume factor `√(−det g_{μν})`.
    pub s: f64,
    pub sigma0: f64,
    pub sigma1: f64,
    pub delta0: f64,
    pub delta1: f64,
    /// `λ = g⁰¹ / g⁰⁰`.
    pub lam: f64,
    /// `c = 1 / (g⁰⁰ S)`.
    pub c: f64,
    /// Effective mass `m / √g⁰⁰`.
    pub m_eff: f64,
    pub v_minus: f64,
    pub v_plus: f64,
}

impl GeometryFrame {
    /// Zweibein as `[[e⁰₀, e⁰₁], [e¹₀, e¹₁]]`.
    pub fn zweibein(&self) -> [[f64; 2]; 2] {
        [
            [0.5 * (self.sigma0 + self.delta0), 0.5 * (self.sigma0 - self.delta0)],
            [0.5 * (self.sigma1 + self.delta1), 0.5 * (self.sigma1 - self.delta1)],
        ]
    }

    /// Stencil coefficient `a = −v` for the `Φ⁻` component.
    pub fn a_minus(&self) -> f64 {
        -self.v_minus
    }

    /// Stencil coefficient `a = −v` for the `Φ⁺` component.
    pub fn a_plus(&self) -> f64 {
        -self.v_plus
    }
}

/// Derives the frame of `metric` at `(x0, x1)` for a particle of mass `mass`.
pub fn frame_at(metric: &MetricField, x0: f64, x1: f64, mass: f64) -> Result<GeometryFrame> {
    frame_from_components(metric.eval(x0, x1), x0, x1, mass)
}

pub fn frame_from_components(m: MetricComponents, x0: f64, x1: f64, mass: f64) -> Result<GeometryFrame> {
    let fail = |detail: String| Error::Signature { x0, x1, detail };
    if !(m.g00.is_finite() && m.g01.is_finite() && m.g11.is_finite()) {
        return Err(fail(format!("non-finite component {m:?}")));
    }
    let det = m.det();
    if det >= 0.0 {
        return Err(fail(format!("det g = {det} is not negative")));
    }
    let inv_g00 = m.g11 / det;
    let inv_g01 = -m.g01 / det;
    let inv_g11 = m.g00 / det;
    if inv_g00 <= 0.0 {
        return Err(fail(format!("g^00 = {inv_g00}: x0 is not time-like")));
    }
    if inv_g11 >= 0.0 {
        return Err(fail(format!("g^11 = {inv_g11}: x1 is not space-like")));
    }
    let s = (-det).sqrt();
    let lam = inv_g01 / inv_g00;
    let c = 1.0 / (inv_g00 * s);
    let root = inv_g00.sqrt();
    let v_minus = lam - c;
    let v_plus = lam + c;
    Ok(GeometryFrame {
        inv_g00,
        inv_g01,
        inv_g11,
        s,
        sigma0: root,
        sigma1: root * v_plus,
        delta0: root,
        delta1: root * v_minus,
        lam,
        c,
        m_eff: mass / root,
        v_minus,
        v_plus,
    })
}

/// Largest absolute residual of the three relations linking `σ`, `δ` and `g^{μν}`.
pub fn zweibein_residual(frame: &GeometryFrame) -> f64 {
    let r0 = frame.sigma0 * frame.delta0 - frame.inv_g00;
    let r1 = 0.5 * (frame.sigma0 * frame.delta1 + frame.sigma1 * frame.delta0) - frame.inv_g01;
    let r2 = frame.sigma1 * frame.delta1 - frame.inv_g11;
    r0.abs().max(r1.abs()).max(r2.abs())
}

/// Maps the Dirac spinor `(Ψ⁻, Ψ⁺)` to the walk amplitudes `(Φ⁻, Φ⁺)`, for
/// which the Lebesgue probability density is `|Φ⁻|² + |Φ⁺|²`.
pub fn spinor_rescale(psi_minus: Complex64, psi_plus: Complex64, frame: &GeometryFrame) -> (Complex64, Complex64) {
    let (fm, fp) = rescale_factors(frame);
    (psi_minus * fm, psi_plus * fp)
}

/// Inverse of [`spinor_rescale`].
pub fn spinor_unscale(phi_minus: Complex64, phi_plus: Complex64, frame: &GeometryFrame) -> (Complex64, Complex64) {
    let (fm, fp) = rescale_factors(frame);
    (phi_minus / fm, phi_plus / fp)
}

fn rescale_factors(frame: &GeometryFrame) -> (f64, f64) {
    ((frame.s * frame.delta0).sqrt(), (frame.s * frame.sigma0).sqrt())
}

/// Probability density with respect to `dx1` written in terms of the
/// unrescaled spinor: `S [(e⁰₀ − e⁰₁)|Ψ⁻|² + (e⁰₀ + e⁰₁)|Ψ⁺|²]`.
pub fn spinor_density(psi_minus: Complex64, psi_plus: Complex64, frame: &GeometryFrame) -> f64 {
    let e = frame.zweibein();
    frame.s * ((e[0][0] - e[0][1]) * psi_minus.norm_sqr() + (e[0][0] + e[0][1]) * psi_plus.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Inverse of a symmetric 2x2 matrix by cofactors, written out independently.
    fn brute_inverse(a: f64, b: f64, d: f64) -> (f64, f64, f64) {
        let det = a * d - b * b;
        (d / det, -b / det, a / det)
    }

    #[test]
    fn flat_frame_is_identity_frame() {
        let f = frame_at(&MetricField::Flat, 3.0, -7.0, 0.5).unwrap();
        assert_eq!((f.lam, f.c, f.s, f.m_eff), (0.0, 1.0, 1.0, 0.5));
        assert_eq!((f.sigma0, f.sigma1), (1.0, 1.0));
        assert_eq!((f.delta0, f.delta1), (1.0, -1.0));
        assert_eq!((f.v_minus, f.v_plus), (-1.0, 1.0));
        assert_eq!(zweibein_residual(&f), 0.0);
    }

    #[test]
    fn gem_at_origin_matches_flat() {
        let f = frame_at(&MetricField::gem(-0.2), 0.0, 12.0, 0.5).unwrap();
        let flat = frame_at(&MetricField::Flat, 0.0, 12.0, 0.5).unwrap();
        assert_eq!(f, flat);
    }

    #[test]
    fn gem_frame_at_x0_5() {
        let f = frame_at(&MetricField::gem(-0.2), 5.0, 0.0, 1.0).unwrap();
        // Covariant [[1, 2], [2, -1]].
        let (i00, i01, i11) = brute_inverse(1.0, 2.0, -1.0);
        assert_abs_diff_eq!(f.inv_g00, i00, epsilon = 1e-15);
        assert_abs_diff_eq!(f.inv_g01, i01, epsilon = 1e-15);
        assert_abs_diff_eq!(f.inv_g11, i11, epsilon = 1e-15);
        assert_abs_diff_eq!(i00, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(i01, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(i11, -0.2, epsilon = 1e-15);
        let r5 = 5f64.sqrt();
        assert_abs_diff_eq!(f.s, r5, epsilon = 1e-14);
        assert_abs_diff_eq!(f.lam, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.c, r5, epsilon = 1e-14);
        assert_abs_diff_eq!(f.m_eff, r5, epsilon = 1e-14);
        let theta = (-2.0f64).asinh();
        assert_abs_diff_eq!(theta, -1.44364, epsilon = 1e-5);
        assert_abs_diff_eq!(f.v_minus, -theta.exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(f.v_plus, (-theta).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(f.v_minus, -0.23607, epsilon = 1e-5);
        assert_abs_diff_eq!(f.v_plus, 4.23607, epsilon = 1e-5);
        assert!(zweibein_residual(&f) < 1e-12);
    }

    #[test]
    fn gem_rapidity_closed_forms() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let (g, x0, m) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.0..20.0), rng.gen_range(0.0..2.0));
            let f = frame_at(&MetricField::gem(g), x0, 0.0, m).unwrap();
            let theta = (2.0 * g * x0).asinh();
            let scale = theta.cosh();
            assert!((f.s - theta.cosh()).abs() < 1e-12 * scale);
            assert!((f.lam + theta.sinh()).abs() < 1e-12 * scale);
            assert!((f.c - theta.cosh()).abs() < 1e-12 * scale);
            assert!((f.m_eff - m * theta.cosh()).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn signature_violations_are_reported() {
        // Euclidean.
        let e = frame_at(&MetricField::constant(1.0, 0.0, 1.0), 1.0, 2.0, 0.0).unwrap_err();
        assert!(matches!(e, Error::Signature { x0, x1, .. } if x0 == 1.0 && x1 == 2.0));
        // Time and space swapped.
        assert!(frame_at(&MetricField::constant(-1.0, 0.0, 1.0), 0.0, 0.0, 0.0).is_err());
        // Null x0 direction: g00 = 0 gives g^11 = 0.
        assert!(frame_at(&MetricField::constant(0.0, 1.0, -1.0), 0.0, 0.0, 0.0).is_err());
        assert!(frame_at(&MetricField::constant(f64::NAN, 0.0, -1.0), 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn perturbed_sigma1_shows_in_residual() {
        let mut f = frame_at(&MetricField::gem(-0.2), 5.0, 0.0, 1.0).unwrap();
        f.sigma1 += 1e-3;
        assert!(zweibein_residual(&f) >= 1e-3 * f.delta0.abs() / 2.0 * (1.0 - 1e-9));
    }

    #[test]
    fn rescale_examples() {
        let z = Complex64::new(0.3, -0.7);
        let w = Complex64::new(-1.1, 0.2);
        let flat = frame_at(&MetricField::Flat, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(spinor_rescale(z, w, &flat), (z, w));
        let gem = frame_at(&MetricField::gem(-0.2), 5.0, 0.0, 0.0).unwrap();
        let (fm, fp) = rescale_factors(&gem);
        assert_abs_diff_eq!(fm, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fp, 1.0, epsilon = 1e-14);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(spinor_rescale(zero, zero, &gem), (zero, zero));
    }

    fn lorentzian() -> impl Strategy<Value = MetricComponents> {
        // g00 > 0 and g11 < 0 keep both coordinates on the right side of the cone.
        (0.05f64..5.0, -5.0f64..5.0, 0.05f64..5.0).prop_map(|(a, b, d)| MetricComponents { g00: a, g01: b, g11: -d })
    }

    proptest! {
        #[test]
        fn frame_invariants(m in lorentzian(), mass in 0.0f64..3.0) {
            let f = frame_from_components(m, 0.0, 0.0, mass).unwrap();
            let scale = 1.0 + f.inv_g00.abs() + f.inv_g01.abs() + f.inv_g11.abs();
            prop_assert!(zweibein_residual(&f) < 1e-12 * scale);
            prop_assert!(f.sigma0 > 0.0 && f.delta0 > 0.0);
            prop_assert!(f.v_minus < 0.0 && 0.0 < f.v_plus);
            prop_assert!(f.lam * f.lam < f.c * f.c);
            let e = f.zweibein();
            prop_assert!(e[0][0] > e[0][1].abs());
            prop_assert!(e[1][1] > 0.0);
        }

        #[test]
        fn density_matches_rescaled_norm(m in lorentzian(), re in -2.0f64..2.0, im in -2.0f64..2.0, re2 in -2.0f64..2.0, im2 in -2.0f64..2.0) {
            let f = frame_from_components(m, 0.0, 0.0, 0.0).unwrap();
            let (a, b) = (Complex64::new(re, im), Complex64::new(re2, im2));
            let (pm, pp) = spinor_rescale(a, b, &f);
            let lhs = pm.norm_sqr() + pp.norm_sqr();
            let rhs = spinor_density(a, b, &f);
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
            if a.norm() + b.norm() > 1e-6 {
                prop_assert!(rhs > 0.0);
            }
            let (ba, bb) = spinor_unscale(pm, pp, &f);
            prop_assert!((ba - a).norm() < 1e-14 * (1.0 + a.norm()) * 4.0);
            prop_assert!((bb - b).norm() < 1e-14 * (1.0 + b.norm()) * 4.0);
        }
    }
}
