//! Two-component walk state, initial packets and observables.

pub mod engine;
pub mod record;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

pub use engine::{step, ComponentScheme, StencilRule, StepOptions, StepTime, Walker};
pub use record::{AmplitudeFrame, AmplitudeTrace, DensitySnapshot, RecordRow, RecorderConfig, RunMeta, RunRecord};

/// Minimum component norm for which a centroid is defined.
pub const EMPTY_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Minus,
    Plus,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    pub j: u64,
    pub phi_minus: Vec<Complex64>,
    pub phi_plus: Vec<Complex64>,
    pub lattice: LatticeSpec,
}

impl WalkState {
    pub fn zeros(lattice: LatticeSpec) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); lattice.n_sites];
        WalkState { j: 0, phi_minus: z.clone(), phi_plus: z, lattice }
    }

    pub fn from_components(lattice: LatticeSpec, phi_minus: Vec<Complex64>, phi_plus: Vec<Complex64>) -> Result<Self> {
        for got in [phi_minus.len(), phi_plus.len()] {
            if got != lattice.n_sites {
                return Err(Error::Length { expected: lattice.n_sites, got });
            }
        }
        Ok(WalkState { j: 0, phi_minus, phi_plus, lattice })
    }

    pub fn component_norm(&self, component: Component) -> f64 {
        let sum = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        match component {
            Component::Minus => sum(&self.phi_minus),
            Component::Plus => sum(&self.phi_plus),
            Component::Both => sum(&self.phi_minus) + sum(&self.phi_plus),
        }
    }

    /// `Σ_p |Φ⁻_p|² + |Φ⁺_p|²`, without an ε weight.
    pub fn norm(&self) -> f64 {
        self.component_norm(Component::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PacketShape {
    Gaussian,
    /// All amplitude on the site nearest `center`.
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    /// Center in site units.
    pub center: f64,
    /// Variance of the `|Φ|²` profile in site² units.
    pub variance: f64,
    /// Lattice wavenumber.
    pub momentum: f64,
    /// Component amplitudes `(α⁻, α⁺)`; normalized on use.
    pub mix: (Complex64, Complex64),
    pub shape: PacketShape,
}

impl PacketSpec {
    pub fn gaussian(center: f64, variance: f64) -> Self {
        PacketSpec {
            center,
            variance,
            momentum: 0.0,
            mix: (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            shape: PacketShape::Gaussian,
        }
    }

    pub fn delta(center: usize) -> Self {
        PacketSpec { shape: PacketShape::Delta, ..PacketSpec::gaussian(center as f64, 1.0) }
    }

    pub fn with_mix(self, minus: Complex64, plus: Complex64) -> Self {
        PacketSpec { mix: (minus, plus), ..self }
    }

    pub fn with_momentum(self, momentum: f64) -> Self {
        PacketSpec { momentum, ..self }
    }
}

/// Nearest-image offset of site `p` from `center` on a ring of `n` sites.
fn wrapped_offset(p: usize, center: f64, n: usize) -> f64 {
    let n = n as f64;
    let d = p as f64 - center;
    d - n * (d / n).round()
}

/// `Φ^s_p = α^s C exp(−(p−p₀)²/(4σ²)) exp(i k₀ p)`, normalized to unit total norm.
pub fn init_packet(packet: &PacketSpec, lattice: &LatticeSpec) -> Result<WalkState> {
    let n = lattice.n_sites;
    let (am, ap) = packet.mix;
    let mix_norm = (am.norm_sqr() + ap.norm_sqr()).sqrt();
    if !(mix_norm > 0.0 && mix_norm.is_finite()) {
        return Err(Error::InvalidPacket("mix amplitudes must not both vanish".into()));
    }
    if !packet.center.is_finite() || !packet.momentum.is_finite() {
        return Err(Error::InvalidPacket("center and momentum must be finite".into()));
    }
    let (am, ap) = (am / mix_norm, ap / mix_norm);
    let mut state = WalkState::zeros(*lattice);
    match packet.shape {
        PacketShape::Delta => {
            let p = (packet.center.round() as i64).rem_euclid(n as i64) as usize;
            state.phi_minus[p] = am;
            state.phi_plus[p] = ap;
        }
        PacketShape::Gaussian => {
            if !(packet.variance > 0.0 && packet.variance.is_finite()) {
                return Err(Error::InvalidPacket(format!("variance {} must be positive", packet.variance)));
            }
            let three_sigma = 3.0 * packet.variance.sqrt();
            let half = n as f64 / 2.0;
            if three_sigma >= half {
                return Err(Error::PacketTooWide { three_sigma, half });
            }
            let profile: Vec<Complex64> = (0..n)
                .map(|p| {
                    let d = wrapped_offset(p, packet.center, n);
                    let amp = (-d * d / (4.0 * packet.variance)).exp();
                    Complex64::from_polar(amp, packet.momentum * (packet.center + d))
                })
                .collect();
            let c = 1.0 / profile.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for (p, z) in profile.iter().enumerate() {
                state.phi_minus[p] = am * z * c;
                state.phi_plus[p] = ap * z * c;
            }
        }
    }
    Ok(state)
}

/// `P_L(p) = |Φ⁻_p|² + |Φ⁺_p|²`.
pub fn probability_density(state: &WalkState) -> Vec<f64> {
    state.phi_minus.iter().zip(&state.phi_plus).map(|(m, p)| m.norm_sqr() + p.norm_sqr()).collect()
}

fn weights(state: &WalkState, component: Component) -> Vec<f64> {
    match component {
        Component::Minus => state.phi_minus.iter().map(|z| z.norm_sqr()).collect(),
        Component::Plus => state.phi_plus.iter().map(|z| z.norm_sqr()).collect(),
        Component::Both => probability_density(state),
    }
}

/// Position expectation `ε Σ p w_p / Σ w_p` of the selected density.
///
/// Each site is taken at its periodic image nearest to `reference` (in `x1`
/// units), so a packet crossing the seam keeps a continuous centroid. Without a
/// reference the circular mean of the density is used as the anchor.
pub fn centroid(state: &WalkState, component: Component, reference: Option<f64>) -> Result<f64> {
    let w = weights(state, component);
    let total: f64 = w.iter().sum();
    if total.is_nan() || total <= EMPTY_NORM {
        return Err(Error::EmptyComponent { norm: total });
    }
    let n = state.lattice.n_sites;
    let eps = state.lattice.eps;
    let anchor = match reference {
        Some(x) => x / eps,
        None => {
            let (s, c) = w.iter().enumerate().fold((0.0, 0.0), |(s, c), (p, &wp)| {
                let phi = 2.0 * PI * p as f64 / n as f64;
                (s + wp * phi.sin(), c + wp * phi.cos())
            });
            (s.atan2(c) * n as f64 / (2.0 * PI)).rem_euclid(n as f64)
        }
    };
    let moment: f64 = w.iter().enumerate().map(|(p, &wp)| wp * (anchor + wrapped_offset(p, anchor, n))).sum();
    Ok(eps * moment / total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(n: usize) -> LatticeSpec {
        LatticeSpec::new(n, 1.0).unwrap()
    }

    #[test]
    fn wide_packet_is_normalized_single_component() {
        let s = init_packet(&PacketSpec::gaussian(1024.0, 300.0), &lattice(2048)).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert_eq!(s.component_norm(Component::Minus), 0.0);
        // The |Φ|² profile has the requested variance.
        let mean = centroid(&s, Component::Plus, None).unwrap();
        let var: f64 = probability_density(&s).iter().enumerate().map(|(p, w)| w * (p as f64 - mean).powi(2)).sum();
        assert!((var - 300.0).abs() < 1e-6, "{var}");
    }

    #[test]
    fn balanced_mix_splits_norm() {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let s = init_packet(&PacketSpec::gaussian(50.0, 20.0).with_mix(h, h), &lattice(256)).unwrap();
        assert!((s.component_norm(Component::Minus) - 0.5).abs() < 1e-12);
        assert!((s.component_norm(Component::Plus) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn delta_packet() {
        let h = Complex64::new(0.6, 0.0);
        let s = init_packet(&PacketSpec::delta(7).with_mix(h, Complex64::new(0.0, 0.8)), &lattice(16)).unwrap();
        assert_eq!(s.phi_minus[7], h);
        assert_eq!(s.phi_plus[7], Complex64::new(0.0, 0.8));
        assert_eq!(probability_density(&s).iter().filter(|&&x| x > 0.0).count(), 1);
        assert_eq!(centroid(&s, Component::Both, None).unwrap(), 7.0);
    }

    #[test]
    fn packet_too_wide() {
        let e = init_packet(&PacketSpec::gaussian(32.0, 200.0), &lattice(64)).unwrap_err();
        assert!(matches!(e, Error::PacketTooWide { .. }));
        assert!(init_packet(&PacketSpec::gaussian(32.0, -1.0), &lattice(64)).is_err());
    }

    #[test]
    fn symmetric_packet_centroid() {
        let l = LatticeSpec::new(512, 0.25).unwrap();
        let s = init_packet(&PacketSpec::gaussian(100.0, 40.0).with_momentum(0.3), &l).unwrap();
        assert!((centroid(&s, Component::Plus, None).unwrap() - 25.0).abs() < 1e-9);
        assert!((probability_density(&s).iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn centroid_across_the_seam() {
        let l = lattice(128);
        let s = init_packet(&PacketSpec::gaussian(126.0, 9.0), &l).unwrap();
        assert!((centroid(&s, Component::Plus, None).unwrap() - 126.0).abs() < 1e-9);
        // Same packet seen from the next period.
        assert!((centroid(&s, Component::Plus, Some(250.0)).unwrap() - 254.0).abs() < 1e-9);
        assert!((centroid(&s, Component::Plus, Some(-1.0)).unwrap() + 2.0).abs() < 1e-9);
    }

    #[test]
    fn empty_component_has_no_centroid() {
        let s = init_packet(&PacketSpec::gaussian(50.0, 9.0), &lattice(128)).unwrap();
        assert!(matches!(centroid(&s, Component::Minus, None), Err(Error::EmptyComponent { .. })));
    }
}
