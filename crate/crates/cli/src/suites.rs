//! Randomized validation suites behind `gqw validate`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use gqw_core::geometry::gem::{gem_gauge_transform, Bilinear, GemPotentials};
use gqw_core::geometry::{frame_from_components, spinor_rescale, spinor_unscale, zweibein_residual, MetricComponents, MetricField};
use gqw_core::lattice::{
    assemble_stencil, unitarity_defect, unitarize, CoinVariant, LatticeSpec, OperatorPath, StepUnitary, Strategy,
    UnitarizeOptions,
};
use gqw_core::oracles::{
    branch_velocity, characteristic_position, continuum_omega, dispersion_omega, fourier_trajectory, lattice_vs_fourier,
    measure_symbol, measured_omega, Branch,
};
use gqw_core::walk::{init_packet, PacketSpec, RecorderConfig, StepOptions, Walker};
use gqw_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Unitarity,
    Dispersion,
    Geometry,
    Oracle,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unitarity" => Ok(Suite::Unitarity),
            "dispersion" => Ok(Suite::Dispersion),
            "geometry" => Ok(Suite::Geometry),
            "oracle" => Ok(Suite::Oracle),
            _ => Err(format!("unknown suite '{s}' (unitarity, dispersion, geometry, oracle)")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Unitarity => "unitarity",
            Suite::Dispersion => "dispersion",
            Suite::Geometry => "geometry",
            Suite::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Requirement {
    Below(f64),
    Within(f64, f64),
}

impl Requirement {
    fn holds(self, x: f64) -> bool {
        match self {
            Requirement::Below(t) => x < t,
            Requirement::Within(lo, hi) => (lo..=hi).contains(&x),
        }
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::Below(t) => write!(f, "< {t:e}"),
            Requirement::Within(lo, hi) => write!(f, "in [{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub requirement: Requirement,
}

impl Check {
    fn new(name: &str, measured: f64, requirement: Requirement) -> Self {
        Check { name: name.to_string(), measured, requirement }
    }

    pub fn passed(&self) -> bool {
        self.requirement.holds(self.measured)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (seed {})", self.suite, self.seed)?;
        for c in &self.checks {
            let tag = if c.passed() { "ok  " } else { "FAIL" };
            writeln!(f, "  {tag} {}: {:.6e} ({})", c.name, c.measured, c.requirement)?;
        }
        Ok(())
    }
}

fn random_metric(rng: &mut ChaCha8Rng) -> MetricComponents {
    MetricComponents { g00: rng.gen_range(0.3..3.0), g01: rng.gen_range(-2.0..2.0), g11: -rng.gen_range(0.3..3.0) }
}

pub fn validate(suite: Suite, seed: u64) -> gqw_core::Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = match suite {
        Suite::Unitarity => unitarity(&mut rng)?,
        Suite::Dispersion => dispersion()?,
        Suite::Geometry => geometry(&mut rng)?,
        Suite::Oracle => oracle(&mut rng)?,
    };
    Ok(Report { suite, seed, checks })
}

fn unitarity(rng: &mut ChaCha8Rng) -> gqw_core::Result<Vec<Check>> {
    let n = 64;
    let l = LatticeSpec::new(n, 0.5)?;
    let dense = UnitarizeOptions { path: OperatorPath::Dense, ..Default::default() };
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let mass = rng.gen_range(0.0..2.0);
        let frames = (0..n)
            .map(|p| frame_from_components(random_metric(rng), 0.0, l.x1(p), mass))
            .collect::<gqw_core::Result<Vec<_>>>()?;
        let am: Vec<f64> = frames.iter().map(|f| f.a_minus()).collect();
        let ap: Vec<f64> = frames.iter().map(|f| f.a_plus()).collect();
        let angles = frames.iter().map(|f| l.eps * f.m_eff).collect();
        let um = unitarize(&assemble_stencil(&am, &l)?, Strategy::Exponential, &l, &dense)?;
        let up = unitarize(&assemble_stencil(&ap, &l)?, Strategy::Exponential, &l, &dense)?;
        let step = StepUnitary::new(um, up, angles, CoinVariant::DeterminantOne, true)?;
        worst = worst.max(unitarity_defect(&step.to_dense()));
    }
    let mut spectral: f64 = 0.0;
    let l = LatticeSpec::new(512, 1.0)?;
    for _ in 0..20 {
        let g = rng.gen_range(-1.0..1.0);
        let w = Walker::new(MetricField::gem(g), 0.5, l, StepOptions::default().with_strategy(Strategy::Exponential));
        spectral = spectral.max(w.step_unitary(rng.gen_range(0..200))?.unitarity_defect());
    }
    Ok(vec![
        Check::new("100 random site-dependent step operators, N=64", worst, Requirement::Below(1e-12)),
        Check::new("20 random uniform-field spectral shifts, N=512", spectral, Requirement::Below(1e-12)),
    ])
}

fn dispersion() -> gqw_core::Result<Vec<Check>> {
    let (kappa, mass, mode) = (3.0, 1.0, 17usize);
    let eps0 = 0.05;
    let n0 = (2.0 * std::f64::consts::PI * mode as f64 / (kappa * eps0)).round() as usize;
    let mut errors = Vec::new();
    for level in 0..3 {
        let eps = eps0 / f64::from(1 << level);
        let l = LatticeSpec::new(n0 << level, eps)?;
        let kappa_eff = l.wavenumber(mode) / eps;
        let mut w = Walker::new(MetricField::Flat, mass, l, StepOptions::default().with_strategy(Strategy::Exponential));
        let omega = measured_omega(&measure_symbol(&mut w, mode)?) / eps;
        let exact = continuum_omega(kappa_eff, mass);
        errors.push((omega - exact).abs() / exact);
    }
    let mut gap: f64 = 0.0;
    for i in 0..=50 {
        let [a, b] = dispersion_omega(0.0, i as f64 * 0.06, CoinVariant::Reflection);
        let (lo, hi) = if a.abs() < b.abs() { (a, b) } else { (b, a) };
        gap = gap.max(lo.abs()).max((hi.abs() - std::f64::consts::PI).abs());
    }
    Ok(vec![
        Check::new("relative frequency error at eps=0.05", errors[0], Requirement::Below(0.01)),
        Check::new("error ratio eps=0.05 / 0.025", errors[0] / errors[1], Requirement::Within(3.0, 5.0)),
        Check::new("error ratio eps=0.025 / 0.0125", errors[1] / errors[2], Requirement::Within(3.0, 5.0)),
        Check::new("literal coin eigenphases at k=0 away from {0, pi}", gap, Requirement::Below(1e-12)),
    ])
}

fn geometry(rng: &mut ChaCha8Rng) -> gqw_core::Result<Vec<Check>> {
    let mut residual: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    for _ in 0..1000 {
        let f = frame_from_components(random_metric(rng), 0.0, 0.0, 1.0)?;
        residual = residual.max(zweibein_residual(&f));
        let psi = (Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), Complex64::new(rng.gen_range(-1.0..1.0), 0.3));
        let (m, p) = spinor_rescale(psi.0, psi.1, &f);
        let (a, b) = spinor_unscale(m, p, &f);
        round_trip = round_trip.max((a - psi.0).norm()).max((b - psi.1).norm());
    }
    let g = rng.gen_range(-1.0..1.0);
    let grid: Vec<(f64, f64)> = (0..100).flat_map(|i| (0..100).map(move |j| (i as f64 * 0.37, j as f64 * 0.53 - 25.0))).collect();
    let out = gem_gauge_transform(&GemPotentials::uniform_scalar_gauge(g), Arc::new(Bilinear(-g)), &grid)?;
    let mut gauge: f64 = 0.0;
    for &(t, x) in &grid {
        gauge = gauge.max((out.v)(t, x).abs()).max(((out.a)(t, x) + g * t).abs());
    }
    Ok(vec![
        Check::new("zweibein residual over 1000 random metrics", residual, Requirement::Below(1e-12)),
        Check::new("spinor rescaling round trip", round_trip, Requirement::Below(1e-12)),
        Check::new("scalar-to-vector gauge map on 100x100 grid", gauge, Requirement::Below(4.0 * f64::EPSILON)),
    ])
}

fn oracle(rng: &mut ChaCha8Rng) -> gqw_core::Result<Vec<Check>> {
    let l = LatticeSpec::new(128, 1.0)?;
    let g = rng.gen_range(-0.3..-0.1);
    let mass = rng.gen_range(0.0..1.0);
    let mix = (Complex64::new(rng.gen_range(-1.0..1.0), 0.0), Complex64::new(0.0, rng.gen_range(-1.0..1.0)));
    let s0 = init_packet(&PacketSpec::gaussian(64.0, 100.0).with_mix(mix.0, mix.1), &l)?;
    let opts = StepOptions { path: OperatorPath::Dense, ..StepOptions::default().with_strategy(Strategy::Exponential) };
    let mut s = s0.clone();
    let rec = Walker::new(MetricField::gem(g), mass, l, opts).evolve(&mut s, 30, &RecorderConfig::every(1).with_amplitudes())?;
    let reference = fourier_trajectory(&s0, g, mass, opts.coin, opts.step_time, 30, 1);
    let deviation = lattice_vs_fourier(rec.amplitudes.as_ref().expect("amplitudes requested"), &reference)?;

    let l = LatticeSpec::new(2048, 1.0)?;
    let mut tracking: f64 = 0.0;
    for (branch, m, p) in [(Branch::Plus, 0.0, 1.0), (Branch::Minus, 1.0, 0.0)] {
        let mut s = init_packet(&PacketSpec::gaussian(512.0, 300.0).with_mix(Complex64::new(m, 0.0), Complex64::new(p, 0.0)), &l)?;
        let rec = Walker::new(MetricField::gem(-0.2), 0.0, l, StepOptions::default()).evolve(&mut s, 50, &RecorderConfig::every(10))?;
        for row in &rec.rows {
            let got = if branch == Branch::Plus { row.centroid_plus } else { row.centroid_minus };
            let want = characteristic_position(branch, -0.2, l.x0(row.j), 512.0);
            tracking = tracking.max(got.map_or(f64::INFINITY, |x| (x - want).abs()));
        }
    }

    let mut slope: f64 = 0.0;
    let h = 1e-4;
    for _ in 0..200 {
        let (g, t) = (rng.gen_range(-1.0..1.0), rng.gen_range(h..10.0));
        for b in [Branch::Plus, Branch::Minus] {
            let fd = (characteristic_position(b, g, t + h, 0.0) - characteristic_position(b, g, t - h, 0.0)) / (2.0 * h);
            let v = branch_velocity(b, g, t);
            slope = slope.max((fd - v).abs() / (1.0 + v.abs()));
        }
    }
    Ok(vec![
        Check::new("dense walk vs Fourier reference, N=128, 30 steps", deviation, Requirement::Below(1e-10)),
        Check::new("centroid distance to characteristics (sites)", tracking, Requirement::Below(3.0)),
        Check::new("characteristic slope vs light-cone velocity", slope, Requirement::Below(1e-6)),
    ])
}
