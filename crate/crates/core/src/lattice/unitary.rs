use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::coin::{coin_matrix, CoinMatrix, CoinVariant};
use crate::lattice::spectral::{self, FftPair};
use crate::lattice::stencil::{affine_defect, antisymmetrize, SkewOperator, StencilOperator};
use crate::lattice::{unitarity_defect, LatticeSpec, AFFINE_TOL, DEFAULT_DENSE_CAP};
use crate::par;

/// How to turn a stencil into a unitary step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Affine when `1 + L` is unitary, exponential otherwise.
    #[default]
    Auto,
    Affine,
    Exponential,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Auto => "auto",
            Strategy::Affine => "affine",
            Strategy::Exponential => "exponential",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "affine" => Ok(Strategy::Affine),
            "exponential" => Ok(Strategy::Exponential),
            _ => Err(format!("unknown unitarize strategy '{s}'")),
        }
    }
}

/// Representation used for exponential shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OperatorPath {
    /// Fourier multipliers when the coupling is uniform, dense otherwise.
    #[default]
    Auto,
    /// Always build the dense matrix by eigendecomposition.
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// `1 + L_D`
    Affine,
    /// `exp((L_D − L_D†)/2)`
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarizeOptions {
    pub path: OperatorPath,
    pub dense_cap: usize,
    pub parallel: bool,
}

impl Default for UnitarizeOptions {
    fn default() -> Self {
        UnitarizeOptions { path: OperatorPath::Auto, dense_cap: DEFAULT_DENSE_CAP, parallel: true }
    }
}

#[derive(Debug, Clone)]
pub enum ShiftRepr {
    Affine(StencilOperator),
    Spectral { coupling: f64, multipliers: Vec<Complex64>, fft: FftPair },
    Dense(DMatrix<Complex64>),
}

/// A unitary acting on one spinor component.
#[derive(Debug, Clone)]
pub struct ShiftUnitary {
    pub flavor: Flavor,
    pub repr: ShiftRepr,
    parallel: bool,
}

/// Relative spread below which couplings count as uniform.
const UNIFORM_REL_TOL: f64 = 1e-14;

pub fn unitarize(op: &StencilOperator, strategy: Strategy, lattice: &LatticeSpec, opts: &UnitarizeOptions) -> Result<ShiftUnitary> {
    if op.len() != lattice.n_sites {
        return Err(Error::Length { expected: lattice.n_sites, got: op.len() });
    }
    let affine = |defect: f64| {
        if defect < AFFINE_TOL {
            Ok(ShiftUnitary { flavor: Flavor::Affine, repr: ShiftRepr::Affine(op.clone()), parallel: opts.parallel })
        } else {
            Err(Error::NotAffine { defect })
        }
    };
    match strategy {
        Strategy::Affine => affine(affine_defect(op)),
        Strategy::Auto => affine(affine_defect(op)).or_else(|_| exponential(op, lattice, opts)),
        Strategy::Exponential => exponential(op, lattice, opts),
    }
}

fn exponential(op: &StencilOperator, lattice: &LatticeSpec, opts: &UnitarizeOptions) -> Result<ShiftUnitary> {
    let skew = antisymmetrize(op);
    let n = lattice.n_sites;
    let repr = match (opts.path, skew.uniform_coupling(UNIFORM_REL_TOL)) {
        (OperatorPath::Auto, Some(b)) => {
            ShiftRepr::Spectral { coupling: b, multipliers: spectral::skew_multipliers(b, n), fft: spectral::plans(n) }
        }
        _ => {
            if n > opts.dense_cap {
                return Err(Error::Size { n, cap: opts.dense_cap });
            }
            ShiftRepr::Dense(dense_exponential(&skew))
        }
    };
    Ok(ShiftUnitary { flavor: Flavor::Exponential, repr, parallel: opts.parallel })
}

/// `exp(L̄)` through the eigendecomposition of the Hermitian matrix `H = i L̄`:
/// `exp(L̄) = V exp(−iΛ) V†`.
pub fn dense_exponential(skew: &SkewOperator) -> DMatrix<Complex64> {
    let h = skew.to_dense().map(|x| Complex64::new(0.0, x));
    let eig = SymmetricEigen::new(h);
    let v = eig.eigenvectors;
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l));
    let mut scaled = v.clone();
    for (mut col, ph) in scaled.column_iter_mut().zip(phases.iter()) {
        col *= *ph;
    }
    scaled * v.adjoint()
}

impl ShiftUnitary {
    pub fn n_sites(&self) -> usize {
        match &self.repr {
            ShiftRepr::Affine(op) => op.len(),
            ShiftRepr::Spectral { multipliers, .. } => multipliers.len(),
            ShiftRepr::Dense(m) => m.nrows(),
        }
    }

    pub fn set_parallel(&mut self, parallel: bool) {
        self.parallel = parallel;
    }

    /// Replaces `f` by `U f`.
    pub fn apply(&self, f: &mut [Complex64]) {
        match &self.repr {
            ShiftRepr::Affine(op) => {
                let src = f.to_vec();
                op.apply_affine(&src, f);
            }
            ShiftRepr::Spectral { multipliers, fft, .. } => spectral::apply_multipliers(f, multipliers, fft),
            ShiftRepr::Dense(m) => {
                let src = f.to_vec();
                let n = src.len();
                par::fill_indexed(self.parallel && n >= 256, f, |r| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (c, x) in src.iter().enumerate() {
                        acc += m[(r, c)] * x;
                    }
                    acc
                });
            }
        }
    }

    /// Materializes the operator as a dense matrix.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match &self.repr {
            ShiftRepr::Affine(op) => {
                let n = op.len();
                DMatrix::identity(n, n) + op.to_dense().map(|x| Complex64::new(x, 0.0))
            }
            ShiftRepr::Spectral { multipliers, .. } => spectral::circulant(multipliers),
            ShiftRepr::Dense(m) => m.clone(),
        }
    }

    /// Induced ∞-norm of `U†U − I`.
    pub fn unitarity_defect(&self) -> f64 {
        match &self.repr {
            ShiftRepr::Affine(op) => affine_defect(op),
            ShiftRepr::Spectral { multipliers, .. } => {
                // U†U is circulant with eigenvalues |m|²; each row sums the first column.
                let defect: Vec<Complex64> =
                    multipliers.iter().map(|m| Complex64::new(m.norm_sqr() - 1.0, 0.0)).collect();
                spectral::first_column(&defect).iter().map(|x| x.norm()).sum()
            }
            ShiftRepr::Dense(m) => unitarity_defect(m),
        }
    }

    /// Fourier multipliers, when the operator is stored spectrally.
    pub fn multipliers(&self) -> Option<&[Complex64]> {
        match &self.repr {
            ShiftRepr::Spectral { multipliers, .. } => Some(multipliers),
            _ => None,
        }
    }
}

/// One time step: component shifts followed by the site-local coin.
#[derive(Debug, Clone)]
pub struct StepUnitary {
    pub minus: ShiftUnitary,
    pub plus: ShiftUnitary,
    pub coin_angles: Vec<f64>,
    pub coin_variant: CoinVariant,
    coins: Vec<CoinMatrix>,
    parallel: bool,
}

impl StepUnitary {
    pub fn new(minus: ShiftUnitary, plus: ShiftUnitary, coin_angles: Vec<f64>, coin_variant: CoinVariant, parallel: bool) -> Result<Self> {
        let n = coin_angles.len();
        for got in [minus.n_sites(), plus.n_sites()] {
            if got != n {
                return Err(Error::Length { expected: n, got });
            }
        }
        let coins = coin_angles.iter().map(|&t| coin_matrix(t, coin_variant)).collect();
        Ok(StepUnitary { minus, plus, coin_angles, coin_variant, coins, parallel })
    }

    pub fn coin(&self, p: usize) -> &CoinMatrix {
        &self.coins[p]
    }

    /// Applies the shifts, then the coin at every site.
    pub fn apply(&self, phi_minus: &mut [Complex64], phi_plus: &mut [Complex64]) {
        let (um, up) = (&self.minus, &self.plus);
        par::join(self.parallel, || um.apply(phi_minus), || up.apply(phi_plus));
        let coins = &self.coins;
        par::zip_for_each(self.parallel, phi_minus, phi_plus, |p, m, q| {
            let (a, b) = coins[p].apply(*m, *q);
            *m = a;
            *q = b;
        });
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.minus.unitarity_defect().max(self.plus.unitarity_defect())
    }

    /// Full `2N × 2N` step matrix acting on `(Φ⁻, Φ⁺)` stacked in that order.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.coins.len();
        let (um, up) = (self.minus.to_dense(), self.plus.to_dense());
        let mut out = DMatrix::zeros(2 * n, 2 * n);
        for r in 0..n {
            let c = &self.coins[r].0;
            for col in 0..n {
                out[(r, col)] = c[0][0] * um[(r, col)];
                out[(r, n + col)] = c[0][1] * up[(r, col)];
                out[(n + r, col)] = c[1][0] * um[(r, col)];
                out[(n + r, n + col)] = c[1][1] * up[(r, col)];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::stencil::{assemble_stencil, Direction};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lattice(n: usize) -> LatticeSpec {
        LatticeSpec::new(n, 1.0).unwrap()
    }

    fn opts() -> UnitarizeOptions {
        UnitarizeOptions::default()
    }

    fn frobenius(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn auto_prefers_affine_for_pure_shifts() {
        let l = lattice(8);
        let u = unitarize(&assemble_stencil(&[1.0; 8], &l).unwrap(), Strategy::Auto, &l, &opts()).unwrap();
        assert_eq!(u.flavor, Flavor::Affine);
        let mut f: Vec<Complex64> = (0..8).map(|p| Complex64::new(p as f64, 0.0)).collect();
        u.apply(&mut f);
        assert_eq!(f[0], Complex64::new(1.0, 0.0));
        assert_eq!(f[7], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn affine_request_on_non_unitary_fails() {
        let l = lattice(8);
        let op = StencilOperator::new(vec![-1.0; 8], Direction::Forward);
        assert!(matches!(unitarize(&op, Strategy::Affine, &l, &opts()), Err(Error::NotAffine { .. })));
        let u = unitarize(&op, Strategy::Auto, &l, &opts()).unwrap();
        assert_eq!(u.flavor, Flavor::Exponential);
    }

    #[test]
    fn unit_exponential_multiplier_is_exp_i_sin_k() {
        let l = lattice(32);
        let u = unitarize(&assemble_stencil(&[1.0; 32], &l).unwrap(), Strategy::Exponential, &l, &opts()).unwrap();
        let mult = u.multipliers().unwrap();
        for (n, m) in mult.iter().enumerate() {
            let k = l.wavenumber(n);
            assert!((m - Complex64::from_polar(1.0, k.sin())).norm() < 1e-15);
        }
    }

    #[test]
    fn gem_like_multipliers() {
        let l = lattice(32);
        let theta: f64 = -0.9;
        let um = unitarize(&assemble_stencil(&[theta.exp(); 32], &l).unwrap(), Strategy::Auto, &l, &opts()).unwrap();
        let up = unitarize(&assemble_stencil(&[-(-theta).exp(); 32], &l).unwrap(), Strategy::Auto, &l, &opts()).unwrap();
        for n in 0..32 {
            let k = l.wavenumber(n);
            let want_m = Complex64::from_polar(1.0, theta.exp() * k.sin());
            let want_p = Complex64::from_polar(1.0, -(-theta).exp() * k.sin());
            assert!((um.multipliers().unwrap()[n] - want_m).norm() < 1e-14);
            assert!((up.multipliers().unwrap()[n] - want_p).norm() < 1e-14);
        }
    }

    #[test]
    fn dense_cap_is_enforced() {
        let l = lattice(16);
        let op = assemble_stencil(&(0..16).map(|p| 1.0 + p as f64 * 0.1).collect::<Vec<_>>(), &l).unwrap();
        let o = UnitarizeOptions { dense_cap: 8, ..opts() };
        assert_eq!(unitarize(&op, Strategy::Exponential, &l, &o).unwrap_err(), Error::Size { n: 16, cap: 8 });
    }

    #[test]
    fn random_fields_give_unitary_dense_operators() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [8, 64] {
            let l = lattice(n);
            for _ in 0..10 {
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                let a: Vec<f64> = (0..n).map(|_| sign * rng.gen_range(0.05..4.0)).collect();
                let u = unitarize(&assemble_stencil(&a, &l).unwrap(), Strategy::Exponential, &l, &opts()).unwrap();
                assert!(matches!(u.repr, ShiftRepr::Dense(_)));
                assert!(u.unitarity_defect() < 1e-12, "n={n}: {}", u.unitarity_defect());
            }
        }
    }

    #[test]
    fn dense_exponential_matches_taylor_series() {
        // Independent route: truncated power series of the dense skew matrix.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 8;
        let skew = SkewOperator { upper: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect() };
        let a = skew.to_dense().map(|x| Complex64::new(x, 0.0));
        let mut term = DMatrix::<Complex64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..40 {
            term = &term * &a / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        assert!(frobenius(&(dense_exponential(&skew) - sum)) < 1e-13);
    }

    #[test]
    fn spectral_and_dense_paths_agree() {
        for (n, a) in [(8, 1.3), (64, -0.4), (256, 2.7)] {
            let l = lattice(n);
            let op = assemble_stencil(&vec![a; n], &l).unwrap();
            let spectral = unitarize(&op, Strategy::Exponential, &l, &opts()).unwrap();
            let dense = unitarize(&op, Strategy::Exponential, &l, &UnitarizeOptions { path: OperatorPath::Dense, ..opts() }).unwrap();
            let diff = frobenius(&(spectral.to_dense() - dense.to_dense()));
            assert!(diff < 1e-12, "n={n}: {diff}");
            assert!(spectral.unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn step_applies_shift_then_coin() {
        let l = lattice(8);
        let o = opts();
        let um = unitarize(&assemble_stencil(&[1.0; 8], &l).unwrap(), Strategy::Affine, &l, &o).unwrap();
        let up = unitarize(&assemble_stencil(&[-1.0; 8], &l).unwrap(), Strategy::Affine, &l, &o).unwrap();
        let theta = 0.3;
        let step = StepUnitary::new(um, up, vec![theta; 8], CoinVariant::DeterminantOne, false).unwrap();
        let mut m = vec![Complex64::new(0.0, 0.0); 8];
        let mut p = m.clone();
        m[4] = Complex64::new(1.0, 0.0);
        step.apply(&mut m, &mut p);
        // Φ⁻ moved to site 3, then the coin mixed it into Φ⁺ at the same site.
        assert!((m[3] - Complex64::new(theta.cos(), 0.0)).norm() < 1e-15);
        assert!((p[3] - Complex64::new(0.0, -theta.sin())).norm() < 1e-15);
        assert_eq!(m.iter().filter(|x| x.norm() > 0.0).count(), 1);
    }

    #[test]
    fn dense_step_matches_application() {
        let l = lattice(16);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let am: Vec<f64> = (0..16).map(|_| rng.gen_range(0.2..2.0)).collect();
        let ap: Vec<f64> = (0..16).map(|_| -rng.gen_range(0.2..2.0)).collect();
        let o = opts();
        let um = unitarize(&assemble_stencil(&am, &l).unwrap(), Strategy::Exponential, &l, &o).unwrap();
        let up = unitarize(&assemble_stencil(&ap, &l).unwrap(), Strategy::Exponential, &l, &o).unwrap();
        let angles: Vec<f64> = (0..16).map(|_| rng.gen_range(0.0..1.0)).collect();
        let step = StepUnitary::new(um, up, angles, CoinVariant::Reflection, false).unwrap();
        let dense = step.to_dense();
        assert!(crate::lattice::unitarity_defect(&dense) < 1e-12);
        let v: Vec<Complex64> = (0..32).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let (mut m, mut p) = (v[..16].to_vec(), v[16..].to_vec());
        step.apply(&mut m, &mut p);
        let want = &dense * nalgebra::DVector::from_vec(v);
        for i in 0..16 {
            assert!((m[i] - want[i]).norm() < 1e-13);
            assert!((p[i] - want[16 + i]).norm() < 1e-13);
        }
    }
}
