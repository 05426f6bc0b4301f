use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `(L f)_p = a_p (f_{p+1} − f_p)`
    Forward,
    /// `(L f)_p = a_p (f_p − f_{p−1})`
    Backward,
}

/// Two-banded first-order derivative stencil over the periodic lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilOperator {
    pub coeffs: Vec<f64>,
    pub direction: Direction,
}

impl StencilOperator {
    pub fn new(coeffs: Vec<f64>, direction: Direction) -> Self {
        StencilOperator { coeffs, direction }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let n = f.len();
        let a = &self.coeffs;
        (0..n)
            .map(|p| match self.direction {
                Direction::Forward => (f[(p + 1) % n] - f[p]) * a[p],
                Direction::Backward => (f[p] - f[(p + n - 1) % n]) * a[p],
            })
            .collect()
    }

    /// `(1 + L) f`, evaluated so that `a = ±1` gives an exact cyclic shift.
    pub fn apply_affine(&self, f: &[Complex64], out: &mut [Complex64]) {
        let n = f.len();
        let a = &self.coeffs;
        match self.direction {
            Direction::Forward => {
                for p in 0..n {
                    let next = f[(p + 1) % n];
                    out[p] = if a[p] == 1.0 { next } else { f[p] * (1.0 - a[p]) + next * a[p] };
                }
            }
            Direction::Backward => {
                for p in 0..n {
                    let prev = f[(p + n - 1) % n];
                    out[p] = if a[p] == -1.0 { prev } else { f[p] * (1.0 + a[p]) - prev * a[p] };
                }
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (p, &a) in self.coeffs.iter().enumerate() {
            match self.direction {
                Direction::Forward => {
                    m[(p, p)] -= a;
                    m[(p, (p + 1) % n)] += a;
                }
                Direction::Backward => {
                    m[(p, p)] += a;
                    m[(p, (p + n - 1) % n)] -= a;
                }
            }
        }
        m
    }
}

/// Builds the upwind stencil for a field of advection coefficients: forward
/// where `a ≥ 0`, backward where `a < 0`. Fields that change sign are rejected.
pub fn assemble_stencil(a_field: &[f64], lattice: &LatticeSpec) -> Result<StencilOperator> {
    if a_field.len() != lattice.n_sites {
        return Err(Error::Length { expected: lattice.n_sites, got: a_field.len() });
    }
    let nonneg = a_field[0] >= 0.0;
    if let Some(p) = a_field.iter().position(|&a| (a >= 0.0) != nonneg) {
        return Err(Error::MixedSign { first: 0, second: p });
    }
    let direction = if nonneg { Direction::Forward } else { Direction::Backward };
    Ok(StencilOperator::new(a_field.to_vec(), direction))
}

/// Real skew-symmetric periodic operator with couplings only between
/// neighbours: `(L̄ f)_p = b_p f_{p+1} − b_{p−1} f_{p−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewOperator {
    /// `b_p`, the coupling between sites `p` and `p + 1`.
    pub upper: Vec<f64>,
}

impl SkewOperator {
    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let n = f.len();
        let b = &self.upper;
        (0..n)
            .map(|p| {
                let q = (p + n - 1) % n;
                f[(p + 1) % n] * b[p] - f[q] * b[q]
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.upper.len();
        let mut m = DMatrix::zeros(n, n);
        for (p, &b) in self.upper.iter().enumerate() {
            m[(p, (p + 1) % n)] += b;
            m[((p + 1) % n, p)] -= b;
        }
        m
    }

    /// The common coupling if every `b_p` agrees with `b_0` to within `rel_tol`.
    pub fn uniform_coupling(&self, rel_tol: f64) -> Option<f64> {
        let b0 = *self.upper.first()?;
        let tol = rel_tol * b0.abs().max(f64::MIN_POSITIVE);
        self.upper.iter().all(|&b| (b - b0).abs() <= tol).then_some(b0)
    }
}

/// `(L − L†)/2` of a two-banded stencil. For real coefficients the diagonal
/// cancels exactly, leaving `½(a_p f_{p+1} − a_{p−1} f_{p−1})` for forward
/// stencils and `½(a_{p+1} f_{p+1} − a_p f_{p−1})` for backward ones.
pub fn antisymmetrize(op: &StencilOperator) -> SkewOperator {
    let n = op.len();
    let a = &op.coeffs;
    let upper = match op.direction {
        Direction::Forward => a.iter().map(|&x| 0.5 * x).collect(),
        Direction::Backward => (0..n).map(|p| 0.5 * a[(p + 1) % n]).collect(),
    };
    SkewOperator { upper }
}

/// `(M − M†)/2` of an arbitrary square matrix.
pub fn antisymmetric_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m - m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Induced ∞-norm of `(1 + L)†(1 + L) − I`, computed from the two bands.
pub fn affine_defect(op: &StencilOperator) -> f64 {
    let n = op.len();
    let a = &op.coeffs;
    // diag[q] = (B†B)_{qq} − 1, off[q] = (B†B)_{q,q+1}; the product is real symmetric.
    let (diag, off): (Vec<f64>, Vec<f64>) = match op.direction {
        Direction::Forward => (0..n)
            .map(|q| {
                let prev = a[(q + n - 1) % n];
                ((1.0 - a[q]).powi(2) + prev * prev - 1.0, (1.0 - a[q]) * a[q])
            })
            .unzip(),
        Direction::Backward => (0..n)
            .map(|q| {
                let next = a[(q + 1) % n];
                ((1.0 + a[q]).powi(2) + next * next - 1.0, -next * (1.0 + next))
            })
            .unzip(),
    };
    (0..n)
        .map(|q| diag[q].abs() + off[q].abs() + off[(q + n - 1) % n].abs())
        .fold(0.0, f64::max)
}

pub fn affine_is_unitary(op: &StencilOperator, tol: f64) -> bool {
    affine_defect(op) < tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::unitarity_defect;
    use proptest::prelude::*;

    fn lattice(n: usize) -> LatticeSpec {
        LatticeSpec::new(n, 1.0).unwrap()
    }

    fn complexify(m: &DMatrix<f64>) -> DMatrix<Complex64> {
        m.map(|x| Complex64::new(x, 0.0))
    }

    #[test]
    fn forward_unit_stencil() {
        let op = assemble_stencil(&[1.0; 4], &lattice(4)).unwrap();
        assert_eq!(op.direction, Direction::Forward);
        let m = op.to_dense();
        #[rustfmt::skip]
        let want = DMatrix::from_row_slice(4, 4, &[
            -1.0, 1.0, 0.0, 0.0,
            0.0, -1.0, 1.0, 0.0,
            0.0, 0.0, -1.0, 1.0,
            1.0, 0.0, 0.0, -1.0,
        ]);
        assert_eq!(m, want);
    }

    #[test]
    fn backward_negative_stencil() {
        let op = assemble_stencil(&[-1.0; 4], &lattice(4)).unwrap();
        assert_eq!(op.direction, Direction::Backward);
        let f: Vec<Complex64> = (0..4).map(|p| Complex64::new(p as f64 * p as f64, 1.0)).collect();
        let lf = op.apply(&f);
        for p in 0..4 {
            assert_eq!(lf[p], f[(p + 3) % 4] - f[p]);
        }
    }

    #[test]
    fn mixed_sign_is_rejected() {
        let e = assemble_stencil(&[1.0, 0.5, -0.2, 1.0], &lattice(4)).unwrap_err();
        assert_eq!(e, Error::MixedSign { first: 0, second: 2 });
        assert!(matches!(assemble_stencil(&[1.0; 3], &lattice(4)), Err(Error::Length { .. })));
    }

    #[test]
    fn scaled_forward_stencil() {
        let theta: f64 = -0.7;
        let op = assemble_stencil(&[theta.exp(); 6], &lattice(6)).unwrap();
        let unit = assemble_stencil(&[1.0; 6], &lattice(6)).unwrap();
        assert_eq!(op.to_dense(), unit.to_dense() * theta.exp());
    }

    #[test]
    fn unit_forward_antisymmetrizes_to_centered_difference() {
        let skew = antisymmetrize(&assemble_stencil(&[1.0; 8], &lattice(8)).unwrap());
        let f: Vec<Complex64> = (0..8).map(|p| Complex64::new((p as f64).sin(), p as f64)).collect();
        let g = skew.apply(&f);
        for p in 0..8 {
            let want = (f[(p + 1) % 8] - f[(p + 7) % 8]) * 0.5;
            assert!((g[p] - want).norm() < 1e-15);
        }
    }

    #[test]
    fn antisymmetric_part_examples() {
        let skew = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, -2.0, -1.0, 0.0, 3.0, 2.0, -3.0, 0.0]);
        let c = complexify(&skew);
        assert_eq!(antisymmetric_part(&c), c);
        let sym = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 5.0, 4.0, 3.0, 4.0, 9.0]);
        assert_eq!(antisymmetric_part(&complexify(&sym)), DMatrix::zeros(3, 3));
    }

    #[test]
    fn affine_admissibility_examples() {
        let l = lattice(8);
        assert!(affine_is_unitary(&assemble_stencil(&[1.0; 8], &l).unwrap(), 1e-12));
        assert!(affine_is_unitary(&assemble_stencil(&[-1.0; 8], &l).unwrap(), 1e-12));
        assert!(!affine_is_unitary(&StencilOperator::new(vec![-1.0; 8], Direction::Forward), 1e-12));
        assert!(!affine_is_unitary(&assemble_stencil(&[0.5; 8], &l).unwrap(), 1e-12));
    }

    proptest! {
        #[test]
        fn banded_antisymmetrization_matches_dense(a in proptest::collection::vec(0.01f64..3.0, 4..24), backward in any::<bool>()) {
            let a: Vec<f64> = if backward { a.iter().map(|x| -x).collect() } else { a };
            let op = assemble_stencil(&a, &lattice(a.len())).unwrap();
            let dense = op.to_dense();
            let want = (&dense - dense.transpose()) * 0.5;
            prop_assert_eq!(antisymmetrize(&op).to_dense(), want);
        }

        #[test]
        fn banded_affine_defect_matches_dense(a in proptest::collection::vec(-2.0f64..2.0, 4..16), backward in any::<bool>()) {
            let dir = if backward { Direction::Backward } else { Direction::Forward };
            let op = StencilOperator::new(a.clone(), dir);
            let n = a.len();
            let b = complexify(&(DMatrix::identity(n, n) + op.to_dense()));
            let dense = unitarity_defect(&b);
            prop_assert!((affine_defect(&op) - dense).abs() < 1e-12 * (1.0 + dense));
        }
    }

    /// Continuum consistency: L̄ f → ε (a f' + ½ a' f) with O(ε²) error.
    #[test]
    fn antisymmetrization_reproduces_half_derivative_term() {
        let a = |x: f64| 1.5 + x.sin();
        let da = |x: f64| x.cos();
        let f = |x: f64| (2.0 * x).cos() + 0.3 * x.sin();
        let df = |x: f64| -2.0 * (2.0 * x).sin() + 0.3 * x.cos();
        let err = |n: usize| {
            let eps = 2.0 * std::f64::consts::PI / n as f64;
            let l = LatticeSpec::new(n, eps).unwrap();
            let coeffs: Vec<f64> = (0..n).map(|p| a(l.x1(p))).collect();
            let samples: Vec<Complex64> = (0..n).map(|p| Complex64::new(f(l.x1(p)), 0.0)).collect();
            let skew = antisymmetrize(&assemble_stencil(&coeffs, &l).unwrap());
            let g = skew.apply(&samples);
            (0..n)
                .map(|p| {
                    let x = l.x1(p);
                    (g[p].re - eps * (a(x) * df(x) + 0.5 * da(x) * f(x))).abs()
                })
                .fold(0.0, f64::max)
        };
        for n in [64, 128, 256] {
            let ratio = err(n) / err(2 * n);
            assert!((3.5..=4.5).contains(&ratio), "n={n}: ratio {ratio}");
        }
    }
}
