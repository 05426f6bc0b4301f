use num_complex::Complex64;
use std::fmt;

/// Which 2×2 mass coin to apply after the shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoinVariant {
    /// `[[cos θ, −i sin θ], [i sin θ, −cos θ]]`: Hermitian, squares to one, det −1.
    Reflection,
    /// `[[cos θ, −i sin θ], [−i sin θ, cos θ]] = exp(−iθσ₁)`, det +1.
    #[default]
    DeterminantOne,
}

impl fmt::Display for CoinVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoinVariant::Reflection => "reflection",
            CoinVariant::DeterminantOne => "determinant-one",
        })
    }
}

impl std::str::FromStr for CoinVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "reflection" => Ok(CoinVariant::Reflection),
            "determinant-one" => Ok(CoinVariant::DeterminantOne),
            _ => Err(format!("unknown coin variant '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix(pub [[Complex64; 2]; 2]);

impl CoinMatrix {
    #[inline]
    pub fn apply(&self, minus: Complex64, plus: Complex64) -> (Complex64, Complex64) {
        let m = &self.0;
        (m[0][0] * minus + m[0][1] * plus, m[1][0] * minus + m[1][1] * plus)
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn adjoint(&self) -> CoinMatrix {
        let m = &self.0;
        CoinMatrix([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn mul(&self, rhs: &CoinMatrix) -> CoinMatrix {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        CoinMatrix(out)
    }

    /// Largest entry-wise deviation from `other`.
    pub fn max_diff(&self, other: &CoinMatrix) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    pub fn identity() -> CoinMatrix {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        CoinMatrix([[o, z], [z, o]])
    }
}

pub fn coin_matrix(theta: f64, variant: CoinVariant) -> CoinMatrix {
    let (s, c) = theta.sin_cos();
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    match variant {
        CoinVariant::Reflection => CoinMatrix([[re(c), im(-s)], [im(s), re(-c)]]),
        CoinVariant::DeterminantOne => CoinMatrix([[re(c), im(-s)], [im(-s), re(c)]]),
    }
}
