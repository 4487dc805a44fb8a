use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{identity_deviation, CMatrix, PureState};
use crate::tolerance::EPS_NORM;
use crate::{Error, Result};

/// Square complex matrix with `U^dagger U = I` (entrywise, within `EPS_NORM`).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: CMatrix,
}

impl UnitaryOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "operator must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let deviation = identity_deviation(&(matrix.adjoint() * &matrix));
        if deviation.is_nan() || deviation > EPS_NORM {
            return Err(Error::Validation(format!(
                "operator is not unitary: |U^dagger U - I| = {deviation:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: CMatrix::identity(n, n) }
    }

    pub(crate) fn from_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `|psi'> = U |psi>`.
    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        if state.dim() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "{}x{} operator applied to a {}-dimensional state",
                self.dim(),
                self.dim(),
                state.dim()
            )));
        }
        Ok(PureState::from_unchecked(&self.matrix * state.amplitudes()))
    }

    /// `self` after `first`, i.e. the matrix product `self * first`.
    pub fn after(&self, first: &UnitaryOperator) -> Result<UnitaryOperator> {
        if first.dim() != self.dim() {
            return Err(Error::InvalidArgument("dimension mismatch in composition".into()));
        }
        Ok(Self::from_unchecked(&self.matrix * &first.matrix))
    }

    pub fn tensor(&self, other: &UnitaryOperator) -> UnitaryOperator {
        Self::from_unchecked(self.matrix.kronecker(&other.matrix))
    }
}

/// Counterclockwise plane rotation `[[cos t, -sin t], [sin t, cos t]]`.
pub fn rotation_operator(theta: f64) -> Result<UnitaryOperator> {
    if !theta.is_finite() {
        return Err(Error::InvalidArgument(format!("rotation angle must be finite, got {theta}")));
    }
    let (s, c) = theta.sin_cos();
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ],
    );
    UnitaryOperator::new(m)
}

/// Square real matrix with entries in `[0, 1]` whose columns sum to 1.
///
/// Entry `(i, j)` is the probability of moving from state `j` to state `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    matrix: DMatrix<f64>,
}

impl StochasticMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "stochastic matrix must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = matrix.nrows();
        for j in 0..n {
            for i in 0..n {
                let x = matrix[(i, j)];
                if !(0.0..=1.0 + EPS_NORM).contains(&x) {
                    return Err(Error::Validation(format!(
                        "entry ({}, {}) = {x} is not a probability",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        for (j, col) in matrix.column_iter().enumerate() {
            let sum: f64 = col.iter().sum();
            if (sum - 1.0).abs() > EPS_NORM {
                return Err(Error::Validation(format!(
                    "column {} sums to {sum}, expected 1",
                    j + 1
                )));
            }
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: DMatrix::identity(n, n) }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// True if every entry is exactly 0 or 1.
    pub fn is_deterministic(&self) -> bool {
        self.matrix.iter().all(|&x| x == 0.0 || x == 1.0)
    }
}
