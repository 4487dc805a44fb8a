use nalgebra::linalg::SymmetricEigen;
use nalgebra::DVector;
use num_complex::Complex64;

use super::{CMatrix, PureState};
use crate::tolerance::{EPS_NORM, EPS_PROB};
use crate::{Error, Result};

/// Trace-one, Hermitian, positive semidefinite matrix describing a mixed state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let rho = Self { matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// `|psi><psi|`.
    pub fn from_pure(state: &PureState) -> Self {
        let v = state.amplitudes();
        Self { matrix: v * v.adjoint() }
    }

    /// `|q_{index+1}><q_{index+1}|`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        Ok(Self::from_pure(&PureState::basis(n, index)?))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Real parts of the diagonal: the computational-basis outcome distribution.
    pub fn diagonal_probabilities(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.matrix[(j, j)].re).collect()
    }

    /// Largest entrywise modulus of `rho - rho^dagger`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part `(rho + rho^dagger) / 2`.
    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_eigen().eigenvalues.min()
    }

    fn hermitian_eigen(&self) -> SymmetricEigen<Complex64, nalgebra::Dyn> {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(h)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "density matrix must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("density matrix has non-finite entries".into()));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > EPS_NORM || tr.im.abs() > EPS_NORM {
            return Err(Error::Validation(format!("trace is {tr}, expected 1")));
        }
        let herm = self.hermiticity_deviation();
        if herm > EPS_NORM {
            return Err(Error::Validation(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -EPS_NORM {
            return Err(Error::Validation(format!(
                "not positive semidefinite (minimum eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(())
    }

    /// One ensemble `{(p_j, |psi_j>)}` realising this state, read off the
    /// eigendecomposition. Ensembles are not unique; this is the spectral one.
    /// Components with weight at most `EPS_PROB` are dropped.
    pub fn ensemble(&self) -> Vec<(f64, PureState)> {
        let eig = self.hermitian_eigen();
        let mut out: Vec<(f64, PureState)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > EPS_PROB)
            .map(|(k, &p)| {
                let col: DVector<Complex64> = eig.eigenvectors.column(k).into_owned();
                let norm = col.norm();
                (p, PureState::from_unchecked(col / Complex64::new(norm, 0.0)))
            })
            .collect();
        out.sort_by(|a, b| b.0.total_cmp(&a.0));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::max_abs_diff;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn basis_projector() {
        let rho = DensityMatrix::from_pure(&PureState::basis(2, 0).unwrap());
        assert_eq!(rho.matrix(), &CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]));
        rho.validate().unwrap();
    }

    #[test]
    fn uniform_superposition_outer_product() {
        let rho = DensityMatrix::from_pure(&PureState::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap());
        assert!(rho.matrix().iter().all(|z| (z - c(0.5)).norm() < 1e-15));
    }

    #[test]
    fn three_four_five_outer_product() {
        let rho = DensityMatrix::from_pure(&PureState::from_real(&[0.6, 0.8]).unwrap());
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.36), c(0.48), c(0.48), c(0.64)]);
        assert!(max_abs_diff(rho.matrix(), &expected) < 1e-15);
        // rank one
        assert_eq!(rho.ensemble().len(), 1);
    }

    #[test]
    fn pure_state_of_complex_amplitudes_is_valid() {
        let v = DVector::from_vec(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let rho = DensityMatrix::from_pure(&PureState::new(v).unwrap());
        rho.validate().unwrap();
        assert!((rho.matrix()[(0, 1)] - Complex64::new(0.0, -0.48)).norm() < 1e-15);
    }

    #[test]
    fn invalid_matrices_rejected() {
        let trace_two = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(trace_two).is_err());
        let not_herm = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.3), c(0.0), c(0.5)]);
        assert!(DensityMatrix::new(not_herm).is_err());
        let not_psd = CMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        let err = DensityMatrix::new(not_psd).unwrap_err().to_string();
        assert!(err.contains("semidefinite"), "{err}");
    }

    #[test]
    fn ensemble_reconstructs_mixture() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.7), c(0.1), c(0.1), c(0.3)]);
        let rho = DensityMatrix::new(m.clone()).unwrap();
        let ens = rho.ensemble();
        let total: f64 = ens.iter().map(|(p, _)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let rebuilt = ens.iter().fold(CMatrix::zeros(2, 2), |acc, (p, s)| {
            acc + DensityMatrix::from_pure(s).matrix() * c(*p)
        });
        assert!(max_abs_diff(&rebuilt, &m) < 1e-12);
    }
}
