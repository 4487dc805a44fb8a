use super::{identity_deviation, CMatrix, DensityMatrix, UnitaryOperator};
use crate::tolerance::EPS_NORM;
use crate::{Error, Result};

/// `max |(sum_j E_j^dagger E_j) - I|` over entries.
pub fn completeness_deviation(elements: &[CMatrix]) -> f64 {
    let Some(first) = elements.first() else {
        return f64::INFINITY;
    };
    let n = first.ncols();
    let sum = elements
        .iter()
        .fold(CMatrix::zeros(n, n), |acc, e| acc + e.adjoint() * e);
    identity_deviation(&sum)
}

/// Ordered operation elements `E_1..E_l` with `sum_j E_j^dagger E_j = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    elements: Vec<CMatrix>,
}

impl Superoperator {
    pub fn new(elements: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidArgument("superoperator needs at least one element".into()));
        };
        let n = first.nrows();
        if n == 0 {
            return Err(Error::InvalidArgument("operation elements must be nonempty".into()));
        }
        for (j, e) in elements.iter().enumerate() {
            if e.nrows() != n || e.ncols() != n {
                return Err(Error::InvalidArgument(format!(
                    "element {} is {}x{}, expected {n}x{n}",
                    j + 1,
                    e.nrows(),
                    e.ncols()
                )));
            }
        }
        let deviation = completeness_deviation(&elements);
        // NaN entries must fail too
        if deviation.is_nan() || deviation > EPS_NORM {
            return Err(Error::InvalidSuperoperator { deviation });
        }
        Ok(Self { elements })
    }

    /// The single-element channel `{U}`.
    pub fn from_unitary(unitary: &UnitaryOperator) -> Self {
        Self { elements: vec![unitary.matrix().clone()] }
    }

    pub fn identity(n: usize) -> Self {
        Self { elements: vec![CMatrix::identity(n, n)] }
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    /// `rho' = sum_j E_j rho E_j^dagger`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "{}-dimensional channel applied to a {}-dimensional state",
                self.dim(),
                rho.dim()
            )));
        }
        Ok(DensityMatrix::from_unchecked(self.apply_matrix(rho.matrix())))
    }

    pub(crate) fn apply_matrix(&self, rho: &CMatrix) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for e in &self.elements {
            out += e * rho * e.adjoint();
        }
        out
    }

    /// All pairwise products `E1_i (x) E2_j`, ordered with `i` major.
    pub fn tensor(&self, other: &Superoperator) -> Superoperator {
        let elements = self
            .elements
            .iter()
            .flat_map(|a| other.elements.iter().map(move |b| a.kronecker(b)))
            .collect();
        Self { elements }
    }
}
