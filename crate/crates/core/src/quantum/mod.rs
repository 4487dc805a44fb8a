//! Dense complex linear algebra for quantum registers: pure states,
//! unitaries, projective measurement, density matrices and superoperators.
//!
//! Every value is validated on construction and immutable afterwards.

mod channel;
mod density;
mod operator;
mod state;

pub use channel::{completeness_deviation, Superoperator};
pub use density::DensityMatrix;
pub use operator::{rotation_operator, StochasticMatrix, UnitaryOperator};
pub use state::{MeasurementOutcome, MeasurementPartition, PureState};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Largest entrywise modulus of `m - I`.
pub(crate) fn identity_deviation(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            worst = worst.max((m[(i, j)] - target).norm());
        }
    }
    worst
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Lifts a real matrix to a complex one.
pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}
