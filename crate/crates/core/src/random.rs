//! Seeded generators for random valid objects, used by the `verify`
//! subcommand and the property tests.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::classical::RtPfa;
use crate::quantum::{CMatrix, DensityMatrix, PureState, StochasticMatrix, Superoperator, UnitaryOperator};
use crate::Alphabet;

fn complex_gaussianish<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Unitary factor of the QR decomposition of a random complex matrix.
pub fn unitary<R: Rng>(rng: &mut R, n: usize) -> UnitaryOperator {
    let q = complex_gaussianish(rng, n, n).qr().q();
    UnitaryOperator::new(q).expect("QR factor is unitary")
}

pub fn pure_state<R: Rng>(rng: &mut R, n: usize) -> PureState {
    let v = complex_gaussianish(rng, n, 1).column(0).into_owned();
    let norm = v.norm();
    PureState::new(v / Complex64::new(norm, 0.0)).expect("normalised")
}

/// `G G^dagger / tr` for a random `n x rank` matrix `G`.
pub fn density<R: Rng>(rng: &mut R, n: usize, rank: usize) -> DensityMatrix {
    let g = complex_gaussianish(rng, n, rank.max(1));
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr).expect("Gram matrix is a density matrix")
}

/// Splits the orthonormal columns of a random `(l n) x n` isometry into
/// `l` stacked `n x n` operation elements.
pub fn superoperator<R: Rng>(rng: &mut R, n: usize, l: usize) -> Superoperator {
    let g = complex_gaussianish(rng, l * n, n);
    let isometry = g.qr().q();
    let elements = (0..l).map(|j| isometry.rows(j * n, n).into_owned()).collect();
    Superoperator::new(elements).expect("blocks of an isometry are complete")
}

/// Column-stochastic matrix with roughly a quarter of its entries zeroed.
pub fn stochastic<R: Rng>(rng: &mut R, n: usize) -> StochasticMatrix {
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut col: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.25) { 0.0 } else { rng.random::<f64>() })
            .collect();
        if col.iter().all(|&x| x == 0.0) {
            col[rng.random_range(0..n)] = 1.0;
        }
        let total: f64 = col.iter().sum();
        for (i, x) in col.into_iter().enumerate() {
            m[(i, j)] = x / total;
        }
    }
    StochasticMatrix::new(m).expect("normalised columns")
}

pub fn pfa<R: Rng>(rng: &mut R, n: usize, alphabet: &Alphabet) -> RtPfa {
    let transitions = (0..alphabet.len()).map(|_| stochastic(rng, n)).collect();
    let accepting: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    RtPfa::new(alphabet.clone(), transitions, &accepting).expect("valid PFA")
}

pub fn word<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| alphabet.symbols()[rng.random_range(0..alphabet.len())]).collect()
}

/// Random Hermitian matrix with unit Frobenius norm.
pub fn hermitian_direction<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = complex_gaussianish(rng, n, n);
    let h = &g + g.adjoint();
    let norm = h.norm();
    h / Complex64::new(norm, 0.0)
}
