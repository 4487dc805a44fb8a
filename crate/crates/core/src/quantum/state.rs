use nalgebra::DVector;
use num_complex::Complex64;

use crate::tolerance::{EPS_NORM, EPS_PROB};
use crate::{Error, Result};

/// Unit-norm vector of complex amplitudes over the basis `|q_1>, ..., |q_n>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("state must have at least one amplitude".into()));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidArgument("amplitudes must be finite".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > EPS_NORM {
            return Err(Error::Validation(format!(
                "squared amplitudes sum to {norm_sq}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    /// The computational basis state `|q_{index+1}>` of an `n`-state register.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range for {n} states")));
        }
        let mut v = DVector::zeros(n);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub(crate) fn from_unchecked(amplitudes: DVector<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Outcome probabilities `|alpha_j|^2` of a computational-basis measurement.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Full outcome distribution of a projective measurement.
    ///
    /// Outcome `j` has probability `sum_{l in Q_j} |alpha_l|^2`; its collapsed
    /// state is the projected component renormalised. Outcomes whose
    /// probability is at most `EPS_PROB` carry no collapsed state.
    pub fn measure(&self, partition: &MeasurementPartition) -> Result<Vec<MeasurementOutcome>> {
        if partition.dim() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "partition covers {} states but the state has {}",
                partition.dim(),
                self.dim()
            )));
        }
        let outcomes = partition
            .blocks()
            .iter()
            .enumerate()
            .map(|(outcome, block)| {
                let probability: f64 = block.iter().map(|&l| self.amplitudes[l].norm_sqr()).sum();
                let state = (probability > EPS_PROB).then(|| {
                    let scale = 1.0 / probability.sqrt();
                    let mut projected = DVector::zeros(self.dim());
                    for &l in block {
                        projected[l] = self.amplitudes[l] * scale;
                    }
                    PureState::from_unchecked(projected)
                });
                MeasurementOutcome { outcome, probability, state }
            })
            .collect();
        Ok(outcomes)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    /// 0-based index of the block that was observed.
    pub outcome: usize,
    pub probability: f64,
    pub state: Option<PureState>,
}

/// Disjoint, nonempty blocks of basis indices whose union is `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementPartition {
    blocks: Vec<Vec<usize>>,
    n: usize,
}

impl MeasurementPartition {
    pub fn new(blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidArgument(format!("partition block {b} is empty")));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidArgument(format!("index {i} out of range for {n} states")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidArgument(format!("index {i} appears in more than one block")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidArgument(format!("index {missing} not covered by the partition")));
        }
        Ok(Self { blocks, n })
    }

    /// One block per basis state.
    pub fn computational(n: usize) -> Self {
        Self { blocks: (0..n).map(|i| vec![i]).collect(), n }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}
