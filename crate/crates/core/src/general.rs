//! General QFAs: one superoperator per symbol acting on a density matrix.
//!
//! This model subsumes both the measure-once QFA (single-element channels)
//! and the real-time PFA (one operation element per source state), and it is
//! closed under tensor-product composition.

use crate::classical::{normalize_accepting, RtPfa};
use crate::quantum::{complexify, DensityMatrix, StochasticMatrix, Superoperator};
use crate::realtime::MeasureOnceQfa;
use crate::tolerance::EPS_NORM;
use crate::{Alphabet, Automaton, Error, Result};

use nalgebra::DMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralQfa {
    alphabet: Alphabet,
    channels: Vec<Superoperator>,
    accepting: Vec<usize>,
}

impl GeneralQfa {
    /// `channels[i]` is applied on reading `alphabet.symbols()[i]`; the
    /// initial state is `|q_1><q_1|`.
    pub fn new(alphabet: Alphabet, channels: Vec<Superoperator>, accepting: &[usize]) -> Result<Self> {
        if channels.len() != alphabet.len() {
            return Err(Error::Validation(format!(
                "{} channels for an alphabet of {} symbols",
                channels.len(),
                alphabet.len()
            )));
        }
        let n = channels[0].dim();
        if let Some(i) = channels.iter().position(|c| c.dim() != n) {
            return Err(Error::Validation(format!(
                "channel for '{}' has dimension {}, expected {n}",
                alphabet.symbols()[i],
                channels[i].dim()
            )));
        }
        let accepting = normalize_accepting(accepting, n)?;
        Ok(Self { alphabet, channels, accepting })
    }

    pub fn channels(&self) -> &[Superoperator] {
        &self.channels
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    /// `rho_0, rho_1, ..., rho_|w|`.
    pub fn trajectory(&self, word: &str) -> Result<Vec<DensityMatrix>> {
        let symbols = self.alphabet.encode(word)?;
        let mut out = Vec::with_capacity(symbols.len() + 1);
        out.push(DensityMatrix::basis(self.state_count(), 0)?);
        for s in symbols {
            let next = self.channels[s].apply(out.last().expect("nonempty"))?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn final_density(&self, word: &str) -> Result<DensityMatrix> {
        let symbols = self.alphabet.encode(word)?;
        let mut rho = DensityMatrix::basis(self.state_count(), 0)?;
        for s in symbols {
            rho = self.channels[s].apply(&rho)?;
        }
        Ok(rho)
    }
}

impl Automaton for GeneralQfa {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn state_count(&self) -> usize {
        self.channels[0].dim()
    }

    /// `sum_{q_j in Q_a} rho(j, j)` after the last symbol.
    fn acceptance(&self, word: &str) -> Result<f64> {
        let rho = self.final_density(word)?;
        let total = self
            .accepting
            .iter()
            .fold(num_complex::Complex64::new(0.0, 0.0), |acc, &q| acc + rho.matrix()[(q, q)]);
        if total.im.abs() > EPS_NORM {
            return Err(Error::Validation(format!(
                "accepting diagonal has imaginary part {:.3e}",
                total.im
            )));
        }
        Ok(total.re)
    }
}

/// Channel with `n` elements, where `E_j` is zero except for column `j`,
/// which holds the entrywise square roots of column `j` of `a`.
pub fn stochastic_channel(a: &StochasticMatrix) -> Superoperator {
    let n = a.dim();
    let elements = (0..n)
        .map(|j| {
            let mut e = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                e[(i, j)] = a.matrix()[(i, j)].sqrt();
            }
            complexify(&e)
        })
        .collect();
    Superoperator::new(elements).expect("columns of a stochastic matrix give a complete element set")
}

/// Same states, same accepting set, one [`stochastic_channel`] per symbol.
pub fn pfa_to_gqfa(pfa: &RtPfa) -> GeneralQfa {
    let channels = pfa.transitions().iter().map(stochastic_channel).collect();
    GeneralQfa::new(pfa.alphabet().clone(), channels, pfa.accepting()).expect("shape carried over from a valid PFA")
}

/// Embeds a measure-once QFA with the single-element channels `{U_sigma}`.
pub fn unitary_to_gqfa(qfa: &MeasureOnceQfa) -> GeneralQfa {
    let channels = qfa.transitions().iter().map(Superoperator::from_unitary).collect();
    GeneralQfa::new(qfa.alphabet().clone(), channels, qfa.accepting()).expect("shape carried over from a valid QFA")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcceptRule {
    /// Accept iff both components are in accepting states.
    Conjunction,
    /// Accept iff at least one component is in an accepting state.
    Disjunction,
}

/// Runs two machines side by side on the tensor-product register. State
/// `(i, j)` has index `i * n2 + j`.
pub fn parallel_compose(first: &GeneralQfa, second: &GeneralQfa, rule: AcceptRule) -> Result<GeneralQfa> {
    if first.alphabet() != second.alphabet() {
        return Err(Error::InvalidArgument(format!(
            "alphabets differ: {} vs {}",
            first.alphabet(),
            second.alphabet()
        )));
    }
    let (n1, n2) = (first.state_count(), second.state_count());
    let channels = first
        .channels
        .iter()
        .zip(&second.channels)
        .map(|(a, b)| a.tensor(b))
        .collect();
    let in1 = |i: usize| first.accepting.binary_search(&i).is_ok();
    let in2 = |j: usize| second.accepting.binary_search(&j).is_ok();
    let accepting: Vec<usize> = (0..n1)
        .flat_map(|i| (0..n2).map(move |j| (i, j)))
        .filter(|&(i, j)| match rule {
            AcceptRule::Conjunction => in1(i) && in2(j),
            AcceptRule::Disjunction => in1(i) || in2(j),
        })
        .map(|(i, j)| i * n2 + j)
        .collect();
    GeneralQfa::new(first.alphabet().clone(), channels, &accepting)
}

/// One-state machine that accepts everything; the neutral element of
/// conjunctive composition.
pub fn accept_all(alphabet: Alphabet) -> GeneralQfa {
    let channels = vec![Superoperator::identity(1); alphabet.len()];
    GeneralQfa::new(alphabet, channels, &[0]).expect("trivial machine")
}
