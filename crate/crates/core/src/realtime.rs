//! Measure-once quantum finite automata and the language queries built on
//! them: cutpoint classification, cutpoint-0 nondeterminism, exact promise
//! checks, cutpoint separation witnesses and seeded Monte Carlo runs.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::classical::normalize_accepting;
use crate::quantum::{PureState, UnitaryOperator};
use crate::rng;
use crate::tolerance::{EPS_EXACT, EPS_PROB, MAX_INPUT_LEN};
use crate::{Alphabet, Automaton, Error, Result};

/// `{Q, Sigma, {U_sigma}, q_1, Q_a}`: one unitary per symbol, a single
/// computational-basis measurement after the last symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureOnceQfa {
    alphabet: Alphabet,
    transitions: Vec<UnitaryOperator>,
    accepting: Vec<usize>,
}

impl MeasureOnceQfa {
    /// `transitions[i]` is applied on reading `alphabet.symbols()[i]`.
    pub fn new(alphabet: Alphabet, transitions: Vec<UnitaryOperator>, accepting: &[usize]) -> Result<Self> {
        if transitions.len() != alphabet.len() {
            return Err(Error::Validation(format!(
                "{} transition operators for an alphabet of {} symbols",
                transitions.len(),
                alphabet.len()
            )));
        }
        let n = transitions[0].dim();
        if let Some(i) = transitions.iter().position(|u| u.dim() != n) {
            return Err(Error::Validation(format!(
                "transition for '{}' has dimension {}, expected {n}",
                alphabet.symbols()[i],
                transitions[i].dim()
            )));
        }
        let accepting = normalize_accepting(accepting, n)?;
        Ok(Self { alphabet, transitions, accepting })
    }

    pub fn transitions(&self) -> &[UnitaryOperator] {
        &self.transitions
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    fn initial_amplitudes(&self) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.state_count());
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// The register state after reading `word`, before measurement.
    pub fn final_state(&self, word: &str) -> Result<PureState> {
        let symbols = self.alphabet.encode(word)?;
        let mut v = self.initial_amplitudes();
        let mut next = v.clone();
        for s in symbols {
            next.gemv(Complex64::new(1.0, 0.0), self.transitions[s].matrix(), &v, Complex64::new(0.0, 0.0));
            std::mem::swap(&mut v, &mut next);
        }
        Ok(PureState::from_unchecked(v))
    }

    fn accepting_mass(&self, amplitudes: &DVector<Complex64>) -> f64 {
        self.accepting.iter().map(|&q| amplitudes[q].norm_sqr()).sum()
    }

    /// Acceptance probabilities of `sigma^0, sigma^1, ..., sigma^k_max` for a
    /// single symbol, stepping the state once per power.
    pub fn power_acceptances(&self, symbol: char, k_max: usize) -> Result<Vec<f64>> {
        let s = self
            .alphabet
            .index_of(symbol)
            .ok_or_else(|| Error::InvalidInput(format!("symbol '{symbol}' not in alphabet {}", self.alphabet)))?;
        if k_max > MAX_INPUT_LEN {
            return Err(Error::InvalidInput(format!("input longer than {MAX_INPUT_LEN} symbols")));
        }
        let u = self.transitions[s].matrix();
        let mut v = self.initial_amplitudes();
        let mut next = v.clone();
        let mut out = Vec::with_capacity(k_max + 1);
        out.push(self.accepting_mass(&v));
        for _ in 0..k_max {
            next.gemv(Complex64::new(1.0, 0.0), u, &v, Complex64::new(0.0, 0.0));
            std::mem::swap(&mut v, &mut next);
            out.push(self.accepting_mass(&v));
        }
        Ok(out)
    }
}

impl Automaton for MeasureOnceQfa {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn state_count(&self) -> usize {
        self.transitions[0].dim()
    }

    fn acceptance(&self, word: &str) -> Result<f64> {
        Ok(self.accepting_mass(self.final_state(word)?.amplitudes()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    Nonmember,
    /// Within `EPS_PROB` of an interior cutpoint.
    AtCutpoint,
}

impl Membership {
    pub fn as_str(self) -> &'static str {
        match self {
            Membership::Member => "member",
            Membership::Nonmember => "nonmember",
            Membership::AtCutpoint => "at-cutpoint",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutpointVerdict {
    pub membership: Membership,
    pub probability: f64,
}

/// Tri-state cutpoint classification of an acceptance probability.
///
/// `member` iff `f > lambda + EPS_PROB`, `nonmember` iff `f < lambda - EPS_PROB`,
/// `at-cutpoint` otherwise. At the boundary cutpoints 0 and 1 the band
/// resolves to `nonmember`: `f` can never exceed 1, and `f` within `EPS_PROB`
/// of 0 is a zero probability, which cutpoint 0 rejects.
pub fn classify_probability(probability: f64, lambda: f64) -> Result<CutpointVerdict> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!("cutpoint must lie in [0, 1], got {lambda}")));
    }
    let membership = if probability > lambda + EPS_PROB {
        Membership::Member
    } else if probability < lambda - EPS_PROB || lambda == 0.0 || lambda == 1.0 {
        Membership::Nonmember
    } else {
        Membership::AtCutpoint
    };
    Ok(CutpointVerdict { membership, probability })
}

pub fn classify_cutpoint<M: Automaton + ?Sized>(machine: &M, word: &str, lambda: f64) -> Result<CutpointVerdict> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!("cutpoint must lie in [0, 1], got {lambda}")));
    }
    classify_probability(machine.acceptance(word)?, lambda)
}

/// Recognition with cutpoint 0: accept iff the probability is nonzero.
pub fn nondet_accepts<M: Automaton + ?Sized>(machine: &M, word: &str) -> Result<bool> {
    Ok(machine.acceptance(word)? > EPS_PROB)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PromiseReport {
    pub holds: bool,
    /// Largest of `1 - f` over yes-samples and `f` over no-samples.
    pub worst_deviation: f64,
}

/// Checks that every yes-sample is accepted with probability 1 and every
/// no-sample with probability 0, each within `EPS_EXACT`.
pub fn promise_check_exact<M, S>(machine: &M, yes: &[S], no: &[S]) -> Result<PromiseReport>
where
    M: Automaton + ?Sized,
    S: AsRef<str>,
{
    let mut worst = 0.0f64;
    for w in yes {
        worst = worst.max(1.0 - machine.acceptance(w.as_ref())?);
    }
    for w in no {
        worst = worst.max(machine.acceptance(w.as_ref())?);
    }
    Ok(PromiseReport { holds: worst <= EPS_EXACT, worst_deviation: worst })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationWitness {
    pub k: usize,
    pub probability: f64,
}

/// Smallest `k <= k_max` with `lambda1 < f(a^k) < lambda2` for a unary
/// machine, or `None` when the scan is exhausted.
pub fn separate_cutpoints(
    machine: &MeasureOnceQfa,
    lambda1: f64,
    lambda2: f64,
    k_max: usize,
) -> Result<Option<SeparationWitness>> {
    if !(0.0 <= lambda1 && lambda1 < lambda2 && lambda2 <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= lambda1 < lambda2 <= 1, got {lambda1}, {lambda2}"
        )));
    }
    if machine.alphabet().len() != 1 {
        return Err(Error::InvalidArgument("cutpoint separation needs a unary machine".into()));
    }
    let symbol = machine.alphabet().symbols()[0];
    let probs = machine.power_acceptances(symbol, k_max)?;
    Ok(probs
        .iter()
        .enumerate()
        .find(|(_, &f)| lambda1 < f && f < lambda2)
        .map(|(k, &probability)| SeparationWitness { k, probability }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub trials: u64,
    pub accepted: u64,
    pub frequency: f64,
    pub exact: f64,
    /// Binomial standard deviation `sqrt(f (1 - f) / trials)` of the exact value.
    pub sigma: f64,
    /// `|frequency - exact| <= 5 sigma` (or exact agreement when sigma is 0).
    pub within_five_sigma: bool,
}

/// Samples the final computational-basis measurement `trials` times.
///
/// Trial `i` draws from stream `(seed, i)`, so the result is a pure function
/// of `(machine, word, trials, seed)`.
pub fn monte_carlo_acceptance<M: Automaton + ?Sized>(
    machine: &M,
    word: &str,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let exact = machine.acceptance(word)?.clamp(0.0, 1.0);
    let accepted = (0..trials)
        .filter(|&i| rng::stream(seed, i).random::<f64>() < exact)
        .count() as u64;
    Ok(binomial_summary(trials, accepted, exact))
}

pub(crate) fn binomial_summary(trials: u64, accepted: u64, exact: f64) -> MonteCarloEstimate {
    let frequency = accepted as f64 / trials as f64;
    let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
    let within_five_sigma = (frequency - exact).abs() <= 5.0 * sigma + f64::EPSILON;
    MonteCarloEstimate { trials, accepted, frequency, exact, sigma, within_five_sigma }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{modp_machine, neq_machine, rotation_machine};
    use crate::quantum::rotation_operator;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn three_fifths() -> MeasureOnceQfa {
        rotation_machine((0.6f64).acos()).unwrap()
    }

    #[test]
    fn empty_word_accepted_with_certainty() {
        assert_eq!(three_fifths().acceptance("").unwrap(), 1.0);
        let v = classify_cutpoint(&three_fifths(), "", 0.5).unwrap();
        assert_eq!(v.membership, Membership::Member);
    }

    #[test]
    fn rotation_law_small_k() {
        let m = rotation_machine(0.3).unwrap();
        for k in 0..50 {
            let f = m.acceptance(&"a".repeat(k)).unwrap();
            assert!((f - (k as f64 * 0.3).cos().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn power_acceptances_match_word_runs() {
        let m = three_fifths();
        let powers = m.power_acceptances('a', 30).unwrap();
        for (k, p) in powers.iter().enumerate() {
            assert!((p - m.acceptance(&"a".repeat(k)).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn neq_zero_on_balanced_word() {
        let neq = neq_machine();
        assert!(neq.acceptance("ab").unwrap() < EPS_PROB);
        let v = classify_cutpoint(&neq, "ab", 0.0).unwrap();
        assert_eq!(v.membership, Membership::Nonmember);
        assert!(!nondet_accepts(&neq, "aabb").unwrap());
        assert!(!nondet_accepts(&neq, "").unwrap());
        assert!(nondet_accepts(&neq, "a").unwrap());
        let expected = (std::f64::consts::SQRT_2 * std::f64::consts::PI).sin().powi(2);
        assert!((neq.acceptance("a").unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn cutpoint_equal_to_probability_is_tie() {
        let m = rotation_machine(0.7).unwrap();
        let f = m.acceptance("aa").unwrap();
        assert_eq!(classify_cutpoint(&m, "aa", f).unwrap().membership, Membership::AtCutpoint);
        assert_eq!(classify_cutpoint(&m, "aa", f - 1e-6).unwrap().membership, Membership::Member);
        assert_eq!(classify_cutpoint(&m, "aa", f + 1e-6).unwrap().membership, Membership::Nonmember);
    }

    #[test]
    fn cutpoint_outside_unit_interval_rejected() {
        assert!(classify_cutpoint(&three_fifths(), "a", -0.1).is_err());
        assert!(classify_cutpoint(&three_fifths(), "a", 1.5).is_err());
        assert!(classify_cutpoint(&three_fifths(), "a", f64::NAN).is_err());
    }

    #[test]
    fn cutpoint_one_has_no_members() {
        assert_eq!(classify_cutpoint(&three_fifths(), "", 1.0).unwrap().membership, Membership::Nonmember);
    }

    #[test]
    fn promise_checks() {
        let m = modp_machine(5).unwrap();
        let yes: Vec<String> = (0..5).map(|j| "a".repeat(5 * j)).collect();
        let no: Vec<String> = (0..5).map(|j| "a".repeat(5 * j + 1)).collect();
        let r = promise_check_exact(&m, &yes, &no).unwrap();
        assert!(!r.holds);
        assert!(r.worst_deviation > 0.09);
        let empty: [&str; 0] = [];
        let r = promise_check_exact(&m, &empty, &empty).unwrap();
        assert!(r.holds);
        assert_eq!(r.worst_deviation, 0.0);
    }

    /// Brute-force oracle: evaluate cos^2(k theta) directly.
    fn scan_closed_form(theta: f64, l1: f64, l2: f64, k_max: usize) -> Option<usize> {
        (0..=k_max).find(|&k| {
            let f = (k as f64 * theta).cos().powi(2);
            l1 < f && f < l2
        })
    }

    #[test]
    fn separation_on_irrational_rotation() {
        let theta = (0.6f64).acos();
        let w = separate_cutpoints(&three_fifths(), 0.10, 0.12, 10_000).unwrap().unwrap();
        assert_eq!(Some(w.k), scan_closed_form(theta, 0.10, 0.12, 10_000));
        assert!(0.10 < w.probability && w.probability < 0.12);
    }

    #[test]
    fn separation_impossible_for_quarter_turn() {
        let m = rotation_machine(FRAC_PI_2).unwrap();
        assert_eq!(separate_cutpoints(&m, 0.3, 0.4, 5000).unwrap(), None);
    }

    #[test]
    fn separation_full_interval_first_step() {
        let w = separate_cutpoints(&three_fifths(), 0.0, 1.0, 1).unwrap().unwrap();
        assert_eq!(w.k, 1);
        assert!(separate_cutpoints(&three_fifths(), 0.5, 0.5, 10).is_err());
        assert!(separate_cutpoints(&neq_machine(), 0.1, 0.5, 10).is_err());
    }

    #[test]
    fn monte_carlo_deterministic_outcome() {
        let m = three_fifths();
        let est = monte_carlo_acceptance(&m, "", 1000, 99).unwrap();
        assert_eq!(est.frequency, 1.0);
        assert!(est.within_five_sigma);
    }

    #[test]
    fn monte_carlo_fair_coin() {
        let m = rotation_machine(FRAC_PI_4).unwrap();
        let est = monte_carlo_acceptance(&m, "a", 100_000, 2024).unwrap();
        assert!((est.exact - 0.5).abs() < 1e-12);
        assert!(est.within_five_sigma, "{est:?}");
        let again = monte_carlo_acceptance(&m, "a", 100_000, 2024).unwrap();
        assert_eq!(est.frequency.to_bits(), again.frequency.to_bits());
        assert!(monte_carlo_acceptance(&m, "a", 0, 1).is_err());
    }

    #[test]
    fn mismatched_transition_dimensions_rejected() {
        let u2 = rotation_operator(0.1).unwrap();
        let u4 = u2.tensor(&u2);
        assert!(MeasureOnceQfa::new(Alphabet::binary(), vec![u2.clone(), u4], &[0]).is_err());
        assert!(MeasureOnceQfa::new(Alphabet::binary(), vec![u2.clone()], &[0]).is_err());
        assert!(MeasureOnceQfa::new(Alphabet::unary(), vec![u2], &[2]).is_err());
    }
}
