//! Two-way quantum-classical recognition of `EQ = { w : |w|_a = |w|_b }`.
//!
//! One pass of the head over the input runs the NEQ rotation machine with
//! `q_2` reinterpreted as a reject state: it rejects with probability
//! `sin^2(delta sqrt2 pi)`, `delta = |w|_a - |w|_b`, and never rejects a
//! member. After a pass that does not reject, the machine accepts with a
//! small probability `p_acc`, and otherwise moves the head back and restarts.
//! With `p_acc = 1 / (4 |w|^2)` and `p_rej >= 1 / (2 |w|^2)` every
//! non-member is rejected with probability at least 2/3.
//!
//! The small acceptance probability is either drawn directly ([`AcceptStep::Ideal`])
//! or realised by two fair random walks on the tape that must both fall off
//! the right end ([`AcceptStep::RandomWalk`]), which accepts with
//! probability `1 / (|w| + 1)^2`.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::neq_machine;
use crate::quantum::{rotation_operator, MeasurementPartition, PureState};
use crate::realtime::{binomial_summary, MonteCarloEstimate};
use crate::rng;
use crate::tolerance::{DEFAULT_PASS_BUDGET, MAX_INPUT_LEN};
use crate::{Alphabet, Automaton, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqRunReport {
    pub verdict: Verdict,
    /// Left-to-right passes over the input, summed over all rounds.
    pub passes_used: u64,
    pub w_length: usize,
    /// `|w|_a - |w|_b`
    pub delta: i64,
    /// Rounds that finished before the verdict was fixed.
    pub rounds_completed: usize,
}

/// How the per-iteration "accept with small probability" step is realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AcceptStep {
    /// Bernoulli draw with probability exactly `1 / (4 |w|^2)`.
    #[default]
    Ideal,
    /// Two independent fair walks from the first cell; accept iff both leave
    /// through the right end-marker.
    RandomWalk,
}

/// How one pass of the quantum part is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PassModel {
    /// A single Bernoulli draw with probability `sin^2(delta sqrt2 pi)`.
    #[default]
    Analytic,
    /// Rotate the qubit cell by cell, then measure it.
    CellStepping,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqConfig {
    /// Independent repetitions; the input is accepted only if all accept.
    pub rounds: usize,
    pub seed: u64,
    pub accept_step: AcceptStep,
    pub pass_model: PassModel,
    /// Maximum total passes before the run is aborted with an error.
    pub pass_budget: u64,
}

impl EqConfig {
    pub fn new(rounds: usize, seed: u64) -> Self {
        Self {
            rounds,
            seed,
            accept_step: AcceptStep::Ideal,
            pass_model: PassModel::Analytic,
            pass_budget: DEFAULT_PASS_BUDGET,
        }
    }
}

/// `|w|_a - |w|_b`, rejecting symbols other than `a` and `b`.
pub fn letter_delta(w: &str) -> Result<i64> {
    let symbols = Alphabet::binary().encode(w)?;
    Ok(symbols.iter().map(|&s| if s == 0 { 1 } else { -1 }).sum())
}

fn pass_reject_for_delta(delta: i64) -> f64 {
    if delta == 0 {
        0.0
    } else {
        (delta as f64 * SQRT_2 * PI).sin().powi(2)
    }
}

/// Probability that one left-to-right pass rejects: `sin^2(delta sqrt2 pi)`,
/// exactly 0 for members.
pub fn eq_pass_reject_prob(w: &str) -> Result<f64> {
    Ok(pass_reject_for_delta(letter_delta(w)?))
}

/// The same probability obtained by running the NEQ rotation machine over
/// the input one cell at a time.
pub fn eq_pass_reject_prob_stepped(w: &str) -> Result<f64> {
    neq_machine().acceptance(w)
}

/// Probability of the accept step after a non-rejecting pass on an input of
/// length `n >= 1`.
pub fn eq_accept_prob(n: usize, step: AcceptStep) -> f64 {
    let n = n as f64;
    match step {
        AcceptStep::Ideal => 1.0 / (4.0 * n * n),
        AcceptStep::RandomWalk => 1.0 / ((n + 1.0) * (n + 1.0)),
    }
}

/// Probability that one round of the restart loop ends in rejection,
/// `p_rej / (p_acc + p_rej)`, with the ideal accept step.
pub fn eq_exact_rejection(w: &str) -> Result<f64> {
    eq_exact_rejection_with(w, AcceptStep::Ideal)
}

pub fn eq_exact_rejection_with(w: &str, step: AcceptStep) -> Result<f64> {
    let delta = letter_delta(w)?;
    if delta == 0 {
        return Ok(0.0);
    }
    let p_rej = pass_reject_for_delta(delta);
    let p_acc = eq_accept_prob(w.chars().count(), step);
    Ok(p_rej / (p_acc + p_rej))
}

/// Fair coin obtained by measuring `U_{pi/4} |q_1>` in the computational basis.
struct QuantumCoin {
    heads: f64,
}

impl QuantumCoin {
    fn new() -> Self {
        let state = rotation_operator(FRAC_PI_4)
            .and_then(|u| u.apply(&PureState::basis(2, 0)?))
            .expect("rotation of a basis state");
        let outcomes = state
            .measure(&MeasurementPartition::computational(2))
            .expect("matching dimensions");
        Self { heads: outcomes[1].probability }
    }

    fn flip(&self, rng: &mut ChaCha8Rng) -> bool {
        rng.random::<f64>() < self.heads
    }
}

fn walk_right(n: usize, start: usize, coin: &QuantumCoin, rng: &mut ChaCha8Rng) -> bool {
    let mut pos = start;
    loop {
        if coin.flip(rng) {
            pos += 1;
        } else {
            pos -= 1;
        }
        if pos == 0 {
            return false;
        }
        if pos == n + 1 {
            return true;
        }
    }
}

fn stepped_pass_rejects(symbols: &[usize], rng: &mut ChaCha8Rng) -> bool {
    let neq = neq_machine();
    let mut state = PureState::basis(2, 0).expect("two states");
    for &s in symbols {
        state = neq.transitions()[s].apply(&state).expect("matching dimensions");
    }
    let outcomes = state
        .measure(&MeasurementPartition::computational(2))
        .expect("matching dimensions");
    rng.random::<f64>() < outcomes[1].probability
}

/// One seeded run with the ideal accept step and the default pass budget.
pub fn eq_simulate(w: &str, rounds: usize, seed: u64) -> Result<EqRunReport> {
    eq_simulate_with(w, &EqConfig::new(rounds, seed))
}

/// Runs the restart loop `config.rounds` times on stream `(seed, 0)`.
/// A rejecting round fixes the verdict immediately.
pub fn eq_simulate_with(w: &str, config: &EqConfig) -> Result<EqRunReport> {
    if config.rounds == 0 {
        return Err(Error::InvalidArgument("at least one round is required".into()));
    }
    let symbols = Alphabet::binary().encode(w)?;
    let delta = letter_delta(w)?;
    let n = symbols.len();
    let mut report = EqRunReport { verdict: Verdict::Accept, passes_used: 0, w_length: n, delta, rounds_completed: 0 };
    if n == 0 {
        // the single pass over an empty tape sees no symbols and accepts
        report.passes_used = 1;
        report.rounds_completed = config.rounds;
        return Ok(report);
    }

    let p_rej = pass_reject_for_delta(delta);
    let p_acc = eq_accept_prob(n, AcceptStep::Ideal);
    let coin = QuantumCoin::new();
    let mut rng = rng::stream(config.seed, 0);

    for _ in 0..config.rounds {
        loop {
            if report.passes_used >= config.pass_budget {
                return Err(Error::BudgetExceeded {
                    budget: config.pass_budget,
                    rounds_completed: report.rounds_completed,
                });
            }
            report.passes_used += 1;
            let rejected = match config.pass_model {
                PassModel::Analytic => rng.random::<f64>() < p_rej,
                PassModel::CellStepping => stepped_pass_rejects(&symbols, &mut rng),
            };
            if rejected {
                report.verdict = Verdict::Reject;
                return Ok(report);
            }
            let accepted = match config.accept_step {
                AcceptStep::Ideal => rng.random::<f64>() < p_acc,
                AcceptStep::RandomWalk => {
                    walk_right(n, 1, &coin, &mut rng) && walk_right(n, 1, &coin, &mut rng)
                }
            };
            if accepted {
                break;
            }
        }
        report.rounds_completed += 1;
    }
    Ok(report)
}

/// A fair +-1 walk on cells `1..=n` with absorbing barriers at `0` and `n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkSpec {
    n: usize,
    start: usize,
}

impl WalkSpec {
    pub fn new(n: usize, start: usize) -> Result<Self> {
        if n == 0 || start == 0 || start > n {
            return Err(Error::InvalidArgument(format!(
                "walk needs 0 < start <= n, got n = {n}, start = {start}"
            )));
        }
        if n > MAX_INPUT_LEN {
            return Err(Error::InvalidArgument(format!("walk length {n} exceeds {MAX_INPUT_LEN}")));
        }
        Ok(Self { n, start })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> usize {
        self.start
    }
}

/// Probability of absorption at the right barrier, from the linear system
/// `x_i = (x_{i-1} + x_{i+1}) / 2`, `x_0 = 0`, `x_{n+1} = 1`.
pub fn walk_right_absorption(spec: WalkSpec) -> Result<f64> {
    let n = spec.n;
    // (I - Q) x = r over the transient cells 1..=n
    let mut a = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        if i > 0 {
            a[(i, i - 1)] = -0.5;
        }
        if i + 1 < n {
            a[(i, i + 1)] = -0.5;
        }
    }
    let mut r = DVector::<f64>::zeros(n);
    r[n - 1] = 0.5;
    let x = a
        .lu()
        .solve(&r)
        .ok_or_else(|| Error::InvalidArgument("absorbing chain is singular".into()))?;
    Ok(x[spec.start - 1])
}

/// Monte Carlo estimate of [`walk_right_absorption`]; trial `i` uses stream `(seed, i)`.
pub fn walk_monte_carlo(spec: WalkSpec, trials: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let exact = walk_right_absorption(spec)?;
    let coin = QuantumCoin::new();
    let hits = (0..trials)
        .filter(|&i| walk_right(spec.n, spec.start, &coin, &mut rng::stream(seed, i)))
        .count() as u64;
    Ok(binomial_summary(trials, hits, exact))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadgetReport {
    pub n: usize,
    /// Exact acceptance of the two-walk gadget, `1 / (n + 1)^2`.
    pub gadget: f64,
    /// The ideal `1 / (4 n^2)`.
    pub target: f64,
    /// `gadget / target`, which lies in `[1, 4)`.
    pub ratio: f64,
}

pub fn walk_gadget_acceptance(n: usize) -> Result<GadgetReport> {
    let one_walk = walk_right_absorption(WalkSpec::new(n, 1)?)?;
    let gadget = one_walk * one_walk;
    let target = eq_accept_prob(n, AcceptStep::Ideal);
    Ok(GadgetReport { n, gadget, target, ratio: gadget / target })
}

/// Monte Carlo estimate of the gadget; trial `i` uses stream `(seed, i)`.
pub fn walk_gadget_monte_carlo(n: usize, trials: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let exact = walk_gadget_acceptance(n)?.gadget;
    let coin = QuantumCoin::new();
    let hits = (0..trials)
        .filter(|&i| {
            let mut r = rng::stream(seed, i);
            walk_right(n, 1, &coin, &mut r) && walk_right(n, 1, &coin, &mut r)
        })
        .count() as u64;
    Ok(binomial_summary(trials, hits, exact))
}
