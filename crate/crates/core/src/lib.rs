//! Simulation of classical and quantum finite automata.
//!
//! The crate covers real-time deterministic and probabilistic automata,
//! measure-once unitary QFAs, general QFAs whose per-symbol evolution is a
//! superoperator acting on density matrices, and the two-way
//! quantum-classical algorithm for `EQ = { w : |w|_a = |w|_b }`.
//!
//! State indices are 0-based throughout the Rust API. Machine files use
//! 1-based indices (see [`cli::description`]).

pub mod alphabet;
pub mod catalog;
pub mod classical;
pub mod cli;
pub mod error;
pub mod general;
pub mod quantum;
pub mod random;
pub mod realtime;
pub mod rng;
pub mod tolerance;
pub mod two_way;

pub use alphabet::Alphabet;
pub use error::{Error, Result};

/// Anything that assigns an acceptance probability to strings over an alphabet.
pub trait Automaton {
    fn alphabet(&self) -> &Alphabet;

    fn state_count(&self) -> usize;

    /// Probability that the machine accepts `word`.
    fn acceptance(&self, word: &str) -> Result<f64>;
}
