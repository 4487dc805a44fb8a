//! Real-time deterministic and probabilistic finite automata.
//!
//! A PFA `(S, Sigma, {A_sigma}, s_1, S_a)` tracks a column probability vector
//! `v_t = A_{w_t} v_{t-1}` from `v_0 = e_1`; acceptance is the mass on `S_a`.
//! A DFA is the special case whose matrices contain only zeros and ones.

use nalgebra::{DMatrix, DVector};

use crate::quantum::StochasticMatrix;
use crate::{Alphabet, Automaton, Error, Result};

pub(crate) fn normalize_accepting(accepting: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut acc = accepting.to_vec();
    acc.sort_unstable();
    acc.dedup();
    if let Some(&bad) = acc.iter().find(|&&q| q >= n) {
        return Err(Error::Validation(format!(
            "accepting state {} out of range for {n} states",
            bad + 1
        )));
    }
    Ok(acc)
}

fn check_transition_count(alphabet: &Alphabet, count: usize) -> Result<()> {
    if count != alphabet.len() {
        return Err(Error::Validation(format!(
            "{count} transition matrices for an alphabet of {} symbols",
            alphabet.len()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RtPfa {
    alphabet: Alphabet,
    transitions: Vec<StochasticMatrix>,
    accepting: Vec<usize>,
}

impl RtPfa {
    /// `transitions[i]` belongs to `alphabet.symbols()[i]`. The initial state is 0.
    pub fn new(alphabet: Alphabet, transitions: Vec<StochasticMatrix>, accepting: &[usize]) -> Result<Self> {
        check_transition_count(&alphabet, transitions.len())?;
        let n = transitions[0].dim();
        if let Some((i, m)) = transitions.iter().enumerate().find(|(_, m)| m.dim() != n) {
            return Err(Error::Validation(format!(
                "transition for '{}' is {}x{}, expected {n}x{n}",
                alphabet.symbols()[i],
                m.dim(),
                m.dim()
            )));
        }
        let accepting = normalize_accepting(accepting, n)?;
        Ok(Self { alphabet, transitions, accepting })
    }

    pub fn transitions(&self) -> &[StochasticMatrix] {
        &self.transitions
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    /// State distribution after reading `word`.
    pub fn distribution(&self, word: &str) -> Result<DVector<f64>> {
        let symbols = self.alphabet.encode(word)?;
        let n = self.state_count();
        let mut v = DVector::zeros(n);
        v[0] = 1.0;
        let mut next = DVector::zeros(n);
        for s in symbols {
            next.gemv(1.0, self.transitions[s].matrix(), &v, 0.0);
            std::mem::swap(&mut v, &mut next);
        }
        Ok(v)
    }
}

impl Automaton for RtPfa {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn state_count(&self) -> usize {
        self.transitions[0].dim()
    }

    fn acceptance(&self, word: &str) -> Result<f64> {
        let v = self.distribution(word)?;
        Ok(self.accepting.iter().map(|&q| v[q]).sum())
    }
}

/// Real-time DFA stored as a successor table; convertible to the 0/1 PFA form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RtDfa {
    alphabet: Alphabet,
    /// `next[symbol][state]`
    next: Vec<Vec<usize>>,
    accepting: Vec<usize>,
    n: usize,
}

impl RtDfa {
    pub fn new(alphabet: Alphabet, next: Vec<Vec<usize>>, accepting: &[usize]) -> Result<Self> {
        check_transition_count(&alphabet, next.len())?;
        let n = next[0].len();
        if n == 0 {
            return Err(Error::Validation("automaton needs at least one state".into()));
        }
        for (i, row) in next.iter().enumerate() {
            if row.len() != n || row.iter().any(|&q| q >= n) {
                return Err(Error::Validation(format!(
                    "successor table for '{}' is malformed",
                    alphabet.symbols()[i]
                )));
            }
        }
        let accepting = normalize_accepting(accepting, n)?;
        Ok(Self { alphabet, next, accepting, n })
    }

    /// Builds a DFA from 0/1 column-stochastic matrices; each column must hold
    /// exactly one 1.
    pub fn from_matrices(alphabet: Alphabet, transitions: &[StochasticMatrix], accepting: &[usize]) -> Result<Self> {
        check_transition_count(&alphabet, transitions.len())?;
        let mut next = Vec::with_capacity(transitions.len());
        for (i, m) in transitions.iter().enumerate() {
            let mut row = Vec::with_capacity(m.dim());
            for (j, col) in m.matrix().column_iter().enumerate() {
                let ones: Vec<usize> = col.iter().enumerate().filter(|(_, &x)| x == 1.0).map(|(r, _)| r).collect();
                let zeros = col.iter().filter(|&&x| x == 0.0).count();
                if ones.len() != 1 || zeros + 1 != col.len() {
                    return Err(Error::Validation(format!(
                        "column {} of the transition for '{}' must contain exactly one 1 and zeros elsewhere",
                        j + 1,
                        alphabet.symbols()[i]
                    )));
                }
                row.push(ones[0]);
            }
            next.push(row);
        }
        Self::new(alphabet, next, accepting)
    }

    pub fn successors(&self) -> &[Vec<usize>] {
        &self.next
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn final_state(&self, word: &str) -> Result<usize> {
        let symbols = self.alphabet.encode(word)?;
        Ok(symbols.into_iter().fold(0, |q, s| self.next[s][q]))
    }

    pub fn accepts(&self, word: &str) -> Result<bool> {
        let q = self.final_state(word)?;
        Ok(self.accepting.binary_search(&q).is_ok())
    }

    pub fn to_matrices(&self) -> Vec<StochasticMatrix> {
        self.next
            .iter()
            .map(|row| {
                let mut m = DMatrix::zeros(self.n, self.n);
                for (j, &i) in row.iter().enumerate() {
                    m[(i, j)] = 1.0;
                }
                StochasticMatrix::new(m).expect("0/1 successor matrix is stochastic")
            })
            .collect()
    }

    pub fn to_pfa(&self) -> RtPfa {
        RtPfa::new(self.alphabet.clone(), self.to_matrices(), &self.accepting)
            .expect("a valid DFA is a valid PFA")
    }
}

impl Automaton for RtDfa {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn state_count(&self) -> usize {
        self.n
    }

    fn acceptance(&self, word: &str) -> Result<f64> {
        Ok(if self.accepts(word)? { 1.0 } else { 0.0 })
    }
}

/// Unary DFA counting modulo `2^(k+1)`, accepting only at residue 0.
/// It solves EVENODD^k with the minimum possible number of states.
pub fn evenodd_min_dfa(k: u32) -> Result<RtDfa> {
    if !(1..=20).contains(&k) {
        return Err(Error::InvalidArgument(format!("k must be in 1..=20, got {k}")));
    }
    let m = 1usize << (k + 1);
    RtDfa::new(Alphabet::unary(), vec![(0..m).map(|q| (q + 1) % m).collect()], &[0])
}

/// Outcome of the exhaustive unary-DFA search.
#[derive(Debug, Clone, PartialEq)]
pub struct DfaSearchResult {
    /// Smallest state count that admits a solving DFA.
    pub states: usize,
    /// The first solving DFA found at that size.
    pub witness: RtDfa,
    /// Number of (tail, cycle, accepting-set) candidates examined in total.
    pub candidates_examined: u64,
}

/// Largest `k` accepted by [`evenodd_min_dfa_search`].
pub const SEARCH_MAX_K: u32 = 3;
/// Largest `m_max` accepted by [`evenodd_min_dfa_search`].
pub const SEARCH_MAX_STATES: usize = 20;

/// Exhaustively searches unary DFAs with at most `m_max` states for one that
/// solves the promise problem EVENODD^k, returning the smallest size found.
///
/// Every unary DFA restricted to its reachable states is a lasso: a tail of
/// `t` states followed by a cycle of `c` states, `t + c = m`. All lassos and
/// all accepting subsets are enumerated. A candidate solves the problem if it
/// accepts `a^(j 2^k)` for every even `j <= 2 m_max` and rejects it for every
/// odd one; since the run on `a^L` is periodic in `L` with period at most `m`
/// once `L >= m`, that finite prefix decides the infinite condition.
pub fn evenodd_min_dfa_search(k: u32, m_max: usize) -> Result<Option<DfaSearchResult>> {
    if !(1..=SEARCH_MAX_K).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "exhaustive search supports k in 1..={SEARCH_MAX_K}, got {k}"
        )));
    }
    if !(1..=SEARCH_MAX_STATES).contains(&m_max) {
        return Err(Error::InvalidArgument(format!(
            "m_max must be in 1..={SEARCH_MAX_STATES}, got {m_max}"
        )));
    }
    let block = 1usize << k;
    let j_test = 2 * m_max;
    let mut examined = 0u64;
    for m in 1..=m_max {
        for tail in 0..m {
            let cycle = m - tail;
            let state_after = |len: usize| if len < m { len } else { tail + (len - tail) % cycle };
            let (mut yes, mut no) = (0u32, 0u32);
            for j in 0..=j_test {
                let bit = 1u32 << state_after(j * block);
                if j % 2 == 0 {
                    yes |= bit;
                } else {
                    no |= bit;
                }
            }
            for accepting in 0u32..(1u32 << m) {
                examined += 1;
                if accepting & yes == yes && accepting & no == 0 {
                    let next = (0..m).map(|q| if q + 1 < m { q + 1 } else { tail }).collect();
                    let acc: Vec<usize> = (0..m).filter(|&q| accepting >> q & 1 == 1).collect();
                    let witness = RtDfa::new(Alphabet::unary(), vec![next], &acc)?;
                    return Ok(Some(DfaSearchResult { states: m, witness, candidates_examined: examined }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_half() -> RtPfa {
        let a = StochasticMatrix::new(DMatrix::from_element(2, 2, 0.5)).unwrap();
        RtPfa::new(Alphabet::unary(), vec![a], &[1]).unwrap()
    }

    fn parity_dfa() -> RtDfa {
        RtDfa::new(Alphabet::unary(), vec![vec![1, 0]], &[0]).unwrap()
    }

    #[test]
    fn empty_word_accepted_iff_initial_accepting() {
        let id = StochasticMatrix::identity(2);
        let p = RtPfa::new(Alphabet::unary(), vec![id.clone()], &[0]).unwrap();
        assert_eq!(p.acceptance("").unwrap(), 1.0);
        let p = RtPfa::new(Alphabet::unary(), vec![id], &[1]).unwrap();
        assert_eq!(p.acceptance("").unwrap(), 0.0);
        assert!(parity_dfa().accepts("").unwrap());
        assert!(!RtDfa::new(Alphabet::unary(), vec![vec![1, 0]], &[1]).unwrap().accepts("").unwrap());
    }

    #[test]
    fn mixing_matrix_single_step() {
        assert_eq!(half_half().acceptance("a").unwrap(), 0.5);
        assert_eq!(half_half().acceptance("aaaa").unwrap(), 0.5);
    }

    #[test]
    fn unknown_symbol_is_invalid_input() {
        assert!(matches!(half_half().acceptance("ab"), Err(Error::InvalidInput(_))));
        assert!(matches!(parity_dfa().accepts("b"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn parity_dfa_accepts_even_lengths() {
        let d = parity_dfa();
        for k in 0..20 {
            assert_eq!(d.accepts(&"a".repeat(k)).unwrap(), k % 2 == 0);
            assert_eq!(d.to_pfa().acceptance(&"a".repeat(k)).unwrap(), if k % 2 == 0 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn min_evenodd_dfa_k1() {
        let d = evenodd_min_dfa(1).unwrap();
        assert_eq!(d.state_count(), 4);
        assert!(d.accepts("").unwrap());
        assert!(d.accepts("aaaa").unwrap());
        assert!(!d.accepts("aa").unwrap());
    }

    #[test]
    fn matrices_round_trip_through_dfa() {
        let d = evenodd_min_dfa(2).unwrap();
        let back = RtDfa::from_matrices(Alphabet::unary(), &d.to_matrices(), d.accepting()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn non_deterministic_matrix_rejected_as_dfa() {
        let a = StochasticMatrix::new(DMatrix::from_element(2, 2, 0.5)).unwrap();
        let err = RtDfa::from_matrices(Alphabet::unary(), &[a], &[0]).unwrap_err();
        assert!(err.to_string().contains("column 1"), "{err}");
    }

    #[test]
    fn accepting_out_of_range_rejected() {
        assert!(RtDfa::new(Alphabet::unary(), vec![vec![1, 0]], &[2]).is_err());
        assert!(RtPfa::new(Alphabet::unary(), vec![StochasticMatrix::identity(2)], &[5]).is_err());
        assert!(RtPfa::new(Alphabet::binary(), vec![StochasticMatrix::identity(2)], &[0]).is_err());
    }

    /// Independent oracle: enumerate every raw successor table on `m` states
    /// (not only lassos) and ask whether the states reached by yes-instances
    /// are disjoint from those reached by no-instances.
    fn raw_table_solvable(k: u32, m: usize, j_test: usize) -> bool {
        let block = 1usize << k;
        let tables = m.pow(m as u32);
        (0..tables).any(|code| {
            let next: Vec<usize> = (0..m).map(|q| code / m.pow(q as u32) % m).collect();
            let (mut yes, mut no) = (vec![false; m], vec![false; m]);
            for j in 0..=j_test {
                let q = (0..j * block).fold(0, |q, _| next[q]);
                if j % 2 == 0 {
                    yes[q] = true;
                } else {
                    no[q] = true;
                }
            }
            yes.iter().zip(&no).all(|(y, n)| !(y & n))
        })
    }

    #[test]
    fn raw_table_oracle_agrees_for_k1() {
        for m in 1..=4 {
            assert_eq!(raw_table_solvable(1, m, 2 * 4), m >= 4, "m = {m}");
        }
        let found = evenodd_min_dfa_search(1, 4).unwrap().unwrap();
        assert_eq!(found.states, 4);
    }

    #[test]
    fn search_finds_two_to_the_k_plus_one() {
        let r1 = evenodd_min_dfa_search(1, 6).unwrap().unwrap();
        assert_eq!(r1.states, 4);
        let r2 = evenodd_min_dfa_search(2, 8).unwrap().unwrap();
        assert_eq!(r2.states, 8);
        for r in [&r1, &r2] {
            let block = r.states / 2;
            for j in 0..40 {
                assert_eq!(r.witness.accepts(&"a".repeat(j * block)).unwrap(), j % 2 == 0);
            }
        }
    }

    #[test]
    fn search_below_bound_finds_nothing() {
        assert!(evenodd_min_dfa_search(1, 3).unwrap().is_none());
        assert!(evenodd_min_dfa_search(2, 7).unwrap().is_none());
    }

    #[test]
    fn search_arguments_checked() {
        assert!(evenodd_min_dfa_search(0, 4).is_err());
        assert!(evenodd_min_dfa_search(4, 4).is_err());
        assert!(evenodd_min_dfa_search(1, 0).is_err());
        assert!(evenodd_min_dfa_search(1, 21).is_err());
    }
}
