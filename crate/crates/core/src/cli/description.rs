//! Machine files and catalog names.
//!
//! A machine file is a JSON object:
//!
//! ```json
//! {
//!   "kind": "qfa-unitary",
//!   "n": 2,
//!   "alphabet": ["a"],
//!   "accepting": [1],
//!   "transitions": { "a": [[[0.6, 0.0], [-0.8, 0.0]], [[0.8, 0.0], [0.6, 0.0]]] }
//! }
//! ```
//!
//! `kind` is one of `dfa`, `pfa`, `qfa-unitary`, `qfa-general`. Matrices are
//! lists of rows. Classical kinds use real entries, quantum kinds use
//! `[re, im]` pairs, and `qfa-general` maps each symbol to a list of
//! operation-element matrices. Accepting states are 1-based.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::classical::{evenodd_min_dfa, RtDfa, RtPfa};
use crate::general::GeneralQfa;
use crate::quantum::{CMatrix, StochasticMatrix, Superoperator, UnitaryOperator};
use crate::realtime::MeasureOnceQfa;
use crate::{Alphabet, Automaton, Error, Result};

type RealMatrix = Vec<Vec<f64>>;
type ComplexMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Body<T> {
    pub n: usize,
    pub alphabet: Vec<String>,
    pub accepting: Vec<usize>,
    pub transitions: BTreeMap<String, T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MachineDescription {
    #[serde(rename = "dfa")]
    Dfa(Body<RealMatrix>),
    #[serde(rename = "pfa")]
    Pfa(Body<RealMatrix>),
    #[serde(rename = "qfa-unitary")]
    QfaUnitary(Body<ComplexMatrix>),
    #[serde(rename = "qfa-general")]
    QfaGeneral(Body<Vec<ComplexMatrix>>),
}

/// A validated machine of any supported kind.
#[derive(Debug, Clone)]
pub enum Machine {
    Dfa(RtDfa),
    Pfa(RtPfa),
    Unitary(MeasureOnceQfa),
    General(GeneralQfa),
}

impl Machine {
    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Dfa(_) => "dfa",
            Machine::Pfa(_) => "pfa",
            Machine::Unitary(_) => "qfa-unitary",
            Machine::General(_) => "qfa-general",
        }
    }

    fn inner(&self) -> &dyn Automaton {
        match self {
            Machine::Dfa(m) => m,
            Machine::Pfa(m) => m,
            Machine::Unitary(m) => m,
            Machine::General(m) => m,
        }
    }

    pub fn describe(&self) -> MachineDescription {
        let alphabet = self.alphabet();
        let symbols: Vec<String> = alphabet.symbols().iter().map(|c| c.to_string()).collect();
        let n = self.state_count();
        fn body<T>(n: usize, symbols: &[String], accepting: &[usize], mats: Vec<T>) -> Body<T> {
            Body {
                n,
                alphabet: symbols.to_vec(),
                accepting: accepting.iter().map(|q| q + 1).collect(),
                transitions: symbols.iter().cloned().zip(mats).collect(),
            }
        }
        match self {
            Machine::Dfa(m) => {
                let mats = m.to_matrices().iter().map(|s| real_rows(s.matrix())).collect();
                MachineDescription::Dfa(body(n, &symbols, m.accepting(), mats))
            }
            Machine::Pfa(m) => {
                let mats = m.transitions().iter().map(|s| real_rows(s.matrix())).collect();
                MachineDescription::Pfa(body(n, &symbols, m.accepting(), mats))
            }
            Machine::Unitary(m) => {
                let mats = m.transitions().iter().map(|u| complex_rows(u.matrix())).collect();
                MachineDescription::QfaUnitary(body(n, &symbols, m.accepting(), mats))
            }
            Machine::General(m) => {
                let mats = m
                    .channels()
                    .iter()
                    .map(|s| s.elements().iter().map(complex_rows).collect())
                    .collect();
                MachineDescription::QfaGeneral(body(n, &symbols, m.accepting(), mats))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.describe()).expect("descriptions always serialise")
    }
}

impl Automaton for Machine {
    fn alphabet(&self) -> &Alphabet {
        self.inner().alphabet()
    }

    fn state_count(&self) -> usize {
        self.inner().state_count()
    }

    fn acceptance(&self, word: &str) -> Result<f64> {
        self.inner().acceptance(word)
    }
}

fn real_rows(m: &DMatrix<f64>) -> RealMatrix {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn complex_rows(m: &CMatrix) -> ComplexMatrix {
    m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

impl MachineDescription {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn into_machine(self) -> Result<Machine> {
        match self {
            MachineDescription::Dfa(b) => {
                let (alphabet, accepting, mats) = b.resolve(stochastic)?;
                let dfa = RtDfa::from_matrices(alphabet, &mats, &accepting)?;
                Ok(Machine::Dfa(dfa))
            }
            MachineDescription::Pfa(b) => {
                let (alphabet, accepting, mats) = b.resolve(stochastic)?;
                Ok(Machine::Pfa(RtPfa::new(alphabet, mats, &accepting)?))
            }
            MachineDescription::QfaUnitary(b) => {
                let (alphabet, accepting, mats) = b.resolve(|m, n| UnitaryOperator::new(complex(m, n)?))?;
                Ok(Machine::Unitary(MeasureOnceQfa::new(alphabet, mats, &accepting)?))
            }
            MachineDescription::QfaGeneral(b) => {
                let (alphabet, accepting, mats) = b.resolve(|elements, n| {
                    let elements = elements.iter().map(|e| complex(e, n)).collect::<Result<Vec<_>>>()?;
                    Superoperator::new(elements)
                })?;
                Ok(Machine::General(GeneralQfa::new(alphabet, mats, &accepting)?))
            }
        }
    }
}

impl<T> Body<T> {
    /// Checks the shared fields and converts every transition with `convert`,
    /// prefixing errors with the offending symbol.
    fn resolve<U>(&self, convert: impl Fn(&T, usize) -> Result<U>) -> Result<(Alphabet, Vec<usize>, Vec<U>)> {
        if self.n == 0 {
            return Err(Error::Validation("n must be at least 1".into()));
        }
        let mut symbols = Vec::with_capacity(self.alphabet.len());
        for s in &self.alphabet {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => symbols.push(c),
                _ => return Err(Error::Validation(format!("alphabet entry {s:?} is not a single character"))),
            }
        }
        let alphabet = Alphabet::new(symbols).map_err(|e| Error::Validation(format!("alphabet: {e}")))?;
        for key in self.transitions.keys() {
            if !self.alphabet.contains(key) {
                return Err(Error::Validation(format!("transition given for symbol {key:?} outside the alphabet")));
            }
        }
        let mut accepting = Vec::with_capacity(self.accepting.len());
        for &q in &self.accepting {
            if q == 0 || q > self.n {
                return Err(Error::Validation(format!("accepting state {q} outside 1..={}", self.n)));
            }
            accepting.push(q - 1);
        }
        let mut mats = Vec::with_capacity(self.alphabet.len());
        for s in &self.alphabet {
            let t = self
                .transitions
                .get(s)
                .ok_or_else(|| Error::Validation(format!("missing transition for symbol {s:?}")))?;
            mats.push(convert(t, self.n).map_err(|e| in_symbol(s, e))?);
        }
        Ok((alphabet, accepting, mats))
    }
}

fn in_symbol(symbol: &str, e: Error) -> Error {
    match e {
        Error::Validation(msg) => Error::Validation(format!("symbol {symbol:?}: {msg}")),
        Error::InvalidSuperoperator { deviation } => Error::Validation(format!(
            "symbol {symbol:?}: completeness sum E^dagger E = I violated (deviation {deviation:.3e})"
        )),
        other => other,
    }
}

fn check_shape<T>(rows: &[Vec<T>], n: usize) -> Result<()> {
    if rows.len() != n {
        return Err(Error::Validation(format!("matrix has {} rows, expected {n}", rows.len())));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::Validation(format!("row {} has {} entries, expected {n}", i + 1, r.len())));
        }
    }
    Ok(())
}

fn stochastic(rows: &RealMatrix, n: usize) -> Result<StochasticMatrix> {
    check_shape(rows, n)?;
    StochasticMatrix::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn complex(rows: &ComplexMatrix, n: usize) -> Result<CMatrix> {
    check_shape(rows, n)?;
    Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

/// Catalog grammar: `name` or `name:key=value,key=value`.
///
/// | name          | parameters             | machine                                  |
/// |---------------|------------------------|------------------------------------------|
/// | `neq`         |                        | the NEQ machine                          |
/// | `rot`         | `theta=<float>`        | unary rotation by `theta`                |
/// | `evenodd`     | `k=<int>`              | EVENODD^k rotation machine               |
/// | `modp`        | `p=<prime>`            | MOD_p rotation machine                   |
/// | `composite`   | `p=<prime>,k=a+b+...`  | tensor product of rotations by 2 pi k/p  |
/// | `evenodd-dfa` | `k=<int>`              | the 2^(k+1)-state cycle DFA              |
pub fn catalog_machine(name: &str) -> Result<Machine> {
    let (head, params) = match name.split_once(':') {
        Some((h, p)) => (h, p),
        None => (name, ""),
    };
    let mut map = BTreeMap::new();
    for part in params.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("catalog parameter {part:?} is not key=value")))?;
        if map.insert(k, v).is_some() {
            return Err(Error::Parse(format!("catalog parameter {k:?} given twice")));
        }
    }
    let mut take = |key: &str| -> Result<&str> {
        map.remove(key)
            .ok_or_else(|| Error::Parse(format!("catalog machine {head:?} needs parameter {key:?}")))
    };
    let machine = match head {
        "neq" => Machine::Unitary(catalog::neq_machine()),
        "rot" => Machine::Unitary(catalog::rotation_machine(number(take("theta")?)?)?),
        "evenodd" => Machine::Unitary(catalog::evenodd_machine(number(take("k")?)?)?),
        "modp" => Machine::Unitary(catalog::modp_machine(number(take("p")?)?)?),
        "composite" => {
            let p = number(take("p")?)?;
            let ks = take("k")?.split('+').map(number).collect::<Result<Vec<u64>>>()?;
            Machine::Unitary(catalog::modp_composite(p, &ks)?)
        }
        "evenodd-dfa" => Machine::Dfa(evenodd_min_dfa(number(take("k")?)?)?),
        _ => return Err(Error::UnknownMachine(name.to_string())),
    };
    if let Some(extra) = map.keys().next() {
        return Err(Error::Parse(format!("catalog machine {head:?} has no parameter {extra:?}")));
    }
    Ok(machine)
}

fn number<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("cannot parse {s:?} as a number")))
}

/// Loads a machine from a file path if one exists, otherwise from the catalog.
pub fn load_machine(spec: &str) -> Result<Machine> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        MachineDescription::parse(&text)?.into_machine()
    } else {
        catalog_machine(spec)
    }
}
