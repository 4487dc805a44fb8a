//! Constructors for the benchmark machines: the single-qubit rotation
//! automaton `R_theta` and its specialisations for EVENODD^k, MOD_p and NEQ,
//! plus tensor-product composites for MOD_p.

use std::f64::consts::{PI, SQRT_2};

use rand::Rng;

use crate::quantum::{rotation_operator, UnitaryOperator};
use crate::realtime::MeasureOnceQfa;
use crate::rng;
use crate::tolerance::{EVENODD_MAX_K, MAX_COMPOSITE_FACTORS};
use crate::{Alphabet, Error, Result};

/// Two states, unary alphabet, `U_theta` per symbol, accepting `{q_1}`.
/// Accepts `a^k` with probability `cos^2(k theta)`.
pub fn rotation_machine(theta: f64) -> Result<MeasureOnceQfa> {
    MeasureOnceQfa::new(Alphabet::unary(), vec![rotation_operator(theta)?], &[0])
}

/// `R_theta` with `theta = pi / 2^(k+1)`: every block of `2^k` symbols turns
/// the state a quarter circle, so it solves EVENODD^k exactly.
pub fn evenodd_machine(k: u32) -> Result<MeasureOnceQfa> {
    if !(1..=EVENODD_MAX_K).contains(&k) {
        return Err(Error::InvalidArgument(format!("k must be in 1..={EVENODD_MAX_K}, got {k}")));
    }
    rotation_machine(PI / 2f64.powi(k as i32 + 1))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

/// `2 pi (k m mod p) / p`, reduced before scaling to keep the angle small.
fn residue_angle(p: u64, k: u64, m: u64) -> f64 {
    let r = ((k as u128 * m as u128) % p as u128) as f64;
    2.0 * PI * r / p as f64
}

/// `R_theta` with `theta = 2 pi / p`. Members of MOD_p are accepted with
/// probability 1.
pub fn modp_machine(p: u64) -> Result<MeasureOnceQfa> {
    require_prime(p)?;
    rotation_machine(2.0 * PI / p as f64)
}

/// Tensor product of `R_{2 pi k_i / p}` for the given coefficients, accepting
/// only when every component is in `q_1` (basis index 0). The acceptance of
/// `a^m` is `prod_i cos^2(2 pi k_i m / p)`.
pub fn modp_composite(p: u64, coefficients: &[u64]) -> Result<MeasureOnceQfa> {
    require_prime(p)?;
    check_coefficients(p, coefficients)?;
    let mut u = UnitaryOperator::identity(1);
    for &k in coefficients {
        u = u.tensor(&rotation_operator(residue_angle(p, k, 1))?);
    }
    MeasureOnceQfa::new(Alphabet::unary(), vec![u], &[0])
}

fn check_coefficients(p: u64, coefficients: &[u64]) -> Result<()> {
    if coefficients.is_empty() || coefficients.len() > MAX_COMPOSITE_FACTORS {
        return Err(Error::InvalidArgument(format!(
            "composite needs 1..={MAX_COMPOSITE_FACTORS} coefficients, got {}",
            coefficients.len()
        )));
    }
    if let Some(&k) = coefficients.iter().find(|&&k| k == 0 || k >= p) {
        return Err(Error::InvalidArgument(format!("coefficient {k} outside [1, {}]", p - 1)));
    }
    Ok(())
}

/// Closed-form acceptance `prod_i cos^2(2 pi k_i m / p)` of the composite on `a^m`.
pub fn composite_acceptance(p: u64, coefficients: &[u64], m: u64) -> f64 {
    coefficients.iter().map(|&k| residue_angle(p, k, m).cos().powi(2)).product()
}

/// Largest closed-form acceptance over the non-members `a^1 .. a^(p-1)`.
/// One period suffices since the acceptance is periodic in `m` with period `p`.
pub fn worst_nonmember_acceptance(p: u64, coefficients: &[u64]) -> f64 {
    (1..p).map(|m| composite_acceptance(p, coefficients, m)).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeSearchResult {
    pub coefficients: Vec<u64>,
    pub worst_acceptance: f64,
    /// 0-based index of the successful attempt.
    pub attempt: u64,
}

/// Seeded random search for `d` coefficients whose composite accepts every
/// non-member with probability below `epsilon`. Attempt `i` draws its tuple
/// from stream `(seed, i)`; every candidate is checked exhaustively over one
/// period.
pub fn search_composite_coefficients(
    p: u64,
    d: usize,
    epsilon: f64,
    seed: u64,
    attempts: u64,
) -> Result<Option<CompositeSearchResult>> {
    require_prime(p)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    if !(1..=MAX_COMPOSITE_FACTORS).contains(&d) {
        return Err(Error::InvalidArgument(format!("d must be in 1..={MAX_COMPOSITE_FACTORS}, got {d}")));
    }
    for attempt in 0..attempts {
        let mut r = rng::stream(seed, attempt);
        let coefficients: Vec<u64> = (0..d).map(|_| r.random_range(1..p)).collect();
        let worst = worst_nonmember_acceptance(p, &coefficients);
        if worst < epsilon {
            return Ok(Some(CompositeSearchResult { coefficients, worst_acceptance: worst, attempt }));
        }
    }
    Ok(None)
}

/// Two states, alphabet `{a, b}`, `a -> U_{sqrt2 pi}`, `b -> U_{-sqrt2 pi}`,
/// accepting `{q_2}`. With cutpoint 0 it recognises `|w|_a != |w|_b`.
pub fn neq_machine() -> MeasureOnceQfa {
    let angle = SQRT_2 * PI;
    let ua = rotation_operator(angle).expect("finite angle");
    let ub = rotation_operator(-angle).expect("finite angle");
    MeasureOnceQfa::new(Alphabet::binary(), vec![ua, ub], &[1]).expect("well-formed machine")
}
