//! The invariant suite behind `qfa verify`.
//!
//! Each check draws its random cases from stream `(seed, check index)` and
//! reports the worst deviation it saw.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::{self, composite_acceptance, is_prime};
use crate::classical::evenodd_min_dfa;
use crate::general::{parallel_compose, pfa_to_gqfa, unitary_to_gqfa, AcceptRule};
use crate::quantum::{completeness_deviation, max_abs_diff, rotation_operator, DensityMatrix, MeasurementPartition, Superoperator};
use crate::realtime::{classify_probability, promise_check_exact, Membership};
use crate::tolerance::{EPS_EXACT, EPS_NORM, EPS_PROB};
use crate::two_way::{eq_exact_rejection, walk_gadget_acceptance, walk_right_absorption, WalkSpec};
use crate::{random, rng, Alphabet, Automaton};

use super::description::MachineDescription;

pub type CheckResult = std::result::Result<String, String>;

pub struct Check {
    pub name: &'static str,
    pub run: fn(&mut ChaCha8Rng) -> CheckResult,
}

pub struct CheckOutcome {
    pub name: &'static str,
    pub result: CheckResult,
}

pub fn checks() -> Vec<Check> {
    vec![
        Check { name: "unitary-preserves-norm", run: unitary_norm },
        Check { name: "measurement-probabilities-sum-to-one", run: measurement_sum },
        Check { name: "rotation-group-law", run: rotation_group },
        Check { name: "rotation-acceptance-cos2", run: rotation_law },
        Check { name: "superoperator-preserves-density", run: superoperator_density },
        Check { name: "unitary-channel-matches-pure-evolution", run: unitary_channel },
        Check { name: "incomplete-element-set-rejected", run: incomplete_rejected },
        Check { name: "pfa-acceptance-in-unit-interval", run: pfa_range },
        Check { name: "pfa-embeds-into-general-qfa", run: pfa_embedding },
        Check { name: "dfa-agrees-with-pfa-form", run: dfa_pfa },
        Check { name: "parallel-composition-valid", run: composition },
        Check { name: "cutpoint-monotone-in-lambda", run: cutpoint_monotone },
        Check { name: "evenodd-exact-promise", run: evenodd_promise },
        Check { name: "modp-nonmember-bound-odd-primes", run: modp_bound },
        Check { name: "composite-matches-product-formula", run: composite_product },
        Check { name: "neq-cutpoint-zero", run: neq_exhaustive },
        Check { name: "sqrt2-rotation-distance-bound", run: sqrt2_bound },
        Check { name: "eq-round-rejection-at-least-two-thirds", run: eq_rejection },
        Check { name: "walk-absorption-closed-form", run: walk_closed_form },
        Check { name: "machine-file-round-trip", run: round_trip },
    ]
}

pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    checks()
        .into_iter()
        .enumerate()
        .map(|(i, c)| CheckOutcome { name: c.name, result: (c.run)(&mut rng::stream(seed, i as u64)) })
        .collect()
}

fn bound(worst: f64, tol: f64, what: &str) -> CheckResult {
    if worst <= tol {
        Ok(format!("max {what} {worst:.3e}"))
    } else {
        Err(format!("max {what} {worst:.3e} exceeds {tol:.0e}"))
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn unitary_norm(r: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = r.random_range(1..=6);
        let u = random::unitary(r, n);
        let psi = random::pure_state(r, n);
        worst = worst.max((u.apply(&psi).map_err(fail)?.norm() - 1.0).abs());
    }
    bound(worst, EPS_NORM, "norm deviation")
}

fn measurement_sum(r: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = r.random_range(1..=6);
        let psi = random::pure_state(r, n);
        let mut labels: Vec<usize> = (0..n).map(|_| r.random_range(0..3)).collect();
        labels[0] = 0;
        let blocks: Vec<Vec<usize>> = (0..3)
            .map(|b| (0..n).filter(|&i| labels[i] == b).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        let partition = MeasurementPartition::new(blocks, n).map_err(fail)?;
        let outcomes = psi.measure(&partition).map_err(fail)?;
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        worst = worst.max((total - 1.0).abs());
        for o in &outcomes {
            if let Some(s) = &o.state {
                worst = worst.max((s.norm() - 1.0).abs());
            }
        }
    }
    bound(worst, EPS_NORM, "deviation")
}

fn rotation_group(r: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (a, b) = (r.random_range(-10.0..10.0), r.random_range(-10.0..10.0));
        let ab = rotation_operator(a).and_then(|u| u.after(&rotation_operator(b)?)).map_err(fail)?;
        let sum = rotation_operator(a + b).map_err(fail)?;
        worst = worst.max(max_abs_diff(ab.matrix(), sum.matrix()));
    }
    bound(worst, EPS_NORM, "entry deviation")
}

fn rotation_law(r: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let theta = r.random_range(0.0..2.0 * PI);
        let m = catalog::rotation_machine(theta).map_err(fail)?;
        let f = m.power_acceptances('a', 500).map_err(fail)?;
        for (k, fk) in f.iter().enumerate() {
            worst = worst.max((fk - (k as f64 * theta).cos().powi(2)).abs());
        }
    }
    bound(worst, EPS_EXACT, "deviation")
}

fn superoperator_density(r: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = r.random_range(1..=5);
        let l = r.random_range(1..=4);
        let s = random::superoperator(r, n, l);
        let rank = r.random_range(1..=n);
        let rho = random::density(r, n, rank);
        let out = s.apply(&rho).map_err(fail)?;
        worst = worst
            .max((out.trace().re - 1.0).abs())
            .max(out.trace().im.abs())
            .max(out.hermiticity_deviation())
            .max(-out.min_eigenvalue());
    }
    bound(worst, EPS_NORM, "density deviation")
}

fn unitary_channel(r: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = r.random_range(1..=6);
        let u = random::unitary(r, n);
        let psi = random::pure_state(r, n);
        let mixed = Superoperator::from_unitary(&u).apply(&DensityMatrix::from_pure(&psi)).map_err(fail)?;
        let pure = DensityMatrix::from_pure(&u.apply(&psi).map_err(fail)?);
        worst = worst.max(max_abs_diff(mixed.matrix(), pure.matrix()));
    }
    bound(worst, EPS_NORM, "entry deviation")
}

fn incomplete_rejected(r: &mut ChaCha8Rng) -> CheckResult {
    for case in 0..100 {
        let n = r.random_range(1..=5);
        let l = r.random_range(1..=4);
        let s = random::superoperator(r, n, l);
        let h = random::hermitian_direction(r, n);
        let delta = Complex64::new(1e-6, 0.0);
        let perturbed: Vec<_> = s.elements().iter().map(|e| e + e * &h * delta).collect();
        if Superoperator::new(perturbed.clone()).is_ok() {
            return Err(format!(
                "case {case}: perturbed set accepted (deviation {:.3e})",
                completeness_deviation(&perturbed)
            ));
        }
    }
    Ok("100 perturbed element sets rejected".into())
}

fn pfa_range(r: &mut ChaCha8Rng) -> CheckResult {
    let alphabet = Alphabet::binary();
    for _ in 0..100 {
        let n = r.random_range(1..=6);
        let pfa = random::pfa(r, n, &alphabet);
        let w = random::word(r, &alphabet, 12);
        let f = pfa.acceptance(&w).map_err(fail)?;
        if !(-EPS_PROB..=1.0 + EPS_PROB).contains(&f) {
            return Err(format!("acceptance {f} of {w:?} outside [0, 1]"));
        }
    }
    Ok("100 random cases in range".into())
}

fn pfa_embedding(r: &mut ChaCha8Rng) -> CheckResult {
    let alphabet = Alphabet::binary();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = r.random_range(1..=6);
        let pfa = random::pfa(r, n, &alphabet);
        let g = pfa_to_gqfa(&pfa);
        for _ in 0..10 {
            let w = random::word(r, &alphabet, 12);
            worst = worst.max((pfa.acceptance(&w).map_err(fail)? - g.acceptance(&w).map_err(fail)?).abs());
        }
    }
    bound(worst, EPS_EXACT, "deviation")
}

fn dfa_pfa(r: &mut ChaCha8Rng) -> CheckResult {
    let alphabet = Alphabet::binary();
    for _ in 0..50 {
        let n = r.random_range(1..=6);
        let next: Vec<Vec<usize>> = (0..2).map(|_| (0..n).map(|_| r.random_range(0..n)).collect()).collect();
        let accepting: Vec<usize> = (0..n).filter(|_| r.random_bool(0.5)).collect();
        let dfa = crate::classical::RtDfa::new(alphabet.clone(), next, &accepting).map_err(fail)?;
        let pfa = dfa.to_pfa();
        for w in alphabet.words_up_to(5) {
            let expected = if dfa.accepts(&w).map_err(fail)? { 1.0 } else { 0.0 };
            if pfa.acceptance(&w).map_err(fail)? != expected {
                return Err(format!("DFA and PFA disagree on {w:?}"));
            }
        }
    }
    Ok("50 random DFAs agree on all words up to length 5".into())
}

fn composition(r: &mut ChaCha8Rng) -> CheckResult {
    let alphabet = Alphabet::binary();
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let (n1, n2) = (r.random_range(1..=3), r.random_range(1..=3));
        let a = pfa_to_gqfa(&random::pfa(r, n1, &alphabet));
        let b = pfa_to_gqfa(&random::pfa(r, n2, &alphabet));
        for rule in [AcceptRule::Conjunction, AcceptRule::Disjunction] {
            let c = parallel_compose(&a, &b, rule).map_err(fail)?;
            for ch in c.channels() {
                worst = worst.max(completeness_deviation(ch.elements()));
            }
            let w = random::word(r, &alphabet, 8);
            let (fa, fb) = (a.acceptance(&w).map_err(fail)?, b.acceptance(&w).map_err(fail)?);
            let expected = match rule {
                AcceptRule::Conjunction => fa * fb,
                AcceptRule::Disjunction => fa + fb - fa * fb,
            };
            worst = worst.max((c.acceptance(&w).map_err(fail)? - expected).abs());
        }
    }
    bound(worst, EPS_NORM, "deviation")
}

fn cutpoint_monotone(r: &mut ChaCha8Rng) -> CheckResult {
    let rank = |m: Membership| match m {
        Membership::Nonmember => 0,
        Membership::AtCutpoint => 1,
        Membership::Member => 2,
    };
    for _ in 0..1000 {
        let f = r.random::<f64>();
        let (l1, l2) = (r.random::<f64>(), r.random::<f64>());
        let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
        let a = classify_probability(f, lo).map_err(fail)?.membership;
        let b = classify_probability(f, hi).map_err(fail)?.membership;
        if rank(b) > rank(a) {
            return Err(format!("f = {f}: verdict at {hi} stronger than at {lo}"));
        }
    }
    Ok("1000 random triples".into())
}

fn evenodd_promise(_: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for k in 1..=10u32 {
        let m = catalog::evenodd_machine(k).map_err(fail)?;
        let block = 1usize << k;
        let yes: Vec<String> = (0..=20).step_by(2).map(|j| "a".repeat(j * block)).collect();
        let no: Vec<String> = (1..=20).step_by(2).map(|j| "a".repeat(j * block)).collect();
        worst = worst.max(promise_check_exact(&m, &yes, &no).map_err(fail)?.worst_deviation);
        let dfa = evenodd_min_dfa(k).map_err(fail)?;
        for (j, w) in yes.iter().chain(&no).enumerate() {
            if dfa.accepts(w).map_err(fail)? != (j < yes.len()) {
                return Err(format!("cycle DFA wrong for k = {k}"));
            }
        }
    }
    bound(worst, EPS_EXACT, "deviation")
}

fn modp_bound(_: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for p in [3u64, 5, 7, 11, 13, 31] {
        let m = catalog::modp_machine(p).map_err(fail)?;
        let f = m.power_acceptances('a', 5 * p as usize).map_err(fail)?;
        let cap = (PI / p as f64).cos().powi(2);
        for (j, fj) in f.iter().enumerate() {
            let excess = if (j as u64).is_multiple_of(p) { 1.0 - fj } else { fj - cap };
            worst = worst.max(excess);
        }
    }
    bound(worst, EPS_EXACT, "excess over bound")
}

fn composite_product(r: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = 0.0f64;
    let primes: Vec<u64> = (3..40).filter(|&p| is_prime(p)).collect();
    for _ in 0..20 {
        let p = primes[r.random_range(0..primes.len())];
        let d = r.random_range(1..=3);
        let ks: Vec<u64> = (0..d).map(|_| r.random_range(1..p)).collect();
        let m = catalog::modp_composite(p, &ks).map_err(fail)?;
        let f = m.power_acceptances('a', 2 * p as usize).map_err(fail)?;
        for (j, fj) in f.iter().enumerate() {
            worst = worst.max((fj - composite_acceptance(p, &ks, j as u64)).abs());
        }
    }
    bound(worst, EPS_EXACT, "deviation")
}

fn neq_exhaustive(_: &mut ChaCha8Rng) -> CheckResult {
    let m = catalog::neq_machine();
    for w in Alphabet::binary().words_up_to(10) {
        let f = m.acceptance(&w).map_err(fail)?;
        let balanced = w.chars().filter(|&c| c == 'a').count() * 2 == w.len();
        if (f <= EPS_PROB) != balanced {
            return Err(format!("f({w:?}) = {f:.3e}"));
        }
    }
    Ok("all 2047 strings up to length 10".into())
}

fn sqrt2_bound(_: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = f64::INFINITY;
    for k in 1..=10_000u32 {
        let k = k as f64;
        worst = worst.min((k * SQRT_2 * PI).sin().abs() * SQRT_2 * k);
    }
    if worst >= 1.0 {
        Ok(format!("min sqrt2 k |sin(k sqrt2 pi)| = {worst:.6}"))
    } else {
        Err(format!("min sqrt2 k |sin(k sqrt2 pi)| = {worst:.6} < 1"))
    }
}

fn eq_rejection(_: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = f64::INFINITY;
    for w in Alphabet::binary().words_up_to(10) {
        let r = eq_exact_rejection(&w).map_err(fail)?;
        let balanced = w.chars().filter(|&c| c == 'a').count() * 2 == w.len();
        if balanced {
            if r != 0.0 {
                return Err(format!("member {w:?} rejected with probability {r}"));
            }
        } else {
            worst = worst.min(r);
        }
    }
    if worst >= 2.0 / 3.0 - EPS_EXACT {
        Ok(format!("min non-member rejection {worst:.6}"))
    } else {
        Err(format!("non-member rejection {worst:.6} below 2/3"))
    }
}

fn walk_closed_form(_: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for n in 1..=30 {
        for start in 1..=n {
            let x = walk_right_absorption(WalkSpec::new(n, start).map_err(fail)?).map_err(fail)?;
            worst = worst.max((x - start as f64 / (n + 1) as f64).abs());
        }
        let g = walk_gadget_acceptance(n).map_err(fail)?;
        worst = worst.max((g.gadget - 1.0 / ((n + 1) * (n + 1)) as f64).abs());
    }
    bound(worst, EPS_EXACT, "deviation")
}

fn round_trip(r: &mut ChaCha8Rng) -> CheckResult {
    let alphabet = Alphabet::binary();
    let mut machines = vec![
        super::Machine::Unitary(catalog::neq_machine()),
        super::Machine::Unitary(catalog::evenodd_machine(3).map_err(fail)?),
        super::Machine::Dfa(evenodd_min_dfa(1).map_err(fail)?),
        super::Machine::Pfa(random::pfa(r, 4, &alphabet)),
        super::Machine::General(random_gqfa(r, &alphabet)),
        super::Machine::General(unitary_to_gqfa(&catalog::neq_machine())),
    ];
    for m in machines.drain(..) {
        let back = MachineDescription::parse(&m.to_json())
            .and_then(|d| d.into_machine())
            .map_err(fail)?;
        for w in m.alphabet().words_up_to(5) {
            let (a, b) = (m.acceptance(&w).map_err(fail)?, back.acceptance(&w).map_err(fail)?);
            if a.to_bits() != b.to_bits() {
                return Err(format!("{} machine changed on {w:?}: {a} vs {b}", m.kind()));
            }
        }
    }
    Ok("6 machines reparse bit-exactly".into())
}

fn random_gqfa(r: &mut ChaCha8Rng, alphabet: &Alphabet) -> crate::general::GeneralQfa {
    let n = 3;
    let channels = (0..alphabet.len()).map(|_| random::superoperator(r, n, 2)).collect();
    crate::general::GeneralQfa::new(alphabet.clone(), channels, &[0]).expect("valid")
}
