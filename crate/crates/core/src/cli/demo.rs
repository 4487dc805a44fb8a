//! Example tables printed by `qfa demo <name>`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;

use crate::catalog::{self, search_composite_coefficients, worst_nonmember_acceptance};
use crate::classical::evenodd_min_dfa_search;
use crate::realtime::classify_cutpoint;
use crate::two_way::{eq_accept_prob, eq_exact_rejection, eq_pass_reject_prob, walk_gadget_acceptance, AcceptStep};
use crate::{Alphabet, Automaton, Error, Result};

use super::fmt_prob;

pub const NAMES: &[&str] = &["rotation", "evenodd", "dfa-bound", "modp", "composite", "neq", "sqrt2", "eq", "walk"];

pub fn render(name: &str) -> Result<String> {
    let mut out = String::new();
    match name {
        "rotation" => rotation(&mut out)?,
        "evenodd" => evenodd(&mut out)?,
        "dfa-bound" => dfa_bound(&mut out)?,
        "modp" => modp(&mut out)?,
        "composite" => composite(&mut out)?,
        "neq" => neq(&mut out)?,
        "sqrt2" => sqrt2(&mut out),
        "eq" => eq(&mut out)?,
        "walk" => walk(&mut out)?,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown demo {name:?}; available: {}",
                NAMES.join(", ")
            )))
        }
    }
    Ok(out)
}

/// Rotation by `arccos(3/5)`: acceptance of `a^k` against `cos^2(k theta)`.
fn rotation(out: &mut String) -> Result<()> {
    let theta = (0.6f64).acos();
    let m = catalog::rotation_machine(theta)?;
    let f = m.power_acceptances('a', 12)?;
    writeln!(out, "k\tacceptance\tcos2_k_theta").unwrap();
    for (k, fk) in f.iter().enumerate() {
        writeln!(out, "{k}\t{}\t{}", fmt_prob(*fk), fmt_prob((k as f64 * theta).cos().powi(2))).unwrap();
    }
    Ok(())
}

fn evenodd(out: &mut String) -> Result<()> {
    writeln!(out, "k\tj\tlength\tacceptance").unwrap();
    for k in 1..=3u32 {
        let m = catalog::evenodd_machine(k)?;
        for j in 0..=4usize {
            let len = j << k;
            writeln!(out, "{k}\t{j}\t{len}\t{}", fmt_prob(m.acceptance(&"a".repeat(len))?)).unwrap();
        }
    }
    Ok(())
}

fn dfa_bound(out: &mut String) -> Result<()> {
    writeln!(out, "k\tqfa_states\tmin_dfa_states\tcandidates_examined").unwrap();
    for k in 1..=2u32 {
        let found = evenodd_min_dfa_search(k, 1 << (k + 1))?
            .ok_or_else(|| Error::Validation(format!("no DFA found for k = {k}")))?;
        writeln!(out, "{k}\t2\t{}\t{}", found.states, found.candidates_examined).unwrap();
    }
    Ok(())
}

fn modp(out: &mut String) -> Result<()> {
    writeln!(out, "p\tmember_acceptance\tworst_nonmember_acceptance\tcos2_pi_over_p").unwrap();
    for p in [2u64, 3, 5, 7, 11, 13, 31] {
        let m = catalog::modp_machine(p)?;
        let member = m.acceptance(&"a".repeat(p as usize))?;
        let worst = worst_nonmember_acceptance(p, &[1]);
        writeln!(out, "{p}\t{}\t{}\t{}", fmt_prob(member), fmt_prob(worst), fmt_prob((PI / p as f64).cos().powi(2)))
            .unwrap();
    }
    Ok(())
}

fn composite(out: &mut String) -> Result<()> {
    writeln!(out, "p\td\tepsilon\tcoefficients\tworst_nonmember_acceptance\tattempt").unwrap();
    for (p, d) in [(31u64, 4usize), (31, 6), (101, 8)] {
        let eps = 0.25;
        match search_composite_coefficients(p, d, eps, 0, 10_000)? {
            Some(r) => {
                let ks: Vec<String> = r.coefficients.iter().map(u64::to_string).collect();
                writeln!(out, "{p}\t{d}\t{eps}\t{}\t{}\t{}", ks.join("+"), fmt_prob(r.worst_acceptance), r.attempt)
                    .unwrap();
            }
            None => writeln!(out, "{p}\t{d}\t{eps}\t-\t-\t-").unwrap(),
        }
    }
    Ok(())
}

fn neq(out: &mut String) -> Result<()> {
    let m = catalog::neq_machine();
    writeln!(out, "string\tacceptance\tverdict_at_0").unwrap();
    for w in Alphabet::binary().words_up_to(4) {
        let v = classify_cutpoint(&m, &w, 0.0)?;
        writeln!(out, "{w}\t{}\t{}", fmt_prob(v.probability), v.membership.as_str()).unwrap();
    }
    Ok(())
}

/// `|sin(k sqrt2 pi)|` stays above `1 / (sqrt2 k)`.
fn sqrt2(out: &mut String) {
    writeln!(out, "k\tabs_sin_k_sqrt2_pi\tlower_bound").unwrap();
    for k in 1..=20u32 {
        let k = k as f64;
        writeln!(out, "{k}\t{}\t{}", fmt_prob((k * SQRT_2 * PI).sin().abs()), fmt_prob(1.0 / (SQRT_2 * k))).unwrap();
    }
}

/// Worst one-round rejection over non-members of each length.
fn eq(out: &mut String) -> Result<()> {
    writeln!(out, "length\tp_accept\tmin_pass_reject\tmin_round_rejection").unwrap();
    let words = Alphabet::binary().words_up_to(10);
    for len in 1..=10usize {
        let mut min_pass = f64::INFINITY;
        let mut min_round = f64::INFINITY;
        for w in words.iter().filter(|w| w.len() == len) {
            if w.chars().filter(|&c| c == 'a').count() * 2 != len {
                min_pass = min_pass.min(eq_pass_reject_prob(w)?);
                min_round = min_round.min(eq_exact_rejection(w)?);
            }
        }
        let p_acc = eq_accept_prob(len, AcceptStep::Ideal);
        writeln!(out, "{len}\t{}\t{}\t{}", fmt_prob(p_acc), fmt_prob(min_pass), fmt_prob(min_round)).unwrap();
    }
    Ok(())
}

fn walk(out: &mut String) -> Result<()> {
    writeln!(out, "n\tgadget\ttarget\tratio").unwrap();
    for n in 1..=10usize {
        let g = walk_gadget_acceptance(n)?;
        writeln!(out, "{n}\t{}\t{}\t{}", fmt_prob(g.gadget), fmt_prob(g.target), fmt_prob(g.ratio)).unwrap();
    }
    Ok(())
}
