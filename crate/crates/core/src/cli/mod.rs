//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verdict-style command answers
//! "no" (reject, non-member, failed check, nothing found), 2 on usage or
//! validation errors. Errors go to standard error.

pub mod demo;
pub mod description;
pub mod verify;

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog::search_composite_coefficients;
use crate::classical::evenodd_min_dfa_search;
use crate::realtime::{classify_cutpoint, monte_carlo_acceptance, Membership};
use crate::rng::SEED_ENV;
use crate::two_way::{
    eq_exact_rejection_with, eq_simulate_with, letter_delta, walk_gadget_acceptance, walk_gadget_monte_carlo,
    walk_monte_carlo, walk_right_absorption, AcceptStep, EqConfig, PassModel, Verdict, WalkSpec,
};
use crate::{Alphabet, Automaton, Error, Result};

pub use description::{load_machine, Machine, MachineDescription};

/// Largest number of rows `table` and `eq sweep` will print.
const MAX_TABLE_ROWS: usize = 10_000_000;

/// Fixed-point with 15 decimals; negative zero and sub-resolution negative
/// round-off print as zero.
pub fn fmt_prob(p: f64) -> String {
    let p = if p <= 0.0 && p > -5e-16 { 0.0 } else { p };
    format!("{p:.15}")
}

#[derive(Debug, Parser)]
#[command(name = "qfa", version, about = "Simulate classical and quantum finite automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact acceptance probability of a string.
    Prob { machine: String, word: String },
    /// Acceptance probability of every string up to a length, as TSV.
    Table {
        machine: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Membership verdict for a cutpoint; exits 1 unless the string is a member.
    Cutpoint { machine: String, word: String, lambda: f64 },
    /// Monte Carlo estimate of the acceptance probability.
    Mc {
        machine: String,
        word: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Two-way algorithm for strings with equally many a's and b's.
    Eq {
        #[command(subcommand)]
        command: EqCommand,
    },
    /// Fair walk with absorbing end-markers, or the two-walk accept gadget.
    Walk {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        start: usize,
        /// Run the two-walk gadget instead of a single walk.
        #[arg(long)]
        gadget: bool,
        /// Also estimate by simulation with this many trials.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Smallest unary DFA solving EVENODD^k, by exhaustive search.
    SearchDfa {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m_max: usize,
    },
    /// Random search for MOD_p composite coefficients with small error.
    SearchComposite {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 100_000)]
        attempts: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print a machine in the JSON file format.
    Export { machine: String },
    /// Run the invariant suite; exits 1 if any check fails.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print an example table.
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(demo::NAMES))]
        name: String,
    },
}

#[derive(Debug, Subcommand)]
enum EqCommand {
    /// One seeded run; exits 1 on reject.
    Run {
        word: String,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = StepArg::Ideal)]
        accept_step: StepArg,
        #[arg(long, value_enum, default_value_t = PassArg::Analytic)]
        pass_model: PassArg,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Exact probability that one round rejects.
    Exact {
        word: String,
        #[arg(long, value_enum, default_value_t = StepArg::Ideal)]
        accept_step: StepArg,
    },
    /// Exact one-round rejection for every binary string up to a length, as TSV.
    Sweep {
        #[arg(long)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = StepArg::Ideal)]
        accept_step: StepArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StepArg {
    Ideal,
    Walk,
}

impl From<StepArg> for AcceptStep {
    fn from(s: StepArg) -> Self {
        match s {
            StepArg::Ideal => AcceptStep::Ideal,
            StepArg::Walk => AcceptStep::RandomWalk,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PassArg {
    Analytic,
    Stepping,
}

impl From<PassArg> for PassModel {
    fn from(p: PassArg) -> Self {
        match p {
            PassArg::Analytic => PassModel::Analytic,
            PassArg::Stepping => PassModel::CellStepping,
        }
    }
}

/// Text written to standard output and the exit code.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

/// Runs one command. `args` excludes the program name.
pub fn run_command<W: Write, E: Write>(args: &[String], out: &mut W, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("qfa".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn seed_or_env(seed: Option<u64>) -> Result<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn check_table_size(alphabet: &Alphabet, max_len: usize) -> Result<()> {
    let mut rows: usize = 0;
    let mut level: usize = 1;
    for _ in 0..=max_len {
        rows = rows.saturating_add(level);
        level = level.saturating_mul(alphabet.len());
    }
    if rows > MAX_TABLE_ROWS {
        return Err(Error::InvalidArgument(format!(
            "--max-len {max_len} would print more than {MAX_TABLE_ROWS} rows"
        )));
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Prob { machine, word } => {
            let m = load_machine(&machine)?;
            Ok(Outcome::ok(format!("{}\n", fmt_prob(m.acceptance(&word)?))))
        }
        Command::Table { machine, max_len } => {
            let m = load_machine(&machine)?;
            check_table_size(m.alphabet(), max_len)?;
            let mut text = String::from("string\tprobability\n");
            for w in m.alphabet().words_up_to(max_len) {
                text.push_str(&format!("{w}\t{}\n", fmt_prob(m.acceptance(&w)?)));
            }
            Ok(Outcome::ok(text))
        }
        Command::Cutpoint { machine, word, lambda } => {
            let m = load_machine(&machine)?;
            let v = classify_cutpoint(&m, &word, lambda)?;
            let code = if v.membership == Membership::Member { 0 } else { 1 };
            Ok(Outcome { text: format!("{}\t{}\n", v.membership.as_str(), fmt_prob(v.probability)), code })
        }
        Command::Mc { machine, word, trials, seed } => {
            let m = load_machine(&machine)?;
            let seed = seed_or_env(seed)?;
            let est = monte_carlo_acceptance(&m, &word, trials, seed)?;
            Ok(Outcome::ok(format!(
                "frequency\t{}\naccepted\t{}\ntrials\t{}\nseed\t{seed}\nexact\t{}\nsigma\t{}\nwithin_5_sigma\t{}\n",
                fmt_prob(est.frequency),
                est.accepted,
                est.trials,
                fmt_prob(est.exact),
                fmt_prob(est.sigma),
                est.within_five_sigma
            )))
        }
        Command::Eq { command } => eq(command),
        Command::Walk { n, start, gadget, trials, seed } => {
            let mut text = String::new();
            if gadget {
                let g = walk_gadget_acceptance(n)?;
                text.push_str(&format!(
                    "gadget\t{}\ntarget\t{}\nratio\t{}\n",
                    fmt_prob(g.gadget),
                    fmt_prob(g.target),
                    fmt_prob(g.ratio)
                ));
            } else {
                let p = walk_right_absorption(WalkSpec::new(n, start)?)?;
                text.push_str(&format!("right_exit\t{}\n", fmt_prob(p)));
            }
            if let Some(trials) = trials {
                let seed = seed_or_env(seed)?;
                let est = if gadget {
                    walk_gadget_monte_carlo(n, trials, seed)?
                } else {
                    walk_monte_carlo(WalkSpec::new(n, start)?, trials, seed)?
                };
                text.push_str(&format!(
                    "frequency\t{}\ntrials\t{}\nseed\t{seed}\nwithin_5_sigma\t{}\n",
                    fmt_prob(est.frequency),
                    est.trials,
                    est.within_five_sigma
                ));
            }
            Ok(Outcome::ok(text))
        }
        Command::SearchDfa { k, m_max } => match evenodd_min_dfa_search(k, m_max)? {
            Some(found) => {
                let next: Vec<String> =
                    found.witness.successors()[0].iter().map(|q| (q + 1).to_string()).collect();
                let accepting: Vec<String> =
                    found.witness.accepting().iter().map(|q| (q + 1).to_string()).collect();
                Ok(Outcome::ok(format!(
                    "states\t{}\ncandidates_examined\t{}\nsuccessors\t{}\naccepting\t{}\n",
                    found.states,
                    found.candidates_examined,
                    next.join(","),
                    accepting.join(",")
                )))
            }
            None => Ok(Outcome { text: format!("states\tnone up to {m_max}\n"), code: 1 }),
        },
        Command::SearchComposite { p, d, epsilon, attempts, seed } => {
            let seed = seed_or_env(seed)?;
            match search_composite_coefficients(p, d, epsilon, seed, attempts)? {
                Some(r) => {
                    let ks: Vec<String> = r.coefficients.iter().map(u64::to_string).collect();
                    Ok(Outcome::ok(format!(
                        "coefficients\t{}\nworst_nonmember_acceptance\t{}\nattempt\t{}\nmachine\tcomposite:p={p},k={}\n",
                        ks.join(","),
                        fmt_prob(r.worst_acceptance),
                        r.attempt,
                        ks.join("+")
                    )))
                }
                None => Ok(Outcome { text: format!("coefficients\tnone in {attempts} attempts\n"), code: 1 }),
            }
        }
        Command::Export { machine } => {
            let m = load_machine(&machine)?;
            Ok(Outcome::ok(format!("{}\n", m.to_json())))
        }
        Command::Verify { seed } => {
            let seed = seed_or_env(seed)?;
            let mut text = String::new();
            let mut failed = 0;
            let results = verify::run_all(seed);
            for r in &results {
                match &r.result {
                    Ok(detail) => text.push_str(&format!("PASS\t{}\t{detail}\n", r.name)),
                    Err(detail) => {
                        failed += 1;
                        text.push_str(&format!("FAIL\t{}\t{detail}\n", r.name));
                    }
                }
            }
            text.push_str(&format!("{} passed, {failed} failed\n", results.len() - failed));
            Ok(Outcome { text, code: if failed == 0 { 0 } else { 1 } })
        }
        Command::Demo { name } => Ok(Outcome::ok(demo::render(&name)?)),
    }
}

fn eq(command: EqCommand) -> Result<Outcome> {
    match command {
        EqCommand::Run { word, rounds, seed, accept_step, pass_model, budget } => {
            let mut config = EqConfig::new(rounds, seed_or_env(seed)?);
            config.accept_step = accept_step.into();
            config.pass_model = pass_model.into();
            if let Some(b) = budget {
                config.pass_budget = b;
            }
            let r = eq_simulate_with(&word, &config)?;
            let text = format!(
                "verdict\t{}\npasses_used\t{}\nlength\t{}\ndelta\t{}\nrounds_completed\t{}\nseed\t{}\n",
                r.verdict.as_str(),
                r.passes_used,
                r.w_length,
                r.delta,
                r.rounds_completed,
                config.seed
            );
            Ok(Outcome { text, code: if r.verdict == Verdict::Accept { 0 } else { 1 } })
        }
        EqCommand::Exact { word, accept_step } => {
            let rejection = eq_exact_rejection_with(&word, accept_step.into())?;
            Ok(Outcome::ok(format!("{}\n", fmt_prob(rejection))))
        }
        EqCommand::Sweep { max_len, accept_step } => {
            let alphabet = Alphabet::binary();
            check_table_size(&alphabet, max_len)?;
            let mut text = String::from("string\tdelta\trejection\n");
            for w in alphabet.words_up_to(max_len) {
                let r = eq_exact_rejection_with(&w, accept_step.into())?;
                text.push_str(&format!("{w}\t{}\t{}\n", letter_delta(&w)?, fmt_prob(r)));
            }
            Ok(Outcome::ok(text))
        }
    }
}
