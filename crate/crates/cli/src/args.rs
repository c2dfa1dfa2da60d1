use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use whyq::answers::{Limits, Mode};
use whyq::prover::Budget;

/// Axiom systems as answers to why-questions: possible and acceptable
/// answers, the nonworse orderings, pointlessness, and the special
/// relativity case study.
///
/// THEORY arguments name a registry theory, a `.why` file, or an inline
/// theory such as `{K & B, forall x:S. P(x)}`.
#[derive(Parser, Debug)]
#[command(name = "whyq", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Directory of `.why` theories; caches go to its `.why-cache/`.
    #[arg(long, global = true, env = "WHY_REGISTRY", default_value = ".")]
    pub registry: PathBuf,
    /// Prover: clauses generated. Model finder: ground clauses.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_CLAUSES, value_parser = positive)]
    pub budget_clauses: usize,
    /// Prover: given-clause steps. Model finder: solver decisions / 64.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_STEPS, value_parser = positive)]
    pub budget_steps: usize,
    /// Wall-time limit per query, in seconds.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_WALL_SECS as f64, value_parser = positive_secs)]
    pub timeout: f64,
    /// Largest domain size per sort for finite model search.
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_MAX_DOMAIN, value_parser = positive)]
    pub max_domain: usize,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for rosters and instance sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, got `{s}`")),
    }
}

fn positive_secs(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number of seconds, got `{s}`")),
    }
}

impl Global {
    pub fn limits(&self) -> Limits {
        Limits::new(
            Budget::new(self.budget_clauses, self.budget_steps, Duration::from_secs_f64(self.timeout)),
            self.max_domain,
        )
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Is THEORY a possible answer to "why QUESTION?"
    CheckPossible { theory: String, question: String },
    /// Is THEORY an acceptable answer to "why QUESTION?"
    CheckAcceptable { theory: String, question: String },
    /// Compare LEFT against RIGHT: is LEFT (piecewise) nonworse or better?
    Compare {
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
    /// Is THEORY a pointless answer to "why QUESTION?"
    Pointless {
        theory: String,
        question: String,
        /// Directory of candidate `.why` theories.
        #[arg(long)]
        candidates: Option<PathBuf>,
    },
    /// Try to prove that THEORY entails GOAL.
    Prove { theory: String, goal: String },
    /// Search for a finite model of THEORY in which GOAL is false.
    Countermodel {
        theory: String,
        goal: String,
        /// Largest domain size per sort (overrides --max-domain).
        #[arg(long)]
        max: Option<usize>,
    },
    /// Write THEORY, optionally with a conjecture, as a TPTP problem.
    ExportTptp {
        theory: String,
        /// Conjecture formula, or `noftl`.
        #[arg(long)]
        goal: Option<String>,
        /// Output file (default: THEORY.p in the current directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the union of two theories over the union of their signatures.
    Juxtapose { first: String, second: String },
    /// Exact checks on the rational Minkowski model.
    EvalModel {
        #[arg(value_enum)]
        model: ModelArg,
        #[arg(long, value_enum)]
        check: CheckArg,
        /// Instances sampled per geometric axiom.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Rational triples for the field laws.
        #[arg(long, default_value_t = 1000)]
        field_samples: usize,
        /// Roster file (default: the shipped seed-0 roster, or one
        /// generated from --seed).
        #[arg(long)]
        roster: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Nonworse,
    Piecewise,
    Both,
}

impl ModeArg {
    pub fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Nonworse => vec![Mode::Nonworse],
            ModeArg::Piecewise => vec![Mode::Piecewise],
            ModeArg::Both => vec![Mode::Nonworse, Mode::Piecewise],
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelArg {
    Minkowski,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckArg {
    Noftl,
    Axioms,
}
