//! Command-line front end. [`run`] returns the process exit code:
//! 0 on success, 1 when an input cannot be parsed (or a verification run
//! finds a mismatch), 2 when a solver refuses the instance.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::bounds;
use crate::boxset::BoxSet;
use crate::error::Error;
use crate::game::{GameInstance, Hypergraph, Method};
use crate::io::{self, ResultFile};
use crate::monte_carlo;
use crate::oracle;
use crate::rational::{self, Rational};

#[derive(Parser, Debug)]
#[command(name = "trapsearch", version, about = "Exact solver for booby-trap search games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance and write the result file.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Write the result here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the general upper and lower value bounds.
    Bounds {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Compare the value with the best partition-form strategy.
    Conjecture {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_support: usize,
    },
    /// Play the optimal strategies against each other.
    Simulate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross-check a closed form against the LP oracle on random instances.
    Verify {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    OneUniform,
    Equal,
    K1,
    N4k2,
    Lp,
}

impl MethodArg {
    fn method(self) -> Option<Method> {
        match self {
            MethodArg::Auto => None,
            MethodArg::OneUniform => Some(Method::OneUniform),
            MethodArg::Equal => Some(Method::EqualRewards),
            MethodArg::K1 => Some(Method::KEquals1),
            MethodArg::N4k2 => Some(Method::N4K2),
            MethodArg::Lp => Some(Method::LpOracle),
        }
    }
}

/// Random instance families for verification runs. Rewards are integers
/// drawn uniformly from 1..=100.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    /// Searchable boxes a random nonempty subset, 2 ≤ n ≤ 7, any k.
    OneUniform,
    /// Complete hypergraph, one common reward, 2 ≤ n ≤ 8, any k.
    Equal,
    /// Complete hypergraph, k = 1, 2 ≤ n ≤ 8.
    K1,
    /// Complete hypergraph, n = 4, k = 2.
    N4k2,
}

impl Family {
    pub fn method(self) -> Method {
        match self {
            Family::OneUniform => Method::OneUniform,
            Family::Equal => Method::EqualRewards,
            Family::K1 => Method::KEquals1,
            Family::N4k2 => Method::N4K2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::OneUniform => "one_uniform",
            Family::Equal => "equal",
            Family::K1 => "k1",
            Family::N4k2 => "n4k2",
        }
    }

    pub const ALL: [Family; 4] = [Family::OneUniform, Family::Equal, Family::K1, Family::N4k2];
}

fn reward(rng: &mut impl Rng) -> Rational {
    rational::int(rng.random_range(1..=100))
}

pub fn random_instance(family: Family, rng: &mut impl Rng) -> GameInstance {
    let built = match family {
        Family::OneUniform => {
            let n = rng.random_range(2..=7);
            let k = rng.random_range(1..n);
            let rewards = (0..n).map(|_| reward(rng)).collect();
            let mut boxes = BoxSet::EMPTY;
            while boxes.is_empty() {
                boxes = (0..n).filter(|_| rng.random_bool(0.7)).collect();
            }
            GameInstance::new(rewards, k, Hypergraph::OneUniform(boxes))
        }
        Family::Equal => {
            let n = rng.random_range(2..=8);
            let k = rng.random_range(1..n);
            GameInstance::complete(vec![reward(rng); n], k)
        }
        Family::K1 => {
            let n = rng.random_range(2..=8);
            GameInstance::complete((0..n).map(|_| reward(rng)).collect(), 1)
        }
        Family::N4k2 => GameInstance::complete((0..4).map(|_| reward(rng)).collect(), 2),
    };
    built.expect("generated instances are valid")
}

/// `count` instances of `family`; instance `i` uses stream `i` of the seeded
/// generator, so any prefix is reproducible on its own.
pub fn family_instances(family: Family, count: usize, seed: u64) -> Vec<GameInstance> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            random_instance(family, &mut rng)
        })
        .collect()
}

enum Failure {
    Parse(String),
    Solve(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInstance(_) => Failure::Parse(e.to_string()),
            _ => Failure::Solve(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Parse(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Solve(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Mismatch) => 1,
    }
}

fn exact(q: &Rational) -> serde_json::Value {
    json!({"exact": rational::format(q), "float": rational::to_f64(q)})
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    let emit = |out: &mut dyn Write, text: &str| writeln!(out, "{text}").map_err(|e| Failure::Solve(e.to_string()));
    match command {
        Command::Solve { instance, method, out: path } => {
            let g = io::read_instance(&instance)?;
            let solution = match method.method() {
                None => oracle::solve_any(&g)?,
                Some(m) => oracle::solve_with(&g, m)?,
            };
            let text = ResultFile::from_solution(&solution).to_json();
            match path {
                Some(p) => std::fs::write(&p, text + "\n")
                    .map_err(|e| Failure::Solve(format!("cannot write {}: {e}", p.display())))?,
                None => emit(out, &text)?,
            }
        }
        Command::Bounds { instance } => {
            let g = io::read_instance(&instance)?;
            let lower = match bounds::lower_bound_independent(&g) {
                Ok(v) => exact(&v),
                Err(Error::Regime(_)) => serde_json::Value::Null,
                Err(e) => return Err(e.into()),
            };
            let doc = json!({"lower": lower, "upper": exact(&bounds::upper_bound(&g))});
            emit(out, &serde_json::to_string_pretty(&doc).unwrap())?;
        }
        Command::Conjecture { instance, max_support } => {
            let g = io::read_instance(&instance)?;
            let r = bounds::check_conjecture(&g, max_support)?;
            let witness = r.witness.as_ref().map(|w| {
                w.edges
                    .iter()
                    .zip(w.probabilities())
                    .map(|(e, p)| json!({"edge": e.iter().map(|i| i + 1).collect::<Vec<_>>(), "prob": rational::format(&p)}))
                    .collect::<Vec<_>>()
            });
            let doc = json!({
                "lp_value": exact(&r.lp_value),
                "best": exact(&r.best),
                "gap": exact(&r.gap),
                "verdict": r.verdict(),
                "complete": r.complete,
                "families_examined": r.families_examined,
                "witness": witness,
            });
            emit(out, &serde_json::to_string_pretty(&doc).unwrap())?;
        }
        Command::Simulate { instance, trials, seed } => {
            let g = io::read_instance(&instance)?;
            let s = oracle::solve_any(&g)?;
            let r = monte_carlo::simulate(&g, &s.searcher, &s.hider, trials, seed)?;
            let doc = json!({
                "trials": r.trials,
                "mean": r.mean,
                "stderr": r.stderr,
                "exact": exact(&r.exact),
                "z_score": r.z_score,
                "seed": r.seed,
                "rng": r.rng,
                "pass": r.pass(),
            });
            emit(out, &serde_json::to_string_pretty(&doc).unwrap())?;
        }
        Command::Verify { family, count, seed } => {
            let instances = family_instances(family, count, seed);
            let results: Vec<std::result::Result<bool, String>> = instances
                .par_iter()
                .map(|g| {
                    let closed = oracle::solve_with(g, family.method()).map_err(|e| e.to_string())?;
                    let lp = oracle::solve_oracle(g).map_err(|e| e.to_string())?;
                    Ok(closed.value == lp.value && closed.is_certified_optimal())
                })
                .collect();
            let mut matches = 0;
            for (i, (g, r)) in instances.iter().zip(&results).enumerate() {
                match r {
                    Ok(true) => matches += 1,
                    Ok(false) => emit(out, &format!("instance {i}: mismatch on {}", io::instance_to_json(g)))?,
                    Err(e) => emit(out, &format!("instance {i}: {e}"))?,
                }
            }
            emit(out, &format!("{matches}/{count} exact matches"))?;
            if matches != count {
                return Err(Failure::Mismatch);
            }
        }
    }
    Ok(())
}
