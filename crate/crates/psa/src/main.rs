//! `psa` — Poisson centers, stratifications, and primitive ideals from
//! the command line. Exit codes: 0 success, 1 mathematical failure
//! (axiom violation or verification failure), 2 input error.

use clap::{Parser, Subcommand};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use psa::bracket::check_poisson_axioms;
use psa::config::{self, LoadedProblem};
use psa::ideals::delta_core_test;
use psa::polyring::{parse, RationalPoint};
use psa::report::{
    strata_to_text, CenterReport, CheckReport, CoreTestReport, PcoreReport, PosetReport,
    PrimitiveReport, StratumReport, VerifyReport,
};
use psa::strata::{
    enumerate_strata, pcore_point, poset_of_catalog, primitive_template, ProblemSpec,
};

#[derive(Parser)]
#[command(
    name = "psa",
    version,
    about = "Exact Poisson-center, stratification, and primitive-ideal calculator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check antisymmetry, Leibniz, and Jacobi for the configured bracket
    Check {
        #[arg(short, long)]
        input: PathBuf,
        /// Random trials beyond the exact generator-triple certificate
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Poisson center of the localization at the open stratum
    Center {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate all strata with their centers and primitive templates
    Strata {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Primitive-ideal template of one stratum, optionally instantiated
    Primitive {
        #[arg(short, long)]
        input: PathBuf,
        /// Vanishing variables, comma separated (omit for the open stratum)
        #[arg(long)]
        stratum: Option<String>,
        /// Nonzero parameter values, comma separated
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Poisson core of the maximal ideal at a rational point
    Pcore {
        #[arg(short, long)]
        input: PathBuf,
        /// Coordinates, comma separated, e.g. 1,2/3,-4
        #[arg(long)]
        point: String,
        #[arg(long)]
        json: bool,
    },
    /// Verify H-stability, Poisson stability, and primality of ideals
    VerifyIdeal {
        #[arg(short, long)]
        input: PathBuf,
        /// Ideal file (single object or array of objects)
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Bounded-depth derivation-core membership test
    CoreTest {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
        /// Element to test, in the expression grammar
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long)]
        json: bool,
    },
    /// Inclusion poset of an ideal catalog, with optional DOT output
    Poset {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        catalog: PathBuf,
        /// Write the graph in DOT format to this path
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

/// Input-side failures: exit 2 with a one-line diagnostic.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

fn parse_stratum(
    selector: &Option<String>,
    problem: &LoadedProblem,
) -> Result<BTreeSet<usize>, InputError> {
    let mut x = BTreeSet::new();
    if let Some(s) = selector {
        for name in s.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let index = problem
                .ctx
                .index_of(name)
                .ok_or_else(|| InputError(format!("unknown variable '{name}' in --stratum")))?;
            x.insert(index);
        }
    }
    Ok(x)
}

fn stratum_report(problem: &ProblemSpec, x: &BTreeSet<usize>) -> Result<StratumReport, InputError> {
    let template = primitive_template(problem, x)?;
    let ctx = problem.context();
    Ok(StratumReport {
        x: template.stratum.vanishing_names(ctx),
        j: template.stratum.ideal.canonical_string(),
        center: template
            .stratum
            .center
            .generators
            .iter()
            .map(|g| psa::polyring::monomial_string(ctx, g))
            .collect(),
        primitive_template: template.display_string(),
    })
}

/// Ok(stdout, exit_code); Err is an input error (exit 2).
fn run(cli: Cli) -> Result<(String, u8), InputError> {
    match cli.command {
        Command::Check {
            input,
            trials,
            seed,
            json,
        } => {
            let loaded = config::load_problem(&input)?;
            let bracket = loaded.bracket.as_ref().ok_or_else(|| {
                InputError(format!(
                    "{}: this command needs a \"bracket\" entry",
                    input.display()
                ))
            })?;
            let report = CheckReport::from_axioms(&check_poisson_axioms(bracket, trials, seed));
            let code = u8::from(!report.all_ok());
            Ok((
                if json {
                    json_line(&report)
                } else {
                    report.to_text()
                },
                code,
            ))
        }
        Command::Center { input, json } => {
            let loaded = config::load_problem(&input)?;
            let problem = loaded.problem_spec(&input)?;
            let template = primitive_template(&problem, &BTreeSet::new())?;
            let report = CenterReport {
                rank: template.stratum.center.rank(),
                generators: template
                    .stratum
                    .center
                    .generators
                    .iter()
                    .map(|g| psa::polyring::monomial_string(problem.context(), g))
                    .collect(),
            };
            Ok((
                if json {
                    json_line(&report)
                } else {
                    report.to_text()
                },
                0,
            ))
        }
        Command::Strata { input, json } => {
            let loaded = config::load_problem(&input)?;
            let problem = loaded.problem_spec(&input)?;
            let strata = enumerate_strata(&problem)?;
            let reports: Vec<StratumReport> = strata
                .iter()
                .map(|s| stratum_report(&problem, &s.vanishing))
                .collect::<Result<_, _>>()?;
            Ok((
                if json {
                    json_line(&reports)
                } else {
                    strata_to_text(&reports)
                },
                0,
            ))
        }
        Command::Primitive {
            input,
            stratum,
            alpha,
            json,
        } => {
            let loaded = config::load_problem(&input)?;
            let problem = loaded.problem_spec(&input)?;
            let x = parse_stratum(&stratum, &loaded)?;
            let template = primitive_template(&problem, &x)?;
            let instantiated = match alpha {
                None => None,
                Some(text) => {
                    let alphas = config::parse_rational_list(&text).map_err(InputError)?;
                    Some(template.instantiate(&alphas)?.canonical_string())
                }
            };
            let report = PrimitiveReport {
                x: template.stratum.vanishing_names(problem.context()),
                parameters: template.parameters.clone(),
                template: template.display_string(),
                instantiated,
            };
            Ok((
                if json {
                    json_line(&report)
                } else {
                    report.to_text()
                },
                0,
            ))
        }
        Command::Pcore { input, point, json } => {
            let loaded = config::load_problem(&input)?;
            let problem = loaded.problem_spec(&input)?;
            let coords = config::parse_rational_list(&point).map_err(InputError)?;
            let p = RationalPoint::new(coords);
            let ideal = pcore_point(&problem, &p)?;
            let ctx = problem.context();
            let x: Vec<String> = p
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, c)| num_traits::Zero::is_zero(*c))
                .map(|(i, _)| ctx.name(i).to_string())
                .collect();
            let report = PcoreReport {
                point: p.coords().iter().map(|c| c.to_string()).collect(),
                x,
                ideal: ideal.canonical_string(),
            };
            Ok((
                if json {
                    json_line(&report)
                } else {
                    report.to_text()
                },
                0,
            ))
        }
        Command::VerifyIdeal { input, ideal, json } => {
            let loaded = config::load_problem(&input)?;
            let problem = loaded.problem_spec(&input)?;
            let catalog = config::load_ideals(&ideal, &loaded.ctx)?;
            let entries = psa::strata::verify_catalog(&problem, &catalog)?;
            let report = VerifyReport::from_entries(&entries);
            let code = u8::from(report.has_failures());
            Ok((
                if json {
                    json_line(&report)
                } else {
                    report.to_text()
                },
                code,
            ))
        }
        Command::CoreTest {
            input,
            ideal,
            element,
            depth,
            json,
        } => {
            let loaded = config::load_problem(&input)?;
            let derivs = loaded.derivation_set(&input)?;
            let ideals = config::load_ideals(&ideal, &loaded.ctx)?;
            if ideals.len() != 1 {
                return Err(InputError(format!(
                    "{}: core-test needs exactly one ideal, found {}",
                    ideal.display(),
                    ideals.len()
                )));
            }
            let f =
                parse(&element, &loaded.ctx).map_err(|e| InputError(format!("--element: {e}")))?;
            let verdict = delta_core_test(&derivs, &ideals[0], &f, depth)?;
            let report =
                CoreTestReport::new(f.to_string(), ideals[0].canonical_string(), depth, &verdict);
            Ok((
                if json {
                    json_line(&report)
                } else {
                    report.to_text()
                },
                0,
            ))
        }
        Command::Poset {
            input,
            catalog,
            dot,
            json,
        } => {
            let loaded = config::load_problem(&input)?;
            let ideals = config::load_ideals(&catalog, &loaded.ctx)?;
            let graph = poset_of_catalog(&ideals)?;
            if let Some(path) = &dot {
                write_file(path, &graph.to_dot())?;
            }
            let report = PosetReport::from_graph(&graph);
            Ok((
                if json {
                    json_line(&report)
                } else {
                    report.to_text()
                },
                0,
            ))
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), InputError> {
    std::fs::write(path, contents)
        .map_err(|e| InputError(format!("{}: cannot write file: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((output, code)) => {
            print!("{output}");
            ExitCode::from(code)
        }
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
