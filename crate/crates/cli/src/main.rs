//! `infoclust` command-line front end.
//!
//! Exit codes: 0 ok, 1 usage, 2 model invalid, 3 precondition failed,
//! 4 duality counter-example found.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use infoclust::featsel::FeatureProblem;
use infoclust::scalar::parse_scalar;
use infoclust::{with_source, Error, GroundSet, ModelDocument, Scalar, SetFunction, SourceModel, Subset};

use render::Report;

#[derive(Parser)]
#[command(name = "infoclust", version, about = "Info-clustering and feature selection over exact discrete sources")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Args)]
struct Common {
    /// Model document (JSON).
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Print exact values as decimals.
    #[arg(long)]
    decimal: bool,
}

#[derive(Args)]
struct Plot {
    /// Emit the value function as TSV rows `gamma<TAB>value<TAB>label`.
    #[arg(long)]
    plot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model document and list violations.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Joint entropy of a set of variables.
    Entropy {
        #[command(flatten)]
        common: Common,
        /// Comma-separated variable names.
        #[arg(long)]
        set: String,
    },
    /// Multivariate mutual information of a set of variables.
    Mmi {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
    },
    /// Clusters at a threshold.
    Clusters {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// Extended clusters at a threshold.
    ExtendedClusters {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// Principal sequence of partitions.
    Psp {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        plot: Plot,
    },
    /// Optimal feature sets for a penalty or a size.
    FeatureSelect {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "size", required_unless_present = "size")]
        gamma: Option<String>,
        #[arg(long)]
        size: Option<usize>,
    },
    /// Principal partition of the feature-selection relaxation.
    Pp {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        plot: Plot,
    },
    /// Check the feature-selection / clustering correspondence.
    Duality {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "sweep", required_unless_present = "sweep")]
        gamma: Option<String>,
        #[arg(long)]
        sweep: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Model(Error),
    Precondition(Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Model(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Model(Error::InvalidModel(v)) => {
                write!(f, "invalid model:")?;
                v.iter().try_for_each(|x| write!(f, "\n  {x}"))
            }
            CliError::Model(e) => write!(f, "invalid model: {e}"),
            CliError::Precondition(e) => write!(f, "precondition failed: {e}"),
        }
    }
}

/// Errors raised while computing on a loaded model.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownVariable(_) | Error::EmptySet | Error::BadRational(_) | Error::BadSize { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Precondition(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn load(common: &Common) -> CliResult<(SourceModel, Option<String>)> {
    let doc = ModelDocument::load(&common.model).map_err(CliError::Model)?;
    let model = doc.build().map_err(CliError::Model)?;
    Ok((model, doc.dependent().map(str::to_string)))
}

fn parse_set(ground: &GroundSet, ids: &str) -> CliResult<Subset> {
    let names: Vec<&str> = ids.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err(CliError::Usage("--set needs at least one variable".into()));
    }
    ground.subset(names).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_gamma<V: Scalar>(text: &str) -> CliResult<V> {
    parse_scalar(text).map_err(|e| CliError::Usage(format!("bad --gamma: {e}")))
}

fn lift(model: &SourceModel, dependent: Option<String>) -> CliResult<SourceModel> {
    let dep = dependent.ok_or_else(|| {
        CliError::Precondition(Error::PreconditionViolated("the model document names no \"dependent\" variable".into()))
    })?;
    model.lift(&dep).map_err(CliError::Precondition)
}

fn run(cli: Cli) -> CliResult<(Report, u8)> {
    match cli.command {
        Command::Validate { common } => {
            let doc = ModelDocument::load(&common.model).map_err(CliError::Model)?;
            let violations = infoclust::sources::validate(&doc);
            let errors = violations.iter().any(|v| v.severity == infoclust::Severity::Error);
            Ok((render::violations(&violations), if errors { 2 } else { 0 }))
        }
        Command::Entropy { common, set } => {
            let (model, _) = load(&common)?;
            let b = parse_set(model.ground(), &set)?;
            with_source!(&model, h => Ok((render::value("entropy", &h.eval(b), &common), 0)))
        }
        Command::Mmi { common, set } => {
            let (model, _) = load(&common)?;
            let b = parse_set(model.ground(), &set)?;
            with_source!(&model, h => Ok((render::value("mmi", &infoclust::mmi(h, b)?, &common), 0)))
        }
        Command::Clusters { common, gamma } => {
            let (model, _) = load(&common)?;
            with_source!(&model, h => {
                let c = infoclust::clusters(h, &parse_gamma(&gamma)?)?;
                Ok((render::clusters(model.ground(), &c, &common), 0))
            })
        }
        Command::ExtendedClusters { common, gamma } => {
            let (model, _) = load(&common)?;
            with_source!(&model, h => {
                let c = infoclust::extended_clusters(h, &parse_gamma(&gamma)?)?;
                Ok((render::clusters(model.ground(), &c, &common), 0))
            })
        }
        Command::Psp { common, plot } => {
            let (model, _) = load(&common)?;
            with_source!(&model, h => {
                let r = infoclust::psp(h)?;
                Ok((render::psp(model.ground(), &r, &common, plot.plot), 0))
            })
        }
        Command::FeatureSelect { common, gamma, size } => {
            let (model, dep) = load(&common)?;
            let lifted = lift(&model, dep)?;
            with_source!(&lifted, h => {
                let problem = FeatureProblem::new(h)?;
                let report = match (gamma, size) {
                    (Some(g), None) => render::relax(lifted.ground(), &infoclust::relax_optimize(&problem, &parse_gamma(&g)?)?, &common),
                    (None, Some(k)) => render::sized(lifted.ground(), &infoclust::size_constrained(&problem, k)?, &common),
                    _ => return Err(CliError::Usage("give exactly one of --gamma or --size".into())),
                };
                Ok((report, 0))
            })
        }
        Command::Pp { common, plot } => {
            let (model, dep) = load(&common)?;
            let lifted = lift(&model, dep)?;
            with_source!(&lifted, h => {
                let problem = FeatureProblem::new(h)?;
                Ok((render::pp(lifted.ground(), &infoclust::pp(&problem)?, &common, plot.plot), 0))
            })
        }
        Command::Duality { common, gamma, sweep } => {
            let (model, dep) = load(&common)?;
            let lifted = lift(&model, dep)?;
            with_source!(&lifted, h => {
                let problem = FeatureProblem::new(h)?;
                let reports = match (gamma, sweep) {
                    (Some(g), false) => vec![infoclust::verify_duality(&problem, &parse_gamma(&g)?)?],
                    (None, true) => infoclust::sweep_duality(&problem)?,
                    _ => return Err(CliError::Usage("give exactly one of --gamma or --sweep".into())),
                };
                let code = if reports.iter().all(|r| r.passed) { 0 } else { 4 };
                Ok((render::duality(lifted.ground(), &reports, &common), code))
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok((report, code)) => {
            print!("{report}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
