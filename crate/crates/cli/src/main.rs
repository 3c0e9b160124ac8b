//! Command-line front end for exact differential geometry on finite groups.

mod commands;
mod error;
mod json;
mod spec;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Analyses, CalculusSource, Covariance, GroupSource, NamedConnection, Report, TensorKind};
use error::{usage, CliError, Result};

#[derive(Parser)]
#[command(name = "finitegeo", version, about = "Exact differential calculi, connections and tensors on finite groups")]
struct Cli {
    /// Print the JSON payload instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the DOT digraphs of the command to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    dot: Option<PathBuf>,
    /// Print nothing; the exit code reports the outcome.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Enumerate covariant calculi of a group.
    #[command(subcommand)]
    Calculi(CalculiCmd),
    /// Inspect one calculus.
    #[command(subcommand)]
    Calculus(CalculusCmd),
    /// The braid operator of a bicovariant calculus.
    #[command(subcommand)]
    Braid(BraidCmd),
    /// Linear connections.
    #[command(subcommand)]
    Connection(ConnectionCmd),
    /// Invariant tensor fields.
    #[command(subcommand)]
    Tensors(TensorsCmd),
    /// Metrics and their compatibility with connections.
    #[command(subcommand)]
    Metric(MetricCmd),
    /// Groups acting on finite sets.
    #[command(subcommand)]
    Action(ActionCmd),
}

#[derive(Args, Clone, Default)]
struct GroupArgs {
    /// Group spec: Zn, Sn, An, Dn, Dicn, Q8, products such as Z2xZ3, or @file.json.
    #[arg(long, value_name = "SPEC")]
    group: Option<String>,
    /// Permutation generators in cycle notation, e.g. "(12),(123)".
    #[arg(long, value_name = "PERMS")]
    group_generators: Option<String>,
    /// Number of points the generators act on; defaults to the largest point named.
    #[arg(long)]
    degree: Option<usize>,
}

impl GroupArgs {
    fn source(&self) -> GroupSource {
        GroupSource { spec: self.group.clone(), generators: self.group_generators.clone(), degree: self.degree }
    }
}

#[derive(Args, Clone)]
struct CalculusArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Generating set: all, element names such as a,b,c, or class:(12).
    #[arg(long = "hatg", default_value = "all", value_name = "SPEC")]
    hat: String,
    /// Read the calculus from a JSON document instead.
    #[arg(long, value_name = "FILE")]
    calculus: Option<String>,
}

impl CalculusArgs {
    fn source(&self) -> CalculusSource {
        CalculusSource { group: self.group.source(), hat: self.hat.clone(), file: self.calculus.clone() }
    }
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Order, conjugacy classes, center and multiplication table.
    Info {
        /// Group spec; alternatively use --group or --group-generators.
        spec: Option<String>,
        #[command(flatten)]
        group: GroupArgs,
    },
}

#[derive(Subcommand)]
enum CalculiCmd {
    /// All left-covariant or bicovariant calculi.
    List {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value = "bi")]
        covariance: Covariance,
    },
}

#[derive(Subcommand)]
enum CalculusCmd {
    /// Dimension, covariance and digraph of a calculus.
    Show(CalculusArgs),
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Order of the braid operator.
    Order(CalculusArgs),
    /// Kernels and images of its symmetrizer and antisymmetrizer.
    Decompose(CalculusArgs),
}

#[derive(Subcommand)]
enum ConnectionCmd {
    /// Left- or bi-invariant connections as an affine family.
    Solve {
        #[command(flatten)]
        calc: CalculusArgs,
        #[arg(long)]
        bi_invariant: bool,
        #[arg(long)]
        torsion_free: bool,
        /// Also emit the member at these comma separated parameter values.
        #[arg(long, value_name = "VALUES", allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Emit a named connection as a JSON document.
    Named {
        #[command(flatten)]
        calc: CalculusArgs,
        #[arg(long, value_enum)]
        name: NamedConnection,
        /// Coefficients of the sigma family, one per power of the braid operator.
        #[arg(long, value_name = "VALUES", allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// Read a connection document and print it in normal form.
    Show { file: String },
    /// Torsion, curvature and extensibility of a connection document.
    Analyze {
        file: String,
        #[arg(long)]
        torsion: bool,
        #[arg(long)]
        curvature: bool,
        #[arg(long)]
        extensible: bool,
    },
}

#[derive(Subcommand)]
enum TensorsCmd {
    /// Constant rank 2 tensors of a symmetry kind, or bi-invariant ones.
    Invariant {
        #[command(flatten)]
        calc: CalculusArgs,
        #[arg(long, value_enum)]
        kind: TensorKind,
        /// Show the coefficient matrix in free parameters.
        #[arg(long)]
        pattern: bool,
        /// Row and column order for the pattern, as element names.
        #[arg(long, value_name = "NAMES")]
        order: Option<String>,
    },
}

#[derive(Subcommand)]
enum MetricCmd {
    /// Compatibility and symmetry of a metric with respect to a connection.
    Check {
        #[arg(long, value_name = "FILE")]
        metric: String,
        #[arg(long, value_name = "FILE")]
        connection: String,
    },
}

#[derive(Subcommand)]
enum ActionCmd {
    /// Orbits of the diagonal action on pairs of distinct points.
    Orbits {
        /// Number of points.
        #[arg(long)]
        set: Option<usize>,
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Covariant calculi on the point set.
    Calculi {
        #[arg(long)]
        set: Option<usize>,
        #[command(flatten)]
        group: GroupArgs,
        /// Only the single-orbit calculi.
        #[arg(long)]
        irreducible: bool,
    },
}

fn dispatch(command: &Command) -> Result<Report> {
    match command {
        Command::Group(GroupCmd::Info { spec, group }) => {
            let mut src = group.source();
            if let Some(s) = spec {
                if src.spec.is_some() {
                    return Err(usage("give the group once, positionally or with --group"));
                }
                src.spec = Some(s.clone());
            }
            commands::group_info(&src)
        }
        Command::Calculi(CalculiCmd::List { group, covariance }) => {
            commands::calculi_list(&group.source(), *covariance)
        }
        Command::Calculus(CalculusCmd::Show(calc)) => commands::calculus_show(&calc.source()),
        Command::Braid(BraidCmd::Order(calc)) => commands::braid_order(&calc.source()),
        Command::Braid(BraidCmd::Decompose(calc)) => commands::braid_decompose(&calc.source()),
        Command::Connection(ConnectionCmd::Solve { calc, bi_invariant, torsion_free, at }) => {
            commands::connection_solve(&calc.source(), *bi_invariant, *torsion_free, at.as_deref())
        }
        Command::Connection(ConnectionCmd::Named { calc, name, lambda }) => {
            commands::connection_named(&calc.source(), *name, lambda.as_deref())
        }
        Command::Connection(ConnectionCmd::Show { file }) => commands::connection_show(file),
        Command::Connection(ConnectionCmd::Analyze { file, torsion, curvature, extensible }) => {
            commands::connection_analyze(
                file,
                Analyses { torsion: *torsion, curvature: *curvature, extensible: *extensible },
            )
        }
        Command::Tensors(TensorsCmd::Invariant { calc, kind, pattern, order }) => {
            commands::tensors_invariant(&calc.source(), *kind, *pattern, order.as_deref())
        }
        Command::Metric(MetricCmd::Check { metric, connection }) => commands::metric_check(metric, connection),
        Command::Action(ActionCmd::Orbits { set, group }) => commands::action_orbits(&group.source(), *set),
        Command::Action(ActionCmd::Calculi { set, group, irreducible }) => {
            commands::action_calculi(&group.source(), *set, *irreducible)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let report = dispatch(&cli.command)?;
    if let Some(path) = &cli.dot {
        let dot = report.dot.as_ref().ok_or_else(|| usage("this command has no DOT output"))?;
        std::fs::write(path, dot).map_err(|source| CliError::Write { path: path.clone(), source })?;
    }
    if cli.quiet {
        return Ok(());
    }
    let out = if cli.json {
        serde_json::to_string_pretty(&report.payload).expect("serializable") + "\n"
    } else {
        report.text
    };
    match std::io::stdout().lock().write_all(out.as_bytes()) {
        // a closed pipe (e.g. `| head`) is not a failure of the command
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(CliError::Write { path: PathBuf::from("<stdout>"), source: e })
        }
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
