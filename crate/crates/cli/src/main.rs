mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "vecflow", version, about = "Vector flows and cycle double covers")]
struct Cli {
    /// Tolerance for floating-point residuals and set membership.
    #[arg(long, global = true, env = "VECFLOW_TOL", default_value_t = vecflow::flows::DEFAULT_TOL)]
    tol: f64,

    /// Print JSON on a single line.
    #[arg(long, global = true)]
    compact: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bridges, bipartiteness, cubicity and degree profile.
    Analyze { graph: PathBuf },
    /// Cycle double cover search.
    #[command(subcommand)]
    Cdc(CdcCmd),
    /// Flow checks.
    #[command(subcommand)]
    Flow(FlowCmd),
    /// Translate between covers and flows, and between value sets.
    #[command(subcommand)]
    Convert(ConvertCmd),
    /// Build vector flows from covers, or the Petersen unit flow.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// The graph on H_d and the crown graph.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Numerical flow-number estimates.
    #[command(subcommand)]
    Phi(PhiCmd),
    /// Cross-check equivalent characterizations.
    #[command(subcommand)]
    Audit(AuditCmd),
    /// Run a per-graph command over a directory or a graph6 file; one JSON line per graph.
    Batch {
        /// Directory of graph files, or a file with one graph6 string per line.
        source: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[command(subcommand)]
        command: BatchCmd,
    },
}

#[derive(Subcommand, Debug)]
enum CdcCmd {
    /// Search for a (oriented) k-cycle double cover.
    Find {
        graph: PathBuf,
        #[command(flatten)]
        args: CdcFindArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CdcFindArgs {
    /// Number of members.
    #[arg(short, long)]
    pub k: usize,
    /// Require each member to carry an orientation, every edge traversed once each way.
    #[arg(long)]
    pub oriented: bool,
    /// Search node limit; exceeding it gives verdict `unknown`.
    #[arg(long, default_value_t = vecflow::search::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Subcommand, Debug)]
enum FlowCmd {
    /// Check conservation, nowhere-zero and optional set membership.
    Verify {
        graph: PathBuf,
        flow: PathBuf,
        #[arg(long, value_enum)]
        set: Option<ValueSet>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueSet {
    Hd,
    Td,
    Sigma,
    Unit,
}

#[derive(Subcommand, Debug)]
enum ConvertCmd {
    /// Oriented cover to its H_k flow.
    CdcToFlow { graph: PathBuf, cover: PathBuf },
    /// H_d flow to an oriented cover.
    FlowToCdc { graph: PathBuf, flow: PathBuf },
    /// Cover to a T_k flow.
    CdcToTd { graph: PathBuf, cover: PathBuf },
    /// T_d flow to a cover.
    TdToCdc { graph: PathBuf, flow: PathBuf },
    /// Zero-sum, squared-norm-2 flow to a unit flow one dimension lower.
    SigmaToSphere { graph: PathBuf, flow: PathBuf },
    /// Inverse of sigma-to-sphere.
    SphereToSigma { graph: PathBuf, flow: PathBuf },
}

#[derive(Subcommand, Debug)]
enum ConstructCmd {
    /// Flow in dimension k-1 from an unoriented k-cover.
    CoverFlow {
        graph: PathBuf,
        #[command(flatten)]
        cover: CoverSource,
    },
    /// Flow in dimension k-2 from an oriented k-cover (k >= 4).
    OrientedCoverFlow {
        graph: PathBuf,
        #[command(flatten)]
        cover: CoverSource,
    },
    /// Symmetric unit-vector flow in R^3 on the Petersen graph.
    PetersenS2 {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CoverSource {
    /// Cover JSON file.
    #[arg(long, conflicts_with = "k", required_unless_present = "k")]
    pub cdc: Option<PathBuf>,
    /// Search for a cover with this many members instead.
    #[arg(short, long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = vecflow::search::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Subcommand, Debug)]
enum PolytopeCmd {
    /// Graph on H_d joining points whose difference is in H_d.
    Gd {
        #[arg(short)]
        d: usize,
    },
    /// K_{d,d} minus a perfect matching.
    Crown {
        #[arg(short)]
        d: usize,
    },
    /// Check that e_i - e_j maps the line graph of the crown graph onto G_d.
    CheckIso {
        #[arg(short)]
        d: usize,
    },
}

#[derive(Subcommand, Debug)]
enum PhiCmd {
    /// Upper bound on the d-dimensional flow number with a verified witness.
    Estimate {
        graph: PathBuf,
        #[command(flatten)]
        args: PhiArgs,
        /// Flow JSON used as an extra starting point (repeatable).
        #[arg(long)]
        warm_start: Vec<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct PhiArgs {
    /// Dimension of the flow values.
    #[arg(short)]
    pub d: usize,
    /// Random starting points.
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Descent iterations per start.
    #[arg(long, default_value_t = 500)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip seeding from the smallest integer k-flow.
    #[arg(long)]
    pub no_integer_start: bool,
}

#[derive(Subcommand, Debug)]
enum AuditCmd {
    /// Integer 3-flow, R_3-, H_3-flow and oriented 3-cover agree.
    ThreeFlow {
        graph: PathBuf,
        #[command(flatten)]
        args: AuditArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct AuditArgs {
    #[arg(long, default_value_t = vecflow::search::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Subcommand, Debug, Clone)]
pub enum BatchCmd {
    /// Same as `analyze`.
    Analyze,
    /// Same as `cdc`.
    #[command(subcommand)]
    Cdc(BatchCdc),
    /// Same as `audit`.
    #[command(subcommand)]
    Audit(BatchAudit),
    /// Same as `phi`.
    #[command(subcommand)]
    Phi(BatchPhi),
}

#[derive(Subcommand, Debug, Clone)]
pub enum BatchCdc {
    Find(CdcFindArgs),
}

#[derive(Subcommand, Debug, Clone)]
pub enum BatchAudit {
    ThreeFlow(AuditArgs),
}

#[derive(Subcommand, Debug, Clone)]
pub enum BatchPhi {
    Estimate(PhiArgs),
}

fn print(v: &Value, compact: bool) {
    let s = if compact {
        serde_json::to_string(v)
    } else {
        serde_json::to_string_pretty(v)
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{}", s.expect("JSON values serialize"));
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol >= 0.0) {
        anyhow::bail!("tolerance must be a non-negative number");
    }
    use commands::*;
    Ok(match cli.command {
        Command::Analyze { graph } => analyze(&input::read_graph(&graph)?),
        Command::Cdc(CdcCmd::Find { graph, args }) => cdc_find(&input::read_graph(&graph)?, &args)?,
        Command::Flow(FlowCmd::Verify { graph, flow, set }) => {
            let g = input::read_graph(&graph)?;
            let f = input::read_flow(&flow, &g)?;
            flow_verify(&g, &f, set, tol)?
        }
        Command::Convert(c) => match c {
            ConvertCmd::CdcToFlow { graph, cover } => {
                let g = input::read_graph(&graph)?;
                convert_cdc_to_flow(&g, &input::read_cover(&cover)?)?
            }
            ConvertCmd::FlowToCdc { graph, flow } => {
                let g = input::read_graph(&graph)?;
                convert_flow_to_cdc(&g, &input::read_flow(&flow, &g)?)?
            }
            ConvertCmd::CdcToTd { graph, cover } => {
                let g = input::read_graph(&graph)?;
                convert_cdc_to_td(&g, &input::read_cover(&cover)?)?
            }
            ConvertCmd::TdToCdc { graph, flow } => {
                let g = input::read_graph(&graph)?;
                convert_td_to_cdc(&g, &input::read_flow(&flow, &g)?)?
            }
            ConvertCmd::SigmaToSphere { graph, flow } => {
                let g = input::read_graph(&graph)?;
                convert_sigma(&g, &input::read_flow(&flow, &g)?, tol, true)?
            }
            ConvertCmd::SphereToSigma { graph, flow } => {
                let g = input::read_graph(&graph)?;
                convert_sigma(&g, &input::read_flow(&flow, &g)?, tol, false)?
            }
        },
        Command::Construct(c) => match c {
            ConstructCmd::CoverFlow { graph, cover } => construct(&input::read_graph(&graph)?, &cover, false, tol)?,
            ConstructCmd::OrientedCoverFlow { graph, cover } => construct(&input::read_graph(&graph)?, &cover, true, tol)?,
            ConstructCmd::PetersenS2 { seed } => petersen(tol, seed)?,
        },
        Command::Polytope(p) => match p {
            PolytopeCmd::Gd { d } => polytope_gd(d)?,
            PolytopeCmd::Crown { d } => polytope_crown(d)?,
            PolytopeCmd::CheckIso { d } => polytope_iso(d)?,
        },
        Command::Phi(PhiCmd::Estimate { graph, args, warm_start }) => {
            let g = input::read_graph(&graph)?;
            let warm = warm_start
                .iter()
                .map(|p| input::read_flow(p, &g))
                .collect::<anyhow::Result<Vec<_>>>()?;
            phi_estimate(&g, &args, warm, tol)?
        }
        Command::Audit(AuditCmd::ThreeFlow { graph, args }) => audit(&input::read_graph(&graph)?, &args)?,
        Command::Batch {
            source,
            threads,
            command,
        } => {
            let graphs = input::read_batch(&source)?;
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
            let lines = pool.install(|| batch(&graphs, &command, tol));
            for line in &lines {
                print(line, true);
            }
            return Ok(Outcome::printed(0));
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let compact = cli.compact;
    match run(cli) {
        Ok(out) => {
            if let Some(v) = &out.json {
                print(v, compact);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::error_code(&e))
        }
    }
}
