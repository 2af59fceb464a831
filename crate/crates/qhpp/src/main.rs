use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use qhpp::campaign::overall;
use qhpp::{campaigns, coverage, emit, run_all, run_campaign, Error, Format, Params};
use qhpp_core::curve::{infer_from_curve, CurveHypothesis, InferenceOptions, KnownKSquared};
use qhpp_core::graph::{cascade_search, classify_state, Location, MarkedResolution};
use qhpp_core::surface::{bmy_bound, bmy_gate, invariants};
use qhpp_core::Basket;

/// Exact verification campaigns for rational homology projective planes
/// with quotient singularities.
#[derive(Parser)]
#[command(name = "qhpp", version, allow_external_subcommands = true)]
#[command(after_help = "Any other subcommand is a campaign id:\n  \
    qhpp <campaign-id> [--bound N] [--format jsonl|csv|table] [--params k=v,...] [--timing]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print L, K^2, e_orb, 3 e_orb and the BMY verdict of a basket.
    Invariants { basket: String },
    /// Apply the two curve equations to a curve meeting a basket's chains.
    Infer {
        basket: String,
        /// e.g. "E(-1): D1[1]*1, D1[4]*1"
        curve: String,
        /// Treat K^2 of the basket as known.
        #[arg(long)]
        known_k2: bool,
    },
    /// Map each module operation to the campaigns that exercise it.
    Coverage,
    /// List campaign ids with their statements and bounds.
    List,
    /// Run the default suite.
    All {
        #[arg(long, default_value = "table")]
        format: Format,
        #[arg(long)]
        timing: bool,
    },
    /// Operate on a marked resolution graph read from a file.
    Graph {
        #[command(subcommand)]
        op: GraphOp,
    },
    #[command(external_subcommand)]
    Campaign(Vec<String>),
}

#[derive(Subcommand)]
enum GraphOp {
    /// Check the configuration: chains, SNC and the four-point limit.
    Check { file: PathBuf },
    /// Classify the contracted surface.
    Classify { file: PathBuf },
    /// Search for a contraction sequence ending in a log del Pezzo state.
    Cascade {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Contract a (-1)-curve and print the new graph.
    Contract { file: PathBuf, label: String },
    /// Blow up a general point of one curve, or the intersection point of two.
    BlowUp {
        file: PathBuf,
        /// One label for a general point, two comma-separated labels for a node.
        at: String,
        /// Label of the new exceptional curve.
        #[arg(long)]
        label: Option<String>,
    },
}

#[derive(Parser)]
#[command(name = "qhpp <campaign-id>", no_binary_name = true)]
struct CampaignArgs {
    id: String,
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long, default_value = "table")]
    format: Format,
    /// Comma-separated k=v pairs.
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::UnknownCampaign(_) | Error::Usage(_)) {
                eprintln!("\n{}", Cli::command().render_help());
            }
            ExitCode::from(2)
        }
    }
}

fn read_graph(file: &PathBuf) -> Result<MarkedResolution, Error> {
    let text = std::fs::read_to_string(file)
        .map_err(|source| Error::Io { path: file.display().to_string(), source })?;
    Ok(text.parse()?)
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Invariants { basket } => {
            let b: Basket = basket.parse()?;
            let inv = invariants(&b);
            println!("basket  {b}");
            println!("L       {}", b.total_length());
            println!("K2      {}", inv.k_squared);
            println!("e_orb   {}", inv.e_orb);
            println!("3e_orb  {}", bmy_bound(&b));
            println!("bmy     {}", bmy_gate(&b));
            Ok(0)
        }
        Command::Infer { basket, curve, known_k2 } => {
            let b: Basket = basket.parse()?;
            let c: CurveHypothesis = curve.parse()?;
            let options = InferenceOptions {
                k_squared: if known_k2 { KnownKSquared::Value(invariants(&b).k_squared) } else { KnownKSquared::Unknown },
                bmy_bound: Some(bmy_bound(&b)),
            };
            let res = infer_from_curve(&c, &b.chains(), &options)?;
            let [alpha, beta, m, k2] = res.fields();
            println!("curve   {c}");
            println!("mK2     {alpha}");
            println!("m2K2    {beta}");
            println!("m       {m}");
            println!("K2      {k2}");
            println!("class   {}", res.classification);
            if res.infeasible_for_log_general_type {
                println!("infeasible for log general type");
            }
            Ok(0)
        }
        Command::Coverage => {
            print!("{}", coverage::render());
            let (unreached, unknown) = coverage::gaps();
            Ok(u8::from(!unreached.is_empty() || !unknown.is_empty()))
        }
        Command::List => {
            for c in campaigns() {
                let bound = c.bound.map_or(String::new(), |b| format!("  [--bound {}, default {}]", b.meaning, b.default));
                println!("{:<24}{}{bound}", c.id, c.statement());
                for p in c.params {
                    println!("{:<24}  --params {}=N  {} (default {})", "", p.key, p.meaning, p.default);
                }
            }
            Ok(0)
        }
        Command::All { format, timing } => {
            let reports = run_all(timing);
            for r in &reports {
                print!("{}", emit(r, format));
            }
            Ok(overall(&reports).exit_code() as u8)
        }
        Command::Graph { op } => graph(op),
        Command::Campaign(args) => {
            let args = CampaignArgs::try_parse_from(&args).map_err(|e| Error::Usage(e.to_string()))?;
            let pairs = match &args.params {
                Some(text) => Params::parse_pairs(text)?,
                None => Vec::new(),
            };
            let report = run_campaign(&args.id, args.bound, &pairs, args.timing)?;
            print!("{}", emit(&report, args.format));
            for line in report.failure_lines() {
                eprintln!("{line}");
            }
            Ok(report.status.exit_code() as u8)
        }
    }
}

fn graph(op: GraphOp) -> Result<u8, Error> {
    match op {
        GraphOp::Check { file } => {
            let g = read_graph(&file)?;
            let v = g.qhpp_check();
            println!("chains  {}", v.chain_count());
            println!("picard  {}", g.picard_rank());
            for x in &v.violations {
                println!("violation  {x}");
            }
            println!("{}", if v.is_valid() { "valid" } else { "invalid" });
            Ok(u8::from(!v.is_valid()))
        }
        GraphOp::Classify { file } => {
            println!("{}", classify_state(&read_graph(&file)?));
            Ok(0)
        }
        GraphOp::Cascade { file, depth } => {
            let g = read_graph(&file)?;
            match cascade_search(&g, depth)? {
                Some(path) => {
                    println!("initial   {}", path.initial_class);
                    for s in &path.steps {
                        println!("contract  {}  picard {}  {}", s.contracted, s.picard_rank, s.class);
                    }
                    println!("terminal  {}", path.terminal_class);
                    print!("{}", path.terminal_state);
                    Ok(0)
                }
                None => {
                    println!("no admissible contraction sequence within depth {depth}");
                    Ok(1)
                }
            }
        }
        GraphOp::Contract { file, label } => {
            print!("{}", read_graph(&file)?.contract(&label)?);
            Ok(0)
        }
        GraphOp::BlowUp { file, at, label } => {
            let g = read_graph(&file)?;
            let labels: Vec<&str> = at.split(',').map(str::trim).collect();
            let location = if labels.len() == 1 { Location::free(labels[0]) } else { Location::point(&labels) };
            let out = match label {
                Some(l) => g.blow_up_labelled(&location, &l)?,
                None => g.blow_up(&location)?.0,
            };
            print!("{out}");
            Ok(0)
        }
    }
}
