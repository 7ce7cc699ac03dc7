use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use serde_json::json;

use chromres::adversary::{
    global_resilience_oracle_with_limit, local_resilience_oracle, EdgeCertificate,
    DEFAULT_LOCAL_SEARCH_BUDGET,
};
use chromres::analytics::AnalyticProfile;
use chromres::coloring::{
    chromatic_exact_coloring, degeneracy_color, dsatur, strip_color, Coloring, FallbackPolicy,
    ResidualRule, StripKnobs, DEFAULT_EXACT_CHI_LIMIT,
};
use chromres::graph::{generate_gnp, io as gio, EdgeSet, GnpParams, Graph};
use chromres::iset::{enumerate_isets, uniform_family, DEFAULT_ENUMERATION_LIMIT};
use chromres::lab::{density_audit, run_experiment, AuditMode, ExperimentConfig, Strategy};
use chromres::Result;

#[derive(Parser)]
#[command(
    name = "chromres",
    version,
    about = "Chromatic resilience experiments on G(n, p)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw G(n, p) and write it.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Edgelist)]
        format: Format,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the analytic profile as JSON.
    Profile {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        /// Use theta = n^4.
        #[arg(long)]
        n_fourth: bool,
    },
    /// Color a graph (optionally with added edges) and print JSON.
    Color {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value_t = Method::Dsatur)]
        method: Method,
        /// Edge list of added edges (same vertex count).
        #[arg(long)]
        added: Option<PathBuf>,
        /// Edge probability the graph was drawn with; required by `strip`.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[command(flatten)]
        knobs: KnobArgs,
        #[arg(long, default_value_t = DEFAULT_EXACT_CHI_LIMIT)]
        exact_limit: usize,
    },
    /// Enumerate size-k independent sets, optionally capped, as JSON.
    Isets {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        k: usize,
        /// Pair-coverage cap; plain enumeration when absent.
        #[arg(long)]
        cap: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit: usize,
    },
    /// Apply an adversary strategy and print the edge certificate.
    Attack {
        #[command(flatten)]
        input: GraphInput,
        /// `none`, `plant_clique[:t=T]`, `random:m=M` or `bounded_degree:delta=D`.
        #[arg(long)]
        strategy: Strategy,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact resilience oracle for small graphs.
    Resilience {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = OracleMode::Global)]
        mode: OracleMode,
        /// Largest edge budget (global) or degree (local) to try.
        #[arg(long)]
        max: usize,
        #[arg(long, default_value_t = DEFAULT_LOCAL_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Small-subset density audit.
    Audit {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// Sample this many subsets per size instead of checking all.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Run a sweep from a key=value config file.
    Experiment {
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GraphInput {
    /// Graph file, `-` for stdin.
    #[arg(long)]
    graph: PathBuf,
    /// Input format; guessed from the extension (`.col`, `.dimacs`) when absent.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct KnobArgs {
    #[arg(long, value_enum, default_value_t = Rule::Global)]
    rule: Rule,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    enumeration_limit: usize,
    #[arg(long)]
    working_size: Option<usize>,
    /// Fail instead of falling back to greedy sets on enumeration overflow.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Dimacs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Dsatur,
    Degeneracy,
    Exact,
    Strip,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Global,
    Local,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMode {
    Global,
    Local,
}

fn read_text(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)?;
    } else {
        BufReader::new(File::open(path)?).read_to_string(&mut text)?;
    }
    Ok(text)
}

fn load_graph(input: &GraphInput) -> Result<Graph> {
    let text = read_text(&input.graph)?;
    let format =
        input
            .format
            .unwrap_or_else(|| match input.graph.extension().and_then(|e| e.to_str()) {
                Some("col" | "dimacs") => Format::Dimacs,
                _ => Format::Edgelist,
            });
    match format {
        Format::Edgelist => gio::parse_edge_list(&text),
        Format::Dimacs => gio::parse_dimacs(&text),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => match io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
            r => r?,
        },
    }
    Ok(())
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"), None)
}

fn coloring_json(c: &Coloring) -> serde_json::Value {
    json!({ "num_colors": c.num_colors, "colors": c.colors })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            n,
            p,
            seed,
            format,
            out,
        } => {
            let params = GnpParams::new(n, p, seed)?;
            for w in params.regime_warnings() {
                warn!("{w}");
            }
            let g = generate_gnp(&params)?;
            info!("generated {} edges", g.edge_count());
            let text = match format {
                Format::Edgelist => gio::to_edge_list(&g),
                Format::Dimacs => gio::to_dimacs(&g),
            };
            emit(&text, out.as_deref())?;
        }
        Command::Profile {
            n,
            p,
            theta,
            n_fourth,
        } => {
            let profile = if n_fourth {
                AnalyticProfile::with_n_fourth(n, p)?
            } else {
                AnalyticProfile::new(n, p, theta)?
            };
            emit(&(profile.to_json()? + "\n"), None)?;
        }
        Command::Color {
            input,
            method,
            added,
            p,
            epsilon,
            theta,
            knobs,
            exact_limit,
        } => {
            let g = load_graph(&input)?;
            let added = match added {
                Some(path) => {
                    EdgeSet::from_pairs(gio::parse_edge_list(&read_text(&path)?)?.edges())?
                }
                None => EdgeSet::new(),
            };
            let union = g.union(&added)?;
            let value = match method {
                Method::Dsatur => coloring_json(&dsatur(&union)),
                Method::Degeneracy => {
                    let (c, d) = degeneracy_color(&union);
                    let mut v = coloring_json(&c);
                    v["degeneracy"] = json!(d);
                    v
                }
                Method::Exact => coloring_json(&chromatic_exact_coloring(&union, exact_limit)?),
                Method::Strip => {
                    let p = p.ok_or_else(|| {
                        chromres::Error::InvalidParameter(
                            "`--p` is required for strip coloring".into(),
                        )
                    })?;
                    let profile = AnalyticProfile::new(g.n(), p, theta)?;
                    let knobs = StripKnobs {
                        rule: match knobs.rule {
                            Rule::Global => ResidualRule::Global,
                            Rule::Local => ResidualRule::Local,
                        },
                        enumeration_limit: knobs.enumeration_limit,
                        working_size: knobs.working_size,
                        fallback: if knobs.strict {
                            FallbackPolicy::Fail
                        } else {
                            FallbackPolicy::Greedy
                        },
                        ..StripKnobs::default()
                    };
                    let (c, trace) = strip_color(&g, &added, epsilon, &profile, &knobs)?;
                    let mut v = coloring_json(&c);
                    v["trace"] = serde_json::to_value(&trace)?;
                    v
                }
            };
            print_json(&value)?;
        }
        Command::Isets {
            input,
            k,
            cap,
            limit,
        } => {
            let g = load_graph(&input)?;
            let family = match cap {
                Some(cap) => uniform_family(&g, k, cap, limit)?,
                None => enumerate_isets(&g, k, limit)?,
            };
            emit(&(family.to_json()? + "\n"), None)?;
        }
        Command::Attack {
            input,
            strategy,
            p,
            seed,
        } => {
            let g = load_graph(&input)?;
            let (edges, params) = strategy.apply(&g, p, seed)?;
            let cert = EdgeCertificate::new(strategy.name(), params, Some(seed), g.n(), &edges);
            print_json(&serde_json::to_value(&cert)?)?;
        }
        Command::Resilience {
            input,
            cap,
            mode,
            max,
            budget,
        } => {
            let g = load_graph(&input)?;
            let witness = match mode {
                OracleMode::Global => {
                    global_resilience_oracle_with_limit(&g, cap, max, DEFAULT_EXACT_CHI_LIMIT)?
                }
                OracleMode::Local => local_resilience_oracle(&g, cap, max, budget)?,
            };
            let value = match witness {
                Some(w) => json!({
                    "value": w.value,
                    "certificate": EdgeCertificate::new("oracle", Default::default(), None, g.n(), &w.edges),
                }),
                None => json!({ "value": null }),
            };
            print_json(&value)?;
        }
        Command::Audit {
            input,
            p,
            epsilon,
            samples,
            seed,
            workers,
        } => {
            let g = load_graph(&input)?;
            let mode = match samples {
                Some(count) => AuditMode::Sampled { count, seed },
                None => AuditMode::Exhaustive,
            };
            let report = density_audit(&g, p, epsilon, mode, workers)?;
            print_json(&serde_json::to_value(&report)?)?;
        }
        Command::Experiment {
            config,
            workers,
            csv,
            json,
        } => {
            let mut cfg = ExperimentConfig::parse(&read_text(&config)?)?;
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if csv.is_some() {
                cfg.csv_out = csv;
            }
            if json.is_some() {
                cfg.json_out = json;
            }
            let table = run_experiment(&cfg)?;
            table.write(cfg.csv_out.as_deref(), cfg.json_out.as_deref())?;
            if cfg.csv_out.is_none() {
                emit(&table.to_csv(true)?, None)?;
            }
            let errors = table.error_count();
            if errors > 0 {
                warn!("{errors} of {} rows failed", table.rows.len());
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
