//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when an input or result fails validation, 2
//! when a size or search budget is exceeded.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::complex::{honeycomb, Budget, Complex, ComplexError};
use crate::exact::{exact_tww, ExactConfig, ExactError};
use crate::grid::{contract_embedded, contract_grid, contract_red_grid_subtrigraph, grid_coordinates, grid_graph, GridError, GridSpec};
use crate::io::{read_json, to_dot, to_json, write_json, write_text, IoError, RunManifest};
use crate::lowerbound::{random_regular_graph, thickening_triangulation, verify_claim_dual, LowerBoundError, RegularGraphSpec};
use crate::pipeline::{full_pipeline, PartOrder, PipelineConfig, PipelineError};
use crate::trigraph::{apply_sequence, ContractionSequence, Trigraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "twwtop", version, about = "Twin-width of dual graphs of triangulations")]
pub struct Cli {
    /// Where to write the run manifest (default: next to the primary output,
    /// or standard error when there is none).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the cubical honeycomb on [1, N]^D.
    BuildHoneycomb {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply barycentric subdivision K times.
    Subdivide {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        iterations: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dual graph of the K-skeleton.
    Dual {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        skeleton: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build and contract the dual graph of the subdivided honeycomb.
    Pipeline {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        emit_sequence: Option<PathBuf>,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        /// Order of part contraction in the first epoch.
        #[arg(long, value_enum, default_value = "color-ascending")]
        order: OrderArg,
        /// Exit with 1 when a part-size or incidence estimate fails.
        #[arg(long)]
        strict_claims: bool,
    },
    /// Contract a grid by folding.
    ContractGrid {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        diagonals: bool,
        #[arg(long)]
        red: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact twin-width of a small trigraph.
    Exact {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        upper: Option<usize>,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_secs: Option<u64>,
        #[arg(long)]
        max_vertices: Option<usize>,
        /// Write the result here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Thicken a random regular graph and check its dual graph.
    Lowerbound {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replay a contraction sequence and report its width.
    VerifySequence {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        sequence: PathBuf,
    },
    /// Convert a trigraph to DOT.
    ExportDot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum OrderArg {
    ColorAscending,
    ColorDescending,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        let code = if matches!(e, ComplexError::Size { .. }) {
            EXIT_BUDGET
        } else {
            EXIT_INVALID
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        let code = if matches!(e, GridError::Size(_)) {
            EXIT_BUDGET
        } else {
            EXIT_INVALID
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Complex(c) => c.into(),
            PipelineError::Grid(g) => g.into(),
            other => CliError::invalid(other.to_string()),
        }
    }
}

impl From<LowerBoundError> for CliError {
    fn from(e: LowerBoundError) -> Self {
        match e {
            LowerBoundError::Complex(c) => c.into(),
            other => CliError::invalid(other.to_string()),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let started = Instant::now();
    let mut manifest = RunManifest::new(command_name(&cli.command));
    let outcome = dispatch(&cli.command, &mut manifest);
    manifest.wall_time_secs = started.elapsed().as_secs_f64();
    let code = match &outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    manifest.exit_code = code;
    let target = cli
        .manifest
        .clone()
        .or_else(|| manifest.output_paths.first().map(|p| PathBuf::from(format!("{p}.manifest.json"))));
    match target {
        Some(path) => {
            if let Err(e) = write_json(&path, &manifest) {
                eprintln!("error: could not write manifest: {e}");
            }
        }
        None => eprint!("{}", to_json(&manifest)),
    }
    code
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::BuildHoneycomb { .. } => "build-honeycomb",
        Command::Subdivide { .. } => "subdivide",
        Command::Dual { .. } => "dual",
        Command::Pipeline { .. } => "pipeline",
        Command::ContractGrid { .. } => "contract-grid",
        Command::Exact { .. } => "exact",
        Command::Lowerbound { .. } => "lowerbound",
        Command::VerifySequence { .. } => "verify-sequence",
        Command::ExportDot { .. } => "export-dot",
    }
}

fn emit<T: Serialize>(path: &Path, value: &T, m: &mut RunManifest) -> Result<(), CliError> {
    write_json(path, value)?;
    m.output(path);
    Ok(())
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn dispatch(command: &Command, m: &mut RunManifest) -> Result<(), CliError> {
    let budget = Budget::from_env();
    m.param("cell_budget", budget.max_cells);
    match command {
        Command::BuildHoneycomb { dim, size, out } => {
            m.param("dim", dim);
            m.param("size", size);
            let x = honeycomb(*dim, *size, &budget)?;
            emit(out, &x, m)
        }
        Command::Subdivide { input, iterations, out } => {
            m.param("iterations", iterations);
            m.input(input)?;
            let mut x: Complex = read_json(input)?;
            for _ in 0..*iterations {
                x = x.barycentric_subdivision(&budget)?;
            }
            emit(out, &x, m)
        }
        Command::Dual { input, skeleton, out } => {
            m.param("skeleton", skeleton);
            m.input(input)?;
            let x: Complex = read_json(input)?;
            let dual = x.dual_graph(*skeleton)?;
            emit(out, &dual.graph, m)
        }
        Command::Pipeline {
            dim,
            size,
            report,
            emit_sequence,
            emit_dot,
            order,
            strict_claims,
        } => {
            m.param("dim", dim);
            m.param("size", size);
            let order = match order {
                OrderArg::ColorAscending => PartOrder::ColorAscending,
                OrderArg::ColorDescending => PartOrder::ColorDescending,
            };
            m.param("order", order);
            let config = PipelineConfig { budget, order };
            let run = full_pipeline(*dim, *size, &config)?;
            let t = &run.report.timings;
            for (k, v) in [
                ("build", t.build),
                ("coloring", t.coloring),
                ("epoch_one", t.epoch_one),
                ("epoch_two", t.epoch_two),
                ("replay", t.replay),
            ] {
                m.timings.insert(k.to_string(), secs(v));
            }
            emit(report, &run.report, m)?;
            if let Some(p) = emit_sequence {
                emit(p, &run.sequence, m)?;
            }
            if let Some(dir) = emit_dot {
                for (name, g) in [("g.dot", &run.g), ("g_star.dot", &run.g_star)] {
                    let p = dir.join(name);
                    write_text(&p, &to_dot(g))?;
                    m.output(&p);
                }
            }
            if *strict_claims {
                run.report.family_stats.require_all()?;
            }
            Ok(())
        }
        Command::ContractGrid {
            dim,
            size,
            diagonals,
            red,
            out,
        } => {
            let spec = GridSpec {
                n: *size,
                d: *dim,
                diagonals: *diagonals,
                all_red: *red,
            };
            m.param("spec", spec);
            let g = grid_graph(&spec)?;
            let c = if !diagonals && !red {
                contract_grid(&spec)?
            } else if *red {
                contract_red_grid_subtrigraph(&g, &grid_coordinates(&spec)?)?
            } else {
                contract_embedded(&g, &grid_coordinates(&spec)?)?
            };
            let report = apply_sequence(&g, &c.sequence);
            emit(out, &c.sequence, m)?;
            print!("{}", to_json(&report));
            if !report.is_full() {
                return Err(CliError::invalid("folding produced an invalid sequence"));
            }
            Ok(())
        }
        Command::Exact {
            input,
            upper,
            budget_nodes,
            budget_secs,
            max_vertices,
            out,
        } => {
            m.input(input)?;
            let mut config = ExactConfig::default();
            if let Some(n) = budget_nodes {
                config.max_nodes = *n;
            }
            if let Some(s) = budget_secs {
                config.time_limit = Duration::from_secs(*s);
            }
            if let Some(v) = max_vertices {
                config.max_vertices = *v;
            }
            m.param("upper", upper);
            m.param("max_nodes", config.max_nodes);
            m.param("time_limit_secs", config.time_limit.as_secs());
            m.param("max_vertices", config.max_vertices);
            let g: Trigraph = read_json(input)?;
            match exact_tww(&g, *upper, &config) {
                Ok(r) => {
                    m.timings.insert("search".into(), secs(r.time));
                    match out {
                        Some(p) => emit(p, &r, m),
                        None => {
                            print!("{}", to_json(&r));
                            Ok(())
                        }
                    }
                }
                Err(ExactError::BudgetExceeded { upper, witness, nodes }) => {
                    print!(
                        "{}",
                        to_json(&serde_json::json!({"budget_exceeded": true, "upper": upper, "witness": witness, "nodes_explored": nodes}))
                    );
                    Err(CliError {
                        code: EXIT_BUDGET,
                        message: format!("search budget exhausted after {nodes} nodes; best known width {upper}"),
                    })
                }
                Err(e @ ExactError::TooLarge { .. }) => Err(CliError {
                    code: EXIT_BUDGET,
                    message: e.to_string(),
                }),
                Err(e) => Err(CliError::invalid(e.to_string())),
            }
        }
        Command::Lowerbound { dim, nodes, seed, out } => {
            m.param("dim", dim);
            m.param("nodes", nodes);
            m.param("seed", seed);
            let spec = RegularGraphSpec {
                k: dim + 1,
                m: *nodes,
                seed: *seed,
            };
            let g = random_regular_graph(&spec)?;
            let t = thickening_triangulation(&g, *dim)?;
            let dual = t.complex.dual_graph(*dim)?;
            let verdict = verify_claim_dual(&t, &g)?;
            let bundle = serde_json::json!({
                "graph": g,
                "complex": t.complex,
                "dual": dual.graph,
                "verdict": verdict,
            });
            emit(out, &bundle, m)
        }
        Command::VerifySequence { graph, sequence } => {
            m.input(graph)?;
            m.input(sequence)?;
            let g: Trigraph = read_json(graph)?;
            let s: ContractionSequence = read_json(sequence)?;
            let report = apply_sequence(&g, &s);
            print!("{}", to_json(&report));
            if report.is_full() {
                Ok(())
            } else if let Some(f) = &report.failure {
                Err(CliError::invalid(format!("step {}: {}", f.step, f.reason)))
            } else {
                Err(CliError::invalid(format!(
                    "sequence stops with {} vertices left",
                    report.remaining_vertices
                )))
            }
        }
        Command::ExportDot { input, out } => {
            m.input(input)?;
            let g: Trigraph = read_json(input)?;
            write_text(out, &to_dot(&g))?;
            m.output(out);
            Ok(())
        }
    }
}
