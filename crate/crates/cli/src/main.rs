//! Command-line front end: parse degeneration files, run analyses,
//! apply blowup moves, inspect monoid charts, and run the
//! finite-coefficient comparisons.
//!
//! Output is JSON unless `--pretty` asks for aligned text.  Exit code
//! 0 means success, 1 an input error (bad file, bad reference, bad
//! flag), 2 a violated invariant found by one of the checking modes.

mod report;
mod schema;

use std::path::{Path, PathBuf};
use std::process::exit;

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

use logkn_core::blowfiber::{
    fiber_of_simple_blowup, verify_contractibility, BlowupLocalData,
};
use logkn_core::degen::{BlowupMove, DualGraph};
use logkn_core::etalecmp::{compare_log_point, mapping_torus_mod_n_consistency};
use logkn_core::intlin::{homology, mapping_torus_homology};
use logkn_core::knfiber::{blowup_invariance, hopf_surface, SpecialModel};
use logkn_core::monoid::{good_model_chart, FsMonoid};

use report::*;
use schema::{issue_record, ErrorBody, GraphFile};

#[derive(Parser)]
#[command(
    name = "logkn",
    version,
    about = "Topological invariants of degenerations over a punctured disc"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a degeneration file: fiber, monodromy, homology, zeta.
    Analyze(AnalyzeArgs),
    /// Apply a blowup move to a degeneration file.
    Blowup(BlowupArgs),
    /// Inspect a monoid chart and its local model.
    Chart(ChartArgs),
    /// Run a built-in scenario.
    Examples(ExamplesArgs),
    /// Mod-n comparison of topological and group-theoretic sides.
    CompareEtale(CompareEtaleArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Dual-graph JSON file.
    path: PathBuf,
    /// Aligned text instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("which").required(true).multiple(false)))]
struct BlowupArgs {
    /// Dual-graph JSON file.
    path: PathBuf,
    /// Blow up the node this edge stands for.
    #[arg(long, value_name = "EDGE", group = "which")]
    node: Option<String>,
    /// Blow up a smooth point on this component.
    #[arg(long, value_name = "VERTEX", group = "which")]
    smooth_point: Option<String>,
    /// The blown-up point is marked; the mark moves to the new leaf.
    #[arg(long, requires = "smooth_point")]
    through_mark: bool,
    /// Compare all invariants across the move; exit 2 on a violation.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).multiple(false)))]
struct ChartArgs {
    /// Monoid generators as semicolon-separated integer tuples,
    /// e.g. "1,0;1,1;1,2".
    #[arg(long, value_name = "GENS", group = "source")]
    generators: Option<String>,
    /// Good-model chart multiplicities, e.g. "1,1".
    #[arg(long, value_name = "A", group = "source")]
    multiplicities: Option<String>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct ExamplesArgs {
    #[command(subcommand)]
    scenario: Scenario,
}

#[derive(Subcommand)]
enum Scenario {
    /// Degenerating elliptic curve with an n-gon of rational curves
    /// as special fiber.
    Tate {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        pretty: bool,
    },
    /// Smooth model of a genus-g curve.
    GoodReduction {
        #[arg(long, default_value_t = 1)]
        g: u32,
        #[arg(long)]
        pretty: bool,
    },
    /// Degenerating Hopf surface; fiber a product of a circle and a
    /// 3-sphere.
    Hopf {
        #[arg(long)]
        pretty: bool,
    },
    /// Contractibility certificates for exceptional fibers of simple
    /// blowups.
    Blowfiber {
        /// Divisor branches through the point (runs one case).
        #[arg(long, requires = "l")]
        i: Option<usize>,
        /// Branches containing the center.
        #[arg(long, requires = "i")]
        l: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        pretty: bool,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("target").required(true).multiple(false)))]
struct CompareEtaleArgs {
    /// Dual-graph JSON file whose total space is reduced mod n.
    #[arg(group = "target")]
    path: Option<PathBuf>,
    /// Compare the standard log point of this rank instead.
    #[arg(long, value_name = "R", group = "target")]
    log_point: Option<usize>,
    /// Coefficient modulus, at least 2.
    #[arg(long = "mod", value_name = "N")]
    modulus: u64,
    #[arg(long)]
    pretty: bool,
}

/// Input-level failure: printed as an error body, exit code 1.
struct InputError(ErrorBody);

impl InputError {
    fn new(msg: impl Into<String>) -> Self {
        InputError(ErrorBody { error: msg.into(), issues: Vec::new() })
    }
}

type CmdResult = Result<i32, InputError>;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            e.print().expect("write to stderr");
            exit(code);
        }
    };
    match run(cli.command) {
        Ok(code) => exit(code),
        Err(InputError(body)) => {
            println!("{}", serde_json::to_string_pretty(&body).expect("serialize"));
            exit(1);
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Blowup(args) => cmd_blowup(&args),
        Command::Chart(args) => cmd_chart(&args),
        Command::Examples(args) => cmd_examples(&args.scenario),
        Command::CompareEtale(args) => cmd_compare_etale(&args),
    }
}

fn emit<T: Serialize>(value: &T, pretty: bool, render: impl FnOnce(&T) -> String) {
    if pretty {
        print!("{}", render(value));
    } else {
        println!("{}", serde_json::to_string_pretty(value).expect("serialize"));
    }
}

fn load_graph(path: &Path) -> Result<DualGraph, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        InputError::new(format!("cannot read {}: {e}", path.display()))
    })?;
    let file: GraphFile = serde_json::from_str(&text).map_err(|e| {
        InputError::new(format!("cannot parse {}: {e}", path.display()))
    })?;
    let graph = file.into_graph();
    let issues = graph.validate();
    if issues.is_empty() {
        Ok(graph)
    } else {
        Err(InputError(ErrorBody {
            error: format!("invalid graph in {}", path.display()),
            issues: issues.iter().map(issue_record).collect(),
        }))
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> CmdResult {
    let graph = load_graph(&args.path)?;
    let report = analysis_report(&graph);
    emit(&report, args.pretty, render_analysis);
    Ok(0)
}

/// With `--check` the output nests the graph next to the invariance
/// section; without it the graph is the whole document so that it can
/// be fed straight back in.
#[derive(Serialize)]
struct CheckedBlowup {
    graph: GraphFile,
    invariance: InvarianceSection,
}

fn cmd_blowup(args: &BlowupArgs) -> CmdResult {
    let graph = load_graph(&args.path)?;
    let mv = match (&args.node, &args.smooth_point) {
        (Some(edge), None) => BlowupMove::Node { edge: edge.clone() },
        (None, Some(vertex)) => BlowupMove::SmoothPoint {
            vertex: vertex.clone(),
            through_mark: args.through_mark,
        },
        _ => unreachable!("clap group enforces exactly one"),
    };
    let after = graph
        .apply_blowup(&mv)
        .map_err(|e| InputError::new(e.to_string()))?;
    let file = GraphFile::from_graph(&after);
    if !args.check {
        emit(&file, args.pretty, render_graph);
        return Ok(0);
    }
    let invariance = blowup_invariance(&graph, &mv)
        .map_err(|e| InputError::new(e.to_string()))?;
    let section = invariance_section(&invariance);
    let ok = section.invariant;
    let out = CheckedBlowup { graph: file, invariance: section };
    emit(&out, args.pretty, |o| {
        format!("{}{}", render_graph(&o.graph), render_invariance(&o.invariance))
    });
    Ok(if ok { 0 } else { 2 })
}

fn parse_i64_list(s: &str, what: &str) -> Result<Vec<i64>, InputError> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<i64>().map_err(|_| {
                InputError::new(format!("cannot parse {what} entry {t:?}"))
            })
        })
        .collect()
}

fn cmd_chart(args: &ChartArgs) -> CmdResult {
    let report = if let Some(gens) = &args.generators {
        let rows: Vec<Vec<i64>> = gens
            .split(';')
            .map(|tuple| parse_i64_list(tuple, "generator"))
            .collect::<Result<_, _>>()?;
        let rank = rows.first().map_or(0, Vec::len);
        if rank == 0 {
            return Err(InputError::new("generators must be nonempty tuples"));
        }
        let monoid = FsMonoid::new(rank, &rows)
            .map_err(|e| InputError::new(e.to_string()))?;
        let model = monoid.kn_local_model();
        ChartReport {
            generators: Some(rows),
            multiplicities: None,
            saturated: monoid.is_saturated(),
            group_rank: monoid.groupification().rank,
            exact: None,
            kummer: None,
            kn_model: kn_model_section(&model),
        }
    } else {
        let text = args.multiplicities.as_deref().expect("clap group");
        let entries = parse_i64_list(text, "multiplicity")?;
        let a: Vec<u64> = entries
            .iter()
            .map(|&x| {
                u64::try_from(x).map_err(|_| {
                    InputError::new(format!("multiplicity {x} is negative"))
                })
            })
            .collect::<Result<_, _>>()?;
        let chart = good_model_chart(&a).map_err(|e| InputError::new(e.to_string()))?;
        let target = chart.target();
        let model = target.kn_local_model();
        ChartReport {
            generators: None,
            multiplicities: Some(a),
            saturated: target.is_saturated(),
            group_rank: target.groupification().rank,
            exact: Some(chart.is_exact()),
            kummer: Some(chart.is_kummer()),
            kn_model: kn_model_section(&model),
        }
    };
    emit(&report, args.pretty, render_chart);
    Ok(0)
}

fn blowfiber_case(
    branches: usize,
    center: usize,
    samples: usize,
    seed: u64,
) -> Result<BlowfiberCase, InputError> {
    let center_branches: Vec<usize> = (0..center).collect();
    let data = BlowupLocalData::new(branches, &center_branches)
        .map_err(|e| InputError::new(e.to_string()))?;
    let model = fiber_of_simple_blowup(&data);
    let cert = verify_contractibility(&model, samples, seed)
        .map_err(|e| InputError::new(e.to_string()))?;
    Ok(BlowfiberCase {
        branches,
        center,
        log_coords: model.log_coords(),
        complex_coords: model.complex_coords(),
        dimension: model.dimension(),
        samples,
        passed: cert.passed(),
    })
}

fn cmd_examples(scenario: &Scenario) -> CmdResult {
    match scenario {
        Scenario::Tate { n, pretty } => {
            if *n == 0 {
                return Err(InputError::new("the special fiber needs n >= 1"));
            }
            let report = analysis_report(&logkn_core::degen::tate_ngon(*n));
            emit(&report, *pretty, render_analysis);
            Ok(0)
        }
        Scenario::GoodReduction { g, pretty } => {
            let report = analysis_report(&logkn_core::degen::good_reduction(*g));
            emit(&report, *pretty, render_analysis);
            Ok(0)
        }
        Scenario::Hopf { pretty } => {
            let SpecialModel { fiber, monodromy } = hopf_surface();
            let report = HopfReport {
                fiber_homology: homology_rows(&homology(&fiber)),
                total_homology: homology_rows(&mapping_torus_homology(
                    &fiber, &monodromy,
                )),
            };
            emit(&report, *pretty, render_hopf);
            Ok(0)
        }
        Scenario::Blowfiber { i, l, samples, seed, pretty } => {
            let mut cases = Vec::new();
            match (i, l) {
                (Some(i), Some(l)) => {
                    cases.push(blowfiber_case(*i, *l, *samples, *seed)?);
                }
                _ => {
                    for branches in 1..=4 {
                        for center in 1..=branches {
                            cases.push(blowfiber_case(
                                branches, center, *samples, *seed,
                            )?);
                        }
                    }
                }
            }
            let passed = cases.iter().all(|c| c.passed);
            let report = BlowfiberReport { cases, passed };
            emit(&report, *pretty, render_blowfiber);
            Ok(if passed { 0 } else { 2 })
        }
    }
}

fn cmd_compare_etale(args: &CompareEtaleArgs) -> CmdResult {
    if args.modulus < 2 {
        return Err(InputError::new("modulus must be at least 2"));
    }
    if let Some(r) = args.log_point {
        let cmp = compare_log_point(r, args.modulus);
        let report = log_point_report(&cmp);
        let ok = report.agrees;
        emit(&report, args.pretty, render_log_point);
        return Ok(if ok { 0 } else { 2 });
    }
    let path = args.path.as_deref().expect("clap group");
    let graph = load_graph(path)?;
    let consistency = mapping_torus_mod_n_consistency(&graph, args.modulus)
        .map_err(|e| InputError::new(e.to_string()))?;
    let report = mod_n_report(&consistency);
    let ok = report.consistent;
    emit(&report, args.pretty, render_mod_n);
    Ok(if ok { 0 } else { 2 })
}
