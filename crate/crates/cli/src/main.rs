//! `arkit`: command-line front end for the rainbow-matching toolkit.
//!
//! Every subcommand is a thin wrapper around one library entry point and
//! returns exactly what the library returns; golden tests compare the two
//! paths. Exit codes: 0 success or verified, 1 property violation or
//! counterexample, 2 usage or input error, 3 instance too large or search
//! budget exhausted. `--json` switches to machine output on standard output;
//! diagnostics go to standard error. `ARKIT_THREADS` caps the thread pool
//! used by grid sweeps.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arkit_core::detect::{self, Verdict, VerdictMode};
use arkit_core::extremal;
use arkit_core::graph::{ColoredGraph, Graph};
use arkit_core::harness::{self, Family};
use arkit_core::matching;
use arkit_core::rainbow::{self, Budget, Decision, RainbowCertificate};
use arkit_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "arkit",
    version,
    about = "Exact tools for rainbow matchings in edge-colored complete graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form counts: extremal edge numbers, forcing color counts, thresholds
    #[command(subcommand)]
    Formula(FormulaCmd),
    /// Emit the reference graphs and colorings in the text formats
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Exact rainbow-matching search on a coloring file
    #[command(subcommand)]
    Rainbow(RainbowCmd),
    /// Gallai-Edmonds decomposition of a plain graph file
    Decompose {
        /// Input graph in `g 1` format
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Monochromatic-structure detectors and the combined stability verdict
    #[command(subcommand)]
    Detect(DetectCmd),
    /// Re-verify every counting claim on a parameter grid in exact arithmetic
    Audit {
        /// Smallest s on the grid
        #[arg(long, default_value_t = 2)]
        s_min: usize,
        /// Largest s on the grid
        #[arg(long, default_value_t = 60)]
        s_max: usize,
        /// Largest n on the grid; n starts at max(2s+5, 40) for each s
        #[arg(long, default_value_t = 400)]
        n_cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive and randomized probes around the color threshold
    #[command(subcommand)]
    Probe(ProbeCmd),
    /// Small-case brute-force oracles
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum FormulaCmd {
    /// Largest edge count of an n-vertex graph with no matching of size k
    Ex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Least color count that forces a rainbow matching of size s
    Ar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        json: bool,
    },
    /// Color thresholds g1, g2 and their maximum g
    G {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Near-extremal coloring on K_{s-1} joined with (K_3 plus isolated vertices)
    H1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        /// Write to a file instead of standard output
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Near-extremal coloring on K_1 joined with (K_{2s-1} plus isolated vertices)
    H2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Hub extremal graph K_s joined with n-s isolated vertices (plain graph)
    Turan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Hub extremal graph colored rainbow, every other pair sharing color 0
    RainbowPlusOne {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RainbowCmd {
    /// Maximum rainbow matching with a certificate
    Max {
        /// Input coloring in `cg 1` format
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether a rainbow matching of size k exists
    Decide {
        /// Input coloring in `cg 1` format
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum DetectCmd {
    /// Monochromatic clique on k vertices
    MonoClique {
        /// Input coloring in `cg 1` format
        file: PathBuf,
        /// Clique size to look for
        #[arg(long)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Monochromatic complete split graph with core size n-2s-1
    MonoJoin {
        /// Input coloring in `cg 1` format
        file: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        json: bool,
    },
    /// Full stability check: color count, rainbow search, both detectors
    Verdict {
        /// Input coloring in `cg 1` format
        file: PathBuf,
        #[arg(long)]
        s: usize,
        /// Accept any s >= 1, n >= 2s+2 instead of the asserted range
        #[arg(long)]
        permissive: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ProbeCmd {
    /// Recolor each shared-color edge of a near-extremal coloring, verdict each step
    Boundary {
        /// Which construction family to probe
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// Random walk through rainbow-free colorings, verdicts at the threshold
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        /// Number of mutation trials
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Deterministic node cap for each rainbow search
        #[arg(long, default_value_t = 2000)]
        budget_nodes: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    H1,
    H2,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::H1 => Family::H1,
            FamilyArg::H2 => Family::H2,
        }
    }
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Brute-force extremal edge count (n <= 7)
    Ex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force least forcing color count (n <= 5)
    Ar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Wall-clock cap in milliseconds
    #[arg(long)]
    budget_ms: Option<u64>,
    /// Deterministic search-node cap
    #[arg(long)]
    budget_nodes: Option<u64>,
}

impl BudgetArgs {
    fn to_budget(&self) -> Budget {
        Budget {
            max_nodes: self.budget_nodes,
            max_millis: self.budget_ms,
        }
    }
}

/// A failed invocation: message for standard error plus the exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::TooLarge { .. } => EXIT_LIMIT,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("arkit: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

/// Applies `ARKIT_THREADS` to the global thread pool before any parallel work.
fn init_threads() {
    if let Ok(v) = std::env::var("ARKIT_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(t) if t >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            }
            _ => eprintln!("arkit: ignoring ARKIT_THREADS={v:?}: expected a positive integer"),
        }
    }
}

fn run(cmd: Cmd) -> Result<u8, Failure> {
    match cmd {
        Cmd::Formula(f) => formula(f),
        Cmd::Construct(c) => construct(c),
        Cmd::Rainbow(r) => rainbow_cmd(r),
        Cmd::Decompose { file, json } => decompose(&file, json),
        Cmd::Detect(d) => detect_cmd(d),
        Cmd::Audit {
            s_min,
            s_max,
            n_cap,
            json,
        } => audit(s_min, s_max, n_cap, json),
        Cmd::Probe(p) => probe(p),
        Cmd::Oracle(o) => oracle(o),
    }
}

fn formula(cmd: FormulaCmd) -> Result<u8, Failure> {
    match cmd {
        FormulaCmd::Ex { n, k, json } => {
            let v = extremal::turan_matching(n, k)?;
            if json {
                println!("{}", json!({"n": n, "k": k, "value": v}));
            } else {
                println!("{v}");
            }
        }
        FormulaCmd::Ar { n, s, json } => {
            let v = extremal::anti_ramsey_matching(n, s)?;
            if json {
                println!("{}", json!({"n": n, "s": s, "value": v}));
            } else {
                println!("{v}");
            }
        }
        FormulaCmd::G { n, s, json } => {
            if s < 1 || n < s {
                return Err(Failure::usage(format!(
                    "thresholds need 1 <= s <= n, got n={n} s={s}"
                )));
            }
            let t = extremal::threshold_g(n, s);
            if json {
                println!(
                    "{}",
                    json!({
                        "n": n,
                        "s": s,
                        "g1": t.g1,
                        "g2": t.g2,
                        "g": t.g,
                        "regime": t.regime.as_str(),
                    })
                );
            } else {
                println!("g1={} g2={} g={}", t.g1, t.g2, t.g);
            }
        }
    }
    Ok(EXIT_OK)
}

fn construct(cmd: ConstructCmd) -> Result<u8, Failure> {
    let (text, out) = match cmd {
        ConstructCmd::H1 { n, s, out } => (extremal::construct_h1(n, s)?.serialize(), out),
        ConstructCmd::H2 { n, s, out } => (extremal::construct_h2(n, s)?.serialize(), out),
        ConstructCmd::Turan { n, s, out } => (extremal::construct_turan_graph(n, s)?.serialize(), out),
        ConstructCmd::RainbowPlusOne { n, s, out } => {
            let base = extremal::construct_turan_graph(n, s)?;
            (extremal::rainbow_plus_one(&base).serialize(), out)
        }
    };
    write_output(out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn rainbow_cmd(cmd: RainbowCmd) -> Result<u8, Failure> {
    match cmd {
        RainbowCmd::Max { file, budget, json } => {
            let h = load_colored(&file)?;
            let outcome = rainbow::max_rainbow_matching(&h, &budget.to_budget());
            let exact = outcome.is_exact();
            let cert = outcome.certificate();
            if json {
                let mut v = cert.to_json();
                v["exact"] = json!(exact);
                println!("{v}");
            } else {
                println!("size={}", cert.size());
                if !exact {
                    println!("exact=false (budget exhausted; size is only a lower bound)");
                }
                print_certificate(cert);
            }
            Ok(if exact { EXIT_OK } else { EXIT_LIMIT })
        }
        RainbowCmd::Decide {
            file,
            k,
            budget,
            json,
        } => {
            let h = load_colored(&file)?;
            let decision = rainbow::has_rainbow_matching(&h, k, &budget.to_budget());
            let (status, cert, code) = match &decision {
                Decision::Found(c) => ("found", Some(c), EXIT_OK),
                Decision::Absent => ("absent", None, EXIT_OK),
                Decision::Inconclusive => ("inconclusive", None, EXIT_LIMIT),
            };
            if json {
                println!(
                    "{}",
                    json!({
                        "k": k,
                        "status": status,
                        "witness": cert.map(|c| c.to_json()),
                    })
                );
            } else {
                println!("status={status}");
                if let Some(c) = cert {
                    print_certificate(c);
                }
            }
            Ok(code)
        }
    }
}

fn decompose(file: &Path, json: bool) -> Result<u8, Failure> {
    let g = load_graph(file)?;
    let ge = matching::gallai_edmonds(&g);
    if json {
        println!("{}", ge.to_json());
    } else {
        println!("nu={}", ge.nu);
        println!("D={:?}", ge.d);
        println!("A={:?}", ge.a);
        println!("C={:?}", ge.c);
        println!("components_of_D={:?}", ge.components_of_d);
    }
    Ok(EXIT_OK)
}

fn detect_cmd(cmd: DetectCmd) -> Result<u8, Failure> {
    match cmd {
        DetectCmd::MonoClique { file, k, json } => {
            let h = load_colored(&file)?;
            let found = detect::find_mono_clique(&h, k);
            if json {
                let v = found.as_ref().map_or_else(detect::none_json, |c| c.to_json());
                println!("{v}");
            } else {
                match &found {
                    Some(c) => println!("found color={} vertices={:?}", c.color, c.vertices),
                    None => println!("none"),
                }
            }
            Ok(EXIT_OK)
        }
        DetectCmd::MonoJoin { file, s, json } => {
            let h = load_colored(&file)?;
            let found = detect::find_mono_join(&h, s)?;
            if json {
                let v = found.as_ref().map_or_else(detect::none_json, |j| j.to_json());
                println!("{v}");
            } else {
                match &found {
                    Some(j) => println!(
                        "found color={} core={:?} independent={:?}",
                        j.color, j.core, j.independent
                    ),
                    None => println!("none"),
                }
            }
            Ok(EXIT_OK)
        }
        DetectCmd::Verdict {
            file,
            s,
            permissive,
            budget,
            json,
        } => {
            let h = load_colored(&file)?;
            let mode = if permissive {
                VerdictMode::Permissive
            } else {
                VerdictMode::Strict
            };
            let report = detect::theorem_verdict(&h, s, mode, &budget.to_budget())?;
            if json {
                println!("{}", report.to_json());
            } else {
                println!("n={} s={}", report.n, report.s);
                println!(
                    "colors={} required={}",
                    report.color_count, report.required_colors
                );
                let rainbow = match &report.rainbow {
                    None => "skipped".to_string(),
                    Some(Decision::Found(c)) => format!("found size={}", c.size()),
                    Some(Decision::Absent) => "absent".to_string(),
                    Some(Decision::Inconclusive) => "inconclusive".to_string(),
                };
                println!("rainbow[{}]={rainbow}", report.rainbow_target);
                match &report.clique {
                    Some(c) => println!("clique=found color={} size={}", c.color, c.vertices.len()),
                    None => println!("clique=none"),
                }
                match &report.join {
                    Some(j) => println!("join=found color={} core={}", j.color, j.core.len()),
                    None => println!("join=none"),
                }
                println!("verdict={}", report.verdict.as_str());
            }
            Ok(verdict_exit(report.verdict))
        }
    }
}

fn verdict_exit(v: Verdict) -> u8 {
    match v {
        Verdict::HypothesisFails | Verdict::ConclusionHolds => EXIT_OK,
        Verdict::Counterexample => EXIT_VIOLATION,
        Verdict::Inconclusive => EXIT_LIMIT,
    }
}

fn audit(s_min: usize, s_max: usize, n_cap: usize, json: bool) -> Result<u8, Failure> {
    let report = extremal::audit_proof_inequalities(s_min, s_max, n_cap)?;
    if json {
        println!("{}", report.to_json());
    } else {
        println!(
            "cells={} records={} violations={}",
            report.cells,
            report.records,
            report.violations.len()
        );
        println!(
            "{:<14} {:>9} {:>10} {:>12}  tightest at (n, s, param)",
            "check", "evaluated", "violations", "min margin"
        );
        for s in &report.summaries {
            println!(
                "{:<14} {:>9} {:>10} {:>12}  ({}, {}, {})",
                s.id, s.evaluated, s.violations, s.min_margin, s.min_margin_n, s.min_margin_s, s.min_margin_param
            );
        }
        for v in &report.violations {
            println!(
                "violation: {} at n={} s={} param={}: lhs={} rhs={} (expected {})",
                v.id,
                v.n,
                v.s,
                v.param,
                v.lhs,
                v.rhs,
                if v.equality { "lhs = rhs" } else { "lhs < rhs" }
            );
        }
        println!("audit={}", if report.passed() { "pass" } else { "FAIL" });
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATION })
}

fn probe(cmd: ProbeCmd) -> Result<u8, Failure> {
    match cmd {
        ProbeCmd::Boundary {
            family,
            n,
            s,
            budget,
            json,
        } => {
            let report = harness::recolor_boundary_probe(n, s, family.into(), &budget.to_budget())?;
            if json {
                println!("{}", report.to_json());
            } else {
                println!(
                    "family={} n={} s={} threshold={}",
                    report.family, report.n, report.s, report.threshold
                );
                println!(
                    "base: colors={} rainbow_absent={} detectors_empty={}",
                    report.base_colors, report.base_rainbow_absent, report.base_detectors_empty
                );
                println!(
                    "trials={} rainbow_found={} conclusion_holds={}",
                    report.trials, report.rainbow_found, report.conclusion_holds
                );
                println!("counterexamples={:?}", report.counterexamples);
                println!("inconclusive={:?}", report.inconclusive);
                println!("clean={}", report.clean());
            }
            let code = if !report.counterexamples.is_empty()
                || !report.base_rainbow_absent
                || !report.base_detectors_empty
            {
                EXIT_VIOLATION
            } else if !report.inconclusive.is_empty() {
                EXIT_LIMIT
            } else {
                EXIT_OK
            };
            Ok(code)
        }
        ProbeCmd::Random {
            n,
            s,
            samples,
            seed,
            budget_nodes,
            json,
        } => {
            let report = harness::random_stability_search(n, s, samples, seed, budget_nodes)?;
            if json {
                let mut v = report.to_json();
                v["digest"] = json!(report.digest());
                println!("{v}");
            } else {
                println!(
                    "n={} s={} samples={} seed={} budget_nodes={} threshold={}",
                    report.n, report.s, report.samples, report.seed, report.budget_nodes, report.threshold
                );
                println!(
                    "accepted={} rejected_rainbow={} rejected_inconclusive={} noop_mutations={}",
                    report.accepted,
                    report.rejected_rainbow,
                    report.rejected_inconclusive,
                    report.noop_mutations
                );
                println!(
                    "verdicts_run={} conclusion_holds={}",
                    report.verdicts_run, report.conclusion_holds
                );
                println!("verdict_inconclusive={:?}", report.verdict_inconclusive);
                println!("counterexamples={:?}", report.counterexamples);
                println!("final_colors={:?}", report.final_colors);
                println!("digest={}", report.digest());
                println!("clean={}", report.clean());
            }
            let code = if !report.counterexamples.is_empty() {
                EXIT_VIOLATION
            } else if !report.verdict_inconclusive.is_empty() {
                EXIT_LIMIT
            } else {
                EXIT_OK
            };
            Ok(code)
        }
    }
}

fn oracle(cmd: OracleCmd) -> Result<u8, Failure> {
    match cmd {
        OracleCmd::Ex { n, k, json } => {
            let v = harness::oracle_turan(n, k)?;
            if json {
                println!("{}", json!({"n": n, "k": k, "value": v}));
            } else {
                println!("{v}");
            }
        }
        OracleCmd::Ar { n, s, json } => {
            let v = harness::oracle_anti_ramsey(n, s)?;
            if json {
                println!("{}", json!({"n": n, "s": s, "value": v}));
            } else {
                println!("{v}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn print_certificate(cert: &RainbowCertificate) {
    for (&(u, v), &c) in cert.edges().iter().zip(cert.colors()) {
        println!("({u},{v}) color={c}");
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(Graph::parse(&read_file(path)?)?)
}

fn load_colored(path: &Path) -> Result<ColoredGraph, Failure> {
    Ok(ColoredGraph::parse(&read_file(path)?)?)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_exit_codes() {
        assert_eq!(verdict_exit(Verdict::HypothesisFails), EXIT_OK);
        assert_eq!(verdict_exit(Verdict::ConclusionHolds), EXIT_OK);
        assert_eq!(verdict_exit(Verdict::Counterexample), EXIT_VIOLATION);
        assert_eq!(verdict_exit(Verdict::Inconclusive), EXIT_LIMIT);
    }

    #[test]
    fn library_errors_map_to_exit_codes() {
        let too_large = Failure::from(Error::TooLarge {
            what: "x",
            limit: 7,
            got: 9,
        });
        assert_eq!(too_large.code, EXIT_LIMIT);
        let bad = Failure::from(Error::InvalidParams("nope".into()));
        assert_eq!(bad.code, EXIT_USAGE);
    }

    #[test]
    fn cli_shape_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
