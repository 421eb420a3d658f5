use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use serde_json::json;

use inversia::cert::{graph_sha, Certificate};
use inversia::constructive::{
    hom_lift, subdivision_sequence, trianglefree_inversion, tromp_lift, zielonka_sequence, SubdivisionMap,
};
use inversia::graph::parse_graph;
use inversia::hom::{find_hom, HomMap, HomResult};
use inversia::solver::{diameter, find_inversion, norm_with, DiameterOptions, NormError, Outcome};
use inversia::suite::{run_suite, Selection, Status, SuiteConfig};
use inversia::targets::{builtin_text, g3_materialized, g4_materialized, gk_sigma, paley, tromp, zielonka};
use inversia::{Budget, ColoredGraph, F2Vector, SolveOptions};

const EXIT_OK: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "inversia", version, about = "Exact inversions of 2-edge-colored graphs")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long)]
    budget_secs: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_nodes: self.budget_nodes,
            max_time: self.budget_secs.map(Duration::from_secs_f64),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    graph: PathBuf,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    weight: Option<u32>,
    /// Fix a vertex vector, e.g. `--fix 0=10110`.
    #[arg(long, value_parser = parse_fix)]
    fix: Vec<(usize, F2Vector)>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a graph file and print its canonical form.
    Parse { graph: PathBuf },
    /// Length of a shortest cycle.
    Girth { graph: PathBuf },
    /// Decide whether a t-inversion exists.
    Solve(SolveArgs),
    /// Smallest t admitting a t-inversion.
    Norm {
        graph: PathBuf,
        #[arg(long, default_value_t = 16)]
        cap: usize,
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Maximum norm over all colorings of the graph's skeleton.
    Diam {
        graph: PathBuf,
        #[arg(long, default_value_t = 16)]
        t_cap: usize,
        #[arg(long, default_value_t = 24)]
        edge_cap: usize,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Print a named target graph: paley <q>, zielonka <k>, gk <k>, tromp <file>.
    Target { kind: String, arg: String },
    /// Print a committed figure graph or a materialized gadget (g3, g4).
    Gadget { name: String },
    /// Search for a color-preserving homomorphism G -> H.
    Hom {
        g: PathBuf,
        h: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    #[command(subcommand)]
    Lift(LiftCmd),
    /// Zero a random coloring of a subdivision of the base graph.
    Subdivide {
        graph: PathBuf,
        /// Path length per base edge, in canonical edge order.
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Run the reproduction suite.
    Suite {
        /// `all`, `figures`, or a comma-separated list of check names.
        #[arg(long, default_value = "all")]
        select: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Write the report as JSON.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Directory for per-check certificates.
        #[arg(long)]
        cert_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LiftCmd {
    /// Pull an assignment of H back along a homomorphism G -> H.
    Hom { g: PathBuf, h: PathBuf, map: PathBuf, assignment: PathBuf },
    /// Lift an assignment of the complemented graph to its Tromp graph.
    Tromp { graph: PathBuf, assignment: PathBuf },
    /// Constructive (Δ + ⌊log Δ⌋)-inversion of a triangle-free graph.
    Trianglefree { graph: PathBuf },
    /// The 4k − 7 sequence zeroing the Zielonka coloring.
    Zielonka { k: usize },
}

fn parse_fix(s: &str) -> Result<(usize, F2Vector), String> {
    let (v, bits) = s.split_once('=').ok_or("expected v=bits")?;
    let v = v.parse().map_err(|_| format!("bad vertex {v:?}"))?;
    let x = F2Vector::from_bitstring(bits).map_err(|e| e.to_string())?;
    Ok((v, x))
}

/// A usage-level failure: bad input file, bad arguments.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn read_text(path: &Path) -> Result<String, Usage> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<ColoredGraph, Usage> {
    parse_graph(&read_text(path)?).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn write_cert(path: &Option<PathBuf>, c: &Certificate) -> Result<(), Usage> {
    if let Some(p) = path {
        c.write(p)?;
    }
    Ok(())
}

struct Out {
    format: Format,
}

impl Out {
    fn emit(&self, text: String, value: serde_json::Value) {
        let body = match self.format {
            Format::Text => text,
            Format::Json => serde_json::to_string_pretty(&value).expect("json"),
        };
        // a closed pipe downstream is not an error worth reporting
        let _ = writeln!(std::io::stdout(), "{body}");
    }
}

fn bitstrings(a: &inversia::Assignment) -> Vec<String> {
    a.vectors().iter().map(F2Vector::to_bitstring).collect()
}

fn run(cli: Cli) -> Result<u8, Usage> {
    let out = Out { format: cli.format };
    match cli.cmd {
        Cmd::Parse { graph } => {
            let g = read_graph(&graph)?;
            let text = g.canonical_text();
            out.emit(
                text.trim_end().to_string(),
                json!({"n": g.n(), "m": g.m(), "ones": g.ones(), "graph_sha": graph_sha(&g)}),
            );
            Ok(EXIT_OK)
        }
        Cmd::Girth { graph } => {
            let g = read_graph(&graph)?;
            let girth = g.girth();
            out.emit(girth.map_or("acyclic".into(), |x| x.to_string()), json!({ "girth": girth }));
            Ok(EXIT_OK)
        }
        Cmd::Solve(a) => {
            let g = read_graph(&a.graph)?;
            let mut opts = SolveOptions {
                strict: a.strict,
                weight_exact: a.weight,
                jobs: a.jobs,
                ..Default::default()
            }
            .with_budget(a.budget.budget());
            for (v, x) in a.fix {
                opts = opts.fix(v, x);
            }
            let r = find_inversion(&g, a.t, &opts)?;
            if let Some(c) = Certificate::from_result(&g, a.t, &opts, &r) {
                write_cert(&a.cert, &c)?;
            }
            Ok(match &r.outcome {
                Outcome::Sat(asg) => {
                    let lines: Vec<String> = bitstrings(asg).iter().enumerate().map(|(v, b)| format!("{v} {b}")).collect();
                    out.emit(
                        format!("SAT t={}\n{}", a.t, lines.join("\n")),
                        json!({"result": "sat", "t": a.t, "vectors": bitstrings(asg), "nodes": r.nodes}),
                    );
                    EXIT_OK
                }
                Outcome::Unsat { exhaustive } => {
                    out.emit(
                        format!("UNSAT t={} exhaustive={exhaustive} nodes={}", a.t, r.nodes),
                        json!({"result": "unsat", "t": a.t, "exhaustive": exhaustive, "nodes": r.nodes}),
                    );
                    EXIT_NO
                }
                Outcome::BudgetExceeded => {
                    out.emit(
                        format!("INCONCLUSIVE budget exceeded after {} nodes", r.nodes),
                        json!({"result": "budget", "nodes": r.nodes}),
                    );
                    EXIT_INCONCLUSIVE
                }
            })
        }
        Cmd::Norm { graph, cap, strict, budget, cert } => {
            let g = read_graph(&graph)?;
            let opts = SolveOptions { strict, ..Default::default() }.with_budget(budget.budget());
            match norm_with(&g, cap, &opts) {
                Ok(r) => {
                    write_cert(&cert, &Certificate::assignment(&g, &r.witness, opts.summary(), r.nodes))?;
                    out.emit(
                        format!("norm {}\n{}", r.norm, bitstrings(&r.witness).join("\n")),
                        json!({"norm": r.norm, "vectors": bitstrings(&r.witness), "nodes": r.nodes}),
                    );
                    Ok(EXIT_OK)
                }
                Err(NormError::ExceedsCap(c)) => {
                    out.emit(format!("norm exceeds {c}"), json!({"norm": null, "cap": c}));
                    Ok(EXIT_NO)
                }
                Err(NormError::BudgetExceeded(t)) => {
                    out.emit(format!("INCONCLUSIVE budget exceeded at t={t}"), json!({"result": "budget", "t": t}));
                    Ok(EXIT_INCONCLUSIVE)
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Diam { graph, t_cap, edge_cap, jobs } => {
            let g = read_graph(&graph)?;
            let opts = DiameterOptions { t_cap, edge_cap, jobs, ..Default::default() };
            let r = diameter(&g, &opts)?;
            out.emit(
                format!("diameter {}\nworst coloring:\n{}", r.diameter, r.worst.canonical_text().trim_end()),
                json!({"diameter": r.diameter, "worst_mask": r.worst.color_mask(), "colorings_checked": r.colorings_checked}),
            );
            Ok(EXIT_OK)
        }
        Cmd::Target { kind, arg } => {
            let g = match kind.as_str() {
                "paley" => paley(arg.parse()?)?,
                "zielonka" => zielonka(arg.parse()?)?.graph,
                "gk" => gk_sigma(arg.parse()?)?.0,
                "tromp" => tromp(&read_graph(Path::new(&arg))?),
                other => return Err(Usage(format!("unknown target {other:?}"))),
            };
            emit_graph(&out, &g);
            Ok(EXIT_OK)
        }
        Cmd::Gadget { name } => {
            match name.as_str() {
                "g3" => emit_graph(&out, &g3_materialized().graph),
                "g4" => emit_graph(&out, &g4_materialized().graph),
                other => {
                    let text = builtin_text(other)?;
                    out.emit(text.trim_end().to_string(), json!({"name": other, "text": text}));
                }
            }
            Ok(EXIT_OK)
        }
        Cmd::Hom { g, h, budget } => {
            let (g, h) = (read_graph(&g)?, read_graph(&h)?);
            Ok(match find_hom(&g, &h, budget.budget()) {
                HomResult::Found(f) => {
                    out.emit(f.to_json(), serde_json::to_value(&f).expect("json"));
                    EXIT_OK
                }
                HomResult::None => {
                    out.emit("no homomorphism".into(), json!(null));
                    EXIT_NO
                }
                HomResult::BudgetExceeded => {
                    out.emit("INCONCLUSIVE budget exceeded".into(), json!({"result": "budget"}));
                    EXIT_INCONCLUSIVE
                }
            })
        }
        Cmd::Lift(cmd) => run_lift(&out, cmd),
        Cmd::Subdivide { graph, lengths, seed, cert } => {
            let base = read_graph(&graph)?;
            let m = SubdivisionMap::new(&base, &lengths)?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let pi = m.subdivided().recolor(|_, _| rng.gen_bool(0.5));
            let solver = |g: &ColoredGraph| norm_with(g, 16, &SolveOptions::default()).map(|r| r.witness.to_sequence()).map_err(|e| e.to_string());
            let r = subdivision_sequence(&m, &pi, solver)?;
            write_cert(&cert, &Certificate::sequence(&pi, &r.sequence))?;
            let sets: Vec<String> = r.sequence.sets.iter().map(|s| format!("{s:?}")).collect();
            out.emit(
                format!("{}\nlength {} (labeling {}, forest {}, base {})\n{}", pi.canonical_text().trim_end(), r.sequence.len(), r.good_sets, r.forest_sets, r.base_sets, sets.join("\n")),
                json!({"coloring": pi.canonical_text(), "sets": r.sequence.sets, "colors": r.colors, "good_sets": r.good_sets, "forest_sets": r.forest_sets, "base_sets": r.base_sets}),
            );
            Ok(EXIT_OK)
        }
        Cmd::Suite { select, budget, seed, jobs, cert, cert_dir } => {
            let cfg = SuiteConfig {
                selection: Selection::parse(&select).map_err(Usage)?,
                budget: budget.budget(),
                seed,
                cert_dir,
                jobs,
            };
            let report = run_suite(&cfg);
            if let Some(p) = &cert {
                std::fs::write(p, report.to_json() + "\n")?;
            }
            out.emit(report.lines().join("\n"), serde_json::to_value(&report).expect("json"));
            Ok(match report.overall() {
                Status::Pass => EXIT_OK,
                Status::Fail => EXIT_NO,
                Status::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
    }
}

fn emit_graph(out: &Out, g: &ColoredGraph) {
    let text = g.canonical_text();
    out.emit(text.trim_end().to_string(), json!({"n": g.n(), "m": g.m(), "text": text, "graph_sha": graph_sha(g)}));
}

fn load_assignment(path: &Path, g: &ColoredGraph) -> Result<inversia::Assignment, Usage> {
    let c = Certificate::from_json(&read_text(path)?)?;
    c.check(g)?;
    Ok(c.to_assignment(g.n())?)
}

fn run_lift(out: &Out, cmd: LiftCmd) -> Result<u8, Usage> {
    let (g, a) = match cmd {
        LiftCmd::Hom { g, h, map, assignment } => {
            let (g, h) = (read_graph(&g)?, read_graph(&h)?);
            let f = HomMap::from_json(&read_text(&map)?)?;
            let a = load_assignment(&assignment, &h)?;
            let lifted = hom_lift(&g, &h, &a, &f)?;
            (g, lifted)
        }
        LiftCmd::Tromp { graph, assignment } => {
            let g = read_graph(&graph)?;
            let a = load_assignment(&assignment, &g.complemented())?;
            let lifted = tromp_lift(&g, &a)?;
            (tromp(&g), lifted)
        }
        LiftCmd::Trianglefree { graph } => {
            let g = read_graph(&graph)?;
            let a = trianglefree_inversion(&g)?;
            (g, a)
        }
        LiftCmd::Zielonka { k } => {
            let s = zielonka_sequence(k)?;
            let z = zielonka(k)?;
            let cert = Certificate::sequence(&z.graph, &s);
            let sets: Vec<String> = s.sets.iter().map(|set| format!("{set:?}")).collect();
            out.emit(format!("length {}\n{}", s.len(), sets.join("\n")), serde_json::to_value(&cert).expect("json"));
            return Ok(EXIT_OK);
        }
    };
    let cert = Certificate::assignment(&g, &a, json!({}), 0);
    out.emit(format!("t={}\n{}", a.t(), bitstrings(&a).join("\n")), serde_json::to_value(&cert).expect("json"));
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
