//! Command line front end. Every command writes one JSON document (CSV
//! for experiment traces) that starts with an echo of its configuration.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use sumchoice::choosability::{decide, is_sufficient, ListAssignment, SizeFunction, Verdict, DEFAULT_BUDGET};
use sumchoice::graph::{generate, Graph, FAMILY_NAMES};
use sumchoice::kaq::{self, LogBase};
use sumchoice::sum::{sum_choice_exact, SearchOptions};
use sumchoice::{turan, type2, verify, Error};

pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Debug, Parser, Serialize)]
#[command(name = "sumchoice", version, about = "Sum choice numbers, bounds and witnesses")]
pub struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    #[serde(skip)]
    pub jobs: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on visited assignments or search nodes.
    #[arg(long, global = true, env = "SUMCHOICE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize, Clone, Default)]
pub struct GraphArgs {
    /// Graph JSON file `{n, edges, parts?}`; overrides `--family`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Vertex count, or ring size for `bipyramid`.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    /// Seed for random families (defaults to `--seed`).
    #[arg(long)]
    pub graph_seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Transversal search on complete bipartite and split graphs,
    /// exhaustive elsewhere.
    Auto,
    /// Every canonical assignment; witnesses are the first failing one.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    Natural,
    Binary,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Print a graph as JSON.
    Generate(GraphArgs),
    /// Decide whether a size function is sufficient.
    Check {
        #[command(flatten)]
        #[serde(flatten)]
        graph: GraphArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        f: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Exact sum choice number.
    Sumchoice {
        #[command(flatten)]
        #[serde(flatten)]
        graph: GraphArgs,
        /// Record a witness for every rejected size function.
        #[arg(long)]
        audit: bool,
    },
    /// Closed form, upper and lower bound for K_{a,q}.
    Bounds {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Base::Natural)]
        log_base: Base,
        /// Replace the leading constant of the upper bound.
        #[arg(long)]
        ub_constant: Option<f64>,
    },
    /// The explicit insufficient assignment on K_{2^t, t l^2}.
    Constr {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        l: usize,
    },
    /// Randomised experiments.
    Experiment {
        #[command(subcommand)]
        #[serde(flatten)]
        kind: Experiment,
    },
    /// Greedy independent system of distinct representatives.
    Sdr {
        #[arg(long)]
        graph: PathBuf,
        /// JSON array of vertex lists (or `{lists: [...]}`).
        #[arg(long)]
        lists: PathBuf,
    },
    /// Bounds for the complete split graph G_{a,q}.
    SplitBounds {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        q: usize,
        /// Also build an insufficient assignment for these A sizes.
        #[arg(long, value_delimiter = ',')]
        witness: Vec<usize>,
    },
    /// Type-II sufficiency on K_{a,q} via reduced graphs, or chi_sc2.
    Type2 {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        q: usize,
        /// A-side sizes; without it chi_sc2 is computed.
        #[arg(long, value_delimiter = ',')]
        f: Vec<usize>,
        /// Also print the concrete assignment.
        #[arg(long)]
        expand: bool,
    },
    /// The limit constant beta(a).
    Beta {
        #[arg(long)]
        a: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Recompute every reference table and compare.
    VerifyTables {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "experiment")]
pub enum Experiment {
    /// Per-trial trace of the two-step random process on a random type-II
    /// assignment of K_{a,q}.
    Rt {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// A-list length (default from the upper bound).
        #[arg(long)]
        r: Option<usize>,
        /// Pick probability (default `sqrt(2(1 + ln a)/q)`).
        #[arg(long)]
        p: Option<f64>,
        /// Colour universe size (default `2r`).
        #[arg(long)]
        universe: Option<usize>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = std::result::Result<(String, i32), Failure>;

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> std::result::Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn need(v: Option<u64>, flag: &str, family: &str) -> std::result::Result<u64, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("family {family} needs --{flag}")))
}

fn build_graph(g: &GraphArgs, seed: u64) -> std::result::Result<Graph, Failure> {
    if let Some(path) = &g.graph {
        // a bare graph, or the document `generate` prints
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum File {
            Bare(Graph),
            Wrapped { graph: Graph },
        }
        return Ok(match read_json(path)? {
            File::Bare(g) | File::Wrapped { graph: g } => g,
        });
    }
    let Some(family) = g.family.as_deref() else {
        return Err(Failure::Usage("give --graph or --family".into()));
    };
    let s = g.graph_seed.unwrap_or(seed);
    let params = match family {
        "complete_bipartite" | "complete_split" => vec![need(g.a, "a", family)?, need(g.q, "q", family)?],
        "path" | "cycle" | "complete" | "star" | "bipyramid" => vec![need(g.n, "n", family)?],
        "random_tree" => vec![need(g.n, "n", family)?, s],
        "random_graph" => vec![need(g.n, "n", family)?, need(g.m, "m", family)?, s],
        "disjoint_cliques" => g.sizes.clone(),
        "icosahedron" => vec![],
        other => return Err(Failure::Usage(format!("unknown family `{other}`; known: {}", FAMILY_NAMES.join(", ")))),
    };
    Ok(generate(family, &params)?)
}

fn doc(config: &Value, body: Value) -> String {
    let mut out = serde_json::Map::new();
    out.insert("config".into(), config.clone());
    if let Value::Object(map) = body {
        out.extend(map);
    }
    serde_json::to_string_pretty(&Value::Object(out)).unwrap() + "\n"
}

fn verdict_exit(v: &Verdict) -> i32 {
    if matches!(v, Verdict::Undecided { .. }) {
        EXIT_UNDECIDED
    } else {
        0
    }
}

fn dispatch(cli: &Cli, config: &Value) -> Outcome {
    let budget = cli.budget;
    if budget == 0 {
        return Err(Failure::Usage("budget must be positive".into()));
    }
    match &cli.command {
        Command::Generate(g) => {
            let graph = build_graph(g, cli.seed)?;
            Ok((doc(config, json!({ "graph": graph })), 0))
        }
        Command::Check { graph, f, method } => {
            let g = build_graph(graph, cli.seed)?;
            if f.len() != g.n() {
                return Err(Failure::Usage(format!("--f has {} entries for {} vertices", f.len(), g.n())));
            }
            let f = SizeFunction::new(f.clone())?;
            let d = match method {
                Method::Auto => decide(&g, &f, budget)?,
                Method::Exhaustive => is_sufficient(&g, &f, budget)?,
            };
            Ok((doc(config, json!(d)), verdict_exit(&d.verdict)))
        }
        Command::Sumchoice { graph, audit } => {
            let g = build_graph(graph, cli.seed)?;
            let r = sum_choice_exact(&g, &SearchOptions { budget, audit: *audit, ..Default::default() })?;
            let code = if r.undecided { EXIT_UNDECIDED } else { 0 };
            let mut body = serde_json::to_value(&r).unwrap();
            body.as_object_mut().unwrap().insert("chi_sc".into(), json!(r.value));
            Ok((doc(config, body), code))
        }
        Command::Bounds { a, q, log_base, ub_constant } => {
            let base = match log_base {
                Base::Natural => LogBase::Natural,
                Base::Binary => LogBase::Binary,
            };
            let closed = kaq::closed_form(*a, *q);
            let ub = kaq::ub_bound_with(*a, *q, ub_constant.unwrap_or(kaq::UB_CONSTANT));
            let lb = kaq::lb_bound(*a, *q, base);
            let middle = closed.map(|c| c as f64);
            let sandwich = match (&lb, middle, &ub) {
                (Ok(l), Some(m), Ok(u)) => Some(*l <= m && m <= *u as f64),
                _ => None,
            };
            let body = json!({
                "closed_form": closed,
                "ub": ub.as_ref().ok(),
                "ub_error": ub.as_ref().err().map(|e| e.to_string()),
                "lb": lb.as_ref().ok(),
                "lb_error": lb.as_ref().err().map(|e| e.to_string()),
                "sandwich_ok": sandwich,
            });
            Ok((doc(config, body), 0))
        }
        Command::Constr { t, l } => {
            let c = kaq::constr_assignment(*t, *l)?;
            let body = json!({
                "a": c.a(),
                "q": c.q(),
                "universe": c.universe(),
                "a_lists": c.a_lists,
                "q_lists": c.q_lists,
                "insufficient": kaq::constr_is_insufficient(&c),
            });
            Ok((doc(config, body), 0))
        }
        Command::Experiment { kind: Experiment::Rt { a, q, trials, r, p, universe } } => {
            if *a == 0 || *q == 0 {
                return Err(Failure::Usage("a and q must be positive".into()));
            }
            let r = match r {
                Some(r) => *r,
                None => kaq::ub_list_size(*a as u64, *q as u64, kaq::UB_CONSTANT)? as usize,
            };
            let p = p.unwrap_or_else(|| kaq::default_p(*a as u64, *q as u64));
            let universe = universe.unwrap_or(2 * r);
            let (la, lq) = kaq::random_type2_assignment(*a, *q, r, universe, cli.seed)?;
            let traces = kaq::random_trials(&la, &lq, p, cli.seed, *trials)?;
            let mut out = format!("# {}\n", serde_json::to_string(config).unwrap());
            out.push_str("trial,y,min_x,success,counting_condition\n");
            for (i, t) in traces.iter().enumerate() {
                out.push_str(&format!("{i},{},{},{},{}\n", t.spanned, t.min_hits(), t.success, t.counting_condition()));
            }
            Ok((out, 0))
        }
        Command::Sdr { graph, lists } => {
            #[derive(Deserialize)]
            #[serde(untagged)]
            enum Lists {
                Bare(Vec<Vec<usize>>),
                Wrapped { lists: Vec<Vec<usize>> },
            }
            let g: Graph = read_json(graph)?;
            let lists = match read_json::<Lists>(lists)? {
                Lists::Bare(l) | Lists::Wrapped { lists: l } => l,
            };
            let r = turan::independent_sdr(&g, &lists)?;
            let body = json!({ "found": r.is_some(), "sdr": r });
            Ok((doc(config, body), 0))
        }
        Command::SplitBounds { a, q, witness } => {
            let b = turan::split_bounds(*a, *q)?;
            let mut body = serde_json::to_value(&b).unwrap();
            if !witness.is_empty() {
                let mut s = witness.clone();
                s.sort_unstable();
                if s.len() != *a {
                    return Err(Failure::Usage(format!("--witness needs {a} sizes")));
                }
                body.as_object_mut().unwrap().insert("witness".into(), json!(turan::split_witness(&s, *q)?));
            }
            Ok((doc(config, body), 0))
        }
        Command::Type2 { a, q, f, expand } => {
            if f.is_empty() {
                let c = type2::chi_sc2_reduced(*a, *q, budget)?;
                return Ok((doc(config, json!({ "chi_sc2": c.value, "optimal_a": c.optimal_a })), 0));
            }
            if f.len() != *a {
                return Err(Failure::Usage(format!("--f has {} entries, expected {a}", f.len())));
            }
            let body = match type2::type2_insufficient(f, *q as u64, budget)? {
                None => json!({ "verdict": "sufficient" }),
                Some(w) => {
                    let mut v = json!({ "verdict": "insufficient", "witness": w });
                    if *expand {
                        let lists: ListAssignment = type2::expand_witness(&w, f, *q)?;
                        v.as_object_mut().unwrap().insert("lists".into(), json!(lists.lists));
                    }
                    v
                }
            };
            Ok((doc(config, body), 0))
        }
        Command::Beta { a, tol } => {
            let b = type2::beta(*a, *tol)?;
            Ok((doc(config, json!(b)), 0))
        }
        Command::VerifyTables { format } => {
            let rows = verify::verify_tables(&verify::VerifyOptions { seed: cli.seed, budget })?;
            let all_ok = rows.iter().all(|r| r.ok);
            let out = match format {
                Format::Json => doc(config, json!({ "all_ok": all_ok, "rows": rows })),
                Format::Text => {
                    let mut s = format!("# {}\n", serde_json::to_string(config).unwrap());
                    for r in &rows {
                        let mark = if r.ok { "ok  " } else { "FAIL" };
                        s.push_str(&format!("{mark} [{}] {}: expected {}, got {}\n", r.criterion, r.name, r.expected, r.actual));
                    }
                    s
                }
            };
            Ok((out, if all_ok { 0 } else { EXIT_MISMATCH }))
        }
    }
}

/// Parses `argv`, runs the command and writes its output. Returns the
/// process exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    set_jobs(cli.jobs);
    let config = serde_json::to_value(&cli).unwrap();
    match dispatch(&cli, &config) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(Error::BudgetExceeded(b))) => {
            let _ = out.write_all(doc(&config, json!({ "verdict": "undecided", "budget": b })).as_bytes());
            EXIT_UNDECIDED
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(feature = "parallel")]
fn set_jobs(jobs: usize) {
    if jobs > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn set_jobs(_jobs: usize) {}
