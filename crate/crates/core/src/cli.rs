//! Command-line front end. [`run`] parses argv, dispatches to the library and
//! writes reports; the binary is a thin wrapper around it.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bergman::{certified_bound, measure};
use crate::checks::run_suite;
use crate::cuts::{Cut, Universe};
use crate::ends::{balanced_cut, ends_profile_with_cap, stallings_pipeline, SplitOutcome};
use crate::group::{BallView, GroupOracle, DEFAULT_BALL_CAP};
use crate::io::{graph_to_json, load_graph, load_group, CutsDoc};
use crate::sieve::{irr_of, Class, SieveMode};
use crate::treeops::{build_t, build_u, NestedSystem};
use crate::{Error, Result};

pub const CAP_ENV: &str = "CUTFORGE_CAP_VERTICES";
const BALL_DEFAULT_L: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "cutforge", version, about = "Edge cuts, structure trees and ends of graphs and groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the Cayley ball graph as JSON.
    Cayley {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// Truncated measure series of a cut.
    Measure {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        cut: PathBuf,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Classify the Boolean algebra generated by a family of cuts.
    Sieve {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        cuts: PathBuf,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Build the structure tree T(E) or U(E) of a nested family.
    Tree {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        cuts: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::T)]
        mode: Mode,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Infinite-component profile of a Cayley ball.
    Ends {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 6)]
        rmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the splitting pipeline on a Cayley ball.
    Split {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long, default_value_t = 2)]
        words: usize,
        #[arg(long = "L", default_value_t = BALL_DEFAULT_L)]
        l: usize,
        /// Cut file; defaults to the balanced cut.
        #[arg(long)]
        cut: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run the seeded property suites.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only run properties whose name contains this text.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Group whose Cayley ball is the universe.
    #[arg(long, conflicts_with = "graph")]
    group: Option<String>,
    /// Graph file used as the universe.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    radius: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    #[value(name = "T", alias = "t")]
    T,
    #[value(name = "U", alias = "u")]
    U,
}

/// Universe resolved from `--group`, `--graph` or the cut file itself.
struct Context {
    universe: Universe,
    ball: Option<BallView>,
}

impl Context {
    fn resolve(src: &Source, doc: &CutsDoc) -> Result<Context> {
        if let Some(g) = &src.group {
            let ball = oracle(g)?.ball_with_cap(src.radius, ball_cap()?)?;
            return Ok(Context { universe: ball.universe().clone(), ball: Some(ball) });
        }
        let graph = match &src.graph {
            Some(p) => load_graph(p)?,
            None => doc
                .universe()?
                .ok_or_else(|| Error::Parse("no universe: pass --group, --graph, or put a graph in the cut file".into()))?,
        };
        Ok(Context { universe: Universe::finite(graph), ball: None })
    }

    fn is_finite(&self) -> bool {
        self.ball.as_ref().is_none_or(BallView::is_whole_group)
    }

    fn degree(&self, l: Option<usize>) -> usize {
        l.unwrap_or(if self.is_finite() { certified_bound(self.universe.len()) } else { BALL_DEFAULT_L })
    }

    fn mode(&self, l: usize) -> SieveMode {
        if self.is_finite() && l >= certified_bound(self.universe.len()) {
            SieveMode::Certified
        } else {
            SieveMode::Truncated
        }
    }

    fn cuts(&self, doc: &CutsDoc) -> Result<(Vec<Cut>, Vec<String>)> {
        let mut cuts = Vec::new();
        let mut names = Vec::new();
        for (i, c) in doc.entries().iter().enumerate() {
            cuts.push(c.resolve(&self.universe, self.ball.as_ref())?);
            names.push(c.name.clone().unwrap_or_else(|| format!("e{i}")));
        }
        Ok((cuts, names))
    }

    fn ids(&self, c: &Cut) -> Vec<String> {
        c.members().map(|v| self.universe.graph().vertex_id(v).to_string()).collect()
    }
}

fn oracle(arg: &str) -> Result<GroupOracle> {
    GroupOracle::new(load_group(arg)?)
}

fn ball_cap() -> Result<usize> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Parse(format!("{CAP_ENV} must be a number, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BALL_CAP),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).unwrap()
}

/// Input and usage problems exit with 2, failed computations and assertions
/// with 1.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_)
        | Error::Json(_)
        | Error::Parse(_)
        | Error::MalformedGroup(_)
        | Error::DuplicateId(_)
        | Error::DanglingEndpoint(_)
        | Error::UnknownVertex(_)
        | Error::UnknownEdge(_) => 2,
        _ => 1,
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Cayley { group, radius } => {
            let ball = oracle(&group)?.ball_with_cap(radius, ball_cap()?)?;
            writeln!(out, "{}", graph_to_json(ball.graph()))?;
        }
        Command::Measure { src, cut, l, json: as_json } => {
            let doc = CutsDoc::load(&cut)?;
            let ctx = Context::resolve(&src, &doc)?;
            let l = ctx.degree(l);
            let (cuts, names) = ctx.cuts(&doc)?;
            let mut rows = Vec::new();
            for (c, name) in cuts.iter().zip(&names) {
                let s = measure(&ctx.universe, c, l)?;
                if as_json {
                    rows.push(serde_json::json!({"name": name, "members": ctx.ids(c), "series": s}));
                } else {
                    writeln!(out, "{name}: {s}")?;
                }
            }
            if as_json {
                writeln!(out, "{}", json(&rows))?;
            }
        }
        Command::Sieve { src, cuts, l, json: as_json } => {
            let doc = CutsDoc::load(&cuts)?;
            let ctx = Context::resolve(&src, &doc)?;
            let l = ctx.degree(l);
            let (family, _) = ctx.cuts(&doc)?;
            let res = irr_of(&ctx.universe, &family, l, ctx.mode(l))?;
            if as_json {
                let irr: Vec<Vec<String>> = res.irr.iter().map(|c| ctx.ids(c)).collect();
                let mut v = serde_json::to_value(&res)?;
                v["irr"] = serde_json::to_value(irr)?;
                writeln!(out, "{}", json(&v))?;
            } else {
                writeln!(out, "L = {}, mode = {:?}, {} elements", res.degree, res.mode, res.elements.len())?;
                writeln!(out, "class\tseries\tmembers")?;
                for e in &res.elements {
                    let class = match e.class {
                        Class::Irreducible => "irreducible".to_string(),
                        Class::Reducible => "reducible".to_string(),
                        Class::Undecided { degree } => format!("undecided@{degree}"),
                    };
                    writeln!(out, "{class}\t{}\t{{{}}}", e.series, ctx.ids(&e.cut).join(","))?;
                }
                writeln!(
                    out,
                    "irr: {} elements ({} undecided); nested: {}; generates: {}",
                    res.irr.len(),
                    res.undecided(),
                    res.nested_verified,
                    res.generates_verified
                )?;
            }
        }
        Command::Tree { src, cuts, mode, dot, json: as_json } => {
            let doc = CutsDoc::load(&cuts)?;
            let ctx = Context::resolve(&src, &doc)?;
            let (family, names) = ctx.cuts(&doc)?;
            let sys = NestedSystem::verify_named(&ctx.universe, family, names)?;
            let t = match mode {
                Mode::T => build_t(&sys)?,
                Mode::U => build_u(&sys)?,
            };
            if let Some(p) = dot {
                write_file(&p, &t.to_dot())?;
            }
            if as_json {
                writeln!(out, "{}", json(&t.to_json(&sys)))?;
            } else {
                writeln!(
                    out,
                    "{:?}(E): {} vertices, {} edges, tree: {}",
                    t.kind,
                    t.tree.vertex_count(),
                    t.tree.edge_count(),
                    t.tree.is_tree()
                )?;
                for e in t.tree.edges() {
                    writeln!(out, "{}: {} -> {}", e.id, t.tree.vertex_id(e.src), t.tree.vertex_id(e.dst))?;
                }
            }
        }
        Command::Ends { group, rmax, json: as_json } => {
            let p = ends_profile_with_cap(&oracle(&group)?, rmax, ball_cap()?)?;
            if as_json {
                writeln!(out, "{}", json(&p))?;
            } else {
                write!(out, "{p}")?;
            }
        }
        Command::Split { group, radius, words, l, cut, dot, json: as_json } => {
            let ball = oracle(&group)?.ball_with_cap(radius, ball_cap()?)?;
            let a = match cut {
                Some(p) => CutsDoc::load(&p)?.single.resolve(ball.universe(), Some(&ball))?,
                None => balanced_cut(&ball)?,
            };
            let report = stallings_pipeline(&ball, &a, words, l)?;
            if let Some(p) = dot {
                write_file(&p, &report.final_dot())?;
            }
            if as_json {
                writeln!(out, "{}", json(&report))?;
            } else {
                let f = &report.final_tree;
                writeln!(out, "cut: {} elements; orbit of {} cuts, {} selected", report.cut.len(), report.sieve.orbit_cuts, report.sieve.selected)?;
                writeln!(out, "T(E): {} vertices, {} edges, {} edge orbits", report.tree.vertices, report.tree.edges, report.tree.edge_orbits)?;
                writeln!(out, "collapses: {}", report.collapse_log.len())?;
                writeln!(
                    out,
                    "final tree: {} edge orbits, {} vertex orbits, edge stabilizers {:?}, vertex stabilizers {:?}",
                    f.edge_orbits, f.vertex_orbits, f.edge_stabilizer_orders, f.vertex_stabilizer_orders
                )?;
                match &report.outcome {
                    SplitOutcome::Split => writeln!(out, "outcome: split (ball-verified, R = {radius}, W = {words})")?,
                    SplitOutcome::Undetermined { diagnostic } => writeln!(out, "outcome: undetermined: {diagnostic}")?,
                }
            }
        }
        Command::Check { suite, seed, only } => {
            let t = run_suite(&suite, seed, only.as_deref())?;
            out.write_all(t.render().as_bytes())?;
            return Ok(if t.passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}
