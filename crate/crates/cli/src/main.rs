//! `provtop`: command-line front end.
//!
//! Exit status: 0 on success (verdicts are data), 1 on a failed selftest or
//! an internal error, 2 on usage errors, 3 on unreadable or malformed input,
//! 4 when a cap is exceeded.

use std::cmp::Ordering;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use provtop::dmap::{refute_on_ordinal, SymbolicDMap};
use provtop::formula::parse;
use provtop::icard::{decide_word_implication, eval_closed, min_word, split_implication, trichotomy, word_entails};
use provtop::io::{self, SpaceJson};
use provtop::kripke::{gl3_decide, gl_decide, gl_satisfy, KripkeCountermodel, Tree};
use provtop::selftest;
use provtop::space::{validates, Caps, FiniteSpace};
use provtop::{Error, Formula, Ordinal, Word};

#[derive(Parser)]
#[command(name = "provtop", version, about = "Topological semantics workbench for GL, GL.3 and GLP")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Print JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    /// Write a DOT rendering of the resulting tree or countermodel here
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<String>,
    /// Point cap for exhaustive checks
    #[arg(long, global = true, value_name = "N")]
    cap: Option<usize>,
    /// Seed for sampled checks
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    seed: u64,
    /// Number of samples for sampled checks
    #[arg(long, global = true, value_name = "N", default_value_t = 200)]
    samples: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// GL over finite trees
    #[command(subcommand)]
    Gl(GlCmd),
    /// GL.3 over finite chains
    #[command(subcommand)]
    Gl3(Gl3Cmd),
    /// Finite topological spaces (JSON files or inline JSON)
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Finite trees
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Ordinals below epsilon-zero
    #[command(subcommand)]
    Ord(OrdCmd),
    /// d-maps from ordinals onto trees
    #[command(subcommand)]
    Dmap(DmapCmd),
    /// Words evaluated on ordinals
    #[command(subcommand)]
    Icard(IcardCmd),
    /// Run every invariant suite
    Selftest,
}

#[derive(Subcommand)]
enum GlCmd {
    /// Decide provability
    Prove { formula: String },
    /// Decide satisfiability and print a model
    Sat { formula: String },
    /// Print a countermodel, or null if provable
    Countermodel { formula: String },
}

#[derive(Subcommand)]
enum Gl3Cmd {
    /// Decide provability
    Prove { formula: String },
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Report separation, scatteredness, Magari and primality properties
    Classify { space: String },
    /// Print the derived topology
    Plus { space: String },
    /// Glue spaces into isolated points: {"base": space, "plugins": {"i": space}}
    Dsum { spec: String },
    /// Check the GLP-space conditions: {"topologies": [space, ...]}
    Glpcheck { spaces: String },
    /// Truth set under a valuation, or validity when no valuation is given
    Modelcheck { space: String, formula: String, valuation: Option<String> },
}

#[derive(Subcommand)]
enum TreeCmd {
    /// The n-fork
    Fork { n: usize },
    /// Glue trees into leaves: {"base": tree, "plugins": {"leaf": tree}}
    Dsum { spec: String },
    /// DOT rendering
    Export { tree: String },
}

#[derive(Subcommand)]
enum OrdCmd {
    Cmp { a: String, b: String },
    Add { a: String, b: String },
    Ell { a: String },
}

#[derive(Subcommand)]
enum DmapCmd {
    /// Domain and least preimages
    Build { tree: String },
    /// Image of an ordinal
    Apply { tree: String, ordinal: String },
    /// Least preimage of a node
    Preimage { tree: String, node: usize },
    /// Transfer a GL countermodel to an ordinal
    Refute { formula: String },
}

#[derive(Subcommand)]
enum IcardCmd {
    /// Truth of a word (or boolean combination of words) at an ordinal
    Eval { formula: String, ordinal: String },
    /// Least ordinal satisfying a word
    Min { word: String },
    /// Whether A -> B is provable
    Entail { a: String, b: String },
    /// Decide A -> B1 | ... | Bk
    Decide { formula: String },
    /// Which of A -> <0>B, B -> <0>A, A <-> B holds
    Trichotomy { a: String, b: String },
}

enum Failure {
    Input(String),
    Cap(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::CapExceeded { .. } => Failure::Cap(msg),
            Error::Parse(_)
            | Error::PointOutOfRange { .. }
            | Error::NotStrictOrder(_)
            | Error::NotTopology(_)
            | Error::InvalidTree(_)
            | Error::InvalidInput(_)
            | Error::UnboundVariable(_)
            | Error::NotWordCombination(_)
            | Error::NonZeroIndex(_)
            | Error::IndexOutOfRange { .. }
            | Error::CarrierMismatch(..)
            | Error::OutsideDomain(..) => Failure::Input(msg),
            _ => Failure::Other(msg),
        }
    }
}

impl From<provtop::ParseError> for Failure {
    fn from(e: provtop::ParseError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Out = Result<Value, Failure>;

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn read_input(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|e| Failure::Input(format!("cannot read {arg}: {e}")))
}

fn formula(text: &str) -> Result<Formula, Failure> {
    Ok(parse(text)?)
}

fn ordinal(text: &str) -> Result<Ordinal, Failure> {
    Ok(text.parse::<Ordinal>()?)
}

fn word(text: &str) -> Result<Word, Failure> {
    Ok(text.parse::<Word>()?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

fn caps(opts: &Opts) -> Caps {
    let mut caps = Caps::default();
    if let Some(c) = opts.cap {
        caps.single = c;
        caps.double = c;
    }
    caps
}

fn check_cap(opts: &Opts, n: usize) -> Result<(), Failure> {
    let cap = caps(opts).single;
    if n > cap {
        return Err(Error::CapExceeded { what: "points", value: n, cap }.into());
    }
    Ok(())
}

fn load_space(opts: &Opts, arg: &str) -> Result<FiniteSpace, Failure> {
    let space = io::parse_space(&read_input(arg)?)?;
    check_cap(opts, space.n_points())?;
    Ok(space)
}

fn load_tree(arg: &str) -> Result<Tree, Failure> {
    Ok(io::parse_tree(&read_input(arg)?)?)
}

fn write_dot(opts: &Opts, dot: impl FnOnce() -> Result<String, Error>) -> Result<(), Failure> {
    if let Some(path) = &opts.dot {
        let text = dot()?;
        fs::write(path, text).map_err(|e| Failure::Other(format!("cannot write {path}: {e}")))?;
    }
    Ok(())
}

fn countermodel_dot(opts: &Opts, m: Option<&KripkeCountermodel>, phi: &Formula) -> Result<(), Failure> {
    match m {
        Some(m) => write_dot(opts, || m.to_dot(phi)),
        None => Ok(()),
    }
}

fn gl(opts: &Opts, cmd: &GlCmd) -> Out {
    match cmd {
        GlCmd::Prove { formula: f } => {
            let phi = formula(f)?;
            let v = gl_decide(&phi)?;
            countermodel_dot(opts, v.countermodel.as_ref(), &phi)?;
            Ok(to_value(&v))
        }
        GlCmd::Sat { formula: f } => {
            let phi = formula(f)?;
            let m = gl_satisfy(&phi)?;
            countermodel_dot(opts, m.as_ref(), &phi)?;
            Ok(json!({ "satisfiable": m.is_some(), "model": m }))
        }
        GlCmd::Countermodel { formula: f } => {
            let phi = formula(f)?;
            let v = gl_decide(&phi)?;
            countermodel_dot(opts, v.countermodel.as_ref(), &phi)?;
            Ok(to_value(&v.countermodel))
        }
    }
}

fn space(opts: &Opts, cmd: &SpaceCmd) -> Out {
    let caps = caps(opts);
    match cmd {
        SpaceCmd::Classify { space } => Ok(to_value(&load_space(opts, space)?.classify(&caps)?)),
        SpaceCmd::Plus { space } => Ok(to_value(&SpaceJson::from_space(&load_space(opts, space)?.plus_topology()?))),
        SpaceCmd::Dsum { spec } => {
            let (base, plugins) = io::parse_space_dsum(&read_input(spec)?)?;
            let sum = base.dsum(&plugins)?;
            check_cap(opts, sum.space.n_points())?;
            Ok(json!({
                "space": SpaceJson::from_space(&sum.space),
                "projection": sum.projection.assignment,
                "blocks": sum.blocks,
            }))
        }
        SpaceCmd::Glpcheck { spaces } => {
            let tops = io::parse_spaces(&read_input(spaces)?)?;
            for t in &tops {
                check_cap(opts, t.n_points())?;
            }
            let report = FiniteSpace::check_glp_space(&tops, &caps)?;
            let mut v = to_value(&report);
            v["holds"] = json!(report.holds());
            Ok(v)
        }
        SpaceCmd::Modelcheck { space, formula: f, valuation } => {
            let x = load_space(opts, space)?;
            let phi = formula(f)?;
            let tops = [x];
            match valuation {
                Some(v) => {
                    let v = io::parse_valuation(&read_input(v)?)?;
                    Ok(json!({ "truth_set": provtop::space::model_check(&tops, &v, &phi)? }))
                }
                None => {
                    let c = validates(&tops, &phi, &caps)?;
                    Ok(json!({ "valid": c.is_none(), "countermodel": c }))
                }
            }
        }
    }
}

fn tree(opts: &Opts, cmd: &TreeCmd) -> Out {
    let t = match cmd {
        TreeCmd::Fork { n } => {
            check_cap(opts, n + 1)?;
            Tree::fork(*n)?
        }
        TreeCmd::Dsum { spec } => {
            let (base, plugins) = io::parse_tree_dsum(&read_input(spec)?)?;
            base.dsum(&plugins)?
        }
        TreeCmd::Export { tree } => {
            let t = load_tree(tree)?;
            let dot = t.to_dot(&[]);
            write_dot(opts, || Ok(dot.clone()))?;
            return Ok(json!({ "dot": dot }));
        }
    };
    write_dot(opts, || Ok(t.to_dot(&[])))?;
    Ok(to_value(&t))
}

fn ord(cmd: &OrdCmd) -> Out {
    match cmd {
        OrdCmd::Cmp { a, b } => {
            let rel = match ordinal(a)?.cmp(&ordinal(b)?) {
                Ordering::Less => "<",
                Ordering::Equal => "=",
                Ordering::Greater => ">",
            };
            Ok(json!({ "cmp": rel }))
        }
        OrdCmd::Add { a, b } => Ok(json!({ "sum": ordinal(a)?.add(&ordinal(b)?) })),
        OrdCmd::Ell { a } => Ok(json!({ "ell": ordinal(a)?.ell() })),
    }
}

fn dmap(opts: &Opts, cmd: &DmapCmd) -> Out {
    match cmd {
        DmapCmd::Build { tree } => {
            let f = SymbolicDMap::build(&load_tree(tree)?);
            let least = (0..f.tree().n_nodes()).map(|x| f.least_preimage(x)).collect::<Result<Vec<_>, _>>()?;
            write_dot(opts, || f.to_dot())?;
            Ok(json!({ "tree": f.tree(), "dom": f.dom(), "least_preimages": least }))
        }
        DmapCmd::Apply { tree, ordinal: o } => {
            let f = SymbolicDMap::build(&load_tree(tree)?);
            Ok(json!({ "node": f.apply(&ordinal(o)?)? }))
        }
        DmapCmd::Preimage { tree, node } => {
            let f = SymbolicDMap::build(&load_tree(tree)?);
            Ok(json!({ "least": f.least_preimage(*node)? }))
        }
        DmapCmd::Refute { formula: text } => {
            let phi = formula(text)?;
            match refute_on_ordinal(&phi)? {
                None => Ok(json!({ "provable": true })),
                Some(r) => {
                    write_dot(opts, || SymbolicDMap::build(&r.tree).to_dot())?;
                    Ok(to_value(&r))
                }
            }
        }
    }
}

fn icard(cmd: &IcardCmd) -> Out {
    match cmd {
        IcardCmd::Eval { formula: f, ordinal: o } => Ok(json!({ "holds": eval_closed(&formula(f)?, &ordinal(o)?)? })),
        IcardCmd::Min { word: w } => Ok(json!({ "min": min_word(&word(w)?)? })),
        IcardCmd::Entail { a, b } => {
            let a = word(a)?;
            Ok(json!({ "provable": word_entails(&a, &word(b)?)?, "min": min_word(&a)? }))
        }
        IcardCmd::Decide { formula: f } => {
            let (a, bs) = split_implication(&formula(f)?)?;
            Ok(to_value(&decide_word_implication(&a, &bs)?))
        }
        IcardCmd::Trichotomy { a, b } => Ok(json!({ "relation": trichotomy(&word(a)?, &word(b)?)? })),
    }
}

fn dispatch(cli: &Cli) -> Result<(Value, bool), Failure> {
    let opts = &cli.opts;
    let value = match &cli.cmd {
        Cmd::Gl(c) => gl(opts, c)?,
        Cmd::Gl3(Gl3Cmd::Prove { formula: f }) => {
            let phi = formula(f)?;
            let v = gl3_decide(&phi)?;
            countermodel_dot(opts, v.countermodel.as_ref(), &phi)?;
            to_value(&v)
        }
        Cmd::Space(c) => space(opts, c)?,
        Cmd::Tree(c) => tree(opts, c)?,
        Cmd::Ord(c) => ord(c)?,
        Cmd::Dmap(c) => dmap(opts, c)?,
        Cmd::Icard(c) => icard(c)?,
        Cmd::Selftest => {
            let reports = selftest::run(&selftest::Config { seed: opts.seed, samples: opts.samples });
            let passed = reports.iter().all(|r| r.passed());
            return Ok((json!({ "passed": passed, "suites": reports }), passed));
        }
    };
    Ok((value, true))
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.is_object() || (x.is_array() && x.as_array().is_some_and(|a| a.iter().any(|e| e.is_object()))) {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_text(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                out.push_str(&format!("{pad}-\n"));
                render_text(x, indent + 1, out);
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok((value, ok)) => {
            if cli.opts.json {
                println!("{}", serde_json::to_string_pretty(&value).expect("serialisable"));
            } else if matches!(cli.cmd, Cmd::Selftest) {
                for suite in value["suites"].as_array().into_iter().flatten() {
                    let verdict = if suite["failed"] == 0 { "PASS" } else { "FAIL" };
                    println!("{verdict} {} ({} checks, {} failed)", scalar(&suite["name"]), suite["checked"], suite["failed"]);
                    for f in suite["failures"].as_array().into_iter().flatten() {
                        println!("  {}", scalar(f));
                    }
                }
            } else if let Some(dot) = value.get("dot").and_then(Value::as_str) {
                print!("{dot}");
            } else {
                let mut text = String::new();
                render_text(&value, 0, &mut text);
                print!("{text}");
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Input(m) => (3, m),
                Failure::Cap(m) => (4, m),
                Failure::Other(m) => (1, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
