//! `rewb`: parse, classify and evaluate regular expressions with binding,
//! and emit the reduction gadgets.
//!
//! Exit codes: 0 success, 1 domain or validation error, 2 usage error,
//! 3 resource budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rewb::automata::{automaton_size, register_nfa};
use rewb::eval::{candidate_valuations, eval_oracle, print_pairs, DataGraph, PairSet};
use rewb::gadgets::{
    eval_expr, exists_compose, forall_compose, formula_graph, parse_nnf, pcp_delta, pcp_encode, pcp_encode_unchecked,
    pcp_mutate, sat_reduction, wqsat_reduction, GadgetOutput, PcpInstance, PcpMutation, WqsatInstance,
};
use rewb::selftest::selftest;
use rewb::witness::{mismatch_samples, r_expr, u_word};
use rewb::{
    alpha_rename, classify, eval_flat, eval_stratified, member, member_any, parse_expr, parse_graph, parse_valuation,
    parse_word, print_expr, print_graph, print_word, witness_path, Condition, Error, Rewb, Valuation,
};

#[derive(Parser)]
#[command(name = "rewb", version, about = "Regular expressions with binding over data words and data graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and print it canonically
    Parse {
        /// Expression text, or `@FILE`
        expr: String,
        /// Print the syntax tree
        #[arg(long)]
        dump_ast: bool,
        /// Print the register automaton
        #[arg(long)]
        dump_automaton: bool,
        /// Alpha-rename binders first
        #[arg(long)]
        rename: bool,
    },
    /// Print the F-level, E-level and automaton size
    Classify {
        /// Expression text, or `@FILE`
        expr: String,
    },
    /// Decide membership of a data word
    Member {
        #[arg(long)]
        expr: String,
        /// Word as `letter:value` tokens, or `@FILE`
        #[arg(long)]
        word: String,
        /// Valuation as `x=1,y=2`
        #[arg(long)]
        val: Option<String>,
        /// Existentially quantify the free variables
        #[arg(long)]
        any: bool,
    },
    /// Evaluate a path query on a data graph
    Eval(EvalArgs),
    /// Print witness expressions and words of the hierarchy
    Witness {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build a reduction gadget
    #[command(subcommand)]
    Gadget(Gadget),
    /// Check that the three engines agree on random instances
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    expr: String,
    /// Graph file
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    val: Option<String>,
    #[arg(long)]
    any: bool,
    #[arg(long, value_enum, default_value_t = Engine::Flat)]
    engine: Engine,
    /// Path length bound for the oracle engine
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long, requires = "to")]
    from: Option<String>,
    #[arg(long, requires = "from")]
    to: Option<String>,
    /// Print a shortest witness path between --from and --to
    #[arg(long, requires = "from")]
    witness: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Flat,
    Stratified,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    R,
    U,
    Mismatch,
}

#[derive(Args)]
struct Outputs {
    #[arg(long)]
    out_graph: PathBuf,
    #[arg(long)]
    out_expr: PathBuf,
}

#[derive(Subcommand)]
enum Gadget {
    /// Formula graph with the evaluation query
    Formula {
        #[arg(long)]
        formula: String,
        /// Comma-separated atoms
        #[arg(long)]
        atoms: String,
        /// Number of query variables (default: number of atoms)
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        out: Outputs,
    },
    /// Satisfiability as source-sink connectivity
    Sat {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        atoms: String,
        #[command(flatten)]
        out: Outputs,
    },
    /// Existential composition over an inner graph and expression
    Exists(Compose),
    /// Universal composition over an inner graph and expression
    Forall(Compose),
    /// Weighted quantified satisfiability
    Wqsat {
        /// Blocks such as `E1:pr1,pr2;A1:pr3,pr4`
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        out: Outputs,
    },
    /// The PCP expression
    PcpDelta {
        /// Pairs such as `ab/a,c/bc`
        #[arg(long)]
        pairs: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        out_expr: PathBuf,
    },
    /// Encode an index sequence as a data word
    PcpEncode {
        #[arg(long)]
        pairs: String,
        /// Comma-separated 1-based pair indices
        #[arg(long)]
        seq: String,
        #[arg(long)]
        i: usize,
        /// Allow sequences that are not solutions
        #[arg(long)]
        allow_non_solution: bool,
        /// Break one property of the encoding
        #[arg(long)]
        mutate: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Compose {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    atoms: String,
    /// Inner graph file (with source and sink)
    #[arg(long)]
    graph: PathBuf,
    /// Inner expression, or `@FILE`
    #[arg(long)]
    expr: String,
    #[command(flatten)]
    out: Outputs,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Budget(_)) { 3 } else { 1 };
        Failure { code, message: e.to_string() }
    }
}

impl From<rewb::SourceError> for Failure {
    fn from(e: rewb::SourceError) -> Self {
        Error::from(e).into()
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(format!("cannot write {}: {e}", path.display())))
}

/// Inline text, or the contents of FILE for `@FILE`.
fn text_arg(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => read(Path::new(path)),
        None => Ok(arg.to_owned()),
    }
}

fn expr_arg(arg: &str) -> Result<Rewb, Failure> {
    Ok(parse_expr(text_arg(arg)?.trim())?)
}

fn val_arg(arg: &Option<String>) -> Result<Valuation, Failure> {
    Ok(parse_valuation(arg.as_deref().unwrap_or(""))?)
}

fn list_arg(arg: &str) -> Vec<String> {
    arg.split(',').map(|s| s.trim().to_owned()).filter(|s| !s.is_empty()).collect()
}

fn dump_ast(e: &Rewb, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let line = match e {
        Rewb::Eps => "Eps".to_owned(),
        Rewb::Atom(a) => format!("Atom {a}"),
        Rewb::Test(a, c) => format!("Test {a} [{}]", cond_text(c)),
        Rewb::Union(..) => "Union".to_owned(),
        Rewb::Concat(..) => "Concat".to_owned(),
        Rewb::Star(_) => "Star".to_owned(),
        Rewb::Bind(a, x, _) => format!("Bind {a} {x}"),
    };
    out.push_str(&format!("{pad}{line}\n"));
    for c in e.children() {
        dump_ast(c, depth + 1, out);
    }
}

fn cond_text(c: &Condition) -> String {
    rewb::syntax::print_condition(c)
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Parse { expr, dump_ast: ast, dump_automaton, rename } => {
            let mut e = expr_arg(&expr)?;
            if rename {
                e = alpha_rename(&e);
            }
            let mut out = format!("{}\n", print_expr(&e));
            if ast {
                dump_ast(&e, 0, &mut out);
            }
            if dump_automaton {
                out.push_str(&register_nfa(&e)?.dump());
            }
            Ok(out)
        }
        Command::Classify { expr } => {
            let e = expr_arg(&expr)?;
            Ok(format!("{}  aut-size: {}\n", classify(&e), automaton_size(&e)))
        }
        Command::Member { expr, word, val, any } => {
            let e = expr_arg(&expr)?;
            let w = parse_word(&text_arg(&word)?)?;
            let result = if any {
                if val.is_some() {
                    return Err(Failure { code: 2, message: "--val and --any cannot be combined".into() });
                }
                member_any(&e, &w)?
            } else {
                member(&e, &w, &val_arg(&val)?)?
            };
            Ok(format!("{result}\n"))
        }
        Command::Eval(args) => eval(args),
        Command::Witness { family, i, n, count, seed } => Ok(match family {
            Family::R => format!("{}\n", print_expr(&r_expr(i)?)),
            Family::U => format!("{}\n", print_word(&u_word(i, n)?)),
            Family::Mismatch => {
                mismatch_samples(i, n, count, seed)?.iter().map(|w| format!("{}\n", print_word(w))).collect()
            }
        }),
        Command::Gadget(g) => gadget(g),
        Command::Selftest { seed, cases } => {
            let report = selftest(seed, cases);
            match report.disagreement {
                None => Ok(format!("{report}\n")),
                Some(d) => Err(fail(format!("engines disagree\n{d}"))),
            }
        }
    }
}

fn eval(args: EvalArgs) -> Result<String, Failure> {
    let e = expr_arg(&args.expr)?;
    let g = parse_graph(&read(&args.graph)?)?;
    if args.max_len.is_some() && !matches!(args.engine, Engine::Oracle) {
        return Err(Failure { code: 2, message: "--max-len only applies to --engine oracle".into() });
    }
    let nus = if args.any {
        if args.val.is_some() {
            return Err(Failure { code: 2, message: "--val and --any cannot be combined".into() });
        }
        candidate_valuations(&e, g.values())
    } else {
        vec![val_arg(&args.val)?]
    };
    let ends = match (&args.from, &args.to) {
        (Some(u), Some(v)) => Some((g.node(u)?, g.node(v)?)),
        _ => None,
    };
    if args.witness {
        let (u, v) = ends.expect("clap enforces --from/--to");
        for nu in &nus {
            if let Some(path) = witness_path(&e, &g, nu, &u, &v)? {
                return Ok(path.iter().map(|edge| format!("{edge}\n")).collect());
            }
        }
        return Ok("none\n".into());
    }
    let mut pairs = PairSet::new();
    for nu in &nus {
        pairs.extend(run_engine(args.engine, &e, &g, nu, args.max_len)?);
    }
    Ok(match ends {
        Some(pair) => format!("{}\n", pairs.contains(&pair)),
        None => print_pairs(&pairs),
    })
}

fn run_engine(engine: Engine, e: &Rewb, g: &DataGraph, nu: &Valuation, max_len: Option<usize>) -> Result<PairSet, Error> {
    match engine {
        Engine::Flat => eval_flat(e, g, nu),
        Engine::Stratified => eval_stratified(e, g, nu),
        Engine::Oracle => eval_oracle(e, g, nu, max_len),
    }
}

fn emit(out: GadgetOutput, files: &Outputs) -> Result<String, Failure> {
    write(&files.out_graph, &print_graph(&out.graph))?;
    write(&files.out_expr, &format!("{}\n", print_expr(&out.expr)))?;
    Ok(format!("{}\n", out.manifest()))
}

fn gadget(g: Gadget) -> Result<String, Failure> {
    match g {
        Gadget::Formula { formula, atoms, k, out } => {
            let atoms = list_arg(&atoms);
            let graph = formula_graph(&parse_nnf(&formula)?, &atoms)?;
            let expr = eval_expr(k.unwrap_or(atoms.len()))?;
            emit(GadgetOutput::new(graph, expr)?, &out)
        }
        Gadget::Sat { formula, atoms, out } => emit(sat_reduction(&parse_nnf(&formula)?, &list_arg(&atoms))?, &out),
        Gadget::Exists(c) => {
            let (graph, expr) = (parse_graph(&read(&c.graph)?)?, expr_arg(&c.expr)?);
            emit(exists_compose(c.k, &list_arg(&c.atoms), &graph, &expr)?, &c.out)
        }
        Gadget::Forall(c) => {
            let (graph, expr) = (parse_graph(&read(&c.graph)?)?, expr_arg(&c.expr)?);
            emit(forall_compose(c.k, &list_arg(&c.atoms), &graph, &expr)?, &c.out)
        }
        Gadget::Wqsat { blocks, formula, out } => emit(wqsat_reduction(&WqsatInstance::parse(&formula, &blocks)?)?, &out),
        Gadget::PcpDelta { pairs, i, out_expr } => {
            let delta = pcp_delta(&PcpInstance::parse(&pairs)?, i)?;
            write(&out_expr, &format!("{}\n", print_expr(&delta)))?;
            let l = classify(&delta);
            Ok(format!("expr-size {} / {l}\n", delta.size()))
        }
        Gadget::PcpEncode { pairs, seq, i, allow_non_solution, mutate, seed } => {
            let inst = PcpInstance::parse(&pairs)?;
            let seq = list_arg(&seq)
                .iter()
                .map(|s| s.parse::<usize>().map_err(|_| fail(format!("bad pair index `{s}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let mut w = if allow_non_solution { pcp_encode_unchecked(&inst, &seq, i)? } else { pcp_encode(&inst, &seq, i)? };
            if let Some(kind) = mutate {
                w = pcp_mutate(&w, kind.parse::<PcpMutation>()?, seed)?;
            }
            Ok(format!("{}\n", print_word(&w)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message.trim_end());
            ExitCode::from(f.code)
        }
    }
}
