//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::counting::{polydiag_strata, strata_by_codim, theta_schedule, StrataTable};
use crate::error::{Error, Result};
use crate::hodge::HodgeContext;
use crate::limits::{classify, profile_from_curves, ApproachCurves, ApproachProfile};
use crate::partitions::{enumerate, IntegerPartition};
use crate::polyring::Var;
use crate::strata::{bundle_description, Stratum};
use crate::trees::{chain_to_tree, enumerate_chains, enumerate_nests, eta_fiber, Chain, RootedTree};

/// Largest `n` that enumeration commands accept without `--limit`.
const UNLIMITED_MAX_N: usize = 7;

#[derive(Debug, Parser)]
#[command(
    name = "polydiag",
    version,
    about = "Strata, leveled trees and Hodge polynomials of polydiagonal compactifications"
)]
struct Cli {
    /// Output format; `dot` applies only to tree-producing commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VarArg {
    U,
    T,
}

impl From<VarArg> for Var {
    fn from(v: VarArg) -> Var {
        match v {
            VarArg::U => Var::U,
            VarArg::T => Var::T,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Strata counts.
    #[command(subcommand)]
    Count(CountCmd),
    /// Stream partitions, chains, or nests of [n].
    Enumerate(EnumerateArgs),
    /// Hodge polynomials.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Every stratum of X<n> with its bundle structure and polynomial.
    Strata(StrataArgs),
    /// Exact identity checks.
    #[command(subcommand)]
    Check(CheckCmd),
    /// The blowdown to the Fulton-MacPherson space.
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Limiting stratum of a colliding family.
    Classify(ClassifyArgs),
    /// Leveled tree of a chain.
    Tree(TreeArgs),
}

#[derive(Debug, Subcommand)]
enum CountCmd {
    /// Strata of X[n] and X<n> for n = 2..=max-n.
    Table {
        #[arg(long)]
        max_n: usize,
    },
    /// Strata of X<n>, optionally only those of one codimension.
    Strata {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        codim: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Enumerable {
    Chains,
    Nests,
    Partitions,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    what: Enumerable,
    #[arg(long)]
    n: usize,
    /// Stop after this many items; required above n = 7.
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum PolyCmd {
    /// U^m_n, the Hodge polynomial of X<n> in terms of x = e(X).
    U {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = VarArg::U)]
        var: VarArg,
        /// Use the nonrecursive formula.
        #[arg(long)]
        closed_form: bool,
    },
    /// Hodge polynomial of the brick M^m_lambda.
    Brick {
        #[arg(long)]
        m: usize,
        /// Comma-separated parts, e.g. 2,1,1.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        open: bool,
        #[arg(long, value_enum, default_value_t = VarArg::U)]
        var: VarArg,
    },
    /// Hodge polynomial of the stratum of a chain (JSON file).
    Stratum {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        open: bool,
        #[arg(long, value_enum, default_value_t = VarArg::U)]
        var: VarArg,
    },
}

#[derive(Debug, Args)]
struct StrataArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    open: bool,
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    /// Open strata polynomials sum to U^m_n.
    Consistency {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
enum ThetaCmd {
    /// Blowup centers, stage by stage.
    Schedule {
        #[arg(long)]
        n: usize,
    },
    /// Leveled trees over a rooted tree (JSON file).
    Fiber {
        #[arg(long)]
        tree: PathBuf,
        /// Print every leveled tree, not just the count.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "input")]
struct ClassifyInput {
    /// Exponent matrix (JSON file).
    #[arg(long, group = "input")]
    profile: Option<PathBuf>,
    /// Polynomial approach curves (JSON file).
    #[arg(long, group = "input")]
    curves: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: ClassifyInput,
    /// Print the tree as DOT.
    #[arg(long)]
    dot: bool,
}

#[derive(Debug, Args)]
struct TreeArgs {
    #[arg(long)]
    chain: PathBuf,
    #[arg(long)]
    dot: bool,
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit code: 0 success, 1 bad input, 2 a failed exact identity.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "error[usage]: {first}");
            return 1;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let line = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error[{}]: {line}", e.kind());
            if e.is_identity_failure() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let fmt = cli.format;
    match &cli.command {
        Command::Count(CountCmd::Table { max_n }) => {
            no_dot(fmt)?;
            let table = StrataTable::new(*max_n)?;
            match fmt {
                Format::Json => emit_json(out, &table),
                Format::Csv => Ok(write!(out, "{}", table.to_csv())?),
                _ => Ok(write!(out, "{}", table.to_text())?),
            }
        }
        Command::Count(CountCmd::Strata { n, codim }) => {
            no_dot(fmt)?;
            let count = match codim {
                Some(k) => strata_by_codim(*n, *k)?,
                None => polydiag_strata(*n)?,
            };
            match fmt {
                Format::Json => emit_json(
                    out,
                    &json!({ "n": n, "codim": codim, "count": count.to_string() }),
                ),
                Format::Csv => {
                    let codim = codim.map(|k| k.to_string()).unwrap_or_default();
                    Ok(write!(out, "n,codim,count\n{n},{codim},{count}\n")?)
                }
                _ => Ok(writeln!(out, "{count}")?),
            }
        }
        Command::Enumerate(args) => enumerate_cmd(args, fmt, out),
        Command::Poly(cmd) => poly_cmd(cmd, fmt, out, err),
        Command::Strata(args) => strata_cmd(args, fmt, out),
        Command::Check(CheckCmd::Consistency { m, n }) => {
            no_dot(fmt)?;
            let report = HodgeContext::new(*m)?.consistency_check(*n)?;
            match fmt {
                Format::Json => emit_json(out, &report)?,
                Format::Csv => {
                    writeln!(out, "x_power,u_power,expected,actual")?;
                    for d in &report.diff {
                        writeln!(out, "{},{},{},{}", d.x_power, d.u_power, d.expected, d.actual)?;
                    }
                }
                _ => {
                    let verdict = if report.ok { "ok" } else { "FAILED" };
                    writeln!(out, "{verdict}: m={m} n={n}, {} chains", report.chains)?;
                    for d in &report.diff {
                        writeln!(
                            out,
                            "  x^{} u^{}: expected {}, got {}",
                            d.x_power, d.u_power, d.expected, d.actual
                        )?;
                    }
                }
            }
            if report.ok {
                Ok(())
            } else {
                Err(Error::Identity(format!(
                    "open strata of X<{n}> (m={m}) do not sum to U^m_n at {} coefficient(s)",
                    report.diff.len()
                )))
            }
        }
        Command::Theta(ThetaCmd::Schedule { n }) => {
            no_dot(fmt)?;
            if *n < 2 {
                return Err(Error::validation("n", "must be at least 2"));
            }
            let stages = theta_schedule(*n);
            match fmt {
                Format::Json => emit_json(out, &stages)?,
                Format::Csv => {
                    writeln!(out, "stage,block_sizes,count")?;
                    for s in &stages {
                        for g in &s.groups {
                            writeln!(out, "{},\"{}\",{}", s.stage, g.block_sizes, g.count)?;
                        }
                    }
                }
                _ => {
                    if stages.is_empty() {
                        writeln!(out, "no blowups: X<{n}> = X[{n}]")?;
                    }
                    for s in &stages {
                        let groups: Vec<String> = s
                            .groups
                            .iter()
                            .map(|g| format!("{} x{}", g.block_sizes, g.count))
                            .collect();
                        writeln!(out, "stage {}: {} (total {})", s.stage, groups.join(", "), s.total())?;
                    }
                }
            }
            Ok(())
        }
        Command::Theta(ThetaCmd::Fiber { tree, list }) => {
            no_dot(fmt)?;
            let tree: RootedTree = read_json(tree, "tree")?;
            if tree.labels().len() >= 64 {
                return Err(Error::validation("tree", "at most 63 internal vertices are supported"));
            }
            let fiber = eta_fiber(&tree, *list);
            match fmt {
                Format::Json => emit_json(
                    out,
                    &json!({ "count": fiber.count.to_string(), "assignments": fiber.assignments }),
                ),
                Format::Csv => {
                    writeln!(out, "leveled_tree")?;
                    for t in fiber.assignments.iter().flatten() {
                        writeln!(out, "\"{t}\"")?;
                    }
                    Ok(())
                }
                _ => {
                    writeln!(out, "{}", fiber.count)?;
                    for t in fiber.assignments.iter().flatten() {
                        writeln!(out, "{t}")?;
                    }
                    Ok(())
                }
            }
        }
        Command::Classify(args) => {
            if fmt == Format::Csv {
                return Err(Error::validation("format", "csv is not available for classify"));
            }
            let profile = match (&args.input.profile, &args.input.curves) {
                (Some(p), _) => read_json::<ApproachProfile>(p, "profile")?,
                (None, Some(c)) => profile_from_curves(&read_json::<ApproachCurves>(c, "curves")?)?,
                (None, None) => unreachable!("clap enforces one input"),
            };
            let c = classify(&profile)?;
            if args.dot || fmt == Format::Dot {
                return Ok(write!(out, "{}", c.tree.to_dot())?);
            }
            match fmt {
                Format::Json => emit_json(
                    out,
                    &json!({ "profile": profile, "chain": c.chain, "tree": c.tree, "nest": c.nest }),
                ),
                _ => {
                    writeln!(out, "chain: {}", c.chain)?;
                    writeln!(out, "tree:  {}", c.tree)?;
                    writeln!(out, "nest:  {}", c.nest)?;
                    Ok(())
                }
            }
        }
        Command::Tree(args) => {
            let chain: Chain = read_json(&args.chain, "chain")?;
            let tree = chain_to_tree(&chain);
            if args.dot || fmt == Format::Dot {
                return Ok(write!(out, "{}", tree.to_dot())?);
            }
            match fmt {
                Format::Json => emit_json(out, &tree),
                Format::Csv => Err(Error::validation("format", "csv is not available for tree")),
                _ => Ok(writeln!(out, "{tree}")?),
            }
        }
    }
}

fn no_dot(fmt: Format) -> Result<()> {
    if fmt == Format::Dot {
        return Err(Error::validation("format", "dot is only available for tree output"));
    }
    Ok(())
}

fn emit_json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, field: &str) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::validation(field, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::validation(field, format!("{}: {e}", path.display())))
}

fn check_limit(n: usize, limit: Option<usize>) -> Result<usize> {
    match limit {
        Some(l) => Ok(l),
        None if n > UNLIMITED_MAX_N => Err(Error::validation(
            "limit",
            format!("required for n > {UNLIMITED_MAX_N}"),
        )),
        None => Ok(usize::MAX),
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes items one at a time so large enumerations never sit in memory.
struct Stream<'a> {
    out: &'a mut dyn Write,
    fmt: Format,
    count: usize,
}

impl<'a> Stream<'a> {
    fn start(out: &'a mut dyn Write, fmt: Format, csv_header: &str) -> Result<Self> {
        match fmt {
            Format::Json => write!(out, "[")?,
            Format::Csv => writeln!(out, "{csv_header}")?,
            _ => {}
        }
        Ok(Stream { out, fmt, count: 0 })
    }

    fn item<T: Serialize>(&mut self, value: &T, text: &str, csv: &str) -> Result<()> {
        match self.fmt {
            Format::Json => {
                if self.count > 0 {
                    write!(self.out, ",")?;
                }
                write!(self.out, "\n  ")?;
                serde_json::to_writer(&mut *self.out, value)?;
            }
            Format::Csv => writeln!(self.out, "{csv}")?,
            _ => writeln!(self.out, "{text}")?,
        }
        self.count += 1;
        Ok(())
    }

    fn finish(self) -> Result<()> {
        if self.fmt == Format::Json {
            let sep = if self.count > 0 { "\n" } else { "" };
            writeln!(self.out, "{sep}]")?;
        }
        Ok(())
    }
}

fn enumerate_cmd(args: &EnumerateArgs, fmt: Format, out: &mut dyn Write) -> Result<()> {
    no_dot(fmt)?;
    let limit = check_limit(args.n, args.limit)?;
    match args.what {
        Enumerable::Partitions => {
            let mut s = Stream::start(out, fmt, "rank,partition")?;
            for p in enumerate(args.n, None)?.take(limit) {
                let text = p.to_string();
                s.item(&p, &text, &format!("{},{}", p.rank(), csv_quote(&text)))?;
            }
            s.finish()
        }
        Enumerable::Chains => {
            let mut s = Stream::start(out, fmt, "length,chain")?;
            for c in enumerate_chains(args.n, None)?.take(limit) {
                let text = c.to_string();
                s.item(&c, &text, &format!("{},{}", c.len(), csv_quote(&text)))?;
            }
            s.finish()
        }
        Enumerable::Nests => {
            let mut s = Stream::start(out, fmt, "size,nest")?;
            for nest in enumerate_nests(args.n)?.take(limit) {
                let text = nest.to_string();
                s.item(&nest, &text, &format!("{},{}", nest.len(), csv_quote(&text)))?;
            }
            s.finish()
        }
    }
}

fn strata_cmd(args: &StrataArgs, fmt: Format, out: &mut dyn Write) -> Result<()> {
    no_dot(fmt)?;
    let limit = check_limit(args.n, args.limit)?;
    let ctx = HodgeContext::new(args.m)?;
    let mut s = Stream::start(out, fmt, "chain,codim,bundle,polynomial")?;
    for chain in enumerate_chains(args.n, None)?.take(limit) {
        let bundle = bundle_description(&chain, args.m, args.open)?;
        let poly = ctx.stratum_poly(&chain, args.open)?;
        let stratum = Stratum::new(chain, args.m)?;
        let text = format!("{}  codim {}  {}  {}", stratum.chain, stratum.codim, bundle, poly);
        let csv = [
            csv_quote(&stratum.chain.to_string()),
            stratum.codim.to_string(),
            csv_quote(&bundle.to_string()),
            csv_quote(&poly.to_string()),
        ]
        .join(",");
        let value = json!({
            "chain": stratum.chain,
            "codim": stratum.codim,
            "bundle": bundle,
            "polynomial": poly,
            "text": poly.to_string(),
        });
        s.item(&value, &text, &csv)?;
    }
    s.finish()
}

fn poly_cmd(cmd: &PolyCmd, fmt: Format, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    no_dot(fmt)?;
    if fmt == Format::Csv {
        return Err(Error::validation("format", "csv is not available for polynomials"));
    }
    match cmd {
        PolyCmd::U { m, n, var, closed_form } => {
            let ctx = HodgeContext::new(*m)?;
            let p = if *closed_form { ctx.u_poly_closed(*n)? } else { ctx.u_poly(*n)? };
            let text = p.render((*var).into());
            emit_poly(out, fmt, &text, json!({ "m": m, "n": n, "coefficients": p, "text": text }))
        }
        PolyCmd::Brick { m, lambda, open, var } => {
            let (shape, reordered) = IntegerPartition::parse_list(lambda)?;
            if reordered {
                writeln!(err, "warning: lambda reordered to {shape}")?;
            }
            let ctx = HodgeContext::new(*m)?;
            let p = if *open { ctx.open_brick_poly(&shape)? } else { ctx.brick_poly(&shape)? };
            let text = p.render((*var).into());
            emit_poly(
                out,
                fmt,
                &text,
                json!({ "m": m, "lambda": shape, "open": open, "coefficients": p, "text": text }),
            )
        }
        PolyCmd::Stratum { m, chain, open, var } => {
            let chain: Chain = read_json(chain, "chain")?;
            let p = HodgeContext::new(*m)?.stratum_poly(&chain, *open)?;
            let text = p.render((*var).into());
            emit_poly(
                out,
                fmt,
                &text,
                json!({ "m": m, "chain": chain, "open": open, "coefficients": p, "text": text }),
            )
        }
    }
}

fn emit_poly(out: &mut dyn Write, fmt: Format, text: &str, value: serde_json::Value) -> Result<()> {
    if fmt == Format::Json {
        emit_json(out, &value)
    } else {
        Ok(writeln!(out, "{text}")?)
    }
}
