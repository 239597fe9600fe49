//! Subcommands and the exit-code contract.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use incgb::engine::{truncated_egb, EngineConfig, EngineError};
use incgb::order::{validate_order, Order};
use incgb::poly::{Polynomial, ReducerSet};
use incgb::symmetry::{Index, OrbitSpec, RingKind, RingSignature};
use incgb::toric::{compare_with_oracle, compute_kernel_egb, elimination_oracle, ToricError};
use incgb::Rational;
use thiserror::Error;

use crate::syntax::{parse_gens_file, parse_map_file, parse_polynomial, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_WIDTH: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "incgb", version, about = "Equivariant Groebner bases and symmetric toric kernels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equivariant Groebner basis of the kernel of a monomial map.
    Kernel(KernelArgs),
    /// Truncated equivariant Groebner basis of a generator file.
    Egb(EgbArgs),
    /// Normal form of a polynomial modulo the shifts of a generator file.
    Nf(NfArgs),
    /// Checks the order axioms on small monomials.
    ValidateOrder(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct Engine {
    /// Largest truncation width to try.
    #[arg(long, default_value_t = 8)]
    pub max_width: Index,
    /// Worker threads; output does not depend on this.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Print one progress record per width to stderr.
    #[arg(long)]
    pub stats: bool,
}

impl Engine {
    fn config(&self) -> EngineConfig {
        EngineConfig {
            threads: self.threads.max(1),
            progress: self.stats,
            width_cap: self.max_width.max(EngineConfig::default().width_cap),
            ..EngineConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub map: PathBuf,
    /// Cross-check against plain elimination at this truncation width. Repeatable.
    #[arg(long = "check-oracle", value_name = "W")]
    pub check_oracle: Vec<Index>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub engine: Engine,
}

#[derive(Debug, Args)]
pub struct EgbArgs {
    #[arg(long)]
    pub gens: PathBuf,
    #[arg(long, default_value = "grevlex")]
    pub order: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub engine: Engine,
}

#[derive(Debug, Args)]
pub struct NfArgs {
    #[arg(long)]
    pub gens: PathBuf,
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value = "grevlex")]
    pub order: String,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub order: String,
    #[arg(long, default_value_t = 4)]
    pub width: usize,
    #[arg(long, default_value_t = 3)]
    pub deg: u32,
    /// Check on a tuple orbit `y` of this arity instead of `x` rows.
    #[arg(long)]
    pub arity: Option<usize>,
    /// Make the tuple orbit unordered.
    #[arg(long, requires = "arity")]
    pub symmetric: bool,
    /// Number of `x` rows; with `--arity`, builds the graph ring.
    #[arg(long)]
    pub rows: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Width(String),
    #[error("{0}")]
    Oracle(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Failed(_) => EXIT_FAILED,
            CliError::Parse { .. } | CliError::Invalid(_) => EXIT_PARSE,
            CliError::Width(_) => EXIT_WIDTH,
            CliError::Oracle(_) => EXIT_ORACLE,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_err(path: &Path) -> impl FnOnce(ParseError) -> CliError + '_ {
    move |source| CliError::Parse {
        path: path.display().to_string(),
        source,
    }
}

fn emit(lines: &[String], output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let mut text = String::new();
    for l in lines {
        text.push_str(l);
        text.push('\n');
    }
    match output {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn order_for(name: &str, ring: Arc<RingSignature>) -> Result<Order, CliError> {
    Order::from_name(name, ring).map_err(|e| CliError::Invalid(e.to_string()))
}

fn toric_err(e: ToricError) -> CliError {
    match e {
        ToricError::MaxWidthReached { .. } | ToricError::WidthCapExceeded { .. } => CliError::Width(e.to_string()),
        other => CliError::Invalid(other.to_string()),
    }
}

fn kernel(args: &KernelArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = parse_map_file(&read(&args.map)?).map_err(parse_err(&args.map))?;
    let result = compute_kernel_egb::<Rational>(&spec, args.engine.max_width, &args.engine.config()).map_err(toric_err)?;
    let lines: Vec<String> = result
        .basis
        .iter()
        .map(|g| g.render(&spec.domain, &result.order))
        .collect();
    emit(&lines, args.output.as_deref(), out)?;
    if args.engine.stats {
        let _ = writeln!(
            err,
            "kernel: width={} basis={} cover_basis={}",
            result.width,
            result.basis.len(),
            result.cover_basis.len()
        );
    }
    if let Some(g) = result.basis.iter().find(|g| !spec.apply_poly(g).is_zero()) {
        return Err(CliError::Oracle(format!(
            "not in the kernel: {}",
            g.render(&spec.domain, &result.order)
        )));
    }
    let cover = result.cover_order.ring().clone();
    for &w in &args.check_oracle {
        let oracle = elimination_oracle::<Rational>(&spec, w).map_err(toric_err)?;
        let cmp = compare_with_oracle(&result, &oracle, w);
        let _ = writeln!(
            err,
            "oracle width {w}: {} elements, {}",
            oracle.len(),
            if cmp.agrees() { "agrees" } else { "MISMATCH" }
        );
        if !cmp.agrees() {
            let show = |p: &Polynomial<Rational>| p.render(&cover, &result.cover_order);
            for g in &cmp.unreduced {
                let _ = writeln!(err, "  not reduced to zero: {}", show(g));
            }
            for m in &cmp.undivided {
                let _ = writeln!(err, "  lead not divisible: {}", cover.fmt_monomial(m));
            }
            for g in &cmp.outside {
                let _ = writeln!(err, "  outside the truncation: {}", show(g));
            }
            return Err(CliError::Oracle(format!("oracle mismatch at width {w}")));
        }
    }
    Ok(())
}

fn egb(args: &EgbArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = parse_gens_file::<Rational>(&read(&args.gens)?).map_err(parse_err(&args.gens))?;
    let order = order_for(&args.order, file.ring.clone())?;
    match truncated_egb(&file.gens, &order, args.engine.max_width, &args.engine.config()) {
        Ok((basis, _)) => {
            let lines: Vec<String> = basis.iter().map(|g| g.render(&file.ring, &order)).collect();
            emit(&lines, args.output.as_deref(), out)
        }
        Err(e @ (EngineError::MaxWidthReached { .. } | EngineError::WidthCapExceeded { .. })) => {
            Err(CliError::Width(e.to_string()))
        }
        Err(e) => Err(CliError::Invalid(e.to_string())),
    }
}

fn nf(args: &NfArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = parse_gens_file::<Rational>(&read(&args.gens)?).map_err(parse_err(&args.gens))?;
    let order = order_for(&args.order, file.ring.clone())?;
    let f: Polynomial<Rational> =
        parse_polynomial(&args.poly, &file.ring).map_err(|source| CliError::Parse {
            path: "--poly".into(),
            source,
        })?;
    let gens: Vec<Polynomial<Rational>> = file.gens.into_iter().filter(|g| !g.is_zero()).collect();
    let r = ReducerSet::new(&gens, &order).normal_form(&f, &order, None);
    emit(&[r.render(&file.ring, &order)], None, out)
}

fn validate(args: &ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let bad = |e: incgb::symmetry::SymmetryError| CliError::Invalid(e.to_string());
    let ring = match (args.arity, args.rows) {
        (None, rows) => RingSignature::x_ring(rows.unwrap_or(1)),
        (Some(k), rows) => {
            let o = if args.symmetric {
                OrbitSpec::symmetric("y", k)
            } else {
                OrbitSpec::tuple("y", k)
            };
            let y = RingSignature::new(vec![o], RingKind::Y).map_err(bad)?;
            match rows {
                Some(r) => RingSignature::product(&y, &RingSignature::x_ring(r)),
                None => y,
            }
        }
    };
    let ring = Arc::new(ring);
    let order = order_for(&args.order, ring.clone())?;
    let report = validate_order(&ring, &order, args.width, args.deg);
    let _ = writeln!(
        out,
        "{}: {} monomials, {} increasing maps",
        args.order, report.monomials, report.inc_maps
    );
    match report.counterexample {
        None => {
            let _ = writeln!(out, "PASS");
            Ok(())
        }
        Some(c) => Err(CliError::Failed(format!("FAIL: {c:?}"))),
    }
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_PARSE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let res = match &cli.command {
        Command::Kernel(a) => kernel(a, out, err),
        Command::Egb(a) => egb(a, out),
        Command::Nf(a) => nf(a, out),
        Command::ValidateOrder(a) => validate(a, out),
    };
    match res {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
