//! The `bdcodes` command-line driver.
//!
//! Exit codes: 0 success or pass, 1 other failure, 2 usage error,
//! 3 search not found, 4 verification failed, 5 resource guard.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bindihedral::{image_order, Irrep};
use crate::dickemap::{
    bootstrap, multiqubit_kl_check, phase_distance, transversal_action, Labeling, MultiqubitCode,
    TransversalCertificate, VerifyMode,
};
use crate::families::{atlas, code1, code2, code3_irrep, family_d3, CONJECTURED_FROM_D};
use crate::format::CodeJson;
use crate::klengine::{count_conditions, count_conditions_closed, kl_check_full, KLReport};
use crate::searcher::{search_code_escalating, SearchConfig, SearchResult};
use crate::{Error, HalfInt, Result, DEFAULT_TOLERANCE};

/// Environment variable fixing the worker thread count.
pub const THREADS_ENV: &str = "BDCODES_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;
pub const EXIT_RESOURCE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "bdcodes", version, about = "Binary-dihedral covariant spin codes and their multiqubit images")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count the reduced Knill-Laflamme conditions, by summation and in closed form.
    Count(CountArgs),
    /// Emit a code from one of the closed-form or predicted families.
    Family(FamilyArgs),
    /// Search for a covariant code at the predicted spin.
    Search(SearchArgs),
    /// Check the Knill-Laflamme conditions of a code JSON file.
    Verify(VerifyArgs),
    /// Tabulate predicted code lengths.
    Atlas(AtlasArgs),
    /// Certify the transversal logical action of the code's group.
    Gates(GatesArgs),
}

#[derive(Debug, Args)]
pub struct IrrepArgs {
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub a: u32,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 256)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iterations: usize,
    /// Extra lattice spins to try after the predicted one.
    #[arg(long, default_value_t = 1)]
    pub escalate: u32,
}

impl SolverArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            restarts: self.restarts,
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            rng_seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub irrep: IrrepArgs,
    #[arg(long)]
    pub d: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "d3")]
    D3,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    /// Group parameter for families 1 and d3.
    #[arg(long)]
    pub b: Option<u32>,
    /// Irrep for family d3.
    #[arg(long)]
    pub a: Option<u32>,
    /// Spin for family d3, e.g. `13/2`; defaults to the smallest allowed.
    #[arg(long)]
    pub j: Option<HalfInt>,
    /// Level for family 2.
    #[arg(long)]
    pub r: Option<u32>,
    /// Distance for family 3.
    #[arg(long)]
    pub d: Option<u32>,
    /// Allow distances whose existence rests on the counting conjecture alone.
    #[arg(long)]
    pub include_conjectured: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub irrep: IrrepArgs,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub include_conjectured: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Spin,
    Dense,
    Symmetric,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Distance to check; defaults to the one recorded in the file.
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, value_enum, default_value_t = Mode::Spin)]
    pub mode: Mode,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Md,
    Json,
}

#[derive(Debug, Args)]
pub struct AtlasArgs {
    #[arg(long, default_value_t = 6)]
    pub bmax: u32,
    #[arg(long, default_value_t = 13)]
    pub dmax: u32,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Allow `--dmax` at or beyond the conjectured range.
    #[arg(long)]
    pub include_conjectured: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GatesArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Certify every group element and check closure, not just the generators.
    #[arg(long)]
    pub all_generators: bool,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_)
        | Error::OutOfRange(_)
        | Error::DimensionMismatch { .. }
        | Error::UnsupportedSpin(_)
        | Error::RankOverflow { .. }
        | Error::NotMiddleIrrep { .. }
        | Error::InsufficientSpin { .. }
        | Error::NoDegreesOfFreedom
        | Error::Json(_)
        | Error::Csv(_) => EXIT_USAGE,
        Error::NotFound { .. } => EXIT_NOT_FOUND,
        Error::NotTransversal { .. } => EXIT_VERIFY_FAILED,
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        Error::Inconsistency(_) | Error::Io(_) => EXIT_FAILURE,
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::NotFound { restarts, best_residual } = &e {
                let report = json!({"status": "not-found", "restarts": restarts, "best_residual": best_residual});
                println!("{report}");
            }
            exit_code(&e)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    // a second initialisation in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn emit(out: &OutputArgs, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: &OutputArgs, value: &T) -> Result<()> {
    emit(out, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Count(args) => cmd_count(args),
        Command::Family(args) => cmd_family(args),
        Command::Search(args) => cmd_search(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Atlas(args) => cmd_atlas(args),
        Command::Gates(args) => cmd_gates(args),
    }
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidInput(format!("--{flag} is required for this family")))
}

fn guard_conjectured(d: u32, allowed: bool) -> Result<()> {
    if d >= CONJECTURED_FROM_D && !allowed {
        return Err(Error::InvalidInput(format!(
            "d >= {CONJECTURED_FROM_D} is conjectural; pass --include-conjectured to try anyway"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct CountReport {
    b: u32,
    a: u32,
    d: u32,
    on_diag: u64,
    off_diag: u64,
    nu: u64,
    closed_form_nu: u64,
    matches: bool,
}

pub fn cmd_count(args: &CountArgs) -> Result<i32> {
    let rep = Irrep::new(args.irrep.b, args.irrep.a)?;
    let count = count_conditions(rep, args.d)?;
    let closed = count_conditions_closed(rep, args.d)?;
    let report = CountReport {
        b: rep.b,
        a: rep.a,
        d: args.d,
        on_diag: count.on_diag,
        off_diag: count.off_diag,
        nu: count.total(),
        closed_form_nu: closed,
        matches: count.total() == closed,
    };
    emit_json(&args.out, &report)?;
    Ok(if report.matches { EXIT_OK } else { EXIT_FAILURE })
}

fn spin_residuals(code: &MultiqubitCode, d: u32) -> Result<BTreeMap<String, f64>> {
    let report = kl_check_full(&code.to_spin_code()?, d, DEFAULT_TOLERANCE)?;
    if !report.pass {
        return Err(Error::Inconsistency(format!(
            "emitted code fails its own check, residual {:e}",
            report.max_residual
        )));
    }
    Ok(BTreeMap::from([("spin_kl".to_string(), report.max_residual)]))
}

fn search_json(result: &SearchResult, d: u32) -> Result<CodeJson> {
    let residuals = BTreeMap::from([
        ("search".to_string(), result.solution.residual),
        ("spin_kl".to_string(), result.report.max_residual),
    ]);
    CodeJson::from_code(&result.code, d, residuals)
}

pub fn cmd_family(args: &FamilyArgs) -> Result<i32> {
    let json = match args.family {
        FamilyKind::One => {
            let (code, params) = code1(require(args.b, "b")?)?;
            CodeJson::from_code(&code, params.d, spin_residuals(&code, params.d)?)?
        }
        FamilyKind::Two => {
            let (code, params) = code2(require(args.r, "r")?)?;
            CodeJson::from_code(&code, params.d, spin_residuals(&code, params.d)?)?
        }
        FamilyKind::D3 => {
            let b = require(args.b, "b")?;
            let rep = Irrep::new(b, require(args.a, "a")?)?;
            let j = match args.j {
                Some(j) => j,
                None => HalfInt::integer(2 * i64::from(b)) - rep.starting_spin(),
            };
            let code = bootstrap(&family_d3(rep, j)?);
            CodeJson::from_code(&code, 3, spin_residuals(&code, 3)?)?
        }
        FamilyKind::Three => {
            let d = require(args.d, "d")?;
            guard_conjectured(d, args.include_conjectured)?;
            let rep = code3_irrep(d)?;
            let result = search_code_escalating(rep, d, &args.solver.config(), args.solver.escalate)?;
            search_json(&result, d)?
        }
    };
    emit(&args.out, &json.to_json_string()?)?;
    Ok(EXIT_OK)
}

pub fn cmd_search(args: &SearchArgs) -> Result<i32> {
    let rep = Irrep::new(args.irrep.b, args.irrep.a)?;
    guard_conjectured(args.d, args.include_conjectured)?;
    let result = search_code_escalating(rep, args.d, &args.solver.config(), args.solver.escalate)?;
    emit(&args.out, &search_json(&result, args.d)?.to_json_string()?)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyOutput {
    n: usize,
    d: u32,
    mode: &'static str,
    #[serde(flatten)]
    report: KLReport,
}

fn read_code(path: &PathBuf) -> Result<(CodeJson, MultiqubitCode)> {
    let json = CodeJson::from_json_str(&std::fs::read_to_string(path)?)?;
    let code = json.to_code()?;
    Ok((json, code))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let (json, code) = read_code(&args.input)?;
    let d = args.d.unwrap_or(json.d);
    let (mode, report) = match args.mode {
        Mode::Spin => ("spin", kl_check_full(&code.to_spin_code()?, d, args.tolerance)?),
        Mode::Dense => ("dense", multiqubit_kl_check(&code, d, VerifyMode::Dense, args.tolerance)?),
        Mode::Symmetric => ("symmetric", multiqubit_kl_check(&code, d, VerifyMode::Symmetric, args.tolerance)?),
    };
    let pass = report.pass;
    emit_json(&args.out, &VerifyOutput { n: code.n(), d, mode, report })?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

pub fn cmd_atlas(args: &AtlasArgs) -> Result<i32> {
    guard_conjectured(args.dmax, args.include_conjectured)?;
    let table = atlas(args.bmax, args.dmax)?;
    match args.format {
        TableFormat::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            emit(&args.out, &String::from_utf8(buf).expect("csv output is utf-8"))?;
        }
        TableFormat::Md => emit(&args.out, &table.to_markdown())?,
        TableFormat::Json => emit_json(&args.out, &table.cells)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct GroupCertificate {
    name: String,
    order: usize,
    image_order: usize,
    elements_certified: usize,
    all_match_irrep: bool,
    /// Largest phase-insensitive deviation of `L(g) L(h)` from `L(gh)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    closure_deviation: Option<f64>,
}

#[derive(Serialize)]
struct GatesOutput {
    n: usize,
    labeling: Labeling,
    certificates: Vec<TransversalCertificate>,
    group: GroupCertificate,
    pass: bool,
}

pub fn cmd_gates(args: &GatesArgs) -> Result<i32> {
    let (json, code) = read_code(&args.input)?;
    let rep = json.rep;
    let group = rep.group();
    let elements: Vec<_> = if args.all_generators {
        group.elements().collect()
    } else {
        group.generators().to_vec()
    };
    let certificates = elements
        .iter()
        .map(|g| transversal_action(&code, *g, args.tolerance))
        .collect::<Result<Vec<_>>>()?;
    let all_match = certificates.iter().all(|c| c.matches_irrep);
    let closure_deviation = args.all_generators.then(|| {
        let mut worst = 0.0f64;
        for (g, cg) in elements.iter().zip(&certificates) {
            for (h, ch) in elements.iter().zip(&certificates) {
                let gh = elements.iter().position(|x| *x == *g * *h).expect("group is closed");
                worst = worst.max(phase_distance(&(cg.logical * ch.logical), &certificates[gh].logical));
            }
        }
        worst
    });
    let closure_ok = closure_deviation.map_or(true, |d| d < args.tolerance.max(1e-10));
    let pass = all_match && closure_ok;
    let output = GatesOutput {
        n: code.n(),
        labeling: code.labeling(),
        group: GroupCertificate {
            name: format!("BD_{}", 2 * rep.b),
            order: group.order(),
            image_order: image_order(rep),
            elements_certified: certificates.len(),
            all_match_irrep: all_match,
            closure_deviation,
        },
        certificates,
        pass,
    };
    emit_json(&args.out, &output)?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
