//! Command-line front end for the saturation library.
//!
//! One subcommand per pipeline stage: `check` (saturation verdict),
//! `homdim` (hom-space dimension of a descent matrix), `matrix` (descent
//! matrix of a torsor spec), `search` (saturated specimens of a family),
//! `bertini` (variable-count reduction preserving saturation), and
//! `bounds` (cohomology group shapes and character-group embedding tests).
//!
//! Conventions:
//! - JSON is the single structured format and every document carries
//!   `"format": 1`; `--format text` prints a human summary, never parsed.
//! - Identical invocations produce byte-identical output: term and key
//!   orders are canonical and random search takes a mandatory `--seed`.
//! - Exit codes: 0 success; 1 only for `check --assert-saturated` on an
//!   unsaturated torsor; 2 for any input error, with a diagnostic naming
//!   the violated requirement.
//! - The environment variable `FROBTORSOR_CAP` overrides the matrix-size
//!   cap used by the builders.

use std::fs;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use frobtorsor::algebra::FieldSpec;
use frobtorsor::bertini;
use frobtorsor::bounds::{embedding_check, h1_alpha_basis, h1_mu, CharacterGroup, CurveData};
use frobtorsor::descent::{self, DescentMatrix, TorsorSpec};
use frobtorsor::homsolver::solve_hom;
use frobtorsor::saturation::{
    search_saturated, verdict, Method, SearchFamily, SearchMode, SearchParams, SEARCH_ORDER,
};

// ---------------------------------------------------------------------------
// Argument types.
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "frobtorsor",
    version,
    about = "Exact saturation tests for purely inseparable torsors over affine curves and spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Saturation verdict for a torsor spec.
    Check(CheckArgs),
    /// Hom-space dimension of a descent matrix given as JSON.
    Homdim(HomdimArgs),
    /// Build and print the descent matrix of a torsor spec.
    Matrix(MatrixArgs),
    /// Search for saturated specs of a family.
    Search(SearchArgs),
    /// Reduce a saturated alpha-powers spec to one fewer variable.
    Bertini(BertiniArgs),
    /// Cohomology group shapes and character-group embedding tests.
    Bounds(BoundsArgs),
}

/// Output format selector shared by every subcommand.
#[derive(Args)]
struct FormatArg {
    /// Output format: machine-readable JSON or a human text summary.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

/// Families constructible from flags alone (no polynomial data).
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FlagFamily {
    /// μ_p-torsor over the torus, classified by the exponent m.
    #[value(name = "mu_p", alias = "mu-p")]
    MuP,
}

/// Where a torsor spec comes from: flags (mu_p only) or JSON.
#[derive(Args)]
struct SpecSource {
    /// Family constructible from flags (currently only `mu_p`).
    #[arg(long, value_enum)]
    family: Option<FlagFamily>,
    /// Characteristic p (with --family).
    #[arg(long, requires = "family")]
    p: Option<u64>,
    /// Field extension degree e, coefficients in F_{p^e} (with --family).
    #[arg(long, default_value_t = 1, requires = "family")]
    e: u32,
    /// Classifying exponent m (with --family mu_p).
    #[arg(long, requires = "family", allow_hyphen_values = true)]
    m: Option<i64>,
    /// Path of a torsor-spec JSON file, or "-" for standard input.
    #[arg(long, conflicts_with_all = ["family", "p", "m"])]
    input: Option<String>,
    /// Inline torsor-spec JSON.
    #[arg(long, conflicts_with_all = ["family", "p", "m", "input"])]
    json: Option<String>,
}

impl SpecSource {
    fn torsor_spec(&self) -> Result<TorsorSpec, String> {
        if let Some(text) = &self.json {
            return parse_spec(text);
        }
        if let Some(path) = &self.input {
            return parse_spec(&read_source(path)?);
        }
        match self.family {
            Some(FlagFamily::MuP) => {
                let p = self.p.ok_or("mu_p requires --p")?;
                let m = self.m.ok_or("mu_p requires --m")?;
                let field = FieldSpec::new(p, self.e).map_err(|e| e.to_string())?;
                Ok(TorsorSpec::MuP { field, m })
            }
            None => Err(
                "no torsor spec: pass --family mu_p with --p/--m, or --input/--json \
                 with a spec document"
                    .into(),
            ),
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: SpecSource,
    /// Decision method: closed-form criterion, solver, or both cross-checked.
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    /// Exit 1 when the torsor is not saturated (CI-friendly).
    #[arg(long)]
    assert_saturated: bool,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Criterion,
    Solver,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Criterion => Method::Criterion,
            MethodArg::Solver => Method::Solver,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Args)]
struct HomdimArgs {
    /// Path of a descent-matrix JSON file, or "-" for standard input.
    #[arg(long, conflicts_with = "json")]
    input: Option<String>,
    /// Inline descent-matrix JSON.
    #[arg(long)]
    json: Option<String>,
    /// Also print the canonical basis of the solution space.
    #[arg(long)]
    basis: bool,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    source: SpecSource,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchFamilyArg {
    #[value(name = "sl2_char2", alias = "sl2-char2")]
    Sl2Char2,
    #[value(name = "alpha_powers", alias = "alpha-powers")]
    AlphaPowers,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchModeArg {
    Exhaustive,
    Random,
}

#[derive(Args)]
struct SearchArgs {
    /// Family to search.
    #[arg(long, value_enum)]
    family: SearchFamilyArg,
    /// Number of classifying polynomials (alpha-powers only; default 1).
    #[arg(long)]
    n: Option<usize>,
    /// Characteristic p.
    #[arg(long)]
    p: u64,
    /// Field extension degree e.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Maximal degree of every classifying polynomial.
    #[arg(long)]
    degree_bound: u32,
    /// Maximal number of results.
    #[arg(long)]
    budget: usize,
    /// Candidate generation: canonical enumeration or seeded random draws.
    #[arg(long, value_enum, default_value_t = SearchModeArg::Exhaustive)]
    mode: SearchModeArg,
    /// RNG seed; required with --mode random (no ambient entropy).
    #[arg(long, required_if_eq("mode", "random"))]
    seed: Option<u64>,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args)]
struct BertiniArgs {
    #[command(flatten)]
    source: SpecSource,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(subcommand)]
    which: BoundsCommand,
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Shape of H¹(U, μ_{p^m}): modulus p^m, rank γ + n − 1.
    H1Mu {
        /// Characteristic p.
        #[arg(long)]
        p: u64,
        /// p-rank γ of the compactified curve (input data, never computed).
        #[arg(long)]
        gamma: u64,
        /// Number of punctures n ≥ 1.
        #[arg(long)]
        punctures: u64,
        /// Tower height m ≥ 1.
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Monomial basis of H¹(𝔸¹, α_p) up to a degree bound.
    AlphaBasis {
        /// Characteristic p.
        #[arg(long)]
        p: u64,
        /// Degree bound on the basis monomials.
        #[arg(long)]
        bound: u32,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Whether a finite abelian p-group embeds into (ℚ_p/ℤ_p)^{γ+n−1}.
    Embed {
        /// Characteristic p.
        #[arg(long)]
        p: u64,
        /// p-rank γ of the compactified curve.
        #[arg(long)]
        gamma: u64,
        /// Number of punctures n ≥ 1.
        #[arg(long)]
        punctures: u64,
        /// Cyclic factor orders (comma-separated p-powers; omit for the
        /// trivial group).
        #[arg(long, value_delimiter = ',')]
        orders: Vec<u128>,
        #[command(flatten)]
        format: FormatArg,
    },
}

// ---------------------------------------------------------------------------
// Output documents.
// ---------------------------------------------------------------------------

/// Wraps a payload with the version field every JSON document carries.
#[derive(Serialize)]
struct Versioned<T: Serialize> {
    format: u32,
    #[serde(flatten)]
    payload: T,
}

fn to_json<T: Serialize>(payload: T) -> String {
    serde_json::to_string(&Versioned { format: 1, payload })
        .expect("serialization of output documents cannot fail")
}

#[derive(Serialize)]
struct HomdimOut {
    dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<Vec<u64>>>,
}

#[derive(Serialize)]
struct SearchOut {
    order: &'static str,
    count: usize,
    specs: Vec<TorsorSpec>,
}

#[derive(Serialize)]
struct H1MuOut {
    p: u64,
    gamma: u64,
    punctures: u64,
    m: u32,
    modulus: u128,
    rank: u64,
}

#[derive(Serialize)]
struct AlphaBasisOut {
    p: u64,
    bound: u32,
    basis: Vec<String>,
}

#[derive(Serialize)]
struct EmbedOut {
    p: u64,
    gamma: u64,
    punctures: u64,
    orders: Vec<u128>,
    rank: u64,
    factor_count: usize,
    embeds: bool,
}

// ---------------------------------------------------------------------------
// Input plumbing.
// ---------------------------------------------------------------------------

fn read_source(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("cannot read standard input: {e}"))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    }
}

fn parse_spec(text: &str) -> Result<TorsorSpec, String> {
    serde_json::from_str(text).map_err(|e| format!("malformed torsor spec JSON: {e}"))
}

fn parse_matrix(text: &str) -> Result<DescentMatrix, String> {
    serde_json::from_str(text).map_err(|e| format!("malformed descent matrix JSON: {e}"))
}

/// One-line human description of a torsor spec.
fn describe_spec(spec: &TorsorSpec) -> String {
    let field = spec.field();
    match spec {
        TorsorSpec::MuP { m, .. } => {
            format!("mu_p over F_{}: m = {m}", field.order())
        }
        TorsorSpec::AlphaPowers { f } => {
            let polys: Vec<String> = f.iter().map(|g| g.to_string()).collect();
            format!(
                "alpha_powers over F_{} in {} variable(s): f = ({})",
                field.order(),
                f[0].ring().nvars(),
                polys.join(", ")
            )
        }
        TorsorSpec::Gl2Char2 { f11, f12, f21, f22, m } => format!(
            "gl2_char2 over F_{}: f = [[{f11}, {f12}], [{f21}, {f22}]], det = x^{m}",
            field.order()
        ),
        TorsorSpec::Sl2Char2 { f11, f12, f21, f22 } => format!(
            "sl2_char2 over F_{}: f = [[{f11}, {f12}], [{f21}, {f22}]]",
            field.order()
        ),
    }
}

// ---------------------------------------------------------------------------
// Subcommand bodies.
// ---------------------------------------------------------------------------

fn run_check(args: &CheckArgs) -> Result<ExitCode, String> {
    let spec = args.source.torsor_spec()?;
    let v = verdict(&spec, args.method.into()).map_err(|e| e.to_string())?;
    match args.format.format {
        OutputFormat::Json => println!("{}", to_json(&v)),
        OutputFormat::Text => {
            let dim = v
                .hom_dimension
                .map_or(String::new(), |d| format!(", hom dimension {d}"));
            let note = v
                .image_note
                .as_ref()
                .map_or(String::new(), |n| format!(", {n}"));
            let method = match v.method {
                Method::Criterion => "criterion",
                Method::Solver => "solver",
                Method::Both => "both",
            };
            println!(
                "saturated: {} (method {method}{dim}{note}, all heights {})",
                v.saturated, v.all_heights
            );
        }
    }
    if args.assert_saturated && !v.saturated {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_homdim(args: &HomdimArgs) -> Result<ExitCode, String> {
    let text = match (&args.json, &args.input) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => read_source(path)?,
        (None, None) => return Err("no matrix: pass --input PATH or --json TEXT".into()),
    };
    let matrix = parse_matrix(&text)?;
    let solution = solve_hom(&matrix).map_err(|e| e.to_string())?;
    let field = matrix.field();
    let basis: Option<Vec<Vec<u64>>> = args.basis.then(|| {
        solution
            .basis
            .iter()
            .map(|v| v.iter().map(|a| field.index_of(a)).collect())
            .collect()
    });
    match args.format.format {
        OutputFormat::Json => println!(
            "{}",
            to_json(&HomdimOut {
                dimension: solution.dimension,
                basis,
            })
        ),
        OutputFormat::Text => {
            println!("dimension: {}", solution.dimension);
            if args.basis {
                for vector in &solution.basis {
                    let coords: Vec<String> = vector.iter().map(|a| a.to_string()).collect();
                    println!("basis vector: [{}]", coords.join(", "));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_matrix(args: &MatrixArgs) -> Result<ExitCode, String> {
    let spec = args.source.torsor_spec()?;
    let matrix = descent::build(&spec).map_err(|e| e.to_string())?;
    match args.format.format {
        OutputFormat::Json => println!(
            "{}",
            serde_json::to_string(&matrix).expect("matrix serialization cannot fail")
        ),
        OutputFormat::Text => {
            println!(
                "family {}, size {}, rows span the torsor algebra basis, \
                 columns the descent targets",
                matrix.family(),
                matrix.size()
            );
            println!("row basis: {}", matrix.row_basis().join(", "));
            println!("col basis: {}", matrix.col_basis().join(", "));
            for row in 0..matrix.size() {
                let entries: Vec<String> = (0..matrix.size())
                    .map(|col| matrix.entry(row, col).to_string())
                    .collect();
                println!("[{}]", entries.join(", "));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_search(args: &SearchArgs) -> Result<ExitCode, String> {
    let family = match args.family {
        SearchFamilyArg::Sl2Char2 => {
            if args.n.is_some() {
                return Err("--n applies to the alpha-powers family only".into());
            }
            SearchFamily::Sl2Char2
        }
        SearchFamilyArg::AlphaPowers => SearchFamily::AlphaPowers {
            n: args.n.unwrap_or(1),
        },
    };
    let mode = match args.mode {
        SearchModeArg::Exhaustive => {
            if args.seed.is_some() {
                return Err("--seed applies to random mode only".into());
            }
            SearchMode::Exhaustive
        }
        SearchModeArg::Random => SearchMode::Random {
            seed: args.seed.expect("clap enforces --seed with --mode random"),
        },
    };
    let params = SearchParams {
        family,
        field: FieldSpec::new(args.p, args.e).map_err(|e| e.to_string())?,
        degree_bound: args.degree_bound,
        budget: args.budget,
        mode,
    };
    let specs = search_saturated(&params).map_err(|e| e.to_string())?;
    match args.format.format {
        OutputFormat::Json => println!(
            "{}",
            to_json(&SearchOut {
                order: SEARCH_ORDER,
                count: specs.len(),
                specs,
            })
        ),
        OutputFormat::Text => {
            println!("order: {SEARCH_ORDER}");
            println!("found {} saturated spec(s)", specs.len());
            for spec in &specs {
                println!("{}", describe_spec(spec));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_bertini(args: &BertiniArgs) -> Result<ExitCode, String> {
    let spec = args.source.torsor_spec()?;
    let reduction = bertini::reduce_torsor(&spec).map_err(|e| e.to_string())?;
    match args.format.format {
        OutputFormat::Json => println!("{}", to_json(&reduction)),
        OutputFormat::Text => {
            let plan = &reduction.plan;
            println!(
                "plan: d = {}, M = {}, N = {}, last variable ↦ {}",
                plan.d, plan.big_m, plan.big_n, plan.g
            );
            println!("reduced: {}", describe_spec(&reduction.reduced));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_bounds(args: &BoundsArgs) -> Result<ExitCode, String> {
    match &args.which {
        BoundsCommand::H1Mu {
            p,
            gamma,
            punctures,
            m,
            format,
        } => {
            let curve = CurveData::new(*p, *gamma, *punctures).map_err(|e| e.to_string())?;
            let h1 = h1_mu(&curve, *m).map_err(|e| e.to_string())?;
            match format.format {
                OutputFormat::Json => println!(
                    "{}",
                    to_json(&H1MuOut {
                        p: *p,
                        gamma: *gamma,
                        punctures: *punctures,
                        m: *m,
                        modulus: h1.modulus,
                        rank: h1.rank,
                    })
                ),
                OutputFormat::Text => {
                    println!("H¹(U, μ_{{{p}^{m}}}) ≅ (ℤ/{}ℤ)^{}", h1.modulus, h1.rank)
                }
            }
        }
        BoundsCommand::AlphaBasis { p, bound, format } => {
            let basis = h1_alpha_basis(*p, *bound).map_err(|e| e.to_string())?;
            let basis: Vec<String> = basis.iter().map(|f| f.to_string()).collect();
            match format.format {
                OutputFormat::Json => println!(
                    "{}",
                    to_json(&AlphaBasisOut {
                        p: *p,
                        bound: *bound,
                        basis,
                    })
                ),
                OutputFormat::Text => println!(
                    "H¹(𝔸¹, α_{p}) basis up to degree {bound}: {}",
                    basis.join(", ")
                ),
            }
        }
        BoundsCommand::Embed {
            p,
            gamma,
            punctures,
            orders,
            format,
        } => {
            let curve = CurveData::new(*p, *gamma, *punctures).map_err(|e| e.to_string())?;
            let group = if orders.is_empty() {
                CharacterGroup::trivial()
            } else {
                CharacterGroup::new(orders.clone()).map_err(|e| e.to_string())?
            };
            let embeds = embedding_check(&group, &curve).map_err(|e| e.to_string())?;
            match format.format {
                OutputFormat::Json => println!(
                    "{}",
                    to_json(&EmbedOut {
                        p: *p,
                        gamma: *gamma,
                        punctures: *punctures,
                        orders: orders.clone(),
                        rank: curve.rank(),
                        factor_count: group.factor_count(),
                        embeds,
                    })
                ),
                OutputFormat::Text => println!(
                    "embeds: {embeds} ({} cyclic factor(s) against rank {})",
                    group.factor_count(),
                    curve.rank()
                ),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Check(args) => run_check(args),
        Command::Homdim(args) => run_homdim(args),
        Command::Matrix(args) => run_matrix(args),
        Command::Search(args) => run_search(args),
        Command::Bertini(args) => run_bertini(args),
        Command::Bounds(args) => run_bounds(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
