//! Command-line pipeline: generators of a multiplicative subgroup → ℤ-basis
//! reduction → quadratic relation lattice → freeness verdict → witness
//! isotropic form → verified obstruction cocycle → finite-oracle restriction,
//! emitted as one deterministic JSON report per invocation.
//!
//! Exit codes partition outcomes: 0 free (or plain success), 10 not-free,
//! 20 free-up-to-bound, 1 verification failure, 2 input/parse error,
//! 3 precision exhaustion, 4 table/grid size limit.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use modob_core::{
    class_is_trivial, isotropy_defect, parse_generator, parse_rational, polarize,
    quadratic_relation_lattice, reduce_to_basis, restrict_obstruction, verify_bockstein,
    verify_obstruction, BasisReduction, BigFloat, Certainty, CocycleError, ExactRealError,
    FincohError, FreenessVerdict, IntegralQuadraticForm, LogGenerators, NumericError,
    NumericOptions, QformsError, QuadraticRelation, QuadraticRelationLattice, RealBasis,
    RelationsError, VerifyReport, DEFAULT_TABLE_LIMIT,
};
use num_traits::Signed;
use serde::Serialize;
use serde_json::Value;

const SCHEMA_VERSION: u32 = 1;
/// Tuple budget for grid verification before it switches to seeded sampling.
const DEFAULT_GRID_BUDGET: u64 = 20_000_000;
/// Decimal digits used when a numeric quantity is rendered into the report.
const REPORT_DIGITS: u32 = 40;

// ---------------------------------------------------------------------------
// command line

/// Freeness of finitely generated subgroups of the positive reals, decided
/// through the quadratic relation lattice of their logarithms; witnesses are
/// reported as integral quadratic forms together with a verified explicit
/// obstruction cocycle and its restrictions to finite grids.
#[derive(Parser)]
#[command(name = "modob", version, disable_help_subcommand = true)]
struct Cli {
    /// Seed for sampled grid verification (ignored by exhaustive checks).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Render the report as indented text derived from the JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce the generators to a ℤ-basis, list the quadratic relation
    /// lattice of that basis, and report the freeness verdict.
    Relations(GenArgs),
    /// Freeness verdict only: reduction and decision, no lattice listing.
    Free(GenArgs),
    /// Map relation coefficients to the corresponding integral quadratic
    /// form; with generators supplied, also evaluate its isotropy defect.
    Form(FormArgs),
    /// Verify the obstruction cocycle and Bockstein identity for a form on a
    /// torus grid, then restrict to the finite oracle at each requested N.
    Cocycle(CocycleArgs),
    /// Grid verification reports only (no oracle restriction).
    Verify(VerifyArgs),
    /// Restrict the obstruction cocycle of a form to finite grids and test
    /// whether each restricted class is a coboundary.
    Restrict(RestrictArgs),
    /// Full pipeline: verdict, witness form, and — when the verdict is
    /// not-free — a verified cocycle with finite-oracle results.
    Report(ReportCmdArgs),
}

/// Generator input shared by the verdict-producing commands.
#[derive(Args)]
struct GenArgs {
    /// Exact mode: generators are ℚ-combinations of basis symbols.
    #[arg(long)]
    exact: bool,
    /// Numeric mode: generators are positive decimals or fractions p/q.
    #[arg(long)]
    numeric: bool,
    /// Product-basis file (`modob-basis v1` format), required with --exact.
    #[arg(long, value_name = "FILE")]
    basis: Option<PathBuf>,
    /// Comma-separated generators, e.g. "L,L/3" (exact) or "2,3" (numeric).
    #[arg(long, value_name = "LIST")]
    gens: Option<String>,
    /// Working precision in bits for numeric mode.
    #[arg(long, default_value_t = 256)]
    prec: u32,
    /// Coefficient bound for numeric relation detection.
    #[arg(long, default_value_t = 1_000_000)]
    bound: u64,
}

#[derive(Args)]
struct FormArgs {
    /// Relation coefficients over (t₁⊙t₁, t₁⊙t₂, …, tₙ⊙tₙ), e.g. "2,0,-1".
    #[arg(long, value_name = "COEFFS")]
    relation: String,
    #[command(flatten)]
    gen: GenArgs,
}

#[derive(Args)]
struct CocycleArgs {
    /// Form literal, e.g. "diag:[2,-1]" or "diag:[0,0];cross:[(0,1,1)]".
    #[arg(long, value_name = "LITERAL")]
    form: String,
    /// Grid resolution: verification runs over (ℤ/N)^d ⊂ 𝕋^d.
    #[arg(long, value_name = "N", default_value_t = 4)]
    grid: u64,
    /// Finite-oracle grid sizes (comma-separated), e.g. "2,3".
    #[arg(long = "oracle-N", value_name = "N", value_delimiter = ',')]
    oracle_n: Vec<u64>,
    /// Oracle coefficient moduli, paired with --oracle-N (default: L = N).
    #[arg(long = "oracle-modulus", value_name = "L", value_delimiter = ',')]
    oracle_modulus: Vec<i64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Form literal, e.g. "diag:[2,-1]".
    #[arg(long, value_name = "LITERAL")]
    form: String,
    /// Grid resolution: verification runs over (ℤ/N)^d ⊂ 𝕋^d.
    #[arg(long, value_name = "N", default_value_t = 4)]
    grid: u64,
}

#[derive(Args)]
struct RestrictArgs {
    /// Form literal, e.g. "diag:[1]".
    #[arg(long, value_name = "LITERAL")]
    form: String,
    /// Finite-oracle grid sizes (comma-separated), at least one.
    #[arg(long = "oracle-N", value_name = "N", value_delimiter = ',', required = true)]
    oracle_n: Vec<u64>,
    /// Oracle coefficient moduli, paired with --oracle-N (default: L = N).
    #[arg(long = "oracle-modulus", value_name = "L", value_delimiter = ',')]
    oracle_modulus: Vec<i64>,
}

#[derive(Args)]
struct ReportCmdArgs {
    #[command(flatten)]
    gen: GenArgs,
    /// Grid resolution for the cocycle stage.
    #[arg(long, value_name = "N", default_value_t = 4)]
    grid: u64,
    /// Finite-oracle grid sizes for the cocycle stage.
    #[arg(long = "oracle-N", value_name = "N", value_delimiter = ',', default_value = "2")]
    oracle_n: Vec<u64>,
    /// Oracle coefficient moduli, paired with --oracle-N (default: L = N).
    #[arg(long = "oracle-modulus", value_name = "L", value_delimiter = ',')]
    oracle_modulus: Vec<i64>,
}

// ---------------------------------------------------------------------------
// failures → exit codes

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precision(String),
    #[error("{0}")]
    Size(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Precision(_) => 3,
            Failure::Size(_) => 4,
        }
    }
}

impl From<RelationsError> for Failure {
    fn from(e: RelationsError) -> Self {
        match e {
            RelationsError::PrecisionExhausted { .. } => Failure::Precision(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<FincohError> for Failure {
    fn from(e: FincohError) -> Self {
        match e {
            FincohError::SizeLimit(_) => Failure::Size(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<CocycleError> for Failure {
    fn from(e: CocycleError) -> Self {
        match e {
            CocycleError::GridTooLarge(_) => Failure::Size(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<ExactRealError> for Failure {
    fn from(e: ExactRealError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<QformsError> for Failure {
    fn from(e: QformsError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Self {
        Failure::Input(e.to_string())
    }
}

// ---------------------------------------------------------------------------
// report schema

#[derive(Serialize)]
struct ToolInfo {
    name: &'static str,
    version: &'static str,
}

#[derive(Serialize)]
struct InputEcho {
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_file: Option<String>,
    generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    precision_bits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coeff_bound: Option<u64>,
}

#[derive(Serialize)]
struct ReductionReport {
    input_rank: usize,
    basis_rank: usize,
    /// Extracted ℤ-basis of ⟨t₁,…,tₙ⟩, rendered per mode.
    basis: Vec<String>,
    /// Row i expresses input generator i over the basis.
    expression: Vec<Vec<String>>,
    /// ℤ-linear relations among the input generators (HNF rows).
    relations: Vec<Vec<String>>,
    certainty: String,
}

#[derive(Serialize)]
struct RelationEntry {
    coeffs: Vec<String>,
    display: String,
    form: String,
}

#[derive(Serialize)]
struct LatticeReport {
    rank: usize,
    generators: Vec<RelationEntry>,
    certainty: String,
}

#[derive(Serialize)]
struct WitnessReport {
    relation: String,
    coeffs: Vec<String>,
    form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    isotropy_defect: Option<String>,
}

#[derive(Serialize)]
struct OracleEntry {
    grid: u64,
    modulus: i64,
    class_trivial: bool,
}

#[derive(Serialize)]
struct CocycleReport {
    form: String,
    dim: usize,
    /// Polarized bilinear form B with q(x) = B(x,x).
    bilinear: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    obstruction: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bockstein: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    finite_oracle: Vec<OracleEntry>,
}

/// Everything a run reports. Field order is the schema; `timings` is the one
/// section excluded from byte-for-byte determinism.
#[derive(Serialize)]
struct SdReport {
    schema_version: u32,
    tool: ToolInfo,
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<InputEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_reduction: Option<ReductionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relation_lattice: Option<LatticeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_form: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cocycle_verification: Option<CocycleReport>,
    seed: u64,
    timings: BTreeMap<&'static str, u64>,
}

impl SdReport {
    fn new(command: &'static str, seed: u64) -> Self {
        SdReport {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo { name: "modob", version: env!("CARGO_PKG_VERSION") },
            command,
            input: None,
            basis_reduction: None,
            relation_lattice: None,
            verdict: None,
            witness_form: None,
            cocycle_verification: None,
            seed,
            timings: BTreeMap::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// input loading

struct ParsedInput {
    echo: InputEcho,
    gens: LogGenerators,
    opts: NumericOptions,
}

fn load_generators(a: &GenArgs) -> Result<ParsedInput, Failure> {
    let spec = a
        .gens
        .as_deref()
        .ok_or_else(|| Failure::Input("missing --gens".into()))?;
    let tokens: Vec<String> = spec.split(',').map(|t| t.trim().to_owned()).collect();
    if tokens.iter().any(String::is_empty) {
        return Err(Failure::Input(format!("empty generator in list `{spec}`")));
    }
    let opts = NumericOptions {
        coeff_bound: a.bound.into(),
        max_steps: NumericOptions::default().max_steps,
    };
    match (a.exact, a.numeric) {
        (true, false) => {
            let path = a
                .basis
                .as_ref()
                .ok_or_else(|| Failure::Input("--exact requires --basis FILE".into()))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
            let basis = RealBasis::parse(&text)?;
            let values = tokens
                .iter()
                .map(|t| parse_generator(&basis, t))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ParsedInput {
                echo: InputEcho {
                    mode: "exact",
                    basis_file: Some(path.display().to_string()),
                    generators: tokens,
                    precision_bits: None,
                    coeff_bound: None,
                },
                gens: LogGenerators::exact(values)?,
                opts,
            })
        }
        (false, true) => {
            let mut logs = Vec::with_capacity(tokens.len());
            for t in &tokens {
                let value = if t.contains('/') {
                    let r = parse_rational(t)
                        .map_err(|_| Failure::Input(format!("cannot parse generator `{t}`")))?;
                    if !r.is_positive() {
                        return Err(Failure::Input(format!("generator `{t}` must be positive")));
                    }
                    BigFloat::from_rational(&r, a.prec)
                } else {
                    BigFloat::parse_decimal(t, a.prec)?
                };
                let log = value
                    .ln()
                    .map_err(|_| Failure::Input(format!("generator `{t}` must be positive")))?;
                logs.push(log);
            }
            Ok(ParsedInput {
                echo: InputEcho {
                    mode: "numeric",
                    basis_file: None,
                    generators: tokens,
                    precision_bits: Some(a.prec),
                    coeff_bound: Some(a.bound),
                },
                gens: LogGenerators::numeric(logs)?,
                opts,
            })
        }
        _ => Err(Failure::Input("choose exactly one of --exact / --numeric".into())),
    }
}

/// MODOB_LIMIT overrides both the oracle table cap and the grid tuple budget.
fn env_limit(default: u64) -> Result<u64, Failure> {
    match std::env::var("MODOB_LIMIT") {
        Err(std::env::VarError::NotPresent) => Ok(default),
        Err(e) => Err(Failure::Input(format!("MODOB_LIMIT: {e}"))),
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| Failure::Input(format!("MODOB_LIMIT must be an integer, got `{s}`"))),
    }
}

// ---------------------------------------------------------------------------
// report builders

fn certainty_label(c: &Certainty) -> String {
    match c {
        Certainty::Proven => "proven".into(),
        Certainty::UpToBound { coeff_bound } => format!("up-to-bound:{coeff_bound}"),
    }
}

fn render_value_list(gens: &LogGenerators) -> Vec<String> {
    match gens {
        LogGenerators::Exact(vals) => vals.iter().map(|v| v.to_string()).collect(),
        LogGenerators::Numeric(vals) => {
            vals.iter().map(|v| v.to_decimal_string(REPORT_DIGITS)).collect()
        }
    }
}

fn matrix_rows(m: &modob_core::IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn reduction_report(red: &BasisReduction, input_rank: usize) -> ReductionReport {
    ReductionReport {
        input_rank,
        basis_rank: red.basis.len(),
        basis: render_value_list(&red.basis),
        expression: matrix_rows(&red.expression),
        relations: red
            .relations
            .iter()
            .map(|row| row.iter().map(|c| c.to_string()).collect())
            .collect(),
        certainty: certainty_label(&red.certainty),
    }
}

fn relation_entry(rel: &QuadraticRelation) -> RelationEntry {
    RelationEntry {
        coeffs: rel.coeffs().iter().map(|c| c.to_string()).collect(),
        display: rel.to_string(),
        form: rel.to_form().to_literal(),
    }
}

fn lattice_report(lat: &QuadraticRelationLattice) -> LatticeReport {
    LatticeReport {
        rank: lat.rank(),
        generators: lat.basis().iter().map(relation_entry).collect(),
        certainty: certainty_label(lat.certainty()),
    }
}

/// Isotropy defect of `q` at the given log values: exactly 0 in exact mode by
/// construction of the witness, a near-zero residual in numeric mode.
fn defect_string(q: &IntegralQuadraticForm, at: &LogGenerators) -> Result<String, Failure> {
    match at {
        LogGenerators::Exact(vals) => {
            let v = q.evaluate_exact(vals)?;
            Ok(if v.is_zero() { "0".into() } else { v.to_string() })
        }
        LogGenerators::Numeric(vals) => {
            Ok(isotropy_defect(q, vals).to_decimal_string(REPORT_DIGITS))
        }
    }
}

fn witness_report(
    verdict: &FreenessVerdict,
    basis: &LogGenerators,
) -> Result<Option<WitnessReport>, Failure> {
    let FreenessVerdict::NotFree { witness } = verdict else {
        return Ok(None);
    };
    let form = witness.to_form();
    let defect = defect_string(&form, basis)?;
    Ok(Some(WitnessReport {
        relation: witness.to_string(),
        coeffs: witness.coeffs().iter().map(|c| c.to_string()).collect(),
        form: form.to_literal(),
        isotropy_defect: Some(defect),
    }))
}

fn verdict_exit(v: &FreenessVerdict) -> u8 {
    match v {
        FreenessVerdict::Free => 0,
        FreenessVerdict::NotFree { .. } => 10,
        FreenessVerdict::FreeUpToBound { .. } => 20,
    }
}

/// Pairs each oracle N with its coefficient modulus (default L = N).
fn oracle_plan(ns: &[u64], moduli: &[i64]) -> Result<Vec<(u64, i64)>, Failure> {
    if moduli.len() > ns.len() {
        return Err(Failure::Input(format!(
            "{} oracle moduli given for {} grid sizes",
            moduli.len(),
            ns.len()
        )));
    }
    let mut plan = Vec::with_capacity(ns.len());
    for (i, &n) in ns.iter().enumerate() {
        if n < 2 {
            return Err(Failure::Input(format!("oracle grid must be ≥ 2, got {n}")));
        }
        let l = match moduli.get(i) {
            Some(&l) => l,
            None => i64::try_from(n)
                .map_err(|_| Failure::Input(format!("oracle grid {n} too large for a modulus")))?,
        };
        if l < 2 {
            return Err(Failure::Input(format!("oracle modulus must be ≥ 2, got {l}")));
        }
        plan.push((n, l));
    }
    Ok(plan)
}

/// Grid verification of the obstruction and Bockstein identities, plus the
/// finite-oracle triviality decision at each requested (N, L).
fn cocycle_stage(
    q: &IntegralQuadraticForm,
    grid: u64,
    oracle: &[(u64, i64)],
    seed: u64,
    with_grid_checks: bool,
) -> Result<(CocycleReport, bool), Failure> {
    if grid < 1 {
        return Err(Failure::Input("grid must be ≥ 1".into()));
    }
    let b = polarize(q);
    let budget = env_limit(DEFAULT_GRID_BUDGET)?;
    let table_cap = env_limit(DEFAULT_TABLE_LIMIT)?;
    let (obstruction, bockstein) = if with_grid_checks {
        (
            Some(verify_obstruction(&b, grid, budget, seed)),
            Some(verify_bockstein(&b, grid, budget, seed)),
        )
    } else {
        (None, None)
    };
    let ok = obstruction.as_ref().map_or(true, |r| r.ok)
        && bockstein.as_ref().map_or(true, |r| r.ok);
    let mut entries = Vec::with_capacity(oracle.len());
    for &(n, l) in oracle {
        let table = restrict_obstruction(&b, n, l, table_cap)?;
        let trivial = class_is_trivial(&table, table_cap)?;
        entries.push(OracleEntry { grid: n, modulus: l, class_trivial: trivial });
    }
    let report = CocycleReport {
        form: q.to_literal(),
        dim: q.dim(),
        bilinear: matrix_rows(b.matrix()),
        obstruction,
        bockstein,
        finite_oracle: entries,
    };
    Ok((report, ok))
}

// ---------------------------------------------------------------------------
// commands

fn cmd_relations(a: &GenArgs, seed: u64) -> Result<(SdReport, u8), Failure> {
    let t0 = Instant::now();
    let input = load_generators(a)?;
    let t1 = Instant::now();
    let red = reduce_to_basis(&input.gens, &input.opts)?;
    let t2 = Instant::now();
    let lat = quadratic_relation_lattice(&red.basis, &input.opts)?;
    let verdict = FreenessVerdict::from_lattice(&lat);
    let t3 = Instant::now();

    let mut rep = SdReport::new("relations", seed);
    rep.basis_reduction = Some(reduction_report(&red, input.gens.len()));
    rep.relation_lattice = Some(lattice_report(&lat));
    rep.verdict = Some(verdict.name());
    rep.witness_form = witness_report(&verdict, &red.basis)?;
    rep.input = Some(input.echo);
    rep.timings.insert("parse_ms", ms(t0, t1));
    rep.timings.insert("reduce_ms", ms(t1, t2));
    rep.timings.insert("lattice_ms", ms(t2, t3));
    rep.timings.insert("total_ms", ms(t0, Instant::now()));
    Ok((rep, verdict_exit(&verdict)))
}

fn cmd_free(a: &GenArgs, seed: u64) -> Result<(SdReport, u8), Failure> {
    let t0 = Instant::now();
    let input = load_generators(a)?;
    let cert = modob_core::is_quadratically_free(&input.gens, &input.opts)?;

    let mut rep = SdReport::new("free", seed);
    rep.basis_reduction = Some(reduction_report(&cert.reduction, input.gens.len()));
    rep.verdict = Some(cert.verdict.name());
    rep.witness_form = witness_report(&cert.verdict, &cert.reduction.basis)?;
    rep.input = Some(input.echo);
    rep.timings.insert("total_ms", ms(t0, Instant::now()));
    Ok((rep, verdict_exit(&cert.verdict)))
}

fn cmd_form(a: &FormArgs, seed: u64) -> Result<(SdReport, u8), Failure> {
    let t0 = Instant::now();
    let coeffs = a
        .relation
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<Vec<num_bigint::BigInt>, _>>()
        .map_err(|_| Failure::Input(format!("cannot parse relation `{}`", a.relation)))?;
    let n = (1..=coeffs.len())
        .find(|&n| n * (n + 1) / 2 == coeffs.len())
        .ok_or_else(|| {
            Failure::Input(format!(
                "{} coefficients is not a pair count n(n+1)/2",
                coeffs.len()
            ))
        })?;
    if coeffs.iter().all(|c| c == &num_bigint::BigInt::from(0)) {
        return Err(Failure::Input("relation must have a nonzero coefficient".into()));
    }
    // from_coeffs primitivizes: divides by the gcd, first nonzero positive
    let rel = QuadraticRelation::from_coeffs(n, coeffs);
    let form = rel.to_form();

    let mut rep = SdReport::new("form", seed);
    let defect = if a.gen.gens.is_some() || a.gen.exact || a.gen.numeric {
        let input = load_generators(&a.gen)?;
        if input.gens.len() != n {
            return Err(Failure::Input(format!(
                "form has dimension {n} but {} generators were supplied",
                input.gens.len()
            )));
        }
        let d = defect_string(&form, &input.gens)?;
        rep.input = Some(input.echo);
        Some(d)
    } else {
        None
    };
    rep.witness_form = Some(WitnessReport {
        relation: rel.to_string(),
        coeffs: rel.coeffs().iter().map(|c| c.to_string()).collect(),
        form: form.to_literal(),
        isotropy_defect: defect,
    });
    rep.timings.insert("total_ms", ms(t0, Instant::now()));
    Ok((rep, 0))
}

fn cmd_cocycle(a: &CocycleArgs, seed: u64) -> Result<(SdReport, u8), Failure> {
    let t0 = Instant::now();
    let q = IntegralQuadraticForm::parse_literal(&a.form)?;
    let plan = oracle_plan(&a.oracle_n, &a.oracle_modulus)?;
    let (stage, ok) = cocycle_stage(&q, a.grid, &plan, seed, true)?;

    let mut rep = SdReport::new("cocycle", seed);
    rep.cocycle_verification = Some(stage);
    rep.timings.insert("total_ms", ms(t0, Instant::now()));
    Ok((rep, if ok { 0 } else { 1 }))
}

fn cmd_verify(a: &VerifyArgs, seed: u64) -> Result<(SdReport, u8), Failure> {
    let t0 = Instant::now();
    let q = IntegralQuadraticForm::parse_literal(&a.form)?;
    let (stage, ok) = cocycle_stage(&q, a.grid, &[], seed, true)?;

    let mut rep = SdReport::new("verify", seed);
    rep.cocycle_verification = Some(stage);
    rep.timings.insert("total_ms", ms(t0, Instant::now()));
    Ok((rep, if ok { 0 } else { 1 }))
}

fn cmd_restrict(a: &RestrictArgs, seed: u64) -> Result<(SdReport, u8), Failure> {
    let t0 = Instant::now();
    let q = IntegralQuadraticForm::parse_literal(&a.form)?;
    let plan = oracle_plan(&a.oracle_n, &a.oracle_modulus)?;
    let (stage, _) = cocycle_stage(&q, 1, &plan, seed, false)?;

    let mut rep = SdReport::new("restrict", seed);
    rep.cocycle_verification = Some(stage);
    rep.timings.insert("total_ms", ms(t0, Instant::now()));
    Ok((rep, 0))
}

fn cmd_report(a: &ReportCmdArgs, seed: u64) -> Result<(SdReport, u8), Failure> {
    let t0 = Instant::now();
    let input = load_generators(&a.gen)?;
    let t1 = Instant::now();
    let red = reduce_to_basis(&input.gens, &input.opts)?;
    let lat = quadratic_relation_lattice(&red.basis, &input.opts)?;
    let verdict = FreenessVerdict::from_lattice(&lat);
    let t2 = Instant::now();

    let mut rep = SdReport::new("report", seed);
    rep.basis_reduction = Some(reduction_report(&red, input.gens.len()));
    rep.relation_lattice = Some(lattice_report(&lat));
    rep.verdict = Some(verdict.name());
    rep.witness_form = witness_report(&verdict, &red.basis)?;
    rep.input = Some(input.echo);

    // the cocycle stage exists only for an actual witness
    let mut ok = true;
    if let FreenessVerdict::NotFree { witness } = &verdict {
        let plan = oracle_plan(&a.oracle_n, &a.oracle_modulus)?;
        let (stage, stage_ok) = cocycle_stage(&witness.to_form(), a.grid, &plan, seed, true)?;
        rep.cocycle_verification = Some(stage);
        ok = stage_ok;
        rep.timings.insert("cocycle_ms", ms(t2, Instant::now()));
    }
    rep.timings.insert("relations_ms", ms(t1, t2));
    rep.timings.insert("total_ms", ms(t0, Instant::now()));
    Ok((rep, if ok { verdict_exit(&verdict) } else { 1 }))
}

fn ms(from: Instant, to: Instant) -> u64 {
    to.duration_since(from).as_millis() as u64
}

// ---------------------------------------------------------------------------
// text rendering (derived from the JSON value, never computed separately)

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

fn scalar_str(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (key, val) in map {
                if is_scalar(val) {
                    out.push_str(&format!("{pad}{key}: {}\n", scalar_str(val)));
                } else if val.as_array().is_some_and(|a| a.iter().all(is_scalar)) {
                    let items: Vec<String> =
                        val.as_array().unwrap().iter().map(scalar_str).collect();
                    out.push_str(&format!("{pad}{key}: [{}]\n", items.join(", ")));
                } else {
                    out.push_str(&format!("{pad}{key}:\n"));
                    render_text(val, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_scalar(item) {
                    out.push_str(&format!("{pad}- {}\n", scalar_str(item)));
                } else if item.as_array().is_some_and(|a| a.iter().all(is_scalar)) {
                    let cells: Vec<String> =
                        item.as_array().unwrap().iter().map(scalar_str).collect();
                    out.push_str(&format!("{pad}- [{}]\n", cells.join(", ")));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(item, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_str(other))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Relations(a) => cmd_relations(a, cli.seed),
        Command::Free(a) => cmd_free(a, cli.seed),
        Command::Form(a) => cmd_form(a, cli.seed),
        Command::Cocycle(a) => cmd_cocycle(a, cli.seed),
        Command::Verify(a) => cmd_verify(a, cli.seed),
        Command::Restrict(a) => cmd_restrict(a, cli.seed),
        Command::Report(a) => cmd_report(a, cli.seed),
    };
    match outcome {
        Ok((report, code)) => {
            if cli.text {
                let value = serde_json::to_value(&report).expect("report serializes");
                let mut out = String::new();
                render_text(&value, 0, &mut out);
                print!("{out}");
            } else {
                let mut out =
                    serde_json::to_string_pretty(&report).expect("report serializes");
                out.push('\n');
                print!("{out}");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
