//! Command-line interface: batch jobs for semigroup closures, program
//! invariants, the fixed-degree oracle, finiteness checks, and
//! certificate verification.
//!
//! Exit codes: 0 success/exact, 1 input or parse error, 2 lower-bound
//! or inconclusive result (the output document is still written),
//! 3 unsupported instance (e.g. irrational eigenvalues beyond the
//! rational fragment).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use zariski::affine::{location_invariants, mos_invariants, parse_program};
use zariski::bounds::{Bounds, Status};
use zariski::error::Error as ZError;
use zariski::ideal::Ideal;
use zariski::matrix::QMatrix;
use zariski::monomial::MonomialOrder;
use zariski::poly::Polynomial;
use zariski::rat::parse_rat;
use zariski::semigroup::{
    certify, is_finite, semigroup_closure, Finiteness, Generators, SemiClosure,
};
use zariski::vars::VarSpace;

#[derive(Parser)]
#[command(
    name = "zariski",
    version,
    about = "Zariski closures of matrix semigroups and polynomial invariants of affine programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldMode {
    Real,
    Complex,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Output path for the result document (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Scalar field recorded in the output; coefficients are rational
    /// either way, so the ideals coincide.
    #[arg(long, value_enum, default_value_t = FieldMode::Real)]
    field: FieldMode,
    /// Fixpoint iteration bound for group closures.
    #[arg(long, default_value_t = 50)]
    max_group_iter: usize,
    /// Enrichment/saturation rounds at constructible recursion levels.
    #[arg(long, default_value_t = 25)]
    max_enrich: usize,
    /// Seed for the rational witness search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock timing in the output (off by default so that
    /// identical inputs produce byte-identical documents).
    #[arg(long, default_value_t = false)]
    emit_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Zariski closure of the semigroup generated by a matrix set.
    Closure {
        /// Matrix set document {"dim": n, "matrices": [[["p/q", ...], ...], ...]}.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Strongest polynomial invariants per location of an affine program.
    Invariants {
        /// Program in the affine DSL.
        #[arg(long)]
        program: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// All polynomial relations of a fixed degree, by forward propagation.
    Oracle {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Finiteness of the generated matrix semigroup.
    Finite {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check the closed-semigroup certificate of a closure document.
    Certify {
        /// The generator matrix set.
        #[arg(long)]
        input: PathBuf,
        /// A result document produced by `closure`.
        #[arg(long)]
        closure: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            // map library errors onto the documented exit codes
            let code = err
                .downcast_ref::<ZError>()
                .map(|z| match z {
                    ZError::UnsupportedEigenvalues(_)
                    | ZError::NoRationalWitness
                    | ZError::ComponentSplitIncomplete(_) => 3u8,
                    _ => 1u8,
                })
                .unwrap_or(1);
            ExitCode::from(code)
        }
    }
}

fn bounds_of(common: &CommonOpts) -> Bounds {
    Bounds {
        max_group_iter: common.max_group_iter,
        max_enrich: common.max_enrich,
        seed: common.seed,
        witness_retries: 40,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Closure { input, common } => {
            let start = Instant::now();
            let (n, matrices) = read_matrix_document(&input)?;
            let bounds = bounds_of(&common);
            let closure = semigroup_closure(&matrices, &bounds)?;
            let status = status_str(closure.status);
            let mut doc = base_document("closure", status, &common, &bounds);
            doc.insert("dim".into(), json!(n));
            doc.insert("coordinates".into(), json!(coordinate_names(n)));
            doc.insert("pieces".into(), pieces_json(&closure)?);
            doc.insert("combined".into(), ideal_json(&closure.combined()?));
            finish(doc, &common, start, closure.status == Status::Exact)
        }
        Command::Invariants { program, common } => {
            let start = Instant::now();
            let text = std::fs::read_to_string(&program)
                .with_context(|| format!("reading {}", program.display()))?;
            let prog = parse_program(&text)?;
            let bounds = bounds_of(&common);
            let report = location_invariants(&prog, &bounds)?;
            let status = status_str(report.status);
            let mut doc = base_document("invariants", status, &common, &bounds);
            doc.insert("variables".into(), json!(prog.variables.names()));
            doc.insert("encoding_dim".into(), json!(report.encoding_dim));
            let locs: Vec<Value> = report
                .locations
                .iter()
                .map(|loc| {
                    json!({
                        "name": loc.location,
                        "status": status_str(loc.status),
                        "reachable": loc.reachable,
                        "generators": ideal_json(&loc.ideal),
                    })
                })
                .collect();
            doc.insert("locations".into(), Value::Array(locs));
            finish(doc, &common, start, report.status == Status::Exact)
        }
        Command::Oracle {
            program,
            degree,
            common,
        } => {
            let start = Instant::now();
            let text = std::fs::read_to_string(&program)
                .with_context(|| format!("reading {}", program.display()))?;
            let prog = parse_program(&text)?;
            let relations = mos_invariants(&prog, degree)?;
            let mut doc = base_document("oracle", "exact", &common, &bounds_of(&common));
            doc.insert("variables".into(), json!(prog.variables.names()));
            doc.insert("degree".into(), json!(degree));
            let locs: Vec<Value> = prog
                .locations
                .iter()
                .zip(&relations)
                .map(|(name, polys)| {
                    let texts: Vec<String> = polys
                        .iter()
                        .map(|p| p.to_string_with(MonomialOrder::GrevLex))
                        .collect();
                    json!({"name": name, "relations": texts})
                })
                .collect();
            doc.insert("locations".into(), Value::Array(locs));
            finish(doc, &common, start, true)
        }
        Command::Finite { input, common } => {
            let start = Instant::now();
            let (n, matrices) = read_matrix_document(&input)?;
            let bounds = bounds_of(&common);
            let verdict = is_finite(&matrices, &bounds)?;
            let (status, ok) = match &verdict {
                Finiteness::Inconclusive => ("inconclusive", false),
                _ => ("exact", true),
            };
            let mut doc = base_document("finite", status, &common, &bounds);
            doc.insert("dim".into(), json!(n));
            let finite_json = match verdict {
                Finiteness::Finite { count_bound } => {
                    json!({"finite": true, "count_bound": count_bound})
                }
                Finiteness::Infinite => json!({"finite": false}),
                Finiteness::Inconclusive => json!({"finite": Value::Null}),
            };
            doc.insert("finiteness".into(), finite_json);
            finish(doc, &common, start, ok)
        }
        Command::Certify {
            input,
            closure,
            common,
        } => {
            let start = Instant::now();
            let (n, matrices) = read_matrix_document(&input)?;
            let closure_doc: Value = serde_json::from_str(
                &std::fs::read_to_string(&closure)
                    .with_context(|| format!("reading {}", closure.display()))?,
            )
            .context("parsing the closure document")?;
            let semi = closure_from_document(n, &closure_doc)?;
            let verdict = certify(&semi, &Generators::Matrices(matrices))?;
            let bounds = bounds_of(&common);
            let status = if verdict { "exact" } else { "inconclusive" };
            let mut doc = base_document("certify", status, &common, &bounds);
            doc.insert("dim".into(), json!(n));
            doc.insert("certificate".into(), json!({"verdict": verdict}));
            finish(doc, &common, start, verdict)
        }
    }
}

fn coordinate_names(n: usize) -> Vec<String> {
    VarSpace::matrix(n).names().to_vec()
}

fn status_str(status: Status) -> &'static str {
    match status {
        Status::Exact => "exact",
        Status::LowerBound => "lower-bound",
    }
}

fn base_document(
    command: &str,
    status: &str,
    common: &CommonOpts,
    bounds: &Bounds,
) -> Map<String, Value> {
    let mut doc = Map::new();
    doc.insert("tool".into(), json!("zariski"));
    doc.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    doc.insert("command".into(), json!(command));
    doc.insert("status".into(), json!(status));
    doc.insert(
        "field".into(),
        json!(match common.field {
            FieldMode::Real => "real",
            FieldMode::Complex => "complex",
        }),
    );
    doc.insert(
        "bounds".into(),
        json!({
            "max_group_iter": bounds.max_group_iter,
            "max_enrich": bounds.max_enrich,
            "seed": bounds.seed,
        }),
    );
    doc
}

fn ideal_json(ideal: &Ideal) -> Value {
    let gens: Vec<String> = ideal
        .canonical_gens()
        .iter()
        .map(|g| g.to_string_with(MonomialOrder::GrevLex))
        .collect();
    json!(gens)
}

fn pieces_json(closure: &SemiClosure) -> anyhow::Result<Value> {
    let pieces: Vec<Value> = closure
        .pieces
        .iter()
        .map(|p| json!({ "generators": ideal_json(p) }))
        .collect();
    Ok(Value::Array(pieces))
}

fn finish(
    mut doc: Map<String, Value>,
    common: &CommonOpts,
    start: Instant,
    exact: bool,
) -> anyhow::Result<ExitCode> {
    if common.emit_timing {
        doc.insert(
            "timing_ms".into(),
            json!(start.elapsed().as_millis() as u64),
        );
    }
    let text = serde_json::to_string_pretty(&Value::Object(doc))? + "\n";
    match &common.output {
        Some(path) => write_atomically(path, &text)?,
        None => print!("{text}"),
    }
    Ok(if exact {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn write_atomically(path: &Path, text: &str) -> anyhow::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

/// Parses the matrix set document. Rationals must be quoted `p/q`
/// strings: floating-point numbers cannot represent exact inputs.
fn read_matrix_document(path: &Path) -> anyhow::Result<(usize, Vec<QMatrix>)> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).context("parsing the matrix document")?;
    let dim = value
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| anyhow!("matrix document: missing integer field `dim`"))?
        as usize;
    if dim == 0 {
        return Err(anyhow!("matrix document: `dim` must be positive"));
    }
    let list = value
        .get("matrices")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("matrix document: missing array field `matrices`"))?;
    let mut matrices = Vec::with_capacity(list.len());
    for (mi, mat) in list.iter().enumerate() {
        let rows = mat
            .as_array()
            .ok_or_else(|| anyhow!("matrix {mi}: expected an array of rows"))?;
        if rows.len() != dim {
            return Err(anyhow!(
                "matrix {mi}: expected {dim} rows, found {}",
                rows.len()
            ));
        }
        let mut qrows = Vec::with_capacity(dim);
        for (ri, row) in rows.iter().enumerate() {
            let entries = row
                .as_array()
                .ok_or_else(|| anyhow!("matrix {mi} row {ri}: expected an array"))?;
            if entries.len() != dim {
                return Err(anyhow!("matrix {mi} row {ri}: expected {dim} entries"));
            }
            let mut qrow = Vec::with_capacity(dim);
            for (ci, entry) in entries.iter().enumerate() {
                let s = entry.as_str().ok_or_else(|| {
                    anyhow!(
                        "matrix {mi} entry ({ri},{ci}): rationals must be quoted `p/q` strings; floating point is not exact"
                    )
                })?;
                qrow.push(parse_rat(s)?);
            }
            qrows.push(qrow);
        }
        matrices.push(QMatrix::from_rows(qrows));
    }
    Ok((dim, matrices))
}

/// Rebuilds a closure from a `closure` result document: pieces parsed
/// back through the canonical polynomial text format.
fn closure_from_document(n: usize, doc: &Value) -> anyhow::Result<SemiClosure> {
    let space = VarSpace::matrix(n);
    let pieces_value = doc
        .get("pieces")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("closure document: missing `pieces`"))?;
    let mut pieces = Vec::new();
    for (pi, piece) in pieces_value.iter().enumerate() {
        let gens = piece
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("closure document: piece {pi} missing `generators`"))?;
        let mut polys: Vec<Polynomial> = Vec::new();
        for g in gens {
            let text = g
                .as_str()
                .ok_or_else(|| anyhow!("closure document: generators must be strings"))?;
            polys.push(Polynomial::parse(&space, text)?);
        }
        pieces.push(Ideal::new(&space, polys));
    }
    let status = match doc.get("status").and_then(Value::as_str) {
        Some("exact") => Status::Exact,
        _ => Status::LowerBound,
    };
    Ok(SemiClosure::from_pieces(n, pieces, status))
}
