//! Job specifications, report rendering and the sweep driver behind the
//! `asymcap` binary.
//!
//! A job names a source (`catalog:<group>/<rep>` or a representation file),
//! one command and its parameters. [`run`] produces a self-describing report
//! (tool version, SHA-256 input digest, seed) and an exit status:
//! `0` success, `1` I/O or format errors, `2` validation failures.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::capacity::{capacity_report, capacity_max, capacity_symmetric, classify, optimal_state};
use crate::decompose::{algebra_dimension, decompose, Decomposition, DEFAULT_DECOMP_TOL};
use crate::error::{Error, Result};
use crate::oneshot::{
    bell_codebook, monte_carlo_rate_test, pgm_decoder_uniform, projective_decoder, simulate_error,
    symmetric_codebook, EncoderKind,
};
use crate::repcore::io::{density_matrix_from_json, load_source, write_matrix_dump};
use crate::repcore::Representation;
use crate::states::DensityMatrix;

pub const TOOL: &str = "asymcap";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 10;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Validate,
    Decompose,
    Classify,
    Capacity,
    Codebook,
    Simulate,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Validate => "validate",
            Self::Decompose => "decompose",
            Self::Classify => "classify",
            Self::Capacity => "capacity",
            Self::Codebook => "codebook",
            Self::Simulate => "simulate",
        }
    }

    /// Result columns emitted in CSV form, in order.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Self::Validate => &["group_order", "dim", "generators", "unitarity_residual", "homomorphism_residual"],
            Self::Decompose => &[
                "dim",
                "blocks",
                "commutant_dimension",
                "algebra_dimension",
                "reconstruction_residual",
                "alignment_residual",
                "basis_unitarity_residual",
            ],
            Self::Classify => &[
                "blocks",
                "abelian",
                "irreducible",
                "superdense_possible",
                "covariant_sufficient",
                "c_sym_bits",
                "c_max_bits",
            ],
            Self::Capacity => &[
                "state",
                "c_sym",
                "c_max",
                "lower_bound",
                "lower_bound_clamped",
                "covariant_lower_bound",
                "covariant_lower_bound_clamped",
            ],
            Self::Codebook => &[
                "c_sym_bits",
                "symmetric_size",
                "symmetric_rate_bits",
                "symmetric_max_error",
                "bell_block",
                "bell_size",
                "bell_rate_bits",
                "bell_max_error",
                "bell_avg_error",
            ],
            Self::Simulate => &[
                "n",
                "rate",
                "trials",
                "messages",
                "mean_error",
                "min_error",
                "max_error",
                "encoder_kind",
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Command-specific parameters; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Density-matrix file for `capacity` and `simulate` (defaults to the
    /// optimal state `ψ`).
    pub state: Option<PathBuf>,
    pub n: Option<usize>,
    pub rate: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    /// Block for the Bell codebook (defaults to the first square block with `d ≥ 2`).
    pub block: Option<usize>,
    /// Encoder family for `simulate` (defaults to symmetric unitaries).
    pub encoder: Option<EncoderKind>,
    /// Write the basis change `B` of `decompose` as a binary dump.
    pub dump_basis: Option<PathBuf>,
}

impl Params {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_DECOMP_TOL)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    /// `catalog:<group>/<rep>` or a path to a representation file.
    pub source: String,
    pub command: Command,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: OutputSpec,
}

impl JobSpec {
    pub fn new(source: impl Into<String>, command: Command) -> Self {
        Self { source: source.into(), command, params: Params::default(), output: OutputSpec::default() }
    }

    /// Parses a JSON job; unknown keys are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        crate::repcore::io::parse_json(text)
    }
}

/// Exit status for an error: I/O and parse problems are `1`, everything the
/// toolkit rejects on mathematical grounds is `2`.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::MalformedInput { .. } | Error::UnknownCatalogId(_) => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}

/// Stable identifier of an error variant for reports.
pub fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::NotAGroup(_) => "not_a_group",
        Error::NotUnitary { .. } => "not_unitary",
        Error::NotHomomorphism { .. } => "not_homomorphism",
        Error::ShapeMismatch(_) => "shape_mismatch",
        Error::DimensionCapExceeded { .. } => "dimension_cap_exceeded",
        Error::DegenerateSplit { .. } => "degenerate_split",
        Error::ResidualTooLarge { .. } => "residual_too_large",
        Error::InvalidState(_) => "invalid_state",
        Error::NotSymmetric { .. } => "not_symmetric",
        Error::NotBlockForm { .. } => "not_block_form",
        Error::InvalidDistribution(_) => "invalid_distribution",
        Error::SupportMismatch { .. } => "support_mismatch",
        Error::ZeroBlockMass { .. } => "zero_block_mass",
        Error::SupportsOverlap { .. } => "supports_overlap",
        Error::BlockNotSquare { .. } => "block_not_square",
        Error::InvalidPovm(_) => "invalid_povm",
        Error::UnknownCatalogId(_) => "unknown_catalog_id",
        Error::MalformedInput { .. } => "malformed_input",
        Error::Io(_) => "io",
    }
}

/// Rounds to 12 significant digits (and turns `-0` into `0`).
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = json!(round_sig(x));
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest.iter() {
        let _ = write!(out, "{b:02x}");
    }
    out
}

/// Outcome of a single job.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    /// The report object (also rendered into `rendered`).
    pub report: Value,
    /// The report in the requested format.
    pub rendered: String,
}

struct Inputs {
    rep: Representation,
    state: Option<(DensityMatrix, Vec<u8>)>,
    digest: String,
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_inputs(job: &JobSpec) -> std::result::Result<Inputs, (Error, Option<String>)> {
    let source = load_source(&job.source, job.params.tol()).map_err(|e| (e, None))?;
    let mut hasher = Sha256::new();
    hasher.update(&source.bytes);
    let state = match &job.params.state {
        Some(path) => {
            let bytes = read_file(path).map_err(|e| (e, None))?;
            hasher.update(b"\0state\0");
            hasher.update(&bytes);
            let text = std::str::from_utf8(&bytes).map_err(|e| {
                (Error::MalformedInput { field: "state".into(), message: e.to_string() }, None)
            })?;
            let rho = density_matrix_from_json(text).map_err(|e| (e, None))?;
            Some((rho, bytes))
        }
        None => None,
    };
    let digest = format!("sha256:{}", sha256_hex(&hasher.finalize()));
    Ok(Inputs { rep: source.representation, state, digest })
}

fn blocks_string(dec: &Decomposition) -> String {
    dec.block_dims().iter().map(|(l, r)| format!("({l},{r})")).collect::<Vec<_>>().join(";")
}

fn state_for(inputs: &Inputs, dec: &Decomposition) -> Result<(DensityMatrix, &'static str)> {
    match &inputs.state {
        Some((rho, _)) if rho.dim() != dec.dim() => Err(Error::ShapeMismatch(format!(
            "state dim {} vs representation dim {}",
            rho.dim(),
            dec.dim()
        ))),
        Some((rho, _)) => Ok((rho.clone(), "file")),
        None => Ok((optimal_state(dec), "optimal")),
    }
}

fn to_map(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn execute(job: &JobSpec, inputs: &Inputs) -> Result<Map<String, Value>> {
    let rep = &inputs.rep;
    let p = &job.params;
    if job.command == Command::Validate {
        return Ok(to_map(json!({
            "group_order": rep.group().order(),
            "dim": rep.dim(),
            "generators": rep.group().generators(),
            "abelian_group": rep.group().is_abelian(),
            "unitarity_residual": rep.unitarity_residual(),
            "homomorphism_residual": rep.homomorphism_residual(),
        })));
    }
    let dec = decompose(rep, p.tol(), p.seed())?;
    let out = match job.command {
        Command::Validate => unreachable!(),
        Command::Decompose => {
            if let Some(path) = &p.dump_basis {
                let file = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                write_matrix_dump(dec.basis_change(), std::io::BufWriter::new(file))?;
            }
            let blocks: Vec<Value> = dec
                .blocks()
                .iter()
                .enumerate()
                .map(|(q, b)| {
                    let character: Vec<[f64; 2]> = b
                        .character
                        .iter()
                        .map(|z| [(z.re * 1e9).round() / 1e9, (z.im * 1e9).round() / 1e9])
                        .collect();
                    json!({"q": q, "d_L": b.d_left, "d_R": b.d_right, "character": character})
                })
                .collect();
            json!({
                "dim": dec.dim(),
                "blocks": blocks_string(&dec),
                "block_table": blocks,
                "commutant_dimension": dec.blocks().iter().map(|b| b.d_right * b.d_right).sum::<usize>(),
                "algebra_dimension": algebra_dimension(rep),
                "reconstruction_residual": dec.max_reconstruction_residual(),
                "alignment_residual": dec.max_alignment_residual(),
                "basis_unitarity_residual": dec.basis_unitarity_residual(),
            })
        }
        Command::Classify => {
            let class = classify(&dec);
            let mut m = to_map(serde_json::to_value(&class).expect("classification serializes"));
            m.insert("blocks".into(), json!(blocks_string(&dec)));
            m.insert("c_sym_bits".into(), json!(capacity_symmetric(&dec)));
            m.insert("c_max_bits".into(), json!(capacity_max(&dec)));
            Value::Object(m)
        }
        Command::Capacity => {
            let (rho, label) = state_for(inputs, &dec)?;
            let mut m = to_map(serde_json::to_value(capacity_report(&dec, &rho)).expect("report serializes"));
            m.insert("state".into(), json!(label));
            Value::Object(m)
        }
        Command::Codebook => {
            let sym = symmetric_codebook(&dec);
            let sym_stats = simulate_error(&sym, &projective_decoder(&sym)?)?;
            let bell_block = match p.block {
                Some(q) if q >= dec.blocks().len() => {
                    return Err(Error::ShapeMismatch(format!("block {q} out of range")))
                }
                Some(q) => Some(q),
                None => dec.blocks().iter().position(|b| b.d_left == b.d_right && b.d_left >= 2),
            };
            let mut m = to_map(json!({
                "c_sym_bits": capacity_symmetric(&dec),
                "c_max_bits": capacity_max(&dec),
                "symmetric_size": sym.len(),
                "symmetric_rate_bits": sym.rate_bits(),
                "symmetric_max_error": sym_stats.max_error,
                "symmetric_avg_error": sym_stats.avg_error,
                "bell_block": null,
                "bell_size": null,
                "bell_rate_bits": null,
                "bell_max_error": null,
                "bell_avg_error": null,
            }));
            if let Some(q) = bell_block {
                let bell = bell_codebook(&dec, q)?;
                let residual = bell.verify()?;
                let stats = simulate_error(&bell, &pgm_decoder_uniform(&bell)?)?;
                m.insert("bell_block".into(), json!(q));
                m.insert("bell_size".into(), json!(bell.len()));
                m.insert("bell_rate_bits".into(), json!(bell.rate_bits()));
                m.insert("bell_max_error".into(), json!(stats.max_error));
                m.insert("bell_avg_error".into(), json!(stats.avg_error));
                m.insert("bell_encoder_residual".into(), json!(residual));
            }
            Value::Object(m)
        }
        Command::Simulate => {
            let (rho, label) = state_for(inputs, &dec)?;
            let rate = p.rate.ok_or_else(|| Error::MalformedInput {
                field: "rate".into(),
                message: "simulate needs a rate".into(),
            })?;
            let report = monte_carlo_rate_test(
                &dec,
                &rho,
                p.n.unwrap_or(1),
                rate,
                p.trials.unwrap_or(DEFAULT_TRIALS),
                p.seed(),
                p.encoder.unwrap_or(EncoderKind::SymmetricUnitary),
            )?;
            let mut m = to_map(serde_json::to_value(report).expect("report serializes"));
            m.insert("state".into(), json!(label));
            Value::Object(m)
        }
    };
    Ok(to_map(out))
}

fn header(job: &JobSpec, digest: Option<&str>) -> Map<String, Value> {
    to_map(json!({
        "tool": TOOL,
        "version": VERSION,
        "command": job.command.as_str(),
        "source": job.source,
        "input_digest": digest,
        "seed": job.params.seed(),
        "tol": job.params.tol(),
    }))
}

/// Runs one job without touching the output path; returns the exit code and
/// the report object.
pub fn evaluate(job: &JobSpec) -> (i32, Value) {
    let (code, mut report) = match load_inputs(job) {
        Err((err, digest)) => {
            let mut r = header(job, digest.as_deref());
            r.insert("status".into(), json!("error"));
            r.insert("error".into(), json!({"kind": error_kind(&err), "message": err.to_string()}));
            (exit_code(&err), Value::Object(r))
        }
        Ok(inputs) => {
            let mut r = header(job, Some(&inputs.digest));
            match execute(job, &inputs) {
                Ok(result) => {
                    r.insert("status".into(), json!("ok"));
                    r.insert("result".into(), Value::Object(result));
                    (EXIT_OK, Value::Object(r))
                }
                Err(err) => {
                    r.insert("status".into(), json!("error"));
                    r.insert("error".into(), json!({"kind": error_kind(&err), "message": err.to_string()}));
                    (exit_code(&err), Value::Object(r))
                }
            }
        }
    };
    round_value(&mut report);
    (code, report)
}

const COMMON_COLUMNS: &[&str] = &["source", "command", "status", "error", "tool", "version", "input_digest", "seed"];

fn csv_cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn csv_record(command: Command, report: &Value) -> Vec<String> {
    let mut row: Vec<String> = COMMON_COLUMNS
        .iter()
        .map(|&col| match col {
            "error" => csv_cell(report.pointer("/error/message")),
            _ => csv_cell(report.get(col)),
        })
        .collect();
    let result = report.get("result");
    row.extend(command.columns().iter().map(|col| csv_cell(result.and_then(|r| r.get(*col)))));
    row
}

/// Renders rows as CSV with the fixed header for `command`.
pub fn render_csv(command: Command, reports: &[Value]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = COMMON_COLUMNS.iter().chain(command.columns()).copied().collect();
    w.write_record(&header).expect("in-memory csv");
    for report in reports {
        w.write_record(csv_record(command, report)).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

fn render(job: &JobSpec, report: &Value) -> String {
    match job.output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => render_csv(job.command, std::slice::from_ref(report)),
    }
}

fn write_output(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Runs a job and writes its report to `job.output.path` when set.
pub fn run(job: &JobSpec) -> RunOutcome {
    let (mut exit_code, report) = evaluate(job);
    let rendered = render(job, &report);
    if let Some(path) = &job.output.path {
        if write_output(path, &rendered).is_err() {
            exit_code = EXIT_IO;
        }
    }
    RunOutcome { exit_code, report, rendered }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub exit_code: i32,
    pub csv: String,
    pub reports: Vec<Value>,
}

/// Runs every job (in parallel, reported in input order) and aggregates one
/// CSV row per job. Jobs whose command differs from `command` get an error row.
/// Exit `0` if any row succeeded, `2` otherwise (including no jobs).
pub fn sweep(command: Command, jobs: &[JobSpec]) -> SweepOutcome {
    let reports: Vec<(i32, Value)> = jobs
        .par_iter()
        .map(|job| {
            if job.command != command {
                let mut r = header(job, None);
                r.insert("status".into(), json!("error"));
                r.insert(
                    "error".into(),
                    json!({"kind": "malformed_input", "message": format!("sweep runs `{}` only", command.as_str())}),
                );
                (EXIT_IO, Value::Object(r))
            } else {
                evaluate(job)
            }
        })
        .collect();
    let any_ok = reports.iter().any(|(code, _)| *code == EXIT_OK);
    let reports: Vec<Value> = reports.into_iter().map(|(_, r)| r).collect();
    SweepOutcome {
        exit_code: if any_ok { EXIT_OK } else { EXIT_VALIDATION },
        csv: render_csv(command, &reports),
        reports,
    }
}

/// Expands `all` into every builtin fixture; other ids pass through.
pub fn expand_catalog_ids(ids: &[String]) -> Vec<String> {
    ids.iter()
        .flat_map(|id| {
            if id == "all" {
                crate::repcore::catalog::FIXTURES.iter().map(|s| s.to_string()).collect()
            } else {
                vec![crate::repcore::catalog::strip_prefix(id).to_string()]
            }
        })
        .collect()
}
