//! Command-line front end. Every subcommand produces a [`Report`]; the exit
//! code is 0 on success or pass, 2 on fail, 3 on hypothesis-not-met and 1 on
//! any input error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraPresentation, Element};
use crate::certificates::{certify, CertOptions, Certificate, Claim, ProbeTarget};
use crate::closure::{closure, pair_closure_with, stable_word_span, word_oracle_levels, word_budget, GeneratorSet, Side, Span, Structure};
use crate::decomposition::{peirce_decompose, z_grading_with, PEIRCE_NAMES};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::FieldKind;
use crate::format::{input_hash, read_algebra, to_canonical_json};
use crate::instances::{InstanceKind, InstanceSpec, MatrixInvolution};
use crate::linalg::Subspace;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_NOT_MET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "algcert", version, about = "Exact finite-generation certificates for algebras with involution")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run every batch on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the algebra axioms and the ideal hypotheses of each idempotent.
    Validate {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Peirce decomposition and, with an involution, the five-part grading.
    Decompose {
        file: PathBuf,
        #[arg(long, default_value = "e")]
        idempotent: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Saturation closure of named generators.
    Closure {
        file: PathBuf,
        #[arg(long)]
        structure: Structure,
        /// Comma-separated names; pair structures need a `-` or `+` prefix.
        #[arg(long)]
        gens: String,
        /// Check pair generators against `(eR(1-e), (1-e)Re)`.
        #[arg(long)]
        idempotent: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Brute-force word enumeration up to a length.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        structure: Structure,
        #[arg(long)]
        max_len: usize,
        /// Defaults to the declared generators (single structures only).
        #[arg(long)]
        gens: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run one certificate.
    Certify {
        file: PathBuf,
        #[arg(long)]
        claim: Claim,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Longest word tried when decomposing generators.
        #[arg(long, default_value_t = 6)]
        cap: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        max_gen: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value = "e")]
        idempotent: String,
        /// Stagnation target: `rr` or `kk`.
        #[arg(long)]
        target: Option<ProbeTarget>,
        #[arg(long, default_value_t = 2)]
        n_bound: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a built-in instance as an algebra file.
    Build {
        #[arg(long, value_parser = parse_kind)]
        kind: InstanceKind,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        truncation: usize,
        #[arg(long, default_value = "Q")]
        field: FieldKind,
        #[arg(long, value_parser = parse_involution, default_value = "none")]
        involution: MatrixInvolution,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn parse_snake<T: serde::de::DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> std::result::Result<InstanceKind, String> {
    parse_snake(s)
}

fn parse_involution(s: &str) -> std::result::Result<MatrixInvolution, String> {
    parse_snake(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_hash: Option<String>,
    pub certificates: Vec<Certificate>,
    pub result: Value,
    pub wall_time_ms: u64,
}

impl Report {
    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        let value = sort_keys(serde_json::to_value(self).expect("report serializes"));
        serde_json::to_string_pretty(&value).expect("value serializes") + "\n"
    }
}

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect::<Map<_, _>>())
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// What the binary prints and returns.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

impl Outcome {
    fn message(code: i32, stdout: String, stderr: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr,
            report: None,
        }
    }
}

pub fn run_cli<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::message(EXIT_OK, text, String::new())
                }
                _ => Outcome::message(EXIT_INPUT, String::new(), text),
            };
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let start = Instant::now();
    let (out_path, run) = match &cli.command {
        Command::Build { .. } => (None, run_command(&cli.command, exec)),
        Command::Validate { output, .. }
        | Command::Decompose { output, .. }
        | Command::Closure { output, .. }
        | Command::Oracle { output, .. }
        | Command::Certify { output, .. } => (output.clone(), run_command(&cli.command, exec)),
    };
    let run = match run {
        Ok(r) => r,
        Err(e) => return Outcome::message(EXIT_INPUT, String::new(), format!("error: {e}\n")),
    };
    let report = Report {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: echo,
        input_hash: run.input_hash,
        certificates: run.certificates,
        result: run.result,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    let text = report.to_json();
    let stdout = match out_path {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                return Outcome::message(EXIT_INPUT, String::new(), format!("error: {}: {e}\n", path.display()));
            }
            String::new()
        }
        None => text,
    };
    Outcome {
        code: run.code,
        stdout,
        stderr: String::new(),
        report: Some(report),
    }
}

struct Run {
    code: i32,
    input_hash: Option<String>,
    certificates: Vec<Certificate>,
    result: Value,
}

impl Run {
    fn new(p: &AlgebraPresentation, code: i32, result: Value) -> Self {
        Run {
            code,
            input_hash: Some(input_hash(p)),
            certificates: Vec::new(),
            result,
        }
    }
}

fn run_command(cmd: &Command, exec: Exec) -> Result<Run> {
    match cmd {
        Command::Validate { file, .. } => validate(&load(file)?),
        Command::Decompose { file, idempotent, .. } => decompose(&load(file)?, idempotent, exec),
        Command::Closure {
            file,
            structure,
            gens,
            idempotent,
            ..
        } => {
            let p = load(file)?;
            closure_cmd(&p, *structure, gens, idempotent.as_deref(), exec)
        }
        Command::Oracle {
            file,
            structure,
            max_len,
            gens,
            ..
        } => {
            let p = load(file)?;
            oracle_cmd(&p, *structure, gens.as_deref(), *max_len, exec)
        }
        Command::Certify {
            file,
            claim,
            seed,
            cap,
            trials,
            max_gen,
            samples,
            idempotent,
            target,
            n_bound,
            ..
        } => {
            let p = load(file)?;
            let opts = CertOptions {
                seed: *seed,
                cap: *cap,
                trials: *trials,
                max_gen: *max_gen,
                samples: *samples,
                n_bound: *n_bound,
                target: *target,
                exec,
            };
            let cert = certify(&p, *claim, idempotent, &opts)?;
            let result = json!({"claim": cert.claim, "verdict": cert.verdict, "idempotent": idempotent});
            let mut run = Run::new(&p, cert.verdict.exit_code(), result);
            run.certificates.push(cert);
            Ok(run)
        }
        Command::Build {
            kind,
            n,
            truncation,
            field,
            involution,
            output,
        } => {
            let spec = InstanceSpec {
                kind: *kind,
                n: *n,
                truncation: *truncation,
                field: *field,
                involution: *involution,
            };
            let p = spec.build()?;
            std::fs::write(output, to_canonical_json(&p))?;
            let result = json!({
                "name": p.name(),
                "dim": p.dim(),
                "field": p.field().to_string(),
                "file": output.display().to_string(),
            });
            Ok(Run::new(&p, EXIT_OK, result))
        }
    }
}

fn load(path: &Path) -> Result<AlgebraPresentation> {
    read_algebra(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })
}

fn validate(p: &AlgebraPresentation) -> Result<Run> {
    let report = p.validate();
    let code = if report.is_clean() { EXIT_OK } else { EXIT_FAIL };
    let result = json!({
        "name": p.name(),
        "dim": p.dim(),
        "field": p.field().to_string(),
        "unital": p.is_unital(),
        "involution": p.has_involution(),
        "clean": report.is_clean(),
        "violations": report.violations,
        "hypotheses": report.hypotheses,
    });
    Ok(Run::new(p, code, result))
}

fn labels_of(p: &AlgebraPresentation, s: &Subspace) -> Vec<String> {
    s.basis().iter().map(|v| p.display(&Element::new(v.clone()))).collect()
}

fn decompose(p: &AlgebraPresentation, name: &str, exec: Exec) -> Result<Run> {
    let e = p.named(name)?.clone();
    let peirce = peirce_decompose(p, &e)?;
    let components: Map<String, Value> = PEIRCE_NAMES
        .iter()
        .zip(&peirce.components)
        .map(|(n, s)| (n.to_string(), json!(labels_of(p, s))))
        .collect();
    let mut ok = peirce.is_direct_sum();
    let mut result = json!({
        "idempotent": name,
        "peirce": {
            "dims": peirce.dims(),
            "components": components,
            "direct_sum": peirce.is_direct_sum(),
        },
    });
    if p.has_involution() {
        result["grading"] = match z_grading_with(p, &e, exec) {
            Ok(g) => {
                ok &= g.is_multiplicative() && g.is_direct_sum();
                let comps: Map<String, Value> = (-2..=2)
                    .map(|d| (d.to_string(), json!(labels_of(p, g.component(d)))))
                    .collect();
                json!({
                    "dims": g.dims(),
                    "components": comps,
                    "direct_sum": g.is_direct_sum(),
                    "multiplicative": g.is_multiplicative(),
                    "checked_products": g.checked_products,
                    "violations": g.violations,
                    "s_is_zero": g.s_is_zero,
                })
            }
            Err(e @ (Error::NotIdempotent(_) | Error::IdempotentConditions(_))) => {
                json!({"unavailable": e.to_string()})
            }
            Err(other) => return Err(other),
        };
    }
    Ok(Run::new(p, if ok { EXIT_OK } else { EXIT_FAIL }, result))
}

/// A generator name: a declared idempotent or generator, or a basis label.
fn resolve(p: &AlgebraPresentation, name: &str) -> Result<Element> {
    if let Ok(x) = p.named(name) {
        return Ok(x.clone());
    }
    p.labels()
        .iter()
        .position(|l| l == name)
        .map(|i| p.basis_element(i))
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

fn parse_gens(p: &AlgebraPresentation, structure: Structure, list: &str) -> Result<GeneratorSet> {
    let mut set = GeneratorSet::new(structure);
    for raw in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (side, name) = match (structure.is_pair(), raw.chars().next()) {
            (true, Some('-')) => (Some(Side::Minus), &raw[1..]),
            (true, Some('+')) => (Some(Side::Plus), &raw[1..]),
            (true, _) => {
                return Err(Error::StructureMismatch(format!(
                    "pair generator `{raw}` needs a `-` or `+` prefix"
                )))
            }
            (false, _) => (None, raw),
        };
        set.push(raw, resolve(p, name)?, "command line", side)?;
    }
    if set.is_empty() {
        return Err(Error::InvalidInstance("no generators given".into()));
    }
    Ok(set)
}

fn span_result(p: &AlgebraPresentation, span: &Span) -> Value {
    match span {
        Span::Single(s) => json!({"rank": s.rank(), "basis": labels_of(p, s)}),
        Span::Pair { minus, plus } => json!({
            "rank": span.rank(),
            "minus": {"rank": minus.rank(), "basis": labels_of(p, minus)},
            "plus": {"rank": plus.rank(), "basis": labels_of(p, plus)},
        }),
    }
}

fn closure_cmd(
    p: &AlgebraPresentation,
    structure: Structure,
    gens: &str,
    idempotent: Option<&str>,
    exec: Exec,
) -> Result<Run> {
    let set = parse_gens(p, structure, gens)?;
    let trace = match (structure.is_pair(), idempotent) {
        (true, Some(name)) => {
            let peirce = peirce_decompose(p, p.named(name)?)?;
            pair_closure_with(p, &set, Some((peirce.e_r_f(), peirce.f_r_e())), exec)?
        }
        _ => closure(p, &set, exec)?,
    };
    let result = json!({
        "structure": structure,
        "generators": set,
        "trace": trace,
        "span": span_result(p, &trace.final_span),
    });
    Ok(Run::new(p, EXIT_OK, result))
}

fn oracle_cmd(p: &AlgebraPresentation, structure: Structure, gens: Option<&str>, max_len: usize, exec: Exec) -> Result<Run> {
    let set = match gens {
        Some(list) => parse_gens(p, structure, list)?,
        None if structure.is_pair() => {
            return Err(Error::StructureMismatch("pair structures need explicit --gens".into()));
        }
        None => {
            let elems: Vec<(String, Element)> = p.generators_or_basis();
            let mut set = GeneratorSet::new(structure);
            for (label, x) in elems {
                set.push(label, x, "declared generator", None)?;
            }
            set
        }
    };
    let levels = word_oracle_levels(p, &set, max_len, word_budget())?;
    let last = levels.last().expect("at least one level");
    let closed = closure(p, &set, exec)?;
    let stable = stable_word_span(p, &set, max_len).ok();
    let result = json!({
        "structure": structure,
        "max_len": max_len,
        "level_ranks": levels.iter().map(Span::rank).collect::<Vec<_>>(),
        "span": span_result(p, last),
        "closure_rank": closed.final_rank(),
        "agrees_with_closure": *last == closed.final_span,
        "stable_at": stable.map(|(_, len)| len),
    });
    Ok(Run::new(p, EXIT_OK, result))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_recursively() {
        let v = sort_keys(json!({"b": 1, "a": {"d": [{"z": 0, "y": 1}], "c": 2}}));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"a":{"c":2,"d":[{"y":1,"z":0}]},"b":1}"#);
    }

    #[test]
    fn parse_errors_exit_one() {
        assert_eq!(run_cli(["algcert", "frobnicate"]).code, EXIT_INPUT);
        assert_eq!(run_cli(["algcert", "certify", "x.json", "--claim", "lemma99"]).code, EXIT_INPUT);
        assert_eq!(run_cli(["algcert", "--help"]).code, EXIT_OK);
    }

    #[test]
    fn kind_names_are_snake_case() {
        assert_eq!(parse_kind("flip_matrix_n").unwrap(), InstanceKind::FlipMatrixN);
        assert_eq!(parse_involution("symplectic").unwrap(), MatrixInvolution::Symplectic);
        assert!(parse_kind("matrix").is_err());
    }
}
