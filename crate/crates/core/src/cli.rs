//! Command-line front end. Every subcommand writes one report to stdout,
//! as JSON (default) or a flat CSV projection.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input, 3 violated
//! precondition or invalid protocol, 4 a checked property failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::metrics::{
    fidelity, fuchs_caves, mutual_information, relative_entropy, trace_distance,
    von_neumann_entropy,
};
use crate::protocol::{
    information_loss, simulate, Inputs, PartitionedInput, ProtocolProgram, SIM_MAX_WIDTH,
};
use crate::qmat::{serde_complex, CMatrix, DensityOperator, Register, RegisterLayout};
use crate::reductions::{
    and_distribution, monotone_sensitivity, paradox_demo, reduction_report,
    round_elimination_audit, BooleanSetFunction,
};
use crate::suite::{run_suite, Counts, SuiteConfig, SUITE_MAX_WIDTH};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_PROPERTY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qcc-lab", version, about = "Quantum communication protocol laboratory")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Override the slack of every checked inequality.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub out: OutputFormat,
    /// Widest program (in qubits) to accept.
    #[arg(long, global = true)]
    pub max_width: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Functional {
    TraceDistance,
    Fidelity,
    RelativeEntropy,
    Entropy,
    MutualInformation,
    FuchsCaves,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an information functional on operator files.
    Metrics {
        #[arg(long, value_enum)]
        functional: Functional,
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        sigma: Option<PathBuf>,
        /// Registers on one side of the cut, comma separated.
        #[arg(long, value_delimiter = ',')]
        cut: Vec<String>,
    },
    /// Run a protocol on classical inputs.
    Simulate {
        #[arg(long)]
        protocol: PathBuf,
        /// `register=value` pairs, comma separated.
        #[arg(long, value_delimiter = ',')]
        input: Vec<String>,
    },
    /// Conditional information loss of a protocol.
    Loss {
        #[arg(long)]
        protocol: PathBuf,
        /// `and` or a distribution file.
        #[arg(long, default_value = "and")]
        dist: String,
    },
    /// Round-elimination audit of an AND protocol.
    Audit {
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long, default_value = "and")]
        dist: String,
    },
    /// Derive a one-coordinate protocol from a many-coordinate one.
    Reduce {
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long, default_value = "and")]
        dist: String,
        #[arg(long, default_value_t = 0)]
        coordinate: usize,
        /// Off-coordinate values of D, comma separated; searched if absent.
        #[arg(long, value_delimiter = ',')]
        dhat: Option<Vec<usize>>,
        /// Also write the derived protocol here.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Monotone sensitivity of a hex truth table.
    Sensitivity {
        #[arg(long)]
        table: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Classical and coherent information loss of the random-pad AND protocol.
    Paradox,
    /// Run the full invariant suite.
    Verify {
        /// Tenth of the default instance counts.
        #[arg(long)]
        quick: bool,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Json(_) | Error::Parse(_) | Error::Io(_) => EXIT_PARSE,
        _ => EXIT_VALIDATION,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_protocol(path: &Path) -> Result<ProtocolProgram> {
    parse_file(path)
}

/// `and`, or a distribution file.
pub fn load_distribution(name: &str) -> Result<PartitionedInput> {
    match name {
        "and" => Ok(and_distribution()),
        path => parse_file(Path::new(path)),
    }
}

/// Repeat a one-coordinate law to match the protocol's input count.
fn fit(dist: PartitionedInput, p: &ProtocolProgram) -> Result<PartitionedInput> {
    let n = p.parties.first().map_or(1, |a| p.inputs_of(a).len()).max(1);
    if dist.arity() == 1 && n > 1 {
        dist.with_arity(n)
    } else {
        Ok(dist)
    }
}

fn check_width(p: &ProtocolProgram, max: Option<usize>) -> Result<()> {
    if let Some(m) = max {
        p.validate_with(m).into_result()?;
    }
    Ok(())
}

/// Operator file: a bare matrix of `[re, im]` pairs, or an object with the
/// matrix and its register layout.
#[derive(Deserialize)]
#[serde(untagged)]
enum OperatorFile {
    Bare(#[serde(with = "serde_complex::matrix")] CMatrix),
    Labeled {
        #[serde(with = "serde_complex::matrix")]
        matrix: CMatrix,
        registers: Vec<Register>,
    },
}

fn load_operator(path: &Path) -> Result<DensityOperator> {
    match parse_file::<OperatorFile>(path)? {
        OperatorFile::Bare(m) => DensityOperator::new(m),
        OperatorFile::Labeled { matrix, registers } => {
            DensityOperator::new(matrix)?.with_layout(RegisterLayout::new(registers)?)
        }
    }
}

fn parse_inputs(pairs: &[String]) -> Result<Inputs> {
    let mut out = Inputs::new();
    for (i, p) in pairs.iter().enumerate() {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("input {i}: expected register=value, got `{p}`")))?;
        let v: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("input {i}: `{v}` is not a non-negative integer")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

#[derive(Serialize)]
struct MetricReport {
    functional: String,
    value: Option<f64>,
    infinite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    regularized: Option<bool>,
}

#[derive(Serialize)]
struct SimulationReport {
    answer_register: String,
    answer_distribution: Vec<f64>,
    rounds: usize,
    qubits: usize,
    ownership: Vec<std::collections::BTreeMap<String, String>>,
    snapshot_norms: Vec<f64>,
}

#[derive(Serialize)]
struct SensitivityReport {
    n: usize,
    table: String,
    sensitivity: usize,
    /// Smallest set (as a bitmask) attaining the maximum.
    witness: u32,
}

#[derive(Serialize)]
struct Audited<'a> {
    #[serde(flatten)]
    report: &'a crate::reductions::AuditReport,
    delta0: f64,
    links_hold: bool,
    triangles_hold: bool,
    transitions_hold: bool,
    endpoint_holds: bool,
    concavity_holds: bool,
    chain_sum_holds: bool,
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialisable") + "\n"
}

fn csv_kv(rows: &[(&str, String)]) -> String {
    let mut s = String::from("key,value\n");
    for (k, v) in rows {
        s.push_str(&format!("{k},{v}\n"));
    }
    s
}

fn opt(x: Option<f64>) -> String {
    x.map_or("inf".into(), |v| format!("{v:e}"))
}

/// Run one command; returns the exit code and the report text.
fn execute(cli: &Cli) -> Result<(i32, String)> {
    let csv = cli.out == OutputFormat::Csv;
    match &cli.command {
        Command::Metrics {
            functional,
            rho,
            sigma,
            cut,
        } => {
            let r = load_operator(rho)?;
            let second = || -> Result<DensityOperator> {
                load_operator(sigma.as_ref().ok_or_else(|| {
                    Error::InvalidInput("this functional needs --sigma".into())
                })?)
            };
            let name = format!("{functional:?}");
            let (value, regularized) = match functional {
                Functional::TraceDistance => (Some(trace_distance(&r, &second()?)?), None),
                Functional::Fidelity => (Some(fidelity(&r, &second()?)?), None),
                Functional::RelativeEntropy => (relative_entropy(&r, &second()?)?.finite(), None),
                Functional::Entropy => (Some(von_neumann_entropy(&r)), None),
                Functional::MutualInformation => (Some(mutual_information(&r, cut)?), None),
                Functional::FuchsCaves => {
                    let fc = fuchs_caves(&r, &second()?)?;
                    (Some(fc.value), Some(fc.regularized))
                }
            };
            let rep = MetricReport {
                functional: name,
                value,
                infinite: value.is_none(),
                regularized,
            };
            Ok((
                EXIT_OK,
                if csv {
                    csv_kv(&[("functional", rep.functional.clone()), ("value", opt(rep.value))])
                } else {
                    json(&rep)
                },
            ))
        }
        Command::Simulate { protocol, input } => {
            let p = load_protocol(protocol)?;
            check_width(&p, cli.max_width)?;
            let t = simulate(&p, &parse_inputs(input)?)?;
            let rep = SimulationReport {
                answer_register: t.answer_register().to_string(),
                answer_distribution: t.answer_distribution(),
                rounds: p.rounds(),
                qubits: p.communication(),
                ownership: p.ownership(),
                snapshot_norms: t.snapshots().iter().map(|s| s.norm()).collect(),
            };
            Ok((
                EXIT_OK,
                if csv {
                    let mut s = String::from("outcome,probability\n");
                    for (i, q) in rep.answer_distribution.iter().enumerate() {
                        s.push_str(&format!("{i},{q:e}\n"));
                    }
                    s
                } else {
                    json(&rep)
                },
            ))
        }
        Command::Loss { protocol, dist } => {
            let p = load_protocol(protocol)?;
            check_width(&p, cli.max_width)?;
            let d = fit(load_distribution(dist)?, &p)?;
            let rep = information_loss(&p, &d)?;
            Ok((
                EXIT_OK,
                if csv {
                    let mut s = String::from("round,sender,receiver,value\n");
                    for t in &rep.terms {
                        s.push_str(&format!("{},{},{},{:e}\n", t.round, t.sender, t.receiver, t.value));
                    }
                    s
                } else {
                    json(&rep)
                },
            ))
        }
        Command::Audit { protocol, dist } => {
            let p = load_protocol(protocol)?;
            check_width(&p, cli.max_width)?;
            let r = round_elimination_audit(&p, &load_distribution(dist)?)?;
            let a = Audited {
                report: &r,
                delta0: r.delta0(),
                links_hold: r.links_hold(),
                triangles_hold: r.triangles_hold(),
                transitions_hold: r.transitions_hold(),
                endpoint_holds: r.endpoint_holds(),
                concavity_holds: r.concavity_holds(),
                chain_sum_holds: r.chain_sum_holds(),
            };
            let code = if a.links_hold && a.triangles_hold && a.transitions_hold && a.chain_sum_holds {
                EXIT_OK
            } else {
                EXIT_PROPERTY
            };
            Ok((
                code,
                if csv {
                    let mut s = String::from(
                        "time,mover,cost,cost_given_zero,fidelity_b,fidelity_a,transition_distance,delta,link_bound\n",
                    );
                    for st in &r.steps {
                        s.push_str(&format!(
                            "{},{},{:e},{:e},{:e},{:e},{:e},{:e},{}\n",
                            st.time,
                            st.mover,
                            st.cost,
                            st.cost_given_zero,
                            st.fidelity_b,
                            st.fidelity_a,
                            st.transition_distance,
                            st.delta,
                            st.link_bound.map_or(String::new(), |b| format!("{b:e}"))
                        ));
                    }
                    s
                } else {
                    json(&a)
                },
            ))
        }
        Command::Reduce {
            protocol,
            dist,
            coordinate,
            dhat,
            write,
        } => {
            let p = load_protocol(protocol)?;
            check_width(&p, cli.max_width)?;
            let r = reduction_report(&p, *coordinate, dhat.clone(), &load_distribution(dist)?)?;
            if let Some(path) = write {
                std::fs::write(path, r.protocol.to_json())?;
            }
            let slack = cli.tol.unwrap_or(1e-6);
            let code = if r.sandwich_holds(slack) && r.terms_hold(cli.tol.unwrap_or(1e-8)) {
                EXIT_OK
            } else {
                EXIT_PROPERTY
            };
            Ok((
                code,
                if csv {
                    let mut s = String::from("d,round,derived,source\n");
                    for t in &r.terms {
                        s.push_str(&format!("{},{},{:e},{:e}\n", t.d, t.round, t.derived, t.source));
                    }
                    s
                } else {
                    json(&r)
                },
            ))
        }
        Command::Sensitivity { table, n } => {
            let f = BooleanSetFunction::from_hex(table, *n)?;
            let s = monotone_sensitivity(&f);
            let witness = (0..1u32 << f.n()).find(|&m| f.flips_at(m) == s).unwrap_or(0);
            let rep = SensitivityReport {
                n: f.n(),
                table: f.to_hex(),
                sensitivity: s,
                witness,
            };
            Ok((
                EXIT_OK,
                if csv {
                    csv_kv(&[
                        ("n", rep.n.to_string()),
                        ("sensitivity", rep.sensitivity.to_string()),
                        ("witness", rep.witness.to_string()),
                    ])
                } else {
                    json(&rep)
                },
            ))
        }
        Command::Paradox => {
            let r = paradox_demo()?;
            Ok((
                EXIT_OK,
                if csv {
                    csv_kv(&[
                        ("classical_il", format!("{:e}", r.classical_il)),
                        ("classical_error", r.classical_error.clone()),
                        ("quantum_il", format!("{:e}", r.quantum_il)),
                    ])
                } else {
                    json(&r)
                },
            ))
        }
        Command::Verify { quick } => {
            let mut cfg = SuiteConfig::new(cli.seed);
            cfg.tol = cli.tol;
            cfg.max_width = cli.max_width.unwrap_or(SUITE_MAX_WIDTH);
            if *quick {
                cfg.counts = Counts::default().reduced(10);
            }
            let r = run_suite(&cfg)?;
            let code = if r.passed { EXIT_OK } else { EXIT_PROPERTY };
            Ok((code, if csv { r.to_csv() } else { r.to_json() }))
        }
    }
}

/// Parse `args` (program name first), run, and write the report to `out`
/// and diagnostics to `err`. Returns the exit code.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    if let Some(w) = cli.max_width {
        if w > SIM_MAX_WIDTH {
            let _ = writeln!(err, "error: --max-width {w} exceeds {SIM_MAX_WIDTH}");
            return EXIT_VALIDATION;
        }
    }
    match execute(&cli) {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_command(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
