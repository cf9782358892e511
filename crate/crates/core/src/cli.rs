//! Command-line front end: argument model, analysis driver and report
//! rendering. The binary only parses arguments and prints.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cubical::{build_q_truncated, ComplexDump, SemicubicalSet};
use crate::error::Error;
use crate::homology::{
    boundary_matrices, directed_boundary_matrices, homology, mv_check, records, ChainComplex, Endpoint,
    HomologyGroup, HomologyRecord,
};
use crate::net::{explore, ElementaryNet, Mode, DEFAULT_STATE_CAP};
use crate::netfile::{emit_net, parse_net};
use crate::pipelines::{make_pipeline, verify_theorems, PipelineSpec};

pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const RESOURCE: i32 = 4;
    pub const IO: i32 = 5;
}

#[derive(Parser, Debug)]
#[command(name = "petri-homology", version, about = "Homology of elementary Petri nets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze a net file or a generated pipeline net.
    Analyze(AnalyzeArgs),
    /// Check the pipeline homology results for n = 2..=n-max.
    Verify(VerifyArgs),
    /// Print a generated pipeline net in the net file format.
    Emit {
        #[arg(long, value_name = "N[,VARIANT]")]
        pipeline: PipelineSpec,
    },
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Net definition file.
    #[arg(conflicts_with = "pipeline", required_unless_present = "pipeline")]
    pub file: Option<PathBuf>,
    /// Generated pipeline, e.g. `4` or `5,Nprime`.
    #[arg(long, value_name = "N[,VARIANT]")]
    pub pipeline: Option<PipelineSpec>,
    /// Use all of {0,1}^P instead of the reachable states.
    #[arg(long)]
    pub all_states: bool,
    /// Highest homology degree to report.
    #[arg(long, value_name = "K")]
    pub max_dim: Option<usize>,
    /// Analyses to run, comma separated.
    #[arg(long = "run", value_delimiter = ',', value_name = "ANALYSIS")]
    pub analyses: Vec<Analysis>,
    /// Emit a single JSON record.
    #[arg(long)]
    pub json: bool,
    /// Include the cube complex in the report.
    #[arg(long)]
    pub dump_complex: bool,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP, value_name = "N")]
    pub max_states: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_name = "K")]
    pub n_max: usize,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP, value_name = "N")]
    pub max_states: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Homology,
    #[value(name = "directed-0")]
    #[serde(rename = "directed-0")]
    Directed0,
    #[value(name = "directed-1")]
    #[serde(rename = "directed-1")]
    Directed1,
    Deadlocks,
    Senders,
    Validate,
    MvCheck,
}

pub const DEFAULT_ANALYSES: [Analysis; 5] = [
    Analysis::Homology,
    Analysis::Directed0,
    Analysis::Directed1,
    Analysis::Deadlocks,
    Analysis::Senders,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    File(PathBuf),
    Text { label: String, document: String },
    Pipeline(PipelineSpec),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Everything `analyze` needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisRequest {
    pub input: Input,
    pub mode: Mode,
    pub analyses: Vec<Analysis>,
    pub max_dim: Option<usize>,
    pub format: OutputFormat,
    pub dump_complex: bool,
    pub state_cap: usize,
}

impl AnalysisRequest {
    pub fn new(input: Input) -> Self {
        AnalysisRequest {
            input,
            mode: Mode::Reachable,
            analyses: DEFAULT_ANALYSES.to_vec(),
            max_dim: None,
            format: OutputFormat::Text,
            dump_complex: false,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

impl From<AnalyzeArgs> for AnalysisRequest {
    fn from(a: AnalyzeArgs) -> Self {
        let input = match (a.file, a.pipeline) {
            (_, Some(spec)) => Input::Pipeline(spec),
            (Some(path), None) => Input::File(path),
            (None, None) => unreachable!("clap requires a file or --pipeline"),
        };
        AnalysisRequest {
            input,
            mode: if a.all_states {
                Mode::AllStates
            } else {
                Mode::Reachable
            },
            analyses: if a.analyses.is_empty() {
                DEFAULT_ANALYSES.to_vec()
            } else {
                a.analyses
            },
            max_dim: a.max_dim,
            format: if a.json {
                OutputFormat::Json
            } else {
                OutputFormat::Text
            },
            dump_complex: a.dump_complex,
            state_cap: a.max_states,
        }
    }
}

/// Exit code and printable report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(code: i32, message: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: message,
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => exit::PARSE,
        Error::StateCapExceeded { .. } => exit::RESOURCE,
        Error::InvalidPipeline(_) => exit::USAGE,
        _ => exit::PARSE,
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
struct Report<'a> {
    net: String,
    mode: Mode,
    states: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    homology: Option<Vec<HomologyRecord<'a>>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    directed: BTreeMap<&'static str, Vec<HomologyRecord<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deadlocks: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    senders: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    complex: Option<ComplexDump>,
}

fn load(input: &Input) -> Result<(String, ElementaryNet), Outcome> {
    match input {
        Input::Pipeline(spec) => make_pipeline(*spec)
            .map(|net| (spec.to_string(), net))
            .map_err(|e| Outcome::failure(error_code(&e), e.to_string())),
        Input::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Outcome::failure(exit::IO, format!("cannot read {}: {e}", path.display())))?;
            parse_net(&text)
                .map(|net| (path.display().to_string(), net))
                .map_err(|e| Outcome::failure(exit::PARSE, format!("{}: {e}", path.display())))
        }
        Input::Text { label, document } => parse_net(document)
            .map(|net| (label.clone(), net))
            .map_err(|e| Outcome::failure(exit::PARSE, format!("{label}: {e}"))),
    }
}

/// Groups `H_0..H_k`, where `k` is `max_dim` or the complex's top degree.
fn groups_upto(complex: &ChainComplex, max_dim: Option<usize>) -> Result<Vec<HomologyGroup>, Error> {
    let mut h = homology(complex)?;
    if let Some(k) = max_dim {
        h.resize(k + 1, HomologyGroup::zero());
    }
    Ok(h)
}

/// `H_0 = Z, H_1 = Z, H_k = 0 (k ≥ 2)` style rendering.
pub fn render_groups(groups: &[HomologyGroup], truncated: bool) -> String {
    let shown = if truncated {
        groups.len()
    } else {
        groups.iter().rposition(|g| !g.is_zero()).map_or(0, |p| p + 1)
    };
    let mut parts: Vec<String> = groups[..shown]
        .iter()
        .enumerate()
        .map(|(k, g)| format!("H_{k} = {g}"))
        .collect();
    if !truncated {
        parts.push(format!("H_k = 0 (k ≥ {shown})"));
    }
    parts.join(", ")
}

/// Runs the analyses of `req` in order.
pub fn run(req: &AnalysisRequest) -> Outcome {
    if req.analyses.is_empty() {
        return Outcome::failure(exit::USAGE, "no analysis requested".into());
    }
    let (label, net) = match load(&req.input) {
        Ok(v) => v,
        Err(o) => return o,
    };
    match analyze(req, label, Arc::new(net)) {
        Ok(o) => o,
        Err(e) => Outcome::failure(error_code(&e), e.to_string()),
    }
}

fn analyze(req: &AnalysisRequest, label: String, net: Arc<ElementaryNet>) -> Result<Outcome, Error> {
    let space = explore(net.clone(), req.mode, req.state_cap)?;
    let q = build_q_truncated(&space, req.max_dim.map(|k| k + 1))?;

    let mut ordinary = None;
    let mut directed: BTreeMap<&'static str, Vec<HomologyGroup>> = BTreeMap::new();
    let mut deadlocks = None;
    let mut senders = None;
    let mut checks = Vec::new();
    for a in &req.analyses {
        match a {
            Analysis::Homology => ordinary = Some(groups_upto(&boundary_matrices(&q), req.max_dim)?),
            Analysis::Directed0 | Analysis::Directed1 => {
                let (key, e) = if *a == Analysis::Directed0 {
                    ("0", Endpoint::Initial)
                } else {
                    ("1", Endpoint::Final)
                };
                directed.insert(key, groups_upto(&directed_boundary_matrices(&q, e), req.max_dim)?);
            }
            Analysis::Deadlocks => {
                deadlocks = Some(
                    space
                        .deadlocks()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>(),
                )
            }
            Analysis::Senders => {
                senders = Some(
                    space
                        .senders()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>(),
                )
            }
            Analysis::Validate => {
                let v = q.validate();
                checks.push(CheckRecord {
                    name: "cubical identities".into(),
                    passed: v.is_empty(),
                    detail: match v.first() {
                        None => "0 violations".into(),
                        Some(first) => format!("{} violations, first: {first}", v.len()),
                    },
                });
            }
            Analysis::MvCheck => checks.extend(mv_checks(&q)?),
        }
    }

    let failed = checks.iter().any(|c| !c.passed);
    let truncated = req.max_dim.is_some();
    let stdout = match req.format {
        OutputFormat::Json => {
            let report = Report {
                net: label,
                mode: req.mode,
                states: space.len(),
                homology: ordinary.as_deref().map(records),
                directed: directed.iter().map(|(k, v)| (*k, records(v))).collect(),
                deadlocks,
                senders,
                checks,
                complex: req.dump_complex.then(|| q.dump()),
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "net: {label} ({}, {} states)", req.mode, space.len());
            let _ = writeln!(s, "cubes per grade: {:?}", q.counts());
            for a in &req.analyses {
                match a {
                    Analysis::Homology => {
                        let _ = writeln!(
                            s,
                            "homology: {}",
                            render_groups(ordinary.as_ref().unwrap(), truncated)
                        );
                    }
                    Analysis::Directed0 => {
                        let _ = writeln!(s, "directed-0: {}", render_groups(&directed["0"], truncated));
                    }
                    Analysis::Directed1 => {
                        let _ = writeln!(s, "directed-1: {}", render_groups(&directed["1"], truncated));
                    }
                    Analysis::Deadlocks => {
                        let _ = writeln!(s, "deadlocks: {{{}}}", deadlocks.as_ref().unwrap().join(", "));
                    }
                    Analysis::Senders => {
                        let _ = writeln!(s, "senders: {{{}}}", senders.as_ref().unwrap().join(", "));
                    }
                    Analysis::Validate | Analysis::MvCheck => {}
                }
            }
            for c in &checks {
                let _ = writeln!(
                    s,
                    "[{}] {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if req.dump_complex {
                s.push_str(&q.dump().to_string());
            }
            s
        }
    };
    Ok(Outcome {
        code: if failed { exit::CHECK_FAILED } else { exit::OK },
        stdout,
        stderr: String::new(),
    })
}

/// Splits `Q` by deleting the first and the second declared event in turn,
/// and checks the resulting Mayer–Vietoris sequence.
fn mv_checks(q: &SemicubicalSet) -> Result<Vec<CheckRecord>, Error> {
    let net = q.net();
    if net.event_count() < 2 {
        return Ok(vec![CheckRecord {
            name: "mayer-vietoris".into(),
            passed: false,
            detail: "needs at least two events".into(),
        }]);
    }
    let (a, b) = (net.events()[0].name.clone(), net.events()[1].name.clone());
    let x1 = q.without_events(&[&a])?;
    let x2 = q.without_events(&[&b])?;
    let mv = mv_check(&x1, &x2)?;
    let covers = x1.union(&x2)? == *q;
    Ok(vec![
        CheckRecord {
            name: format!("Q without {a} and Q without {b} cover Q"),
            passed: covers,
            detail: format!("{:?} and {:?}", x1.counts(), x2.counts()),
        },
        CheckRecord {
            name: "mayer-vietoris sequence exact".into(),
            passed: mv.exact(),
            detail: format!("{} grades", mv.grades.len()),
        },
        CheckRecord {
            name: "euler characteristic additive".into(),
            passed: mv.euler_additive(),
            detail: format!("{:?}", mv.euler),
        },
        CheckRecord {
            name: "sequence maps are chain maps".into(),
            passed: mv.chain_maps,
            detail: format!("H_0(theta) = {:?}", mv.h0_theta),
        },
    ])
}

/// Runs the pipeline verification for `n = 2..=n_max`.
pub fn run_verify(n_max: usize, cap: usize, format: OutputFormat) -> Outcome {
    let report = match verify_theorems(n_max, cap) {
        Ok(r) => r,
        Err(e) => return Outcome::failure(error_code(&e), e.to_string()),
    };
    let stdout = match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for c in &report.checks {
                let _ = writeln!(s, "{c}");
            }
            let failed = report.failures().count();
            let _ = writeln!(s, "{} checks, {failed} failed", report.checks.len());
            s
        }
    };
    Outcome {
        code: if report.passed() {
            exit::OK
        } else {
            exit::CHECK_FAILED
        },
        stdout,
        stderr: String::new(),
    }
}

/// Dispatches a parsed command line.
pub fn execute(cli: Cli) -> Outcome {
    match cli.command {
        Command::Analyze(args) => run(&args.into()),
        Command::Verify(v) => run_verify(
            v.n_max,
            v.max_states,
            if v.json {
                OutputFormat::Json
            } else {
                OutputFormat::Text
            },
        ),
        Command::Emit { pipeline } => match make_pipeline(pipeline) {
            Ok(net) => Outcome {
                code: exit::OK,
                stdout: emit_net(&net),
                stderr: String::new(),
            },
            Err(e) => Outcome::failure(error_code(&e), e.to_string()),
        },
    }
}
