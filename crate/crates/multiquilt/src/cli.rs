//! Command-line definitions, config-file merging and dispatch.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;

use crate::commands;
use crate::report::{Envelope, ErrorRecord, TOOL, VERSION};

/// Colored ribbon trees, multiplihedra, quilted surfaces, A∞ checks and flat-model gluing
/// experiments.
///
/// Every flag can also be given in a TOML file passed with `--config`. Top-level keys apply to
/// any subcommand that has a flag of that name; keys in a `[subcommand]` table apply to that
/// subcommand only. Flags given on the command line win.
#[derive(Debug, Parser)]
#[command(name = "multiquilt", version)]
pub struct Cli {
    /// TOML file with flag values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// List the stable trees with d leaves.
    Enumerate(EnumerateArgs),
    /// Face poset of the multiplihedron J_d.
    Faces(FacesArgs),
    /// Admissibility relations of a tree.
    Relations(RelationsArgs),
    /// Glue metric trees along a Type 1 or Type 2 facet.
    Glue(GlueArgs),
    /// Build the quilted surface of a metric tree.
    Surface(SurfaceArgs),
    /// Check A∞ and A∞-functor relations.
    AinftyCheck(AInftyArgs),
    /// Exponential decay and energy quantization of mode solutions.
    Decay(DecayArgs),
    /// Pregluing error as a function of the gluing length.
    Preglue(PreglueArgs),
    /// Newton gluing with the right-inverse bound.
    GlueNewton(GlueNewtonArgs),
    /// Sobolev embedding constants on long strips.
    Embed(EmbedArgs),
    /// Surjectivity of the gluing map near a broken pair.
    Surject(SurjectArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Enumerate(_) => "enumerate",
            Command::Faces(_) => "faces",
            Command::Relations(_) => "relations",
            Command::Glue(_) => "glue",
            Command::Surface(_) => "surface",
            Command::AinftyCheck(_) => "ainfty-check",
            Command::Decay(_) => "decay",
            Command::Preglue(_) => "preglue",
            Command::GlueNewton(_) => "glue-newton",
            Command::Embed(_) => "embed",
            Command::Surject(_) => "surject",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Enumerate(a) => &a.common,
            Command::Faces(a) => &a.common,
            Command::Relations(a) => &a.common,
            Command::Glue(a) => &a.common,
            Command::Surface(a) => &a.common,
            Command::AinftyCheck(a) => &a.common,
            Command::Decay(a) => &a.common,
            Command::Preglue(a) => &a.common,
            Command::GlueNewton(a) => &a.common,
            Command::Embed(a) => &a.common,
            Command::Surject(a) => &a.common,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Random seed; recorded in every output.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnumerateArgs {
    /// Number of leaves.
    #[arg(long)]
    pub d: usize,
    /// Uncolored trees (associahedron strata) instead of colored ones.
    #[arg(long)]
    pub uncolored: bool,
    /// Keep only strata of this dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FacesArgs {
    /// Number of leaves.
    #[arg(long)]
    pub d: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RelationsArgs {
    /// Tree or metric tree JSON.
    #[arg(long, value_name = "FILE")]
    pub tree: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlueArgs {
    /// Facet type: 1 grafts one uncolored tree onto a colored one, 2 grafts colored trees onto
    /// every leaf of an uncolored one.
    #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=2))]
    pub kind: u8,
    /// Gluing parameter δ in (0, 1); the gluing length is −ln δ.
    #[arg(long, conflicts_with = "length", required_unless_present = "length")]
    pub delta: Option<f64>,
    /// Gluing length R instead of δ.
    #[arg(long)]
    pub length: Option<f64>,
    /// Type 1: the colored tree. Type 2: the uncolored tree.
    #[arg(long, value_name = "FILE")]
    pub base: PathBuf,
    /// Type 1: the uncolored tree. Type 2: one colored tree per leaf of the base, in order.
    #[arg(long, value_name = "FILE", required = true)]
    pub part: Vec<PathBuf>,
    /// Type 1: graft onto leaf i + 1 of the base.
    #[arg(long, default_value_t = 0)]
    pub i: usize,
    /// Edge length for input trees without lambda.
    #[arg(long, default_value_t = 1.0)]
    pub default_length: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SurfaceArgs {
    /// Tree or metric tree JSON.
    #[arg(long, value_name = "FILE")]
    pub tree: PathBuf,
    /// Edge length for trees without lambda.
    #[arg(long, default_value_t = 1.0)]
    pub default_length: f64,
    /// Attach strips to the boundary component starting at this end.
    #[arg(long, requires = "strips")]
    pub attach: Option<usize>,
    /// Number of strips to attach.
    #[arg(long, requires = "attach")]
    pub strips: Option<usize>,
    /// Also write an SVG drawing.
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    /// Length at which unbounded rectangles are cut off in the SVG.
    #[arg(long, default_value_t = 10.0)]
    pub clip: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AInftyArgs {
    /// Source A∞ data; the bundled exterior DGA when omitted.
    #[arg(long, value_name = "FILE")]
    pub a: Option<PathBuf>,
    /// Target A∞ data; the source when omitted.
    #[arg(long, value_name = "FILE")]
    pub b: Option<PathBuf>,
    /// Functor data; the identity when omitted (which needs a = b).
    #[arg(long, value_name = "FILE")]
    pub functor: Option<PathBuf>,
    /// Highest arity checked.
    #[arg(long, default_value_t = 3)]
    pub dmax: usize,
    /// Measure residuals modulo 2.
    #[arg(long)]
    pub mod2: bool,
    /// Cross-check with the bar-construction formulation.
    #[arg(long)]
    pub bar: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

/// Parameters shared by the strip problems.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ProblemArgs {
    /// Angle α of the second boundary line; accepts forms like `pi/4` or `0.7`.
    #[arg(long, default_value = "pi/2", value_parser = parse_angle)]
    pub alpha: f64,
    /// Coefficient η of the cubic Hamiltonian η(x³/3 − xy²).
    #[arg(long, default_value_t = 0.0)]
    pub eta: f64,
    /// Sobolev exponent.
    #[arg(long, default_value_t = 4.0)]
    pub p: f64,
    /// Nodes across the strip.
    #[arg(long, default_value_t = 17)]
    pub n_t: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecayArgs {
    /// Angle α of the second boundary line.
    #[arg(long, default_value = "pi/4", value_parser = parse_angle)]
    pub alpha: f64,
    /// Mode coefficients as `k:c` pairs.
    #[arg(long, value_delimiter = ',', default_value = "0:1", value_parser = parse_mode)]
    pub modes: Vec<(i32, f64)>,
    /// The strip is [−s_half, s_half].
    #[arg(long, default_value_t = 4.0)]
    pub s_half: f64,
    /// Nodes across the strip.
    #[arg(long, default_value_t = 33)]
    pub n_t: usize,
    /// The rate is fitted on [−window, window].
    #[arg(long, default_value_t = 3.0)]
    pub window: f64,
    /// Truncation lengths T for the quantization check.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub times: Vec<f64>,
    /// Use the exact discrete solutions instead of samples of the continuum modes.
    #[arg(long)]
    pub discrete: bool,
    /// Write `s f` columns here.
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PreglueArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub problem: ProblemArgs,
    /// Gluing lengths R.
    #[arg(long, value_delimiter = ',', default_value = "6,8,10,12,14")]
    pub lengths: Vec<f64>,
    /// Pieces live on [−2, piece] and [−piece, 2].
    #[arg(long, default_value_t = 8.0)]
    pub piece: f64,
    /// Size of the pieces' leading mode.
    #[arg(long, default_value_t = 0.5)]
    pub amplitude: f64,
    /// Pregluing type 1, 2 or 3.
    #[arg(long = "type", default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub kind: u8,
    /// Write `R eps` columns here.
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlueNewtonArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub problem: ProblemArgs,
    /// Gluing lengths R.
    #[arg(long, value_delimiter = ',', default_value = "8,10,12")]
    pub lengths: Vec<f64>,
    /// Pieces live on [−2, piece] and [−piece, 2].
    #[arg(long, default_value_t = 8.0)]
    pub piece: f64,
    /// Size of the pieces' leading mode.
    #[arg(long, default_value_t = 0.5)]
    pub amplitude: f64,
    /// Newton stops once the residual is below this.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Write `R eps c_hat distance bound` columns here.
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EmbedArgs {
    /// Angle α of the second boundary line.
    #[arg(long, default_value = "pi/2", value_parser = parse_angle)]
    pub alpha: f64,
    /// Sobolev exponent.
    #[arg(long, default_value_t = 4.0)]
    pub p: f64,
    /// Half-lengths S of the strips [−S, S].
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    pub s_half: Vec<f64>,
    /// Nodes across the strip.
    #[arg(long, default_value_t = 17)]
    pub n_t: usize,
    /// Random trial functions per strip.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Write `S max_ratio` columns here.
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SurjectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub problem: ProblemArgs,
    /// Gluing lengths R of the preglued starts.
    #[arg(long, value_delimiter = ',', default_value = "8,10,12")]
    pub lengths: Vec<f64>,
    /// Pieces live on [−2, piece] and [−piece, 2].
    #[arg(long, default_value_t = 8.0)]
    pub piece: f64,
    /// Size of the pieces' leading mode.
    #[arg(long, default_value_t = 0.5)]
    pub amplitude: f64,
    /// Size ε of the neighbourhood; starts are perturbed by at most ε/4.
    #[arg(long, default_value_t = 1e-2)]
    pub eps: f64,
    /// Number of perturbed starting points.
    #[arg(long, default_value_t = 50)]
    pub candidates: usize,
    /// Newton stops once the residual is below this.
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

/// Reads `x`, `pi`, `pi/b`, `a*pi`, `a pi/b` and similar.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot read {text:?} as an angle");
    let Some((num, den)) = t
        .to_lowercase()
        .split_once("pi")
        .map(|(a, b)| (a.to_string(), b.to_string()))
    else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let num = num.trim_end_matches('*');
    let a = match num {
        "" | "+" => 1.0,
        "-" => -1.0,
        n => n.parse::<f64>().map_err(|_| bad())?,
    };
    let b = match den.strip_prefix('/') {
        None if den.is_empty() => 1.0,
        None => return Err(bad()),
        Some(d) => d.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(a * std::f64::consts::PI / b)
}

fn parse_mode(text: &str) -> Result<(i32, f64), String> {
    let (k, c) = text
        .split_once(':')
        .ok_or_else(|| format!("expected k:c, got {text:?}"))?;
    let k = k
        .trim()
        .parse()
        .map_err(|_| format!("bad mode index in {text:?}"))?;
    let c = c
        .trim()
        .parse()
        .map_err(|_| format!("bad coefficient in {text:?}"))?;
    Ok((k, c))
}

/// Everything a run produced. Files have already been written when this is returned.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{message}")]
    Domain { kind: &'static str, message: String },
}

impl CliError {
    pub fn domain(kind: &'static str, e: impl std::fmt::Display) -> CliError {
        CliError::Domain {
            kind,
            message: e.to_string(),
        }
    }

    pub fn code(&self) -> i32 {
        match self {
            CliError::Domain { .. } => 1,
            CliError::Usage(_) | CliError::Input { .. } => 2,
        }
    }
}

/// Flags from the config file that the command line does not already set, as extra arguments.
fn config_arguments(
    path: &PathBuf,
    subcommand: &str,
    user: &[String],
) -> Result<Vec<String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.clone(),
        message: e.to_string(),
    })?;
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Input {
        path: path.clone(),
        message: e.message().to_string(),
    })?;
    let cmd = Cli::command();
    let sub = cmd
        .find_subcommand(subcommand)
        .expect("subcommand was recognized");
    let has_flag = |name: &str| sub.get_arguments().any(|a| a.get_long() == Some(name));
    let given = |name: &str| {
        let flag = format!("--{name}");
        user.iter()
            .any(|u| *u == flag || u.starts_with(&format!("{flag}=")))
    };

    let mut entries: Vec<(String, toml::Value, bool)> = Vec::new();
    for (k, v) in &table {
        match v {
            toml::Value::Table(t) if k == subcommand => {
                for (k2, v2) in t {
                    entries.push((k2.replace('_', "-"), v2.clone(), true));
                }
            }
            toml::Value::Table(_) => {}
            _ => entries.push((k.replace('_', "-"), v.clone(), false)),
        }
    }
    let mut out = Vec::new();
    for (name, value, explicit) in entries {
        if name == "config" || given(&name) || (!explicit && !has_flag(&name)) {
            continue;
        }
        let scalar = |v: &toml::Value| -> Result<String, CliError> {
            match v {
                toml::Value::String(s) => Ok(s.clone()),
                toml::Value::Integer(i) => Ok(i.to_string()),
                toml::Value::Float(x) => Ok(x.to_string()),
                _ => Err(CliError::Usage(format!(
                    "config key {name:?} must be a string, number, boolean or array"
                ))),
            }
        };
        match &value {
            toml::Value::Boolean(true) => out.push(format!("--{name}")),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                for item in items {
                    out.push(format!("--{name}"));
                    out.push(scalar(item)?);
                }
            }
            v => {
                out.push(format!("--{name}"));
                out.push(scalar(v)?);
            }
        }
    }
    Ok(out)
}

/// The `--config` path and the subcommand name, found without a full parse so that
/// required flags may come from the config file.
fn prescan(args: &[String]) -> (Option<PathBuf>, Option<String>) {
    let mut config = None;
    let mut rest = args.iter().skip(1);
    while let Some(a) = rest.next() {
        if a == "--config" {
            config = rest.next().map(PathBuf::from);
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        } else if !a.starts_with('-') {
            let known = Cli::command().find_subcommand(a).is_some();
            return (config, known.then(|| a.clone()));
        }
    }
    (config, None)
}

fn parse(args: &[String]) -> Result<Cli, clap::Error> {
    let matches = Cli::command().try_get_matches_from(args)?;
    Cli::from_arg_matches(&matches)
}

fn clap_outcome(e: clap::Error) -> Outcome {
    let text = e.render().to_string();
    if e.use_stderr() {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: text,
        }
    } else {
        Outcome {
            code: 0,
            stdout: text,
            stderr: String::new(),
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes its files.
pub fn run(args: impl IntoIterator<Item = impl Into<OsString>>) -> Outcome {
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let full = match prescan(&args) {
        (Some(path), Some(sub)) => match config_arguments(&path, &sub, &args) {
            Ok(extra) => args.iter().cloned().chain(extra).collect(),
            Err(e) => return config_failure(e),
        },
        _ => args,
    };
    let cli = match parse(&full) {
        Ok(c) => c,
        Err(e) => return clap_outcome(e),
    };
    let command = &cli.command;
    let config = serde_json::to_value(command).expect("arguments serialize");
    let seed = command.common().seed;
    let provenance = Envelope::new(command.name(), config.clone(), seed, ()).header();
    match commands::dispatch(command, &provenance) {
        Ok(result) => {
            let text = Envelope::new(command.name(), config, seed, result).to_json();
            match &command.common().out {
                None => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                Some(path) => match commands::write_file(path, &text) {
                    Ok(()) => Outcome {
                        code: 0,
                        stdout: String::new(),
                        stderr: String::new(),
                    },
                    Err(e) => failure(command, e),
                },
            }
        }
        Err(e) => failure(command, e),
    }
}

#[derive(Serialize)]
struct ErrorEnvelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: serde_json::Value,
    seed: u64,
    error: ErrorRecord,
}

fn config_failure(e: CliError) -> Outcome {
    Outcome {
        code: e.code(),
        stdout: String::new(),
        stderr: format!("error: {e}\n\nFor more information, try '--help'.\n"),
    }
}

fn failure(command: &Command, e: CliError) -> Outcome {
    let code = e.code();
    let stderr = match &e {
        CliError::Usage(_) | CliError::Input { .. } => format!(
            "error: {e}\n\nUsage: multiquilt {} [OPTIONS]\n\nFor more information, try '--help'.\n",
            command.name()
        ),
        CliError::Domain { .. } => format!("error: {e}\n"),
    };
    let stdout = match &e {
        CliError::Domain { kind, message } => {
            let record = ErrorEnvelope {
                tool: TOOL,
                version: VERSION,
                command: command.name(),
                config: serde_json::to_value(command).expect("arguments serialize"),
                seed: command.common().seed,
                error: ErrorRecord {
                    kind: kind.to_string(),
                    message: message.clone(),
                },
            };
            let mut s = serde_json::to_string_pretty(&record).expect("errors serialize");
            s.push('\n');
            s
        }
        _ => String::new(),
    };
    Outcome {
        code,
        stdout,
        stderr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("-PI").unwrap(), -PI);
        assert!(parse_angle("pi4").is_err());
        assert!(parse_angle("x").is_err());
    }

    #[test]
    fn modes() {
        assert_eq!(parse_mode("-1:0.3").unwrap(), (-1, 0.3));
        assert!(parse_mode("1").is_err());
    }

    #[test]
    fn definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        let out = run(["multiquilt", "nope"]);
        assert_eq!(out.code, 2);
        assert!(out.stdout.is_empty());
    }

    #[test]
    fn help_exits_cleanly() {
        let out = run(["multiquilt", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("ainfty-check"));
    }
}
