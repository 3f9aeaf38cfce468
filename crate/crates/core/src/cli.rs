//! Command-line front end. Every command prints one JSON document.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arrangement::QuotientComplex;
use crate::cech::{exceptional_collection_check, koszul_sequence_check, WeightedProjLine};
use crate::diagonal::{cokernel_report, DEFAULT_KMAX};
use crate::error::{Error, ErrorKind, Result};
use crate::fan::Fan;
use crate::io::{parse_rational_list, svg};
use crate::morita::{morita_check, parse_weights, CharacterGroup, MoritaSetup, DEFAULT_DEGREE};
use crate::pipeline::{parse_ints, run_pipeline, GroupSpec, Pipeline, PipelineSpec};
use crate::resolution::{cellular_differential, exactness_certificate, graded_twists, verify_d_squared, ChainComplex};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "toric-diagonal", version, about = "Cellular resolutions of toric diagonals")]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for the randomized property suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Window radius for cell enumeration; defaults to the smallest sound value.
    #[arg(long, global = true)]
    pub window: Option<u64>,
    /// Bound on the power of each irrelevant generator in torsion certificates.
    #[arg(long, global = true, default_value_t = DEFAULT_KMAX)]
    pub kmax: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smoothness, completeness, unimodularity and class group of a fan.
    Fan {
        #[command(subcommand)]
        action: FanAction,
    },
    /// The labeled quotient cell complex.
    Arrangement {
        #[command(subcommand)]
        action: ArrangementAction,
    },
    /// The cellular free complex with its graded twists.
    Resolve(PipelineArgs),
    /// Re-check a complex.
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
    /// Vertex monomials outside the lattice module and their torsion certificates.
    Cokernel(PipelineArgs),
    /// Line bundle cohomology on a weighted projective line.
    Cech(CechArgs),
    /// Graded Morita check for affine space modulo a finite abelian group.
    MoritaCheck(MoritaArgs),
    /// SVG picture of a rank 1 or 2 quotient complex.
    Render(InputArgs),
    /// Randomized property suites.
    Properties {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum FanAction {
    Check { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum ArrangementAction {
    Build(PipelineArgs),
}

#[derive(Debug, Subcommand)]
pub enum VerifyCheck {
    /// `∂² = 0`.
    D2(InputArgs),
    /// Acyclicity of the degree restrictions.
    Exactness(InputArgs),
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Fan JSON file.
    pub fan: PathBuf,
    /// Shift vector, e.g. `1/100,0,0,1/100`.
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<String>,
    /// Cyclic factors `d1,d2,...`, or a group JSON file.
    #[arg(long)]
    pub group: Option<String>,
    /// Images of the lattice basis vectors, rows separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    pub images: Option<String>,
}

/// A fan (with pipeline options) or a saved complex.
#[derive(Debug, Args)]
pub struct InputArgs {
    pub input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub images: Option<String>,
}

#[derive(Debug, Args)]
pub struct CechArgs {
    #[command(subcommand)]
    pub mode: Option<CechMode>,
    /// `a,b`, or a JSON file with `weights`.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub twist: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum CechMode {
    Exceptional {
        #[arg(long)]
        weights: String,
        /// Defaults to the twists listed in a weights file.
        #[arg(long, allow_hyphen_values = true)]
        twists: Option<String>,
    },
    Koszul {
        #[arg(long)]
        weights: String,
        #[arg(long, default_value_t = 8)]
        degree: i64,
    },
}

#[derive(Debug, Args)]
pub struct MoritaArgs {
    #[arg(long)]
    pub n: usize,
    /// Cyclic factors `d1,d2,...`.
    #[arg(long)]
    pub group: String,
    /// Per-coordinate characters; defaults to the first generator on every coordinate.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
}

/// Result of one command: a JSON document, or an SVG picture, and whether its checks passed.
pub struct Outcome {
    pub body: String,
    pub passed: bool,
}

fn json_outcome<T: Serialize>(value: &T, passed: bool) -> Result<Outcome> {
    Ok(Outcome {
        body: serde_json::to_string_pretty(value)? + "\n",
        passed,
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn group_spec(group: Option<&str>, images: Option<&str>) -> Result<GroupSpec> {
    match group {
        None => match images {
            None => Ok(GroupSpec::trivial()),
            Some(_) => Err(Error::InvalidInput("--images needs --group".into())),
        },
        Some(g) if g.ends_with(".json") => {
            let mut spec: GroupSpec = serde_json::from_str(&read(Path::new(g))?)?;
            if let Some(im) = images {
                spec.images = GroupSpec::parse("", Some(im))?.images;
            }
            Ok(spec)
        }
        Some(g) => GroupSpec::parse(g, images),
    }
}

fn pipeline_from(fan: Fan, epsilon: Option<&str>, group: Option<&str>, images: Option<&str>, window: Option<u64>) -> Result<Pipeline> {
    run_pipeline(&PipelineSpec {
        fan,
        epsilon: parse_rational_list(epsilon.unwrap_or(""))?,
        group: group_spec(group, images)?,
        window,
    })
}

enum Loaded {
    Pipeline(Box<Pipeline>),
    Complex(QuotientComplex),
    Chain(ChainComplex),
}

fn load(args: &InputArgs, window: Option<u64>) -> Result<Loaded> {
    let text = read(&args.input)?;
    let value: Value = serde_json::from_str(&text)?;
    if value.get("rays").is_some() {
        let fan = Fan::from_json(&text)?;
        let p = pipeline_from(fan, args.epsilon.as_deref(), args.group.as_deref(), args.images.as_deref(), window)?;
        return Ok(Loaded::Pipeline(Box::new(p)));
    }
    if value.get("incidence").is_some() {
        return Ok(Loaded::Complex(serde_json::from_value(value)?));
    }
    if value.get("differentials").is_some() {
        return Ok(Loaded::Chain(ChainComplex::from_json(&text)?));
    }
    Err(Error::InvalidInput(format!(
        "{} is neither a fan, a cell complex nor a chain complex",
        args.input.display()
    )))
}

fn quotient_of(loaded: Loaded) -> Result<QuotientComplex> {
    match loaded {
        Loaded::Pipeline(p) => Ok(p.complex),
        Loaded::Complex(qc) => Ok(qc),
        Loaded::Chain(_) => Err(Error::InvalidInput(
            "this check needs a fan or a cell complex from `arrangement build`".into(),
        )),
    }
}

#[derive(Deserialize)]
struct WeightsFile {
    weights: Vec<i64>,
    #[serde(default)]
    twists: Option<Vec<i64>>,
}

/// `a,b` or a JSON file, with the file's twists if it lists any.
fn weights_spec(s: &str) -> Result<(WeightedProjLine, Option<Vec<i64>>)> {
    let file = if s.ends_with(".json") {
        serde_json::from_str(&read(Path::new(s))?)?
    } else {
        WeightsFile {
            weights: parse_ints(s, ',')?,
            twists: None,
        }
    };
    match file.weights.as_slice() {
        [a, b] => Ok((WeightedProjLine::new(*a, *b)?, file.twists)),
        w => Err(Error::InvalidInput(format!("expected two weights, got {w:?}"))),
    }
}

fn weights_pair(s: &str) -> Result<WeightedProjLine> {
    Ok(weights_spec(s)?.0)
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Fan {
            action: FanAction::Check { file },
        } => {
            let fan = Fan::from_json(&read(file)?)?;
            json_outcome(&fan.check()?, true)
        }
        Command::Arrangement {
            action: ArrangementAction::Build(a),
        } => {
            let fan = Fan::from_json(&read(&a.fan)?)?;
            let p = pipeline_from(fan, a.epsilon.as_deref(), a.group.as_deref(), a.images.as_deref(), cli.window)?;
            json_outcome(&p.complex, true)
        }
        Command::Resolve(a) => {
            let fan = Fan::from_json(&read(&a.fan)?)?;
            let p = pipeline_from(fan, a.epsilon.as_deref(), a.group.as_deref(), a.images.as_deref(), cli.window)?;
            let cc = graded_twists(&cellular_differential(&p.complex)?, &p.degree_map())?;
            let ok = verify_d_squared(&cc);
            json_outcome(&cc, ok)
        }
        Command::Verify { check } => match check {
            VerifyCheck::D2(a) => {
                let cc = match load(a, cli.window)? {
                    Loaded::Chain(cc) => cc,
                    other => cellular_differential(&quotient_of(other)?)?,
                };
                let ok = verify_d_squared(&cc);
                json_outcome(&json!({ "d_squared_zero": ok, "ranks": cc.ranks }), ok)
            }
            VerifyCheck::Exactness(a) => {
                let qc = quotient_of(load(a, cli.window)?)?;
                let r = exactness_certificate(&qc, None)?;
                let ok = r.is_exact();
                json_outcome(
                    &json!({
                        "exact": ok,
                        "resolves_image": r.resolves_image(),
                        "report": r,
                    }),
                    ok,
                )
            }
        },
        Command::Cokernel(a) => {
            let fan = Fan::from_json(&read(&a.fan)?)?;
            let p = pipeline_from(fan, a.epsilon.as_deref(), a.group.as_deref(), a.images.as_deref(), cli.window)?;
            let r = cokernel_report(&p, cli.kmax)?;
            let ok = r.is_torsion();
            json_outcome(&r, ok)
        }
        Command::Cech(a) => match &a.mode {
            Some(CechMode::Exceptional { weights, twists }) => {
                let (x, listed) = weights_spec(weights)?;
                let twists = match (twists, listed) {
                    (Some(t), _) => parse_ints(t, ',')?,
                    (None, Some(t)) => t,
                    (None, None) => return Err(Error::InvalidInput("--twists is required".into())),
                };
                let r = exceptional_collection_check(&x, &twists)?;
                let ok = r.exceptional;
                json_outcome(&r, ok)
            }
            Some(CechMode::Koszul { weights, degree }) => {
                let r = koszul_sequence_check(&weights_pair(weights)?, *degree);
                let ok = r.exact;
                json_outcome(&r, ok)
            }
            None => {
                let w = a.weights.as_deref().ok_or_else(|| Error::InvalidInput("--weights is required".into()))?;
                let n = a.twist.ok_or_else(|| Error::InvalidInput("--twist is required".into()))?;
                let x = weights_pair(w)?;
                let (h0, h1) = x.h_dims(n);
                let ok = (h0, h1) == x.h_dims_cech(n);
                json_outcome(&json!({ "h0": h0, "h1": h1 }), ok)
            }
        },
        Command::MoritaCheck(a) => {
            let group = CharacterGroup::new(parse_ints(&a.group, ',')?)?;
            let weights = match &a.weights {
                Some(w) => parse_weights(w, group.moduli.len())?,
                None => {
                    let mut first = vec![0; group.moduli.len()];
                    if let Some(x) = first.first_mut() {
                        *x = 1;
                    }
                    vec![first; a.n]
                }
            };
            if weights.len() != a.n {
                return Err(Error::DimensionMismatch(format!("{} weights for n = {}", weights.len(), a.n)));
            }
            let r = morita_check(&MoritaSetup::new(group, weights)?, a.degree);
            let ok = r.passed();
            json_outcome(&r, ok)
        }
        Command::Render(a) => {
            let qc = quotient_of(load(a, cli.window)?)?;
            Ok(Outcome {
                body: svg::render(&qc)?,
                passed: true,
            })
        }
        Command::Properties { trials } => {
            let r = crate::properties::run_all(cli.seed, *trials)?;
            let ok = r.iter().all(|o| o.passed());
            json_outcome(&r, ok)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Input => EXIT_INPUT,
        ErrorKind::Resource => EXIT_RESOURCE,
        ErrorKind::Internal => EXIT_VERIFICATION,
    }
}

pub fn error_json(e: &Error) -> String {
    json!({ "error": { "code": e.code(), "message": e.to_string() } }).to_string()
}

/// Runs the command and writes its output; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|o| {
        match &cli.out {
            Some(path) => std::fs::write(path, &o.body)?,
            None => print!("{}", o.body),
        }
        Ok(o.passed)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFICATION,
        Err(e) => {
            println!("{}", error_json(&e));
            exit_code(&e)
        }
    }
}
