//! Batch front end: load a scene, run one command, emit a report.
//!
//! Exit codes: 0 success, 1 a `check` invariant failed, 2 input error,
//! 3 a module precondition failed.

pub mod check;
pub mod report;
pub mod scene;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;
use valuations::{
    alesker_product, default_probes, fubini_rhs, gamma_vanishes, lambda_k, mcmullen_decompose, mixed_volume,
    normal_cycle, product::diagonal, w_degree, AngleConfig, Point, Polytope, Probe, Rational, RngSpec, SliceQuadrature,
    Valuation,
};

use report::{emit, inputs_digest, rational, rationals, real, Format, Report};
use scene::{parse_scene_str, Scene, SceneError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "valuations", version, about = "Exact smooth valuations on convex polytopes")]
pub struct Cli {
    /// Scene file (JSON).
    #[arg(long, global = true)]
    pub scene: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every Monte-Carlo stream.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Monte-Carlo sample count.
    #[arg(long = "mc-samples", global = true, default_value_t = 200_000)]
    pub mc_samples: usize,
    /// Probe family: `default`, `scene`, or an inline JSON list of vertex lists.
    #[arg(long, global = true, default_value = "default")]
    pub probes: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Exact volume of a body.
    Volume { body: String },
    /// Mixed volume of n bodies.
    MixedVolume { bodies: Vec<String> },
    /// Exact value of a valuation on a body.
    Eval { valuation: String, body: String },
    /// Coefficients of t -> phi(tK + x).
    ScalingCurve {
        valuation: String,
        body: String,
        #[arg(long)]
        point: Option<String>,
    },
    /// Degree-k scaling coefficient at a base point, evaluated on a body.
    Lambda {
        valuation: String,
        degree: usize,
        body: String,
        #[arg(long)]
        point: Option<String>,
    },
    /// Probe-relative filtration degree.
    Wdegree { valuation: String },
    /// Whether the valuation vanishes on probes of dimension below `index`.
    GammaCheck { valuation: String, index: usize },
    /// Product of two valuations evaluated on a body.
    Product { left: String, right: String, body: String },
    /// Exterior terms on the diagonal against the slice-integral route.
    FubiniCheck { left: String, right: String, body: String },
    /// Intrinsic volumes with a per-face breakdown.
    Intrinsic { body: String },
    /// Curvature measure of index k against a density weight (default 1).
    Curvature {
        body: String,
        index: usize,
        #[arg(long)]
        weight: Option<String>,
    },
    /// Homogeneous components of a translation-invariant valuation.
    Decompose { valuation: String, body: String },
    /// Built-in identity suites over the whole scene.
    Check,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Scene(#[from] SceneError),
    #[error("input error: {0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(#[from] valuations::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scene(_) | CliError::Input(_) => EXIT_INPUT,
            CliError::Precondition(_) => EXIT_PRECONDITION,
        }
    }

    fn to_value(&self) -> Value {
        let kind = match self {
            CliError::Scene(e) => e.kind(),
            CliError::Input(_) => "input",
            CliError::Precondition(_) => "precondition",
        };
        json!({"error": {"kind": kind, "message": self.to_string()}})
    }
}

/// Results of one command with the probe families it consulted.
pub struct Outcome {
    pub results: Value,
    pub probe_families: Vec<String>,
    pub violations: usize,
}

/// Parses arguments, runs, and renders; returns the output text and exit code.
pub fn run(args: &[String]) -> (String, i32) {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (e.to_string(), code);
        }
    };
    let echo: Vec<String> = args.iter().skip(1).cloned().collect();
    let scene_bytes = match &cli.scene {
        Some(path) => match std::fs::read(path) {
            Ok(b) => Some(b),
            Err(e) => return render_error(&cli, echo, &[], &CliError::Input(format!("{}: {e}", path.display()))),
        },
        None => None,
    };
    let bytes = scene_bytes.clone().unwrap_or_default();
    let result = load_scene(scene_bytes.as_deref()).and_then(|scene| execute(&cli, &scene));
    match result {
        Ok(outcome) => {
            let report = Report::new(echo, digest(&cli, &bytes), outcome.results, outcome.probe_families);
            let code = if outcome.violations > 0 { EXIT_VIOLATION } else { EXIT_OK };
            (emit(&report, cli.format), code)
        }
        Err(e) => render_error(&cli, echo, &bytes, &e),
    }
}

fn render_error(cli: &Cli, echo: Vec<String>, bytes: &[u8], e: &CliError) -> (String, i32) {
    let report = Report::new(echo, digest(cli, bytes), e.to_value(), Vec::new());
    (emit(&report, cli.format), e.exit_code())
}

fn digest(cli: &Cli, bytes: &[u8]) -> String {
    let options = format!("{:?}|seed={}|mc={}|probes={}", cli.command, cli.seed, cli.mc_samples, cli.probes);
    inputs_digest(bytes, &options)
}

fn load_scene(bytes: Option<&[u8]>) -> Result<Scene, CliError> {
    let Some(bytes) = bytes else {
        return Err(CliError::Input("--scene is required".into()));
    };
    let text = std::str::from_utf8(bytes).map_err(|e| CliError::Input(format!("scene is not UTF-8: {e}")))?;
    Ok(parse_scene_str(text)?)
}

pub fn parse_point(text: &str, n: usize) -> Result<Point, CliError> {
    let p: Point = text
        .split(',')
        .map(|s| s.trim().parse::<Rational>().map_err(|e| CliError::Input(e.to_string())))
        .collect::<Result<_, _>>()?;
    if p.len() != n {
        return Err(CliError::Input(format!("point {text:?} has {} coordinates, expected {n}", p.len())));
    }
    Ok(p)
}

fn base_point(point: &Option<String>, n: usize) -> Result<Point, CliError> {
    match point {
        Some(t) => parse_point(t, n),
        None => Ok(vec![Rational::zero(); n]),
    }
}

/// The probe family selected by `--probes`, with its report label.
pub fn probe_family(family: &str, scene: &Scene) -> Result<(String, Vec<Probe>), CliError> {
    let n = scene.dimension;
    let origin = vec![Rational::zero(); n];
    match family {
        "default" => Ok((format!("default(n={n})"), default_probes(n))),
        "scene" => {
            let probes: Vec<Probe> =
                scene.bodies.values().map(|b| Probe { body: b.clone(), base: origin.clone() }).collect();
            if probes.is_empty() {
                return Err(CliError::Input("scene has no bodies to probe with".into()));
            }
            Ok(("scene".into(), probes))
        }
        inline if inline.trim_start().starts_with('[') => {
            let lists: Vec<Vec<Vec<Rational>>> =
                serde_json::from_str(inline).map_err(|e| CliError::Input(format!("inline probes: {e}")))?;
            let mut probes = Vec::new();
            for verts in lists {
                if verts.iter().any(|v| v.len() != n) {
                    return Err(CliError::Input(format!("inline probe has wrong dimension, expected {n}")));
                }
                probes.push(Probe { body: Polytope::new(&verts)?, base: origin.clone() });
            }
            if probes.is_empty() {
                return Err(CliError::Input("inline probe list is empty".into()));
            }
            Ok((format!("inline({})", probes.len()), probes))
        }
        other => Err(CliError::Input(format!("unknown probe family {other:?}"))),
    }
}

fn plain(results: Value) -> Outcome {
    Outcome { results, probe_families: Vec::new(), violations: 0 }
}

pub(crate) fn angle_config(cli: &Cli) -> AngleConfig {
    AngleConfig { samples: cli.mc_samples, rng: RngSpec::new(cli.seed) }
}

pub fn execute(cli: &Cli, scene: &Scene) -> Result<Outcome, CliError> {
    let n = scene.dimension;
    match &cli.command {
        Command::Volume { body } => {
            let k = scene.body(body)?;
            Ok(plain(json!({"body": body, "volume": rational(&k.volume())})))
        }
        Command::MixedVolume { bodies } => {
            let ks: Vec<Polytope> = bodies.iter().map(|b| scene.body(b).cloned()).collect::<Result<_, _>>()?;
            Ok(plain(json!({"bodies": bodies, "mixed_volume": rational(&mixed_volume(&ks)?)})))
        }
        Command::Eval { valuation, body } => {
            let v = scene.valuation(valuation)?.evaluate(scene.body(body)?)?;
            Ok(plain(json!({"valuation": valuation, "body": body, "value": rational(&v)})))
        }
        Command::ScalingCurve { valuation, body, point } => {
            let phi = scene.valuation(valuation)?;
            let x = base_point(point, n)?;
            let curve = phi.scaling_curve(scene.body(body)?, &x)?;
            let mut coeffs = curve.univariate_coefficients();
            coeffs.resize(phi.t_degree_bound() + 1, Rational::zero());
            Ok(plain(json!({
                "valuation": valuation,
                "body": body,
                "point": rationals(&x),
                "coefficients": rationals(&coeffs),
                "degree_bound": phi.t_degree_bound(),
            })))
        }
        Command::Lambda { valuation, degree, body, point } => {
            let x = base_point(point, n)?;
            let l = lambda_k(scene.valuation(valuation)?, *degree, &x)?;
            let v = l.evaluate(scene.body(body)?)?;
            Ok(plain(
                json!({"valuation": valuation, "degree": degree, "point": rationals(&x), "body": body, "value": rational(&v)}),
            ))
        }
        Command::Wdegree { valuation } => {
            let (label, probes) = probe_family(&cli.probes, scene)?;
            let d = w_degree(scene.valuation(valuation)?, &probes)?;
            Ok(Outcome {
                results: json!({"valuation": valuation, "w_degree": d, "probe_count": probes.len(), "certificate": "probe-relative"}),
                probe_families: vec![label],
                violations: 0,
            })
        }
        Command::GammaCheck { valuation, index } => {
            let (label, probes) = probe_family(&cli.probes, scene)?;
            let bodies: Vec<Polytope> = probes.into_iter().map(|p| p.body).collect();
            let ok = gamma_vanishes(scene.valuation(valuation)?, *index, &bodies)?;
            Ok(Outcome {
                results: json!({"valuation": valuation, "index": index, "vanishes": ok}),
                probe_families: vec![label],
                violations: 0,
            })
        }
        Command::Product { left, right, body } => {
            let prod = alesker_product(scene.valuation(left)?, scene.valuation(right)?)?;
            let v = prod.evaluate(scene.body(body)?)?;
            Ok(plain(json!({"left": left, "right": right, "body": body, "value": rational(&v)})))
        }
        Command::FubiniCheck { left, right, body } => fubini_check(scene, left, right, body),
        Command::Intrinsic { body } => intrinsic(cli, scene, body),
        Command::Curvature { body, index, weight } => {
            let k = scene.body(body)?;
            let w = match weight {
                Some(id) => scene.density(id)?.poly().clone(),
                None => valuations::MultiPoly::one(n),
            };
            let cycle = normal_cycle::build_normal_cycle_with(k, &angle_config(cli))?;
            let v = normal_cycle::curvature_on_cycle(&cycle, *index, &w)?;
            Ok(plain(
                json!({"body": body, "index": index, "weight": weight.clone().unwrap_or_else(|| "1".into()), "value": real(&v)}),
            ))
        }
        Command::Decompose { valuation, body } => {
            let phi = scene.valuation(valuation)?;
            let k = scene.body(body)?;
            let comps = mcmullen_decompose(phi, k)?;
            let total: Rational = comps.iter().sum();
            Ok(plain(json!({
                "valuation": valuation,
                "body": body,
                "components": rationals(&comps),
                "sum": rational(&total),
                "value": rational(&phi.evaluate(k)?),
            })))
        }
        Command::Check => check::run_checks(cli, scene),
    }
}

fn fubini_check(scene: &Scene, left: &str, right: &str, body: &str) -> Result<Outcome, CliError> {
    let phi = scene.valuation(left)?;
    let psi = scene.valuation(right)?;
    let k = scene.body(body)?;
    let dk = diagonal(k);
    let mut rows = Vec::new();
    let mut violations = 0;
    for (i, w) in phi.terms().iter().enumerate() {
        for (j, g) in psi.terms().iter().enumerate() {
            let ext = valuations::exterior_product(
                &valuations::ThetaValuation::single(w.clone()),
                &valuations::ThetaValuation::single(g.clone()),
            );
            let exact = ext.evaluate(&dk)?;
            let est = fubini_rhs(w, g, &dk, SliceQuadrature::default())?;
            let agree = (&exact - &est.value).abs() <= est.error_bound;
            if !agree {
                violations += 1;
            }
            rows.push(json!({
                "terms": [i, j],
                "exterior": rational(&exact),
                "slice_integral": rational(&est.value),
                "error_bound": rational(&est.error_bound),
                "agree": agree,
            }));
        }
    }
    Ok(Outcome {
        results: json!({"left": left, "right": right, "body": body, "pairs": rows}),
        probe_families: Vec::new(),
        violations,
    })
}

fn intrinsic(cli: &Cli, scene: &Scene, body: &str) -> Result<Outcome, CliError> {
    let k = scene.body(body)?;
    let cfg = angle_config(cli);
    let cycle = normal_cycle::build_normal_cycle_with(k, &cfg)?;
    let values: Vec<Value> = (0..=k.ambient_dim())
        .map(|i| {
            normal_cycle::curvature_on_cycle(&cycle, i, &valuations::MultiPoly::one(k.ambient_dim())).map(|v| real(&v))
        })
        .collect::<Result<_, _>>()?;
    let faces: Vec<Value> = cycle
        .components
        .iter()
        .map(|c| {
            json!({
                "dim": c.face.dim,
                "vertices": c.face.vertex_indices,
                "angle": serde_json::to_value(&c.angle).expect("serializable"),
            })
        })
        .collect();
    Ok(plain(json!({"body": body, "intrinsic_volumes": values, "faces": faces})))
}
