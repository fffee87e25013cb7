use std::f64::consts::PI;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use emscatter::dictionary::{build_dictionary, read_dictionary, verify_distinct, write_dictionary, OrientationGrid};
use emscatter::farfield::{read_pattern, write_pattern, FarFieldPattern, IncidentWave};
use emscatter::forward::{scene_far_field, Euler, Material, Pose, Scene, SceneComponent, ShapeModel};
use emscatter::indicators::SamplingGrid;
use emscatter::schemes::{
    run_enhanced_m, run_scheme_ar, run_scheme_m, run_scheme_s, ArParams, MParams, PeakParams, Preprocess,
    ResampleConfig, SchemeRun, SmallParams, TupleSearch,
};
use emscatter::sph::{lebedev_rule, QuadratureRule};
use emscatter::{Error, Vec3};
use serde::Deserialize;

/// Direct-sampling location of electromagnetic scatterers from far-field data.
#[derive(Parser)]
#[command(name = "emscatter", version)]
struct Cli {
    /// Upper bound on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the far-field pattern of a scene file.
    Forward(ForwardArgs),
    /// Build an augmented dictionary of reference patterns.
    Dict(DictArgs),
    /// Run a locating scheme on measured patterns.
    Run(RunArgs),
}

#[derive(Args)]
struct WaveArgs {
    /// Wavenumber.
    #[arg(long)]
    k: f64,
    /// Incident direction `x,y,z`.
    #[arg(long, default_value = "1,0,0", value_parser = parse_vec3)]
    d: Vec3,
    /// Polarization `x,y,z`.
    #[arg(long, default_value = "0,0,1", value_parser = parse_vec3)]
    p: Vec3,
    /// Lebedev rule size.
    #[arg(long, default_value_t = 590)]
    nodes: usize,
}

impl WaveArgs {
    fn wave(&self) -> Result<IncidentWave, Error> {
        IncidentWave::new(self.k, self.d, self.p)
    }
}

#[derive(Args)]
struct ForwardArgs {
    /// TOML scene description.
    #[arg(long)]
    scene: PathBuf,
    #[command(flatten)]
    wave: WaveArgs,
    /// Relative noise level added to the output.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output pattern file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DictArgs {
    /// Reference shape as `token:material`, e.g. `kite:pec` or `ball:eps=4`.
    #[arg(long = "shape", required = true)]
    shapes: Vec<String>,
    /// Angular step in radians.
    #[arg(long, default_value_t = PI / 4.0)]
    step: f64,
    /// Sample all three Euler angles instead of the in-plane angle only.
    #[arg(long)]
    full3d: bool,
    /// Scale factors.
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.5, 1.0, 2.0, 5.0])]
    scales: Vec<f64>,
    #[command(flatten)]
    wave: WaveArgs,
    /// Relative distinctness threshold reported on.
    #[arg(long, default_value_t = 0.01)]
    distinct: f64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeName {
    S,
    Ar,
    M,
    EnhancedM,
}

#[derive(Args)]
struct RunArgs {
    #[arg(value_enum)]
    scheme: SchemeName,
    /// Measured pattern (the AR-stage data for enhanced-m).
    #[arg(long)]
    data: PathBuf,
    /// Second pattern for the small-component stage of enhanced-m.
    #[arg(long)]
    data2: Option<PathBuf>,
    /// Dictionary directory (matching `--data`).
    #[arg(long)]
    dict: Option<PathBuf>,
    /// Dictionary matching `--data2`.
    #[arg(long)]
    dict2: Option<PathBuf>,
    /// Lower corner of the sampling box.
    #[arg(long, value_parser = parse_vec3)]
    lo: Vec3,
    /// Upper corner of the sampling box.
    #[arg(long, value_parser = parse_vec3)]
    hi: Vec3,
    /// Grid spacing for S/AR stages (default: a tenth of the wavelength).
    #[arg(long)]
    spacing: Option<f64>,
    /// Grid spacing for the small-component stage of m/enhanced-m.
    #[arg(long)]
    s_spacing: Option<f64>,
    /// Relative noise level applied to the data before running.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Noise seed; the second pattern uses `seed + 1`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Peak threshold relative to the field maximum.
    #[arg(long, default_value_t = 0.8)]
    threshold: f64,
    /// Peak merge radius (default: half a wavelength).
    #[arg(long)]
    merge: Option<f64>,
    /// AR acceptance `|I − 1| ≤ tol`.
    #[arg(long, default_value_t = 0.2)]
    tol: f64,
    /// AR trimming margin.
    #[arg(long, default_value_t = 0.0)]
    margin: f64,
    /// Coarse pattern for an optional Scheme S crop before AR.
    #[arg(long)]
    pre: Option<PathBuf>,
    /// Crop half-width around coarse peaks.
    #[arg(long, default_value_t = 1.5)]
    pre_half_width: f64,
    /// Re-sampling cube subdivisions per axis.
    #[arg(long, default_value_t = 10)]
    subdivisions: usize,
    /// Re-sampling cube side length.
    #[arg(long, default_value_t = 1.0)]
    side: f64,
    /// Largest exhaustive tuple count.
    #[arg(long, default_value_t = 1_000_000)]
    cap: usize,
    /// Search one component at a time.
    #[arg(long)]
    greedy: bool,
    /// Score only this many lowest-residual tuples.
    #[arg(long)]
    shortlist: Option<usize>,
    /// Re-sampling passes.
    #[arg(long, default_value_t = 1)]
    passes: usize,
    /// Minimum raw small-indicator value of a residual peak.
    #[arg(long, default_value_t = 0.15)]
    min_small: f64,
    /// Include per-stage timing in the report.
    #[arg(long)]
    timing: bool,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x, y, z] => Ok(Vec3::new(x, y, z)),
        _ => Err(format!("expected three comma-separated numbers, got {s:?}")),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    component: Vec<ComponentSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentSpec {
    shape: String,
    /// Only for `shape = "sphere"`.
    radius: Option<f64>,
    material: MaterialSpec,
    position: [f64; 3],
    euler: Option<[f64; 3]>,
    /// In-plane angle, alternative to `euler`.
    alpha: Option<f64>,
    #[serde(default = "one")]
    tau: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MaterialSpec {
    Token(String),
    Medium {
        eps: f64,
        #[serde(default = "one")]
        mu: f64,
        #[serde(default)]
        sigma: f64,
    },
}

impl MaterialSpec {
    fn material(&self) -> Result<Material, Error> {
        match self {
            Self::Token(t) if t == "pec" => Ok(Material::Pec),
            Self::Token(t) => Err(Error::InvalidParameter(format!("unknown material {t:?} (use \"pec\" or a table)"))),
            Self::Medium { eps, mu, sigma } => Material::medium(*eps, *mu, *sigma),
        }
    }
}

/// `pec` or `eps=4[,mu=1][,sigma=0]`.
fn parse_material(s: &str) -> Result<Material, Error> {
    if s == "pec" {
        return Ok(Material::Pec);
    }
    let (mut eps, mut mu, mut sigma) = (None, 1.0, 0.0);
    for kv in s.split(',') {
        let (key, val) = kv
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("material field {kv:?} is not key=value")))?;
        let v: f64 = val.parse().map_err(|_| Error::InvalidParameter(format!("not a number: {val:?}")))?;
        match key {
            "eps" => eps = Some(v),
            "mu" => mu = v,
            "sigma" => sigma = v,
            _ => return Err(Error::InvalidParameter(format!("unknown material field {key:?}"))),
        }
    }
    let eps = eps.ok_or_else(|| Error::InvalidParameter(format!("material {s:?} needs eps")))?;
    Material::medium(eps, mu, sigma)
}

fn shape_model(token: &str, radius: Option<f64>, material: Material) -> Result<ShapeModel, Error> {
    match (token, radius) {
        ("sphere", Some(r)) => ShapeModel::sphere("sphere", r, material),
        ("sphere", None) => Err(Error::InvalidParameter("shape \"sphere\" needs a radius".into())),
        (_, Some(_)) => Err(Error::InvalidParameter(format!("radius only applies to \"sphere\", not {token:?}"))),
        (t, None) => ShapeModel::builtin(t, material),
    }
}

fn load_scene(path: &Path) -> anyhow::Result<Scene> {
    let text = read_text(path)?;
    let file: SceneFile = toml::from_str(&text).map_err(|e| Error::Parse {
        line: e.span().map_or(0, |s| text[..s.start].lines().count().max(1)),
        message: e.message().to_string(),
    })?;
    let mut comps = Vec::new();
    for c in &file.component {
        let model = shape_model(&c.shape, c.radius, c.material.material()?)?;
        let euler = match (c.euler, c.alpha) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidParameter("give either euler or alpha, not both".into()).into())
            }
            (Some([t, f, p]), None) => Euler::new(t, f, p)?,
            (None, Some(a)) => Euler::in_plane(a)?,
            (None, None) => Euler::identity(),
        };
        let pose = Pose::new(Vec3::from(c.position), euler, c.tau)?;
        comps.push(SceneComponent::new(model, pose));
    }
    Ok(Scene::new(comps)?)
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| {
        let msg = if e.kind() == std::io::ErrorKind::NotFound { "file not found".to_string() } else { e.to_string() };
        anyhow::Error::new(e).context(format!("{}: {msg}", path.display()))
    })
}

/// Node count announced in the last field of the first non-empty line.
fn header_nodes(text: &str, path: &Path) -> anyhow::Result<usize> {
    text.lines()
        .find(|l| !l.trim().is_empty())
        .and_then(|l| l.split_whitespace().last())
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse { line: 1, message: format!("{}: missing node count", path.display()) }.into())
}

fn load_pattern(path: &Path) -> anyhow::Result<(FarFieldPattern, QuadratureRule)> {
    let text = read_text(path)?;
    let rule = lebedev_rule(header_nodes(&text, path)?)?;
    let pattern = read_pattern(text.as_bytes(), &rule).with_context(|| path.display().to_string())?;
    Ok((pattern, rule))
}

fn load_dictionary(dir: &Path, rule: &QuadratureRule) -> anyhow::Result<emscatter::dictionary::Dictionary> {
    let manifest = dir.join("manifest.txt");
    read_text(&manifest)?;
    read_dictionary(dir, rule).with_context(|| dir.display().to_string())
}

fn cmd_forward(args: &ForwardArgs) -> anyhow::Result<()> {
    let wave = args.wave.wave()?;
    let rule = lebedev_rule(args.wave.nodes)?;
    let scene = load_scene(&args.scene)?;
    let mut a = scene_far_field(&scene, &wave, &rule)?;
    if args.noise > 0.0 {
        a = a.apply_noise(args.noise, args.seed, &rule)?;
    } else if args.noise < 0.0 {
        bail!(Error::InvalidParameter(format!("noise level must be ≥ 0, got {}", args.noise)));
    }
    let file = create(&args.out)?;
    write_pattern(&a, &rule, BufWriter::new(file))?;
    println!("wrote {} ({} nodes, norm {:.6e})", args.out.display(), rule.len(), a.norm(&rule)?);
    Ok(())
}

fn create(path: &Path) -> anyhow::Result<fs::File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| dir.display().to_string())?;
    }
    fs::File::create(path).with_context(|| path.display().to_string())
}

fn cmd_dict(args: &DictArgs) -> anyhow::Result<()> {
    let wave = args.wave.wave()?;
    let rule = lebedev_rule(args.wave.nodes)?;
    let shapes = args
        .shapes
        .iter()
        .map(|s| {
            let (token, mat) = s.split_once(':').unwrap_or((s.as_str(), "pec"));
            ShapeModel::builtin(token, parse_material(mat)?)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let grid = if args.full3d {
        OrientationGrid::Full3D { step: args.step }
    } else {
        OrientationGrid::InPlane { step: args.step }
    };
    let dict = build_dictionary(&shapes, &grid, &args.scales, &wave, &rule)?;
    write_dictionary(&dict, &rule, &args.out).with_context(|| args.out.display().to_string())?;
    println!("wrote {} entries to {}", dict.len(), args.out.display());
    let violations = verify_distinct(&dict, args.distinct);
    if violations.is_empty() {
        println!("all entries pairwise distinct at {}", args.distinct);
    }
    for v in violations {
        println!("not distinct: entries {} and {} (relative distance {:.3e})", v.first, v.second, v.distance);
    }
    Ok(())
}

fn noisy(a: FarFieldPattern, delta: f64, seed: u64, rule: &QuadratureRule) -> anyhow::Result<FarFieldPattern> {
    if delta < 0.0 {
        bail!(Error::InvalidParameter(format!("noise level must be ≥ 0, got {delta}")));
    }
    Ok(if delta > 0.0 { a.apply_noise(delta, seed, rule)? } else { a })
}

fn grid_for(args: &RunArgs, spacing: Option<f64>, k: f64) -> anyhow::Result<SamplingGrid> {
    Ok(SamplingGrid::new(args.lo, args.hi, spacing.unwrap_or(2.0 * PI / k / 10.0))?)
}

fn cmd_run(args: &RunArgs) -> anyhow::Result<()> {
    let scheme = args.scheme;
    if scheme == SchemeName::EnhancedM && (args.data2.is_none() || args.dict2.is_none()) {
        bail!(Error::InvalidParameter(
            "usage: run enhanced-m --data A1 --dict D1 --data2 A2 --dict2 D2 --lo .. --hi .. --out DIR".into()
        ));
    }
    if scheme != SchemeName::S && args.dict.is_none() {
        bail!(Error::InvalidParameter("this scheme needs --dict".into()));
    }
    let (a, rule) = load_pattern(&args.data)?;
    let a = noisy(a, args.noise, args.seed, &rule)?;
    let peaks = PeakParams { threshold_frac: args.threshold, min_separation: args.merge };
    let ar = ArParams {
        tol: args.tol,
        margin: args.margin,
        preprocess: match &args.pre {
            Some(path) => {
                let (coarse, coarse_rule) = load_pattern(path)?;
                if coarse_rule.id() != rule.id() {
                    bail!(Error::Incompatible("coarse and measured patterns use different rules".into()));
                }
                let grid = grid_for(args, None, coarse.wave().k())?;
                Some(Preprocess { pattern: coarse, grid, peaks, half_width: args.pre_half_width })
            }
            None => None,
        },
        ..ArParams::default()
    };
    let m = MParams {
        ar: ar.clone(),
        resample: ResampleConfig {
            subdivisions: args.subdivisions,
            side: args.side,
            cap: args.cap,
            search: if args.greedy { TupleSearch::Greedy } else { TupleSearch::Exhaustive },
            shortlist: args.shortlist,
            passes: args.passes,
        },
        small: SmallParams { peaks, min_value: args.min_small },
    };
    let grid = grid_for(args, args.spacing, a.wave().k())?;
    let run: SchemeRun = match scheme {
        SchemeName::S => run_scheme_s(&a, &grid, &rule, &peaks)?,
        SchemeName::Ar => {
            let dict = load_dictionary(args.dict.as_ref().expect("checked"), &rule)?;
            run_scheme_ar(&a, &dict, &grid, &rule, &ar)?
        }
        SchemeName::M => {
            let dict = load_dictionary(args.dict.as_ref().expect("checked"), &rule)?;
            let s_grid = grid_for(args, args.s_spacing.or(args.spacing), a.wave().k())?;
            run_scheme_m(&a, &dict, &grid, &s_grid, &rule, &m)?
        }
        SchemeName::EnhancedM => {
            let dict = load_dictionary(args.dict.as_ref().expect("checked"), &rule)?;
            let (a2, rule2) = load_pattern(args.data2.as_ref().expect("checked"))?;
            if rule2.id() != rule.id() {
                bail!(Error::Incompatible("the two patterns use different rules".into()));
            }
            let a2 = noisy(a2, args.noise, args.seed + 1, &rule)?;
            let dict2 = load_dictionary(args.dict2.as_ref().expect("checked"), &rule)?;
            let s_grid = grid_for(args, args.s_spacing, a2.wave().k())?;
            run_enhanced_m(&a, &a2, &dict, &dict2, &grid, &s_grid, &rule, &m)?
        }
    };
    fs::create_dir_all(&args.out).with_context(|| args.out.display().to_string())?;
    for (name, field) in &run.fields {
        let path = args.out.join(format!("field-{name}.txt"));
        field.write(BufWriter::new(create(&path)?))?;
    }
    let report = args.out.join("report.json");
    fs::write(&report, run.report.to_json(args.timing)).with_context(|| report.display().to_string())?;
    for c in &run.report.components {
        println!(
            "{:8} at ({:.4}, {:.4}, {:.4}) euler {:?} tau {} score {:.4}",
            c.shape, c.position[0], c.position[1], c.position[2], c.euler, c.tau, c.score
        );
    }
    println!("wrote {}", report.display());
    Ok(())
}

/// 1: validation, 2: I/O, 3: numerical failure.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Io(_) => 2,
                Error::ZeroNorm(_) | Error::Truncation(_) => 3,
                _ => 1,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Forward(a) => cmd_forward(a),
        Command::Dict(a) => cmd_dict(a),
        Command::Run(a) => cmd_run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
