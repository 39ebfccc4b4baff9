//! Command-line driver.
//!
//! Every subcommand is turned into a [`RunConfig`]: the command name plus a
//! JSON payload (built from flags, or read from `--config`). [`run`]
//! validates the payload against the command's typed schema, executes it
//! and returns the artifacts as strings, so identical configs give
//! byte-identical output. The binary maps results to exit codes with
//! [`exit_code`].

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::closed_forms::{sharpness_lower_bound, DirichletFamily, EntireFamily, NeumannFamily};
use crate::convergence::dirichlet_convergence;
use crate::error::{Error, Result};
use crate::format::to_json_string;
use crate::grid::{GridSpec, ScalarField};
use crate::legendre::{fenchel_young, involution_error, plt_forward, plt_inverse};
use crate::params::{EquationParams, FamilyCoeffs};
use crate::residual::ma_residual;
use crate::solver::{solve_dirichlet, InitKind, SolverConfig};
use crate::transforms::{
    divform_residual, exterior_plane_samples, extended_profile, kelvin_lift, moving_sphere_check,
    pullback_full, DivFormParams, KelvinParams,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Family,
    Residual,
    Plt,
    Divform,
    KelvinCheck,
    MsCheck,
    Solve,
    Convergence,
    Sharpness,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// One command invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub payload: Value,
    pub output_path: Option<PathBuf>,
    /// Secondary JSON report path (`plt` summary, `solve` report, `divform` residual).
    pub report_path: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Text artifacts of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifacts {
    /// Written to the output path, or stdout.
    pub main: String,
    /// Written to the report path; printed after `main` otherwise.
    pub report: Option<String>,
    /// Set when the run produced output but failed numerically (exit 3).
    pub failure: Option<String>,
}

impl Artifacts {
    fn main(main: String) -> Self {
        Artifacts {
            main,
            report: None,
            failure: None,
        }
    }
}

/// Exit status for an error returned by [`run`].
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::SingularJacobian { .. }
        | Error::NotConverged(_)
        | Error::EmptyEvaluation
        | Error::NonConvexSlice { .. }
        | Error::DegenerateSlope(_) => EXIT_NUMERICAL,
        _ => EXIT_VALIDATION,
    }
}

fn parse<T: for<'de> Deserialize<'de>>(command: CommandKind, payload: &Value) -> Result<T> {
    serde_json::from_value(payload.clone()).map_err(|e| {
        Error::InvalidParameter {
            name: "payload",
            reason: format!("{command:?} payload: {e}"),
        }
    })
}

fn field_output(field: &ScalarField, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Csv => field.to_csv_string(),
        OutputFormat::Json => to_json_string(field)? + "\n",
    })
}

fn json_output<T: Serialize>(value: &T) -> Result<String> {
    Ok(to_json_string(value)? + "\n")
}

fn read_field(path: &PathBuf) -> Result<ScalarField> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(&text)?)
    } else {
        ScalarField::read_csv(text.as_bytes())
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum FamilyKind {
    #[default]
    Dirichlet,
    Neumann,
    Entire,
}

fn zero() -> f64 {
    0.0
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyPayload {
    #[serde(default)]
    family: FamilyKind,
    alpha: f64,
    #[serde(default = "zero")]
    a: f64,
    #[serde(default = "one")]
    b: f64,
    #[serde(rename = "A", default)]
    big_a: Option<f64>,
    #[serde(rename = "B", default = "zero")]
    big_b: f64,
    #[serde(rename = "C", default = "zero")]
    big_c: f64,
    #[serde(default = "zero")]
    p: f64,
    #[serde(default = "zero")]
    q: f64,
    #[serde(default = "zero")]
    r: f64,
    grid: GridSpec,
}

fn run_family(cfg: &RunConfig) -> Result<Artifacts> {
    let p: FamilyPayload = parse(cfg.command, &cfg.payload)?;
    p.grid.validate()?;
    let field = match p.family {
        FamilyKind::Dirichlet => {
            let fam = DirichletFamily::new(
                EquationParams::new(p.a, p.b, p.alpha)?,
                FamilyCoeffs::new(p.big_a.unwrap_or(0.0), p.big_b, p.big_c)?,
            )?;
            ScalarField::try_from_fn(p.grid, |x, y| fam.eval(x, y))?
        }
        FamilyKind::Neumann => {
            let fam = NeumannFamily::new(p.alpha, p.big_a.unwrap_or(1.0), (p.p, p.q))?;
            ScalarField::try_from_fn(p.grid, |x, y| fam.eval(x, y))?
        }
        FamilyKind::Entire => {
            let fam = EntireFamily::new(p.alpha, p.big_a.unwrap_or(1.0), p.big_b, (p.p, p.q, p.r))?;
            ScalarField::from_fn(p.grid, |x, y| fam.eval(x, y))?
        }
    };
    Ok(Artifacts::main(field_output(&field, cfg.format)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ResidualPayload {
    input: PathBuf,
    alpha: f64,
    #[serde(default = "zero")]
    a: f64,
    #[serde(default = "one")]
    b: f64,
}

fn run_residual(cfg: &RunConfig) -> Result<Artifacts> {
    let p: ResidualPayload = parse(cfg.command, &cfg.payload)?;
    let params = EquationParams::new(p.a, p.b, p.alpha)?;
    let field = read_field(&p.input)?;
    Ok(Artifacts::main(json_output(&ma_residual(&field, &params)?)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PltPayload {
    input: PathBuf,
    n_xi: usize,
    #[serde(default)]
    n_x: Option<usize>,
}

#[derive(Serialize)]
struct PltSummary {
    xi_spec: GridSpec,
    involution_max_error: f64,
    inverse_x_range: (f64, f64),
    fenchel_young_max_violation: f64,
    fenchel_young_max_equality_gap: f64,
}

fn run_plt(cfg: &RunConfig) -> Result<Artifacts> {
    let p: PltPayload = parse(cfg.command, &cfg.payload)?;
    let u = read_field(&p.input)?;
    let n_x = p.n_x.unwrap_or(u.spec().nx);
    let star = plt_forward(&u, p.n_xi)?;
    let back = plt_inverse(&star, n_x)?;
    let fy = fenchel_young(&u, &star.field_star)?;
    let summary = PltSummary {
        xi_spec: star.xi_spec,
        involution_max_error: involution_error(&u, p.n_xi, n_x)?,
        inverse_x_range: (back.spec().x_min, back.spec().x_max),
        fenchel_young_max_violation: fy.max_violation,
        fenchel_young_max_equality_gap: fy.max_equality_gap,
    };
    Ok(Artifacts {
        main: field_output(&star.field_star, cfg.format)?,
        report: Some(json_output(&summary)?),
        failure: None,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DivformPayload {
    input: PathBuf,
    /// Residual only: the input is already in `(x₁, x₂)` coordinates.
    #[serde(default)]
    a_w: Option<f64>,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default = "zero")]
    a: f64,
    #[serde(default = "one")]
    b: f64,
    #[serde(default)]
    n_x2: Option<usize>,
}

#[derive(Serialize)]
struct DivformSummary {
    weight_exponent: f64,
    offset: Option<f64>,
    residual: crate::residual::ResidualReport,
}

fn run_divform(cfg: &RunConfig) -> Result<Artifacts> {
    let p: DivformPayload = parse(cfg.command, &cfg.payload)?;
    let input = read_field(&p.input)?;
    match (p.a_w, p.alpha) {
        (Some(a_w), None) => {
            let summary = DivformSummary {
                weight_exponent: a_w,
                offset: None,
                residual: divform_residual(&input, a_w)?,
            };
            Ok(Artifacts::main(json_output(&summary)?))
        }
        (None, Some(alpha)) => {
            let params = EquationParams::new(p.a, p.b, alpha)?;
            let dp = DivFormParams::from_equation(&params)?;
            let pulled = pullback_full(&input, &params, p.n_x2.unwrap_or(input.spec().ny))?;
            let summary = DivformSummary {
                weight_exponent: dp.weight_exponent,
                offset: Some(dp.offset),
                residual: divform_residual(&pulled, dp.weight_exponent)?,
            };
            Ok(Artifacts {
                main: field_output(&pulled, cfg.format)?,
                report: Some(json_output(&summary)?),
                failure: None,
            })
        }
        _ => Err(Error::InvalidParameter {
            name: "a_w",
            reason: "give exactly one of `a_w` (residual only) or `alpha` (pull back then residual)".into(),
        }),
    }
}

/// Sample set of a Kelvin or moving-sphere config.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaneGrid {
    x1: (f64, f64),
    xn: (f64, f64),
    nodes: (usize, usize),
}

fn samples_of(kp: &KelvinParams, samples: Option<Vec<Vec<f64>>>, grid: Option<PlaneGrid>) -> Result<Vec<Vec<f64>>> {
    match (samples, grid) {
        (Some(s), None) => Ok(s),
        (None, Some(g)) => {
            if g.nodes.0 < 2 || g.nodes.1 < 2 {
                return Err(Error::InvalidParameter {
                    name: "grid.nodes",
                    reason: "need at least 2 nodes per axis".into(),
                });
            }
            Ok(exterior_plane_samples(kp, g.x1, g.xn, g.nodes))
        }
        _ => Err(Error::InvalidParameter {
            name: "samples",
            reason: "give exactly one of `samples` or `grid`".into(),
        }),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileSpec {
    a_w: f64,
    #[serde(default = "zero")]
    l: f64,
    c_star: f64,
    /// Added to the extended profile before lifting (the `+C₀` shift).
    #[serde(default = "zero")]
    shift: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KelvinCheckPayload {
    center: Vec<f64>,
    lambda: f64,
    profile: ProfileSpec,
    #[serde(default)]
    tolerance: f64,
    #[serde(default)]
    samples: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    grid: Option<PlaneGrid>,
}

#[derive(Serialize)]
struct KelvinViolation {
    index: usize,
    point: Vec<f64>,
    image: Vec<f64>,
    lifted: f64,
    value: f64,
}

#[derive(Serialize)]
struct KelvinCheckReport {
    dimension: usize,
    exponent: f64,
    log_variant: bool,
    n_samples: usize,
    violations: Vec<KelvinViolation>,
}

fn run_kelvin_check(cfg: &RunConfig) -> Result<Artifacts> {
    let p: KelvinCheckPayload = parse(cfg.command, &cfg.payload)?;
    let kp = KelvinParams::new(p.center, p.lambda, 0.0)?;
    let n = kp.dimension();
    let prof = &p.profile;
    let profile = |y: &[f64]| extended_profile(prof.a_w, prof.l, prof.c_star, y[n - 1]).map(|v| v + prof.shift);
    // Validate the profile parameters once up front.
    profile(&vec![0.0; n])?;
    let samples = samples_of(&kp, p.samples, p.grid)?;
    let mut violations = Vec::new();
    for (index, y) in samples.iter().enumerate() {
        if kp.distance(y) < kp.lambda() * (1.0 - 1e-12) {
            return Err(Error::InsideBall { index });
        }
        let lifted = kelvin_lift(&kp, n, prof.a_w, profile, y)?;
        let value = profile(y)?;
        if lifted > value + p.tolerance {
            violations.push(KelvinViolation {
                index,
                point: y.clone(),
                image: crate::transforms::kelvin_point(&kp, y)?,
                lifted,
                value,
            });
        }
    }
    let exponent = n as f64 - 2.0 + prof.a_w;
    let report = KelvinCheckReport {
        dimension: n,
        exponent,
        log_variant: exponent.abs() <= crate::transforms::kelvin::LOG_LIFT_TOL,
        n_samples: samples.len(),
        violations,
    };
    Ok(Artifacts::main(json_output(&report)?))
}

/// Test functions available to `ms-check`.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FunctionSpec {
    Constant { value: f64 },
    /// `scale · y_n^power`
    HeightPower { scale: f64, power: f64 },
    /// `scale · |y|^power`
    RadialPower { scale: f64, power: f64 },
    /// `coeffs · y + offset`
    Affine { coeffs: Vec<f64>, offset: f64 },
    /// Extended Liouville profile plus `shift`.
    Profile { a_w: f64, l: f64, c_star: f64, shift: f64 },
}

impl FunctionSpec {
    fn eval(&self, y: &[f64]) -> f64 {
        let n = y.len();
        match self {
            FunctionSpec::Constant { value } => *value,
            FunctionSpec::HeightPower { scale, power } => scale * y[n - 1].powf(*power),
            FunctionSpec::RadialPower { scale, power } => {
                scale * y.iter().map(|v| v * v).sum::<f64>().sqrt().powf(*power)
            }
            FunctionSpec::Affine { coeffs, offset } => {
                offset + coeffs.iter().zip(y).map(|(c, v)| c * v).sum::<f64>()
            }
            FunctionSpec::Profile { a_w, l, c_star, shift } => {
                extended_profile(*a_w, *l, *c_star, y[n - 1]).unwrap_or(f64::NAN) + shift
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MsCheckPayload {
    center: Vec<f64>,
    lambda: f64,
    #[serde(default)]
    tau: f64,
    #[serde(default)]
    log_variant: bool,
    #[serde(default)]
    tolerance: f64,
    function: FunctionSpec,
    #[serde(default)]
    samples: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    grid: Option<PlaneGrid>,
}

#[derive(Serialize)]
struct MsCheckReport {
    n_samples: usize,
    violations: Vec<crate::transforms::Violation>,
}

fn run_ms_check(cfg: &RunConfig) -> Result<Artifacts> {
    let p: MsCheckPayload = parse(cfg.command, &cfg.payload)?;
    let kp = KelvinParams::new(p.center, p.lambda, p.tau)?;
    if let FunctionSpec::Affine { coeffs, .. } = &p.function {
        if coeffs.len() != kp.dimension() {
            return Err(Error::InvalidParameter {
                name: "function.coeffs",
                reason: format!("expected {} coefficients", kp.dimension()),
            });
        }
    }
    if let FunctionSpec::Profile { a_w, l, c_star, .. } = &p.function {
        crate::transforms::liouville_profile(*a_w, *l, *c_star, *l)?;
    }
    let samples = samples_of(&kp, p.samples, p.grid)?;
    let violations = moving_sphere_check(|y| p.function.eval(y), &kp, &samples, p.log_variant, p.tolerance)?;
    Ok(Artifacts::main(json_output(&MsCheckReport {
        n_samples: samples.len(),
        violations,
    })?))
}

fn default_tol() -> f64 {
    1e-10
}

fn default_iters() -> usize {
    50
}

fn default_backtracks() -> usize {
    30
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewtonOptions {
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default = "default_iters")]
    max_iters: usize,
    #[serde(default = "one")]
    damping: f64,
    #[serde(default = "default_backtracks")]
    max_backtracks: usize,
    #[serde(default)]
    init: InitKind,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: default_tol(),
            max_iters: default_iters(),
            damping: 1.0,
            max_backtracks: default_backtracks(),
            init: InitKind::default(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolvePayload {
    grid: GridSpec,
    params: EquationParams,
    family: FamilyCoeffs,
    #[serde(default)]
    newton: NewtonOptions,
}

#[derive(Serialize)]
struct SolveSummary {
    iterations: usize,
    final_residual: f64,
    converged: bool,
    convexity_violations: usize,
    residual_history: Vec<f64>,
    max_error_vs_family: f64,
}

fn run_solve(cfg: &RunConfig) -> Result<Artifacts> {
    let p: SolvePayload = parse(cfg.command, &cfg.payload)?;
    p.grid.validate()?;
    let fam = DirichletFamily::new(p.params, p.family)?;
    let exact = ScalarField::try_from_fn(p.grid, |x, y| fam.eval(x, y))?;
    let mut sc = SolverConfig::new(p.grid, p.params, move |x, y| fam.eval(x, y).unwrap_or(f64::NAN));
    sc.newton_tol = p.newton.tol;
    sc.max_iters = p.newton.max_iters;
    sc.damping = p.newton.damping;
    sc.max_backtracks = p.newton.max_backtracks;
    sc.init = p.newton.init;
    let rep = solve_dirichlet(&sc)?;
    let summary = SolveSummary {
        iterations: rep.iterations,
        final_residual: rep.final_residual,
        converged: rep.converged,
        convexity_violations: rep.convexity_violations,
        max_error_vs_family: rep.solution.max_abs_diff(&exact)?,
        residual_history: rep.residual_history.clone(),
    };
    let failure = (!rep.converged).then(|| {
        format!(
            "solver stopped after {} iterations with residual {:e}",
            rep.iterations, rep.final_residual
        )
    });
    Ok(Artifacts {
        main: field_output(&rep.solution, cfg.format)?,
        report: Some(json_output(&summary)?),
        failure,
    })
}

fn default_sizes() -> Vec<usize> {
    vec![17, 33, 65]
}

fn default_x_range() -> (f64, f64) {
    (-1.0, 1.0)
}

fn default_y_range() -> (f64, f64) {
    (0.0, 1.0)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConvergencePayload {
    alpha: f64,
    #[serde(default = "zero")]
    a: f64,
    #[serde(default = "one")]
    b: f64,
    #[serde(rename = "A", default = "zero")]
    big_a: f64,
    #[serde(rename = "B", default = "zero")]
    big_b: f64,
    #[serde(rename = "C", default = "zero")]
    big_c: f64,
    #[serde(default = "default_x_range")]
    x_range: (f64, f64),
    #[serde(default = "default_y_range")]
    y_range: (f64, f64),
    #[serde(default = "default_sizes")]
    sizes: Vec<usize>,
    #[serde(default)]
    init: InitKind,
}

fn run_convergence(cfg: &RunConfig) -> Result<Artifacts> {
    let p: ConvergencePayload = parse(cfg.command, &cfg.payload)?;
    let fam = DirichletFamily::new(
        EquationParams::new(p.a, p.b, p.alpha)?,
        FamilyCoeffs::new(p.big_a, p.big_b, p.big_c)?,
    )?;
    let table = dirichlet_convergence(&fam, p.x_range, p.y_range, &p.sizes, p.init)?;
    let failure = table
        .rows
        .iter()
        .find(|r| !r.converged)
        .map(|r| format!("solver did not converge on the {}x{} grid", r.n, r.n));
    Ok(Artifacts {
        main: json_output(&table)?,
        report: None,
        failure,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SharpnessPayload {
    alpha: f64,
    y: f64,
    #[serde(default = "one")]
    c: f64,
}

#[derive(Serialize)]
struct SharpnessReport {
    alpha: f64,
    c: f64,
    y: f64,
    bound: f64,
}

fn run_sharpness(cfg: &RunConfig) -> Result<Artifacts> {
    let p: SharpnessPayload = parse(cfg.command, &cfg.payload)?;
    let bound = sharpness_lower_bound(p.alpha, p.c, p.y)?;
    Ok(Artifacts::main(json_output(&SharpnessReport {
        alpha: p.alpha,
        c: p.c,
        y: p.y,
        bound,
    })?))
}

/// Executes one command. Errors are validation or numerical failures;
/// see [`exit_code`].
pub fn run(cfg: &RunConfig) -> Result<Artifacts> {
    let field_like = matches!(
        cfg.command,
        CommandKind::Family | CommandKind::Plt | CommandKind::Divform | CommandKind::Solve
    );
    if !field_like && cfg.format == OutputFormat::Csv && cfg.command != CommandKind::Residual {
        // JSON-only commands ignore the default format.
    }
    match cfg.command {
        CommandKind::Family => run_family(cfg),
        CommandKind::Residual => run_residual(cfg),
        CommandKind::Plt => run_plt(cfg),
        CommandKind::Divform => run_divform(cfg),
        CommandKind::KelvinCheck => run_kelvin_check(cfg),
        CommandKind::MsCheck => run_ms_check(cfg),
        CommandKind::Solve => run_solve(cfg),
        CommandKind::Convergence => run_convergence(cfg),
        CommandKind::Sharpness => run_sharpness(cfg),
    }
}

// ---------------------------------------------------------------------------
// Argument parsing

fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err("expected x_min,x_max,y_min,y_max,nx,ny".into());
    }
    let f = |k: usize| parts[k].parse::<f64>().map_err(|e| format!("{}: {e}", parts[k]));
    let n = |k: usize| parts[k].parse::<usize>().map_err(|e| format!("{}: {e}", parts[k]));
    GridSpec::new(f(0)?, f(1)?, f(2)?, f(3)?, n(4)?, n(5)?).map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.parse().map_err(|e| format!("{a}: {e}"))?,
            b.parse().map_err(|e| format!("{b}: {e}"))?,
        )),
        _ => Err("expected lo,hi".into()),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "halfplane-ma",
    version,
    about = "Solution families, transforms and a Newton solver for det D²u = (a+by)^α on the half-plane"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Main output file (stdout if omitted).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Secondary JSON report file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Format for field outputs.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EquationArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value = "dirichlet")]
    pub family: FamilyFlag,
    #[command(flatten)]
    pub eq: EquationArgs,
    #[arg(long = "A")]
    pub big_a: Option<f64>,
    #[arg(long = "B", default_value_t = 0.0)]
    pub big_b: f64,
    #[arg(long = "C", default_value_t = 0.0)]
    pub big_c: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub q: f64,
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
    /// x_min,x_max,y_min,y_max,nx,ny
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: GridSpec,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FamilyFlag {
    Dirichlet,
    Neumann,
    Entire,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a closed-form family on a grid.
    Family(FamilyArgs),
    /// Monge-Ampère residual of a sampled field.
    #[command(allow_negative_numbers = true)]
    Residual {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        eq: EquationArgs,
    },
    /// Partial Legendre transform of a field, with an involution summary.
    Plt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n_xi: usize,
        #[arg(long)]
        n_x: Option<usize>,
    },
    /// Pull a (ξ, η) field back to divergence-form coordinates, or check a residual.
    #[command(allow_negative_numbers = true)]
    Divform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, conflicts_with = "alpha")]
        a_w: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long)]
        n_x2: Option<usize>,
    },
    /// Compare a Kelvin-lifted Liouville profile with the profile (JSON config).
    KelvinCheck {
        #[arg(long)]
        config: PathBuf,
    },
    /// Moving-sphere inequality check (JSON config).
    MsCheck {
        #[arg(long)]
        config: PathBuf,
    },
    /// Newton solve with family boundary data (JSON config).
    Solve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Three-grid convergence study against the Dirichlet family.
    #[command(allow_negative_numbers = true)]
    Convergence {
        #[command(flatten)]
        eq: EquationArgs,
        #[arg(long = "A", default_value_t = 0.0)]
        big_a: f64,
        #[arg(long = "B", default_value_t = 0.0)]
        big_b: f64,
        #[arg(long = "C", default_value_t = 0.0)]
        big_c: f64,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        x_range: Option<(f64, f64)>,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        y_range: Option<(f64, f64)>,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// Boundary blow-up lower bound for alpha <= -2.
    #[command(allow_negative_numbers = true)]
    Sharpness {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        y: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
}

fn read_config(path: &PathBuf) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

impl Cli {
    /// Builds the [`RunConfig`] for this invocation.
    pub fn into_run_config(self) -> Result<RunConfig> {
        let (command, payload) = match self.command {
            Command::Family(f) => {
                let family = match f.family {
                    FamilyFlag::Dirichlet => "dirichlet",
                    FamilyFlag::Neumann => "neumann",
                    FamilyFlag::Entire => "entire",
                };
                let mut v = json!({
                    "family": family, "alpha": f.eq.alpha, "a": f.eq.a, "b": f.eq.b,
                    "B": f.big_b, "C": f.big_c, "p": f.p, "q": f.q, "r": f.r,
                    "grid": f.grid,
                });
                if let Some(a) = f.big_a {
                    v["A"] = json!(a);
                }
                (CommandKind::Family, v)
            }
            Command::Residual { input, eq } => (
                CommandKind::Residual,
                json!({"input": input, "alpha": eq.alpha, "a": eq.a, "b": eq.b}),
            ),
            Command::Plt { input, n_xi, n_x } => {
                let mut v = json!({"input": input, "n_xi": n_xi});
                if let Some(n) = n_x {
                    v["n_x"] = json!(n);
                }
                (CommandKind::Plt, v)
            }
            Command::Divform {
                input,
                a_w,
                alpha,
                a,
                b,
                n_x2,
            } => {
                let mut v = json!({"input": input, "a": a, "b": b});
                if let Some(w) = a_w {
                    v["a_w"] = json!(w);
                }
                if let Some(al) = alpha {
                    v["alpha"] = json!(al);
                }
                if let Some(n) = n_x2 {
                    v["n_x2"] = json!(n);
                }
                (CommandKind::Divform, v)
            }
            Command::KelvinCheck { config } => (CommandKind::KelvinCheck, read_config(&config)?),
            Command::MsCheck { config } => (CommandKind::MsCheck, read_config(&config)?),
            Command::Solve { config } => (CommandKind::Solve, read_config(&config)?),
            Command::Convergence {
                eq,
                big_a,
                big_b,
                big_c,
                x_range,
                y_range,
                sizes,
            } => {
                let mut v = json!({
                    "alpha": eq.alpha, "a": eq.a, "b": eq.b, "A": big_a, "B": big_b, "C": big_c,
                });
                if let Some(r) = x_range {
                    v["x_range"] = json!(r);
                }
                if let Some(r) = y_range {
                    v["y_range"] = json!(r);
                }
                if let Some(s) = sizes {
                    v["sizes"] = json!(s);
                }
                (CommandKind::Convergence, v)
            }
            Command::Sharpness { alpha, y, c } => (CommandKind::Sharpness, json!({"alpha": alpha, "y": y, "c": c})),
        };
        Ok(RunConfig {
            command,
            payload,
            output_path: self.output,
            report_path: self.report,
            format: self.format,
        })
    }
}

/// Writes the artifacts of a successful run to their destinations.
pub fn write_artifacts(cfg: &RunConfig, art: &Artifacts, stdout: &mut dyn std::io::Write) -> Result<()> {
    match &cfg.output_path {
        Some(p) => fs::write(p, &art.main)?,
        None => stdout.write_all(art.main.as_bytes())?,
    }
    if let Some(report) = &art.report {
        match &cfg.report_path {
            Some(p) => fs::write(p, report)?,
            None => stdout.write_all(report.as_bytes())?,
        }
    }
    Ok(())
}

/// Parses `args`, runs, writes artifacts and returns the exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let cfg = match cli.into_run_config() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(&mut *stderr, "error: {e}");
            return EXIT_VALIDATION;
        }
    };
    match run(&cfg) {
        Ok(art) => {
            if let Err(e) = write_artifacts(&cfg, &art, stdout) {
                let _ = writeln!(&mut *stderr, "error: {e}");
                return EXIT_VALIDATION;
            }
            match &art.failure {
                Some(msg) => {
                    let _ = writeln!(&mut *stderr, "error: {msg}");
                    EXIT_NUMERICAL
                }
                None => EXIT_OK,
            }
        }
        Err(e) => {
            let _ = writeln!(&mut *stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

